//! Norm minimisation along the complexified orbit `G^C v`.
//!
//! For `X` in the compact Lie algebra, `e^{itX}` is a non-unitary
//! one-parameter subgroup and `t ↦ ‖e^{itX}w‖²` is convex with derivative
//! `2 Re(i⟨Xw, w⟩)` at zero. The flow steps only in these directions, so
//! holomorphic invariants stay constant up to rounding.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::haar_numeric::{exp_skew, CMatrix, CompactMatrixGroup};
use crate::measure_mult::Polynomial;

pub const DEFAULT_ZERO_TOL: f64 = 1e-6;
pub const DEFAULT_GRAD_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 10_000;

fn norm_sq(w: &[Complex64]) -> f64 {
    w.iter().map(Complex64::norm_sqr).sum()
}

fn apply(m: &CMatrix, w: &[Complex64]) -> Vec<Complex64> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)] * w[c]).sum())
        .collect()
}

/// `⟨a, b⟩ = Σ a_j conj(b_j)`.
fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// `d/dt|₀ ‖e^{itX_k}w‖²` for each basis element acting on `w`.
pub fn moment_gradient_with_basis(basis: &[CMatrix], w: &[Complex64]) -> Result<Vec<f64>> {
    basis
        .iter()
        .map(|x| {
            if x.nrows() != w.len() || x.ncols() != w.len() {
                return Err(Error::DimensionMismatch {
                    expected: x.nrows(),
                    found: w.len(),
                });
            }
            let xw = apply(x, w);
            Ok(2.0 * (Complex64::i() * inner(&xw, w)).re)
        })
        .collect()
}

/// Gradient over the group's Lie algebra basis in its representation.
/// For a torus, component `k` is `-2 Σ_j w_jk |z_j|²`.
pub fn moment_gradient(group: &CompactMatrixGroup, w: &[Complex64]) -> Result<Vec<f64>> {
    moment_gradient_with_basis(&group.rep_lie_basis(), w)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Backtracking {
    pub armijo: f64,
    pub shrink: f64,
    pub initial_step: f64,
    /// Steps below this count as underflow.
    pub min_step: f64,
}

impl Default for Backtracking {
    fn default() -> Self {
        Self {
            armijo: 1e-4,
            shrink: 0.5,
            initial_step: 1.0,
            min_step: 1e-14,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedInvariant {
    pub label: String,
    pub polynomial: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowOptions {
    pub step_rule: Backtracking,
    pub max_iter: usize,
    pub zero_tol: f64,
    pub grad_tol: f64,
    /// Holomorphic invariants whose drift is tracked along the trajectory.
    pub invariants: Vec<NamedInvariant>,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            step_rule: Backtracking::default(),
            max_iter: DEFAULT_MAX_ITER,
            zero_tol: DEFAULT_ZERO_TOL,
            grad_tol: DEFAULT_GRAD_TOL,
            invariants: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub w: Vec<Complex64>,
    pub iteration: usize,
    pub norm_sq: f64,
    pub gradient_norm: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowOutcome {
    /// `‖w‖² ≤ zero_tol`: evidence that 0 lies in the closure of `G^C v`.
    ConvergedToZero,
    /// Gradient below `grad_tol` (or step underflow) away from zero:
    /// evidence for a minimal vector, so `v` is outside the nilcone.
    Stalled,
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantResidual {
    pub label: String,
    pub initial_value: Complex64,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowReport {
    pub initial_norm_sq: f64,
    pub final_norm_sq: f64,
    pub iterations: usize,
    pub outcome: FlowOutcome,
    pub converged_to_zero: bool,
    pub stalled: bool,
    pub iteration_limit: bool,
    pub final_gradient_norm: f64,
    pub final_point: Vec<Complex64>,
    pub invariant_residuals: Vec<InvariantResidual>,
    /// Set when a line search underflowed.
    pub diagnostic: Option<String>,
    /// Whether every accepted step decreased `‖w‖²`.
    pub monotone: bool,
}

impl FlowReport {
    pub fn is_conclusive(&self) -> bool {
        self.outcome != FlowOutcome::IterationLimit
    }
}

pub fn flow_minimize(group: &CompactMatrixGroup, v: &[Complex64], options: &FlowOptions) -> Result<FlowReport> {
    flow_minimize_with_basis(&group.rep_lie_basis(), v, options)
}

/// Backtracking descent `w ← exp(i t X̂) w` along the unit direction
/// `X̂ = -Σ g_k X_k / |g|`.
pub fn flow_minimize_with_basis(basis: &[CMatrix], v: &[Complex64], options: &FlowOptions) -> Result<FlowReport> {
    if options.max_iter == 0 {
        return Err(Error::InvalidInput("max_iter must be at least 1".into()));
    }
    for inv in &options.invariants {
        if inv.polynomial.num_vars() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                found: inv.polynomial.num_vars(),
            });
        }
    }
    let rule = options.step_rule;
    let initial_values: Vec<Complex64> = options.invariants.iter().map(|p| p.polynomial.eval(v)).collect();
    let mut residuals = vec![0.0f64; options.invariants.len()];
    let mut state = FlowState {
        w: v.to_vec(),
        iteration: 0,
        norm_sq: norm_sq(v),
        gradient_norm: 0.0,
    };
    let initial_norm_sq = state.norm_sq;
    let mut diagnostic = None;
    let mut monotone = true;
    let n = v.len();
    let outcome = loop {
        let g = moment_gradient_with_basis(basis, &state.w)?;
        state.gradient_norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if state.norm_sq <= options.zero_tol {
            break FlowOutcome::ConvergedToZero;
        }
        if state.gradient_norm <= options.grad_tol {
            break FlowOutcome::Stalled;
        }
        if state.iteration >= options.max_iter {
            break FlowOutcome::IterationLimit;
        }
        let mut direction = CMatrix::zeros(n, n);
        for (x, gk) in basis.iter().zip(&g) {
            direction -= x * Complex64::new(gk / state.gradient_norm, 0.0);
        }
        // i·X̂ is Hermitian
        let hermitian = direction * Complex64::i();
        let slope = -state.gradient_norm;
        let mut t = rule.initial_step;
        let accepted = loop {
            let candidate = apply(&exp_skew(&hermitian, t), &state.w);
            let f = norm_sq(&candidate);
            if f < state.norm_sq && f <= state.norm_sq + rule.armijo * t * slope {
                break Some((candidate, f));
            }
            t *= rule.shrink;
            if t < rule.min_step {
                break None;
            }
        };
        let Some((w, f)) = accepted else {
            diagnostic = Some(format!(
                "line search underflow at iteration {} (gradient norm {:.3e})",
                state.iteration, state.gradient_norm
            ));
            break FlowOutcome::Stalled;
        };
        monotone &= f < state.norm_sq;
        state.w = w;
        // recomputed from the new point, never accumulated
        state.norm_sq = norm_sq(&state.w);
        state.iteration += 1;
        for ((r, inv), p0) in residuals.iter_mut().zip(&options.invariants).zip(&initial_values) {
            *r = r.max((inv.polynomial.eval(&state.w) - p0).norm());
        }
    };
    Ok(FlowReport {
        initial_norm_sq,
        final_norm_sq: state.norm_sq,
        iterations: state.iteration,
        outcome,
        converged_to_zero: outcome == FlowOutcome::ConvergedToZero,
        stalled: outcome == FlowOutcome::Stalled,
        iteration_limit: outcome == FlowOutcome::IterationLimit,
        final_gradient_norm: state.gradient_norm,
        final_point: state.w,
        invariant_residuals: options
            .invariants
            .iter()
            .zip(initial_values)
            .zip(residuals)
            .map(|((inv, initial_value), max_residual)| InvariantResidual {
                label: inv.label.clone(),
                initial_value,
                max_residual,
            })
            .collect(),
        diagnostic,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar_numeric::{GroupKind, Representation};
    use crate::torus_orbit::TorusAction;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn torus(rows: &[&[i64]]) -> CompactMatrixGroup {
        CompactMatrixGroup::torus(TorusAction::from_rows(rows).unwrap())
    }

    #[test]
    fn gradient_examples() {
        let g = torus(&[&[1], &[2]]);
        assert_eq!(moment_gradient(&g, &[c(0.0, 0.0); 2]).unwrap(), vec![0.0]);
        let grad = moment_gradient(&g, &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((grad[0] + 6.0).abs() < 1e-14);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let g = CompactMatrixGroup::new(GroupKind::SpecialUnitary(2), Representation::Adjoint).unwrap();
        let w = [c(0.3, 1.0), c(1.0, -0.2), c(0.5, 0.1), c(-0.7, -1.0)];
        let grad = moment_gradient(&g, &w).unwrap();
        let h = 1e-6;
        for (x, gk) in g.rep_lie_basis().iter().zip(&grad) {
            let ix = x * Complex64::i();
            let f = |t: f64| norm_sq(&apply(&exp_skew(&ix, t), &w));
            let fd = (f(h) - f(-h)) / (2.0 * h);
            assert!((fd - gk).abs() <= 1e-6 * gk.abs().max(1.0), "{fd} vs {gk}");
        }
    }

    #[test]
    fn nilpotent_torus_flows_to_zero() {
        let rep = flow_minimize(&torus(&[&[1], &[2]]), &[c(1.0, 0.0), c(1.0, 0.0)], &FlowOptions::default()).unwrap();
        assert!(rep.converged_to_zero, "{rep:?}");
        assert!(rep.final_norm_sq <= 1e-6 && rep.iterations <= 10_000);
        assert!(rep.monotone);
    }

    #[test]
    fn opposite_torus_is_already_minimal() {
        let mut opts = FlowOptions::default();
        opts.invariants.push(NamedInvariant {
            label: "z1*z2".into(),
            polynomial: Polynomial::monomial(vec![1, 1]),
        });
        let rep = flow_minimize(&torus(&[&[1], &[-1]]), &[c(1.0, 0.0), c(1.0, 0.0)], &opts).unwrap();
        assert!(rep.stalled);
        assert!(rep.final_norm_sq >= 2.0 - 1e-12);
        assert!(rep.invariant_residuals[0].max_residual <= 1e-12);
    }

    #[test]
    fn unbalanced_opposite_torus_rebalances() {
        let mut opts = FlowOptions::default();
        opts.invariants.push(NamedInvariant {
            label: "z1*z2".into(),
            polynomial: Polynomial::monomial(vec![1, 1]),
        });
        let rep = flow_minimize(&torus(&[&[1], &[-1]]), &[c(4.0, 0.0), c(0.25, 0.0)], &opts).unwrap();
        assert!(rep.stalled);
        assert!((rep.final_norm_sq - 2.0).abs() < 1e-6);
        assert!(rep.invariant_residuals[0].max_residual <= 1e-10);
    }

    #[test]
    fn su2_adjoint_counterexample() {
        let g = CompactMatrixGroup::new(GroupKind::SpecialUnitary(2), Representation::Adjoint).unwrap();
        let v = [c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)];
        let opts = FlowOptions {
            invariants: vec![NamedInvariant {
                label: "tr(z^2)".into(),
                polynomial: Polynomial::trace_of_square(2),
            }],
            ..FlowOptions::default()
        };
        let rep = flow_minimize(&g, &v, &opts).unwrap();
        assert!(rep.stalled, "{rep:?}");
        assert!(rep.final_norm_sq >= 2.0 - 1e-6);
        assert!(rep.final_norm_sq < rep.initial_norm_sq);
        assert!(rep.invariant_residuals[0].max_residual <= 1e-6);
    }

    #[test]
    fn zero_iterations_rejected() {
        let opts = FlowOptions {
            max_iter: 0,
            ..FlowOptions::default()
        };
        assert!(flow_minimize(&torus(&[&[1]]), &[c(1.0, 0.0)], &opts).is_err());
    }
}
