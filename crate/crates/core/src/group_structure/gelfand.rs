//! Multiplicities of `H`-fixed vectors, `dim V^H = ∫_H χ_V(h) dh`, and the
//! multiplicity-free test over a finite family of irreducibles.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::haar_numeric::{haar_sample, CMatrix, CompactMatrixGroup, SamplerState};
use crate::measure_mult::sharded_mean;

/// A finite-dimensional representation known through its character.
pub trait RepEvaluator: Sync {
    fn label(&self) -> String;
    fn dim(&self) -> usize;
    /// `χ(g)` for `g` in the defining matrices of the ambient group.
    fn character(&self, g: &CMatrix) -> Complex64;
}

/// Haar-distributed elements of a compact subgroup, as defining matrices.
pub trait HaarSampler: Sync {
    fn label(&self) -> String;
    fn sample(&self, state: SamplerState) -> CMatrix;
}

pub struct TrivialRep;

impl RepEvaluator for TrivialRep {
    fn label(&self) -> String {
        "trivial".into()
    }

    fn dim(&self) -> usize {
        1
    }

    fn character(&self, _g: &CMatrix) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
}

/// The `2ℓ+1`-dimensional irreducible of `SO(3)`.
pub struct So3Irrep {
    pub ell: u32,
}

impl RepEvaluator for So3Irrep {
    fn label(&self) -> String {
        format!("SO(3) l={}", self.ell)
    }

    fn dim(&self) -> usize {
        2 * self.ell as usize + 1
    }

    /// Rotation angle `θ` from `tr R = 1 + 2cos θ`; `χ = 1 + 2 Σ_k T_k(cos θ)`.
    fn character(&self, g: &CMatrix) -> Complex64 {
        let c = ((g.trace().re - 1.0) / 2.0).clamp(-1.0, 1.0);
        let (mut prev, mut cur) = (1.0, c);
        let mut chi = 1.0;
        for _ in 0..self.ell {
            chi += 2.0 * cur;
            (prev, cur) = (cur, 2.0 * c * cur - prev);
        }
        Complex64::new(chi, 0.0)
    }
}

/// Spin `two_j / 2` irreducible of `SU(2)`.
pub struct Su2Irrep {
    pub two_j: u32,
}

impl RepEvaluator for Su2Irrep {
    fn label(&self) -> String {
        if self.two_j.is_multiple_of(2) {
            format!("SU(2) spin {}", self.two_j / 2)
        } else {
            format!("SU(2) spin {}/2", self.two_j)
        }
    }

    fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// `U_{2j}(x/2)` with `x = tr g`, through the recurrence
    /// `χ_{k+1} = x χ_k - χ_{k-1}`.
    fn character(&self, g: &CMatrix) -> Complex64 {
        let x = g.trace().re;
        let (mut prev, mut cur) = (1.0, x);
        if self.two_j == 0 {
            return Complex64::new(1.0, 0.0);
        }
        for _ in 1..self.two_j {
            (prev, cur) = (cur, x * cur - prev);
        }
        Complex64::new(cur, 0.0)
    }
}

/// Rotations about the third axis inside `SO(3)`.
pub struct So2InSo3;

impl HaarSampler for So2InSo3 {
    fn label(&self) -> String {
        "SO(2) in SO(3)".into()
    }

    fn sample(&self, state: SamplerState) -> CMatrix {
        let t: f64 = state.rng().random::<f64>() * TAU;
        let (s, c) = t.sin_cos();
        let r = |x: f64| Complex64::new(x, 0.0);
        CMatrix::from_row_slice(3, 3, &[r(c), r(-s), r(0.0), r(s), r(c), r(0.0), r(0.0), r(0.0), r(1.0)])
    }
}

/// The centre `{±I}` of `SU(2)` with counting measure.
pub struct CenterOfSu2;

impl HaarSampler for CenterOfSu2 {
    fn label(&self) -> String {
        "{+I, -I} in SU(2)".into()
    }

    fn sample(&self, state: SamplerState) -> CMatrix {
        let sign = if state.rng().random::<bool>() { 1.0 } else { -1.0 };
        CMatrix::identity(2, 2) * Complex64::new(sign, 0.0)
    }
}

/// Haar measure of a built-in group.
pub struct GroupSampler(pub CompactMatrixGroup);

impl HaarSampler for GroupSampler {
    fn label(&self) -> String {
        format!("{:?}", self.0.kind())
    }

    fn sample(&self, state: SamplerState) -> CMatrix {
        haar_sample(&self.0, state).matrix
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityEstimate {
    pub estimate: f64,
    pub std_error: f64,
    /// `|Im ∫ χ|`, which vanishes for a genuine multiplicity.
    pub imaginary_residual: f64,
    pub samples: usize,
}

pub fn fixed_multiplicity(
    rep: &dyn RepEvaluator,
    h: &dyn HaarSampler,
    samples: usize,
    state: SamplerState,
) -> MultiplicityEstimate {
    let est = sharded_mean(samples, 1, |i, out| {
        out[0] = rep.character(&h.sample(state.advanced(i)));
    })[0];
    MultiplicityEstimate {
        estimate: est.value.re,
        std_error: est.std_error,
        imaginary_residual: est.value.im.abs(),
        samples,
    }
}

/// Monte Carlo estimate of `∫_G |χ|²`, which is 1 exactly for irreducibles.
pub fn character_norm(rep: &dyn RepEvaluator, g: &dyn HaarSampler, samples: usize, state: SamplerState) -> (f64, f64) {
    let est = sharded_mean(samples, 1, |i, out| {
        out[0] = Complex64::new(rep.character(&g.sample(state.advanced(i))).norm_sqr(), 0.0);
    })[0];
    (est.value.re, est.std_error)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GelfandEntry {
    pub representation: String,
    pub dim: usize,
    pub multiplicity: MultiplicityEstimate,
    /// `∫_G |χ|²` with its standard error, when a sampler for `G` is given.
    pub character_norm: Option<(f64, f64)>,
    /// The character norm is more than 4 standard errors (and 0.05) from 1.
    pub irreducibility_warning: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GelfandReport {
    pub subgroup: String,
    pub threshold: f64,
    pub samples: usize,
    pub entries: Vec<GelfandEntry>,
    /// Every estimate is at most `1 + threshold`.
    pub multiplicity_free: bool,
    pub violators: Vec<String>,
    pub note: String,
}

/// Multiplicity-free up to the tested family iff each `dim V^H ≤ 1 + threshold`.
pub fn gelfand_check(
    family: &[&dyn RepEvaluator],
    h: &dyn HaarSampler,
    samples: usize,
    threshold: f64,
    state: SamplerState,
    g: Option<&dyn HaarSampler>,
) -> GelfandReport {
    let mut entries = Vec::with_capacity(family.len());
    let mut violators = Vec::new();
    for (k, rep) in family.iter().enumerate() {
        // Each family member reads its own block of the stream.
        let block = state.advanced((k as u64) << 40);
        let multiplicity = fixed_multiplicity(*rep, h, samples, block);
        let character_norm = g.map(|g| character_norm(*rep, g, samples, block.advanced(1 << 39)));
        let irreducibility_warning =
            character_norm.is_some_and(|(norm, se)| (norm - 1.0).abs() > (4.0 * se).max(0.05));
        if multiplicity.estimate > 1.0 + threshold {
            violators.push(format!("{}: {:.4}", rep.label(), multiplicity.estimate));
        }
        entries.push(GelfandEntry {
            representation: rep.label(),
            dim: rep.dim(),
            multiplicity,
            character_norm,
            irreducibility_warning,
        });
    }
    GelfandReport {
        subgroup: h.label(),
        threshold,
        samples,
        multiplicity_free: violators.is_empty(),
        entries,
        violators,
        note: "multiplicity-free up to the tested family only".into(),
    }
}
