//! Orbit averages `μ(p) = ∫ p(gv) dν(g)` and the numerical tests built on
//! them: vanishing of invariant averages (nilcone), multiplicativity of `μ`
//! on monomials, and evaluation at the averaged point.
//!
//! Every estimate in one call is taken over the same sample stream, so the
//! three averages entering a defect term share their noise. Samples are
//! split into fixed shards whose accumulators merge in shard order, which
//! keeps results independent of the thread count.

mod polynomial;
mod stats;

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use polynomial::Polynomial;
pub use stats::Estimate;
pub(crate) use stats::sharded_mean;

use crate::error::{Error, Result};
use crate::haar_numeric::{act, haar_sample, CompactMatrixGroup, GroupKind, SamplerState};
use crate::torus_orbit::{exponents_up_to, torus_monomial_average, OrbitPoint};
use stats::Accumulator;

pub const CONSISTENT_THRESHOLD: f64 = 5e-3;
pub const REFUTED_THRESHOLD: f64 = 0.05;
pub const DEFAULT_MONOMIAL_CAP: usize = 5000;
pub const MIN_SAMPLES: usize = 100;
const SHARD: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimationConfig {
    pub samples: usize,
    pub state: SamplerState,
    pub monomial_cap: usize,
    /// Sample a torus group instead of using the closed-form average.
    pub force_monte_carlo: bool,
}

impl EstimationConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            state: SamplerState::new(seed),
            monomial_cap: DEFAULT_MONOMIAL_CAP,
            force_monte_carlo: false,
        }
    }

    fn closed_form(&self, group: &CompactMatrixGroup) -> bool {
        group.is_torus() && !self.force_monte_carlo
    }
}

/// An estimate attached to the monomial it averages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialEstimate {
    pub exponent: Vec<u32>,
    pub estimate: Estimate,
}

fn number_of_monomials(m: usize, max_degree: u32) -> u128 {
    // C(m + d, d) - 1
    let d = max_degree as u128;
    let mut acc: u128 = 1;
    for k in 1..=d {
        acc = acc * (m as u128 + k) / k;
    }
    acc - 1
}

fn monomials_capped(m: usize, max_degree: u32, cap: usize) -> Result<Vec<Vec<u32>>> {
    if number_of_monomials(m, max_degree) > cap as u128 {
        return Err(Error::CapExceeded { cap });
    }
    Ok(exponents_up_to(m, max_degree))
}

/// What to average in one pass over the sample stream.
struct Targets<'a> {
    monomials: &'a [Vec<u32>],
    polynomials: &'a [Polynomial],
}

fn check_inputs(group: &CompactMatrixGroup, v: &[Complex64], cfg: &EstimationConfig) -> Result<()> {
    if v.len() != group.rep_dim() {
        return Err(Error::DimensionMismatch {
            expected: group.rep_dim(),
            found: v.len(),
        });
    }
    if cfg.samples < MIN_SAMPLES && !cfg.closed_form(group) {
        return Err(Error::InvalidInput(format!("at least {MIN_SAMPLES} samples are required")));
    }
    Ok(())
}

fn estimate(group: &CompactMatrixGroup, v: &[Complex64], targets: &Targets, cfg: &EstimationConfig) -> Result<Vec<Estimate>> {
    check_inputs(group, v, cfg)?;
    for p in targets.polynomials {
        if p.num_vars() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                found: p.num_vars(),
            });
        }
    }
    if cfg.closed_form(group) {
        return closed_form(group, v, targets);
    }
    let max_deg = targets
        .monomials
        .iter()
        .map(|e| e.iter().sum::<u32>())
        .chain(targets.polynomials.iter().map(Polynomial::degree))
        .max()
        .unwrap_or(0) as usize;
    let k = targets.monomials.len() + targets.polynomials.len();
    let m = v.len();
    let shards = cfg.samples.div_ceil(SHARD);
    let partials: Vec<Result<Accumulator>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut acc = Accumulator::new(k);
            let mut pows = vec![Complex64::new(1.0, 0.0); m * (max_deg + 1)];
            let mut row = vec![Complex64::new(0.0, 0.0); k];
            let end = ((s + 1) * SHARD).min(cfg.samples);
            for i in s * SHARD..end {
                let g = haar_sample(group, cfg.state.advanced(i as u64));
                let w = act(group, &g, v)?;
                for j in 0..m {
                    for e in 1..=max_deg {
                        pows[j * (max_deg + 1) + e] = pows[j * (max_deg + 1) + e - 1] * w[j];
                    }
                }
                let mono = |e: &[u32]| -> Complex64 {
                    e.iter()
                        .enumerate()
                        .filter(|(_, &c)| c > 0)
                        .map(|(j, &c)| pows[j * (max_deg + 1) + c as usize])
                        .product()
                };
                for (slot, e) in row.iter_mut().zip(targets.monomials) {
                    *slot = mono(e);
                }
                for (slot, p) in row[targets.monomials.len()..].iter_mut().zip(targets.polynomials) {
                    *slot = p.terms().map(|(e, c)| c * mono(e)).sum();
                }
                acc.push(&row);
            }
            Ok(acc)
        })
        .collect();
    let mut total = Accumulator::new(k);
    for p in partials {
        total.merge(&p?);
    }
    Ok(total.finish())
}

fn closed_form(group: &CompactMatrixGroup, v: &[Complex64], targets: &Targets) -> Result<Vec<Estimate>> {
    let GroupKind::Torus(action) = group.kind() else {
        unreachable!("closed forms exist for tori only")
    };
    let point = OrbitPoint::Float(v.to_vec());
    let mut out = Vec::with_capacity(targets.monomials.len() + targets.polynomials.len());
    for e in targets.monomials {
        out.push(Estimate::exact(torus_monomial_average(action, &point, e)?));
    }
    for p in targets.polynomials {
        let mut value = Complex64::new(0.0, 0.0);
        for (e, c) in p.terms() {
            value += c * torus_monomial_average(action, &point, e)?;
        }
        out.push(Estimate::exact(value));
    }
    Ok(out)
}

/// `μ(p)` with its standard error.
pub fn orbit_average(group: &CompactMatrixGroup, v: &[Complex64], p: &Polynomial, cfg: &EstimationConfig) -> Result<Estimate> {
    let polys = [p.clone()];
    let targets = Targets {
        monomials: &[],
        polynomials: &polys,
    };
    Ok(estimate(group, v, &targets, cfg)?[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NilconeNumericVerdict {
    ConsistentWithNilcone,
    NotInNilcone,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeEstimate {
    pub polynomial: String,
    pub estimate: Estimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NilconeNumericReport {
    pub verdict: NilconeNumericVerdict,
    /// Monomial with the largest `|μ| / max(tolerance, 4·SE)`.
    pub worst_monomial: Option<MonomialEstimate>,
    pub probes: Vec<ProbeEstimate>,
    pub monomials_tested: usize,
    pub samples: usize,
    pub degree_bound: u32,
    pub approximate_haar: bool,
}

/// Averages every monomial with `1 ≤ |c| ≤ degree_bound`, plus the optional
/// `probes` (polynomials without constant term, e.g. candidate invariants).
/// `v` is consistent with the nilcone iff each `|μ| ≤ max(tolerance, 4·SE)`.
pub fn nilcone_test_numeric(
    group: &CompactMatrixGroup,
    v: &[Complex64],
    degree_bound: u32,
    tolerance: f64,
    probes: &[Polynomial],
    cfg: &EstimationConfig,
) -> Result<NilconeNumericReport> {
    if degree_bound == 0 {
        return Err(Error::InvalidInput("degree bound must be at least 1".into()));
    }
    let monomials = monomials_capped(v.len(), degree_bound, cfg.monomial_cap)?;
    let targets = Targets {
        monomials: &monomials,
        polynomials: probes,
    };
    let est = estimate(group, v, &targets, cfg)?;
    let ratio = |e: &Estimate| e.value.norm() / tolerance.max(4.0 * e.std_error);
    let mut worst: Option<(f64, usize)> = None;
    for (i, e) in est[..monomials.len()].iter().enumerate() {
        let r = ratio(e);
        if worst.is_none_or(|(w, _)| r > w) {
            worst = Some((r, i));
        }
    }
    let probes_out: Vec<ProbeEstimate> = probes
        .iter()
        .zip(&est[monomials.len()..])
        .map(|(p, e)| ProbeEstimate {
            polynomial: p.to_string(),
            estimate: *e,
        })
        .collect();
    let consistent = est.iter().all(|e| ratio(e) <= 1.0);
    Ok(NilconeNumericReport {
        verdict: if consistent {
            NilconeNumericVerdict::ConsistentWithNilcone
        } else {
            NilconeNumericVerdict::NotInNilcone
        },
        worst_monomial: worst.map(|(_, i)| MonomialEstimate {
            exponent: monomials[i].clone(),
            estimate: est[i],
        }),
        probes: probes_out,
        monomials_tested: monomials.len(),
        samples: cfg.samples,
        degree_bound,
        approximate_haar: !group.exact_haar(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectVerdict {
    /// Defect at most the consistency threshold: `μ` looks multiplicative.
    Multiplicative,
    /// Defect at least the refutation threshold.
    NotMultiplicative,
    /// In the gray zone; more samples are needed.
    Inconclusive,
}

impl DefectVerdict {
    pub fn from_defect(defect: f64) -> Self {
        if defect <= CONSISTENT_THRESHOLD {
            DefectVerdict::Multiplicative
        } else if defect >= REFUTED_THRESHOLD {
            DefectVerdict::NotMultiplicative
        } else {
            DefectVerdict::Inconclusive
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectPair {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub averages: Vec<MonomialEstimate>,
    pub defect: f64,
    /// First-order error bound for the defect at `defect_pair`.
    pub defect_std_error: f64,
    pub defect_pair: Option<DefectPair>,
    pub verdict: DefectVerdict,
    pub fixed_point: Vec<Estimate>,
    pub samples: usize,
    pub degree_bound: u32,
    pub exact: bool,
    pub approximate_haar: bool,
}

impl DefectReport {
    pub fn average(&self, exponent: &[u32]) -> Option<&Estimate> {
        self.averages
            .iter()
            .find(|m| m.exponent == exponent)
            .map(|m| &m.estimate)
    }

    pub fn fixed_point_values(&self) -> Vec<Complex64> {
        self.fixed_point.iter().map(|e| e.value).collect()
    }
}

/// `max |μ(z^{a+b}) - μ(z^a)μ(z^b)|` over `1 ≤ |a|, |b| ≤ degree_bound`, all
/// from one sample stream, with the averaged point `∫ gv dν`.
pub fn multiplicativity_defect(
    group: &CompactMatrixGroup,
    v: &[Complex64],
    degree_bound: u32,
    cfg: &EstimationConfig,
) -> Result<DefectReport> {
    if degree_bound == 0 {
        return Err(Error::InvalidInput("degree bound must be at least 1".into()));
    }
    let m = v.len();
    let monomials = monomials_capped(m, 2 * degree_bound, cfg.monomial_cap)?;
    let est = estimate(
        group,
        v,
        &Targets {
            monomials: &monomials,
            polynomials: &[],
        },
        cfg,
    )?;
    let index: HashMap<&[u32], usize> = monomials.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
    let low: Vec<usize> = (0..monomials.len())
        .filter(|&i| monomials[i].iter().sum::<u32>() <= degree_bound)
        .collect();
    let mut defect = 0.0;
    let mut defect_std_error = 0.0;
    let mut defect_pair = None;
    let mut sum = vec![0u32; m];
    for (x, &i) in low.iter().enumerate() {
        for &j in &low[x..] {
            for k in 0..m {
                sum[k] = monomials[i][k] + monomials[j][k];
            }
            let ab = &est[index[sum.as_slice()]];
            let (a, b) = (&est[i], &est[j]);
            let d = (ab.value - a.value * b.value).norm();
            if defect_pair.is_none() || d > defect {
                defect = d;
                defect_std_error = ab.std_error + a.value.norm() * b.std_error + b.value.norm() * a.std_error;
                defect_pair = Some(DefectPair {
                    a: monomials[i].clone(),
                    b: monomials[j].clone(),
                });
            }
        }
    }
    let fixed_point = (0..m)
        .map(|j| {
            let mut e = vec![0u32; m];
            e[j] = 1;
            est[index[e.as_slice()]]
        })
        .collect();
    let averages = low
        .iter()
        .map(|&i| MonomialEstimate {
            exponent: monomials[i].clone(),
            estimate: est[i],
        })
        .collect();
    Ok(DefectReport {
        averages,
        defect,
        defect_std_error,
        defect_pair,
        verdict: DefectVerdict::from_defect(defect),
        fixed_point,
        samples: cfg.samples,
        degree_bound,
        exact: cfg.closed_form(group),
        approximate_haar: !group.exact_haar(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub fixed_point: Vec<Estimate>,
    /// `max |μ(z^c) - v̂^c|` over `1 ≤ |c| ≤ degree_bound`.
    pub residual: f64,
    pub worst_monomial: Option<Vec<u32>>,
    pub samples: usize,
    pub degree_bound: u32,
}

/// Compare every `μ(z^c)` with the monomial evaluated at `v̂ = ∫ gv dν`.
pub fn fixed_point_consistency(
    group: &CompactMatrixGroup,
    v: &[Complex64],
    degree_bound: u32,
    cfg: &EstimationConfig,
) -> Result<FixedPointReport> {
    if degree_bound == 0 {
        return Err(Error::InvalidInput("degree bound must be at least 1".into()));
    }
    let m = v.len();
    let monomials = monomials_capped(m, degree_bound, cfg.monomial_cap)?;
    let est = estimate(
        group,
        v,
        &Targets {
            monomials: &monomials,
            polynomials: &[],
        },
        cfg,
    )?;
    let fixed_point: Vec<Estimate> = (0..m)
        .map(|j| {
            let pos = monomials
                .iter()
                .position(|e| e.iter().sum::<u32>() == 1 && e[j] == 1)
                .expect("all linear monomials are present");
            est[pos]
        })
        .collect();
    let vhat: Vec<Complex64> = fixed_point.iter().map(|e| e.value).collect();
    let mut residual = 0.0;
    let mut worst = None;
    for (e, mu) in monomials.iter().zip(&est) {
        let r = (mu.value - crate::torus_orbit::float_monomial(&vhat, e)).norm();
        if worst.is_none() || r > residual {
            residual = r;
            worst = Some(e.clone());
        }
    }
    Ok(FixedPointReport {
        fixed_point,
        residual,
        worst_monomial: worst,
        samples: cfg.samples,
        degree_bound,
    })
}
