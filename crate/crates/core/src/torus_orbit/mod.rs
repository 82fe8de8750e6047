//! Orbits of a torus `T = (S¹)^n` acting diagonally on `C^m`: coordinate
//! `z_j` transforms by the character `w_j`, so `t·z = (t^{w_1} z_1, ...)`.
//!
//! Everything here is exact. The spectrum of the orbit algebra is the
//! semigroup generated by the weights on `supp v`, and the complexified
//! subgroup `e^{iτξ}` scales `z_j` by `e^{-τ⟨w_j,ξ⟩}`.

mod hull;
mod point;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use hull::{hull_inner_sample, hull_outer_membership, HullRelation, HullTester, HullVerdict, HULL_TOLERANCE};
pub use point::{float_monomial, GaussianRational, OrbitPoint};

use crate::error::{Error, Result};
use crate::lattice_cone::{
    is_antisymmetric_semigroup, lineality_lattice, relint_dual_point,
    strict_positive_functional, zero_combination, LatticeBasis, Rational, WeightSemigroup, WeightVector,
};
use crate::serde_util;

/// Diagonal torus action: `weights[j]` is the character on coordinate `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusAction {
    n: usize,
    weights: Vec<WeightVector>,
}

impl TorusAction {
    pub fn new(n: usize, weights: Vec<WeightVector>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("torus dimension must be at least 1".into()));
        }
        if weights.is_empty() {
            return Err(Error::InvalidInput("a torus action needs at least one coordinate".into()));
        }
        if let Some(w) = weights.iter().find(|w| w.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.dim(),
            });
        }
        Ok(Self { n, weights })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        Self::new(n, rows.iter().map(|r| WeightVector::new(r.to_vec())).collect())
    }

    /// Torus dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Ambient complex dimension.
    pub fn m(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[WeightVector] {
        &self.weights
    }

    pub fn weight(&self, j: usize) -> &WeightVector {
        &self.weights[j]
    }

    /// `Σ c_j w_j`.
    pub fn weight_of(&self, exponent: &[u32]) -> Vec<i64> {
        let mut out = vec![0i64; self.n];
        for (w, &c) in self.weights.iter().zip(exponent) {
            for (o, &x) in out.iter_mut().zip(&w.0) {
                *o += c as i64 * x;
            }
        }
        out
    }

    fn check_point(&self, v: &OrbitPoint) -> Result<()> {
        if v.len() != self.m() {
            return Err(Error::DimensionMismatch {
                expected: self.m(),
                found: v.len(),
            });
        }
        Ok(())
    }

    fn check_nonzero(&self, v: &OrbitPoint) -> Result<Vec<usize>> {
        self.check_point(v)?;
        let support = v.support();
        if support.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        Ok(support)
    }
}

/// Generators of the orbit spectrum: the weights on `supp v`.
pub fn orbit_spectrum(action: &TorusAction, v: &OrbitPoint) -> Result<WeightSemigroup> {
    let support = action.check_nonzero(v)?;
    WeightSemigroup::new(action.n(), support.iter().map(|&j| action.weight(j).clone()))
}

/// Result of pushing `v` along `e^{iτξ}` as `τ → +∞`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Reachability {
    Limit { point: OrbitPoint },
    /// `⟨w_j, ξ⟩ < 0` on this support coordinate.
    Divergent { coordinate: usize },
}

impl Reachability {
    pub fn limit(&self) -> Option<&OrbitPoint> {
        match self {
            Reachability::Limit { point } => Some(point),
            Reachability::Divergent { .. } => None,
        }
    }
}

pub fn reachable_limit(action: &TorusAction, v: &OrbitPoint, xi: &[Rational]) -> Result<Reachability> {
    action.check_point(v)?;
    if xi.len() != action.n() {
        return Err(Error::DimensionMismatch {
            expected: action.n(),
            found: xi.len(),
        });
    }
    let mut vanish = Vec::new();
    for j in v.support() {
        let p = action.weight(j).pair(xi);
        if p.is_negative() {
            return Ok(Reachability::Divergent { coordinate: j });
        }
        if p.is_positive() {
            vanish.push(j);
        }
    }
    Ok(Reachability::Limit {
        point: v.with_zeroed(&vanish),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeOptions {
    /// Refuse points with a nonzero coordinate of weight zero.
    pub require_no_fixed_directions: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FibrationReport {
    pub spectrum_generators: WeightSemigroup,
    pub antisymmetric: bool,
    pub nilpotent: bool,
    pub lineality: LatticeBasis,
    #[serde(with = "serde_util::rational_vec")]
    pub xi_star: Vec<Rational>,
    pub v_tilde: OrbitPoint,
    /// Support coordinates whose weight pairs positively with `xi_star`.
    pub fiber_coords: Vec<usize>,
    /// Support coordinates whose weight lies in the lineality space.
    pub base_coords: Vec<usize>,
    pub hull_relations: Vec<HullRelation>,
}

pub fn analyze(action: &TorusAction, v: &OrbitPoint) -> Result<FibrationReport> {
    analyze_with(action, v, AnalyzeOptions::default())
}

pub fn analyze_with(action: &TorusAction, v: &OrbitPoint, options: AnalyzeOptions) -> Result<FibrationReport> {
    let support = action.check_nonzero(v)?;
    if options.require_no_fixed_directions {
        if let Some(&j) = support.iter().find(|&&j| action.weight(j).is_zero()) {
            return Err(Error::FixedDirection { coordinate: j });
        }
    }
    let spectrum = orbit_spectrum(action, v)?;
    let antisymmetric = is_antisymmetric_semigroup(&spectrum);
    let nilpotent = strict_positive_functional(&spectrum).is_some();
    let lineality = lineality_lattice(&spectrum)?;
    let xi_star = relint_dual_point(&spectrum)?;
    let v_tilde = match reachable_limit(action, v, &xi_star)? {
        Reachability::Limit { point } => point,
        Reachability::Divergent { coordinate } => {
            return Err(Error::Solver(format!(
                "relative-interior functional is negative on coordinate {coordinate}"
            )))
        }
    };
    let (mut base_coords, mut fiber_coords) = (Vec::new(), Vec::new());
    for &j in &support {
        if action.weight(j).pair(&xi_star).is_zero() {
            base_coords.push(j);
        } else {
            fiber_coords.push(j);
        }
    }
    let hull_relations = hull::relations(action, &support)?;
    Ok(FibrationReport {
        spectrum_generators: spectrum,
        antisymmetric,
        nilpotent,
        lineality,
        xi_star,
        v_tilde,
        fiber_coords,
        base_coords,
        hull_relations,
    })
}

/// Nilcone verdict with a certificate for either answer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NilconeVerdict {
    pub member: bool,
    /// `⟨w_j, ξ⟩ ≥ 1` on the support: `e^{iτξ}v → 0`.
    #[serde(with = "serde_util::opt_rational_vec")]
    pub destabilizer: Option<Vec<Rational>>,
    /// Exponent `c ≥ 0` of an invariant monomial with `v^c ≠ 0`.
    pub invariant_monomial: Option<Vec<u32>>,
}

pub fn nilcone_member_exact(action: &TorusAction, v: &OrbitPoint) -> Result<NilconeVerdict> {
    let support = action.check_nonzero(v)?;
    let spectrum = orbit_spectrum(action, v)?;
    if let Some(xi) = strict_positive_functional(&spectrum) {
        return Ok(NilconeVerdict {
            member: true,
            destabilizer: Some(xi),
            invariant_monomial: None,
        });
    }
    let support_weights: Vec<WeightVector> = support.iter().map(|&j| action.weight(j).clone()).collect();
    let combination = zero_combination(action.n(), &support_weights)
        .ok_or_else(|| Error::Solver("no destabilizer and no invariant monomial".into()))?;
    let mut exponent = vec![0u32; action.m()];
    for (&j, c) in support.iter().zip(&combination) {
        exponent[j] = big_to_u32(c)?;
    }
    Ok(NilconeVerdict {
        member: false,
        destabilizer: None,
        invariant_monomial: Some(exponent),
    })
}

pub(crate) fn big_to_u32(x: &BigInt) -> Result<u32> {
    x.to_u32().ok_or(Error::Overflow)
}

/// Image of a monomial under the fiber average `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "image", rename_all = "snake_case")]
pub enum AlphaImage {
    Monomial { exponent: Vec<u32> },
    Zero,
}

impl AlphaImage {
    pub fn is_zero(&self) -> bool {
        matches!(self, AlphaImage::Zero)
    }
}

/// `α(z^c)`: the fiber subtorus acts on `z^c` through the `xi_star`-pairing of
/// its weight, so the average survives exactly when `c` lives on
/// `base_coords`. Monomials touching coordinates outside `supp v` vanish on
/// the hull and map to zero.
pub fn alpha_on_monomial(report: &FibrationReport, exponent: &[u32]) -> AlphaImage {
    let on_base = exponent
        .iter()
        .enumerate()
        .all(|(j, &c)| c == 0 || report.base_coords.contains(&j));
    if on_base {
        AlphaImage::Monomial {
            exponent: exponent.to_vec(),
        }
    } else {
        AlphaImage::Zero
    }
}

/// Whether `z^c` is `T`-invariant and nonvanishing on the orbit of `v`,
/// i.e. whether its orbit average is `v^c` rather than 0.
pub fn monomial_survives_average(action: &TorusAction, v: &OrbitPoint, exponent: &[u32]) -> bool {
    exponent
        .iter()
        .enumerate()
        .all(|(j, &c)| c == 0 || !v.coordinate_is_zero(j))
        && action.weight_of(exponent).iter().all(|&x| x == 0)
}

/// Exact Haar average of `z^c` over `T·v`.
pub fn torus_monomial_average_exact(action: &TorusAction, v: &OrbitPoint, exponent: &[u32]) -> Result<GaussianRational> {
    action.check_point(v)?;
    let Some(value) = v.exact_monomial(exponent) else {
        return Err(Error::InvalidInput("exact average needs an exact point".into()));
    };
    Ok(if monomial_survives_average(action, v, exponent) {
        value
    } else {
        GaussianRational::zero()
    })
}

/// Closed-form Haar average of `z^c` over `T·v` in floating point.
pub fn torus_monomial_average(action: &TorusAction, v: &OrbitPoint, exponent: &[u32]) -> Result<num_complex::Complex64> {
    action.check_point(v)?;
    Ok(if monomial_survives_average(action, v, exponent) {
        v.monomial(exponent)
    } else {
        num_complex::Complex64::zero()
    })
}

/// All exponent vectors of length `m` with total degree `1..=max_degree`.
pub fn exponents_up_to(m: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; m];
    fn rec(j: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j == current.len() {
            if current.iter().any(|&c| c > 0) {
                out.push(current.clone());
            }
            return;
        }
        for e in 0..=left {
            current[j] = e;
            rec(j + 1, left - e, current, out);
        }
        current[j] = 0;
    }
    rec(0, max_degree, &mut current, &mut out);
    out
}
