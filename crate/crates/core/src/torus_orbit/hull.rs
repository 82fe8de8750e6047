//! Outer and inner approximations of the polynomial hull of a torus orbit.
//!
//! The outer test checks necessary conditions only: coordinate moduli are
//! bounded by those of `v`, and every binomial `z^a v^b - z^b v^a` from a
//! basis of weight relations vanishes. The inner sampler produces points on
//! analytic discs `e^{i(θ + iτξ)}v`, which lie in the hull.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::point::{float_monomial, GaussianRational, OrbitPoint};
use super::{big_to_u32, TorusAction};
use crate::error::{Error, Result};
use crate::lattice_cone::{integer_kernel, WeightVector};

/// Absolute tolerance for floating comparisons, scaled up by the size of
/// the compared quantities when they exceed 1.
pub const HULL_TOLERANCE: f64 = 1e-10;

/// `z^a = z^b` on the orbit as m-length exponent vectors, from a kernel
/// vector `a - b` of the weight map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullRelation {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl std::fmt::Display for HullRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} = {}", monomial_label(&self.a), monomial_label(&self.b))
    }
}

fn monomial_label(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(j, &c)| if c == 1 { format!("z{}", j + 1) } else { format!("z{}^{c}", j + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub(super) fn relations(action: &TorusAction, support: &[usize]) -> Result<Vec<HullRelation>> {
    let weights: Vec<WeightVector> = support.iter().map(|&j| action.weight(j).clone()).collect();
    let kernel = integer_kernel(&weights)?;
    kernel
        .vectors()
        .iter()
        .map(|k| {
            let mut a = vec![0u32; action.m()];
            let mut b = vec![0u32; action.m()];
            for (&j, &c) in support.iter().zip(k.entries()) {
                let mag = big_to_u32(&c.unsigned_abs().into())?;
                if c > 0 {
                    a[j] = mag;
                } else {
                    b[j] = mag;
                }
            }
            Ok(HullRelation { a, b })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HullVerdict {
    pub point: OrbitPoint,
    pub outer_member: bool,
    pub violated_constraint: Option<String>,
}

impl HullVerdict {
    fn pass(point: &OrbitPoint) -> Self {
        Self {
            point: point.clone(),
            outer_member: true,
            violated_constraint: None,
        }
    }

    fn fail(point: &OrbitPoint, why: String) -> Self {
        Self {
            point: point.clone(),
            outer_member: false,
            violated_constraint: Some(why),
        }
    }
}

/// Outer hull test for a fixed orbit, with relations computed once.
pub struct HullTester {
    v: OrbitPoint,
    relations: Vec<HullRelation>,
    tolerance: f64,
}

impl HullTester {
    pub fn new(action: &TorusAction, v: &OrbitPoint) -> Result<Self> {
        let support = action.check_nonzero(v)?;
        Ok(Self {
            v: v.clone(),
            relations: relations(action, &support)?,
            tolerance: HULL_TOLERANCE,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn relations(&self) -> &[HullRelation] {
        &self.relations
    }

    pub fn test(&self, z: &OrbitPoint) -> Result<HullVerdict> {
        if z.len() != self.v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.v.len(),
                found: z.len(),
            });
        }
        match (&self.v, z) {
            (OrbitPoint::Exact(v), OrbitPoint::Exact(zz)) => Ok(self.test_exact(v, zz, z)),
            _ => Ok(self.test_float(&self.v.to_complex(), &z.to_complex(), z)),
        }
    }

    fn test_exact(&self, v: &[GaussianRational], z: &[GaussianRational], point: &OrbitPoint) -> HullVerdict {
        for (j, (zj, vj)) in z.iter().zip(v).enumerate() {
            if zj.norm_sqr() > vj.norm_sqr() {
                return HullVerdict::fail(point, format!("|z{}| > |v{}|", j + 1, j + 1));
            }
        }
        let zp = OrbitPoint::Exact(z.to_vec());
        let vp = OrbitPoint::Exact(v.to_vec());
        for rel in &self.relations {
            let lhs = zp.exact_monomial(&rel.a).unwrap().mul(&vp.exact_monomial(&rel.b).unwrap());
            let rhs = zp.exact_monomial(&rel.b).unwrap().mul(&vp.exact_monomial(&rel.a).unwrap());
            if lhs != rhs {
                return HullVerdict::fail(point, format!("relation {rel} violated"));
            }
        }
        HullVerdict::pass(point)
    }

    fn test_float(&self, v: &[Complex64], z: &[Complex64], point: &OrbitPoint) -> HullVerdict {
        let tol = self.tolerance;
        for (j, (zj, vj)) in z.iter().zip(v).enumerate() {
            if zj.norm() > vj.norm() + tol * vj.norm().max(1.0) {
                return HullVerdict::fail(point, format!("|z{}| > |v{}|", j + 1, j + 1));
            }
        }
        for rel in &self.relations {
            let lhs = float_monomial(z, &rel.a) * float_monomial(v, &rel.b);
            let rhs = float_monomial(z, &rel.b) * float_monomial(v, &rel.a);
            let scale = lhs.norm().max(rhs.norm()).max(1.0);
            if (lhs - rhs).norm() > tol * scale {
                return HullVerdict::fail(point, format!("relation {rel} violated"));
            }
        }
        HullVerdict::pass(point)
    }
}

pub fn hull_outer_membership(action: &TorusAction, v: &OrbitPoint, z: &OrbitPoint) -> Result<HullVerdict> {
    HullTester::new(action, v)?.test(z)
}

/// `z_j = v_j·exp(i⟨w_j,θ⟩ - ⟨w_j,ξ⟩)`; requires `⟨w_j,ξ⟩ ≥ 0` on `supp v`.
pub fn hull_inner_sample(action: &TorusAction, v: &OrbitPoint, theta: &[f64], xi: &[f64]) -> Result<OrbitPoint> {
    action.check_nonzero(v)?;
    for x in [theta, xi] {
        if x.len() != action.n() {
            return Err(Error::DimensionMismatch {
                expected: action.n(),
                found: x.len(),
            });
        }
    }
    let coords = v.to_complex();
    let mut out = Vec::with_capacity(coords.len());
    for (j, vj) in coords.iter().enumerate() {
        if v.coordinate_is_zero(j) {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let w = action.weight(j);
        let damp = w.pair_f64(xi);
        if damp < -1e-12 {
            return Err(Error::Domain(format!(
                "xi pairs negatively ({damp}) with the weight of coordinate {}",
                j + 1
            )));
        }
        let phase = w.pair_f64(theta);
        out.push(vj * Complex64::from_polar((-damp.max(0.0)).exp(), phase));
    }
    Ok(OrbitPoint::Float(out))
}
