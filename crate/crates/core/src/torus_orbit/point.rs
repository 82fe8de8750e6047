use std::fmt;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice_cone::Rational;
use crate::serde_util;

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussianRational {
    #[serde(with = "serde_util::rational")]
    pub re: Rational,
    #[serde(with = "serde_util::rational")]
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self {
            re,
            im: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.re, self.im)
    }
}

/// A point of the ambient coordinate space, either floating or exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "coords", rename_all = "snake_case")]
pub enum OrbitPoint {
    Float(Vec<Complex64>),
    Exact(Vec<GaussianRational>),
}

impl OrbitPoint {
    pub fn real(coords: &[f64]) -> Self {
        OrbitPoint::Float(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn exact_integers(coords: &[i64]) -> Self {
        OrbitPoint::Exact(
            coords
                .iter()
                .map(|&x| GaussianRational::real(Rational::from_integer(x.into())))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        match self {
            OrbitPoint::Float(v) => v.len(),
            OrbitPoint::Exact(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, OrbitPoint::Exact(_))
    }

    pub fn coordinate_is_zero(&self, j: usize) -> bool {
        match self {
            OrbitPoint::Float(v) => v[j] == Complex64::zero(),
            OrbitPoint::Exact(v) => v[j].is_zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.len()).all(|j| self.coordinate_is_zero(j))
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| !self.coordinate_is_zero(j)).collect()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        match self {
            OrbitPoint::Float(v) => v.clone(),
            OrbitPoint::Exact(v) => v.iter().map(GaussianRational::to_complex).collect(),
        }
    }

    /// The same point with the listed coordinates set to zero.
    pub fn with_zeroed(&self, coords: &[usize]) -> Self {
        let mut out = self.clone();
        for &j in coords {
            match &mut out {
                OrbitPoint::Float(v) => v[j] = Complex64::zero(),
                OrbitPoint::Exact(v) => v[j] = GaussianRational::zero(),
            }
        }
        out
    }

    /// `z^c` computed in floating point.
    pub fn monomial(&self, exponent: &[u32]) -> Complex64 {
        match self {
            OrbitPoint::Float(v) => float_monomial(v, exponent),
            OrbitPoint::Exact(_) => self.exact_monomial(exponent).map_or(Complex64::zero(), |g| g.to_complex()),
        }
    }

    /// `z^c` in exact arithmetic, when the point is exact.
    pub fn exact_monomial(&self, exponent: &[u32]) -> Option<GaussianRational> {
        match self {
            OrbitPoint::Float(_) => None,
            OrbitPoint::Exact(v) => Some(
                v.iter()
                    .zip(exponent)
                    .filter(|(_, &e)| e > 0)
                    .fold(GaussianRational::one(), |acc, (z, &e)| acc.mul(&z.pow(e))),
            ),
        }
    }
}

pub fn float_monomial(z: &[Complex64], exponent: &[u32]) -> Complex64 {
    z.iter()
        .zip(exponent)
        .filter(|(_, &e)| e > 0)
        .fold(Complex64::one(), |acc, (x, &e)| acc * x.powu(e))
}
