use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Holomorphic polynomial in `m` variables: exponent vector → coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    m: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl Polynomial {
    pub fn zero(m: usize) -> Self {
        Self {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, c: Complex64) -> Self {
        let mut p = Self::zero(m);
        p.add_term(vec![0; m], c).expect("length matches");
        p
    }

    pub fn monomial(exponent: Vec<u32>) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, Complex64::new(1.0, 0.0)).expect("length matches");
        p
    }

    pub fn add_term(&mut self, exponent: Vec<u32>, c: Complex64) -> Result<&mut Self> {
        if exponent.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: exponent.len(),
            });
        }
        let entry = self.terms.entry(exponent).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        Ok(self)
    }

    /// `tr(Z²)` on row-major flattened `n × n` matrices.
    pub fn trace_of_square(n: usize) -> Self {
        let mut p = Self::zero(n * n);
        for a in 0..n {
            for b in 0..n {
                let mut e = vec![0u32; n * n];
                e[a * n + b] += 1;
                e[b * n + a] += 1;
                p.add_term(e, Complex64::new(1.0, 0.0)).expect("length matches");
            }
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex64)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c * crate::torus_orbit::float_monomial(z, e))
            .sum()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(j, &k)| if k == 1 { format!("z{}", j + 1) } else { format!("z{}^{k}", j + 1) })
                    .collect();
                format!("({c})*{}", if vars.is_empty() { "1".into() } else { vars.join("*") })
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
