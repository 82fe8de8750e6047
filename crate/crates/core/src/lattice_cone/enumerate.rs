//! Breadth-first enumeration of a finitely generated semigroup inside a
//! sup-norm box. Used as a brute-force oracle for the cone computations.

use std::collections::HashSet;

use super::WeightVector;
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// Boxes up to this many lattice points are tracked with a dense bitmap.
const DENSE_LIMIT: u128 = 1 << 30;

enum Visited {
    Dense { bits: Vec<u64>, side: i64 },
    Sparse(HashSet<Vec<i64>>),
}

impl Visited {
    fn new(dim: usize, bound: i64) -> Self {
        let side = 2 * bound + 1;
        let volume = (side as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
        if volume <= DENSE_LIMIT {
            Visited::Dense {
                bits: vec![0; (volume as usize).div_ceil(64)],
                side,
            }
        } else {
            Visited::Sparse(HashSet::new())
        }
    }

    fn index(side: i64, bound: i64, x: &[i64]) -> usize {
        x.iter()
            .rev()
            .fold(0i64, |acc, &c| acc * side + (c + bound)) as usize
    }

    /// Returns `true` when `x` was not yet present.
    fn insert(&mut self, bound: i64, x: &[i64]) -> bool {
        match self {
            Visited::Dense { bits, side } => {
                let i = Self::index(*side, bound, x);
                let (word, bit) = (i / 64, i % 64);
                let fresh = bits[word] & (1 << bit) == 0;
                bits[word] |= 1 << bit;
                fresh
            }
            Visited::Sparse(set) => set.insert(x.to_vec()),
        }
    }

    fn contains(&self, bound: i64, x: &[i64]) -> bool {
        match self {
            Visited::Dense { bits, side } => {
                let i = Self::index(*side, bound, x);
                bits[i / 64] & (1 << (i % 64)) != 0
            }
            Visited::Sparse(set) => set.contains(x),
        }
    }
}

/// The elements of a semigroup with sup-norm at most `bound`, reached by
/// additions that never leave the box.
pub struct SemigroupBall {
    dim: usize,
    bound: i64,
    visited: Visited,
    /// Flat list of elements in discovery order, `dim` entries each.
    elements: Vec<i64>,
}

impl SemigroupBall {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            return 1;
        }
        self.elements.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim
            && x.iter().all(|c| c.abs() <= self.bound)
            && self.visited.contains(self.bound, x)
    }

    /// Elements in lexicographic order.
    pub fn elements(&self) -> Vec<WeightVector> {
        let mut out: Vec<WeightVector> = self
            .elements
            .chunks(self.dim.max(1))
            .map(|c| WeightVector::new(c.to_vec()))
            .collect();
        out.sort();
        out
    }

    /// A nonzero `s` such that `-s` is also in the ball, if one exists.
    pub fn opposite_pair(&self) -> Option<WeightVector> {
        let mut neg = vec![0i64; self.dim];
        for x in self.elements.chunks(self.dim.max(1)) {
            if x.iter().all(|&c| c == 0) {
                continue;
            }
            for (n, &c) in neg.iter_mut().zip(x) {
                *n = -c;
            }
            if self.visited.contains(self.bound, &neg) {
                return Some(WeightVector::new(x.to_vec()));
            }
        }
        None
    }
}

/// All semigroup elements of sup-norm at most `bound` (the identity 0
/// included), capped at `cap` elements.
pub fn semigroup_enumerate(
    dim: usize,
    generators: &[WeightVector],
    bound: i64,
    cap: usize,
) -> Result<SemigroupBall> {
    if bound < 0 {
        return Err(Error::InvalidInput("norm bound must be nonnegative".into()));
    }
    for g in generators {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        if g.sup_norm() > bound {
            return Err(Error::InvalidInput(format!(
                "norm bound {bound} is below the generator norm {}",
                g.sup_norm()
            )));
        }
    }
    let mut visited = Visited::new(dim, bound);
    let mut elements = vec![0i64; dim];
    visited.insert(bound, &elements);
    let mut head = 0;
    let mut next = vec![0i64; dim];
    while head < elements.len() {
        for g in generators {
            let mut inside = true;
            for k in 0..dim {
                next[k] = elements[head + k] + g.0[k];
                if next[k].abs() > bound {
                    inside = false;
                    break;
                }
            }
            if inside && visited.insert(bound, &next) {
                if elements.len() / dim.max(1) >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                elements.extend_from_slice(&next);
            }
        }
        head += dim.max(1);
        if dim == 0 {
            break;
        }
    }
    Ok(SemigroupBall {
        dim,
        bound,
        visited,
        elements,
    })
}
