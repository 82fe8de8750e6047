//! Row-style Hermite normal form with the accompanying unimodular transform.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) struct HermiteForm {
    /// `h = u · input`, rows below `rank` are zero.
    pub h: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn axpy(target: &mut [BigInt], q: &BigInt, source: &[BigInt]) {
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

/// Pivots are positive and every entry above a pivot lies in `[0, pivot)`,
/// which makes the nonzero rows a canonical basis of the row lattice.
pub(crate) fn hermite(rows: &[Vec<BigInt>], ncols: usize) -> HermiteForm {
    let m = rows.len();
    let mut h: Vec<Vec<BigInt>> = rows.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m {
            break;
        }
        loop {
            let smallest = (r..m)
                .filter(|&i| !h[i][col].is_zero())
                .min_by(|&a, &b| h[a][col].abs().cmp(&h[b][col].abs()));
            let Some(k) = smallest else { break };
            h.swap(r, k);
            u.swap(r, k);
            let mut clean = true;
            for i in r + 1..m {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[r][col]);
                let (hr, ur) = (h[r].clone(), u[r].clone());
                axpy(&mut h[i], &q, &hr);
                axpy(&mut u[i], &q, &ur);
                if !h[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[r][col].is_zero() {
            continue;
        }
        if h[r][col].is_negative() {
            for e in h[r].iter_mut().chain(u[r].iter_mut()) {
                *e = -e.clone();
            }
        }
        let (hr, ur) = (h[r].clone(), u[r].clone());
        for i in 0..r {
            let q = h[i][col].div_floor(&hr[col]);
            if !q.is_zero() {
                axpy(&mut h[i], &q, &hr);
                axpy(&mut u[i], &q, &ur);
            }
        }
        pivots.push(col);
        r += 1;
    }
    HermiteForm { h, u, pivots }
}

/// Reduces `v` against the echelon rows; `true` iff `v` is an integer
/// combination of them.
pub(crate) fn reduces_to_zero(rows: &[Vec<BigInt>], pivots: &[usize], v: &[BigInt]) -> bool {
    let mut x = v.to_vec();
    for (row, &p) in rows.iter().zip(pivots) {
        if x[p].is_zero() {
            continue;
        }
        let (q, rem) = x[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return false;
        }
        axpy(&mut x, &q, row);
    }
    x.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn transform_is_consistent() {
        let a = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let hf = hermite(&a, 3);
        for (i, hrow) in hf.h.iter().enumerate() {
            for j in 0..3 {
                let s: BigInt = (0..3).map(|k| &hf.u[i][k] * &a[k][j]).sum();
                assert_eq!(s, hrow[j]);
            }
        }
        assert_eq!(hf.rank(), 3);
        // |det a| = 144 by cofactor expansion; a full-rank triangular basis
        // of the same lattice has the same covolume.
        let covolume: BigInt = (0..3).map(|i| hf.h[i][hf.pivots[i]].clone()).product();
        assert_eq!(covolume, BigInt::from(144));
        for (i, &p) in hf.pivots.iter().enumerate() {
            assert!(hf.h[i][p].is_positive());
            assert!((0..p).all(|j| hf.h[i][j].is_zero()));
            for above in &hf.h[..i] {
                assert!(!above[p].is_negative() && above[p] < hf.h[i][p]);
            }
        }
    }

    #[test]
    fn membership() {
        let hf = hermite(&big(&[&[2, 0], &[0, 3]]), 2);
        let rows = &hf.h[..hf.rank()];
        assert!(reduces_to_zero(rows, &hf.pivots, &big(&[&[4, -3]])[0]));
        assert!(!reduces_to_zero(rows, &hf.pivots, &big(&[&[1, 0]])[0]));
    }
}
