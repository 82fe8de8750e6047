use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::haar_numeric::{lie, CMatrix};

/// Singular values at or below this (relative to the largest, floored at 1)
/// count as zero.
pub const RANK_THRESHOLD: f64 = 1e-8;
pub const SPAN_TOLERANCE: f64 = 1e-10;
pub const CLOSURE_TOLERANCE: f64 = 1e-8;

fn bracket(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Real coordinates `(re, im)` of the entries, row-major.
fn realify(x: &CMatrix) -> DVector<f64> {
    let n = x.nrows();
    let mut out = DVector::zeros(2 * n * n);
    for r in 0..n {
        for c in 0..n {
            let z = x[(r, c)];
            out[2 * (r * n + c)] = z.re;
            out[2 * (r * n + c) + 1] = z.im;
        }
    }
    out
}

/// Orthonormal basis (as columns) of the real span of `mats`, and its rank.
fn orthonormal_span(mats: &[CMatrix], len: usize) -> DMatrix<f64> {
    if mats.is_empty() {
        return DMatrix::zeros(len, 0);
    }
    let cols: Vec<DVector<f64>> = mats.iter().map(realify).collect();
    let a = DMatrix::from_columns(&cols);
    let svd = a.svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max().max(1.0);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > RANK_THRESHOLD * smax)
        .collect();
    DMatrix::from_columns(&keep.iter().map(|&i| u.column(i).into_owned()).collect::<Vec<_>>())
}

fn distance_to_span(q: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    if q.ncols() == 0 {
        return x.norm();
    }
    (x - q * (q.transpose() * x)).norm()
}

/// Two real spans of skew-Hermitian matrices, `h ⊆ g`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieSubalgebraPair {
    g_basis: Vec<CMatrix>,
    h_basis: Vec<CMatrix>,
    /// Largest distance of a bracket of basis elements from its span.
    closure_residual_g: f64,
    closure_residual_h: f64,
    span_residual: f64,
}

impl LieSubalgebraPair {
    pub fn new(g_basis: Vec<CMatrix>, h_basis: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = g_basis.first() else {
            return Err(Error::InvalidLiePair("g basis is empty".into()));
        };
        let n = first.nrows();
        if g_basis.iter().chain(&h_basis).any(|x| !x.is_square() || x.nrows() != n) {
            return Err(Error::InvalidLiePair("all matrices must be square of one size".into()));
        }
        let len = 2 * n * n;
        let qg = orthonormal_span(&g_basis, len);
        if qg.ncols() != g_basis.len() {
            return Err(Error::InvalidLiePair("g basis is linearly dependent".into()));
        }
        let qh = orthonormal_span(&h_basis, len);
        if qh.ncols() != h_basis.len() {
            return Err(Error::InvalidLiePair("h basis is linearly dependent".into()));
        }
        let span_residual = h_basis
            .iter()
            .map(|h| distance_to_span(&qg, &realify(h)))
            .fold(0.0, f64::max);
        if span_residual > SPAN_TOLERANCE {
            return Err(Error::InvalidLiePair(format!(
                "h is not contained in g (residual {span_residual:.3e})"
            )));
        }
        let closure = |basis: &[CMatrix], q: &DMatrix<f64>| -> f64 {
            let mut worst: f64 = 0.0;
            for (i, a) in basis.iter().enumerate() {
                for b in &basis[i + 1..] {
                    worst = worst.max(distance_to_span(q, &realify(&bracket(a, b))));
                }
            }
            worst
        };
        let closure_residual_g = closure(&g_basis, &qg);
        let closure_residual_h = closure(&h_basis, &qh);
        for (name, r) in [("g", closure_residual_g), ("h", closure_residual_h)] {
            if r > CLOSURE_TOLERANCE {
                return Err(Error::InvalidLiePair(format!(
                    "span of {name} is not closed under brackets (residual {r:.3e})"
                )));
            }
        }
        Ok(Self {
            g_basis,
            h_basis,
            closure_residual_g,
            closure_residual_h,
            span_residual,
        })
    }

    pub fn g_basis(&self) -> &[CMatrix] {
        &self.g_basis
    }

    pub fn h_basis(&self) -> &[CMatrix] {
        &self.h_basis
    }

    /// `so(3) ⊃ so(2)`, the rotations about the third axis.
    pub fn so3_so2() -> Self {
        let g = lie::so_basis(3);
        let h = vec![g[0].clone()];
        Self::new(g, h).expect("valid preset")
    }

    pub fn su2_su2() -> Self {
        let g = lie::su_basis(2);
        Self::new(g.clone(), g).expect("valid preset")
    }

    /// The diagonal torus `t^n` in `u(n)` with `h = 0`.
    pub fn torus_trivial(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLiePair("torus dimension must be positive".into()));
        }
        let g = (0..n)
            .map(|k| {
                let mut m = CMatrix::zeros(n, n);
                m[(k, k)] = Complex64::i();
                m
            })
            .collect();
        Self::new(g, Vec::new())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizerReport {
    pub dim_g: usize,
    pub dim_h: usize,
    pub dim_normalizer: usize,
    /// `dim n = dim h`, so `N/H` is finite at the Lie algebra level.
    pub condition_f_infinitesimal: bool,
    /// Coefficients over `g_basis` of an orthonormal basis of `n`.
    pub normalizer_basis: Vec<Vec<f64>>,
    /// `max dist([x, h_i], span h)` over the reported basis.
    pub max_residual: f64,
    pub singular_values: Vec<f64>,
    pub closure_residual_g: f64,
    pub closure_residual_h: f64,
    pub span_residual: f64,
    pub note: String,
}

/// `n = {x ∈ g : [x, h] ⊆ h}` as the null space of the stacked projections
/// of `[g_k, h_i]` onto the orthogonal complement of `h`.
pub fn normalizer_subalgebra(pair: &LieSubalgebraPair) -> NormalizerReport {
    let n = pair.g_basis[0].nrows();
    let len = 2 * n * n;
    let (dim_g, dim_h) = (pair.g_basis.len(), pair.h_basis.len());
    let qh = orthonormal_span(&pair.h_basis, len);
    let project = |x: &DVector<f64>| -> DVector<f64> {
        if qh.ncols() == 0 {
            x.clone()
        } else {
            x - &qh * (qh.transpose() * x)
        }
    };
    let rows = (len * dim_h).max(dim_g);
    let mut a = DMatrix::<f64>::zeros(rows, dim_g);
    for (k, gk) in pair.g_basis.iter().enumerate() {
        for (i, hi) in pair.h_basis.iter().enumerate() {
            let col = project(&realify(&bracket(gk, hi)));
            a.view_mut((i * len, k), (len, 1)).copy_from(&col);
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.max().max(1.0);
    let singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();
    let normalizer_basis: Vec<Vec<f64>> = (0..singular_values.len())
        .filter(|&i| singular_values[i] <= RANK_THRESHOLD * smax)
        .map(|i| v_t.row(i).iter().copied().collect())
        .collect();
    let mut max_residual: f64 = 0.0;
    for coeffs in &normalizer_basis {
        let mut x = CMatrix::zeros(n, n);
        for (c, gk) in coeffs.iter().zip(&pair.g_basis) {
            x += gk * Complex64::new(*c, 0.0);
        }
        for hi in &pair.h_basis {
            max_residual = max_residual.max(distance_to_span(&qh, &realify(&bracket(&x, hi))));
        }
    }
    let dim_normalizer = normalizer_basis.len();
    NormalizerReport {
        dim_g,
        dim_h,
        dim_normalizer,
        condition_f_infinitesimal: dim_normalizer == dim_h,
        normalizer_basis,
        max_residual,
        singular_values,
        closure_residual_g: pair.closure_residual_g,
        closure_residual_h: pair.closure_residual_h,
        span_residual: pair.span_residual,
        note: "infinitesimal check: the component group of N/H is not examined".into(),
    }
}
