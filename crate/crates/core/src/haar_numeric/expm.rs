use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Max-entry deviation of `x` from `-x*` (skew-Hermitian) or `x*` (Hermitian).
pub fn skew_hermitian_deviation(x: &CMatrix) -> f64 {
    (x + x.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn hermitian_deviation(x: &CMatrix) -> f64 {
    (x - x.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn scale_tol(x: &CMatrix) -> f64 {
    1e-12 * x.iter().map(|c| c.norm()).fold(1.0, f64::max)
}

/// `exp(tX)`.
///
/// Hermitian and skew-Hermitian inputs go through a unitary
/// eigendecomposition, so the skew case returns a unitary matrix to
/// rounding; anything else uses Padé scaling-and-squaring.
pub fn exp_skew(x: &CMatrix, t: f64) -> CMatrix {
    assert!(x.is_square(), "exp_skew needs a square matrix");
    let n = x.nrows();
    if n == 0 {
        return x.clone();
    }
    let i = Complex64::i();
    let tol = scale_tol(x);
    if skew_hermitian_deviation(x) <= tol {
        // X = -iH with H Hermitian
        let h = x.map(|c| c * i);
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.symmetric_eigen();
        let phases = eig.eigenvalues.map(|lam| Complex64::from_polar(1.0, -t * lam));
        return reassemble(&eig.eigenvectors, &phases);
    }
    if hermitian_deviation(x) <= tol {
        let h = (x + x.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.symmetric_eigen();
        let scale = eig.eigenvalues.map(|lam| Complex64::new((t * lam).exp(), 0.0));
        return reassemble(&eig.eigenvectors, &scale);
    }
    (x * Complex64::new(t, 0.0)).exp()
}

fn reassemble(u: &CMatrix, diag: &nalgebra::DVector<Complex64>) -> CMatrix {
    let mut scaled = u.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= diag[k];
    }
    scaled * u.adjoint()
}

/// Max-entry deviation of `g* g` from the identity.
pub fn unitarity_defect(g: &CMatrix) -> f64 {
    let n = g.nrows();
    (g.adjoint() * g - CMatrix::identity(n, n))
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_gives_identity() {
        let z = CMatrix::zeros(3, 3);
        assert_eq!(exp_skew(&z, 1.0), CMatrix::identity(3, 3));
    }

    #[test]
    fn diagonal_rotation_by_pi() {
        let x = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0, 1.0), c(0.0, -1.0)]));
        let e = exp_skew(&x, PI);
        let err = (e + CMatrix::identity(2, 2)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err <= 1e-12, "{err}");
    }

    #[test]
    fn general_matrix_inverse() {
        // nilpotent, not normal
        let x = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let prod = exp_skew(&x, 1.0) * exp_skew(&x, -1.0);
        assert!((prod - CMatrix::identity(2, 2)).iter().all(|z| z.norm() <= 1e-10));
        let e = exp_skew(&x, 2.0);
        assert!((e[(0, 1)] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn hermitian_input() {
        let x = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let e = exp_skew(&x, 1.0);
        assert!((e[(0, 0)] - c(1f64.exp(), 0.0)).norm() < 1e-12);
    }
}
