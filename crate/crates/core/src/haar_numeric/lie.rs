//! Standard real bases of the classical compact Lie algebras, as
//! skew-Hermitian matrices.

use num_complex::Complex64;

use super::expm::CMatrix;

fn unit(n: usize, j: usize, k: usize, value: Complex64) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(j, k)] = value;
    m
}

fn off_diagonal(n: usize, out: &mut Vec<CMatrix>) {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    for j in 0..n {
        for k in j + 1..n {
            out.push(unit(n, j, k, one) - unit(n, k, j, one));
            out.push(unit(n, j, k, i) + unit(n, k, j, i));
        }
    }
}

/// `so(n)`: `E_jk - E_kj` for `j < k`.
pub fn so_basis(n: usize) -> Vec<CMatrix> {
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            out.push(unit(n, j, k, one) - unit(n, k, j, one));
        }
    }
    out
}

/// `u(n)`: off-diagonal pairs and `i E_jj`.
pub fn u_basis(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::new();
    off_diagonal(n, &mut out);
    for j in 0..n {
        out.push(unit(n, j, j, Complex64::i()));
    }
    out
}

/// `su(n)`: off-diagonal pairs and `i(E_jj - E_{j+1,j+1})`.
pub fn su_basis(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::new();
    off_diagonal(n, &mut out);
    for j in 0..n.saturating_sub(1) {
        out.push(unit(n, j, j, Complex64::i()) - unit(n, j + 1, j + 1, Complex64::i()));
    }
    out
}

/// The derivative of `V ↦ gVg⁻¹` at `X`, on row-major flattened `n × n`
/// matrices: `V ↦ XV - VX`.
pub fn adjoint_matrix(x: &CMatrix) -> CMatrix {
    let n = x.nrows();
    let mut ad = CMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            let col = a * n + b;
            // image of E_ab is X E_ab - E_ab X
            for r in 0..n {
                ad[(r * n + b, col)] += x[(r, a)];
                ad[(a * n + r, col)] -= x[(b, r)];
            }
        }
    }
    ad
}

/// `g ⊗ conj(g)` acting on row-major flattened matrices as `V ↦ gVg*`.
pub fn conjugation_matrix(g: &CMatrix) -> CMatrix {
    g.kronecker(&g.map(|c| c.conj()))
}
