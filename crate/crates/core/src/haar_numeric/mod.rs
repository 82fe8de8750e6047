//! Haar sampling and matrix calculus for compact matrix groups.
//!
//! Built-in families are sampled exactly: a Gaussian matrix is
//! QR-factorised and `Q` is corrected by the phases (signs) of `diag R`,
//! then projected to determinant one where needed. Custom groups given by a
//! Lie algebra basis are sampled approximately by random words in
//! one-parameter subgroups.

mod expm;
pub mod lie;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub use expm::{exp_skew, hermitian_deviation, skew_hermitian_deviation, unitarity_defect, CMatrix};

use crate::error::{Error, Result};
use crate::torus_orbit::TorusAction;

pub const SKEW_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_WORD_LENGTH: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub enum GroupKind {
    Torus(TorusAction),
    Unitary(usize),
    SpecialUnitary(usize),
    SpecialOrthogonal(usize),
    Custom { lie_basis: Vec<CMatrix>, word_length: usize },
}

/// How group matrices act on the ambient space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    /// `v ↦ gv`. For a torus this is the weight action; for a custom group,
    /// the basis matrices already are the representation.
    #[default]
    Defining,
    /// `V ↦ gVg⁻¹` on row-major flattened matrices.
    Adjoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompactMatrixGroup {
    kind: GroupKind,
    representation: Representation,
}

impl CompactMatrixGroup {
    pub fn new(kind: GroupKind, representation: Representation) -> Result<Self> {
        match &kind {
            GroupKind::Unitary(n) | GroupKind::SpecialUnitary(n) | GroupKind::SpecialOrthogonal(n) if *n == 0 => {
                return Err(Error::InvalidInput("matrix size must be at least 1".into()))
            }
            GroupKind::Torus(_) if representation == Representation::Adjoint => {
                return Err(Error::InvalidInput("the adjoint action of a torus is trivial; use weights".into()))
            }
            GroupKind::Custom { lie_basis, word_length } => {
                let Some(first) = lie_basis.first() else {
                    return Err(Error::InvalidInput("custom group needs a nonempty Lie basis".into()));
                };
                let k = first.nrows();
                for x in lie_basis {
                    if !x.is_square() || x.nrows() != k {
                        return Err(Error::InvalidInput("Lie basis matrices must be square of equal size".into()));
                    }
                    let deviation = skew_hermitian_deviation(x);
                    if deviation > SKEW_TOLERANCE {
                        return Err(Error::NotSkewHermitian { deviation });
                    }
                }
                if *word_length == 0 {
                    return Err(Error::InvalidInput("word length must be positive".into()));
                }
            }
            _ => {}
        }
        Ok(Self { kind, representation })
    }

    pub fn torus(action: TorusAction) -> Self {
        Self {
            kind: GroupKind::Torus(action),
            representation: Representation::Defining,
        }
    }

    pub fn defining(kind: GroupKind) -> Result<Self> {
        Self::new(kind, Representation::Defining)
    }

    pub fn custom(lie_basis: Vec<CMatrix>) -> Result<Self> {
        Self::new(
            GroupKind::Custom {
                lie_basis,
                word_length: DEFAULT_WORD_LENGTH,
            },
            Representation::Defining,
        )
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    /// Size of the group matrices.
    pub fn matrix_size(&self) -> usize {
        match &self.kind {
            GroupKind::Torus(a) => a.n(),
            GroupKind::Unitary(n) | GroupKind::SpecialUnitary(n) | GroupKind::SpecialOrthogonal(n) => *n,
            GroupKind::Custom { lie_basis, .. } => lie_basis[0].nrows(),
        }
    }

    /// Dimension of the space the group acts on.
    pub fn rep_dim(&self) -> usize {
        match (&self.kind, self.representation) {
            (GroupKind::Torus(a), _) => a.m(),
            (_, Representation::Defining) => self.matrix_size(),
            (_, Representation::Adjoint) => self.matrix_size().pow(2),
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.kind, GroupKind::Torus(_))
    }

    /// Samples are exactly Haar distributed.
    pub fn exact_haar(&self) -> bool {
        !matches!(self.kind, GroupKind::Custom { .. })
    }

    /// Lie algebra basis in the defining matrices (for a torus: `i E_kk`).
    pub fn lie_basis(&self) -> Vec<CMatrix> {
        match &self.kind {
            GroupKind::Torus(a) => (0..a.n())
                .map(|k| {
                    let mut m = CMatrix::zeros(a.n(), a.n());
                    m[(k, k)] = Complex64::i();
                    m
                })
                .collect(),
            GroupKind::Unitary(n) => lie::u_basis(*n),
            GroupKind::SpecialUnitary(n) => lie::su_basis(*n),
            GroupKind::SpecialOrthogonal(n) => lie::so_basis(*n),
            GroupKind::Custom { lie_basis, .. } => lie_basis.clone(),
        }
    }

    /// Lie algebra basis acting on the representation space.
    pub fn rep_lie_basis(&self) -> Vec<CMatrix> {
        match (&self.kind, self.representation) {
            (GroupKind::Torus(a), _) => (0..a.n())
                .map(|k| {
                    let d = nalgebra::DVector::from_iterator(
                        a.m(),
                        a.weights().iter().map(|w| Complex64::new(0.0, w.0[k] as f64)),
                    );
                    CMatrix::from_diagonal(&d)
                })
                .collect(),
            (_, Representation::Defining) => self.lie_basis(),
            (_, Representation::Adjoint) => self.lie_basis().iter().map(lie::adjoint_matrix).collect(),
        }
    }
}

/// A group element: the defining matrix, plus the angles for a torus.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub matrix: CMatrix,
    pub angles: Option<Vec<f64>>,
}

impl GroupElement {
    pub fn identity(group: &CompactMatrixGroup) -> Self {
        let n = group.matrix_size();
        Self {
            matrix: CMatrix::identity(n, n),
            angles: group.is_torus().then(|| vec![0.0; n]),
        }
    }

    pub fn torus(angles: Vec<f64>) -> Self {
        let d = nalgebra::DVector::from_iterator(angles.len(), angles.iter().map(|&t| Complex64::from_polar(1.0, t)));
        Self {
            matrix: CMatrix::from_diagonal(&d),
            angles: Some(angles),
        }
    }

    pub fn from_matrix(matrix: CMatrix) -> Self {
        Self { matrix, angles: None }
    }

    /// Group product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        let angles = match (&self.angles, &other.angles) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            _ => None,
        };
        Self {
            matrix: &self.matrix * &other.matrix,
            angles,
        }
    }
}

/// Position in a counter-based random stream. Each counter value selects an
/// independent ChaCha stream under the same seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SamplerState {
    pub seed: u64,
    pub counter: u64,
}

impl SamplerState {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    pub fn at(self, counter: u64) -> Self {
        Self { counter, ..self }
    }

    /// The state `offset` positions further along.
    pub fn advanced(self, offset: u64) -> Self {
        self.at(self.counter.wrapping_add(offset))
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.counter);
        rng
    }
}

fn complex_gaussian<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

fn haar_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let qr = complex_gaussian(rng, n).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

fn haar_special_orthogonal<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let z = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..n {
        if r[(k, k)] < 0.0 {
            q.column_mut(k).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q.map(|x| Complex64::new(x, 0.0))
}

/// One Haar sample from the stream at `state`.
pub fn haar_sample(group: &CompactMatrixGroup, state: SamplerState) -> GroupElement {
    let mut rng = state.rng();
    let tau = std::f64::consts::TAU;
    match &group.kind {
        GroupKind::Torus(a) => GroupElement::torus((0..a.n()).map(|_| rng.random::<f64>() * tau).collect()),
        GroupKind::Unitary(n) => GroupElement::from_matrix(haar_unitary(&mut rng, *n)),
        GroupKind::SpecialUnitary(n) => {
            let q = haar_unitary(&mut rng, *n);
            let root = q.determinant().powf(1.0 / *n as f64);
            GroupElement::from_matrix(q / root)
        }
        GroupKind::SpecialOrthogonal(n) => GroupElement::from_matrix(haar_special_orthogonal(&mut rng, *n)),
        GroupKind::Custom { lie_basis, word_length } => {
            let k = lie_basis[0].nrows();
            let mut g = CMatrix::identity(k, k);
            for _ in 0..*word_length {
                let x = &lie_basis[rng.random_range(0..lie_basis.len())];
                let t = (rng.random::<f64>() - 0.5) * tau;
                g *= exp_skew(x, t);
            }
            GroupElement::from_matrix(g)
        }
    }
}

/// Applies the configured representation of `g` to `v`.
pub fn act(group: &CompactMatrixGroup, g: &GroupElement, v: &[Complex64]) -> Result<Vec<Complex64>> {
    if v.len() != group.rep_dim() {
        return Err(Error::DimensionMismatch {
            expected: group.rep_dim(),
            found: v.len(),
        });
    }
    let mut out = Vec::with_capacity(v.len());
    match (&group.kind, group.representation) {
        (GroupKind::Torus(a), _) => {
            let angles = g
                .angles
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("torus element without angles".into()))?;
            for (w, &vj) in a.weights().iter().zip(v) {
                out.push(vj * Complex64::from_polar(1.0, w.pair_f64(angles)));
            }
        }
        (_, Representation::Defining) => {
            let n = g.matrix.nrows();
            for r in 0..n {
                out.push((0..n).map(|c| g.matrix[(r, c)] * v[c]).sum());
            }
        }
        (_, Representation::Adjoint) => {
            let n = g.matrix.nrows();
            let m = CMatrix::from_row_slice(n, n, v);
            let conj = &g.matrix * m * g.matrix.adjoint();
            for r in 0..n {
                for c in 0..n {
                    out.push(conj[(r, c)]);
                }
            }
        }
    }
    Ok(out)
}

/// The matrix of `g` on the representation space.
pub fn representation_matrix(group: &CompactMatrixGroup, g: &GroupElement) -> Result<CMatrix> {
    let d = group.rep_dim();
    let mut out = CMatrix::zeros(d, d);
    let mut e = vec![Complex64::new(0.0, 0.0); d];
    for k in 0..d {
        e[k] = Complex64::new(1.0, 0.0);
        let col = act(group, g, &e)?;
        e[k] = Complex64::new(0.0, 0.0);
        for (r, x) in col.into_iter().enumerate() {
            out[(r, k)] = x;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn torus_sample_is_a_phase() {
        let a = TorusAction::from_rows(&[&[1]]).unwrap();
        let g = CompactMatrixGroup::torus(a);
        let e = haar_sample(&g, SamplerState::new(7));
        let theta = e.angles.as_ref().unwrap()[0];
        assert!((0.0..std::f64::consts::TAU).contains(&theta));
        assert!((e.matrix[(0, 0)] - Complex64::from_polar(1.0, theta)).norm() < 1e-15);
    }

    #[test]
    fn samples_are_unitary_and_special() {
        for kind in [
            GroupKind::Unitary(2),
            GroupKind::Unitary(4),
            GroupKind::SpecialUnitary(3),
            GroupKind::SpecialOrthogonal(3),
            GroupKind::SpecialOrthogonal(4),
        ] {
            let special = !matches!(kind, GroupKind::Unitary(_));
            let g = CompactMatrixGroup::defining(kind).unwrap();
            for i in 0..50 {
                let e = haar_sample(&g, SamplerState::new(1).at(i));
                assert!(unitarity_defect(&e.matrix) <= 1e-12);
                if special {
                    assert!((e.matrix.determinant() - c(1.0, 0.0)).norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let g = CompactMatrixGroup::defining(GroupKind::Unitary(3)).unwrap();
        let s = SamplerState { seed: 42, counter: 9 };
        assert_eq!(haar_sample(&g, s), haar_sample(&g, s));
        assert_ne!(haar_sample(&g, s), haar_sample(&g, s.advanced(1)));
    }

    #[test]
    fn torus_action_by_weights() {
        let a = TorusAction::from_rows(&[&[1], &[2]]).unwrap();
        let g = CompactMatrixGroup::torus(a);
        let e = GroupElement::torus(vec![0.4]);
        let out = act(&g, &e, &[c(1.0, 0.0), c(0.0, 2.0)]).unwrap();
        assert!((out[0] - Complex64::from_polar(1.0, 0.4)).norm() < 1e-15);
        assert!((out[1] - c(0.0, 2.0) * Complex64::from_polar(1.0, 0.8)).norm() < 1e-15);
        let id = GroupElement::identity(&g);
        assert_eq!(act(&g, &id, &[c(1.0, 0.0), c(3.0, 0.0)]).unwrap(), vec![c(1.0, 0.0), c(3.0, 0.0)]);
        assert!(act(&g, &id, &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn adjoint_preserves_spectrum() {
        let g = CompactMatrixGroup::new(GroupKind::SpecialUnitary(2), Representation::Adjoint).unwrap();
        let v = [c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)];
        for i in 0..20 {
            let e = haar_sample(&g, SamplerState::new(3).at(i));
            let w = act(&g, &e, &v).unwrap();
            let m = CMatrix::from_row_slice(2, 2, &w);
            assert!(m.trace().norm() < 1e-12);
            assert!((m.determinant() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn custom_basis_validated() {
        let bad = CMatrix::from_row_slice(1, 1, &[c(1.0, 0.0)]);
        assert!(matches!(CompactMatrixGroup::custom(vec![bad]), Err(Error::NotSkewHermitian { .. })));
        let g = CompactMatrixGroup::custom(lie::su_basis(2)).unwrap();
        assert!(!g.exact_haar());
        let e = haar_sample(&g, SamplerState::new(0));
        assert!(unitarity_defect(&e.matrix) <= 1e-12);
    }

    #[test]
    fn representation_matrix_of_adjoint() {
        let g = CompactMatrixGroup::new(GroupKind::SpecialUnitary(2), Representation::Adjoint).unwrap();
        let e = haar_sample(&g, SamplerState::new(5));
        let r = representation_matrix(&g, &e).unwrap();
        let k = lie::conjugation_matrix(&e.matrix);
        assert!((r - k).iter().all(|z| z.norm() < 1e-12));
    }
}
