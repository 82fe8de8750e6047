//! Reference instances with known answers, shared by the command line
//! self-test and the test suites.

use num_complex::Complex64;

use crate::haar_numeric::{CompactMatrixGroup, GroupKind, Representation};
use crate::torus_orbit::{OrbitPoint, TorusAction};

#[derive(Clone, Debug)]
pub struct TorusFixture {
    pub name: &'static str,
    pub action: TorusAction,
    pub v: OrbitPoint,
    pub antisymmetric: bool,
    pub nilpotent: bool,
    pub v_tilde: Vec<i64>,
}

fn fixture(
    name: &'static str,
    rows: &[&[i64]],
    v: &[i64],
    antisymmetric: bool,
    nilpotent: bool,
    v_tilde: &[i64],
) -> TorusFixture {
    TorusFixture {
        name,
        action: TorusAction::from_rows(rows).expect("valid fixture"),
        v: OrbitPoint::exact_integers(v),
        antisymmetric,
        nilpotent,
        v_tilde: v_tilde.to_vec(),
    }
}

/// Five torus orbits covering every combination of verdicts.
pub fn torus_fixtures() -> Vec<TorusFixture> {
    vec![
        fixture("positive-line", &[&[1], &[2]], &[1, 1], true, true, &[0, 0]),
        fixture("opposite-line", &[&[1], &[-1]], &[1, 1], false, false, &[1, 1]),
        fixture("line-plus-axis", &[&[1, 0], &[-1, 0], &[0, 1]], &[1, 1, 1], false, false, &[1, 1, 0]),
        fixture("acute-plane", &[&[2, -1], &[-1, 2]], &[1, 1], true, true, &[0, 0]),
        fixture("fixed-coordinate", &[&[0], &[1]], &[1, 1], true, false, &[1, 0]),
    ]
}

/// `SU(2)` acting on `2 × 2` matrices by conjugation.
pub fn su2_adjoint() -> CompactMatrixGroup {
    CompactMatrixGroup::new(GroupKind::SpecialUnitary(2), Representation::Adjoint).expect("valid group")
}

/// `[[i, 1], [0, -i]]` flattened row-major: `tr(v²) = -2`, not normal.
pub fn su2_adjoint_point() -> Vec<Complex64> {
    vec![
        Complex64::new(0.0, 1.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, -1.0),
    ]
}

/// `U(2)` on `C²` with the unit vector `e₁`, whose orbit is the sphere.
pub fn u2_sphere() -> (CompactMatrixGroup, Vec<Complex64>) {
    (
        CompactMatrixGroup::defining(GroupKind::Unitary(2)).expect("valid group"),
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    )
}
