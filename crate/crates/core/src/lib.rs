//! Exact and numerical tools for orbits of compact groups: torus-orbit
//! spectra and hulls over exact rationals, Haar-measure Monte Carlo for
//! orbit averages, a Kempf–Ness norm flow, and Lie-algebraic checks on
//! homogeneous spaces.

pub mod error;
pub mod fixtures;
pub mod group_structure;
pub mod haar_numeric;
pub mod kempf_ness;
pub mod lattice_cone;
pub mod measure_mult;
pub mod serde_util;
pub mod torus_orbit;

pub use error::{Error, Result};
pub use group_structure::{LieSubalgebraPair, NormalizerReport};
pub use haar_numeric::{CMatrix, CompactMatrixGroup, GroupElement, GroupKind, Representation, SamplerState};
pub use kempf_ness::{FlowOptions, FlowOutcome, FlowReport};
pub use lattice_cone::{LatticeBasis, Rational, WeightSemigroup, WeightVector};
pub use measure_mult::{DefectReport, DefectVerdict, EstimationConfig, Estimate, Polynomial};
pub use num_complex::Complex64;
pub use torus_orbit::{FibrationReport, GaussianRational, HullVerdict, OrbitPoint, TorusAction};
