//! Structure of homogeneous spaces `G/H`: the Lie-algebra normalizer of `h`
//! (an infinitesimal version of finiteness of `N_G(H)/H`) and Monte Carlo
//! multiplicities of `H`-fixed vectors in irreducible representations.

mod gelfand;
mod normalizer;

pub use gelfand::{
    character_norm, fixed_multiplicity, gelfand_check, CenterOfSu2, GelfandEntry, GelfandReport, GroupSampler,
    HaarSampler, MultiplicityEstimate, RepEvaluator, So2InSo3, So3Irrep, Su2Irrep, TrivialRep,
};
pub use normalizer::{
    normalizer_subalgebra, LieSubalgebraPair, NormalizerReport, CLOSURE_TOLERANCE, RANK_THRESHOLD, SPAN_TOLERANCE,
};
