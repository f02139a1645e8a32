//! Non-compact path: superlevel measures of multipliers, rearrangements,
//! reweighting, and the essential-infimum and integrability diagnostics.

mod diagnostics;
mod rearrange;
mod reweight;
mod superlevel;

pub use diagnostics::{
    essinf_estimate, lp_check, EssinfReport, EssinfVerdict, LpIntegrand, LpVerdict, TruncationSchedule, LP_REL_TOL,
};
pub use rearrange::{
    d_lambda, decreasing_rearrangement, decreasing_rearrangement_exact, increasing_rearrangement,
    rearranged_multiplier,
};
pub use reweight::reweight;
pub use superlevel::{
    measure_of, phi_curve, superlevel_measure, superlevel_set, SuperlevelSet, DIVERGENCE_DOUBLINGS,
    DIVERGENCE_FACTOR, WEIGHTED_REL_TOL,
};
