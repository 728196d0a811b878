//! Executable, self-verifying versions of the slice, neighbourhood and
//! point-of-continuity constructions. Every public entry point re-checks its
//! output with exact arithmetic and returns a verification error rather than
//! an unchecked answer.

mod adp;
mod defiance;
mod pc;
mod reduction;
mod scd_zero;
mod sigma;
mod super_adp;
mod transcript;

pub use adp::{adp_witness, AdpWitness};
pub use defiance::{c_non_scd_witness, daugavet_witness, positive_slice_defiance, CWitness, DaugavetWitness};
pub use pc::{pc_approximant, pc_approximant_in, pc_near, pc_near_in};
pub use reduction::{
    finitely_branching_reduction, pibase_basic_witness, spot_members, PibaseWitness, Reduction, ReducedTree,
};
pub use scd_zero::{scd_zero_demo, DCombination, ScdZeroReport, Selector};
pub use sigma::sigma_pibase_defiance;
pub use super_adp::{super_adp_bound, SuperAdpReport, Verdict};
pub use transcript::DefianceTranscript;
