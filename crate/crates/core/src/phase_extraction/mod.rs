//! Reading the stellar phase with shared single-photon pairs: Alice Fourier
//! transforms each fixed-photon-number block, Bob undoes the outcome-dependent
//! phases and measures one rotated bit.

mod estimate;
mod fisher;
mod protocol;
mod state;

pub use estimate::{mle_estimate, sample_closed_form, Detection, MleEstimate, MIN_DETECTIONS};
pub use fisher::{
    abort_probability, average_fisher, average_fisher_closed_form, binomial, fisher_information,
    outcome_probability, sector_contrast, sector_fisher, sector_probability, FisherReport, DEFAULT_FISHER_GRID,
};
pub use protocol::{run_protocol, ExactOutcomes, ExtractionProtocol, ProtocolOutcome, SectorOutcome};
pub use state::{joint_state, ExtractionConfig, SectorState, MAX_SIMULATED_PAIRS};
