//! Simulation engine for the clock game: time-bin QND measurement with
//! entangled qudit ancillas, its noise and entanglement-cost analysis, and a
//! linear-optical phase-extraction protocol.

pub mod clock_game;
pub mod error;
pub mod noise;
pub mod phase_extraction;
pub mod qudit;
pub mod resources;
pub mod rng;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use clock_game::{AncillaSpec, GameConfig, GameFamily, ReducedRefereeState, RoundRecord};
pub use noise::NoiseParams;
pub use phase_extraction::{ExtractionConfig, FisherReport, SectorState};
pub use qudit::{DensityMatrix, HilbertSpace, StateVector, UnitaryMatrix};
pub use resources::{AuditReport, CostComparison};
