//! The clock game: a referee hides a time-bin `n` in a phase-encoded single
//! excitation, and the parties must name `n` without disturbing the state.

mod ancilla;
mod config;
mod game;
mod play;
mod stellar;
mod strategy;

pub use ancilla::{AncillaKind, AncillaSpec};
pub use config::{decode_timebin, referee_state, Component, GameConfig, RefereeBasis, ReducedRefereeState};
pub use game::{win_probability, win_table, GameFamily, WinEstimate, WinMode, DEFAULT_PHASE_GRID};
pub use play::{play_round, RoundEngine, RoundRecord};
pub use stellar::{single_photon_probability, stellar_state, StellarComponent, StellarMixture};
pub use strategy::{
    apply_strategy, apply_strategy_mixed, branch_phases, referee_verify, referee_verify_mixed, JointState,
    StrategyInstrument,
};
