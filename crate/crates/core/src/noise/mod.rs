//! Amplitude damping and dephasing of the two-qudit ancilla while it waits
//! for the referee's signal.

mod integrator;
mod linearized;
mod params;
mod win;

pub use integrator::lindblad_integrator_oracle;
pub use linearized::{damped_ancilla, dephased_ancilla, noisy_ancilla, NoisyAncilla};
pub use params::{NoiseParams, LINEAR_REGIME_LIMIT};
pub use win::{closed_form_pwin, incorrect_bin_distribution, noisy_win_probability, Channel, RoundKind};
