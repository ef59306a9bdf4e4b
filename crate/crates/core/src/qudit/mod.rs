//! Dense linear algebra for small composite qudit systems.

mod gates;
mod ops;
mod space;
mod state;

pub use gates::{fourier_matrix, fourier_vector, ghz_state, phi_dn_state, to_fourier_coordinates, z_power};
pub(crate) use gates::root_of_unity;
pub use ops::{
    apply_unitary, apply_unitary_density, embed, measure_subsystem, outcome_probabilities,
    partial_trace, reduced_density, vn_entropy, Measurement,
};
pub(crate) use ops::sample_index;
pub use space::HilbertSpace;
pub use state::{DensityMatrix, StateVector, UnitaryMatrix, HERMITIAN_TOL, NORM_TOL, PSD_TOL, UNITARY_TOL};
