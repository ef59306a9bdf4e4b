use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::ancilla::AncillaSpec;
use super::config::{encoded_state, RefereeBasis};
use super::strategy::StrategyInstrument;
use crate::error::{domain, invalid, Result};
use crate::qudit::{DensityMatrix, HilbertSpace};

/// One pure round inside the stellar mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StellarComponent {
    pub weight: f64,
    pub timebin: usize,
    pub phase: f64,
}

/// Two-telescope light from a set of weak point sources, restricted to at
/// most one photon across `N` time-bins.
#[derive(Debug, Clone)]
pub struct StellarMixture {
    pub bins: usize,
    /// Probability that exactly one photon arrives in the `N` bins.
    pub epsilon: f64,
    /// `Σ_q p_q e^{−iφ_q}`.
    pub visibility: C64,
    pub density: DensityMatrix,
    pub ensemble: Vec<StellarComponent>,
}

/// Probability of exactly one arrival among `bins` independent bins each
/// holding a photon with probability `epsilon1`.
pub fn single_photon_probability(bins: usize, epsilon1: f64) -> f64 {
    bins as f64 * epsilon1 * (1.0 - epsilon1).powi(bins as i32 - 1)
}

/// `sources` lists `(p_q, φ_q)`: relative brightness and the phase
/// difference it imprints between the two telescopes.
pub fn stellar_state(bins: usize, epsilon1: f64, sources: &[(f64, f64)]) -> Result<StellarMixture> {
    if bins == 0 {
        return Err(domain("need at least one time-bin"));
    }
    if !(epsilon1 > 0.0 && epsilon1 < 1.0) {
        return Err(domain(format!("per-bin photon probability {epsilon1} outside (0, 1)")));
    }
    if sources.is_empty() {
        return Err(domain("need at least one source"));
    }
    if sources.iter().any(|&(p, _)| p < 0.0) {
        return Err(invalid("source weights", "negative weight"));
    }
    let total: f64 = sources.iter().map(|s| s.0).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(invalid("source weights", format!("sum to {total}, not 1")));
    }

    let epsilon = single_photon_probability(bins, epsilon1);
    let visibility: C64 = sources.iter().map(|&(p, phi)| C64::from_polar(p, -phi)).sum();
    let basis = RefereeBasis { bins, parties: 2 };

    let mut ensemble = vec![StellarComponent {
        weight: 1.0 - epsilon,
        timebin: 0,
        phase: 0.0,
    }];
    for timebin in 1..=bins {
        for &(p, phi) in sources {
            ensemble.push(StellarComponent {
                weight: epsilon / bins as f64 * p,
                timebin,
                phase: phi.rem_euclid(std::f64::consts::TAU),
            });
        }
    }

    let dim = basis.dim();
    let mut rho = DMatrix::<C64>::zeros(dim, dim);
    for c in &ensemble {
        let v = nalgebra::DVector::from_column_slice(encoded_state(basis, c.timebin, &[c.phase]).amps());
        rho += (&v * v.adjoint()) * C64::new(c.weight, 0.0);
    }
    let density = DensityMatrix::new(HilbertSpace::new(vec![dim])?, rho)?;
    Ok(StellarMixture {
        bins,
        epsilon,
        visibility,
        density,
        ensemble,
    })
}

impl StellarMixture {
    /// Win probability of the strategy, weighting each pure round by its
    /// share of the mixture.
    pub fn win_probability(&self, ancilla: &AncillaSpec) -> Result<f64> {
        let basis = RefereeBasis {
            bins: self.bins,
            parties: 2,
        };
        let instrument = StrategyInstrument::full(basis, ancilla)?;
        let mut total = 0.0;
        for c in &self.ensemble {
            if c.timebin >= ancilla.levels() {
                continue;
            }
            let state = encoded_state(basis, c.timebin, &[c.phase]);
            total += c.weight * instrument.joint_accept(&state, c.timebin)?;
        }
        Ok(total)
    }
}
