//! Entanglement and qubit accounting: how much shared entanglement the
//! clock game needs, and what it saves over one multipartite state per bin.

use num_complex::Complex64 as C64;

use crate::clock_game::AncillaSpec;
use crate::error::{domain, Error, Result};
use crate::qudit::{vn_entropy, NORM_TOL};

/// Slack allowed when comparing entropy to the bound.
pub const AUDIT_TOL: f64 = 1e-9;

/// Entanglement of a two-party ancilla against the `log₂(N+1)` ebits needed
/// to win with `N` time-bins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditReport {
    pub bins: usize,
    pub levels: usize,
    pub measured_entropy: f64,
    pub bound: f64,
    pub satisfied: bool,
    /// `measured_entropy − bound`.
    pub margin: f64,
}

pub fn entanglement_audit(ancilla: &AncillaSpec, bins: usize) -> Result<AuditReport> {
    if ancilla.parties() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: ancilla.parties(),
        });
    }
    if bins < 1 {
        return Err(domain("need at least one time-bin"));
    }
    let measured_entropy = vn_entropy(&ancilla.one_party_marginal()?)?;
    let bound = ((bins + 1) as f64).log2();
    Ok(AuditReport {
        bins,
        levels: ancilla.levels(),
        measured_entropy,
        bound,
        satisfied: measured_entropy >= bound - AUDIT_TOL,
        margin: measured_entropy - bound,
    })
}

/// Probability that the controlled-Zⁿ strategy decodes the right bin with
/// ancilla `Σ_j c_j |jj⟩`: `|Σ_j c_j|² / D`.
pub fn decode_probability_curve(coeffs: &[C64]) -> Result<f64> {
    if coeffs.is_empty() {
        return Err(domain("need at least one coefficient"));
    }
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(crate::error::invalid("Schmidt coefficients", format!("Σ|c|² = {norm}")));
    }
    Ok(coeffs.iter().sum::<C64>().norm_sqr() / coeffs.len() as f64)
}

/// Fewest levels each party's meter needs to tell `N` bins and the vacuum
/// apart.
pub fn min_local_dimension(bins: usize) -> Result<usize> {
    if bins < 1 {
        return Err(domain("need at least one time-bin"));
    }
    Ok(bins + 1)
}

/// Distributed qubits needed by two ways of handling `N` time-bins across
/// `M` telescopes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostComparison {
    pub telescopes: usize,
    pub bins: usize,
    /// One `M`-qubit entangled state per bin: `N·M`.
    pub per_bin_qubits: u64,
    /// One `M`-qubit state for the phase plus `⌈log₂(N+1)⌉` qubits per
    /// telescope for the clock game.
    pub clock_game_qubits: u64,
}

/// Qubits per telescope to hold a `(N+1)`-level qudit.
pub fn qubits_per_qudit(bins: usize) -> u32 {
    (bins as u64 + 1).next_power_of_two().trailing_zeros()
}

pub fn cost_comparison(telescopes: usize, bins: usize) -> Result<CostComparison> {
    if telescopes < 2 {
        return Err(domain(format!("need at least two telescopes, got {telescopes}")));
    }
    if bins < 1 {
        return Err(domain("need at least one time-bin"));
    }
    let m = telescopes as u64;
    Ok(CostComparison {
        telescopes,
        bins,
        per_bin_qubits: bins as u64 * m,
        clock_game_qubits: m + m * qubits_per_qudit(bins) as u64,
    })
}
