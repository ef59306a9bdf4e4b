//! First-order solutions of the ancilla master equation, starting from the
//! two-qudit GHZ state and written out term by term.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::params::NoiseParams;
use crate::error::{domain, Result};
use crate::qudit::{DensityMatrix, HilbertSpace};

/// A noisy two-qudit ancilla together with its validity flag.
#[derive(Debug, Clone)]
pub struct NoisyAncilla {
    pub density: DensityMatrix,
    /// False when `Δt·(Γ¹ + Γ²)` exceeds the linear-regime limit; the state
    /// is still returned.
    pub linear_regime: bool,
}

fn check_levels(levels: usize, params: &NoiseParams) -> Result<()> {
    if params.levels() != levels {
        return Err(domain(format!(
            "rates are given for D = {}, asked for D = {levels}",
            params.levels()
        )));
    }
    Ok(())
}

fn ghz_projector(levels: usize) -> DMatrix<C64> {
    let dim = levels * levels;
    let mut rho = DMatrix::zeros(dim, dim);
    let w = C64::new(1.0 / levels as f64, 0.0);
    for j in 0..levels {
        for k in 0..levels {
            rho[(j * levels + j, k * levels + k)] = w;
        }
    }
    rho
}

fn add_damping(rho: &mut DMatrix<C64>, levels: usize, params: &NoiseParams) {
    let d = levels;
    let scale = params.delta_t() / d as f64;
    for m in 0..d - 1 {
        let g1 = params.gamma1(0, m);
        let g2 = params.gamma1(1, m);
        // jumps out of |m+1, m+1⟩ on either qudit
        rho[(m * d + m + 1, m * d + m + 1)] += C64::new(scale * g1, 0.0);
        rho[((m + 1) * d + m, (m + 1) * d + m)] += C64::new(scale * g2, 0.0);
        // depletion of |m+1, m+1⟩ against every GHZ component
        let top = (m + 1) * d + (m + 1);
        let loss = C64::new(scale * (g1 + g2) / 2.0, 0.0);
        for k in 0..d {
            let kk = k * d + k;
            rho[(top, kk)] -= loss;
            rho[(kk, top)] -= loss;
        }
    }
}

fn add_dephasing(rho: &mut DMatrix<C64>, levels: usize, params: &NoiseParams) {
    let d = levels;
    let scale = params.delta_t() / d as f64;
    for m in 0..d {
        let rate = (params.gamma2(0, m) + params.gamma2(1, m)) / 2.0;
        let mm = m * d + m;
        rho[(mm, mm)] += C64::new(scale * rate, 0.0);
        let half = C64::new(scale * rate / 2.0, 0.0);
        for k in 0..d {
            let kk = k * d + k;
            rho[(mm, kk)] -= half;
            rho[(kk, mm)] -= half;
        }
    }
}

fn finish(levels: usize, rho: DMatrix<C64>, params: &NoiseParams) -> Result<NoisyAncilla> {
    let density = DensityMatrix::hermitian(HilbertSpace::uniform(levels, 2)?, rho)?;
    Ok(NoisyAncilla {
        density,
        linear_regime: params.is_linear_regime(),
    })
}

/// GHZ ancilla after amplitude damping between adjacent levels, to first
/// order in `Δt·Γ¹`. Dephasing rates in `params` are ignored.
pub fn damped_ancilla(levels: usize, params: &NoiseParams) -> Result<NoisyAncilla> {
    check_levels(levels, params)?;
    let mut rho = ghz_projector(levels);
    add_damping(&mut rho, levels, params);
    finish(levels, rho, params)
}

/// GHZ ancilla after level dephasing, to first order in `Δt·Γ²`. Decay
/// rates in `params` are ignored.
pub fn dephased_ancilla(levels: usize, params: &NoiseParams) -> Result<NoisyAncilla> {
    check_levels(levels, params)?;
    let mut rho = ghz_projector(levels);
    add_dephasing(&mut rho, levels, params);
    finish(levels, rho, params)
}

/// Both channels at once; to first order their contributions add.
pub fn noisy_ancilla(levels: usize, params: &NoiseParams) -> Result<NoisyAncilla> {
    check_levels(levels, params)?;
    let mut rho = ghz_projector(levels);
    add_damping(&mut rho, levels, params);
    add_dephasing(&mut rho, levels, params);
    finish(levels, rho, params)
}
