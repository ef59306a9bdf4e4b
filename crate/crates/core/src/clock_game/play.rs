use num_complex::Complex64 as C64;
use rand::Rng;

use super::ancilla::AncillaSpec;
use super::config::{decode_timebin, referee_state, GameConfig, RefereeBasis};
use super::strategy::branch_phases;
use crate::error::{domain, Error, Result};
use crate::qudit::{sample_index, to_fourier_coordinates, HilbertSpace, StateVector};
use crate::rng::seeded_rng;

/// One sampled round of the clock game.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    /// Fourier-basis outcome of each party's ancilla qudit.
    pub outcomes: Vec<usize>,
    pub decoded_bin: usize,
    pub referee_accept: bool,
    /// Acceptance probability the referee's check was sampled from.
    pub post_fidelity: f64,
    pub seed: u64,
    pub timebin: usize,
    pub win: bool,
}

/// Samples rounds for one ancilla. Holds, for every ensemble member of the
/// ancilla and every referee component `b`, the Fourier amplitudes
/// `⟨x̃_1…x̃_K| U_b |χ⟩` of the gated ancilla.
#[derive(Debug, Clone)]
pub struct RoundEngine {
    basis: RefereeBasis,
    levels: usize,
    space: HilbertSpace,
    /// `(weight, branches[b][x])`
    members: Vec<(f64, Vec<Vec<C64>>)>,
}

impl RoundEngine {
    pub fn new(basis: RefereeBasis, ancilla: &AncillaSpec) -> Result<Self> {
        if basis.parties != ancilla.parties() {
            return Err(Error::DimensionMismatch {
                expected: basis.parties,
                got: ancilla.parties(),
            });
        }
        let levels = ancilla.levels();
        let phases: Vec<Vec<C64>> = (0..basis.dim()).map(|b| branch_phases(basis, levels, b)).collect();
        let members = ancilla
            .ensemble()
            .into_iter()
            .map(|(weight, chi)| {
                let branches = phases
                    .iter()
                    .map(|ph| {
                        let amps = chi.amps().iter().zip(ph).map(|(c, p)| c * p).collect();
                        Ok(to_fourier_coordinates(&StateVector::from_raw(chi.space().clone(), amps))?.into_amps())
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((weight, branches))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            basis,
            levels,
            space: ancilla.space(),
            members,
        })
    }

    /// `Σ_i λ_i w_s^i(x) conj(w_t^i(x))`: the ancilla's overlap between the
    /// branches of referee components `s` and `t` at outcome `x`.
    fn meter(&self, x: usize, s: usize, t: usize) -> C64 {
        self.members
            .iter()
            .map(|(w, br)| br[s][x] * br[t][x].conj() * *w)
            .sum()
    }

    /// Plays the round described by `config`.
    pub fn play(&self, config: &GameConfig, seed: u64) -> Result<RoundRecord> {
        if config.basis() != self.basis || config.levels() != self.levels {
            return Err(domain("round does not match the engine's game shape"));
        }
        let mut rng = seeded_rng(seed);
        let referee = referee_state(config);
        let support = referee.support();
        let weights: Vec<f64> = support.iter().map(|&b| referee.amps()[b].norm_sqr()).collect();

        // P(x) = Σ_s |a_s|² M_x[s,s]
        let probs: Vec<f64> = (0..self.space.total_dim())
            .map(|x| {
                support
                    .iter()
                    .zip(&weights)
                    .map(|(&b, w)| w * self.meter(x, b, b).re)
                    .sum::<f64>()
                    .max(0.0)
            })
            .collect();
        let x = sample_index(&probs, &mut rng).ok_or_else(|| domain("ancilla yields no outcome"))?;

        // ⟨ψ|ρ_x|ψ⟩ with ρ_x[s,t] ∝ a_s conj(a_t) M_x[s,t]
        let mut overlap = 0.0;
        for (&s, ws) in support.iter().zip(&weights) {
            for (&t, wt) in support.iter().zip(&weights) {
                overlap += ws * wt * self.meter(x, s, t).re;
            }
        }
        let post_fidelity = (overlap / probs[x]).clamp(0.0, 1.0);

        let outcomes = self.space.digits(x);
        let decoded_bin = decode_timebin(&outcomes, self.levels)?;
        let referee_accept = rng.random::<f64>() < post_fidelity;
        Ok(RoundRecord {
            outcomes,
            decoded_bin,
            referee_accept,
            post_fidelity,
            seed,
            timebin: config.timebin(),
            win: referee_accept && decoded_bin == config.timebin(),
        })
    }
}

/// Plays one round: controlled-Zⁿ gates, Fourier measurement of every
/// ancilla qudit, decoding, and a sampled referee check.
pub fn play_round(config: &GameConfig, ancilla: &AncillaSpec, seed: u64) -> Result<RoundRecord> {
    if config.levels() != ancilla.levels() {
        return Err(Error::DimensionMismatch {
            expected: config.levels(),
            got: ancilla.levels(),
        });
    }
    RoundEngine::new(config.basis(), ancilla)?.play(config, seed)
}
