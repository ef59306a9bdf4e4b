use num_complex::Complex64 as C64;
use rand::Rng;

use super::state::{joint_state, ExtractionConfig, SectorState};
use crate::error::{domain, Result};
use crate::qudit::{root_of_unity, sample_index};

/// Result of one run of the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolOutcome {
    /// Alice saw no photon or all `n + 1`.
    Abort,
    Detected {
        /// Photons Alice detected, `k + 1`.
        left_count: usize,
        /// Alice's Fourier outcome within the sector.
        j_prime: usize,
        bit: u8,
    },
}

/// Exact outcome statistics of one sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorOutcome {
    pub left_count: usize,
    pub probability: f64,
    /// `P(j′ | sector)` for every Alice outcome.
    pub j_prime_probability: Vec<f64>,
    /// `P(bit = 0 | sector, j′)`.
    pub bit0: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactOutcomes {
    pub abort: f64,
    pub sectors: Vec<SectorOutcome>,
}

/// Precomputed sector amplitudes for repeated runs.
#[derive(Debug, Clone)]
pub struct ExtractionProtocol {
    config: ExtractionConfig,
    state: SectorState,
    /// Amplitudes per sector in the group A / group B order.
    blocks: Vec<Vec<C64>>,
    /// Size of group A per sector.
    group_a: Vec<usize>,
}

impl ExtractionProtocol {
    pub fn new(config: ExtractionConfig) -> Result<Self> {
        let state = joint_state(&config)?;
        let n = config.pairs();
        let mut blocks = Vec::with_capacity(n);
        let mut group_a = Vec::with_capacity(n);
        for k in 0..n {
            let idx = state.sector(k)?;
            group_a.push(idx.iter().filter(|&&i| i >> n == 0).count());
            blocks.push(idx.iter().map(|&i| state.amps()[i]).collect());
        }
        Ok(Self {
            config,
            state,
            blocks,
            group_a,
        })
    }

    pub fn config(&self) -> &ExtractionConfig {
        &self.config
    }

    pub fn state(&self) -> &SectorState {
        &self.state
    }

    fn sector_mass(&self, k: usize) -> f64 {
        self.blocks[k].iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bob's state after Alice reports `j_prime` in sector `k`, with his
    /// phase correction applied, normalized.
    pub fn corrected_bob_state(&self, k: usize, j_prime: usize) -> Result<Vec<C64>> {
        let block = self.blocks.get(k).ok_or_else(|| domain(format!("sector {k} out of range")))?;
        let m = block.len();
        if j_prime >= m {
            return Err(domain(format!("outcome {j_prime} out of range 0..{m}")));
        }
        let (bob, weight) = bob_after_fourier(block, j_prime);
        let scale = 1.0 / weight.sqrt();
        Ok(bob
            .iter()
            .enumerate()
            .map(|(j, b)| b * root_of_unity(-((j * j_prime) as i64), m) * scale)
            .collect())
    }

    /// `P(bit = 0)` for Bob's corrected state: rotate `|0′⟩ → (|0′⟩+|1′⟩)/√2`,
    /// `|1′⟩ → (|0′⟩−|1′⟩)/√2` and measure.
    fn bit0_probability(&self, k: usize, bob: &[C64]) -> f64 {
        let a = self.group_a[k];
        let b = bob.len() - a;
        let on0: C64 = bob[..a].iter().sum::<C64>() / (a as f64).sqrt();
        let on1: C64 = bob[a..].iter().sum::<C64>() / (b as f64).sqrt();
        ((on0 + on1).norm_sqr() / 2.0).clamp(0.0, 1.0)
    }

    /// Exact Born statistics over every sector and every Alice outcome.
    /// Cost grows as the square of the sector size.
    pub fn exact_distribution(&self) -> Result<ExactOutcomes> {
        let mut sectors = Vec::with_capacity(self.blocks.len());
        for (k, block) in self.blocks.iter().enumerate() {
            let m = block.len();
            let mut j_prob = Vec::with_capacity(m);
            let mut bit0 = Vec::with_capacity(m);
            let mass = self.sector_mass(k);
            for jp in 0..m {
                let (_, weight) = bob_after_fourier(block, jp);
                j_prob.push(weight / mass);
                bit0.push(self.bit0_probability(k, &self.corrected_bob_state(k, jp)?));
            }
            sectors.push(SectorOutcome {
                left_count: k + 1,
                probability: mass,
                j_prime_probability: j_prob,
                bit0,
            });
        }
        Ok(ExactOutcomes {
            abort: self.state.abort_probability(),
            sectors,
        })
    }

    /// Samples one run.
    pub fn run<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ProtocolOutcome> {
        let n = self.blocks.len();
        let mut weights = Vec::with_capacity(n + 1);
        weights.push(self.state.abort_probability());
        weights.extend((0..n).map(|k| self.sector_mass(k)));
        let pick = sample_index(&weights, rng).ok_or_else(|| domain("state has no weight"))?;
        if pick == 0 {
            return Ok(ProtocolOutcome::Abort);
        }
        let k = pick - 1;
        // Alice's block outcomes are equally likely: each carries Σ|ψ_j|²/M.
        let j_prime = rng.random_range(0..self.blocks[k].len());
        let bob = self.corrected_bob_state(k, j_prime)?;
        let p0 = self.bit0_probability(k, &bob);
        let bit = if rng.random::<f64>() < p0 { 0 } else { 1 };
        Ok(ProtocolOutcome::Detected {
            left_count: k + 1,
            j_prime,
            bit,
        })
    }
}

/// Bob's unnormalized state `ψ_j ω^{j·j′}/√M` after Alice projects her block
/// on Fourier outcome `j′`, and its squared norm.
fn bob_after_fourier(block: &[C64], j_prime: usize) -> (Vec<C64>, f64) {
    let m = block.len();
    let scale = 1.0 / (m as f64).sqrt();
    let bob: Vec<C64> = block
        .iter()
        .enumerate()
        .map(|(j, psi)| psi * root_of_unity((j * j_prime) as i64, m) * scale)
        .collect();
    let weight = bob.iter().map(|b| b.norm_sqr()).sum();
    (bob, weight)
}

/// One sampled run of the protocol for `config`.
pub fn run_protocol<R: Rng + ?Sized>(config: &ExtractionConfig, rng: &mut R) -> Result<ProtocolOutcome> {
    ExtractionProtocol::new(*config)?.run(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;

    #[test]
    fn corrected_state_ignores_alice_outcome() {
        let p = ExtractionProtocol::new(ExtractionConfig::new(4, 2.1, 0.3).unwrap()).unwrap();
        for k in 0..4 {
            let first = p.corrected_bob_state(k, 0).unwrap();
            let m = first.len();
            for jp in 1..m {
                let other = p.corrected_bob_state(k, jp).unwrap();
                let overlap: C64 = first.iter().zip(&other).map(|(a, b)| a.conj() * b).sum();
                assert!((overlap.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_one_pair() {
        // n = 1: sector k = 0 has weight ½ and, at φ = δ, Bob always reads 0.
        let p = ExtractionProtocol::new(ExtractionConfig::new(1, 0.7, 0.7).unwrap()).unwrap();
        let ex = p.exact_distribution().unwrap();
        assert!((ex.abort - 0.5).abs() < 1e-15);
        assert!((ex.sectors[0].probability - 0.5).abs() < 1e-15);
        assert!(ex.sectors[0].bit0.iter().all(|&b| (b - 1.0).abs() < 1e-12));
    }

    #[test]
    fn sampled_runs_cover_outcomes() {
        let cfg = ExtractionConfig::new(3, 1.0, 0.0).unwrap();
        let p = ExtractionProtocol::new(cfg).unwrap();
        let mut rng = seeded_rng(11);
        let mut aborts = 0;
        for _ in 0..2000 {
            match p.run(&mut rng).unwrap() {
                ProtocolOutcome::Abort => aborts += 1,
                ProtocolOutcome::Detected { left_count, j_prime, bit } => {
                    assert!((1..=3).contains(&left_count));
                    assert!(bit <= 1);
                    assert!(j_prime < crate::phase_extraction::binomial(4, left_count) as usize);
                }
            }
        }
        // 2/16 expected
        assert!((aborts as f64 / 2000.0 - 0.125).abs() < 0.03);
    }
}
