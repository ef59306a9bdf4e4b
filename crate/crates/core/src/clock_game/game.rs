use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;

use super::ancilla::AncillaSpec;
use super::config::{encoded_state, GameConfig};
use super::play::RoundEngine;
use super::strategy::StrategyInstrument;
use crate::error::{domain, Error, Result};
use crate::rng::{seeded_rng, trial_seed};

pub const DEFAULT_PHASE_GRID: usize = 32;

/// The set of rounds a win probability averages over: every time-bin
/// `0..=N` and a uniform grid of phases.
#[derive(Debug, Clone, PartialEq)]
pub struct GameFamily {
    bins: usize,
    levels: usize,
    parties: usize,
    phase_grid: usize,
}

impl GameFamily {
    pub fn new(bins: usize, levels: usize, parties: usize) -> Result<Self> {
        GameConfig::new(bins, levels, parties)?;
        Ok(Self::unchecked(bins, levels, parties))
    }

    /// Allows `N > D − 1`.
    pub fn undersized(bins: usize, levels: usize, parties: usize) -> Result<Self> {
        GameConfig::undersized(bins, levels, parties)?;
        Ok(Self::unchecked(bins, levels, parties))
    }

    fn unchecked(bins: usize, levels: usize, parties: usize) -> Self {
        Self {
            bins,
            levels,
            parties,
            phase_grid: DEFAULT_PHASE_GRID,
        }
    }

    pub fn with_phase_grid(mut self, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(domain("phase grid needs at least one point"));
        }
        self.phase_grid = points;
        Ok(self)
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn phase_grid(&self) -> usize {
        self.phase_grid
    }

    /// Grid point `i` as the phases of parties 2..K. With more than two
    /// parties, party `p` gets `p·φ mod 2π`.
    pub fn phases(&self, i: usize) -> Vec<f64> {
        let phi = TAU * i as f64 / self.phase_grid as f64;
        (1..self.parties).map(|p| (p as f64 * phi).rem_euclid(TAU)).collect()
    }

    /// The round with time-bin `n` at phase-grid point `i`.
    pub fn config(&self, n: usize, i: usize) -> Result<GameConfig> {
        GameConfig::undersized(self.bins, self.levels, self.parties)?
            .with_timebin(n)?
            .with_phases(self.phases(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WinMode {
    Exact,
    MonteCarlo { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WinEstimate {
    pub p_win: f64,
    /// Binomial standard error; zero in exact mode.
    pub stderr: f64,
}

fn check_match(family: &GameFamily, ancilla: &AncillaSpec) -> Result<()> {
    if family.levels != ancilla.levels() {
        return Err(Error::DimensionMismatch {
            expected: family.levels,
            got: ancilla.levels(),
        });
    }
    if family.parties != ancilla.parties() {
        return Err(Error::DimensionMismatch {
            expected: family.parties,
            got: ancilla.parties(),
        });
    }
    Ok(())
}

/// Exact win probability of every round: `table[n][i]` for time-bin `n` and
/// phase-grid point `i`.
pub fn win_table(family: &GameFamily, ancilla: &AncillaSpec) -> Result<Vec<Vec<f64>>> {
    check_match(family, ancilla)?;
    let probe = family.config(0, 0)?;
    let instrument = StrategyInstrument::full(probe.basis(), ancilla)?;
    (0..=family.bins)
        .map(|n| {
            (0..family.phase_grid)
                .map(|i| {
                    let state = encoded_state(probe.basis(), n, &family.phases(i));
                    if n >= family.levels {
                        return Ok(0.0);
                    }
                    instrument.joint_accept(&state, n)
                })
                .collect()
        })
        .collect()
}

/// Win probability averaged uniformly over time-bins and the phase grid.
pub fn win_probability(family: &GameFamily, ancilla: &AncillaSpec, mode: WinMode) -> Result<WinEstimate> {
    check_match(family, ancilla)?;
    match mode {
        WinMode::Exact => {
            let table = win_table(family, ancilla)?;
            let cells = (table.len() * family.phase_grid) as f64;
            let total: f64 = table.iter().flatten().sum();
            Ok(WinEstimate {
                p_win: total / cells,
                stderr: 0.0,
            })
        }
        WinMode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(domain("Monte-Carlo mode needs at least one trial"));
            }
            let engine = RoundEngine::new(family.config(0, 0)?.basis(), ancilla)?;
            let wins = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = seeded_rng(trial_seed(seed, t));
                    let n = rng.random_range(0..=family.bins);
                    let i = rng.random_range(0..family.phase_grid);
                    let cfg = family.config(n, i)?;
                    Ok(engine.play(&cfg, rng.random())?.win as u64)
                })
                .collect::<Result<Vec<u64>>>()?
                .into_iter()
                .sum::<u64>();
            let p = wins as f64 / trials as f64;
            Ok(WinEstimate {
                p_win: p,
                stderr: (p * (1.0 - p) / trials as f64).sqrt(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_wins_exactly() {
        for (n, k) in [(1, 2), (3, 2), (2, 3), (2, 4)] {
            let fam = GameFamily::new(n, n + 1, k).unwrap();
            let anc = AncillaSpec::maximal(n + 1, k).unwrap();
            let w = win_probability(&fam, &anc, WinMode::Exact).unwrap();
            assert!((w.p_win - 1.0).abs() < 1e-12, "N={n} K={k}: {}", w.p_win);
        }
    }

    #[test]
    fn schmidt_point_eight() {
        let fam = GameFamily::new(1, 2, 2).unwrap();
        let anc = AncillaSpec::schmidt_real(&[0.9f64.sqrt(), 0.1f64.sqrt()], 2).unwrap();
        let w = win_probability(&fam, &anc, WinMode::Exact).unwrap();
        assert!((w.p_win - 0.8).abs() < 1e-12);
    }

    #[test]
    fn zero_trials_rejected() {
        let fam = GameFamily::new(1, 2, 2).unwrap();
        let anc = AncillaSpec::maximal(2, 2).unwrap();
        assert!(win_probability(&fam, &anc, WinMode::MonteCarlo { trials: 0, seed: 1 }).is_err());
        assert!(fam.with_phase_grid(0).is_err());
    }

    #[test]
    fn undersized_family_loses_unreachable_bins() {
        let fam = GameFamily::undersized(2, 2, 2).unwrap();
        let anc = AncillaSpec::maximal(2, 2).unwrap();
        let table = win_table(&fam, &anc).unwrap();
        assert!(table[2].iter().all(|&p| p == 0.0));
        assert!(table[1].iter().all(|&p| (p - 1.0).abs() < 1e-12));
    }

    #[test]
    fn phase_grid_for_three_parties() {
        let fam = GameFamily::new(1, 2, 3).unwrap().with_phase_grid(4).unwrap();
        let p = fam.phases(3);
        assert!((p[0] - 1.5 * std::f64::consts::PI).abs() < 1e-12);
        assert!((p[1] - std::f64::consts::PI).abs() < 1e-12);
    }
}
