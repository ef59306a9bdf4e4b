use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::error::{domain, Result};

/// Largest ancilla pair count the explicit state is built for.
pub const MAX_SIMULATED_PAIRS: usize = 16;

/// `n` ancilla pairs `(|01⟩ + e^{iδ}|10⟩)/√2` shared between the two
/// telescopes, and a stellar photon `(|01⟩ + e^{iφ}|10⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionConfig {
    pairs: usize,
    delta: f64,
    phi: f64,
}

impl ExtractionConfig {
    pub fn new(pairs: usize, phi: f64, delta: f64) -> Result<Self> {
        if pairs < 1 {
            return Err(domain("need at least one ancilla pair"));
        }
        for (name, v) in [("φ", phi), ("δ", delta)] {
            if !(0.0..TAU).contains(&v) {
                return Err(domain(format!("{name} = {v} outside [0, 2π)")));
            }
        }
        Ok(Self { pairs, delta, phi })
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// The `(n+1)`-photon state in the basis of photon placements: which
/// telescope the stellar photon reached, and which ancilla photons sit on
/// the left.
///
/// Index layout: bit `n` is the stellar photon (1 = left); ancilla photon
/// `i` is bit `n − 1 − i`, so numeric order of the low `n` bits is
/// lexicographic order of the pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorState {
    pairs: usize,
    amps: Vec<C64>,
}

impl SectorState {
    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn index(&self, stellar_left: bool, pattern: usize) -> usize {
        ((stellar_left as usize) << self.pairs) | pattern
    }

    pub fn amp(&self, stellar_left: bool, pattern: usize) -> C64 {
        self.amps[self.index(stellar_left, pattern)]
    }

    /// Photons on Alice's (left) side for a basis index.
    pub fn left_count(&self, index: usize) -> usize {
        index.count_ones() as usize
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Weight on "no photon left" and "every photon left".
    pub fn abort_probability(&self) -> f64 {
        let all = (1usize << (self.pairs + 1)) - 1;
        self.amps[0].norm_sqr() + self.amps[all].norm_sqr()
    }

    /// Basis indices with `k + 1` photons on the left, ordered as group A
    /// (stellar photon right) then group B (stellar photon left),
    /// lexicographic by pattern within each group.
    pub fn sector(&self, k: usize) -> Result<Vec<usize>> {
        sector_indices(self.pairs, k)
    }
}

pub(crate) fn sector_indices(pairs: usize, k: usize) -> Result<Vec<usize>> {
    if k >= pairs {
        return Err(domain(format!("sector k = {k} out of range 0..{pairs}")));
    }
    let left_bit = 1usize << pairs;
    let patterns = 0..left_bit;
    let mut out: Vec<usize> = patterns
        .clone()
        .filter(|p| p.count_ones() as usize == k + 1)
        .collect();
    out.extend(patterns.filter(|p| p.count_ones() as usize == k).map(|p| p | left_bit));
    Ok(out)
}

/// Builds the full state; amplitudes are `e^{iδ|x|}` with the stellar photon
/// right and `e^{iφ}e^{iδ|x|}` with it left, times `2^{−(n+1)/2}`.
pub fn joint_state(config: &ExtractionConfig) -> Result<SectorState> {
    let n = config.pairs;
    if n > MAX_SIMULATED_PAIRS {
        return Err(domain(format!(
            "explicit state limited to n ≤ {MAX_SIMULATED_PAIRS}, got {n}"
        )));
    }
    let scale = (0.5f64).powf((n + 1) as f64 / 2.0);
    let half = 1usize << n;
    let mut amps = Vec::with_capacity(2 * half);
    for stellar_left in [false, true] {
        for pattern in 0..half {
            let mut phase = config.delta * pattern.count_ones() as f64;
            if stellar_left {
                phase += config.phi;
            }
            amps.push(C64::from_polar(scale, phase));
        }
    }
    Ok(SectorState { pairs: n, amps })
}
