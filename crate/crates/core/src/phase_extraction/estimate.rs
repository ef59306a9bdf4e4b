use std::f64::consts::{PI, TAU};

use rand::Rng;

use super::fisher::{abort_probability, outcome_probability, sector_contrast, sector_probability};
use crate::error::{domain, Result};
use crate::qudit::sample_index;

/// Minimum number of non-abort runs accepted by [`mle_estimate`].
pub const MIN_DETECTIONS: usize = 100;

/// A non-abort run: sector `k` (`k + 1` photons left) and Bob's bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Detection {
    pub k: usize,
    pub bit: u8,
}

/// Draws `runs` outcomes straight from the closed-form distribution;
/// `None` marks an abort.
pub fn sample_closed_form<R: Rng + ?Sized>(
    pairs: usize,
    phi: f64,
    delta: f64,
    runs: usize,
    rng: &mut R,
) -> Result<Vec<Option<Detection>>> {
    let mut weights = vec![abort_probability(pairs)];
    for k in 0..pairs {
        weights.push(sector_probability(pairs, k)?);
    }
    let p0: Vec<f64> = (0..pairs)
        .map(|k| outcome_probability(pairs, k, phi, delta, 0))
        .collect::<Result<_>>()?;
    (0..runs)
        .map(|_| {
            let pick = sample_index(&weights, rng).ok_or_else(|| domain("empty distribution"))?;
            if pick == 0 {
                return Ok(None);
            }
            let k = pick - 1;
            let bit = if rng.random::<f64>() < p0[k] { 0 } else { 1 };
            Ok(Some(Detection { k, bit }))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleEstimate {
    pub phi_hat: f64,
    /// From the observed information; infinite when that is not positive.
    pub stderr: f64,
    /// All bits identical or the likelihood is flat at its maximum.
    pub degenerate: bool,
    pub detections: usize,
}

/// Bit tallies per sector.
struct Tally {
    contrast: Vec<f64>,
    zeros: Vec<f64>,
    ones: Vec<f64>,
}

impl Tally {
    fn log_likelihood(&self, theta: f64) -> f64 {
        let c = theta.cos();
        let mut total = 0.0;
        for k in 0..self.contrast.len() {
            let x = self.contrast[k] * c;
            if self.zeros[k] > 0.0 {
                total += self.zeros[k] * (0.5 * (1.0 + x)).max(f64::MIN_POSITIVE).ln();
            }
            if self.ones[k] > 0.0 {
                total += self.ones[k] * (0.5 * (1.0 - x)).max(f64::MIN_POSITIVE).ln();
            }
        }
        total
    }

    /// `−∂²/∂θ² log L`.
    fn observed_information(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let mut info = 0.0;
        for k in 0..self.contrast.len() {
            let ck = self.contrast[k];
            for (count, sign) in [(self.zeros[k], 1.0), (self.ones[k], -1.0)] {
                if count == 0.0 {
                    continue;
                }
                let p = 0.5 * (1.0 + sign * ck * c);
                let dp = -0.5 * sign * ck * s;
                let d2p = -0.5 * sign * ck * c;
                info += count * (dp * dp - p * d2p) / (p * p);
            }
        }
        info
    }
}

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > 1e-12 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = f(a);
        }
    }
    (lo + hi) / 2.0
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Maximum-likelihood φ from detections at known δ.
///
/// The likelihood depends on φ only through `cos(φ − δ)`, so φ and `2δ − φ`
/// are indistinguishable; the returned estimate is the one nearer to
/// `prior`.
pub fn mle_estimate(samples: &[Detection], pairs: usize, delta: f64, prior: f64) -> Result<MleEstimate> {
    if samples.len() < MIN_DETECTIONS {
        return Err(domain(format!(
            "need at least {MIN_DETECTIONS} non-abort runs, got {}",
            samples.len()
        )));
    }
    let mut tally = Tally {
        contrast: (0..pairs).map(|k| sector_contrast(pairs, k)).collect(),
        zeros: vec![0.0; pairs],
        ones: vec![0.0; pairs],
    };
    for s in samples {
        if s.k >= pairs || s.bit > 1 {
            return Err(domain(format!("sample {s:?} out of range for n = {pairs}")));
        }
        if s.bit == 0 {
            tally.zeros[s.k] += 1.0;
        } else {
            tally.ones[s.k] += 1.0;
        }
    }

    let f = |t: f64| tally.log_likelihood(t);
    let mut best = (f(0.0), 0.0);
    for i in 0..3 {
        let lo = PI * i as f64 / 3.0;
        let hi = PI * (i + 1) as f64 / 3.0;
        let t = golden_max(&f, lo, hi);
        let v = f(t);
        if v > best.0 {
            best = (v, t);
        }
    }
    if f(PI) > best.0 {
        best = (f(PI), PI);
    }
    let theta = best.1;

    let plus = (delta + theta).rem_euclid(TAU);
    let minus = (delta - theta).rem_euclid(TAU);
    let phi_hat = if circular_distance(plus, prior) <= circular_distance(minus, prior) {
        plus
    } else {
        minus
    };

    let info = tally.observed_information(theta);
    let one_sided = tally.zeros.iter().sum::<f64>() == 0.0 || tally.ones.iter().sum::<f64>() == 0.0;
    let informative = info.is_finite() && info > 0.0;
    Ok(MleEstimate {
        phi_hat,
        stderr: if informative { 1.0 / info.sqrt() } else { f64::INFINITY },
        degenerate: one_sided || !informative,
        detections: samples.len(),
    })
}
