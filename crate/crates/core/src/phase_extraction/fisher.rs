use std::f64::consts::{LN_2, TAU};

use crate::error::{domain, Result};

/// Default number of φ points for averaging the Fisher information.
pub const DEFAULT_FISHER_GRID: usize = 4096;

/// `C(n, k)`; panics on overflow of `u64`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u64)
            .expect("binomial coefficient overflows u64")
            / (i as u64 + 1);
    }
    acc
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

fn check_sector(pairs: usize, k: usize) -> Result<()> {
    if pairs < 1 {
        return Err(domain("need at least one ancilla pair"));
    }
    if k >= pairs {
        return Err(domain(format!("sector k = {k} out of range 0..{pairs}")));
    }
    Ok(())
}

/// Fringe contrast `2√((n−k)(k+1))/(n+1)` seen by Bob in sector `k`.
pub fn sector_contrast(pairs: usize, k: usize) -> f64 {
    2.0 * (((pairs - k) * (k + 1)) as f64).sqrt() / (pairs + 1) as f64
}

/// Whether sector `k` has unit contrast, i.e. `(n+1)² = 4(n−k)(k+1)`.
fn full_contrast(pairs: usize, k: usize) -> bool {
    (pairs + 1) * (pairs + 1) == 4 * (pairs - k) * (k + 1)
}

/// `P(bit | k + 1 photons on the left) = ½(1 ± c_k cos(φ − δ))`.
pub fn outcome_probability(pairs: usize, k: usize, phi: f64, delta: f64, bit: u8) -> Result<f64> {
    check_sector(pairs, k)?;
    let sign = match bit {
        0 => 1.0,
        1 => -1.0,
        _ => return Err(domain(format!("bit must be 0 or 1, got {bit}"))),
    };
    Ok(0.5 * (1.0 + sign * sector_contrast(pairs, k) * (phi - delta).cos()))
}

/// `C(n+1, k+1) / 2^{n+1}`.
pub fn sector_probability(pairs: usize, k: usize) -> Result<f64> {
    check_sector(pairs, k)?;
    Ok((ln_binomial(pairs + 1, k + 1) - (pairs + 1) as f64 * LN_2).exp())
}

/// `2 / 2^{n+1}`.
pub fn abort_probability(pairs: usize) -> f64 {
    (LN_2 * (1.0 - (pairs + 1) as f64)).exp()
}

/// Fisher information about φ carried by Bob's bit in sector `k`:
/// `sin²θ / ((n+1)²/(4(n−k)(k+1)) − cos²θ)` with `θ = φ − δ`.
///
/// Unit-contrast sectors give exactly 1 for every θ (the ratio is
/// `sin²θ/sin²θ`), including the removable point `θ = 0`.
pub fn sector_fisher(pairs: usize, k: usize, phi: f64, delta: f64) -> Result<f64> {
    check_sector(pairs, k)?;
    if full_contrast(pairs, k) {
        return Ok(1.0);
    }
    let theta = phi - delta;
    let n1 = (pairs + 1) as f64;
    let den = n1 * n1 / (4.0 * ((pairs - k) * (k + 1)) as f64) - theta.cos().powi(2);
    Ok(theta.sin().powi(2) / den)
}

/// Fisher information of one protocol run and its ingredients.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherReport {
    pub pairs: usize,
    pub phi: f64,
    pub delta: f64,
    /// `Pr(k + 1)` for `k = 0..n`.
    pub sector_probabilities: Vec<f64>,
    /// Per-sector Fisher information, before weighting.
    pub contributions: Vec<f64>,
    /// `Σ_k Pr(k+1) · contribution_k`.
    pub total: f64,
    /// Uniform φ-average of `total` on the default grid.
    pub average: f64,
}

fn total_fisher(pairs: usize, weights: &[f64], phi: f64, delta: f64) -> f64 {
    weights
        .iter()
        .enumerate()
        .map(|(k, w)| w * sector_fisher(pairs, k, phi, delta).expect("k in range"))
        .sum()
}

fn sector_weights(pairs: usize) -> Vec<f64> {
    (0..pairs)
        .map(|k| sector_probability(pairs, k).expect("k in range"))
        .collect()
}

pub fn fisher_information(pairs: usize, phi: f64, delta: f64) -> Result<FisherReport> {
    if pairs < 1 {
        return Err(domain("need at least one ancilla pair"));
    }
    let sector_probabilities = sector_weights(pairs);
    let contributions = (0..pairs)
        .map(|k| sector_fisher(pairs, k, phi, delta))
        .collect::<Result<Vec<_>>>()?;
    let total = sector_probabilities.iter().zip(&contributions).map(|(p, c)| p * c).sum();
    Ok(FisherReport {
        pairs,
        phi,
        delta,
        sector_probabilities,
        contributions,
        total,
        average: average_fisher(pairs, DEFAULT_FISHER_GRID)?,
    })
}

/// Mean Fisher information over `grid` equally spaced φ in `[0, 2π)`, δ = 0.
pub fn average_fisher(pairs: usize, grid: usize) -> Result<f64> {
    if pairs < 1 {
        return Err(domain("need at least one ancilla pair"));
    }
    if grid < 64 {
        return Err(domain(format!("φ grid needs at least 64 points, got {grid}")));
    }
    let weights = sector_weights(pairs);
    let sum: f64 = (0..grid)
        .map(|i| total_fisher(pairs, &weights, TAU * i as f64 / grid as f64, 0.0))
        .sum();
    Ok(sum / grid as f64)
}

/// The φ-average in closed form: `Σ_k Pr(k+1) (1 − |n − 2k − 1|/(n+1))`,
/// from `(1/2π)∫ sin²θ/(a − cos²θ) dθ = 1 − √(1 − 1/a)`.
pub fn average_fisher_closed_form(pairs: usize) -> Result<f64> {
    if pairs < 1 {
        return Err(domain("need at least one ancilla pair"));
    }
    let n1 = (pairs + 1) as f64;
    Ok((0..pairs)
        .map(|k| {
            let gap = (pairs as f64 - 2.0 * k as f64 - 1.0).abs();
            sector_probability(pairs, k).expect("k in range") * (1.0 - gap / n1)
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(17, 8), 24310);
        assert_eq!(binomial(3, 5), 0);
        assert!((sector_probability(3, 1).unwrap() - 3.0 / 8.0).abs() < 1e-15);
        assert!((sector_probability(1, 0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn probabilities_close() {
        for n in 1..=16 {
            let mut total = 2.0 / (1u64 << (n + 1)) as f64;
            assert!((abort_probability(n) - total).abs() < 1e-16);
            for k in 0..n {
                total += sector_probability(n, k).unwrap();
                for phi in [0.0, 0.4, 2.0, 5.9] {
                    let s = outcome_probability(n, k, phi, 0.3, 0).unwrap()
                        + outcome_probability(n, k, phi, 0.3, 1).unwrap();
                    assert!((s - 1.0).abs() < 1e-12);
                }
            }
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spec_outcome_cases() {
        assert!((outcome_probability(1, 0, 0.5, 0.5, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((outcome_probability(5, 2, 1.0, 1.0, 0).unwrap() - 1.0).abs() < 1e-15);
        for k in 0..6 {
            let p = outcome_probability(6, k, FRAC_PI_2, 0.0, 0).unwrap();
            assert!((p - 0.5).abs() < 1e-15);
        }
        assert!(outcome_probability(3, 3, 0.0, 0.0, 0).is_err());
        assert!(outcome_probability(3, 0, 0.0, 0.0, 2).is_err());
    }

    #[test]
    fn one_pair_half() {
        let r = fisher_information(1, FRAC_PI_2, 0.0).unwrap();
        assert!((r.total - 0.5).abs() < 1e-12);
        assert!((r.average - 0.5).abs() < 1e-12);
        assert!((fisher_information(1, 0.0, 0.0).unwrap().total - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quadrature_point_closed_form() {
        for n in [1usize, 2, 5, 10, 50] {
            let r = fisher_information(n, FRAC_PI_2, 0.0).unwrap();
            assert!((r.total - (1.0 - 1.0 / (n + 1) as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn average_matches_closed_form() {
        for n in [1usize, 3, 8, 30] {
            let grid = average_fisher(n, DEFAULT_FISHER_GRID).unwrap();
            let exact = average_fisher_closed_form(n).unwrap();
            assert!((grid - exact).abs() < 1e-9, "n={n}: {grid} vs {exact}");
        }
        assert!(average_fisher(3, 32).is_err());
    }
}
