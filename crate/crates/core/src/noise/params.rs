use crate::error::{domain, Result};

/// Above this value of `Δt·(Γ¹ + Γ²)` the first-order states are flagged as
/// outside their regime of validity.
pub const LINEAR_REGIME_LIMIT: f64 = 0.1;

/// Per-level decay and dephasing rates of a two-qudit ancilla held for a
/// time `delta_t`.
///
/// `gamma1[i][m]` is the rate of `m+1 → m` on qudit `i` (`m < D − 1`);
/// `gamma2[i][m]` is the dephasing rate of level `m` on qudit `i` (`m < D`).
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseParams {
    delta_t: f64,
    gamma1: [Vec<f64>; 2],
    gamma2: [Vec<f64>; 2],
}

impl NoiseParams {
    pub fn new(delta_t: f64, gamma1: [Vec<f64>; 2], gamma2: [Vec<f64>; 2]) -> Result<Self> {
        if !(delta_t >= 0.0) || !delta_t.is_finite() {
            return Err(domain(format!("hold time {delta_t} must be finite and ≥ 0")));
        }
        let levels = gamma2[0].len();
        if levels < 2 {
            return Err(domain(format!("need D ≥ 2 dephasing rates per qudit, got {levels}")));
        }
        for i in 0..2 {
            if gamma2[i].len() != levels {
                return Err(domain("both qudits need the same number of dephasing rates"));
            }
            if gamma1[i].len() != levels - 1 {
                return Err(domain(format!(
                    "qudit {i}: expected {} decay rates for D = {levels}, got {}",
                    levels - 1,
                    gamma1[i].len()
                )));
            }
        }
        let all = gamma1.iter().chain(&gamma2).flatten();
        if let Some(bad) = all.clone().find(|r| !(**r >= 0.0) || !r.is_finite()) {
            return Err(domain(format!("rate {bad} must be finite and ≥ 0")));
        }
        Ok(Self {
            delta_t,
            gamma1,
            gamma2,
        })
    }

    /// Spreads the totals `Γ¹` and `Γ²` evenly over both qudits and all
    /// levels.
    pub fn uniform(levels: usize, delta_t: f64, total1: f64, total2: f64) -> Result<Self> {
        if levels < 2 {
            return Err(domain(format!("need D ≥ 2, got {levels}")));
        }
        let g1 = vec![total1 / (2 * (levels - 1)) as f64; levels - 1];
        let g2 = vec![total2 / (2 * levels) as f64; levels];
        Self::new(delta_t, [g1.clone(), g1], [g2.clone(), g2])
    }

    /// No noise at all.
    pub fn noiseless(levels: usize) -> Result<Self> {
        Self::uniform(levels, 0.0, 0.0, 0.0)
    }

    pub fn levels(&self) -> usize {
        self.gamma2[0].len()
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    pub fn gamma1(&self, qudit: usize, level: usize) -> f64 {
        self.gamma1[qudit][level]
    }

    pub fn gamma2(&self, qudit: usize, level: usize) -> f64 {
        self.gamma2[qudit][level]
    }

    /// `Γ¹ = Σ_{i,m} Γ¹_{i,m}`.
    pub fn total1(&self) -> f64 {
        self.gamma1.iter().flatten().sum()
    }

    /// `Γ² = Σ_{i,m} Γ²_{i,m}`.
    pub fn total2(&self) -> f64 {
        self.gamma2.iter().flatten().sum()
    }

    pub fn is_linear_regime(&self) -> bool {
        self.delta_t * (self.total1() + self.total2()) < LINEAR_REGIME_LIMIT
    }

    /// Same rates, only the decay channel.
    pub fn damping_only(&self) -> Self {
        let zeros = vec![0.0; self.levels()];
        Self {
            delta_t: self.delta_t,
            gamma1: self.gamma1.clone(),
            gamma2: [zeros.clone(), zeros],
        }
    }

    /// Same rates, only the dephasing channel.
    pub fn dephasing_only(&self) -> Self {
        let zeros = vec![0.0; self.levels() - 1];
        Self {
            delta_t: self.delta_t,
            gamma1: [zeros.clone(), zeros],
            gamma2: self.gamma2.clone(),
        }
    }
}
