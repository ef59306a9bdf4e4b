//! JSON run descriptions, one per subcommand. Every field has a default so
//! an empty document `{}` is a valid config.

use clockgame_core::clock_game::AncillaSpec;
use clockgame_core::qudit::fourier_vector;
use clockgame_core::{DensityMatrix, HilbertSpace, StateVector, C64};
use serde::{Deserialize, Serialize};

use crate::error::{config_error, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AncillaConfig {
    /// GHZ state over all parties.
    Maximal,
    /// `Σ_j c_j |j…j⟩`; the coefficient count sets the qudit dimension.
    Schmidt { coeffs: Vec<f64> },
    /// `|0…0⟩`.
    Product,
    /// `|0̃…0̃⟩`, every qudit in the first Fourier state.
    FourierProduct,
    MaximallyMixed,
}

impl AncillaConfig {
    pub fn label(&self) -> &'static str {
        match self {
            AncillaConfig::Maximal => "maximal",
            AncillaConfig::Schmidt { .. } => "schmidt",
            AncillaConfig::Product => "product",
            AncillaConfig::FourierProduct => "fourier_product",
            AncillaConfig::MaximallyMixed => "maximally_mixed",
        }
    }

    /// Qudit dimension forced by the ancilla itself, if any.
    pub fn fixed_levels(&self) -> Option<usize> {
        match self {
            AncillaConfig::Schmidt { coeffs } => Some(coeffs.len()),
            _ => None,
        }
    }

    pub fn build(&self, levels: usize, parties: usize) -> CliResult<AncillaSpec> {
        let field = "ancillas";
        let spec = match self {
            AncillaConfig::Maximal => AncillaSpec::maximal(levels, parties),
            AncillaConfig::Schmidt { coeffs } => {
                if coeffs.len() != levels {
                    return Err(config_error(
                        field,
                        format!("schmidt has {} coefficients but D = {levels}", coeffs.len()),
                    ));
                }
                AncillaSpec::schmidt_real(coeffs, parties)
            }
            AncillaConfig::Product => local_product(levels, parties, |d| StateVector::basis(HilbertSpace::new(vec![d])?, 0)),
            AncillaConfig::FourierProduct => local_product(levels, parties, |d| fourier_vector(d, 0)),
            AncillaConfig::MaximallyMixed => HilbertSpace::uniform(levels, parties)
                .and_then(|s| AncillaSpec::density(DensityMatrix::maximally_mixed(s))),
        };
        spec.map_err(|e| config_error(field, e))
    }

    /// Schmidt coefficients for two-party ancillas of that form.
    pub fn schmidt_coeffs(&self, levels: usize) -> CliResult<Vec<C64>> {
        match self {
            AncillaConfig::Maximal => Ok(vec![C64::new(1.0 / (levels as f64).sqrt(), 0.0); levels]),
            AncillaConfig::Schmidt { coeffs } => Ok(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect()),
            AncillaConfig::Product => {
                let mut c = vec![C64::new(0.0, 0.0); levels];
                c[0] = C64::new(1.0, 0.0);
                Ok(c)
            }
            other => Err(config_error(
                "ancillas",
                format!("{} has no Schmidt form; use maximal, schmidt or product", other.label()),
            )),
        }
    }
}

fn local_product(
    levels: usize,
    parties: usize,
    local: impl Fn(usize) -> clockgame_core::Result<StateVector>,
) -> clockgame_core::Result<AncillaSpec> {
    let one = local(levels)?;
    AncillaSpec::product(&vec![one; parties])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeConfig {
    Exact,
    MonteCarlo,
}

impl ModeConfig {
    pub fn label(self) -> &'static str {
        match self {
            ModeConfig::Exact => "exact",
            ModeConfig::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClockGameConfig {
    pub seed: u64,
    pub trials: u64,
    pub bins: Vec<usize>,
    /// Qudit dimensions to sweep; `None` pairs each `N` with `D = N+1`.
    pub levels: Option<Vec<usize>>,
    pub parties: Vec<usize>,
    pub ancillas: Vec<AncillaConfig>,
    pub modes: Vec<ModeConfig>,
    pub phase_grid: usize,
}

impl Default for ClockGameConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 10_000,
            bins: vec![1, 2, 3],
            levels: None,
            parties: vec![2],
            ancillas: vec![AncillaConfig::Maximal],
            modes: vec![ModeConfig::Exact],
            phase_grid: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSweepConfig {
    pub seed: u64,
    pub levels: Vec<usize>,
    #[serde(rename = "dtGamma1")]
    pub dt_gamma1: Vec<f64>,
    #[serde(rename = "dtGamma2")]
    pub dt_gamma2: Vec<f64>,
}

impl Default for NoiseSweepConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            levels: (2..=8).collect(),
            dt_gamma1: vec![0.0, 0.001, 0.01, 0.05],
            dt_gamma2: vec![0.0, 0.001, 0.01, 0.05],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FisherCurveConfig {
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    /// Phase-grid points used for the numerical average.
    pub grid: usize,
    /// Pair counts up to this value are also cross-checked against the
    /// full sector simulation.
    pub simulate_up_to: usize,
    /// Where to write the SVG plot; defaults to the CSV path with `.svg`.
    pub svg: Option<String>,
}

impl Default for FisherCurveConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_min: 1,
            n_max: 40,
            grid: 4096,
            simulate_up_to: 8,
            svg: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditConfig {
    pub seed: u64,
    pub bins: Vec<usize>,
    pub ancillas: Vec<AncillaConfig>,
    /// `[M, N]` pairs for the qubit cost table.
    pub cost: Vec<[usize; 2]>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            bins: (1..=8).collect(),
            ancillas: vec![AncillaConfig::Maximal, AncillaConfig::Product],
            cost: vec![[5, 1023], [2, 1], [3, 255]],
        }
    }
}

/// Parses a config document; an empty document means all defaults.
pub fn parse<T: for<'de> Deserialize<'de> + Default>(text: &str) -> CliResult<T> {
    if text.trim().is_empty() {
        return Ok(T::default());
    }
    Ok(serde_json::from_str(text)?)
}
