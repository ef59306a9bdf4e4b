use std::f64::consts::FRAC_PI_2;

use clockgame_core::clock_game::{win_probability, GameFamily, WinMode};
use clockgame_core::noise::{closed_form_pwin, noisy_ancilla, noisy_win_probability, Channel, NoiseParams, RoundKind};
use clockgame_core::phase_extraction::{
    average_fisher, average_fisher_closed_form, fisher_information, outcome_probability, sector_probability,
    ExtractionConfig, ExtractionProtocol, MAX_SIMULATED_PAIRS,
};
use clockgame_core::resources::{cost_comparison, decode_probability_curve, entanglement_audit};
use clockgame_core::rng::trial_seed;

use crate::config::{AuditConfig, ClockGameConfig, FisherCurveConfig, ModeConfig, NoiseSweepConfig};
use crate::error::{config_error, CliError, CliResult};
use crate::output::{line_chart, Report, Table};

/// Largest pair count the Fisher curve accepts.
pub const MAX_CURVE_PAIRS: usize = 200;

const CHECK_TOL: f64 = 1e-9;

fn non_empty<T>(field: &str, v: &[T]) -> CliResult<()> {
    if v.is_empty() {
        return Err(config_error(field, "must not be empty"));
    }
    Ok(())
}

fn num(x: f64) -> String {
    format!("{x}")
}

pub fn clock_game(cfg: &ClockGameConfig) -> CliResult<Report> {
    non_empty("bins", &cfg.bins)?;
    non_empty("parties", &cfg.parties)?;
    non_empty("ancillas", &cfg.ancillas)?;
    non_empty("modes", &cfg.modes)?;
    if cfg.phase_grid == 0 {
        return Err(config_error("phase_grid", "must be at least 1"));
    }
    if cfg.trials == 0 && cfg.modes.contains(&ModeConfig::MonteCarlo) {
        return Err(config_error("trials", "monte_carlo mode needs at least one trial"));
    }
    if let Some(levels) = &cfg.levels {
        non_empty("levels", levels)?;
    }

    let mut table = Table::new("clock_game", "N,D,K,ancilla,mode,p_win,stderr");
    let mut row = 0u64;
    for &bins in &cfg.bins {
        let levels = cfg.levels.clone().unwrap_or_else(|| vec![bins + 1]);
        for &d in &levels {
            for &k in &cfg.parties {
                for anc_cfg in &cfg.ancillas {
                    let family = GameFamily::undersized(bins, d, k)
                        .and_then(|f| f.with_phase_grid(cfg.phase_grid))
                        .map_err(|e| config_error("bins/levels/parties", e))?;
                    let ancilla = anc_cfg.build(d, k)?;
                    for &mode in &cfg.modes {
                        let win_mode = match mode {
                            ModeConfig::Exact => WinMode::Exact,
                            ModeConfig::MonteCarlo => WinMode::MonteCarlo {
                                trials: cfg.trials,
                                seed: trial_seed(cfg.seed, row),
                            },
                        };
                        row += 1;
                        let est = win_probability(&family, &ancilla, win_mode)?;
                        if !(-CHECK_TOL..=1.0 + CHECK_TOL).contains(&est.p_win) {
                            return Err(CliError::Validation(format!("p_win = {} outside [0, 1]", est.p_win)));
                        }
                        let should_win = anc_cfg.label() == "maximal" && d > bins && mode == ModeConfig::Exact;
                        if should_win && (est.p_win - 1.0).abs() > CHECK_TOL {
                            return Err(CliError::Validation(format!(
                                "maximal ancilla with N={bins}, D={d}, K={k} won with {}",
                                est.p_win
                            )));
                        }
                        table.push(&[
                            bins.to_string(),
                            d.to_string(),
                            k.to_string(),
                            anc_cfg.label().to_string(),
                            mode.label().to_string(),
                            num(est.p_win),
                            num(est.stderr),
                        ]);
                    }
                }
            }
        }
    }
    Ok(Report {
        seed: cfg.seed,
        tables: vec![table],
        svg: None,
        svg_path: None,
    })
}

pub fn noise_sweep(cfg: &NoiseSweepConfig) -> CliResult<Report> {
    non_empty("levels", &cfg.levels)?;
    non_empty("dtGamma1", &cfg.dt_gamma1)?;
    non_empty("dtGamma2", &cfg.dt_gamma2)?;
    for (field, grid) in [("dtGamma1", &cfg.dt_gamma1), ("dtGamma2", &cfg.dt_gamma2)] {
        if grid.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(config_error(field, "rates must be finite and nonnegative"));
        }
    }
    let mut table = Table::new("noise_sweep", "D,dtGamma1,dtGamma2,p_win_sim,p_win_closed,abs_diff");
    for &d in &cfg.levels {
        if d < 2 {
            return Err(config_error("levels", format!("D = {d} is below 2")));
        }
        for &g1 in &cfg.dt_gamma1 {
            for &g2 in &cfg.dt_gamma2 {
                let params = NoiseParams::uniform(d, 1.0, g1, g2).map_err(|e| config_error("dtGamma", e))?;
                let rho = noisy_ancilla(d, &params)?.density;
                let mut sim = 0.0;
                for n in 0..d {
                    sim += noisy_win_probability(d, n, &rho, RoundKind::Photon)?;
                }
                sim += noisy_win_probability(d, 0, &rho, RoundKind::Vacuum)?;
                sim /= (d + 1) as f64;
                let closed = closed_form_pwin(d, &params, Channel::Both);
                let diff = (sim - closed).abs();
                if diff > CHECK_TOL {
                    return Err(CliError::Validation(format!(
                        "D={d} ΔtΓ=({g1}, {g2}): simulated {sim} vs closed form {closed}"
                    )));
                }
                table.push(&[d.to_string(), num(g1), num(g2), num(sim), num(closed), num(diff)]);
            }
        }
    }
    Ok(Report {
        seed: cfg.seed,
        tables: vec![table],
        svg: None,
        svg_path: None,
    })
}

/// Compares the sector simulation at `n` pairs with the closed forms.
fn cross_check_sectors(n: usize, phi: f64) -> CliResult<()> {
    let exact = ExtractionProtocol::new(ExtractionConfig::new(n, phi, 0.0)?)?.exact_distribution()?;
    for (k, s) in exact.sectors.iter().enumerate() {
        let want = outcome_probability(n, k, phi, 0.0, 0)?;
        let sector_ok = (s.probability - sector_probability(n, k)?).abs() <= CHECK_TOL;
        if !sector_ok || s.bit0.iter().any(|b| (b - want).abs() > CHECK_TOL) {
            return Err(CliError::Validation(format!("sector simulation disagrees at n={n}, k={k}")));
        }
    }
    Ok(())
}

pub fn fisher_curve(cfg: &FisherCurveConfig) -> CliResult<Report> {
    if cfg.n_min < 1 || cfg.n_min > cfg.n_max {
        return Err(config_error("n_min", format!("need 1 ≤ n_min ≤ n_max, got {}..{}", cfg.n_min, cfg.n_max)));
    }
    if cfg.n_max > MAX_CURVE_PAIRS {
        return Err(config_error("n_max", format!("at most {MAX_CURVE_PAIRS}")));
    }
    if cfg.simulate_up_to > MAX_SIMULATED_PAIRS.min(12) {
        return Err(config_error("simulate_up_to", "at most 12"));
    }
    if cfg.grid < 64 {
        return Err(config_error("grid", "need at least 64 points"));
    }

    let mut table = Table::new("fisher_curve", "n,avg_fisher,fisher_at_pi_2");
    let mut points = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for n in cfg.n_min..=cfg.n_max {
        let avg = average_fisher(n, cfg.grid)?;
        let closed = average_fisher_closed_form(n)?;
        if (avg - closed).abs() > CHECK_TOL {
            return Err(CliError::Validation(format!("n={n}: grid average {avg} vs closed form {closed}")));
        }
        // consecutive pair counts can tie exactly, so compare closed forms
        if closed < prev - 1e-12 {
            return Err(CliError::Validation(format!("average Fisher information drops at n={n}")));
        }
        if n <= cfg.simulate_up_to {
            cross_check_sectors(n, FRAC_PI_2)?;
        }
        prev = closed;
        let at_half_pi = fisher_information(n, FRAC_PI_2, 0.0)?.total;
        table.push(&[n.to_string(), num(closed), num(at_half_pi)]);
        points.push((n as f64, closed));
    }
    let svg = line_chart("Average Fisher information per pair", "pairs n", "average FI", &points);
    Ok(Report {
        seed: cfg.seed,
        tables: vec![table],
        svg: Some(svg),
        svg_path: cfg.svg.as_ref().map(Into::into),
    })
}

pub fn audit(cfg: &AuditConfig) -> CliResult<Report> {
    non_empty("bins", &cfg.bins)?;
    let mut table = Table::new("audit", "N,D,entropy_ebits,bound_ebits,satisfied,decode_prob");
    for &bins in &cfg.bins {
        if bins < 1 {
            return Err(config_error("bins", "need at least one time-bin"));
        }
        for anc_cfg in &cfg.ancillas {
            let d = anc_cfg.fixed_levels().unwrap_or(bins + 1);
            let ancilla = anc_cfg.build(d, 2)?;
            let report = entanglement_audit(&ancilla, bins)?;
            let decode = decode_probability_curve(&anc_cfg.schmidt_coeffs(d)?)?;
            table.push(&[
                bins.to_string(),
                d.to_string(),
                num(report.measured_entropy),
                num(report.bound),
                report.satisfied.to_string(),
                num(decode),
            ]);
        }
    }
    let mut cost = Table::new("cost", "M,N,gottesman,clockgame");
    for &[m, n] in &cfg.cost {
        let c = cost_comparison(m, n).map_err(|e| config_error("cost", e))?;
        cost.push(&[
            m.to_string(),
            n.to_string(),
            c.per_bin_qubits.to_string(),
            c.clock_game_qubits.to_string(),
        ]);
    }
    Ok(Report {
        seed: cfg.seed,
        tables: vec![table, cost],
        svg: None,
        svg_path: None,
    })
}
