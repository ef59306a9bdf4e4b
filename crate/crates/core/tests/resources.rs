use std::f64::consts::TAU;

use clockgame_core::clock_game::{win_probability, AncillaSpec, GameFamily, WinMode};
use clockgame_core::resources::{cost_comparison, decode_probability_curve, entanglement_audit, min_local_dimension};
use clockgame_core::rng::seeded_rng;
use clockgame_core::C64;
use rand::Rng;

fn random_schmidt(levels: usize, rng: &mut impl Rng) -> Vec<C64> {
    let raw: Vec<C64> = (0..levels)
        .map(|_| C64::from_polar(rng.random::<f64>(), rng.random::<f64>() * TAU))
        .collect();
    let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|c| c / norm).collect()
}

fn binary_entropy_of(coeffs: &[C64]) -> f64 {
    coeffs
        .iter()
        .map(|c| c.norm_sqr())
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

#[test]
fn winning_ancilla_meets_the_bound_exactly() {
    for bins in 1..=8 {
        let anc = AncillaSpec::maximal(bins + 1, 2).unwrap();
        let report = entanglement_audit(&anc, bins).unwrap();
        assert!(report.satisfied);
        assert!(report.margin.abs() < 1e-9, "N={bins}: margin {}", report.margin);
        assert!((report.measured_entropy - ((bins + 1) as f64).log2()).abs() < 1e-9);
        assert_eq!(min_local_dimension(bins).unwrap(), bins + 1);

        let uniform = vec![C64::new(1.0 / ((bins + 1) as f64).sqrt(), 0.0); bins + 1];
        assert!((decode_probability_curve(&uniform).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn audit_entropy_matches_schmidt_entropy() {
    let mut rng = seeded_rng(20);
    for levels in 2..=6 {
        for _ in 0..20 {
            let c = random_schmidt(levels, &mut rng);
            let anc = AncillaSpec::schmidt(c.clone(), 2).unwrap();
            let report = entanglement_audit(&anc, levels - 1).unwrap();
            assert!((report.measured_entropy - binary_entropy_of(&c)).abs() < 1e-9);
        }
    }
    let anc = AncillaSpec::schmidt_real(&[0.9f64.sqrt(), 0.1f64.sqrt()], 2).unwrap();
    let r = entanglement_audit(&anc, 1).unwrap();
    assert!((r.measured_entropy - 0.4689955935892812).abs() < 1e-9 && !r.satisfied);
}

#[test]
fn uniform_magnitudes_maximize_decoding() {
    let mut rng = seeded_rng(21);
    for levels in 1..=6 {
        for _ in 0..1000 {
            let c = random_schmidt(levels, &mut rng);
            let p = decode_probability_curve(&c).unwrap();
            assert!(p <= 1.0 + 1e-12, "D={levels}: {p}");
        }
    }
}

#[test]
fn sub_bound_ancillas_cannot_always_win() {
    let mut rng = seeded_rng(22);
    for bins in 1..=4 {
        let levels = bins + 1;
        let family = GameFamily::new(bins, levels, 2).unwrap().with_phase_grid(8).unwrap();
        for _ in 0..10 {
            let c = random_schmidt(levels, &mut rng);
            let anc = AncillaSpec::schmidt(c, 2).unwrap();
            let report = entanglement_audit(&anc, bins).unwrap();
            assert!(!report.satisfied);
            let w = win_probability(&family, &anc, WinMode::Exact).unwrap().p_win;
            assert!(w < 1.0 - 1e-9, "N={bins}: entropy {} won with {w}", report.measured_entropy);
        }
        // maximally entangled but too small to hold every bin
        if bins >= 2 {
            let small = AncillaSpec::maximal(bins, 2).unwrap();
            let fam = GameFamily::undersized(bins, bins, 2).unwrap().with_phase_grid(8).unwrap();
            assert!(!entanglement_audit(&small, bins).unwrap().satisfied);
            assert!(win_probability(&fam, &small, WinMode::Exact).unwrap().p_win < 1.0 - 1e-9);
        }
    }
}

#[test]
fn cost_table_rows() {
    for (m, n, per_bin, ours) in [(5, 1023, 5115, 55), (2, 1, 2, 4), (3, 255, 765, 27)] {
        let c = cost_comparison(m, n).unwrap();
        assert_eq!((c.per_bin_qubits, c.clock_game_qubits), (per_bin, ours));
    }
    assert_eq!(min_local_dimension(1023).unwrap(), 1024);
    assert!(cost_comparison(1, 4).is_err() && cost_comparison(3, 0).is_err());
}
