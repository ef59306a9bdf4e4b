use super::params::NoiseParams;
use crate::error::{domain, Error, Result};
use crate::qudit::{embed, fourier_matrix, z_power, DensityMatrix, HilbertSpace, UnitaryMatrix};

/// Which round the noisy ancilla is used in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundKind {
    /// The excitation is in bin `n`: one leg picks up `Zⁿ`.
    Photon,
    /// Nothing arrives; the parties must decode 0.
    Vacuum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Amplitude,
    Dephasing,
    Both,
}

fn check_two_qudits(levels: usize, rho: &DensityMatrix) -> Result<HilbertSpace> {
    let space = HilbertSpace::uniform(levels, 2)?;
    if rho.space() != &space {
        return Err(Error::DimensionMismatch {
            expected: space.total_dim(),
            got: rho.dim(),
        });
    }
    Ok(space)
}

/// Distribution of `(x + y) mod D` when both qudits of `rho` are measured in
/// the Fourier basis after `Zⁿ` on the first leg.
pub fn incorrect_bin_distribution(levels: usize, n: usize, rho: &DensityMatrix) -> Result<Vec<f64>> {
    let space = check_two_qudits(levels, rho)?;
    if n >= levels {
        return Err(domain(format!("time-bin {n} out of range 0..{levels}")));
    }
    let shifted = rho.conjugate_by(&embed(&space, &z_power(levels, n as i64)?, &[0])?)?;
    let f = fourier_matrix(levels)?.adjoint();
    let rotated = shifted.conjugate_by(&UnitaryMatrix::kron(&f, &f))?;
    let mut dist = vec![0.0; levels];
    for x in 0..levels {
        for y in 0..levels {
            let i = x * levels + y;
            dist[(x + y) % levels] += rotated.entries()[(i, i)].re;
        }
    }
    Ok(dist)
}

/// Probability of decoding the right bin with a noisy two-qudit ancilla.
/// In vacuum rounds `n` is ignored and the target bin is 0.
pub fn noisy_win_probability(levels: usize, n: usize, rho: &DensityMatrix, kind: RoundKind) -> Result<f64> {
    match kind {
        RoundKind::Photon => Ok(incorrect_bin_distribution(levels, n, rho)?[n]),
        RoundKind::Vacuum => Ok(incorrect_bin_distribution(levels, 0, rho)?[0]),
    }
}

/// `1 − Δt(D−1)/D²·(Γ¹ + Γ²/2)` and its single-channel cases.
pub fn closed_form_pwin(levels: usize, params: &NoiseParams, channel: Channel) -> f64 {
    let d = levels as f64;
    let (g1, g2) = match channel {
        Channel::Amplitude => (params.total1(), 0.0),
        Channel::Dephasing => (0.0, params.total2()),
        Channel::Both => (params.total1(), params.total2()),
    };
    1.0 - params.delta_t() * (d - 1.0) / (d * d) * (g1 + g2 / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{damped_ancilla, dephased_ancilla};
    use crate::qudit::ghz_state;

    #[test]
    fn ghz_always_wins() {
        for d in 2..=6 {
            let ghz = ghz_state(d, 2).unwrap().density();
            for n in 0..d {
                let p = noisy_win_probability(d, n, &ghz, RoundKind::Photon).unwrap();
                assert!((p - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spec_values() {
        let p = NoiseParams::uniform(2, 0.04, 1.0, 0.0).unwrap();
        assert!((closed_form_pwin(2, &p, Channel::Amplitude) - 0.99).abs() < 1e-15);
        let rho = damped_ancilla(2, &p).unwrap().density;
        assert!((noisy_win_probability(2, 1, &rho, RoundKind::Photon).unwrap() - 0.99).abs() < 1e-12);

        let p = NoiseParams::uniform(4, 0.08, 0.0, 1.0).unwrap();
        assert!((closed_form_pwin(4, &p, Channel::Dephasing) - 0.9925).abs() < 1e-15);
        let rho = dephased_ancilla(4, &p).unwrap().density;
        assert!((noisy_win_probability(4, 3, &rho, RoundKind::Photon).unwrap() - 0.9925).abs() < 1e-12);
    }

    #[test]
    fn no_noise_is_perfect() {
        let p = NoiseParams::noiseless(5).unwrap();
        for c in [Channel::Amplitude, Channel::Dephasing, Channel::Both] {
            assert_eq!(closed_form_pwin(5, &p, c), 1.0);
        }
    }

    #[test]
    fn damping_off_bins_d3() {
        let p = NoiseParams::uniform(3, 0.01, 2.0, 0.0).unwrap();
        let rho = damped_ancilla(3, &p).unwrap().density;
        let dist = incorrect_bin_distribution(3, 1, &rho).unwrap();
        let each = 0.01 * 2.0 / 9.0;
        assert!((dist[0] - each).abs() < 1e-12 && (dist[2] - each).abs() < 1e-12);
        assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_wrong_shape() {
        let ghz = ghz_state(3, 2).unwrap().density();
        assert!(incorrect_bin_distribution(4, 0, &ghz).is_err());
        assert!(incorrect_bin_distribution(3, 3, &ghz).is_err());
    }
}
