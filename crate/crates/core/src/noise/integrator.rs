use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::params::NoiseParams;
use crate::error::{domain, Error, Result};
use crate::qudit::{ghz_state, DensityMatrix, HilbertSpace};

const TRACE_DRIFT_LIMIT: f64 = 1e-8;

/// Jump operators of both channels on the two-qudit space.
fn jump_operators(params: &NoiseParams) -> Vec<DMatrix<C64>> {
    let d = params.levels();
    let id = DMatrix::<C64>::identity(d, d);
    let on_qudit = |qudit: usize, local: DMatrix<C64>| {
        if qudit == 0 {
            local.kronecker(&id)
        } else {
            id.kronecker(&local)
        }
    };
    let mut ops = Vec::new();
    for qudit in 0..2 {
        for m in 0..d - 1 {
            let rate = params.gamma1(qudit, m);
            if rate > 0.0 {
                let mut local = DMatrix::zeros(d, d);
                local[(m, m + 1)] = C64::new(rate.sqrt(), 0.0);
                ops.push(on_qudit(qudit, local));
            }
        }
        for m in 0..d {
            let rate = params.gamma2(qudit, m);
            if rate > 0.0 {
                let mut local = DMatrix::zeros(d, d);
                local[(m, m)] = C64::new((rate / 2.0).sqrt(), 0.0);
                ops.push(on_qudit(qudit, local));
            }
        }
    }
    ops
}

/// Integrates `dρ/dt = Σ_L LρL† − ½{L†L, ρ}` from the two-qudit GHZ state
/// for `total_t` with `steps` fixed RK4 steps.
///
/// Intended as a reference for the first-order states, not for production
/// use: cost is `O(steps · #L · D⁶)`.
pub fn lindblad_integrator_oracle(
    levels: usize,
    params: &NoiseParams,
    total_t: f64,
    steps: usize,
) -> Result<DensityMatrix> {
    if params.levels() != levels {
        return Err(domain(format!(
            "rates are given for D = {}, asked for D = {levels}",
            params.levels()
        )));
    }
    if steps == 0 {
        return Err(domain("need at least one integration step"));
    }
    if !(total_t >= 0.0) || !total_t.is_finite() {
        return Err(domain(format!("integration time {total_t} must be finite and ≥ 0")));
    }
    let ops = jump_operators(params);
    let daggers: Vec<_> = ops.iter().map(|l| l.adjoint()).collect();
    let dim = levels * levels;
    let mut decay = DMatrix::<C64>::zeros(dim, dim);
    for (l, ld) in ops.iter().zip(&daggers) {
        decay += ld * l;
    }
    let half = C64::new(0.5, 0.0);
    let generator = |rho: &DMatrix<C64>| -> DMatrix<C64> {
        let mut out = -(&decay * rho + rho * &decay) * half;
        for (l, ld) in ops.iter().zip(&daggers) {
            out += l * rho * ld;
        }
        out
    };

    let mut rho = ghz_state(levels, 2)?.density().entries().clone();
    let h = total_t / steps as f64;
    let ch = C64::new(h, 0.0);
    for step in 0..steps {
        let k1 = generator(&rho);
        let k2 = generator(&(&rho + &k1 * (ch * 0.5)));
        let k3 = generator(&(&rho + &k2 * (ch * 0.5)));
        let k4 = generator(&(&rho + &k3 * ch));
        rho += (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * (ch / 6.0);
        let drift = (rho.trace() - C64::new(1.0, 0.0)).norm();
        if drift > TRACE_DRIFT_LIMIT {
            return Err(Error::Numerical(format!("trace drifted by {drift:e} at step {step}")));
        }
    }
    DensityMatrix::new(HilbertSpace::uniform(levels, 2)?, rho)
}
