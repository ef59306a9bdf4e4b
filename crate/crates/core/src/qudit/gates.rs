//! Standard qudit states and gates: Fourier basis, generalized Z, GHZ.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::ops::apply_unitary;
use super::space::HilbertSpace;
use super::state::{StateVector, UnitaryMatrix};
use crate::error::{domain, Result};

/// `exp(2πi·k/D)` with `k` reduced mod `D` first, so large products stay exact.
pub(crate) fn root_of_unity(k: i64, dim: usize) -> C64 {
    let d = dim as i64;
    let r = k.rem_euclid(d);
    C64::from_polar(1.0, 2.0 * PI * r as f64 / dim as f64)
}

/// Fourier basis vector `|j̃⟩ = D^{-1/2} Σ_k e^{2πi j̃ k/D} |k⟩`.
pub fn fourier_vector(dim: usize, j_tilde: usize) -> Result<StateVector> {
    if dim == 0 {
        return Err(domain("dimension must be at least 1"));
    }
    if j_tilde >= dim {
        return Err(domain(format!("Fourier index {j_tilde} out of range 0..{dim}")));
    }
    let scale = 1.0 / (dim as f64).sqrt();
    let amps = (0..dim)
        .map(|k| root_of_unity((j_tilde * k) as i64, dim) * scale)
        .collect();
    StateVector::new(HilbertSpace::new(vec![dim])?, amps)
}

/// Matrix whose columns are the Fourier basis vectors.
pub fn fourier_matrix(dim: usize) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(domain("dimension must be at least 1"));
    }
    let scale = 1.0 / (dim as f64).sqrt();
    let entries = DMatrix::from_fn(dim, dim, |k, j| root_of_unity((j * k) as i64, dim) * scale);
    Ok(UnitaryMatrix::from_raw(entries))
}

/// Diagonal `Zⁿ` with entries `e^{2πi j n/D}`; `n` is taken mod `D`.
pub fn z_power(dim: usize, n: i64) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(domain("dimension must be at least 1"));
    }
    let diag: Vec<C64> = (0..dim)
        .map(|j| root_of_unity(j as i64 * n.rem_euclid(dim as i64), dim))
        .collect();
    Ok(UnitaryMatrix::from_raw(DMatrix::from_diagonal(
        &nalgebra::DVector::from_vec(diag),
    )))
}

/// `D^{-1/2} Σ_j |j⟩^{⊗K}` over `K` subsystems of dimension `D`.
pub fn ghz_state(dim: usize, parties: usize) -> Result<StateVector> {
    if dim < 2 {
        return Err(domain(format!("GHZ state needs D ≥ 2, got {dim}")));
    }
    if parties < 2 {
        return Err(domain(format!("GHZ state needs K ≥ 2 parties, got {parties}")));
    }
    let space = HilbertSpace::uniform(dim, parties)?;
    let total = space.total_dim();
    // |j,j,...,j⟩ sits at j·(1 + D + ... + D^{K-1})
    let step = (total - 1) / (dim - 1);
    let mut amps = vec![C64::new(0.0, 0.0); total];
    let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
    for j in 0..dim {
        amps[j * step] = a;
    }
    Ok(StateVector::from_raw(space, amps))
}

/// `(Zⁿ ⊗ 1 ⊗ …) |GHZ⟩`, the ancilla state carrying time-bin `n`.
pub fn phi_dn_state(dim: usize, n: usize, parties: usize) -> Result<StateVector> {
    if n >= dim {
        return Err(domain(format!("time-bin label {n} out of range 0..{dim}")));
    }
    let ghz = ghz_state(dim, parties)?;
    apply_unitary(&ghz, &z_power(dim, n as i64)?, &[0])
}

/// Re-expresses `state` in the Fourier basis of every subsystem:
/// the returned amplitude at `(j̃₁,…,j̃_K)` is `⟨j̃₁…j̃_K|state⟩`.
pub fn to_fourier_coordinates(state: &StateVector) -> Result<StateVector> {
    let mut out = state.clone();
    let dims = state.space().dims().to_vec();
    for (leg, &d) in dims.iter().enumerate() {
        out = apply_unitary(&out, &fourier_matrix(d)?.adjoint(), &[leg])?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn fourier_vector_d2() {
        let h = 1.0 / 2f64.sqrt();
        let v0 = fourier_vector(2, 0).unwrap();
        assert!(close(v0.amps()[0], C64::new(h, 0.0)) && close(v0.amps()[1], C64::new(h, 0.0)));
        let v1 = fourier_vector(2, 1).unwrap();
        assert!(close(v1.amps()[0], C64::new(h, 0.0)) && close(v1.amps()[1], C64::new(-h, 0.0)));
    }

    #[test]
    fn fourier_vector_rejects_out_of_range() {
        assert!(fourier_vector(4, 4).is_err());
        assert!(fourier_vector(0, 0).is_err());
        assert!(fourier_matrix(0).is_err());
    }

    #[test]
    fn fourier_orthonormal_up_to_16() {
        for d in 1..=16 {
            for j in 0..d {
                let a = fourier_vector(d, j).unwrap();
                for k in 0..d {
                    let b = fourier_vector(d, k).unwrap();
                    let expected = if j == k { 1.0 } else { 0.0 };
                    assert!((a.inner(&b).unwrap() - C64::new(expected, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn fourier_matrix_small_cases() {
        assert!(close(fourier_matrix(1).unwrap().entries()[(0, 0)], C64::new(1.0, 0.0)));
        let f2 = fourier_matrix(2).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!(close(f2.entries()[(0, 0)], C64::new(h, 0.0)));
        assert!(close(f2.entries()[(0, 1)], C64::new(h, 0.0)));
        assert!(close(f2.entries()[(1, 0)], C64::new(h, 0.0)));
        assert!(close(f2.entries()[(1, 1)], C64::new(-h, 0.0)));
        for d in 2..=9 {
            let f = fourier_matrix(d).unwrap();
            assert!(UnitaryMatrix::new(f.entries().clone()).is_ok());
            let id = f.compose(&f.adjoint()).unwrap();
            assert!(id.max_abs_diff(&UnitaryMatrix::identity(d)) < 1e-12);
        }
    }

    #[test]
    fn fourier_matrix_columns_are_fourier_vectors() {
        let f = fourier_matrix(5).unwrap();
        for j in 0..5 {
            let v = fourier_vector(5, j).unwrap();
            for k in 0..5 {
                assert!(close(f.entries()[(k, j)], v.amps()[k]));
            }
        }
    }

    #[test]
    fn z_power_cases() {
        assert!(z_power(5, 0).unwrap().max_abs_diff(&UnitaryMatrix::identity(5)) < 1e-15);
        let z2 = z_power(2, 1).unwrap();
        assert!(close(z2.entries()[(0, 0)], C64::new(1.0, 0.0)));
        assert!(close(z2.entries()[(1, 1)], C64::new(-1.0, 0.0)));
        assert!(z_power(3, 4).unwrap().max_abs_diff(&z_power(3, 1).unwrap()) < 1e-15);
        assert!(z_power(3, -2).unwrap().max_abs_diff(&z_power(3, 1).unwrap()) < 1e-15);
    }

    #[test]
    fn ghz_and_phi_small() {
        let h = 1.0 / 2f64.sqrt();
        let g = ghz_state(2, 2).unwrap();
        let want = [h, 0.0, 0.0, h];
        for (a, w) in g.amps().iter().zip(want) {
            assert!(close(*a, C64::new(w, 0.0)));
        }
        let p = phi_dn_state(2, 1, 2).unwrap();
        let want = [h, 0.0, 0.0, -h];
        for (a, w) in p.amps().iter().zip(want) {
            assert!(close(*a, C64::new(w, 0.0)));
        }
        assert!(ghz_state(2, 1).is_err());
        assert!(ghz_state(1, 2).is_err());
        assert!(phi_dn_state(3, 3, 2).is_err());
    }

    #[test]
    fn phi_fourier_support_d3_n2() {
        // Direct expansion: ⟨x̃ỹ|Φ_{3,2}⟩ = (1/√3)·δ((x+y) mod 3 = 2).
        let phi = phi_dn_state(3, 2, 2).unwrap();
        let fc = to_fourier_coordinates(&phi).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                let a = fc.amps()[x * 3 + y];
                if (x + y) % 3 == 2 {
                    assert!((a.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
                } else {
                    assert!(a.norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn phi_states_orthonormal() {
        for d in 2..=9 {
            for k in 2..=3 {
                let states: Vec<_> = (0..d).map(|n| phi_dn_state(d, n, k).unwrap()).collect();
                for (n, a) in states.iter().enumerate() {
                    for (m, b) in states.iter().enumerate() {
                        let want = if n == m { 1.0 } else { 0.0 };
                        assert!((a.inner(b).unwrap() - C64::new(want, 0.0)).norm() < 1e-12);
                    }
                }
            }
        }
    }
}
