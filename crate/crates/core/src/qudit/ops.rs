use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;

use super::space::HilbertSpace;
use super::state::{DensityMatrix, StateVector, UnitaryMatrix, PSD_TOL};
use crate::error::{invalid, Error, Result};

/// Applies `op` to the tensor factor spanned by `targets` (row-major in the
/// order listed), identity elsewhere.
pub fn apply_unitary(
    state: &StateVector,
    op: &UnitaryMatrix,
    targets: &[usize],
) -> Result<StateVector> {
    let space = state.space();
    let block = space.check_targets(targets)?;
    if block != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: block,
            got: op.dim(),
        });
    }
    let (offsets, bases) = space.target_layout(targets);
    let m = op.entries();
    let src = state.amps();
    let mut out = vec![C64::new(0.0, 0.0); src.len()];
    let mut gathered = vec![C64::new(0.0, 0.0); block];
    for &base in &bases {
        for (g, &o) in gathered.iter_mut().zip(&offsets) {
            *g = src[base + o];
        }
        for (row, &o) in offsets.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (col, g) in gathered.iter().enumerate() {
                acc += m[(row, col)] * g;
            }
            out[base + o] = acc;
        }
    }
    Ok(StateVector::from_raw(space.clone(), out))
}

/// `(op ⊗ 1) ρ (op ⊗ 1)†` with `op` on `targets`.
pub fn apply_unitary_density(
    rho: &DensityMatrix,
    op: &UnitaryMatrix,
    targets: &[usize],
) -> Result<DensityMatrix> {
    let full = embed(rho.space(), op, targets)?;
    rho.conjugate_by(&full)
}

/// Lifts `op` on `targets` to the full space.
pub fn embed(space: &HilbertSpace, op: &UnitaryMatrix, targets: &[usize]) -> Result<UnitaryMatrix> {
    let block = space.check_targets(targets)?;
    if block != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: block,
            got: op.dim(),
        });
    }
    let dim = space.total_dim();
    let (offsets, bases) = space.target_layout(targets);
    let mut full = DMatrix::zeros(dim, dim);
    for &base in &bases {
        for (r, &ro) in offsets.iter().enumerate() {
            for (c, &co) in offsets.iter().enumerate() {
                full[(base + ro, base + co)] = op.entries()[(r, c)];
            }
        }
    }
    Ok(UnitaryMatrix::from_raw(full))
}

/// Born distribution of measuring `targets` in the orthonormal basis given by
/// the columns of `basis`. Outcome `o` indexes basis columns.
pub fn outcome_probabilities(
    state: &StateVector,
    targets: &[usize],
    basis: &UnitaryMatrix,
) -> Result<Vec<f64>> {
    let rotated = apply_unitary(state, &basis.adjoint(), targets)?;
    let (offsets, bases) = state.space().target_layout(targets);
    let amps = rotated.amps();
    Ok(offsets
        .iter()
        .map(|&o| bases.iter().map(|&b| amps[b + o].norm_sqr()).sum())
        .collect())
}

/// Result of a projective measurement.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub outcome: usize,
    pub collapsed: StateVector,
    pub prob: f64,
}

/// Samples a projective measurement of `targets` in the basis formed by the
/// columns of `basis`; the collapsed state is returned in the original
/// (computational) coordinates.
pub fn measure_subsystem<R: Rng + ?Sized>(
    state: &StateVector,
    targets: &[usize],
    basis: &UnitaryMatrix,
    rng: &mut R,
) -> Result<Measurement> {
    let space = state.space();
    let block = space.check_targets(targets)?;
    if block != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: block,
            got: basis.dim(),
        });
    }
    let rotated = apply_unitary(state, &basis.adjoint(), targets)?;
    let (offsets, bases) = space.target_layout(targets);
    let probs: Vec<f64> = offsets
        .iter()
        .map(|&o| bases.iter().map(|&b| rotated.amps()[b + o].norm_sqr()).sum())
        .collect();
    let outcome = sample_index(&probs, rng)
        .ok_or_else(|| invalid("state vector", "all measurement branches have zero norm"))?;
    let prob = probs[outcome];

    let scale = 1.0 / prob.sqrt();
    let mut collapsed = vec![C64::new(0.0, 0.0); rotated.amps().len()];
    for &b in &bases {
        let idx = b + offsets[outcome];
        collapsed[idx] = rotated.amps()[idx] * scale;
    }
    let collapsed = apply_unitary(
        &StateVector::from_raw(space.clone(), collapsed),
        basis,
        targets,
    )?;
    Ok(Measurement {
        outcome,
        collapsed,
        prob,
    })
}

/// Draws an index from unnormalized nonnegative weights, never returning a
/// zero-weight entry.
pub(crate) fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Option<usize> {
    let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    if !(total > 0.0) {
        return None;
    }
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = None;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = Some(i);
        if u < acc {
            return Some(i);
        }
    }
    last
}

/// Traces out every subsystem not in `keep`. The kept subsystems appear in
/// ascending index order; an empty `keep` yields the 1×1 matrix `[Tr ρ]`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let space = rho.space();
    space.check_targets(keep)?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    let kept_dims: Vec<usize> = if keep.is_empty() {
        vec![1]
    } else {
        keep.iter().map(|&k| space.dims()[k]).collect()
    };
    let out_space = HilbertSpace::new(kept_dims)?;
    let (offsets, bases) = space.target_layout(&keep);
    let n = offsets.len();
    let m = rho.entries();
    let out = DMatrix::from_fn(n, n, |r, c| {
        bases
            .iter()
            .map(|&b| m[(b + offsets[r], b + offsets[c])])
            .sum::<C64>()
    });
    Ok(DensityMatrix::from_raw(out_space, out))
}

/// Reduced state of a pure state on `keep`, without forming the full
/// density matrix.
pub fn reduced_density(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let space = state.space();
    space.check_targets(keep)?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    let kept_dims: Vec<usize> = if keep.is_empty() {
        vec![1]
    } else {
        keep.iter().map(|&k| space.dims()[k]).collect()
    };
    let (offsets, bases) = space.target_layout(&keep);
    let a = state.amps();
    let n = offsets.len();
    let out = DMatrix::from_fn(n, n, |r, c| {
        bases
            .iter()
            .map(|&b| a[b + offsets[r]] * a[b + offsets[c]].conj())
            .sum::<C64>()
    });
    Ok(DensityMatrix::from_raw(HilbertSpace::new(kept_dims)?, out))
}

/// Von Neumann entropy in ebits (log base 2), `0·log 0 = 0`.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero; anything more negative
/// is rejected.
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    let mut s = 0.0;
    for lambda in rho.eigenvalues() {
        if lambda < -PSD_TOL {
            return Err(invalid(
                "density matrix",
                format!("eigenvalue {lambda:e} below entropy clamp"),
            ));
        }
        let l = lambda.clamp(0.0, 1.0);
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    Ok(s.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::gates::{fourier_matrix, ghz_state, phi_dn_state, z_power};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_state(dims: Vec<usize>, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = HilbertSpace::new(dims).unwrap();
        let amps = (0..space.total_dim())
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        StateVector::normalized(space, amps).unwrap()
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let s = random_state(vec![3, 2, 4], 1);
        let out = apply_unitary(&s, &UnitaryMatrix::identity(8), &[2, 1]).unwrap();
        assert!(out.max_abs_diff(&s).unwrap() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_error() {
        let s = random_state(vec![3, 2], 2);
        assert!(apply_unitary(&s, &UnitaryMatrix::identity(2), &[0]).is_err());
        assert!(apply_unitary(&s, &UnitaryMatrix::identity(6), &[0, 0]).is_err());
    }

    #[test]
    fn z_power_group_property() {
        let s = random_state(vec![5, 5], 3);
        let z1 = z_power(5, 1).unwrap();
        let twice = apply_unitary(&apply_unitary(&s, &z1, &[1]).unwrap(), &z1, &[1]).unwrap();
        let once = apply_unitary(&s, &z_power(5, 2).unwrap(), &[1]).unwrap();
        assert!(twice.max_abs_diff(&once).unwrap() < 1e-13);
    }

    #[test]
    fn fourier_round_trip() {
        let s = random_state(vec![4, 3], 4);
        let f = fourier_matrix(3).unwrap();
        let back = apply_unitary(&apply_unitary(&s, &f, &[1]).unwrap(), &f.adjoint(), &[1]).unwrap();
        assert!(back.max_abs_diff(&s).unwrap() < 1e-12);
    }

    #[test]
    fn apply_matches_embedded_operator() {
        let s = random_state(vec![2, 3, 2], 5);
        let op = fourier_matrix(4).unwrap();
        let direct = apply_unitary(&s, &op, &[2, 0]).unwrap();
        let full = embed(s.space(), &op, &[2, 0]).unwrap();
        let v = nalgebra::DVector::from_column_slice(s.amps());
        let w = full.entries() * v;
        for (a, b) in direct.amps().iter().zip(w.iter()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn leg_independence_for_ghz() {
        for d in 2..=9 {
            for k in 2..=4 {
                if (d as usize).pow(k as u32) > 6561 {
                    continue;
                }
                let ghz = ghz_state(d, k).unwrap();
                for n in 0..d as i64 {
                    let z = z_power(d, n).unwrap();
                    let first = apply_unitary(&ghz, &z, &[0]).unwrap();
                    for leg in 1..k {
                        let other = apply_unitary(&ghz, &z, &[leg]).unwrap();
                        assert!(first.max_abs_diff(&other).unwrap() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn measuring_basis_state_is_deterministic() {
        let space = HilbertSpace::new(vec![3]).unwrap();
        let s = StateVector::basis(space, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = measure_subsystem(&s, &[0], &UnitaryMatrix::identity(3), &mut rng).unwrap();
        assert_eq!(m.outcome, 0);
        assert!((m.prob - 1.0).abs() < 1e-15);
        assert!(m.collapsed.max_abs_diff(&s).unwrap() < 1e-15);
    }

    #[test]
    fn fourier_measurement_of_phi_obeys_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 2..=6 {
            let f = fourier_matrix(d).unwrap();
            for n in 0..d {
                let phi = phi_dn_state(d, n, 2).unwrap();
                for _ in 0..20 {
                    let mx = measure_subsystem(&phi, &[0], &f, &mut rng).unwrap();
                    let my = measure_subsystem(&mx.collapsed, &[1], &f, &mut rng).unwrap();
                    assert_eq!((mx.outcome + my.outcome) % d, n);
                    assert!((mx.prob - 1.0 / d as f64).abs() < 1e-12);
                    assert!((my.prob - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn joint_fourier_distribution_uniform_on_valid_pairs() {
        let d = 5;
        let phi = phi_dn_state(d, 3, 2).unwrap();
        let f = fourier_matrix(d).unwrap();
        let probs = outcome_probabilities(&phi, &[0, 1], &f.kron(&f)).unwrap();
        for x in 0..d {
            for y in 0..d {
                let want = if (x + y) % d == 3 { 1.0 / d as f64 } else { 0.0 };
                assert!((probs[x * d + y] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn never_samples_zero_branch() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let i = sample_index(&[0.0, 0.3, 0.0, 0.7, 0.0], &mut rng).unwrap();
            assert!(i == 1 || i == 3);
        }
        assert!(sample_index(&[0.0, 0.0], &mut rng).is_none());
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = random_state(vec![3], 8);
        let b = random_state(vec![2], 9);
        let ab = StateVector::product(&[a.clone(), b]).unwrap();
        let kept = partial_trace(&ab.density(), &[0]).unwrap();
        assert!(kept.max_abs_diff(&a.density()).unwrap() < 1e-14);
        let empty = partial_trace(&ab.density(), &[]).unwrap();
        assert_eq!(empty.dim(), 1);
        assert!((empty.entries()[(0, 0)].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ghz_marginal_is_maximally_mixed() {
        for d in 2..=6 {
            let g = ghz_state(d, 2).unwrap();
            let m = partial_trace(&g.density(), &[1]).unwrap();
            let mixed = DensityMatrix::maximally_mixed(HilbertSpace::new(vec![d]).unwrap());
            assert!(m.max_abs_diff(&mixed).unwrap() < 1e-14);
            assert!((vn_entropy(&m).unwrap() - (d as f64).log2()).abs() < 1e-12);
            let fast = reduced_density(&g, &[1]).unwrap();
            assert!(fast.max_abs_diff(&m).unwrap() < 1e-14);
        }
        let g4 = ghz_state(4, 2).unwrap();
        assert!((vn_entropy(&reduced_density(&g4, &[0]).unwrap()).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_pure_and_mixed() {
        let s = random_state(vec![3, 3], 10);
        assert!(vn_entropy(&s.density()).unwrap().abs() < 1e-9);
        let mixed = DensityMatrix::maximally_mixed(HilbertSpace::new(vec![7]).unwrap());
        assert!((vn_entropy(&mixed).unwrap() - 7f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn entropy_rejects_clearly_negative_spectrum() {
        let space = HilbertSpace::new(vec![2]).unwrap();
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.001, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-0.001, 0.0)],
        );
        let rho = DensityMatrix::hermitian(space, m).unwrap();
        assert!(vn_entropy(&rho).is_err());
    }
}
