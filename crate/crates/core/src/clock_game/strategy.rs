//! The controlled-Zⁿ strategy: each party applies `Zⁿ` to its ancilla qudit
//! when its referee mode holds the excitation in bin `n`, then measures the
//! qudit in the Fourier basis.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::ancilla::AncillaSpec;
use super::config::{encoded_state, Component, GameConfig, RefereeBasis, ReducedRefereeState};
use crate::error::{domain, Error, Result};
use crate::qudit::{root_of_unity, to_fourier_coordinates, DensityMatrix, HilbertSpace, StateVector};

/// Diagonal phases `e^{2πi·m·j_p/D}` the strategy imprints on ancilla basis
/// state `|j_1…j_K⟩` when referee component `(p, m)` is occupied. All ones
/// for the vacuum.
pub fn branch_phases(basis: RefereeBasis, levels: usize, index: usize) -> Vec<C64> {
    let space = HilbertSpace::uniform(levels, basis.parties).expect("valid ancilla shape");
    let total = space.total_dim();
    match basis.component(index) {
        Component::Vacuum => vec![C64::new(1.0, 0.0); total],
        Component::Photon { party, bin } => {
            let stride = space.strides()[party];
            (0..total)
                .map(|j| {
                    let digit = (j / stride) % levels;
                    root_of_unity((bin * digit) as i64, levels)
                })
                .collect()
        }
    }
}

fn check_parties(basis: RefereeBasis, ancilla: &AncillaSpec) -> Result<()> {
    if basis.parties != ancilla.parties() {
        return Err(Error::DimensionMismatch {
            expected: basis.parties,
            got: ancilla.parties(),
        });
    }
    Ok(())
}

/// Joint referee–ancilla state after the strategy's gates.
#[derive(Debug, Clone)]
pub enum JointState {
    /// Over `[K·N + 1, D, …, D]`.
    Pure(StateVector),
    Mixed(DensityMatrix),
}

/// Runs every party's controlled-Zⁿ gates on `referee ⊗ ancilla`.
pub fn apply_strategy(referee: &ReducedRefereeState, ancilla: &AncillaSpec) -> Result<JointState> {
    let basis = referee.basis();
    check_parties(basis, ancilla)?;
    let levels = ancilla.levels();
    match ancilla.pure_state() {
        Some(chi) => {
            let mut dims = vec![basis.dim()];
            dims.extend_from_slice(chi.space().dims());
            let space = HilbertSpace::new(dims)?;
            let block = chi.amps().len();
            let mut amps = vec![C64::new(0.0, 0.0); basis.dim() * block];
            for (b, a) in referee.amps().iter().enumerate() {
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let phases = branch_phases(basis, levels, b);
                for (j, (p, c)) in phases.iter().zip(chi.amps()).enumerate() {
                    amps[b * block + j] = a * p * c;
                }
            }
            Ok(JointState::Pure(StateVector::from_raw(space, amps)))
        }
        None => apply_strategy_mixed(&referee.density(), ancilla).map(JointState::Mixed),
    }
}

/// Mixed-input version: `Σ_{b,b'} ρ[b,b'] |b⟩⟨b'| ⊗ U_b σ U_{b'}†`.
pub fn apply_strategy_mixed(referee: &DensityMatrix, ancilla: &AncillaSpec) -> Result<DensityMatrix> {
    let levels = ancilla.levels();
    let sigma = ancilla.to_density();
    let block = sigma.dim();
    let rdim = referee.dim();
    let bins = (rdim - 1) / ancilla.parties();
    if bins * ancilla.parties() + 1 != rdim {
        return Err(domain(format!(
            "referee dimension {rdim} is not K·N + 1 for K = {}",
            ancilla.parties()
        )));
    }
    let basis = RefereeBasis {
        bins,
        parties: ancilla.parties(),
    };
    let phases: Vec<Vec<C64>> = (0..rdim).map(|b| branch_phases(basis, levels, b)).collect();
    let mut dims = vec![rdim];
    dims.extend(std::iter::repeat_n(levels, ancilla.parties()));
    let n = rdim * block;
    let r = referee.entries();
    let s = sigma.entries();
    let out = DMatrix::from_fn(n, n, |row, col| {
        let (b, j) = (row / block, row % block);
        let (bp, jp) = (col / block, col % block);
        r[(b, bp)] * phases[b][j] * s[(j, jp)] * phases[bp][jp].conj()
    });
    Ok(DensityMatrix::from_raw(HilbertSpace::new(dims)?, out))
}

/// Decoded time-bin of every joint Fourier outcome `(x_1,…,x_K)`, flattened
/// row-major.
pub(crate) fn decoded_bins(levels: usize, parties: usize) -> Vec<usize> {
    let space = HilbertSpace::uniform(levels, parties).expect("valid ancilla shape");
    (0..space.total_dim())
        .map(|x| space.digits(x).iter().sum::<usize>() % levels)
        .collect()
}

/// The referee-side quantum instrument induced by the strategy, one branch
/// per decoded time-bin `d`:
///
/// `E_d(ρ)[b,b'] = ρ[b,b'] · G_d[b,b']`, with
/// `G_d[b,b'] = Σ_{x: Σx mod D = d} ⟨x̃|U_b σ U_{b'}†|x̃⟩`.
///
/// Only the referee components listed at construction are covered.
#[derive(Debug, Clone)]
pub struct StrategyInstrument {
    basis: RefereeBasis,
    levels: usize,
    slot: Vec<Option<usize>>,
    coherence: Vec<DMatrix<C64>>,
}

impl StrategyInstrument {
    /// Instrument restricted to `components` of the referee basis.
    pub fn new(basis: RefereeBasis, ancilla: &AncillaSpec, components: &[usize]) -> Result<Self> {
        check_parties(basis, ancilla)?;
        let levels = ancilla.levels();
        let mut slot = vec![None; basis.dim()];
        for (i, &c) in components.iter().enumerate() {
            if c >= basis.dim() {
                return Err(domain(format!("component {c} out of range")));
            }
            slot[c] = Some(i);
        }
        let decoded = decoded_bins(levels, basis.parties);
        let m = components.len();
        let mut coherence = vec![DMatrix::<C64>::zeros(m, m); levels];

        for (weight, chi) in ancilla.ensemble() {
            let branches: Vec<Vec<C64>> = components
                .iter()
                .map(|&b| {
                    let phases = branch_phases(basis, levels, b);
                    let amps = chi.amps().iter().zip(&phases).map(|(c, p)| c * p).collect();
                    let v = StateVector::from_raw(chi.space().clone(), amps);
                    Ok(to_fourier_coordinates(&v)?.into_amps())
                })
                .collect::<Result<_>>()?;
            for (x, &d) in decoded.iter().enumerate() {
                let g = &mut coherence[d];
                for s in 0..m {
                    let ws = branches[s][x] * weight;
                    if ws.norm_sqr() == 0.0 {
                        continue;
                    }
                    for t in 0..m {
                        g[(s, t)] += ws * branches[t][x].conj();
                    }
                }
            }
        }
        Ok(Self {
            basis,
            levels,
            slot,
            coherence,
        })
    }

    /// Instrument over the whole `K·N + 1` referee basis.
    pub fn full(basis: RefereeBasis, ancilla: &AncillaSpec) -> Result<Self> {
        let all: Vec<usize> = (0..basis.dim()).collect();
        Self::new(basis, ancilla, &all)
    }

    pub fn basis(&self) -> RefereeBasis {
        self.basis
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// `G_d` restricted to the covered components.
    pub fn coherence(&self, decoded: usize) -> &DMatrix<C64> {
        &self.coherence[decoded]
    }

    fn weights(&self, state: &ReducedRefereeState) -> Result<Vec<(usize, f64)>> {
        if state.basis() != self.basis {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                got: state.basis().dim(),
            });
        }
        state
            .support()
            .into_iter()
            .map(|b| {
                self.slot[b]
                    .map(|s| (s, state.amps()[b].norm_sqr()))
                    .ok_or_else(|| domain(format!("referee component {b} not covered by instrument")))
            })
            .collect()
    }

    /// Probability of each decoded time-bin.
    pub fn decode_distribution(&self, state: &ReducedRefereeState) -> Result<Vec<f64>> {
        let w = self.weights(state)?;
        Ok(self
            .coherence
            .iter()
            .map(|g| w.iter().map(|&(s, p)| p * g[(s, s)].re).sum())
            .collect())
    }

    /// Decoded time-bin distribution for a mixed referee input.
    pub fn decode_distribution_mixed(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        Ok(self.apply(rho)?.iter().map(|branch| branch.trace().re).collect())
    }

    /// Probability that the parties decode `decoded` and the referee's
    /// projective check on the returned state succeeds.
    pub fn joint_accept(&self, state: &ReducedRefereeState, decoded: usize) -> Result<f64> {
        let w = self.weights(state)?;
        let g = &self.coherence[decoded];
        let mut total = 0.0;
        for &(s, ps) in &w {
            for &(t, pt) in &w {
                total += ps * pt * g[(s, t)].re;
            }
        }
        Ok(total)
    }

    /// Fidelity of the referee's returned state (averaged over all outcomes)
    /// with the state it sent.
    pub fn transparency(&self, state: &ReducedRefereeState) -> Result<f64> {
        (0..self.levels).map(|d| self.joint_accept(state, d)).sum()
    }

    /// Unnormalized referee state for each decoded bin.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<Vec<DensityMatrix>> {
        if rho.dim() != self.basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                got: rho.dim(),
            });
        }
        let r = rho.entries();
        for b in 0..rho.dim() {
            if self.slot[b].is_none() && r.row(b).iter().any(|z| z.norm() > 0.0) {
                return Err(domain(format!("referee component {b} not covered by instrument")));
            }
        }
        Ok(self
            .coherence
            .iter()
            .map(|g| {
                let out = DMatrix::from_fn(rho.dim(), rho.dim(), |b, bp| match (self.slot[b], self.slot[bp]) {
                    (Some(s), Some(t)) => r[(b, bp)] * g[(s, t)],
                    _ => C64::new(0.0, 0.0),
                });
                DensityMatrix::from_raw(rho.space().clone(), out)
            })
            .collect())
    }
}

/// Referee's acceptance probability `|⟨Ψ_{φ,n}|post⟩|²` for a pure returned state.
pub fn referee_verify(post: &ReducedRefereeState, config: &GameConfig) -> Result<f64> {
    let target = encoded_state(config.basis(), config.timebin(), config.phases());
    if post.basis() != target.basis() {
        return Err(Error::DimensionMismatch {
            expected: target.basis().dim(),
            got: post.basis().dim(),
        });
    }
    Ok(target.inner(post).norm_sqr())
}

/// `⟨Ψ_{φ,n}|ρ|Ψ_{φ,n}⟩` for a mixed returned state.
pub fn referee_verify_mixed(post: &DensityMatrix, config: &GameConfig) -> Result<f64> {
    let target = encoded_state(config.basis(), config.timebin(), config.phases());
    if post.dim() != target.basis().dim() {
        return Err(Error::DimensionMismatch {
            expected: target.basis().dim(),
            got: post.dim(),
        });
    }
    let v = nalgebra::DVector::from_column_slice(target.amps());
    Ok((v.adjoint() * post.entries() * &v)[(0, 0)].re)
}
