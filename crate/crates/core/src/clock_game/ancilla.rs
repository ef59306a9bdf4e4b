use num_complex::Complex64 as C64;

use crate::error::{domain, invalid, Error, Result};
use crate::qudit::{ghz_state, reduced_density, partial_trace, DensityMatrix, HilbertSpace, StateVector, NORM_TOL};

/// Shared ancilla resource for `parties` qudits of `levels` levels each.
#[derive(Debug, Clone, PartialEq)]
pub struct AncillaSpec {
    levels: usize,
    parties: usize,
    kind: AncillaKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AncillaKind {
    /// Generalized GHZ state `D^{-1/2} Σ_j |j…j⟩`.
    Maximal,
    /// `Σ_j c_j |j…j⟩` with normalized coefficients.
    Schmidt(Vec<C64>),
    /// Any pure state of the ancilla register, e.g. a product state.
    Pure(StateVector),
    /// Mixed ancilla, e.g. after noise.
    Density(DensityMatrix),
}

impl AncillaSpec {
    pub fn maximal(levels: usize, parties: usize) -> Result<Self> {
        check_shape(levels, parties)?;
        Ok(Self {
            levels,
            parties,
            kind: AncillaKind::Maximal,
        })
    }

    pub fn schmidt(coeffs: Vec<C64>, parties: usize) -> Result<Self> {
        let levels = coeffs.len();
        check_shape(levels, parties)?;
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(invalid("Schmidt coefficients", format!("Σ|c|² = {norm}")));
        }
        Ok(Self {
            levels,
            parties,
            kind: AncillaKind::Schmidt(coeffs),
        })
    }

    /// Real nonnegative Schmidt coefficients.
    pub fn schmidt_real(coeffs: &[f64], parties: usize) -> Result<Self> {
        Self::schmidt(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect(), parties)
    }

    pub fn pure(state: StateVector) -> Result<Self> {
        let (levels, parties) = uniform_shape(state.space())?;
        Ok(Self {
            levels,
            parties,
            kind: AncillaKind::Pure(state),
        })
    }

    /// Product of one local state per party.
    pub fn product(locals: &[StateVector]) -> Result<Self> {
        Self::pure(StateVector::product(locals)?)
    }

    pub fn density(rho: DensityMatrix) -> Result<Self> {
        let (levels, parties) = uniform_shape(rho.space())?;
        Ok(Self {
            levels,
            parties,
            kind: AncillaKind::Density(rho),
        })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn kind(&self) -> &AncillaKind {
        &self.kind
    }

    pub fn space(&self) -> HilbertSpace {
        HilbertSpace::uniform(self.levels, self.parties).expect("validated at construction")
    }

    /// The ancilla as a state vector, when it is pure.
    pub fn pure_state(&self) -> Option<StateVector> {
        match &self.kind {
            AncillaKind::Maximal => ghz_state(self.levels, self.parties).ok(),
            AncillaKind::Schmidt(c) => Some(schmidt_vector(c, self.parties)),
            AncillaKind::Pure(s) => Some(s.clone()),
            AncillaKind::Density(_) => None,
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match &self.kind {
            AncillaKind::Density(rho) => rho.clone(),
            _ => self.pure_state().expect("pure variant").density(),
        }
    }

    /// `(λ_i, |e_i⟩)` with `ρ = Σ λ_i |e_i⟩⟨e_i|`; a single unit-weight term
    /// for pure ancillas. Weights may be slightly negative for linearized
    /// channel outputs.
    pub fn ensemble(&self) -> Vec<(f64, StateVector)> {
        match &self.kind {
            AncillaKind::Density(rho) => {
                let (values, vectors) = rho.eigen();
                values
                    .into_iter()
                    .zip(vectors)
                    .filter(|(l, _)| l.abs() > 1e-15)
                    .map(|(l, v)| (l, StateVector::from_raw(rho.space().clone(), v)))
                    .collect()
            }
            _ => vec![(1.0, self.pure_state().expect("pure variant"))],
        }
    }

    /// State of the first party's qudit.
    pub fn one_party_marginal(&self) -> Result<DensityMatrix> {
        match &self.kind {
            AncillaKind::Density(rho) => partial_trace(rho, &[0]),
            _ => reduced_density(&self.pure_state().expect("pure variant"), &[0]),
        }
    }
}

fn check_shape(levels: usize, parties: usize) -> Result<()> {
    if levels < 2 {
        return Err(domain(format!("ancilla needs D ≥ 2 levels, got {levels}")));
    }
    if parties < 2 {
        return Err(domain(format!("ancilla needs K ≥ 2 parties, got {parties}")));
    }
    Ok(())
}

fn uniform_shape(space: &HilbertSpace) -> Result<(usize, usize)> {
    let dims = space.dims();
    let levels = dims[0];
    if dims.iter().any(|&d| d != levels) {
        return Err(Error::Domain(format!(
            "ancilla qudits must share one dimension, got {dims:?}"
        )));
    }
    check_shape(levels, dims.len())?;
    Ok((levels, dims.len()))
}

fn schmidt_vector(coeffs: &[C64], parties: usize) -> StateVector {
    let levels = coeffs.len();
    let space = HilbertSpace::uniform(levels, parties).expect("validated at construction");
    let total = space.total_dim();
    let step = (total - 1) / (levels - 1);
    let mut amps = vec![C64::new(0.0, 0.0); total];
    for (j, c) in coeffs.iter().enumerate() {
        amps[j * step] = *c;
    }
    StateVector::from_raw(space, amps)
}
