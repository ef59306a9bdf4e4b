use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::space::HilbertSpace;
use crate::error::{invalid, Error, Result};

/// Tolerance on `Σ|a|² = 1` and on `Tr ρ = 1`.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on hermiticity of density matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Most negative eigenvalue still treated as round-off.
pub const PSD_TOL: f64 = 1e-10;
/// Tolerance on `U†U = 1`.
pub const UNITARY_TOL: f64 = 1e-10;

/// Pure state with dense amplitudes, row-major over its space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: HilbertSpace,
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that must already be normalized.
    pub fn new(space: HilbertSpace, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.total_dim(),
                got: amps.len(),
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(invalid("state vector", format!("squared norm {norm_sqr}")));
        }
        Ok(Self { space, amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(space: HilbertSpace, mut amps: Vec<C64>) -> Result<Self> {
        if amps.len() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.total_dim(),
                got: amps.len(),
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(invalid("state vector", "zero or non-finite norm"));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { space, amps })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(space: HilbertSpace, index: usize) -> Result<Self> {
        let dim = space.total_dim();
        if index >= dim {
            return Err(crate::error::domain(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { space, amps })
    }

    /// Product state, subsystem order as given.
    pub fn product(factors: &[StateVector]) -> Result<Self> {
        let mut dims = Vec::new();
        let mut amps = vec![C64::new(1.0, 0.0)];
        for f in factors {
            dims.extend_from_slice(f.space.dims());
            amps = amps
                .iter()
                .flat_map(|a| f.amps.iter().map(move |b| a * b))
                .collect();
        }
        Ok(Self {
            space: HilbertSpace::new(dims)?,
            amps,
        })
    }

    pub(crate) fn from_raw(space: HilbertSpace, amps: Vec<C64>) -> Self {
        debug_assert_eq!(space.total_dim(), amps.len());
        Self { space, amps }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.space.expect_same(&other.space)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Largest componentwise distance, for comparing states in tests.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        self.space.expect_same(&other.space)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn density(&self) -> DensityMatrix {
        let v = nalgebra::DVector::from_column_slice(&self.amps);
        DensityMatrix {
            space: self.space.clone(),
            entries: &v * v.adjoint(),
        }
    }
}

/// Mixed state over a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: HilbertSpace,
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(space: HilbertSpace, entries: DMatrix<C64>) -> Result<Self> {
        let rho = Self::hermitian(space, entries)?;
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(invalid(
                "density matrix",
                format!("negative eigenvalue {min:e}"),
            ));
        }
        Ok(rho)
    }

    /// Validates hermiticity and unit trace only.
    ///
    /// First-order (linearized) channel outputs are Hermitian and trace one
    /// but may carry negative eigenvalues of second order in the rates.
    pub fn hermitian(space: HilbertSpace, entries: DMatrix<C64>) -> Result<Self> {
        let dim = space.total_dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: entries.nrows(),
            });
        }
        let skew = (&entries - entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if skew > HERMITIAN_TOL {
            return Err(invalid("density matrix", format!("not Hermitian ({skew:e})")));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > NORM_TOL || trace.im.abs() > NORM_TOL {
            return Err(invalid("density matrix", format!("trace {trace}")));
        }
        Ok(Self { space, entries })
    }

    pub(crate) fn from_raw(space: HilbertSpace, entries: DMatrix<C64>) -> Self {
        Self { space, entries }
    }

    pub fn maximally_mixed(space: HilbertSpace) -> Self {
        let dim = space.total_dim();
        let entries = DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
        Self { space, entries }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self.eigen().0;
        values.sort_by(|a, b| a.total_cmp(b));
        values
    }

    /// Eigenpairs `(λ_i, |e_i⟩)` with `ρ = Σ λ_i |e_i⟩⟨e_i|`.
    pub fn eigen(&self) -> (Vec<f64>, Vec<Vec<C64>>) {
        let herm = (&self.entries + self.entries.adjoint()) * C64::new(0.5, 0.0);
        let eig = herm.symmetric_eigen();
        let values = eig.eigenvalues.iter().copied().collect();
        let vectors = eig
            .eigenvectors
            .column_iter()
            .map(|c| c.iter().copied().collect())
            .collect();
        (values, vectors)
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.eigenvalues().first().is_none_or(|&m| m >= -tol)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        self.space.expect_same(psi.space())?;
        let v = nalgebra::DVector::from_column_slice(psi.amps());
        Ok((v.adjoint() * &self.entries * &v)[(0, 0)].re)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        self.space.expect_same(&other.space)?;
        Ok((&self.entries - &other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    /// `U ρ U†` with `U` acting on the full space.
    pub fn conjugate_by(&self, op: &UnitaryMatrix) -> Result<Self> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: op.dim(),
            });
        }
        Ok(Self {
            space: self.space.clone(),
            entries: op.entries() * &self.entries * op.entries().adjoint(),
        })
    }

    /// Tensor product, subsystem order `self` then `other`.
    pub fn kron(&self, other: &DensityMatrix) -> Result<Self> {
        let mut dims = self.space.dims().to_vec();
        dims.extend_from_slice(other.space.dims());
        Ok(Self {
            space: HilbertSpace::new(dims)?,
            entries: self.entries.kronecker(&other.entries),
        })
    }
}

/// Square unitary operator.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    entries: DMatrix<C64>,
}

impl UnitaryMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(invalid("unitary", "matrix is not square"));
        }
        let n = entries.nrows();
        if n == 0 {
            return Err(invalid("unitary", "empty matrix"));
        }
        let defect = (entries.adjoint() * &entries - DMatrix::<C64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > UNITARY_TOL {
            return Err(invalid("unitary", format!("U†U deviates by {defect:e}")));
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_raw(entries: DMatrix<C64>) -> Self {
        Self { entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &UnitaryMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(Self {
            entries: &self.entries * &other.entries,
        })
    }

    pub fn kron(&self, other: &UnitaryMatrix) -> Self {
        Self {
            entries: self.entries.kronecker(&other.entries),
        }
    }

    pub fn max_abs_diff(&self, other: &UnitaryMatrix) -> f64 {
        (&self.entries - &other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}
