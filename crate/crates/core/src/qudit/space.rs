use crate::error::{domain, Error, Result};

/// Ordered list of subsystem dimensions.
///
/// Basis indices are row-major over `dims` with subsystem 0 the most
/// significant digit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    dims: Vec<usize>,
}

impl HilbertSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(domain("a Hilbert space needs at least one subsystem"));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(domain(format!("subsystem {pos} has dimension 0")));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| domain("total dimension overflows usize"))?;
        Ok(Self { dims })
    }

    /// `count` copies of a `dim`-level system.
    pub fn uniform(dim: usize, count: usize) -> Result<Self> {
        Self::new(vec![dim; count])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Stride of each subsystem in the flattened index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    /// Splits a flat index into per-subsystem digits.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    /// Inverse of [`HilbertSpace::digits`].
    pub fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&j, &d)| acc * d + j)
    }

    /// Checks that `targets` are distinct, in range, and returns the product
    /// of their dimensions.
    pub(crate) fn check_targets(&self, targets: &[usize]) -> Result<usize> {
        let mut seen = vec![false; self.dims.len()];
        for &t in targets {
            if t >= self.dims.len() {
                return Err(domain(format!(
                    "target {t} out of range for {} subsystems",
                    self.dims.len()
                )));
            }
            if seen[t] {
                return Err(domain(format!("target {t} listed twice")));
            }
            seen[t] = true;
        }
        Ok(targets.iter().map(|&t| self.dims[t]).product())
    }

    /// Flat offsets of every multi-index over `targets` (row-major in the
    /// order given), and the base indices where all target digits are zero.
    pub(crate) fn target_layout(&self, targets: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let strides = self.strides();
        let mut offsets = vec![0usize];
        for &t in targets {
            let mut next = Vec::with_capacity(offsets.len() * self.dims[t]);
            for &o in &offsets {
                for j in 0..self.dims[t] {
                    next.push(o + j * strides[t]);
                }
            }
            offsets = next;
        }

        let rest: Vec<usize> = (0..self.dims.len())
            .filter(|i| !targets.contains(i))
            .collect();
        let mut bases = vec![0usize];
        for &r in &rest {
            let mut next = Vec::with_capacity(bases.len() * self.dims[r]);
            for &b in &bases {
                for j in 0..self.dims[r] {
                    next.push(b + j * strides[r]);
                }
            }
            bases = next;
        }
        (offsets, bases)
    }

    pub(crate) fn expect_same(&self, other: &HilbertSpace) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                got: other.total_dim(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_dimension() {
        assert!(HilbertSpace::new(vec![2, 0]).is_err());
        assert!(HilbertSpace::new(vec![]).is_err());
    }

    #[test]
    fn digits_round_trip_row_major() {
        let space = HilbertSpace::new(vec![3, 2, 4]).unwrap();
        assert_eq!(space.total_dim(), 24);
        assert_eq!(space.strides(), vec![8, 4, 1]);
        for i in 0..24 {
            assert_eq!(space.index(&space.digits(i)), i);
        }
        // subsystem 0 is the most significant digit
        assert_eq!(space.digits(8), vec![1, 0, 0]);
    }

    #[test]
    fn target_layout_covers_every_index_once() {
        let space = HilbertSpace::new(vec![2, 3, 2]).unwrap();
        let (offsets, bases) = space.target_layout(&[2, 0]);
        assert_eq!(offsets, vec![0, 6, 1, 7]);
        let mut all: Vec<usize> = bases
            .iter()
            .flat_map(|b| offsets.iter().map(move |o| b + o))
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn duplicate_targets_rejected() {
        let space = HilbertSpace::uniform(2, 3).unwrap();
        assert!(space.check_targets(&[1, 1]).is_err());
        assert!(space.check_targets(&[3]).is_err());
        assert_eq!(space.check_targets(&[0, 2]).unwrap(), 4);
    }
}
