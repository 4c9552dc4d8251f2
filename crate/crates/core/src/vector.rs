use num_complex::Complex64;

use crate::error::CoreError;

/// Finite-dimensional complex vector.
///
/// The inner product is `⟨x, y⟩ = Σ x_i·conj(y_i)`, linear in the first
/// argument. Entries are always finite; the zero vector is allowed (probe
/// sets reject it separately).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    /// Rejects empty vectors and non-finite entries.
    pub fn new(entries: Vec<Complex64>) -> Result<Self, CoreError> {
        if entries.is_empty() {
            return Err(CoreError::EmptyVector);
        }
        if let Some(index) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(CoreError::NonFinite { index });
        }
        Ok(Self { entries })
    }

    /// Wraps entries already known to be nonempty and finite (operator
    /// outputs, which stay finite because inputs and coefficients are).
    pub(crate) fn raw(entries: Vec<Complex64>) -> Self {
        debug_assert!(!entries.is_empty());
        Self { entries }
    }

    pub fn from_reals(values: &[f64]) -> Result<Self, CoreError> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Canonical basis vector `e_index` (zero-based).
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut entries = vec![Complex64::new(0.0, 0.0); dim];
        entries[index] = Complex64::new(1.0, 0.0);
        Self { entries }
    }

    /// The all-ones vector (not normalized).
    pub fn constant_one(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            entries: vec![Complex64::new(1.0, 0.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64, CoreError> {
        self.check_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| x * y.conj())
            .sum())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CoreError> {
        self.check_dim(other)?;
        Ok(Self::raw(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(x, y)| x + y)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CoreError> {
        self.check_dim(other)?;
        Ok(Self::raw(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(x, y)| x - y)
                .collect(),
        ))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::raw(self.entries.iter().map(|x| factor * x).collect())
    }

    fn check_dim(&self, other: &Self) -> Result<(), CoreError> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(CoreError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            })
        }
    }
}
