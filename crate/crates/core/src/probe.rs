use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CoreError;
use crate::vector::ComplexVector;

/// Default probe count: up to 8 canonical basis directions topped up with
/// seeded random unit vectors.
pub const DEFAULT_PROBE_COUNT: usize = 16;
const BASIS_PROBE_TARGET: usize = 8;

/// Finite truncation {x_1, ..., x_L} of a dense probe sequence.
///
/// Probe `l` (1-based) carries weight 2^{-l} in every metric and seminorm.
/// All probes share one dimension and have nonzero norm.
#[derive(Clone, Debug)]
pub struct ProbeSet {
    vectors: Vec<ComplexVector>,
    label: String,
}

impl ProbeSet {
    pub fn new(vectors: Vec<ComplexVector>) -> Result<Self, CoreError> {
        Self::with_label(vectors, "explicit".to_string())
    }

    pub fn with_label(vectors: Vec<ComplexVector>, label: String) -> Result<Self, CoreError> {
        let Some(first) = vectors.first() else {
            return Err(CoreError::EmptyProbeSet);
        };
        let dim = first.dim();
        for (index, v) in vectors.iter().enumerate() {
            if v.dim() != dim {
                return Err(CoreError::DimensionMismatch {
                    left: dim,
                    right: v.dim(),
                });
            }
            if v.norm() == 0.0 {
                return Err(CoreError::ZeroProbe { index });
            }
        }
        Ok(Self { vectors, label })
    }

    /// The default probe family: min(8, dim) canonical basis vectors followed
    /// by seeded random unit vectors up to [`DEFAULT_PROBE_COUNT`].
    pub fn default_for_dim(dim: usize, seed: u64) -> Result<Self, CoreError> {
        Self::seeded(dim, DEFAULT_PROBE_COUNT, seed)
    }

    /// Same construction with an explicit probe count.
    pub fn seeded(dim: usize, count: usize, seed: u64) -> Result<Self, CoreError> {
        if dim == 0 {
            return Err(CoreError::InvalidParameter {
                name: "dim",
                reason: "dimension must be positive".into(),
            });
        }
        if count == 0 {
            return Err(CoreError::EmptyProbeSet);
        }
        let mut vectors = Vec::with_capacity(count);
        let basis = BASIS_PROBE_TARGET.min(dim).min(count);
        for i in 0..basis {
            vectors.push(ComplexVector::basis(dim, i));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while vectors.len() < count {
            vectors.push(random_unit(dim, &mut rng));
        }
        Self::with_label(
            vectors,
            format!("default(dim={dim},count={count},seed={seed})"),
        )
    }

    /// The first `count` canonical basis vectors.
    pub fn basis(dim: usize, count: usize) -> Result<Self, CoreError> {
        if count == 0 || count > dim {
            return Err(CoreError::InvalidParameter {
                name: "count",
                reason: format!("{count} basis probes do not fit in dimension {dim}"),
            });
        }
        let vectors = (0..count).map(|i| ComplexVector::basis(dim, i)).collect();
        Self::with_label(vectors, format!("basis(dim={dim},count={count})"))
    }

    /// A single-probe set.
    pub fn single(vector: ComplexVector) -> Result<Self, CoreError> {
        Self::with_label(vec![vector], "single".to_string())
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].dim()
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    /// Identifier recorded in certificates so a verifier can rebuild the set.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Weight 2^{-l} of probe `index` (zero-based, so l = index + 1).
    pub fn weight(index: usize) -> f64 {
        0.5_f64.powi(index as i32 + 1)
    }
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> ComplexVector {
    loop {
        let entries: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let v = ComplexVector::new(entries).expect("entries are finite by construction");
        let n = v.norm();
        if n > 1e-6 {
            return v.scale(Complex64::new(1.0 / n, 0.0));
        }
    }
}
