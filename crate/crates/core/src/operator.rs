//! Operator handles: the model kinds, their application rules, powers,
//! adjoints, and structural predicates.
//!
//! Powers are the hot path of every rigidity scan, so each kind keeps them
//! cheap: spectral diagonals and rescalings exponentiate in closed form,
//! shifts and permutations compose index maps, and only dense matrices
//! iterate. [`PowerWalker`] streams consecutive powers and is guaranteed to
//! produce bit-identical values to [`OperatorHandle::apply_power`], which is
//! what lets a search and its later re-verification agree exactly.

use num_complex::Complex64;

use crate::error::CoreError;
use crate::models::SpectralUnitary;
use crate::util::{validate_probability_weights, UNIMODULAR_TOL};
use crate::vector::ComplexVector;

/// Dense matrices iterate their powers, so their dimension is capped.
pub const DENSE_DIM_CAP: usize = 2048;
/// Structured kinds (spectral, shift, koopman) allow much larger spaces.
pub const MODEL_DIM_CAP: usize = 1_000_000;
/// Slack allowed on "operator norm at most 1" declarations.
pub const CONTRACTION_TOL: f64 = 1e-12;

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, CoreError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(CoreError::InvalidParameter {
                name: "matrix",
                reason: "no rows".into(),
            });
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(CoreError::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        if let Some(index) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(CoreError::NonFinite { index });
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub(crate) fn apply_slice(&self, x: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        (0..d)
            .map(|i| {
                let row = &self.entries[i * d..(i + 1) * d];
                row.iter().zip(x).map(|(a, v)| a * v).sum()
            })
            .collect()
    }

    pub(crate) fn apply_adjoint_slice(&self, x: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for (&xi, row) in x.iter().zip(self.entries.chunks_exact(d)) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * xi;
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, CoreError> {
        if self.dim != rhs.dim {
            return Err(CoreError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let d = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let rhs_row = &rhs.entries[k * d..(k + 1) * d];
                let out_row = &mut entries[i * d..(i + 1) * d];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// Matrix power by binary exponentiation.
    pub fn power(&self, n: u64) -> Result<Self, CoreError> {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Operator-norm estimate: power iteration on A*A from a deterministic
    /// start with full support. A lower estimate converging upward.
    fn norm_estimate(&self) -> f64 {
        let d = self.dim;
        let mut v: Vec<Complex64> = (0..d)
            .map(|i| {
                let noise = ((i as u64).wrapping_mul(2_654_435_761) % 1024) as f64 / 1024.0;
                Complex64::new(1.0 + 0.5 * noise, 0.25 + noise * noise)
            })
            .collect();
        normalize(&mut v);
        let mut best = 0.0_f64;
        for _ in 0..60 {
            let av = self.apply_slice(&v);
            let gain: f64 = av.iter().map(|z| z.norm_sqr()).sum();
            best = best.max(gain.sqrt());
            let mut next = self.apply_adjoint_slice(&av);
            if !normalize(&mut next) {
                break;
            }
            v = next;
        }
        best
    }
}

fn normalize(v: &mut [Complex64]) -> bool {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm <= 1e-300 {
        return false;
    }
    let inv = Complex64::new(1.0 / norm, 0.0);
    for z in v.iter_mut() {
        *z *= inv;
    }
    true
}

/// Composition operator `(Uf)_i = f_{σ(i)}` for a permutation σ of the point
/// masses of a finite measure. The weights must be σ-invariant, which is what
/// makes the operator a unitary of a measure-preserving system.
#[derive(Clone, Debug)]
pub struct KoopmanPermutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
    weights: Vec<f64>,
}

impl KoopmanPermutation {
    pub fn new(map: Vec<usize>, weights: Vec<f64>) -> Result<Self, CoreError> {
        let dim = map.len();
        if dim == 0 {
            return Err(CoreError::InvalidParameter {
                name: "permutation",
                reason: "empty map".into(),
            });
        }
        if weights.len() != dim {
            return Err(CoreError::DimensionMismatch {
                left: dim,
                right: weights.len(),
            });
        }
        let mut inverse = vec![usize::MAX; dim];
        for (i, &j) in map.iter().enumerate() {
            if j >= dim {
                return Err(CoreError::NotPermutation {
                    reason: format!("image {j} of index {i} is out of range"),
                });
            }
            if inverse[j] != usize::MAX {
                return Err(CoreError::NotPermutation {
                    reason: format!("index {j} is hit twice"),
                });
            }
            inverse[j] = i;
        }
        validate_probability_weights(&weights)?;
        for (i, &j) in map.iter().enumerate() {
            if (weights[i] - weights[j]).abs() > 1e-12 {
                return Err(CoreError::NotMeasurePreserving { index: i });
            }
        }
        Ok(Self {
            forward: map,
            inverse,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.forward.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.forward
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Order of the permutation (lcm of cycle lengths), saturating at u64::MAX.
    pub fn order(&self) -> u64 {
        let dim = self.dim();
        let mut seen = vec![false; dim];
        let mut order = 1u64;
        for start in 0..dim {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.forward[i];
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }

    /// σ^n as an index map, by binary exponentiation of map composition.
    fn power_map(&self, n: u64) -> Vec<usize> {
        let dim = self.dim();
        let mut result: Vec<usize> = (0..dim).collect();
        let mut base = self.forward.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.iter().map(|&i| base[i]).collect();
            }
            k >>= 1;
            if k > 0 {
                base = base.iter().map(|&i| base[i]).collect();
            }
        }
        result
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }
    (a / gcd(a, b)).saturating_mul(b)
}

/// The model kinds an [`OperatorHandle`] can carry.
#[derive(Clone, Debug)]
pub enum OperatorKind {
    Dense(DenseMatrix),
    Spectral(SpectralUnitary),
    /// Forward coordinate shift by `steps`: `(Sx)_i = x_{i-steps}`, zeros fill in.
    Shift { dim: usize, steps: usize },
    Koopman(KoopmanPermutation),
    Scaled {
        alpha: Complex64,
        inner: Box<OperatorHandle>,
    },
    DirectSum {
        left: Box<OperatorHandle>,
        right: Box<OperatorHandle>,
    },
}

/// An operator together with its dimension and a norm bound.
#[derive(Clone, Debug)]
pub struct OperatorHandle {
    kind: OperatorKind,
    dim: usize,
    norm_bound: f64,
}

impl OperatorHandle {
    pub fn dense(matrix: DenseMatrix) -> Result<Self, CoreError> {
        if matrix.dim() > DENSE_DIM_CAP {
            return Err(CoreError::DimensionCap {
                kind: "dense",
                dim: matrix.dim(),
                cap: DENSE_DIM_CAP,
            });
        }
        let norm_bound = matrix.norm_estimate();
        Ok(Self {
            dim: matrix.dim(),
            norm_bound,
            kind: OperatorKind::Dense(matrix),
        })
    }

    pub fn spectral(model: SpectralUnitary) -> Result<Self, CoreError> {
        if model.dim() > MODEL_DIM_CAP {
            return Err(CoreError::DimensionCap {
                kind: "spectral",
                dim: model.dim(),
                cap: MODEL_DIM_CAP,
            });
        }
        Ok(Self {
            dim: model.dim(),
            norm_bound: 1.0,
            kind: OperatorKind::Spectral(model),
        })
    }

    pub fn shift(dim: usize) -> Result<Self, CoreError> {
        Self::shift_by(dim, 1)
    }

    pub fn shift_by(dim: usize, steps: usize) -> Result<Self, CoreError> {
        if dim == 0 {
            return Err(CoreError::InvalidParameter {
                name: "dim",
                reason: "dimension must be positive".into(),
            });
        }
        if dim > MODEL_DIM_CAP {
            return Err(CoreError::DimensionCap {
                kind: "shift",
                dim,
                cap: MODEL_DIM_CAP,
            });
        }
        Ok(Self {
            dim,
            norm_bound: 1.0,
            kind: OperatorKind::Shift { dim, steps },
        })
    }

    pub fn koopman(perm: KoopmanPermutation) -> Result<Self, CoreError> {
        if perm.dim() > MODEL_DIM_CAP {
            return Err(CoreError::DimensionCap {
                kind: "koopman",
                dim: perm.dim(),
                cap: MODEL_DIM_CAP,
            });
        }
        Ok(Self {
            dim: perm.dim(),
            norm_bound: 1.0,
            kind: OperatorKind::Koopman(perm),
        })
    }

    /// `α·T` for α in the closed unit disk. A unimodular α over a spectral
    /// payload folds into the angles, so powers stay in closed form and the
    /// modulus cannot drift over long scans.
    pub fn scaled(alpha: Complex64, inner: OperatorHandle) -> Result<Self, CoreError> {
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(CoreError::InvalidParameter {
                name: "alpha",
                reason: "not finite".into(),
            });
        }
        if alpha.norm() > 1.0 + CONTRACTION_TOL {
            return Err(CoreError::InvalidParameter {
                name: "alpha",
                reason: format!("modulus {} lies outside the closed unit disk", alpha.norm()),
            });
        }
        if (alpha.norm() - 1.0).abs() <= UNIMODULAR_TOL {
            if let OperatorKind::Spectral(model) = &inner.kind {
                return Self::spectral(model.rotated_by(alpha.arg()));
            }
        }
        let norm_bound = alpha.norm() * inner.norm_bound;
        Ok(Self {
            dim: inner.dim,
            norm_bound,
            kind: OperatorKind::Scaled {
                alpha,
                inner: Box::new(inner),
            },
        })
    }

    /// Block-diagonal sum. Two spectral payloads merge into one spectral
    /// model whose weights are rescaled to total mass 1, so the result stays
    /// in the kind with closed-form powers.
    pub fn direct_sum(left: OperatorHandle, right: OperatorHandle) -> Result<Self, CoreError> {
        if let (OperatorKind::Spectral(a), OperatorKind::Spectral(b)) = (&left.kind, &right.kind) {
            return Self::spectral(SpectralUnitary::merge_direct_sum(a, b)?);
        }
        let dim = left.dim + right.dim;
        if dim > MODEL_DIM_CAP {
            return Err(CoreError::DimensionCap {
                kind: "direct sum",
                dim,
                cap: MODEL_DIM_CAP,
            });
        }
        let norm_bound = left.norm_bound.max(right.norm_bound);
        Ok(Self {
            dim,
            norm_bound,
            kind: OperatorKind::DirectSum {
                left: Box::new(left),
                right: Box::new(right),
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            OperatorKind::Dense(_) => "dense",
            OperatorKind::Spectral(_) => "spectral",
            OperatorKind::Shift { .. } => "shift",
            OperatorKind::Koopman(_) => "koopman",
            OperatorKind::Scaled { .. } => "scaled",
            OperatorKind::DirectSum { .. } => "direct_sum",
        }
    }

    /// Upper bound on the operator norm. Exact for structured kinds; a power
    /// iteration estimate for dense matrices.
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    pub fn is_contractive(&self) -> bool {
        self.norm_bound <= 1.0 + CONTRACTION_TOL
    }

    /// Structural isometry check. Dense matrices report false here; callers
    /// that need more use [`crate::metrics::unitary_defect`].
    pub fn is_isometric(&self) -> bool {
        match &self.kind {
            OperatorKind::Spectral(_) | OperatorKind::Koopman(_) => true,
            OperatorKind::Shift { .. } => false,
            OperatorKind::Dense(_) => false,
            OperatorKind::Scaled { alpha, inner } => {
                (alpha.norm() - 1.0).abs() <= UNIMODULAR_TOL && inner.is_isometric()
            }
            OperatorKind::DirectSum { left, right } => left.is_isometric() && right.is_isometric(),
        }
    }

    pub fn as_spectral(&self) -> Option<&SpectralUnitary> {
        match &self.kind {
            OperatorKind::Spectral(model) => Some(model),
            _ => None,
        }
    }

    fn check_dim(&self, x: &ComplexVector) -> Result<(), CoreError> {
        if x.dim() == self.dim {
            Ok(())
        } else {
            Err(CoreError::DimensionMismatch {
                left: self.dim,
                right: x.dim(),
            })
        }
    }

    pub fn apply(&self, x: &ComplexVector) -> Result<ComplexVector, CoreError> {
        self.check_dim(x)?;
        Ok(ComplexVector::raw(self.apply_slice(x.entries())))
    }

    fn apply_slice(&self, x: &[Complex64]) -> Vec<Complex64> {
        match &self.kind {
            OperatorKind::Dense(m) => m.apply_slice(x),
            OperatorKind::Spectral(u) => u
                .angles()
                .iter()
                .zip(x)
                .map(|(&theta, &v)| Complex64::from_polar(1.0, theta) * v)
                .collect(),
            OperatorKind::Shift { dim, steps } => shifted(x, *dim, *steps),
            OperatorKind::Koopman(k) => k.forward.iter().map(|&j| x[j]).collect(),
            OperatorKind::Scaled { alpha, inner } => {
                inner.apply_slice(x).iter().map(|v| alpha * v).collect()
            }
            OperatorKind::DirectSum { left, right } => {
                let mut out = left.apply_slice(&x[..left.dim]);
                out.extend(right.apply_slice(&x[left.dim..]));
                out
            }
        }
    }

    pub fn apply_adjoint(&self, x: &ComplexVector) -> Result<ComplexVector, CoreError> {
        self.check_dim(x)?;
        Ok(ComplexVector::raw(self.apply_adjoint_slice(x.entries())))
    }

    fn apply_adjoint_slice(&self, x: &[Complex64]) -> Vec<Complex64> {
        match &self.kind {
            OperatorKind::Dense(m) => m.apply_adjoint_slice(x),
            OperatorKind::Spectral(u) => u
                .angles()
                .iter()
                .zip(x)
                .map(|(&theta, &v)| Complex64::from_polar(1.0, theta).conj() * v)
                .collect(),
            OperatorKind::Shift { dim, steps } => {
                let mut out = vec![Complex64::new(0.0, 0.0); *dim];
                if *steps < *dim {
                    let keep = *dim - *steps;
                    out[..keep].copy_from_slice(&x[*steps..]);
                }
                out
            }
            OperatorKind::Koopman(k) => k.inverse.iter().map(|&j| x[j]).collect(),
            OperatorKind::Scaled { alpha, inner } => {
                let a = alpha.conj();
                inner
                    .apply_adjoint_slice(x)
                    .iter()
                    .map(|v| a * v)
                    .collect()
            }
            OperatorKind::DirectSum { left, right } => {
                let mut out = left.apply_adjoint_slice(&x[..left.dim]);
                out.extend(right.apply_adjoint_slice(&x[left.dim..]));
                out
            }
        }
    }

    /// `Tⁿx`. Diagonal-like kinds exponentiate directly; dense matrices
    /// iterate `apply` n times.
    pub fn apply_power(&self, n: u64, x: &ComplexVector) -> Result<ComplexVector, CoreError> {
        self.check_dim(x)?;
        Ok(ComplexVector::raw(self.power_slice(n, x.entries())))
    }

    fn power_slice(&self, n: u64, x: &[Complex64]) -> Vec<Complex64> {
        if n == 0 {
            return x.to_vec();
        }
        match &self.kind {
            OperatorKind::Dense(m) => {
                let mut y = x.to_vec();
                for _ in 0..n {
                    y = m.apply_slice(&y);
                }
                y
            }
            OperatorKind::Spectral(u) => {
                let t = n as f64;
                u.angles()
                    .iter()
                    .zip(x)
                    .map(|(&theta, &v)| Complex64::from_polar(1.0, t * theta) * v)
                    .collect()
            }
            OperatorKind::Shift { dim, steps } => {
                let total = steps
                    .saturating_mul(usize::try_from(n).unwrap_or(usize::MAX))
                    .min(*dim);
                shifted(x, *dim, total)
            }
            OperatorKind::Koopman(k) => {
                let map = k.power_map(n);
                map.iter().map(|&j| x[j]).collect()
            }
            OperatorKind::Scaled { alpha, inner } => {
                let s = unit_disk_power(*alpha, n);
                inner.power_slice(n, x).iter().map(|v| s * v).collect()
            }
            OperatorKind::DirectSum { left, right } => {
                let mut out = left.power_slice(n, &x[..left.dim]);
                out.extend(right.power_slice(n, &x[left.dim..]));
                out
            }
        }
    }

    /// `Tⁿ` as a handle of the same structural kind (n ≥ 1; n = 0 yields the
    /// identity as a spectral model with all angles zero).
    pub fn power_handle(&self, n: u64) -> Result<OperatorHandle, CoreError> {
        if n == 0 {
            return Self::spectral(SpectralUnitary::uniform(vec![0.0; self.dim])?);
        }
        match &self.kind {
            OperatorKind::Dense(m) => Self::dense(m.power(n)?),
            OperatorKind::Spectral(u) => Self::spectral(u.power(n)),
            OperatorKind::Shift { dim, steps } => {
                let total = steps
                    .saturating_mul(usize::try_from(n).unwrap_or(usize::MAX))
                    .min(*dim);
                Self::shift_by(*dim, total)
            }
            OperatorKind::Koopman(k) => Self::koopman(KoopmanPermutation::new(
                k.power_map(n),
                k.weights.clone(),
            )?),
            OperatorKind::Scaled { alpha, inner } => {
                Self::scaled(unit_disk_power(*alpha, n), inner.power_handle(n)?)
            }
            OperatorKind::DirectSum { left, right } => {
                Self::direct_sum(left.power_handle(n)?, right.power_handle(n)?)
            }
        }
    }

    /// Inner product of the model's natural Hilbert space: weighted by the
    /// spectral measure for spectral kinds, Euclidean otherwise.
    pub fn weighted_inner(
        &self,
        x: &ComplexVector,
        y: &ComplexVector,
    ) -> Result<Complex64, CoreError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        match &self.kind {
            OperatorKind::Spectral(u) => Ok(u
                .weights()
                .iter()
                .zip(x.entries().iter().zip(y.entries()))
                .map(|(&w, (a, b))| w * (a * b.conj()))
                .sum()),
            _ => x.inner(y),
        }
    }

    pub fn weighted_norm_sq(&self, x: &ComplexVector) -> Result<f64, CoreError> {
        self.check_dim(x)?;
        match &self.kind {
            OperatorKind::Spectral(u) => Ok(u
                .weights()
                .iter()
                .zip(x.entries())
                .map(|(&w, z)| w * z.norm_sqr())
                .sum()),
            _ => Ok(x.norm_sq()),
        }
    }

    /// Materializes the matrix (columns are images of basis vectors).
    pub fn to_dense(&self) -> Result<DenseMatrix, CoreError> {
        if self.dim > DENSE_DIM_CAP {
            return Err(CoreError::DimensionCap {
                kind: "dense",
                dim: self.dim,
                cap: DENSE_DIM_CAP,
            });
        }
        let d = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for j in 0..d {
            let col = self.apply(&ComplexVector::basis(d, j))?;
            for (i, &v) in col.entries().iter().enumerate() {
                entries[i * d + j] = v;
            }
        }
        Ok(DenseMatrix { dim: d, entries })
    }

    /// Streams `Tⁿx` over consecutive n. See [`PowerWalker`].
    pub fn power_walker(&self, x: &ComplexVector) -> Result<PowerWalker<'_>, CoreError> {
        self.check_dim(x)?;
        Ok(self.walker_from(x.entries().to_vec()))
    }

    fn walker_from(&self, x: Vec<Complex64>) -> PowerWalker<'_> {
        let body = match &self.kind {
            OperatorKind::Dense(_) => WalkerBody::Iterated(x),
            OperatorKind::Spectral(_) | OperatorKind::Shift { .. } | OperatorKind::Koopman(_) => {
                WalkerBody::Direct(x)
            }
            OperatorKind::Scaled { inner, .. } => {
                WalkerBody::Scaled(Box::new(inner.walker_from(x)))
            }
            OperatorKind::DirectSum { left, right } => {
                let right_part = x[left.dim..].to_vec();
                let mut left_part = x;
                left_part.truncate(left.dim);
                WalkerBody::Split(
                    Box::new(left.walker_from(left_part)),
                    Box::new(right.walker_from(right_part)),
                )
            }
        };
        PowerWalker {
            op: self,
            n: 0,
            body,
        }
    }

    /// True when some block carries a dense matrix, i.e. powers are not in
    /// closed form and a scan must iterate through every exponent.
    pub fn has_iterated_block(&self) -> bool {
        match &self.kind {
            OperatorKind::Dense(_) => true,
            OperatorKind::Spectral(_) | OperatorKind::Shift { .. } | OperatorKind::Koopman(_) => {
                false
            }
            OperatorKind::Scaled { inner, .. } => inner.has_iterated_block(),
            OperatorKind::DirectSum { left, right } => {
                left.has_iterated_block() || right.has_iterated_block()
            }
        }
    }
}

/// αⁿ for α in the closed unit disk, snapping numerically unimodular moduli
/// to the circle so long scans cannot drift.
pub(crate) fn unit_disk_power(alpha: Complex64, n: u64) -> Complex64 {
    let r = alpha.norm();
    let t = n as f64;
    if (r - 1.0).abs() <= UNIMODULAR_TOL {
        Complex64::from_polar(1.0, t * alpha.arg())
    } else {
        Complex64::from_polar(r.powf(t), t * alpha.arg())
    }
}

fn shifted(x: &[Complex64], dim: usize, steps: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    if steps < dim {
        out[steps..].copy_from_slice(&x[..dim - steps]);
    }
    out
}

/// Iterator over `Tⁿx` for n = 0, 1, 2, ...
///
/// `value()` at count n is bit-identical to `apply_power(n, x)`: direct kinds
/// re-evaluate the closed form, dense kinds replay the same application
/// sequence. That exact agreement is what makes search results verifiable by
/// independent re-evaluation.
pub struct PowerWalker<'a> {
    op: &'a OperatorHandle,
    n: u64,
    body: WalkerBody<'a>,
}

enum WalkerBody<'a> {
    /// Closed-form powers; keeps the original vector.
    Direct(Vec<Complex64>),
    /// Dense block; keeps the current iterate.
    Iterated(Vec<Complex64>),
    Scaled(Box<PowerWalker<'a>>),
    Split(Box<PowerWalker<'a>>, Box<PowerWalker<'a>>),
}

impl PowerWalker<'_> {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn advance(&mut self) {
        self.n += 1;
        match &mut self.body {
            WalkerBody::Direct(_) => {}
            WalkerBody::Iterated(y) => {
                let OperatorKind::Dense(m) = &self.op.kind else {
                    unreachable!("iterated walker is only built for dense kinds");
                };
                *y = m.apply_slice(y);
            }
            WalkerBody::Scaled(w) => w.advance(),
            WalkerBody::Split(l, r) => {
                l.advance();
                r.advance();
            }
        }
    }

    pub fn value(&self) -> Vec<Complex64> {
        match &self.body {
            WalkerBody::Direct(x0) => self.op.power_slice(self.n, x0),
            WalkerBody::Iterated(y) => y.clone(),
            WalkerBody::Scaled(w) => {
                let OperatorKind::Scaled { alpha, .. } = &self.op.kind else {
                    unreachable!("scaled walker is only built for scaled kinds");
                };
                let s = unit_disk_power(*alpha, self.n);
                w.value().iter().map(|v| s * v).collect()
            }
            WalkerBody::Split(l, r) => {
                let mut out = l.value();
                out.extend(r.value());
                out
            }
        }
    }
}
