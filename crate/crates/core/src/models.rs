//! Model constructions: spectral-diagonal unitaries, shifts, Koopman
//! operators, rescalings, direct sums, and the sector-rounding periodic
//! approximant.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::CoreError;
use crate::operator::{KoopmanPermutation, OperatorHandle};
use crate::util::{
    canonical_angle, kahan_sum, require_finite_angle, validate_probability_weights,
    validate_unimodular, validate_positive,
};

/// Multiplication operator `(Ux)_i = e^{iθ_i}·x_i` on the point masses of a
/// discrete measure with weights `w_i`.
///
/// Angles are stored reduced to [0, 2π); duplicates are allowed (they are
/// distinct point masses sharing an eigenvalue). Weights are strictly
/// positive and sum to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralUnitary {
    angles: Vec<f64>,
    weights: Vec<f64>,
}

impl SpectralUnitary {
    pub fn new(angles: Vec<f64>, weights: Vec<f64>) -> Result<Self, CoreError> {
        if angles.is_empty() {
            return Err(CoreError::EmptyVector);
        }
        if angles.len() != weights.len() {
            return Err(CoreError::DimensionMismatch {
                left: angles.len(),
                right: weights.len(),
            });
        }
        for (i, &a) in angles.iter().enumerate() {
            require_finite_angle(a, i)?;
        }
        validate_probability_weights(&weights)?;
        let angles = angles.into_iter().map(canonical_angle).collect();
        Ok(Self { angles, weights })
    }

    /// Equal weights 1/d on the given angles.
    pub fn uniform(angles: Vec<f64>) -> Result<Self, CoreError> {
        let d = angles.len();
        if d == 0 {
            return Err(CoreError::EmptyVector);
        }
        Self::new(angles, vec![1.0 / d as f64; d])
    }

    pub fn dim(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Rotates every eigenvalue by `phase` (used when a unimodular scalar is
    /// folded into the model).
    pub fn rotated_by(&self, phase: f64) -> Self {
        Self {
            angles: self
                .angles
                .iter()
                .map(|&a| canonical_angle(a + phase))
                .collect(),
            weights: self.weights.clone(),
        }
    }

    /// The model of Uⁿ: angles n·θ reduced mod 2π.
    pub fn power(&self, n: u64) -> Self {
        let t = n as f64;
        Self {
            angles: self
                .angles
                .iter()
                .map(|&a| canonical_angle(t * a))
                .collect(),
            weights: self.weights.clone(),
        }
    }

    /// Concatenation of two models with the weights rescaled to total mass 1.
    pub fn merge_direct_sum(a: &Self, b: &Self) -> Result<Self, CoreError> {
        let mut angles = a.angles.clone();
        angles.extend_from_slice(&b.angles);
        let mut weights = a.weights.clone();
        weights.extend_from_slice(&b.weights);
        let total = kahan_sum(weights.iter().copied());
        let weights = weights.into_iter().map(|w| w / total).collect();
        Self::new(angles, weights)
    }
}

/// Model recipes accepted by [`build_model`].
#[derive(Clone, Debug)]
pub enum ModelKind {
    /// `e^{iθ}·I` on `dim` coordinates.
    Rotation { angle: f64, dim: usize },
    /// `e^{2πi·p/q}·I` on `dim` coordinates.
    RationalRotation { p: i64, q: u64, dim: usize },
    Spectral { angles: Vec<f64>, weights: Vec<f64> },
    Shift { dim: usize },
    Koopman {
        permutation: Vec<usize>,
        weights: Vec<f64>,
    },
    Rescale {
        alpha: Complex64,
        inner: Box<ModelKind>,
    },
}

pub fn build_model(kind: &ModelKind) -> Result<OperatorHandle, CoreError> {
    match kind {
        ModelKind::Rotation { angle, dim } => {
            require_finite_angle(*angle, 0)?;
            OperatorHandle::spectral(SpectralUnitary::uniform(vec![*angle; (*dim).max(1)])?)
        }
        ModelKind::RationalRotation { p, q, dim } => {
            if *q == 0 {
                return Err(CoreError::InvalidParameter {
                    name: "q",
                    reason: "denominator must be positive".into(),
                });
            }
            let angle = TAU * (*p as f64) / (*q as f64);
            OperatorHandle::spectral(SpectralUnitary::uniform(vec![angle; (*dim).max(1)])?)
        }
        ModelKind::Spectral { angles, weights } => {
            OperatorHandle::spectral(SpectralUnitary::new(angles.clone(), weights.clone())?)
        }
        ModelKind::Shift { dim } => OperatorHandle::shift(*dim),
        ModelKind::Koopman {
            permutation,
            weights,
        } => OperatorHandle::koopman(KoopmanPermutation::new(
            permutation.clone(),
            weights.clone(),
        )?),
        ModelKind::Rescale { alpha, inner } => {
            let inner = build_model(inner)?;
            OperatorHandle::scaled(*alpha, inner)
        }
    }
}

/// Block-diagonal sum of two models. Spectral pairs merge into one spectral
/// model (weights rescaled to total 1); mixed kinds act blockwise.
pub fn direct_sum(left: OperatorHandle, right: OperatorHandle) -> Result<OperatorHandle, CoreError> {
    OperatorHandle::direct_sum(left, right)
}

/// Chord length `|1 - e^{2πi/n}|`, the rounding bound of a period-n grid.
pub fn period_chord(n: u64) -> f64 {
    (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, TAU / n as f64)).norm()
}

/// A periodic approximant `P` of a spectral unitary.
///
/// `P` has the same weights, every eigenvalue moved to the period-n grid
/// `{e^{i(α + 2πj)/n} : 0 ≤ j < n}` where `α = arg λ`, so `Pⁿ = λ·I` exactly
/// and no eigenvalue moved further than [`ApproximantResult::bound`].
#[derive(Clone, Debug)]
pub struct ApproximantResult {
    model: SpectralUnitary,
    n: u64,
    lambda: Complex64,
    bound: f64,
    sup_error: f64,
}

impl ApproximantResult {
    pub fn model(&self) -> &SpectralUnitary {
        &self.model
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// `|1 - e^{2πi/n}|`: the worst move the sector rounding can make.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// The largest move actually made: `sup_i |e^{iθ_i} - e^{iψ_i}|`.
    pub fn sup_error(&self) -> f64 {
        self.sup_error
    }

    pub fn handle(&self) -> Result<OperatorHandle, CoreError> {
        OperatorHandle::spectral(self.model.clone())
    }
}

/// Smallest period ≥ max(n_min, 2) whose grid chord is within epsilon.
fn choose_period(n_min: u64, epsilon: f64) -> u64 {
    let floor = n_min.max(2);
    if period_chord(floor) <= epsilon {
        return floor;
    }
    // 2·sin(π/n) decreases in n: jump near the crossing, then scan.
    let eps = epsilon.min(2.0);
    let est = (std::f64::consts::PI / (eps / 2.0).asin()).ceil() as u64;
    let mut n = floor.max(est.saturating_sub(2));
    while period_chord(n) > epsilon {
        n += 1;
    }
    n
}

/// Rounds every eigenvalue of `u` to the period-n grid through λ, where n is
/// the smallest admissible period ≥ n_min.
///
/// Sectors are closed on the left: an eigenvalue angle lands in grid slot
/// `j = floor((θ - α/n)·n/2π mod n)`, with angles just below the wrap point
/// assigned to the top slot. Stored grid angles re-round to themselves (a
/// snap guard absorbs float noise at sector boundaries).
pub fn lambda_rigid_approximant(
    u: &SpectralUnitary,
    lambda: Complex64,
    n_min: u64,
    epsilon: f64,
) -> Result<ApproximantResult, CoreError> {
    validate_unimodular(lambda, "lambda")?;
    validate_positive(epsilon, "epsilon")?;
    if epsilon < 1e-12 {
        return Err(CoreError::InvalidParameter {
            name: "epsilon",
            reason: "tolerances below 1e-12 are not resolvable in double precision".into(),
        });
    }
    if n_min == 0 {
        return Err(CoreError::InvalidParameter {
            name: "n_min",
            reason: "minimum period must be at least 1".into(),
        });
    }
    let n = choose_period(n_min, epsilon);
    let alpha = canonical_angle(lambda.arg());
    let width = TAU / n as f64;
    let base = alpha / n as f64;
    let mut sup_error = 0.0_f64;
    let mut rounded = Vec::with_capacity(u.dim());
    for &theta in u.angles() {
        let v = (theta - base).rem_euclid(TAU) / width;
        let mut j = if (v - v.round()).abs() <= 1e-9 {
            // grid point up to float noise: snap instead of flooring down
            v.round()
        } else {
            v.floor()
        } as u64;
        if j >= n {
            j = 0;
        }
        let psi = canonical_angle(base + j as f64 * width);
        let moved = (Complex64::from_polar(1.0, theta) - Complex64::from_polar(1.0, psi)).norm();
        sup_error = sup_error.max(moved);
        rounded.push(psi);
    }
    let bound = period_chord(n);
    if sup_error > bound + 1e-12 {
        return Err(CoreError::VerificationFailed {
            reason: format!(
                "sector rounding moved an eigenvalue by {sup_error}, above the grid bound {bound}"
            ),
        });
    }
    let model = SpectralUnitary::new(rounded, u.weights().to_vec())?;
    Ok(ApproximantResult {
        model,
        n,
        lambda,
        bound,
        sup_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{metric_strong, seminorm_residual};
    use crate::probe::ProbeSet;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn canonical_reduction_and_weight_checks() {
        let u = SpectralUnitary::new(vec![-0.5, TAU + 0.25], vec![0.5, 0.5]).unwrap();
        assert!((u.angles()[0] - (TAU - 0.5)).abs() < 1e-12);
        assert!((u.angles()[1] - 0.25).abs() < 1e-12);
        assert!(SpectralUnitary::new(vec![0.0], vec![0.9]).is_err());
        assert!(SpectralUnitary::new(vec![0.0, 1.0], vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn identity_spectrum_rounds_to_itself() {
        // spectrum {1}, target 1: every admissible grid contains the point,
        // so the approximant is the operator itself with zero error
        let u = SpectralUnitary::uniform(vec![0.0]).unwrap();
        let r = lambda_rigid_approximant(&u, Complex64::new(1.0, 0.0), 4, 1.0).unwrap();
        assert_eq!(r.n(), 6, "smallest n >= 4 with 2 sin(pi/n) <= 1");
        assert_eq!(r.model().angles(), &[0.0]);
        assert_eq!(r.sup_error(), 0.0);
    }

    #[test]
    fn wrap_around_sector_assignment() {
        // single angle 0.3 just below the first grid point of the λ=-1 grid:
        // it wraps to the top slot j = n-1
        let u = SpectralUnitary::uniform(vec![0.3]).unwrap();
        let r = lambda_rigid_approximant(&u, Complex64::new(-1.0, 0.0), 8, 0.8).unwrap();
        assert_eq!(r.n(), 8);
        let psi = r.model().angles()[0];
        assert!((psi - 5.890486225480862).abs() < 1e-12, "psi={psi}");
        assert!(r.sup_error() > 0.678 && r.sup_error() < 0.680);
        assert!(r.sup_error() <= r.bound());
        assert!((r.bound() - 0.7653668647301796).abs() < 1e-12);
        // the rounded power really is λ·I
        let angle_n = canonical_angle(8.0 * psi);
        assert!((Complex64::from_polar(1.0, angle_n) - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn tight_epsilon_forces_long_period() {
        let u = SpectralUnitary::uniform(vec![1.234]).unwrap();
        // 2·sin(π/90) ≈ 0.0698 is the first chord at or below 0.07
        let r = lambda_rigid_approximant(&u, Complex64::new(1.0, 0.0), 2, 0.07).unwrap();
        assert_eq!(r.n(), 90);
        assert!(2.0 * (PI / 89.0).sin() > 0.07);
        // a floor above the chord threshold wins outright
        let floored = lambda_rigid_approximant(&u, Complex64::new(1.0, 0.0), 100, 0.07).unwrap();
        assert_eq!(floored.n(), 100);
    }

    #[test]
    fn approximant_power_is_exactly_lambda_on_probes() {
        let u = SpectralUnitary::new(
            vec![0.3, 2.0, 4.4, 6.1],
            vec![0.4, 0.3, 0.2, 0.1],
        )
        .unwrap();
        let lambda = Complex64::from_polar(1.0, 1.0);
        let r = lambda_rigid_approximant(&u, lambda, 16, 0.5).unwrap();
        let p = r.handle().unwrap();
        let probes = ProbeSet::default_for_dim(4, 11).unwrap();
        let res = seminorm_residual(&p, r.n(), lambda, &probes).unwrap();
        assert!(res < 1e-10, "residual {res}");
        // and P stays within the grid bound of U in the strong metric
        let uh = OperatorHandle::spectral(u).unwrap();
        let d = metric_strong(&uh, &p, &probes).unwrap();
        assert!(d <= r.bound() + 1e-12, "metric {d} vs bound {}", r.bound());
    }

    #[test]
    fn build_model_kinds() {
        let rot = build_model(&ModelKind::Rotation { angle: 0.4, dim: 3 }).unwrap();
        assert_eq!(rot.kind_name(), "spectral");
        assert_eq!(rot.dim(), 3);
        let rat = build_model(&ModelKind::RationalRotation { p: 1, q: 4, dim: 1 }).unwrap();
        let angles = rat.as_spectral().unwrap().angles().to_vec();
        assert!((angles[0] - TAU / 4.0).abs() < 1e-15);
        assert!(build_model(&ModelKind::RationalRotation { p: 1, q: 0, dim: 1 }).is_err());
        let resc = build_model(&ModelKind::Rescale {
            alpha: Complex64::from_polar(1.0, 0.1),
            inner: Box::new(ModelKind::Rotation { angle: 0.2, dim: 1 }),
        })
        .unwrap();
        let folded = resc.as_spectral().unwrap().angles()[0];
        assert!((folded - 0.3).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn period_is_monotone_in_n_min(
            n1 in 1u64..2000,
            n2 in 1u64..2000,
            eps in 0.01f64..2.0,
        ) {
            let (lo, hi) = if n1 <= n2 { (n1, n2) } else { (n2, n1) };
            let u = SpectralUnitary::uniform(vec![0.7]).unwrap();
            let lambda = Complex64::new(1.0, 0.0);
            let a = lambda_rigid_approximant(&u, lambda, lo, eps).unwrap();
            let b = lambda_rigid_approximant(&u, lambda, hi, eps).unwrap();
            prop_assert!(a.n() <= b.n());
            prop_assert!(b.n() >= hi);
        }

        #[test]
        fn sector_rounding_is_idempotent(
            angles in proptest::collection::vec(0.0f64..TAU, 1..12),
            n_min in 1u64..512,
            eps in 0.05f64..2.0,
            alpha_angle in 0.0f64..TAU,
        ) {
            let u = SpectralUnitary::uniform(angles).unwrap();
            let lambda = Complex64::from_polar(1.0, alpha_angle);
            let first = lambda_rigid_approximant(&u, lambda, n_min, eps).unwrap();
            let again = lambda_rigid_approximant(first.model(), lambda, first.n(), eps).unwrap();
            prop_assert_eq!(again.n(), first.n());
            prop_assert_eq!(again.model().angles(), first.model().angles());
            prop_assert_eq!(again.sup_error(), 0.0);
        }

        #[test]
        fn every_eigenvalue_stays_within_the_grid_bound(
            angles in proptest::collection::vec(0.0f64..TAU, 1..12),
            n_min in 1u64..256,
            eps in 0.05f64..2.0,
            alpha_angle in 0.0f64..TAU,
        ) {
            let u = SpectralUnitary::uniform(angles).unwrap();
            let lambda = Complex64::from_polar(1.0, alpha_angle);
            let r = lambda_rigid_approximant(&u, lambda, n_min, eps).unwrap();
            prop_assert!(r.sup_error() <= r.bound() + 1e-12);
            prop_assert!(r.bound() <= eps);
            // the grid really closes up: n·ψ ≡ arg λ (mod 2π)
            let alpha = canonical_angle(lambda.arg());
            for &psi in r.model().angles() {
                let closed = (Complex64::from_polar(1.0, (r.n() as f64) * psi)
                    - Complex64::from_polar(1.0, alpha))
                .norm();
                prop_assert!(closed < 1e-9, "n·psi missed lambda by {closed}");
            }
        }
    }
}
