//! Discrete measures on the unit circle and the real line, their Fourier
//! analysis, and the bridge from spectral models to spectral measures.
//!
//! The Fourier convention is `μ̂_n = ∫ zⁿ dμ = Σ w_i·e^{i·n·θ_i}`. The Wiener
//! average `(1/N)·Σ_{n≤N} |μ̂_n|²` converges to `Σ w_i²`, the total mass of
//! the atoms squared, which serves as the continuity score of the measure
//! (0 would be a continuous measure, 1 a Dirac).

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::CoreError;
use crate::operator::OperatorHandle;
use crate::rigidity::SequenceConstraint;
use crate::util::{
    canonical_angle, kahan_sum, require_finite_angle, validate_positive,
    validate_probability_weights, validate_unimodular,
};
use crate::vector::ComplexVector;

/// Finitely supported probability measure on the circle.
///
/// Atoms are stored sorted by angle in [0, 2π); construction reduces angles
/// canonically and merges exact duplicates, so atoms are pairwise distinct.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleMeasure {
    angles: Vec<f64>,
    weights: Vec<f64>,
}

impl CircleMeasure {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self, CoreError> {
        if atoms.is_empty() {
            return Err(CoreError::InvalidParameter {
                name: "atoms",
                reason: "measure needs at least one atom".into(),
            });
        }
        let mut reduced: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (i, &(angle, weight)) in atoms.iter().enumerate() {
            require_finite_angle(angle, i)?;
            if !weight.is_finite() || weight <= 0.0 {
                return Err(CoreError::InvalidWeights {
                    reason: format!("atom {i} has weight {weight}, expected > 0"),
                });
            }
            reduced.push((canonical_angle(angle), weight));
        }
        reduced.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut angles: Vec<f64> = Vec::with_capacity(reduced.len());
        let mut weights: Vec<f64> = Vec::with_capacity(reduced.len());
        for (angle, weight) in reduced {
            // merge exactly equal angles; distinct floats stay distinct atoms
            if angles.last() == Some(&angle) {
                *weights.last_mut().expect("parallel to angles") += weight;
            } else {
                angles.push(angle);
                weights.push(weight);
            }
        }
        validate_probability_weights(&weights)?;
        Ok(Self { angles, weights })
    }

    /// Point mass at one angle.
    pub fn dirac(angle: f64) -> Result<Self, CoreError> {
        Self::new(vec![(angle, 1.0)])
    }

    /// Uniform measure on the q-th roots of unity.
    pub fn uniform_roots(q: u64) -> Result<Self, CoreError> {
        if q == 0 {
            return Err(CoreError::InvalidParameter {
                name: "q",
                reason: "root count must be positive".into(),
            });
        }
        let w = 1.0 / q as f64;
        Self::new(
            (0..q)
                .map(|k| (TAU * k as f64 / q as f64, w))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.angles
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }
}

/// Finitely supported probability measure on the real line (frequency side
/// of one-parameter groups).
#[derive(Clone, Debug, PartialEq)]
pub struct LineMeasure {
    positions: Vec<f64>,
    weights: Vec<f64>,
}

impl LineMeasure {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self, CoreError> {
        if atoms.is_empty() {
            return Err(CoreError::InvalidParameter {
                name: "atoms",
                reason: "measure needs at least one atom".into(),
            });
        }
        let mut sorted = atoms;
        for (i, &(q, w)) in sorted.iter().enumerate() {
            if !q.is_finite() {
                return Err(CoreError::NonFinite { index: i });
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(CoreError::InvalidWeights {
                    reason: format!("atom {i} has weight {w}, expected > 0"),
                });
            }
        }
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut positions = Vec::with_capacity(sorted.len());
        let mut weights: Vec<f64> = Vec::with_capacity(sorted.len());
        for (q, w) in sorted {
            if positions.last() == Some(&q) {
                *weights.last_mut().expect("parallel to positions") += w;
            } else {
                positions.push(q);
                weights.push(w);
            }
        }
        validate_probability_weights(&weights)?;
        Ok(Self { positions, weights })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `μ̂_n = Σ w_i·e^{i·n·θ_i}`.
pub fn fourier_coefficient(mu: &CircleMeasure, n: i64) -> Complex64 {
    let t = n as f64;
    mu.atoms()
        .map(|(theta, w)| Complex64::from_polar(w, t * theta))
        .sum()
}

/// `ν̂(t) = Σ w_i·e^{i·t·q_i}`.
pub fn fourier_transform_line(nu: &LineMeasure, t: f64) -> Complex64 {
    nu.positions()
        .iter()
        .zip(nu.weights())
        .map(|(&q, &w)| Complex64::from_polar(w, t * q))
        .sum()
}

/// `(1/N)·Σ_{n=1}^{N} |μ̂_n|²`.
pub fn wiener_average(mu: &CircleMeasure, n_max: u64) -> Result<f64, CoreError> {
    if n_max == 0 {
        return Err(CoreError::InvalidParameter {
            name: "n_max",
            reason: "average needs at least one term".into(),
        });
    }
    let mut total = 0.0;
    for n in 1..=n_max {
        total += fourier_coefficient(mu, n as i64).norm_sqr();
    }
    Ok(total / n_max as f64)
}

/// `Σ w_i²`: the limit of the Wiener averages. 1 for a Dirac, 1/d for d
/// equal atoms; a continuous measure would score 0.
pub fn continuity_score(mu: &CircleMeasure) -> f64 {
    kahan_sum(mu.weights().iter().map(|w| w * w))
}

/// `C(μ) = Σ_{i≠j} w_i·w_j / |sin((θ_i - θ_j)/2)|`, the constant in the
/// quantitative Wiener bound `|wiener(N) - Σw²| ≤ C(μ)/N`.
pub fn wiener_error_constant(mu: &CircleMeasure) -> f64 {
    let mut total = 0.0;
    for (i, (ti, wi)) in mu.atoms().enumerate() {
        for (j, (tj, wj)) in mu.atoms().enumerate() {
            if i != j {
                total += wi * wj / ((ti - tj) / 2.0).sin().abs();
            }
        }
    }
    total
}

/// All lane members n ≤ horizon with `|μ̂_n - λ| < ε`, in increasing order.
/// An empty result is a legitimate outcome, not an error.
pub fn measure_rigidity_search(
    mu: &CircleMeasure,
    lambda: Complex64,
    epsilon: f64,
    horizon: u64,
    constraint: &SequenceConstraint,
) -> Result<Vec<u64>, CoreError> {
    validate_unimodular(lambda, "lambda")?;
    validate_positive(epsilon, "epsilon")?;
    let mut hits = Vec::new();
    for n in 1..=horizon {
        if !constraint.contains(n) {
            continue;
        }
        if (fourier_coefficient(mu, n as i64) - lambda).norm() < epsilon {
            hits.push(n);
        }
    }
    Ok(hits)
}

/// The spectral measure of `x` under a spectral-kind operator: atom `θ_i`
/// carries mass `w_i·|x_i|²/‖x‖²_w`. Zero-mass atoms are dropped; the
/// measure of the model's eigenvalue list is recovered with `x = 1`.
///
/// Satisfies `⟨Uⁿx, x⟩_w / ‖x‖²_w = μ̂_n`.
pub fn spectral_measure_of(
    op: &OperatorHandle,
    x: &ComplexVector,
) -> Result<CircleMeasure, CoreError> {
    let Some(model) = op.as_spectral() else {
        return Err(CoreError::UnsupportedKind {
            operation: "spectral_measure_of",
            kind: op.kind_name(),
        });
    };
    if x.dim() != op.dim() {
        return Err(CoreError::DimensionMismatch {
            left: op.dim(),
            right: x.dim(),
        });
    }
    let norm_sq = op.weighted_norm_sq(x)?;
    if norm_sq <= 0.0 {
        return Err(CoreError::InvalidParameter {
            name: "x",
            reason: "zero norm in the model measure".into(),
        });
    }
    let atoms: Vec<(f64, f64)> = model
        .angles()
        .iter()
        .zip(model.weights().iter().zip(x.entries()))
        .filter_map(|(&theta, (&w, z))| {
            let mass = w * z.norm_sqr() / norm_sq;
            (mass > 0.0).then_some((theta, mass))
        })
        .collect();
    CircleMeasure::new(atoms)
}

/// Canonical rigid fixture: levels j = 1..J with moduli q_1 | q_2 | ... | q_J,
/// level j spreading mass 2^{-j}/(1 - 2^{-J}) uniformly over the q_j-th roots
/// of unity. Its Fourier coefficients return to 1 along multiples of any q_j
/// tail sum, which makes the measure rigid along q_J·ℕ.
pub fn rigid_measure_fixture(moduli: &[u64]) -> Result<CircleMeasure, CoreError> {
    if moduli.is_empty() {
        return Err(CoreError::InvalidParameter {
            name: "moduli",
            reason: "need at least one level".into(),
        });
    }
    for (j, window) in moduli.windows(2).enumerate() {
        if window[1] <= window[0] || window[1] % window[0] != 0 {
            return Err(CoreError::InvalidParameter {
                name: "moduli",
                reason: format!(
                    "level {} modulus {} must be a proper multiple of {}",
                    j + 2,
                    window[1],
                    window[0]
                ),
            });
        }
    }
    if moduli[0] == 0 {
        return Err(CoreError::InvalidParameter {
            name: "moduli",
            reason: "moduli must be positive".into(),
        });
    }
    let levels = moduli.len() as i32;
    let norm = 1.0 - 0.5_f64.powi(levels);
    let mut atoms = Vec::new();
    for (j, &q) in moduli.iter().enumerate() {
        let level_mass = 0.5_f64.powi(j as i32 + 1) / norm;
        let per_atom = level_mass / q as f64;
        for k in 0..q {
            atoms.push((TAU * k as f64 / q as f64, per_atom));
        }
    }
    CircleMeasure::new(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::SpectralUnitary;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn frac(x: f64) -> f64 {
        x - x.floor()
    }

    fn two_atom(angle: f64) -> CircleMeasure {
        CircleMeasure::new(vec![(0.0, 0.5), (angle, 0.5)]).unwrap()
    }

    #[test]
    fn construction_sorts_reduces_and_merges() {
        let mu = CircleMeasure::new(vec![(TAU + 1.0, 0.25), (-1.0, 0.25), (1.0, 0.5)]).unwrap();
        // 2π+1 and 1 merge; -1 reduces to 2π-1
        assert_eq!(mu.len(), 2);
        assert!((mu.angles()[0] - 1.0).abs() < 1e-15);
        assert!((mu.weights()[0] - 0.75).abs() < 1e-15);
        assert!((mu.angles()[1] - (TAU - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn invalid_measures_are_rejected() {
        assert!(CircleMeasure::new(vec![]).is_err());
        assert!(CircleMeasure::new(vec![(0.0, 0.5)]).is_err());
        assert!(CircleMeasure::new(vec![(0.0, 1.5), (1.0, -0.5)]).is_err());
        assert!(CircleMeasure::new(vec![(f64::INFINITY, 1.0)]).is_err());
    }

    #[test]
    fn dirac_has_unimodular_coefficients_and_score_one() {
        let mu = CircleMeasure::dirac(1.234).unwrap();
        for n in [0i64, 1, 5, 100, 1000] {
            assert!((fourier_coefficient(&mu, n).norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(continuity_score(&mu), 1.0);
        for n_max in [1u64, 10, 1000] {
            let w = wiener_average(&mu, n_max).unwrap();
            assert!((w - 1.0).abs() < 1e-12, "N={n_max}: {w}");
        }
    }

    #[test]
    fn uniform_roots_average_is_exactly_the_score_at_full_periods() {
        let mu = CircleMeasure::uniform_roots(8).unwrap();
        assert_eq!(mu.len(), 8);
        let w = wiener_average(&mu, 10_000).unwrap();
        // |μ̂_n| is 1 on multiples of 8 and 0 otherwise
        assert!((w - 0.125).abs() < 1e-9, "wiener {w}");
        assert!((continuity_score(&mu) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn golden_two_atom_average_settles_near_one_half() {
        let golden = frac((5.0_f64.sqrt() - 1.0) / 2.0);
        let mu = two_atom(TAU * golden);
        let w = wiener_average(&mu, 100_000).unwrap();
        assert!((w - 0.5).abs() <= 0.01, "wiener {w}");
    }

    #[test]
    fn wiener_error_is_monotone_and_quantitative_on_the_fixed_suite() {
        let suite: Vec<CircleMeasure> = vec![
            two_atom(TAU * frac(2.0_f64.sqrt())),
            two_atom(TAU * frac(3.0_f64.sqrt())),
            two_atom(TAU * frac(std::f64::consts::E)),
            two_atom(TAU * frac(std::f64::consts::PI)),
            CircleMeasure::uniform_roots(8).unwrap(),
            CircleMeasure::uniform_roots(2).unwrap(),
        ];
        for mu in &suite {
            let score = continuity_score(mu);
            let c = wiener_error_constant(mu);
            let e3 = (wiener_average(mu, 1_000).unwrap() - score).abs();
            let e4 = (wiener_average(mu, 10_000).unwrap() - score).abs();
            assert!(e4 <= e3 + 1e-15, "not monotone: {e3} -> {e4}");
            assert!(e3 <= c / 1_000.0 + 1e-12, "e3 {e3} above C/N {}", c / 1e3);
            assert!(e4 <= c / 10_000.0 + 1e-12, "e4 {e4} above C/N {}", c / 1e4);
        }
    }

    #[test]
    fn rigid_fixture_levels_nest_and_return_to_one() {
        let mu = rigid_measure_fixture(&[2, 4, 8]).unwrap();
        // level atoms at shared angles merged: 8 distinct roots of unity
        assert_eq!(mu.len(), 8);
        let total: f64 = mu.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        for n in [8i64, 16, 80] {
            let back = (fourier_coefficient(&mu, n) - c(1.0, 0.0)).norm();
            assert!(back < 1e-10, "n={n}: {back}");
        }
        // and strictly away from 1 off the top modulus
        let off = (fourier_coefficient(&mu, 4) - c(1.0, 0.0)).norm();
        assert!(off > 0.1);
        assert!(rigid_measure_fixture(&[4, 6]).is_err());
        assert!(rigid_measure_fixture(&[]).is_err());
    }

    #[test]
    fn measure_search_finds_the_rigidity_sequence() {
        let mu = rigid_measure_fixture(&[2, 4, 8]).unwrap();
        let hits = measure_rigidity_search(
            &mu,
            c(1.0, 0.0),
            1e-6,
            100,
            &SequenceConstraint::All,
        )
        .unwrap();
        let expected: Vec<u64> = (1..=12).map(|k| 8 * k).collect();
        assert_eq!(hits, expected);
        // lane restriction keeps only the admissible part
        let lane = SequenceConstraint::arithmetic(16, 0).unwrap();
        let lane_hits =
            measure_rigidity_search(&mu, c(1.0, 0.0), 1e-6, 100, &lane).unwrap();
        assert_eq!(lane_hits, vec![16, 32, 48, 64, 80, 96]);
    }

    #[test]
    fn spectral_measure_bridges_to_weighted_inner_products() {
        let model = SpectralUnitary::new(
            vec![0.5, 2.5, 4.5, 5.5],
            vec![0.1, 0.2, 0.3, 0.4],
        )
        .unwrap();
        let u = OperatorHandle::spectral(model).unwrap();
        let x = ComplexVector::new(vec![
            c(1.0, 0.5),
            c(0.0, 0.0),
            c(-2.0, 1.0),
            c(0.25, 0.0),
        ])
        .unwrap();
        let mu = spectral_measure_of(&u, &x).unwrap();
        // the zero entry dropped its atom
        assert_eq!(mu.len(), 3);
        let norm_sq = u.weighted_norm_sq(&x).unwrap();
        for n in [0u64, 1, 2, 17, 333, 1000] {
            let lhs = u
                .weighted_inner(&u.apply_power(n, &x).unwrap(), &x)
                .unwrap()
                / norm_sq;
            let rhs = fourier_coefficient(&mu, n as i64);
            assert!((lhs - rhs).norm() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn spectral_measure_rejects_bad_inputs() {
        let shift = OperatorHandle::shift(4).unwrap();
        let x = ComplexVector::basis(4, 0);
        assert!(matches!(
            spectral_measure_of(&shift, &x),
            Err(CoreError::UnsupportedKind { .. })
        ));
        let u = OperatorHandle::spectral(SpectralUnitary::uniform(vec![0.0, 1.0]).unwrap())
            .unwrap();
        let zero = ComplexVector::new(vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(spectral_measure_of(&u, &zero).is_err());
    }

    prop_compose! {
        fn arb_measure()(
            raw in proptest::collection::vec((0.0f64..TAU, 0.05f64..1.0), 1..8)
        ) -> CircleMeasure {
            let total: f64 = raw.iter().map(|&(_, w)| w).sum();
            CircleMeasure::new(
                raw.into_iter().map(|(a, w)| (a, w / total)).collect()
            ).unwrap()
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn coefficients_are_bounded_normalized_and_symmetric(
            mu in arb_measure(),
            n in 0i64..2000,
        ) {
            let hat = fourier_coefficient(&mu, n);
            prop_assert!(hat.norm() <= 1.0 + 1e-12);
            let mirror = fourier_coefficient(&mu, -n);
            prop_assert!((mirror - hat.conj()).norm() < 1e-12);
            let at_zero = fourier_coefficient(&mu, 0);
            prop_assert!((at_zero - c(1.0, 0.0)).norm() < 1e-9);
        }

        #[test]
        fn search_hits_satisfy_the_reported_bound(
            mu in arb_measure(),
            eps in 0.05f64..1.5,
            modulus in 1u64..10,
        ) {
            let lane = SequenceConstraint::arithmetic(modulus, 0).unwrap();
            let hits = measure_rigidity_search(&mu, c(1.0, 0.0), eps, 500, &lane).unwrap();
            for &n in &hits {
                prop_assert_eq!(n % modulus, 0);
                prop_assert!((fourier_coefficient(&mu, n as i64) - c(1.0, 0.0)).norm() < eps);
            }
            // soundness of omission on the full lane: n=members not in hits fail the bound
            let mut idx = 0;
            for n in 1..=500u64 {
                if n % modulus != 0 { continue; }
                let qualifies = (fourier_coefficient(&mu, n as i64) - c(1.0, 0.0)).norm() < eps;
                let listed = idx < hits.len() && hits[idx] == n;
                if listed { idx += 1; }
                prop_assert_eq!(qualifies, listed, "n={}", n);
            }
        }
    }
}
