//! Cross-module invariants exercised over a fixture zoo: contraction
//! inequalities, the density/Wiener bridge, power-handle consistency, and
//! certificate transport, each checked on several operator kinds at once.

use std::f64::consts::TAU;

use num_complex::Complex64;

use rigidity_core::measures::{spectral_measure_of, wiener_average};
use rigidity_core::metrics::{unitary_defect, weak_to_strong_bound};
use rigidity_core::models::{build_model, ModelKind, SpectralUnitary};
use rigidity_core::operator::{DenseMatrix, KoopmanPermutation, OperatorHandle};
use rigidity_core::probe::ProbeSet;
use rigidity_core::rigidity::{
    derive_power_certificate, gamma_grid, rigidity_search, verify_certificate,
    awstability_density, SearchOutcome, SequenceConstraint,
};
use rigidity_core::semigroup::{cont_density, embed_unitary, SpectralGroup};
use rigidity_core::vector::ComplexVector;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const GOLDEN_FRAC: f64 = 0.618_033_988_749_894_9;

fn golden_plane_rotation() -> OperatorHandle {
    let theta = TAU * GOLDEN_FRAC;
    let m = DenseMatrix::from_rows(vec![
        vec![
            Complex64::new(theta.cos(), 0.0),
            Complex64::new(-theta.sin(), 0.0),
        ],
        vec![
            Complex64::new(theta.sin(), 0.0),
            Complex64::new(theta.cos(), 0.0),
        ],
    ])
    .unwrap();
    OperatorHandle::dense(m).unwrap()
}

fn damped_plane_rotation() -> OperatorHandle {
    let theta = TAU * GOLDEN_FRAC;
    let m = DenseMatrix::from_rows(vec![
        vec![
            Complex64::new(0.95 * theta.cos(), 0.0),
            Complex64::new(-0.95 * theta.sin(), 0.0),
        ],
        vec![
            Complex64::new(0.95 * theta.sin(), 0.0),
            Complex64::new(0.95 * theta.cos(), 0.0),
        ],
    ])
    .unwrap();
    OperatorHandle::dense(m).unwrap()
}

fn truncated_shift(dim: usize) -> OperatorHandle {
    let mut rows = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for (i, row) in rows.iter_mut().enumerate().skip(1) {
        row[i - 1] = ONE;
    }
    OperatorHandle::dense(DenseMatrix::from_rows(rows).unwrap()).unwrap()
}

fn leaky_diagonal() -> OperatorHandle {
    let m = DenseMatrix::from_rows(vec![
        vec![Complex64::new(0.9, 0.0), Complex64::new(0.0, 0.0)],
        vec![Complex64::new(0.0, 0.0), ONE],
    ])
    .unwrap();
    OperatorHandle::dense(m).unwrap()
}

fn five_cycle_koopman() -> OperatorHandle {
    let perm = KoopmanPermutation::new(vec![1, 2, 3, 4, 0], vec![0.2; 5]).unwrap();
    OperatorHandle::koopman(perm).unwrap()
}

fn mixed_direct_sum() -> OperatorHandle {
    let rot = build_model(&ModelKind::Rotation {
        angle: TAU * GOLDEN_FRAC,
        dim: 2,
    })
    .unwrap();
    let shift = OperatorHandle::shift(8).unwrap();
    OperatorHandle::direct_sum(rot, shift).unwrap()
}

fn prime_angles(count: usize) -> Vec<f64> {
    let primes = [
        2.0f64, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0, 31.0, 37.0, 41.0, 43.0, 47.0,
        53.0,
    ];
    primes[..count]
        .iter()
        .map(|&p| TAU * (p.sqrt() - p.sqrt().floor()))
        .collect()
}

/// A certificate found at a tight tolerance forces the operator to be
/// numerically unitary, and fixtures that visibly lose mass never certify.
#[test]
fn rigidity_forces_unitarity_across_the_zoo() {
    let zoo: Vec<(&str, OperatorHandle, bool)> = vec![
        ("plane rotation", golden_plane_rotation(), true),
        ("damped rotation", damped_plane_rotation(), false),
        ("truncated shift", truncated_shift(12), false),
        ("leaky diagonal", leaky_diagonal(), false),
        ("five-cycle koopman", five_cycle_koopman(), true),
    ];
    for (name, t, expect_lambda_one) in &zoo {
        let probes = ProbeSet::default_for_dim(t.dim(), 42).unwrap();
        let mut found_at_one = false;
        for lambda in gamma_grid(4).unwrap() {
            let out =
                rigidity_search(t, &probes, lambda, 0.02, 2_000, &SequenceConstraint::All, 2)
                    .unwrap();
            if let SearchOutcome::Found(cert) = out {
                let defect = unitary_defect(t).unwrap();
                assert!(
                    defect <= 10.0 * cert.epsilon(),
                    "{name}: certified at {lambda} but defect is {defect}"
                );
                if lambda == ONE {
                    found_at_one = true;
                }
            }
        }
        assert_eq!(
            found_at_one, *expect_lambda_one,
            "{name}: certificate at λ = 1 present = {found_at_one}"
        );
    }
}

/// The density estimator and the Wiener average are independent code paths
/// (operator iteration vs. measure coefficients), yet Chebyshev's inequality
/// ties them together at every finite horizon.
#[test]
fn density_respects_the_wiener_floor() {
    let fixtures: Vec<SpectralUnitary> = vec![
        SpectralUnitary::uniform(prime_angles(16)).unwrap(),
        SpectralUnitary::uniform(vec![TAU * GOLDEN_FRAC]).unwrap(),
        SpectralUnitary::uniform(vec![TAU * 3.0 / 8.0; 4]).unwrap(),
        SpectralUnitary::uniform(prime_angles(5)).unwrap(),
    ];
    for u in fixtures {
        let t = OperatorHandle::spectral(u.clone()).unwrap();
        let x = ComplexVector::constant_one(u.dim());
        let mu = spectral_measure_of(&t, &x).unwrap();
        for epsilon in [0.3f64, 0.5] {
            let d = awstability_density(&t, &x, &x, epsilon, 20_000).unwrap();
            let w = wiener_average(&mu, 20_000).unwrap();
            let floor = 1.0 - w / (epsilon * epsilon);
            assert!(
                d.estimate >= floor - 1e-12,
                "dim {}: estimate {} under floor {floor} at ε = {epsilon}",
                u.dim(),
                d.estimate
            );
        }
    }
}

/// Halving the sampling step must not move a continuous density estimate by
/// more than the grid resolution effect.
#[test]
fn continuous_density_is_stable_under_refinement() {
    let groups: Vec<SpectralGroup> = vec![
        SpectralGroup::uniform(prime_angles(8)).unwrap(),
        SpectralGroup::uniform(vec![TAU * GOLDEN_FRAC]).unwrap(),
        embed_unitary(&SpectralUnitary::uniform(prime_angles(16)).unwrap()),
    ];
    for g in groups {
        let x = ComplexVector::constant_one(g.dim());
        for epsilon in [0.5f64, 0.9] {
            let coarse = cont_density(&g, &x, epsilon, 100.0, 0.2).unwrap();
            let fine = cont_density(&g, &x, epsilon, 100.0, 0.1).unwrap();
            assert!(
                (coarse.estimate - fine.estimate).abs() <= 0.02,
                "dim {}: estimates {} vs {} at ε = {epsilon}",
                g.dim(),
                coarse.estimate,
                fine.estimate
            );
        }
    }
}

/// Power transport composes: deriving k = 2 then k = 3 lands on the same
/// times as deriving k = 6 directly, and every stage re-verifies.
#[test]
fn power_derivation_composes() {
    let t = build_model(&ModelKind::Rotation {
        angle: TAU * GOLDEN_FRAC,
        dim: 1,
    })
    .unwrap();
    let probes = ProbeSet::default_for_dim(1, 5).unwrap();
    let base = rigidity_search(&t, &probes, ONE, 0.1, 10_000, &SequenceConstraint::All, 8)
        .unwrap()
        .certificate()
        .cloned()
        .unwrap();

    let two = derive_power_certificate(&base, 2, &t, &probes).unwrap();
    verify_certificate(&t, &probes, &two).unwrap();
    let chained = derive_power_certificate(&two, 3, &t, &probes).unwrap();
    verify_certificate(&t, &probes, &chained).unwrap();
    let direct = derive_power_certificate(&base, 6, &t, &probes).unwrap();
    verify_certificate(&t, &probes, &direct).unwrap();

    assert_eq!(chained.times(), direct.times());
    assert!((chained.lambda() - direct.lambda()).norm() < 1e-14);
    assert!((chained.epsilon() - direct.epsilon()).abs() < 1e-15);
}

/// For any contraction, the squared displacement from λx is controlled by
/// the weak pairing gap; the bound must hold for every fixture, power, probe
/// and target, not only in the limit.
#[test]
fn weak_pairings_control_strong_displacement() {
    let zoo: Vec<OperatorHandle> = vec![
        golden_plane_rotation(),
        damped_plane_rotation(),
        truncated_shift(12),
        leaky_diagonal(),
        five_cycle_koopman(),
        mixed_direct_sum(),
        OperatorHandle::shift(64).unwrap(),
    ];
    let lambdas = [ONE, Complex64::new(0.0, 1.0)];
    for t in &zoo {
        let probes = ProbeSet::default_for_dim(t.dim(), 77).unwrap();
        for &lambda in &lambdas {
            for n in [1u64, 2, 7, 50] {
                for x in probes.vectors() {
                    let (lhs, rhs) = weak_to_strong_bound(t, n, lambda, x).unwrap();
                    assert!(
                        lhs <= rhs + 1e-10,
                        "dim {}: lhs {lhs} > rhs {rhs} at n = {n}, λ = {lambda}",
                        t.dim()
                    );
                }
            }
        }
    }
}

/// `power_handle(n)` materializes the same operator that `apply_power(n, ·)`
/// evaluates, across every kind including composites.
#[test]
fn materialized_powers_match_iterated_application() {
    let zoo: Vec<OperatorHandle> = vec![
        five_cycle_koopman(),
        OperatorHandle::scaled(
            Complex64::new(0.0, 1.0),
            build_model(&ModelKind::Rotation {
                angle: TAU * GOLDEN_FRAC,
                dim: 3,
            })
            .unwrap(),
        )
        .unwrap(),
        mixed_direct_sum(),
        OperatorHandle::shift(64).unwrap(),
        golden_plane_rotation(),
    ];
    for t in &zoo {
        let probes = ProbeSet::default_for_dim(t.dim(), 11).unwrap();
        let x = probes.vectors().last().unwrap();
        for n in [0u64, 1, 2, 5, 17, 64] {
            let direct = t.apply_power(n, x).unwrap();
            let materialized = t.power_handle(n).unwrap().apply(x).unwrap();
            let diff = direct.sub(&materialized).unwrap().norm();
            assert!(
                diff <= 1e-12 * x.norm(),
                "dim {}: power {n} differs by {diff}",
                t.dim()
            );
        }
    }
}
