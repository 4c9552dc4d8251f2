//! Continuous time: one-parameter frequency-multiplication groups, the
//! period-grid approximant, time-grid rigidity search, continuous density,
//! and embedding of spectral unitaries into groups.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::CoreError;
use crate::metrics::residual_accumulate;
use crate::models::SpectralUnitary;
use crate::probe::ProbeSet;
use crate::rigidity::{DensityEstimate, SequenceConstraint};
use crate::util::{
    canonical_angle, validate_positive, validate_probability_weights, validate_unimodular,
};
use crate::vector::ComplexVector;

/// Largest number of grid samples a single time scan may request.
const TIME_GRID_CAP: f64 = 9.0e15;

/// One-parameter unitary group acting as multiplication by `e^{i·t·q_k}`,
/// with a probability weight attached to each frequency.
///
/// `G(0) = I` and `G(t+s) = G(t)·G(s)` hold by construction; frequencies are
/// plain reals, not reduced modulo 2π, so integer times need not be periods.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGroup {
    freqs: Vec<f64>,
    weights: Vec<f64>,
}

impl SpectralGroup {
    pub fn new(freqs: Vec<f64>, weights: Vec<f64>) -> Result<Self, CoreError> {
        if freqs.is_empty() {
            return Err(CoreError::EmptyVector);
        }
        for (index, &q) in freqs.iter().enumerate() {
            if !q.is_finite() {
                return Err(CoreError::NonFinite { index });
            }
        }
        if freqs.len() != weights.len() {
            return Err(CoreError::DimensionMismatch {
                left: freqs.len(),
                right: weights.len(),
            });
        }
        validate_probability_weights(&weights)?;
        Ok(Self { freqs, weights })
    }

    /// Uniform weights over the given frequencies.
    pub fn uniform(freqs: Vec<f64>) -> Result<Self, CoreError> {
        let n = freqs.len();
        if n == 0 {
            return Err(CoreError::EmptyVector);
        }
        Self::new(freqs, vec![1.0 / n as f64; n])
    }

    pub fn dim(&self) -> usize {
        self.freqs.len()
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ_k w_k·x_k·conj(y_k)`: the inner product of the model's weighted
    /// space.
    pub fn weighted_inner(
        &self,
        x: &ComplexVector,
        y: &ComplexVector,
    ) -> Result<Complex64, CoreError> {
        if x.dim() != self.dim() || y.dim() != self.dim() {
            return Err(CoreError::DimensionMismatch {
                left: self.dim(),
                right: if x.dim() != self.dim() { x.dim() } else { y.dim() },
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(x.entries().iter().zip(y.entries()))
            .map(|(&w, (&a, &b))| w * a * b.conj())
            .sum())
    }
}

fn group_value(g: &SpectralGroup, t: f64, f: &ComplexVector) -> Vec<Complex64> {
    g.freqs
        .iter()
        .zip(f.entries())
        .map(|(&q, &v)| Complex64::from_polar(1.0, t * q) * v)
        .collect()
}

/// `G(t)f`: componentwise multiplication by `e^{i·t·q_k}`.
pub fn group_apply(
    g: &SpectralGroup,
    t: f64,
    f: &ComplexVector,
) -> Result<ComplexVector, CoreError> {
    if f.dim() != g.dim() {
        return Err(CoreError::DimensionMismatch {
            left: g.dim(),
            right: f.dim(),
        });
    }
    if !t.is_finite() {
        return Err(CoreError::InvalidParameter {
            name: "t",
            reason: "time must be finite".into(),
        });
    }
    Ok(ComplexVector::raw(group_value(g, t, f)))
}

/// `Σ_l 2^{-l}·‖G(t)x_l - λx_l‖ / ‖x_l‖`: the continuous-time analogue of
/// the power residual, sharing its accumulation kernel so discrete and
/// embedded evaluations agree bit for bit at integer times.
pub fn group_seminorm_residual(
    g: &SpectralGroup,
    t: f64,
    lambda: Complex64,
    probes: &ProbeSet,
) -> Result<f64, CoreError> {
    validate_unimodular(lambda, "lambda")?;
    if probes.dim() != g.dim() {
        return Err(CoreError::DimensionMismatch {
            left: g.dim(),
            right: probes.dim(),
        });
    }
    let mut total = 0.0;
    for (l, x) in probes.vectors().iter().enumerate() {
        let value = group_value(g, t, x);
        residual_accumulate(&mut total, l, &value, x, lambda);
    }
    Ok(total)
}

/// A group whose frequencies all lie on the grid `{(α + 2πj)/m : j ∈ ℤ}`,
/// so that `G'(m) = e^{iα}·I` holds by construction, together with how far
/// the rounding moved the original frequencies.
#[derive(Debug, Clone)]
pub struct GroupApproximantResult {
    group: SpectralGroup,
    m: u64,
    lambda: Complex64,
    sup_diff: f64,
    t0: f64,
}

impl GroupApproximantResult {
    pub fn group(&self) -> &SpectralGroup {
        &self.group
    }

    /// The integer period time: `group_apply(group, m, f) = λ·f`.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// `sup_k |q_k - p_k|`, at most π/m.
    pub fn sup_diff(&self) -> f64 {
        self.sup_diff
    }

    /// Coefficient of the uniform deviation estimate:
    /// `sup_{|t| ≤ t0} ‖(G(t) - G'(t))f‖ ≤ sqrt(2·t0·sup_diff)·‖f‖`.
    pub fn uniform_bound(&self) -> f64 {
        (2.0 * self.t0 * self.sup_diff).sqrt()
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }
}

/// Round a group's frequencies onto the period-m grid of `λ = e^{iα}` so the
/// result satisfies `G'(m) = λ·I` exactly, with `m` the smallest integer
/// ≥ `n_min` making the uniform deviation over `[-t0, t0]` at most ε:
/// `2·t0·(π/m) ≤ ε²`. Ties round to the lower grid point.
pub fn lambda_rigid_approximant_cont(
    g: &SpectralGroup,
    lambda: Complex64,
    n_min: u64,
    epsilon: f64,
    t0: f64,
) -> Result<GroupApproximantResult, CoreError> {
    validate_unimodular(lambda, "lambda")?;
    validate_positive(epsilon, "epsilon")?;
    validate_positive(t0, "t0")?;
    if n_min == 0 {
        return Err(CoreError::InvalidParameter {
            name: "n_min",
            reason: "must be at least 1".into(),
        });
    }
    let needed = 2.0 * t0 * PI / (epsilon * epsilon);
    if needed >= TIME_GRID_CAP {
        return Err(CoreError::InvalidParameter {
            name: "epsilon",
            reason: format!("tolerance {epsilon} needs a period beyond the supported range"),
        });
    }
    let mut m = n_min.max(needed.ceil() as u64).max(1);
    while 2.0 * t0 * PI / (m as f64) > epsilon * epsilon {
        m += 1;
    }

    let alpha = canonical_angle(lambda.arg());
    let mf = m as f64;
    let mut rounded = Vec::with_capacity(g.dim());
    let mut sup_diff = 0.0f64;
    for &q in g.freqs() {
        // Nearest grid index along q·m = α + 2πj, ties to the lower point.
        let v = (q * mf - alpha) / TAU;
        let j = (v - 0.5).ceil();
        let p = (alpha + TAU * j) / mf;
        sup_diff = sup_diff.max((q - p).abs());
        rounded.push(p);
    }
    if sup_diff > PI / mf + 1e-12 {
        return Err(CoreError::VerificationFailed {
            reason: format!("rounding moved a frequency by {sup_diff}, beyond the half-cell {}", PI / mf),
        });
    }
    Ok(GroupApproximantResult {
        group: SpectralGroup::new(rounded, g.weights().to_vec())?,
        m,
        lambda: Complex64::from_polar(1.0, alpha),
        sup_diff,
        t0,
    })
}

/// A verified list of grid times along which `G(t)` stays within `epsilon`
/// of `λ·I` on a probe family. Times live on the uniform grid `k·step`.
#[derive(Debug, Clone)]
pub struct GroupRigidityCertificate {
    lambda: Complex64,
    epsilon: f64,
    t_max: f64,
    step: f64,
    ks: Vec<u64>,
    times: Vec<f64>,
    residuals: Vec<f64>,
    probe_label: String,
}

impl GroupRigidityCertificate {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda: Complex64,
        epsilon: f64,
        t_max: f64,
        step: f64,
        ks: Vec<u64>,
        residuals: Vec<f64>,
        probe_label: String,
    ) -> Result<Self, CoreError> {
        validate_unimodular(lambda, "lambda")?;
        validate_positive(epsilon, "epsilon")?;
        validate_positive(step, "step")?;
        if !t_max.is_finite() || t_max < step {
            return Err(CoreError::InvalidParameter {
                name: "t_max",
                reason: "must be finite and at least one step".into(),
            });
        }
        if ks.is_empty() {
            return Err(CoreError::InvalidParameter {
                name: "times",
                reason: "a certificate needs at least one time".into(),
            });
        }
        if ks.len() != residuals.len() {
            return Err(CoreError::InvalidParameter {
                name: "residuals",
                reason: format!(
                    "expected one residual per time, got {} residuals for {} times",
                    residuals.len(),
                    ks.len()
                ),
            });
        }
        let mut prev = 0u64;
        let mut times = Vec::with_capacity(ks.len());
        for (&k, &r) in ks.iter().zip(&residuals) {
            if k == 0 || k <= prev {
                return Err(CoreError::InvalidParameter {
                    name: "times",
                    reason: format!("grid indices must be strictly increasing and start at 1, got {k} after {prev}"),
                });
            }
            let t = k as f64 * step;
            if t > t_max + 1e-9 {
                return Err(CoreError::InvalidParameter {
                    name: "times",
                    reason: format!("time {t} lies beyond t_max {t_max}"),
                });
            }
            if !r.is_finite() || r < 0.0 {
                return Err(CoreError::InvalidParameter {
                    name: "residuals",
                    reason: format!("residual at t = {t} must be finite and nonnegative, got {r}"),
                });
            }
            if r >= epsilon {
                return Err(CoreError::VerificationFailed {
                    reason: format!("residual {r} at t = {t} is not below epsilon {epsilon}"),
                });
            }
            times.push(t);
            prev = k;
        }
        Ok(Self {
            lambda,
            epsilon,
            t_max,
            step,
            ks,
            times,
            residuals,
            probe_label,
        })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Grid indices of the certified times (`t = k·step`).
    pub fn ks(&self) -> &[u64] {
        &self.ks
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn probe_label(&self) -> &str {
        &self.probe_label
    }
}

/// Outcome of a time-grid rigidity scan.
#[derive(Debug, Clone)]
pub enum GroupSearchOutcome {
    Found(GroupRigidityCertificate),
    NotFound {
        scanned: u64,
        /// Closest miss, as (time, residual).
        best: Option<(f64, f64)>,
        reason: String,
    },
}

impl GroupSearchOutcome {
    pub fn certificate(&self) -> Option<&GroupRigidityCertificate> {
        match self {
            Self::Found(cert) => Some(cert),
            Self::NotFound { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Self::Found(_))
    }
}

fn grid_samples(t_max: f64, step: f64) -> Result<u64, CoreError> {
    validate_positive(step, "step")?;
    if !t_max.is_finite() || t_max < step {
        return Err(CoreError::InvalidParameter {
            name: "t_max",
            reason: "must be finite and at least one step".into(),
        });
    }
    let ratio = t_max / step + 1e-9;
    if ratio >= TIME_GRID_CAP {
        return Err(CoreError::InvalidParameter {
            name: "step",
            reason: "time grid is too fine for the requested window".into(),
        });
    }
    Ok(ratio.floor() as u64)
}

/// Scan `t ∈ {step, 2·step, …} ∩ [0, t_max]` (optionally restricted by a
/// lane on the grid index k) for times with residual below epsilon,
/// collecting up to `max_terms` in increasing order.
#[allow(clippy::too_many_arguments)]
pub fn group_rigidity_search(
    g: &SpectralGroup,
    probes: &ProbeSet,
    lambda: Complex64,
    epsilon: f64,
    t_max: f64,
    step: f64,
    lane: Option<&SequenceConstraint>,
    max_terms: usize,
) -> Result<GroupSearchOutcome, CoreError> {
    group_rigidity_search_traced(
        g, probes, lambda, epsilon, t_max, step, lane, max_terms, &mut |_, _| {},
    )
}

/// [`group_rigidity_search`] with a callback observing every evaluated
/// (time, residual) pair, in scan order.
#[allow(clippy::too_many_arguments)]
pub fn group_rigidity_search_traced(
    g: &SpectralGroup,
    probes: &ProbeSet,
    lambda: Complex64,
    epsilon: f64,
    t_max: f64,
    step: f64,
    lane: Option<&SequenceConstraint>,
    max_terms: usize,
    trace: &mut dyn FnMut(f64, f64),
) -> Result<GroupSearchOutcome, CoreError> {
    validate_unimodular(lambda, "lambda")?;
    validate_positive(epsilon, "epsilon")?;
    if max_terms == 0 {
        return Err(CoreError::InvalidParameter {
            name: "max_terms",
            reason: "must keep at least one term".into(),
        });
    }
    let samples = grid_samples(t_max, step)?;
    let mut ks = Vec::new();
    let mut residuals = Vec::new();
    let mut best: Option<(f64, f64)> = None;
    let mut scanned = 0u64;
    for k in 1..=samples {
        if let Some(constraint) = lane {
            if !constraint.contains(k) {
                continue;
            }
        }
        let t = k as f64 * step;
        scanned += 1;
        let total = group_seminorm_residual(g, t, lambda, probes)?;
        trace(t, total);
        if best.is_none_or(|(_, b)| total < b) {
            best = Some((t, total));
        }
        if total < epsilon {
            ks.push(k);
            residuals.push(total);
            if ks.len() == max_terms {
                break;
            }
        }
    }
    if ks.is_empty() {
        return Ok(GroupSearchOutcome::NotFound {
            scanned,
            best,
            reason: format!(
                "no grid time up to {t_max} (step {step}) brought the residual below {epsilon}"
            ),
        });
    }
    let cert = GroupRigidityCertificate::new(
        lambda,
        epsilon,
        t_max,
        step,
        ks,
        residuals,
        probes.label().to_string(),
    )?;
    Ok(GroupSearchOutcome::Found(cert))
}

/// Recompute every recorded residual and require agreement with the recorded
/// value to within 1e-9, plus clearance of the bound itself.
pub fn verify_group_certificate(
    g: &SpectralGroup,
    probes: &ProbeSet,
    cert: &GroupRigidityCertificate,
) -> Result<(), CoreError> {
    if probes.label() != cert.probe_label() {
        return Err(CoreError::VerificationFailed {
            reason: format!(
                "certificate was issued for probe family '{}', got '{}'",
                cert.probe_label(),
                probes.label()
            ),
        });
    }
    for (&t, &recorded) in cert.times().iter().zip(cert.residuals()) {
        let fresh = group_seminorm_residual(g, t, cert.lambda(), probes)?;
        if fresh >= cert.epsilon() {
            return Err(CoreError::VerificationFailed {
                reason: format!(
                    "recomputed residual {fresh} at t = {t} is not below epsilon {}",
                    cert.epsilon()
                ),
            });
        }
        if (fresh - recorded).abs() > 1e-9 {
            return Err(CoreError::VerificationFailed {
                reason: format!(
                    "recomputed residual {fresh} at t = {t} deviates from the recorded {recorded}"
                ),
            });
        }
    }
    Ok(())
}

/// Riemann-sum density of times with `|⟨G(t)x, x⟩| < epsilon` in the
/// weighted inner product: `step·hits / t_max` over the grid
/// `t ∈ {step, …, t_max}`.
pub fn cont_density(
    g: &SpectralGroup,
    x: &ComplexVector,
    epsilon: f64,
    t_max: f64,
    step: f64,
) -> Result<DensityEstimate, CoreError> {
    cont_density_traced(g, x, epsilon, t_max, step, &mut |_, _| {})
}

/// [`cont_density`] that also reports every sampled pairing magnitude through
/// `trace(t, |⟨G(t)x, x⟩|)`, in grid order.
pub fn cont_density_traced(
    g: &SpectralGroup,
    x: &ComplexVector,
    epsilon: f64,
    t_max: f64,
    step: f64,
    trace: &mut dyn FnMut(f64, f64),
) -> Result<DensityEstimate, CoreError> {
    validate_positive(epsilon, "epsilon")?;
    if x.dim() != g.dim() {
        return Err(CoreError::DimensionMismatch {
            left: g.dim(),
            right: x.dim(),
        });
    }
    let samples = grid_samples(t_max, step)?;
    let mut hits = 0u64;
    for k in 1..=samples {
        let t = k as f64 * step;
        let pairing: Complex64 = g
            .weights()
            .iter()
            .zip(g.freqs().iter().zip(x.entries()))
            .map(|(&w, (&q, &v))| w * (Complex64::from_polar(1.0, t * q) * v) * v.conj())
            .sum();
        let magnitude = pairing.norm();
        trace(t, magnitude);
        if magnitude < epsilon {
            hits += 1;
        }
    }
    Ok(DensityEstimate {
        horizon: samples,
        hits,
        estimate: step * hits as f64 / t_max,
        epsilon,
    })
}

/// The group with frequencies equal to the unitary's spectral angles
/// (principal branch), so that `G(1) = U` exactly.
pub fn embed_unitary(u: &SpectralUnitary) -> SpectralGroup {
    SpectralGroup {
        freqs: u.angles().to_vec(),
        weights: u.weights().to_vec(),
    }
}

/// `Σ_{n ≤ ⌈T0⌉} 2^{-n} · Σ_l 2^{-l}·sup_t ‖G(t)x_l - H(t)x_l‖ / ‖x_l‖`,
/// with the inner sup taken over the sampled grid `t = k·step`, `|t| ≤ n`.
pub fn group_metric(
    g: &SpectralGroup,
    h: &SpectralGroup,
    probes: &ProbeSet,
    t0: f64,
    step: f64,
) -> Result<f64, CoreError> {
    validate_positive(t0, "t0")?;
    validate_positive(step, "step")?;
    if g.dim() != h.dim() {
        return Err(CoreError::DimensionMismatch {
            left: g.dim(),
            right: h.dim(),
        });
    }
    if probes.dim() != g.dim() {
        return Err(CoreError::DimensionMismatch {
            left: g.dim(),
            right: probes.dim(),
        });
    }
    let windows = t0.ceil() as u64;
    let mut total = 0.0;
    for n in 1..=windows {
        // Sample t = 0, ±step, …, clipped to the window; a step coarser than
        // the window still sees t = 0.
        let ratio = n as f64 / step + 1e-9;
        if ratio >= TIME_GRID_CAP {
            return Err(CoreError::InvalidParameter {
                name: "step",
                reason: "time grid is too fine for the requested window".into(),
            });
        }
        let samples = ratio.floor() as u64;
        let mut window_sum = 0.0;
        for (l, x) in probes.vectors().iter().enumerate() {
            let mut sup = 0.0f64;
            for k in 0..=samples {
                let t = k as f64 * step;
                for sign in [t, -t] {
                    let deviation: f64 = g
                        .freqs()
                        .iter()
                        .zip(h.freqs().iter().zip(x.entries()))
                        .map(|(&q, (&p, &v))| {
                            ((Complex64::from_polar(1.0, sign * q)
                                - Complex64::from_polar(1.0, sign * p))
                                * v)
                                .norm_sqr()
                        })
                        .sum::<f64>()
                        .sqrt();
                    sup = sup.max(deviation);
                    if t == 0.0 {
                        break;
                    }
                }
            }
            window_sum += ProbeSet::weight(l) * sup / x.norm();
        }
        total += 0.5f64.powi(n.min(1023) as i32) * window_sum;
    }
    Ok(total)
}
