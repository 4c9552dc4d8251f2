//! Return-time certificates: searching for times along which operator powers
//! approach `λ·I`, independently re-verifying those certificates, and
//! transporting them to operator powers, recurrence witnesses, density
//! estimates, and commutant checks.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::CoreError;
use crate::metrics::{residual_accumulate, seminorm_residual};
use crate::operator::OperatorHandle;
use crate::probe::ProbeSet;
use crate::util::{canonical_angle, validate_positive, validate_unimodular};
use crate::vector::ComplexVector;

/// Angular grid size used by [`limit_set_alpha`] when callers have no reason
/// to pick another resolution.
pub const DEFAULT_LIMIT_GRID: usize = 64;

/// Number of equispaced targets [`gamma_rigidity_certify`] scans by default.
pub const DEFAULT_GAMMA_GRID: usize = 16;

/// Tolerance for agreement between a recorded residual and its independent
/// re-evaluation.
pub const RESIDUAL_MATCH_TOL: f64 = 1e-9;

/// Restriction of a power search to a sub-lane of the positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceConstraint {
    /// Every n ≥ 1.
    All,
    /// Times with n ≡ residue (mod modulus).
    Arithmetic { modulus: u64, residue: u64 },
    /// An explicit strictly increasing list of candidate times.
    Explicit(Vec<u64>),
}

impl SequenceConstraint {
    pub fn arithmetic(modulus: u64, residue: u64) -> Result<Self, CoreError> {
        if modulus == 0 {
            return Err(CoreError::InvalidParameter {
                name: "modulus",
                reason: "must be at least 1".into(),
            });
        }
        if residue >= modulus {
            return Err(CoreError::InvalidParameter {
                name: "residue",
                reason: format!("must lie below the modulus, got {residue} (mod {modulus})"),
            });
        }
        Ok(Self::Arithmetic { modulus, residue })
    }

    pub fn explicit(times: Vec<u64>) -> Result<Self, CoreError> {
        if times.is_empty() {
            return Err(CoreError::InvalidParameter {
                name: "times",
                reason: "needs at least one candidate time".into(),
            });
        }
        let mut prev = 0u64;
        for &n in &times {
            if n == 0 {
                return Err(CoreError::InvalidParameter {
                    name: "times",
                    reason: "candidate times start at 1".into(),
                });
            }
            if n <= prev {
                return Err(CoreError::InvalidParameter {
                    name: "times",
                    reason: format!("candidate times must be strictly increasing, got {n} after {prev}"),
                });
            }
            prev = n;
        }
        Ok(Self::Explicit(times))
    }

    /// Whether `n` is a legal candidate time under this constraint.
    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        match self {
            Self::All => true,
            Self::Arithmetic { modulus, residue } => n % modulus == *residue,
            Self::Explicit(times) => times.binary_search(&n).is_ok(),
        }
    }

    /// Image of the lane under n ↦ k·n, used when a certificate is raised to
    /// the k-th power.
    pub fn scaled(&self, k: u64) -> Result<Self, CoreError> {
        if k == 0 {
            return Err(CoreError::InvalidParameter {
                name: "power",
                reason: "must be at least 1".into(),
            });
        }
        let overflow = || CoreError::InvalidParameter {
            name: "power",
            reason: "scaled lane overflows the supported time range".into(),
        };
        match self {
            Self::All if k == 1 => Ok(Self::All),
            Self::All => Self::arithmetic(k, 0),
            Self::Arithmetic { modulus, residue } => {
                let m = modulus.checked_mul(k).ok_or_else(overflow)?;
                let r = residue.checked_mul(k).ok_or_else(overflow)? % m;
                Self::arithmetic(m, r)
            }
            Self::Explicit(times) => {
                let scaled = times
                    .iter()
                    .map(|&n| n.checked_mul(k).ok_or_else(overflow))
                    .collect::<Result<Vec<_>, _>>()?;
                Self::explicit(scaled)
            }
        }
    }

    pub fn description(&self) -> String {
        match self {
            Self::All => "all n >= 1".to_string(),
            Self::Arithmetic { modulus, residue } => format!("n = {residue} (mod {modulus})"),
            Self::Explicit(times) => format!("explicit list of {} times", times.len()),
        }
    }
}

fn lane_members(constraint: &SequenceConstraint, horizon: u64) -> Box<dyn Iterator<Item = u64> + '_> {
    match constraint {
        SequenceConstraint::All => Box::new(1..=horizon),
        SequenceConstraint::Arithmetic { modulus, residue } => {
            let start = if *residue == 0 { *modulus } else { *residue };
            Box::new((start..=horizon).step_by(*modulus as usize))
        }
        SequenceConstraint::Explicit(times) => {
            Box::new(times.iter().copied().take_while(move |&n| n <= horizon))
        }
    }
}

/// A verified list of times along which `Tⁿ` stays within `epsilon` of `λ·I`
/// on a probe family. The constructor re-checks the internal consistency of
/// every field, so holding a value means the recorded evidence is coherent;
/// [`verify_certificate`] re-checks it against the operator itself.
#[derive(Debug, Clone)]
pub struct RigidityCertificate {
    lambda: Complex64,
    epsilon: f64,
    horizon: u64,
    constraint: SequenceConstraint,
    times: Vec<u64>,
    residuals: Vec<f64>,
    probe_label: String,
}

impl RigidityCertificate {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda: Complex64,
        epsilon: f64,
        horizon: u64,
        constraint: SequenceConstraint,
        times: Vec<u64>,
        residuals: Vec<f64>,
        probe_label: String,
    ) -> Result<Self, CoreError> {
        validate_unimodular(lambda, "lambda")?;
        validate_positive(epsilon, "epsilon")?;
        if horizon == 0 {
            return Err(CoreError::InvalidParameter {
                name: "horizon",
                reason: "must be at least 1".into(),
            });
        }
        if times.is_empty() {
            return Err(CoreError::InvalidParameter {
                name: "times",
                reason: "a certificate needs at least one time".into(),
            });
        }
        if times.len() != residuals.len() {
            return Err(CoreError::InvalidParameter {
                name: "residuals",
                reason: format!(
                    "expected one residual per time, got {} residuals for {} times",
                    residuals.len(),
                    times.len()
                ),
            });
        }
        let mut prev = 0u64;
        for (&n, &r) in times.iter().zip(&residuals) {
            if n == 0 || n <= prev {
                return Err(CoreError::InvalidParameter {
                    name: "times",
                    reason: format!("times must be strictly increasing and start at 1, got {n} after {prev}"),
                });
            }
            if n > horizon {
                return Err(CoreError::InvalidParameter {
                    name: "times",
                    reason: format!("time {n} lies beyond the horizon {horizon}"),
                });
            }
            if !constraint.contains(n) {
                return Err(CoreError::InvalidParameter {
                    name: "times",
                    reason: format!("time {n} violates the declared lane ({})", constraint.description()),
                });
            }
            if !r.is_finite() || r < 0.0 {
                return Err(CoreError::InvalidParameter {
                    name: "residuals",
                    reason: format!("residual at n = {n} must be finite and nonnegative, got {r}"),
                });
            }
            if r >= epsilon {
                return Err(CoreError::VerificationFailed {
                    reason: format!("residual {r} at n = {n} is not below epsilon {epsilon}"),
                });
            }
            prev = n;
        }
        Ok(Self {
            lambda,
            epsilon,
            horizon,
            constraint,
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

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn constraint(&self) -> &SequenceConstraint {
        &self.constraint
    }

    pub fn times(&self) -> &[u64] {
        &self.times
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn probe_label(&self) -> &str {
        &self.probe_label
    }
}

/// What a rigidity search produced: either a certificate or an accounting of
/// why none exists in range. Not finding one is a legitimate result, not an
/// error.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(RigidityCertificate),
    NotFound {
        /// How many candidate times were evaluated.
        scanned: u64,
        /// Closest miss, as (time, residual).
        best: Option<(u64, f64)>,
        reason: String,
    },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&RigidityCertificate> {
        match self {
            Self::Found(cert) => Some(cert),
            Self::NotFound { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Self::Found(_))
    }
}

/// Scan the lane for times with `seminorm_residual < epsilon`, collecting up
/// to `max_terms` of them in increasing order.
///
/// Iterated kinds stream through a power walker so an n-step scan costs n
/// applications instead of n²; the walker's values match `apply_power`
/// exactly, so certificates found here survive [`verify_certificate`].
#[allow(clippy::too_many_arguments)]
pub fn rigidity_search(
    t: &OperatorHandle,
    probes: &ProbeSet,
    lambda: Complex64,
    epsilon: f64,
    horizon: u64,
    constraint: &SequenceConstraint,
    max_terms: usize,
) -> Result<SearchOutcome, CoreError> {
    rigidity_search_traced(t, probes, lambda, epsilon, horizon, constraint, max_terms, &mut |_, _| {})
}

/// [`rigidity_search`] with a callback observing every evaluated
/// (time, residual) pair, in scan order.
#[allow(clippy::too_many_arguments)]
pub fn rigidity_search_traced(
    t: &OperatorHandle,
    probes: &ProbeSet,
    lambda: Complex64,
    epsilon: f64,
    horizon: u64,
    constraint: &SequenceConstraint,
    max_terms: usize,
    trace: &mut dyn FnMut(u64, f64),
) -> Result<SearchOutcome, CoreError> {
    validate_unimodular(lambda, "lambda")?;
    validate_positive(epsilon, "epsilon")?;
    if horizon == 0 {
        return Err(CoreError::InvalidParameter {
            name: "horizon",
            reason: "must be at least 1".into(),
        });
    }
    if max_terms == 0 {
        return Err(CoreError::InvalidParameter {
            name: "max_terms",
            reason: "must keep at least one term".into(),
        });
    }
    if probes.dim() != t.dim() {
        return Err(CoreError::DimensionMismatch {
            left: t.dim(),
            right: probes.dim(),
        });
    }

    let mut times = Vec::new();
    let mut residuals = Vec::new();
    let mut best: Option<(u64, f64)> = None;
    let mut scanned = 0u64;
    let mut consider = |n: u64, total: f64, times: &mut Vec<u64>, residuals: &mut Vec<f64>| {
        if best.is_none_or(|(_, b)| total < b) {
            best = Some((n, total));
        }
        if total < epsilon {
            times.push(n);
            residuals.push(total);
        }
    };

    let stream_lane = !matches!(constraint, SequenceConstraint::Explicit(_));
    if t.has_iterated_block() && stream_lane {
        let mut walkers = probes
            .vectors()
            .iter()
            .map(|x| t.power_walker(x))
            .collect::<Result<Vec<_>, _>>()?;
        for n in 1..=horizon {
            for w in &mut walkers {
                w.advance();
            }
            if !constraint.contains(n) {
                continue;
            }
            scanned += 1;
            let mut total = 0.0;
            for (l, w) in walkers.iter().enumerate() {
                let value = w.value();
                residual_accumulate(&mut total, l, &value, &probes.vectors()[l], lambda);
            }
            trace(n, total);
            consider(n, total, &mut times, &mut residuals);
            if times.len() == max_terms {
                break;
            }
        }
    } else {
        for n in lane_members(constraint, horizon) {
            scanned += 1;
            let total = seminorm_residual(t, n, lambda, probes)?;
            trace(n, total);
            consider(n, total, &mut times, &mut residuals);
            if times.len() == max_terms {
                break;
            }
        }
    }

    if times.is_empty() {
        return Ok(SearchOutcome::NotFound {
            scanned,
            best,
            reason: format!(
                "no time with {} up to horizon {horizon} brought the residual below {epsilon}",
                constraint.description()
            ),
        });
    }
    let cert = RigidityCertificate::new(
        lambda,
        epsilon,
        horizon,
        constraint.clone(),
        times,
        residuals,
        probes.label().to_string(),
    )?;
    Ok(SearchOutcome::Found(cert))
}

/// Recompute every recorded residual from scratch with [`seminorm_residual`]
/// and require each to clear the bound and to agree with the recorded value
/// to within [`RESIDUAL_MATCH_TOL`]. Shares no iteration state with the
/// search.
pub fn verify_certificate(
    t: &OperatorHandle,
    probes: &ProbeSet,
    cert: &RigidityCertificate,
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
    for (&n, &recorded) in cert.times().iter().zip(cert.residuals()) {
        let fresh = seminorm_residual(t, n, cert.lambda(), probes)?;
        if fresh >= cert.epsilon() {
            return Err(CoreError::VerificationFailed {
                reason: format!(
                    "recomputed residual {fresh} at n = {n} is not below epsilon {}",
                    cert.epsilon()
                ),
            });
        }
        if (fresh - recorded).abs() > RESIDUAL_MATCH_TOL {
            return Err(CoreError::VerificationFailed {
                reason: format!(
                    "recomputed residual {fresh} at n = {n} deviates from the recorded {recorded}"
                ),
            });
        }
    }
    Ok(())
}

/// Transport a certificate for `T` to one for `T^k`: times scale by k, the
/// target becomes `λ^k`, and the tolerance relaxes to `k·ε`.
///
/// Every scaled residual is recomputed and must clear the relaxed bound. For
/// isometries the telescoping estimate `‖T^{kn}x - λ^k x‖ ≤ k·‖Tⁿx - λx‖`
/// must additionally hold term by term; without isometry there is no a
/// priori guarantee, but when the recomputation clears the bound anyway the
/// derived certificate stands.
pub fn derive_power_certificate(
    cert: &RigidityCertificate,
    k: u64,
    t: &OperatorHandle,
    probes: &ProbeSet,
) -> Result<RigidityCertificate, CoreError> {
    if k == 0 {
        return Err(CoreError::InvalidParameter {
            name: "power",
            reason: "must be at least 1".into(),
        });
    }
    if k > u64::from(u32::MAX) {
        return Err(CoreError::InvalidParameter {
            name: "power",
            reason: "exceeds the supported exponent range".into(),
        });
    }
    let overflow = || CoreError::InvalidParameter {
        name: "power",
        reason: "scaled times overflow the supported range".into(),
    };
    // powu keeps the angle accurate over repeated squaring; rescaling by the
    // modulus defends unimodularity when the base carries rounding slack.
    let raw = cert.lambda().powu(k as u32);
    let lambda_k = raw / raw.norm();
    let epsilon_k = cert.epsilon() * k as f64;
    let horizon_k = cert.horizon().checked_mul(k).ok_or_else(overflow)?;
    let constraint_k = cert.constraint().scaled(k)?;
    let isometric = t.is_isometric();

    let mut times = Vec::with_capacity(cert.times().len());
    let mut residuals = Vec::with_capacity(cert.times().len());
    for (&n, &r) in cert.times().iter().zip(cert.residuals()) {
        let nk = n.checked_mul(k).ok_or_else(overflow)?;
        let fresh = seminorm_residual(t, nk, lambda_k, probes)?;
        if fresh >= epsilon_k {
            let hint = if isometric {
                ""
            } else {
                " (the operator is not isometric, so no telescoping guarantee applies)"
            };
            return Err(CoreError::VerificationFailed {
                reason: format!(
                    "residual {fresh} at n = {nk} misses the relaxed bound {epsilon_k}{hint}"
                ),
            });
        }
        if isometric && fresh > k as f64 * r + 1e-10 {
            return Err(CoreError::VerificationFailed {
                reason: format!(
                    "telescoping bound violated at n = {nk}: {fresh} exceeds {k}x the recorded residual {r}"
                ),
            });
        }
        times.push(nk);
        residuals.push(fresh);
    }
    RigidityCertificate::new(
        lambda_k,
        epsilon_k,
        horizon_k,
        constraint_k,
        times,
        residuals,
        probes.label().to_string(),
    )
}

/// Smallest time at which every angle simultaneously returns near zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceWitness {
    pub n: u64,
    /// `max_j |e^{i·n·θ_j} - 1|` at the witness time.
    pub deviation: f64,
}

/// Smallest n ≤ horizon with `max_j |e^{i·n·θ_j} - 1| < epsilon`, or `None`
/// when no time in range qualifies.
pub fn simultaneous_recurrence(
    angles: &[f64],
    epsilon: f64,
    horizon: u64,
) -> Result<Option<RecurrenceWitness>, CoreError> {
    if angles.is_empty() {
        return Err(CoreError::InvalidParameter {
            name: "angles",
            reason: "needs at least one angle".into(),
        });
    }
    for (index, &a) in angles.iter().enumerate() {
        if !a.is_finite() {
            return Err(CoreError::NonFinite { index });
        }
    }
    validate_positive(epsilon, "epsilon")?;
    if horizon == 0 {
        return Err(CoreError::InvalidParameter {
            name: "horizon",
            reason: "must be at least 1".into(),
        });
    }
    for n in 1..=horizon {
        let mut worst = 0.0f64;
        for &theta in angles {
            let phase = canonical_angle(theta * n as f64);
            // |e^{iφ} - 1| = 2·sin(φ/2) for φ in [0, 2π)
            worst = worst.max(2.0 * (phase / 2.0).sin().abs());
        }
        if worst < epsilon {
            return Ok(Some(RecurrenceWitness { n, deviation: worst }));
        }
    }
    Ok(None)
}

/// Worst-case recurrence witness bound: splitting the circle into
/// `⌈2π/δ⌉` arcs of chord `epsilon` (δ = 2·arcsin(ε/2)) forces a
/// simultaneous return of `dims` angles after at most `cells^dims + 1`
/// steps. `None` when that count overflows u64.
pub fn pigeonhole_bound(epsilon: f64, dims: usize) -> Result<Option<u64>, CoreError> {
    validate_positive(epsilon, "epsilon")?;
    if dims == 0 {
        return Err(CoreError::InvalidParameter {
            name: "dims",
            reason: "needs at least one angle".into(),
        });
    }
    let delta = 2.0 * (epsilon.min(2.0) / 2.0).asin();
    let cells = (TAU / delta).ceil();
    if cells >= u64::MAX as f64 || dims > u32::MAX as usize {
        return Ok(None);
    }
    Ok((cells as u64)
        .checked_pow(dims as u32)
        .and_then(|c| c.checked_add(1)))
}

/// Fraction of times n ≤ horizon at which `|⟨Tⁿx, y⟩|` stays below epsilon,
/// in the inner product the model carries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEstimate {
    pub horizon: u64,
    pub hits: u64,
    pub estimate: f64,
    pub epsilon: f64,
}

/// Estimate the density of times at which `Tⁿx` is nearly orthogonal to `y`:
/// the raw pairings `⟨Tⁿx, y⟩` are compared against epsilon with no
/// normalization, in the weighted inner product for spectral kinds and the
/// Euclidean one otherwise.
pub fn awstability_density(
    t: &OperatorHandle,
    x: &ComplexVector,
    y: &ComplexVector,
    epsilon: f64,
    horizon: u64,
) -> Result<DensityEstimate, CoreError> {
    awstability_density_traced(t, x, y, epsilon, horizon, &mut |_, _| {})
}

/// [`awstability_density`] that also reports every scanned pairing magnitude
/// through `trace(n, |⟨Tⁿx, y⟩|)`, in scan order.
pub fn awstability_density_traced(
    t: &OperatorHandle,
    x: &ComplexVector,
    y: &ComplexVector,
    epsilon: f64,
    horizon: u64,
    trace: &mut dyn FnMut(u64, f64),
) -> Result<DensityEstimate, CoreError> {
    validate_positive(epsilon, "epsilon")?;
    if horizon == 0 {
        return Err(CoreError::InvalidParameter {
            name: "horizon",
            reason: "must be at least 1".into(),
        });
    }
    let mut hits = 0u64;
    if t.has_iterated_block() {
        let mut walker = t.power_walker(x)?;
        for n in 1..=horizon {
            walker.advance();
            let v = ComplexVector::raw(walker.value());
            let pairing = t.weighted_inner(&v, y)?.norm();
            trace(n, pairing);
            if pairing < epsilon {
                hits += 1;
            }
        }
    } else {
        for n in 1..=horizon {
            let v = t.apply_power(n, x)?;
            let pairing = t.weighted_inner(&v, y)?.norm();
            trace(n, pairing);
            if pairing < epsilon {
                hits += 1;
            }
        }
    }
    Ok(DensityEstimate {
        horizon,
        hits,
        estimate: hits as f64 / horizon as f64,
        epsilon,
    })
}

/// Cluster points of `{α^n : n in the tail of the sequence}`, snapped to a
/// uniform angular grid of the given size: the centers of the grid slots hit
/// by the last half of the sequence, sorted ascending.
pub fn limit_set_alpha(
    alpha: Complex64,
    times: &[u64],
    grid: usize,
) -> Result<Vec<f64>, CoreError> {
    validate_unimodular(alpha, "alpha")?;
    if times.is_empty() {
        return Err(CoreError::InvalidParameter {
            name: "times",
            reason: "needs at least one time".into(),
        });
    }
    if grid == 0 {
        return Err(CoreError::InvalidParameter {
            name: "grid",
            reason: "must be at least 1".into(),
        });
    }
    let mut prev = 0u64;
    for &n in times {
        if n == 0 || n <= prev {
            return Err(CoreError::InvalidParameter {
                name: "times",
                reason: format!("times must be strictly increasing and start at 1, got {n} after {prev}"),
            });
        }
        prev = n;
    }
    // The tail half stands in for the asymptotic part of the sequence.
    let tail = &times[times.len() / 2..];
    let width = TAU / grid as f64;
    let theta = alpha.arg();
    let mut seen = vec![false; grid];
    for &n in tail {
        let ang = canonical_angle(theta * n as f64);
        let slot = (ang / width).round() as usize % grid;
        seen[slot] = true;
    }
    Ok(seen
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(k, _)| k as f64 * width)
        .collect())
}

/// `max_l ‖T(Vx_l) - V(Tx_l)‖ / ‖x_l‖` over the probe family: how far `V` is
/// from commuting with `T`.
pub fn commutant_check(
    t: &OperatorHandle,
    v: &OperatorHandle,
    probes: &ProbeSet,
) -> Result<f64, CoreError> {
    if t.dim() != v.dim() {
        return Err(CoreError::DimensionMismatch {
            left: t.dim(),
            right: v.dim(),
        });
    }
    if probes.dim() != t.dim() {
        return Err(CoreError::DimensionMismatch {
            left: t.dim(),
            right: probes.dim(),
        });
    }
    let mut worst = 0.0f64;
    for x in probes.vectors() {
        let tv = t.apply(&v.apply(x)?)?;
        let vt = v.apply(&t.apply(x)?)?;
        worst = worst.max(tv.sub(&vt)?.norm() / x.norm());
    }
    Ok(worst)
}

/// `count` equispaced unimodular targets starting at 1.
pub fn gamma_grid(count: usize) -> Result<Vec<Complex64>, CoreError> {
    if count == 0 {
        return Err(CoreError::InvalidParameter {
            name: "count",
            reason: "must be at least 1".into(),
        });
    }
    Ok((0..count)
        .map(|k| Complex64::from_polar(1.0, canonical_angle(TAU * k as f64 / count as f64)))
        .collect())
}

/// Run the rigidity search against every target on an equispaced grid,
/// pairing each target with its outcome.
#[allow(clippy::too_many_arguments)]
pub fn gamma_rigidity_certify(
    t: &OperatorHandle,
    probes: &ProbeSet,
    epsilon: f64,
    horizon: u64,
    constraint: &SequenceConstraint,
    max_terms: usize,
    grid: usize,
) -> Result<Vec<(Complex64, SearchOutcome)>, CoreError> {
    let mut out = Vec::with_capacity(grid);
    for lambda in gamma_grid(grid)? {
        out.push((
            lambda,
            rigidity_search(t, probes, lambda, epsilon, horizon, constraint, max_terms)?,
        ));
    }
    Ok(out)
}
