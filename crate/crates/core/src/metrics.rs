//! Probe-weighted operator metrics and rigidity seminorms.
//!
//! All quantities are evaluated on a [`ProbeSet`] {x_1, ..., x_L}; probe l
//! carries weight 2^{-l}. On a fixed probe set these are genuine metrics
//! (pseudometrics of the underlying strong/weak topologies).

use num_complex::Complex64;

use crate::error::CoreError;
use crate::operator::OperatorHandle;
use crate::probe::ProbeSet;
use crate::util::validate_unimodular;
use crate::vector::ComplexVector;

fn check_dims(t: &OperatorHandle, probes: &ProbeSet) -> Result<(), CoreError> {
    if t.dim() == probes.dim() {
        Ok(())
    } else {
        Err(CoreError::DimensionMismatch {
            left: t.dim(),
            right: probes.dim(),
        })
    }
}

fn check_pair(t: &OperatorHandle, s: &OperatorHandle) -> Result<(), CoreError> {
    if t.dim() == s.dim() {
        Ok(())
    } else {
        Err(CoreError::DimensionMismatch {
            left: t.dim(),
            right: s.dim(),
        })
    }
}

/// `Σ_l 2^{-l}·‖Tx_l - Sx_l‖ / ‖x_l‖`.
pub fn metric_strong(
    t: &OperatorHandle,
    s: &OperatorHandle,
    probes: &ProbeSet,
) -> Result<f64, CoreError> {
    check_pair(t, s)?;
    check_dims(t, probes)?;
    let mut total = 0.0;
    for (l, x) in probes.vectors().iter().enumerate() {
        let diff = t.apply(x)?.sub(&s.apply(x)?)?;
        total += ProbeSet::weight(l) * diff.norm() / x.norm();
    }
    Ok(total)
}

/// `Σ_l 2^{-l}·(‖Tx_l - Sx_l‖ + ‖T*x_l - S*x_l‖) / ‖x_l‖`.
pub fn metric_strong_star(
    t: &OperatorHandle,
    s: &OperatorHandle,
    probes: &ProbeSet,
) -> Result<f64, CoreError> {
    check_pair(t, s)?;
    check_dims(t, probes)?;
    let mut total = 0.0;
    for (l, x) in probes.vectors().iter().enumerate() {
        let diff = t.apply(x)?.sub(&s.apply(x)?)?;
        let diff_star = t.apply_adjoint(x)?.sub(&s.apply_adjoint(x)?)?;
        total += ProbeSet::weight(l) * (diff.norm() + diff_star.norm()) / x.norm();
    }
    Ok(total)
}

/// `Σ_{j,k} |⟨(T - S)x_j, x_k⟩| / (2^j·‖x_j‖·‖x_k‖)`.
pub fn metric_weak(
    t: &OperatorHandle,
    s: &OperatorHandle,
    probes: &ProbeSet,
) -> Result<f64, CoreError> {
    check_pair(t, s)?;
    check_dims(t, probes)?;
    let mut total = 0.0;
    for (j, xj) in probes.vectors().iter().enumerate() {
        let diff = t.apply(xj)?.sub(&s.apply(xj)?)?;
        let scale = ProbeSet::weight(j) / xj.norm();
        for xk in probes.vectors() {
            total += scale * diff.inner(xk)?.norm() / xk.norm();
        }
    }
    Ok(total)
}

/// One probe's contribution to the rigidity seminorm, shared by the direct
/// evaluation and the streaming search so both produce bit-identical sums.
pub(crate) fn residual_accumulate(
    total: &mut f64,
    index: usize,
    value: &[Complex64],
    probe: &ComplexVector,
    lambda: Complex64,
) {
    let moved: f64 = value
        .iter()
        .zip(probe.entries())
        .map(|(&v, &x)| (v - lambda * x).norm_sqr())
        .sum::<f64>()
        .sqrt();
    *total += ProbeSet::weight(index) * moved / probe.norm();
}

/// `Σ_l 2^{-l}·‖Tⁿx_l - λx_l‖ / ‖x_l‖`: how far Tⁿ is from λ·I on the probes.
pub fn seminorm_residual(
    t: &OperatorHandle,
    n: u64,
    lambda: Complex64,
    probes: &ProbeSet,
) -> Result<f64, CoreError> {
    validate_unimodular(lambda, "lambda")?;
    check_dims(t, probes)?;
    let mut total = 0.0;
    for (l, x) in probes.vectors().iter().enumerate() {
        let y = t.apply_power(n, x)?;
        residual_accumulate(&mut total, l, y.entries(), x, lambda);
    }
    Ok(total)
}

/// `Σ_l 2^{-l}·|⟨(Tⁿ - λI)x_l, x_l⟩| / ‖x_l‖²`: the weak-topology residual.
pub fn weak_residual(
    t: &OperatorHandle,
    n: u64,
    lambda: Complex64,
    probes: &ProbeSet,
) -> Result<f64, CoreError> {
    validate_unimodular(lambda, "lambda")?;
    check_dims(t, probes)?;
    let mut total = 0.0;
    for (l, x) in probes.vectors().iter().enumerate() {
        let y = t.apply_power(n, x)?;
        let inner = y.inner(x)? - lambda * x.norm_sq();
        total += ProbeSet::weight(l) * inner.norm() / x.norm_sq();
    }
    Ok(total)
}

/// For a contraction, `‖Tⁿx - λx‖² ≤ 2·Re(λ̄·⟨(λI - Tⁿ)x, x⟩)`: weak
/// convergence to λ·I upgrades to strong convergence. Returns (lhs, rhs).
pub fn weak_to_strong_bound(
    t: &OperatorHandle,
    n: u64,
    lambda: Complex64,
    x: &ComplexVector,
) -> Result<(f64, f64), CoreError> {
    validate_unimodular(lambda, "lambda")?;
    if !t.is_contractive() {
        return Err(CoreError::NotContractive {
            bound: t.norm_bound(),
        });
    }
    let y = t.apply_power(n, x)?;
    let lhs = y.sub(&x.scale(lambda))?.norm_sq();
    let gap = lambda * x.norm_sq() - y.inner(x)?;
    let rhs = 2.0 * (lambda.conj() * gap).re;
    Ok((lhs, rhs))
}

/// `max(‖T*Te - e‖, ‖TT*e - e‖)` over sampled canonical basis vectors: 0 for
/// unitaries, 0.19 for 0.9·I, 1 for the truncated shift.
///
/// All basis vectors are sampled up to dimension 64; above that the first and
/// last 32 are, which covers diagonal-like and shift-like defects.
pub fn unitary_defect(t: &OperatorHandle) -> Result<f64, CoreError> {
    let dim = t.dim();
    let mut indices: Vec<usize> = if dim <= 64 {
        (0..dim).collect()
    } else {
        let mut v: Vec<usize> = (0..32).collect();
        v.extend(dim - 32..dim);
        v
    };
    indices.dedup();
    let mut worst = 0.0_f64;
    for i in indices {
        let e = ComplexVector::basis(dim, i);
        let tt = t.apply_adjoint(&t.apply(&e)?)?;
        let tts = t.apply(&t.apply_adjoint(&e)?)?;
        worst = worst.max(tt.sub(&e)?.norm());
        worst = worst.max(tts.sub(&e)?.norm());
    }
    Ok(worst)
}
