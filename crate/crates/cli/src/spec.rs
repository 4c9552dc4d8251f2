//! The JSON input document and its conversion into core objects.
//!
//! Unknown keys are rejected at every level. Weight lists must sum to 1
//! within 1e-9 and are renormalized exactly before they reach the stricter
//! core constructors, so a spec that honors the documented tolerance always
//! builds.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use rigidity_core::measures::CircleMeasure;
use rigidity_core::models::{build_model, ModelKind};
use rigidity_core::operator::OperatorHandle;
use rigidity_core::probe::ProbeSet;
use rigidity_core::semigroup::SpectralGroup;
use rigidity_core::vector::ComplexVector;

use crate::error::CliError;

pub const SPEC_VERSION: u32 = 1;
const WEIGHT_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<ProbeSpec>,
}

impl SpecFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let spec: SpecFile = serde_json::from_str(text).map_err(|e| {
            let msg = format!("spec document: {e}");
            match e.classify() {
                serde_json::error::Category::Data => CliError::Validation(msg),
                _ => CliError::Parse(msg),
            }
        })?;
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.version != SPEC_VERSION {
            return Err(CliError::Validation(format!(
                "unsupported spec version {}, expected {SPEC_VERSION}",
                self.version
            )));
        }
        let sections = [
            self.operator.is_some(),
            self.measure.is_some(),
            self.group.is_some(),
        ]
        .iter()
        .filter(|&&p| p)
        .count();
        if sections != 1 {
            return Err(CliError::Validation(
                "exactly one of the operator, measure, or group sections must be present".into(),
            ));
        }
        if self.probes.is_some() && self.measure.is_some() {
            return Err(CliError::Validation(
                "a probes section does not apply to measure specs".into(),
            ));
        }
        Ok(())
    }

    /// Effective seed: `RIGIDITY_SEED` when set, the spec's seed otherwise,
    /// 0 as the last resort.
    pub fn resolve_seed(&self) -> Result<u64, CliError> {
        match std::env::var("RIGIDITY_SEED") {
            Ok(text) => text.trim().parse::<u64>().map_err(|e| {
                CliError::Parse(format!("RIGIDITY_SEED {text:?} is not a u64: {e}"))
            }),
            Err(std::env::VarError::NotPresent) => Ok(self.seed.unwrap_or(0)),
            Err(e) => Err(CliError::Parse(format!("RIGIDITY_SEED: {e}"))),
        }
    }

    /// Probe family for a model of the given dimension, honoring an explicit
    /// probes section when present.
    pub fn build_probes(&self, dim: usize, seed: u64) -> Result<ProbeSet, CliError> {
        match &self.probes {
            None => Ok(ProbeSet::default_for_dim(dim, seed)?),
            Some(p) => p.build(dim, seed),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpec {
    Rotation(RotationSpec),
    RationalRotation(RationalRotationSpec),
    Spectral(SpectralSpec),
    Shift(ShiftSpec),
    Koopman(KoopmanSpec),
    Rescale(RescaleSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationSpec {
    pub angle: f64,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalRotationSpec {
    pub p: i64,
    pub q: u64,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralSpec {
    pub angles: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftSpec {
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KoopmanSpec {
    pub permutation: Vec<usize>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RescaleSpec {
    pub alpha: [f64; 2],
    pub inner: Box<OperatorSpec>,
}

impl OperatorSpec {
    fn to_model_kind(&self) -> Result<ModelKind, CliError> {
        Ok(match self {
            Self::Rotation(s) => ModelKind::Rotation {
                angle: s.angle,
                dim: s.dim,
            },
            Self::RationalRotation(s) => ModelKind::RationalRotation {
                p: s.p,
                q: s.q,
                dim: s.dim,
            },
            Self::Spectral(s) => ModelKind::Spectral {
                angles: s.angles.clone(),
                weights: normalized_weights(&s.weights)?,
            },
            Self::Shift(s) => ModelKind::Shift { dim: s.dim },
            Self::Koopman(s) => ModelKind::Koopman {
                permutation: s.permutation.clone(),
                weights: normalized_weights(&s.weights)?,
            },
            Self::Rescale(s) => ModelKind::Rescale {
                alpha: Complex64::new(s.alpha[0], s.alpha[1]),
                inner: Box::new(s.inner.to_model_kind()?),
            },
        })
    }

    pub fn build(&self) -> Result<OperatorHandle, CliError> {
        Ok(build_model(&self.to_model_kind()?)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpec {
    Atoms(AtomsSpec),
    Dirac(DiracSpec),
    UniformRoots(UniformRootsSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomsSpec {
    /// (angle, weight) pairs.
    pub atoms: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiracSpec {
    pub angle: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformRootsSpec {
    pub q: u64,
}

impl MeasureSpec {
    pub fn build(&self) -> Result<CircleMeasure, CliError> {
        Ok(match self {
            Self::Atoms(s) => {
                let weights: Vec<f64> = s.atoms.iter().map(|&(_, w)| w).collect();
                let weights = normalized_weights(&weights)?;
                CircleMeasure::new(
                    s.atoms
                        .iter()
                        .zip(&weights)
                        .map(|(&(angle, _), &w)| (angle, w))
                        .collect(),
                )?
            }
            Self::Dirac(s) => CircleMeasure::dirac(s.angle)?,
            Self::UniformRoots(s) => CircleMeasure::uniform_roots(s.q)?,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub freqs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl GroupSpec {
    pub fn build(&self) -> Result<SpectralGroup, CliError> {
        Ok(match &self.weights {
            None => SpectralGroup::uniform(self.freqs.clone())?,
            Some(w) => SpectralGroup::new(self.freqs.clone(), normalized_weights(w)?)?,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    /// Explicit probe vectors; each entry is a [re, im] pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<[f64; 2]>>>,
}

impl ProbeSpec {
    fn build(&self, dim: usize, seed: u64) -> Result<ProbeSet, CliError> {
        match (&self.count, &self.vectors) {
            (Some(_), Some(_)) => Err(CliError::Validation(
                "probes section takes either a count or explicit vectors, not both".into(),
            )),
            (Some(count), None) => Ok(ProbeSet::seeded(dim, *count, seed)?),
            (None, Some(rows)) => {
                let vectors = rows
                    .iter()
                    .map(|row| {
                        ComplexVector::new(
                            row.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
                        )
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(ProbeSet::new(vectors)?)
            }
            (None, None) => Ok(ProbeSet::default_for_dim(dim, seed)?),
        }
    }
}

/// Enforces the documented 1e-9 tolerance, then renormalizes so downstream
/// constructors see an exact probability vector. Exactly-summing input is
/// passed through bitwise.
fn normalized_weights(weights: &[f64]) -> Result<Vec<f64>, CliError> {
    if weights.is_empty() {
        return Err(CliError::Validation("weights must not be empty".into()));
    }
    let mut sum = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w <= 0.0 {
            return Err(CliError::Validation(format!(
                "weight {i} is {w}, expected a positive finite number"
            )));
        }
        sum += w;
    }
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(CliError::Validation(format!(
            "weights sum to {sum}, expected 1 within 1e-9"
        )));
    }
    if sum == 1.0 {
        return Ok(weights.to_vec());
    }
    Ok(weights.iter().map(|w| w / sum).collect())
}
