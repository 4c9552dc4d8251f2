//! On-disk artifact documents: search certificates, density estimates,
//! approximant reports, and the consolidated run report, plus the
//! re-verification that rebuilds everything from the embedded spec echo.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use rigidity_core::rigidity::{verify_certificate, RigidityCertificate, SequenceConstraint};
use rigidity_core::semigroup::{verify_group_certificate, GroupRigidityCertificate};

use crate::error::CliError;
use crate::spec::SpecFile;

pub fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

/// Writes a JSON document with a trailing newline, UTF-8, LF only.
pub fn write_json<T: Serialize>(path: &Path, doc: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc)
        .map_err(|e| CliError::Validation(format!("cannot serialize {}: {e}", path.display())))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LaneSpec {
    All,
    Arithmetic { modulus: u64, residue: u64 },
}

impl LaneSpec {
    pub fn to_constraint(&self) -> Result<SequenceConstraint, CliError> {
        Ok(match self {
            Self::All => SequenceConstraint::All,
            Self::Arithmetic { modulus, residue } => {
                SequenceConstraint::arithmetic(*modulus, *residue)?
            }
        })
    }

    pub fn is_all(&self) -> bool {
        matches!(self, Self::All)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchParams {
    pub lambda: [f64; 2],
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    pub lane: LaneSpec,
    pub max_terms: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateBody {
    pub lambda: [f64; 2],
    pub epsilon: f64,
    /// Discrete certified times.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<u64>>,
    /// Grid indices of continuous certified times (t = k·step).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_indices: Option<Vec<u64>>,
    /// The continuous times themselves, echoed for readability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_times: Option<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub probe_label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NotFoundBody {
    pub scanned: u64,
    pub reason: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_residual: Option<f64>,
}

/// The certificate.json document of one search run. The spec is echoed in
/// full so re-verification rebuilds the exact operator and probe family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchDocument {
    /// Dispatch tag for consolidation: always "search".
    pub artifact: String,
    pub tool_version: String,
    pub seed: u64,
    pub probe_label: String,
    pub probe_count: usize,
    pub search: SearchParams,
    pub found: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_found: Option<NotFoundBody>,
    pub spec: SpecFile,
}

impl SearchDocument {
    /// Rebuilds the model and probes from the echoed spec and replays every
    /// recorded residual through the library verifier. Any mismatch is an
    /// error string; the caller decides the exit class.
    pub fn reverify(&self) -> Result<(), String> {
        let body = self
            .certificate
            .as_ref()
            .ok_or("document is marked found but carries no certificate")?;
        let lambda = Complex64::new(body.lambda[0], body.lambda[1]);
        let probes_dim_err = |e: CliError| e.message().to_string();
        match (&self.spec.operator, &self.spec.group) {
            (Some(op), None) => {
                let t = op.build().map_err(probes_dim_err)?;
                let probes = self
                    .spec
                    .build_probes(t.dim(), self.seed)
                    .map_err(probes_dim_err)?;
                let times = body
                    .times
                    .clone()
                    .ok_or("operator certificate lacks discrete times")?;
                let horizon = self
                    .search
                    .horizon
                    .ok_or("operator search parameters lack a horizon")?;
                let constraint = self.search.lane.to_constraint().map_err(probes_dim_err)?;
                let cert = RigidityCertificate::new(
                    lambda,
                    body.epsilon,
                    horizon,
                    constraint,
                    times,
                    body.residuals.clone(),
                    body.probe_label.clone(),
                )
                .map_err(|e| e.to_string())?;
                verify_certificate(&t, &probes, &cert).map_err(|e| e.to_string())
            }
            (None, Some(gs)) => {
                let g = gs.build().map_err(probes_dim_err)?;
                let probes = self
                    .spec
                    .build_probes(g.dim(), self.seed)
                    .map_err(probes_dim_err)?;
                let ks = body
                    .grid_indices
                    .clone()
                    .ok_or("group certificate lacks grid indices")?;
                let t_max = self
                    .search
                    .t_max
                    .ok_or("group search parameters lack t_max")?;
                let step = self.search.step.ok_or("group search parameters lack step")?;
                let cert = GroupRigidityCertificate::new(
                    lambda,
                    body.epsilon,
                    t_max,
                    step,
                    ks,
                    body.residuals.clone(),
                    body.probe_label.clone(),
                )
                .map_err(|e| e.to_string())?;
                verify_group_certificate(&g, &probes, &cert).map_err(|e| e.to_string())
            }
            _ => Err("spec echo must carry exactly one operator or group section".into()),
        }
    }
}

/// The density.json document of one density run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityDocument {
    /// Dispatch tag for consolidation: always "density".
    pub artifact: String,
    pub tool_version: String,
    pub seed: u64,
    pub probe: String,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    /// Mean squared pairing magnitude over the scanned trace.
    pub trace_wiener: f64,
    /// `1 - trace_wiener/ε²`; the estimate can never fall below this.
    pub chebyshev_floor: f64,
    /// Wiener average of the model's spectral measure, when one exists:
    /// an independent route to the same limit as `trace_wiener`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral_wiener: Option<f64>,
    pub spec: SpecFile,
}

/// The approximant.json document: how a model was rounded to an exactly
/// periodic one, with the proven bound and the re-measured period residual.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApproximantDocument {
    /// Dispatch tag for consolidation: always "approximant".
    pub artifact: String,
    pub tool_version: String,
    pub seed: u64,
    pub mode: String,
    pub lambda: [f64; 2],
    pub min_period: u64,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    /// n (discrete) or m (continuous): the exact period of the approximant.
    pub period: u64,
    /// Guaranteed distance to the original: 2·sin(π/n), or sqrt(2·t0·sup_diff).
    pub bound: f64,
    pub sup_diff: f64,
    /// Seminorm residual of `P^period = λI` measured on the probe family.
    pub verified_residual: f64,
    pub spec: SpecFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportCertificateEntry {
    pub file: String,
    pub seed: u64,
    pub lambda: [f64; 2],
    pub epsilon: f64,
    pub hit_count: usize,
    pub first_time: f64,
    pub last_time: f64,
    pub probe_label: String,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportNotFoundEntry {
    pub file: String,
    pub scanned: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDensityEntry {
    pub file: String,
    pub seed: u64,
    pub epsilon: f64,
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub chebyshev_floor: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportTimingEntry {
    pub file: String,
    pub verify_ms: u64,
}

/// The consolidated report.json over a directory of prior runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub directory: String,
    /// Distinct seeds seen across all merged documents, ascending.
    pub seeds: Vec<u64>,
    pub certificates: Vec<ReportCertificateEntry>,
    pub not_found: Vec<ReportNotFoundEntry>,
    pub densities: Vec<ReportDensityEntry>,
    pub timings: Vec<ReportTimingEntry>,
    /// JSON files in the directory that are not consolidated artifacts.
    pub skipped: Vec<String>,
}
