//! Implementations of the five subcommands.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;

use rigidity_core::measures::{continuity_score, spectral_measure_of, wiener_average, CircleMeasure};
use rigidity_core::metrics::seminorm_residual;
use rigidity_core::models::lambda_rigid_approximant;
use rigidity_core::rigidity::{awstability_density_traced, rigidity_search_traced, SearchOutcome};
use rigidity_core::semigroup::{
    cont_density_traced, group_rigidity_search_traced, group_seminorm_residual,
    lambda_rigid_approximant_cont, GroupSearchOutcome,
};
use rigidity_core::vector::ComplexVector;

use crate::artifacts::{
    tool_version, write_json, write_text, ApproximantDocument, CertificateBody, DensityDocument,
    LaneSpec, NotFoundBody, ReportCertificateEntry, ReportDensityEntry, ReportNotFoundEntry,
    ReportTimingEntry, RunReport, SearchDocument, SearchParams,
};
use crate::error::CliError;
use crate::spec::{GroupSpec, OperatorSpec, SpecFile};

const DEFAULT_HORIZON: u64 = 10_000;
const DEFAULT_T_MAX: f64 = 100.0;
const DEFAULT_STEP: f64 = 0.1;

pub fn parse_lambda(flag: &str, angle: Option<f64>) -> Result<Complex64, CliError> {
    if let Some(theta) = angle {
        if !theta.is_finite() {
            return Err(CliError::Validation(format!(
                "--lambda-angle {theta} is not finite"
            )));
        }
        return Ok(Complex64::from_polar(1.0, theta));
    }
    let parts: Vec<&str> = flag.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Parse(format!(
            "--lambda expects \"re,im\", got {flag:?}"
        )));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| CliError::Parse(format!("--lambda real part {:?}: {e}", parts[0])))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| CliError::Parse(format!("--lambda imaginary part {:?}: {e}", parts[1])))?;
    Ok(Complex64::new(re, im))
}

pub fn parse_lane(flag: Option<&str>) -> Result<LaneSpec, CliError> {
    let Some(text) = flag else {
        return Ok(LaneSpec::All);
    };
    if text.eq_ignore_ascii_case("all") {
        return Ok(LaneSpec::All);
    }
    let Some((m, r)) = text.split_once(':') else {
        return Err(CliError::Parse(format!(
            "--lane expects \"modulus:residue\" or \"all\", got {text:?}"
        )));
    };
    let modulus: u64 = m
        .trim()
        .parse()
        .map_err(|e| CliError::Parse(format!("--lane modulus {m:?}: {e}")))?;
    let residue: u64 = r
        .trim()
        .parse()
        .map_err(|e| CliError::Parse(format!("--lane residue {r:?}: {e}")))?;
    // validate now so a bad lane fails before any scanning
    LaneSpec::Arithmetic { modulus, residue }
        .to_constraint()
        .map(|_| LaneSpec::Arithmetic { modulus, residue })
}

fn ensure_out_dir(out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out)
        .map_err(|e| CliError::Validation(format!("cannot create {}: {e}", out.display())))
}

fn complex_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

// ---------------------------------------------------------------------------
// build

pub fn cmd_build(spec_path: &Path) -> Result<(), CliError> {
    let spec = SpecFile::load(spec_path)?;
    if let Some(op) = &spec.operator {
        let t = op.build()?;
        println!("section: operator");
        println!("kind: {}", t.kind_name());
        println!("dim: {}", t.dim());
        println!("norm bound: {}", t.norm_bound());
        match t.as_spectral() {
            Some(u) => {
                let mu = CircleMeasure::new(
                    u.angles()
                        .iter()
                        .zip(u.weights())
                        .map(|(&a, &w)| (a, w))
                        .collect(),
                )?;
                println!("spectral atoms: {}", mu.len());
                println!("continuity score: {}", continuity_score(&mu));
            }
            None => println!("spectral atoms: n/a for kind {}", t.kind_name()),
        }
    } else if let Some(ms) = &spec.measure {
        let mu = ms.build()?;
        println!("section: measure");
        println!("atoms: {}", mu.len());
        println!("continuity score: {}", continuity_score(&mu));
    } else if let Some(gs) = &spec.group {
        let g = gs.build()?;
        println!("section: group");
        println!("dim: {}", g.dim());
        let score: f64 = g.weights().iter().map(|w| w * w).sum();
        println!("continuity score: {score}");
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// search

#[allow(clippy::too_many_arguments)]
pub fn cmd_search(
    spec_path: &Path,
    lambda_flag: &str,
    lambda_angle: Option<f64>,
    epsilon: f64,
    horizon: Option<u64>,
    tmax: Option<f64>,
    step: Option<f64>,
    lane_flag: Option<&str>,
    max_terms: usize,
    out: &Path,
) -> Result<(), CliError> {
    let spec = SpecFile::load(spec_path)?;
    let seed = spec.resolve_seed()?;
    let lambda = parse_lambda(lambda_flag, lambda_angle)?;
    let lane = parse_lane(lane_flag)?;
    ensure_out_dir(out)?;

    match (&spec.operator, &spec.group) {
        (Some(op), None) => {
            if tmax.is_some() || step.is_some() {
                return Err(CliError::Validation(
                    "--tmax/--step apply to group specs; operator specs take --horizon".into(),
                ));
            }
            let horizon = horizon.unwrap_or(DEFAULT_HORIZON);
            let t = op.build()?;
            let probes = spec.build_probes(t.dim(), seed)?;
            let constraint = lane.to_constraint()?;
            let mut trace = String::from("n,residual\n");
            let outcome = rigidity_search_traced(
                &t,
                &probes,
                lambda,
                epsilon,
                horizon,
                &constraint,
                max_terms,
                &mut |n, r| {
                    let _ = writeln!(trace, "{n},{r}");
                },
            )?;
            write_text(&out.join("trace.csv"), &trace)?;

            let (found, certificate, not_found) = match &outcome {
                SearchOutcome::Found(cert) => {
                    println!(
                        "found {} certified times, first {} last {}",
                        cert.times().len(),
                        cert.times()[0],
                        cert.times().last().unwrap()
                    );
                    (
                        true,
                        Some(CertificateBody {
                            lambda: complex_pair(cert.lambda()),
                            epsilon: cert.epsilon(),
                            times: Some(cert.times().to_vec()),
                            grid_indices: None,
                            grid_times: None,
                            residuals: cert.residuals().to_vec(),
                            probe_label: cert.probe_label().to_string(),
                        }),
                        None,
                    )
                }
                SearchOutcome::NotFound {
                    scanned,
                    best,
                    reason,
                } => {
                    println!("not found: {reason}");
                    (
                        false,
                        None,
                        Some(NotFoundBody {
                            scanned: *scanned,
                            reason: reason.clone(),
                            best_time: best.map(|(n, _)| n as f64),
                            best_residual: best.map(|(_, r)| r),
                        }),
                    )
                }
            };
            let doc = SearchDocument {
                artifact: "search".into(),
                tool_version: tool_version(),
                seed,
                probe_label: probes.label().to_string(),
                probe_count: probes.len(),
                search: SearchParams {
                    lambda: complex_pair(lambda),
                    epsilon,
                    horizon: Some(horizon),
                    t_max: None,
                    step: None,
                    lane,
                    max_terms,
                },
                found,
                certificate,
                not_found,
                spec,
            };
            write_json(&out.join("certificate.json"), &doc)?;
            println!("wrote {}", out.join("certificate.json").display());
            Ok(())
        }
        (None, Some(gs)) => {
            if horizon.is_some() {
                return Err(CliError::Validation(
                    "--horizon applies to operator specs; group specs take --tmax/--step".into(),
                ));
            }
            let t_max = tmax.unwrap_or(DEFAULT_T_MAX);
            let step = step.unwrap_or(DEFAULT_STEP);
            let g = gs.build()?;
            let probes = spec.build_probes(g.dim(), seed)?;
            let constraint = if lane.is_all() {
                None
            } else {
                Some(lane.to_constraint()?)
            };
            let mut trace = String::from("t,residual\n");
            let outcome = group_rigidity_search_traced(
                &g,
                &probes,
                lambda,
                epsilon,
                t_max,
                step,
                constraint.as_ref(),
                max_terms,
                &mut |t, r| {
                    let _ = writeln!(trace, "{t},{r}");
                },
            )?;
            write_text(&out.join("trace.csv"), &trace)?;

            let (found, certificate, not_found) = match &outcome {
                GroupSearchOutcome::Found(cert) => {
                    println!(
                        "found {} certified times, first {} last {}",
                        cert.times().len(),
                        cert.times()[0],
                        cert.times().last().unwrap()
                    );
                    (
                        true,
                        Some(CertificateBody {
                            lambda: complex_pair(cert.lambda()),
                            epsilon: cert.epsilon(),
                            times: None,
                            grid_indices: Some(cert.ks().to_vec()),
                            grid_times: Some(cert.times().to_vec()),
                            residuals: cert.residuals().to_vec(),
                            probe_label: cert.probe_label().to_string(),
                        }),
                        None,
                    )
                }
                GroupSearchOutcome::NotFound {
                    scanned,
                    best,
                    reason,
                } => {
                    println!("not found: {reason}");
                    (
                        false,
                        None,
                        Some(NotFoundBody {
                            scanned: *scanned,
                            reason: reason.clone(),
                            best_time: best.map(|(t, _)| t),
                            best_residual: best.map(|(_, r)| r),
                        }),
                    )
                }
            };
            let doc = SearchDocument {
                artifact: "search".into(),
                tool_version: tool_version(),
                seed,
                probe_label: probes.label().to_string(),
                probe_count: probes.len(),
                search: SearchParams {
                    lambda: complex_pair(lambda),
                    epsilon,
                    horizon: None,
                    t_max: Some(t_max),
                    step: Some(step),
                    lane,
                    max_terms,
                },
                found,
                certificate,
                not_found,
                spec,
            };
            write_json(&out.join("certificate.json"), &doc)?;
            println!("wrote {}", out.join("certificate.json").display());
            Ok(())
        }
        _ => Err(CliError::Validation(
            "search needs an operator or group section".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// approximate

#[allow(clippy::too_many_arguments)]
pub fn cmd_approximate(
    spec_path: &Path,
    lambda_flag: &str,
    lambda_angle: Option<f64>,
    min_period: u64,
    epsilon: f64,
    continuous: bool,
    t0: f64,
    out: &Path,
) -> Result<(), CliError> {
    let spec = SpecFile::load(spec_path)?;
    let seed = spec.resolve_seed()?;
    let lambda = parse_lambda(lambda_flag, lambda_angle)?;
    ensure_out_dir(out)?;

    if continuous {
        let Some(gs) = &spec.group else {
            return Err(CliError::Unsupported(
                "--continuous approximation needs a group section".into(),
            ));
        };
        let g = gs.build()?;
        let probes = spec.build_probes(g.dim(), seed)?;
        let res = lambda_rigid_approximant_cont(&g, lambda, min_period, epsilon, t0)?;
        let verified =
            group_seminorm_residual(res.group(), res.m() as f64, res.lambda(), &probes)?;
        let model = SpecFile {
            version: crate::spec::SPEC_VERSION,
            seed: Some(seed),
            operator: None,
            measure: None,
            group: Some(GroupSpec {
                freqs: res.group().freqs().to_vec(),
                weights: Some(res.group().weights().to_vec()),
            }),
            probes: None,
        };
        let doc = ApproximantDocument {
            artifact: "approximant".into(),
            tool_version: tool_version(),
            seed,
            mode: "continuous".into(),
            lambda: complex_pair(res.lambda()),
            min_period,
            epsilon,
            t0: Some(t0),
            period: res.m(),
            bound: res.uniform_bound(),
            sup_diff: res.sup_diff(),
            verified_residual: verified,
            spec,
        };
        write_json(&out.join("approximant.json"), &doc)?;
        write_json(&out.join("model.json"), &model)?;
        println!(
            "period m = {}, uniform bound {}, period residual {}",
            res.m(),
            res.uniform_bound(),
            verified
        );
        return Ok(());
    }

    let Some(op) = &spec.operator else {
        return Err(CliError::Unsupported(
            "discrete approximation needs an operator section (pass --continuous for groups)"
                .into(),
        ));
    };
    let t = op.build()?;
    let Some(u) = t.as_spectral() else {
        return Err(CliError::Unsupported(format!(
            "approximation needs a spectral model, got kind {}",
            t.kind_name()
        )));
    };
    let probes = spec.build_probes(t.dim(), seed)?;
    let res = lambda_rigid_approximant(u, lambda, min_period, epsilon)?;
    let p = res.handle()?;
    let verified = seminorm_residual(&p, res.n(), res.lambda(), &probes)?;
    let model = SpecFile {
        version: crate::spec::SPEC_VERSION,
        seed: Some(seed),
        operator: Some(OperatorSpec::Spectral(crate::spec::SpectralSpec {
            angles: res.model().angles().to_vec(),
            weights: res.model().weights().to_vec(),
        })),
        measure: None,
        group: None,
        probes: None,
    };
    let doc = ApproximantDocument {
        artifact: "approximant".into(),
        tool_version: tool_version(),
        seed,
        mode: "discrete".into(),
        lambda: complex_pair(res.lambda()),
        min_period,
        epsilon,
        t0: None,
        period: res.n(),
        bound: res.bound(),
        sup_diff: res.sup_error(),
        verified_residual: verified,
        spec,
    };
    write_json(&out.join("approximant.json"), &doc)?;
    write_json(&out.join("model.json"), &model)?;
    println!(
        "period n = {}, rounding bound {}, period residual {}",
        res.n(),
        res.bound(),
        verified
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// density

fn parse_probe(flag: &str, dim: usize) -> Result<(ComplexVector, String), CliError> {
    if flag.eq_ignore_ascii_case("constant") {
        return Ok((ComplexVector::constant_one(dim), "constant".into()));
    }
    if let Some(k_text) = flag.strip_prefix("basis:") {
        let k: usize = k_text
            .trim()
            .parse()
            .map_err(|e| CliError::Parse(format!("--probe basis index {k_text:?}: {e}")))?;
        if k >= dim {
            return Err(CliError::Validation(format!(
                "basis probe index {k} does not fit in dimension {dim}"
            )));
        }
        return Ok((ComplexVector::basis(dim, k), format!("basis:{k}")));
    }
    Err(CliError::Parse(format!(
        "--probe expects \"constant\" or \"basis:<k>\", got {flag:?}"
    )))
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_density(
    spec_path: &Path,
    epsilon: f64,
    horizon: Option<u64>,
    tmax: Option<f64>,
    step: Option<f64>,
    probe_flag: &str,
    out: &Path,
) -> Result<(), CliError> {
    let spec = SpecFile::load(spec_path)?;
    let seed = spec.resolve_seed()?;
    ensure_out_dir(out)?;

    match (&spec.operator, &spec.group) {
        (Some(op), None) => {
            if tmax.is_some() || step.is_some() {
                return Err(CliError::Validation(
                    "--tmax/--step apply to group specs; operator specs take --horizon".into(),
                ));
            }
            let horizon = horizon.unwrap_or(DEFAULT_HORIZON);
            let t = op.build()?;
            let (x, probe_name) = parse_probe(probe_flag, t.dim())?;
            if x.norm() == 0.0 {
                return Err(CliError::Validation("probe vector has zero norm".into()));
            }
            let mut trace = String::from("n,coefficient\n");
            let mut sq_sum = 0.0f64;
            let d = awstability_density_traced(&t, &x, &x, epsilon, horizon, &mut |n, c| {
                let _ = writeln!(trace, "{n},{c}");
                sq_sum += c * c;
            })?;
            write_text(&out.join("trace.csv"), &trace)?;
            let trace_wiener = sq_sum / d.horizon as f64;
            let spectral_wiener = if t.as_spectral().is_some() {
                let mu = spectral_measure_of(&t, &x)?;
                Some(wiener_average(&mu, horizon)?)
            } else {
                None
            };
            let doc = DensityDocument {
                artifact: "density".into(),
                tool_version: tool_version(),
                seed,
                probe: probe_name,
                epsilon,
                horizon: Some(horizon),
                t_max: None,
                step: None,
                samples: d.horizon,
                hits: d.hits,
                estimate: d.estimate,
                trace_wiener,
                chebyshev_floor: 1.0 - trace_wiener / (epsilon * epsilon),
                spectral_wiener,
                spec,
            };
            write_json(&out.join("density.json"), &doc)?;
            println!(
                "density {} ({} of {} times below {epsilon})",
                d.estimate, d.hits, d.horizon
            );
            Ok(())
        }
        (None, Some(gs)) => {
            if horizon.is_some() {
                return Err(CliError::Validation(
                    "--horizon applies to operator specs; group specs take --tmax/--step".into(),
                ));
            }
            let t_max = tmax.unwrap_or(DEFAULT_T_MAX);
            let step = step.unwrap_or(DEFAULT_STEP);
            let g = gs.build()?;
            let (x, probe_name) = parse_probe(probe_flag, g.dim())?;
            if x.norm() == 0.0 {
                return Err(CliError::Validation("probe vector has zero norm".into()));
            }
            let mut trace = String::from("t,coefficient\n");
            let mut sq_sum = 0.0f64;
            let d = cont_density_traced(&g, &x, epsilon, t_max, step, &mut |t, c| {
                let _ = writeln!(trace, "{t},{c}");
                sq_sum += c * c;
            })?;
            write_text(&out.join("trace.csv"), &trace)?;
            let trace_wiener = if d.horizon > 0 {
                sq_sum / d.horizon as f64
            } else {
                0.0
            };
            let doc = DensityDocument {
                artifact: "density".into(),
                tool_version: tool_version(),
                seed,
                probe: probe_name,
                epsilon,
                horizon: None,
                t_max: Some(t_max),
                step: Some(step),
                samples: d.horizon,
                hits: d.hits,
                estimate: d.estimate,
                trace_wiener,
                chebyshev_floor: 1.0 - trace_wiener / (epsilon * epsilon),
                spectral_wiener: None,
                spec,
            };
            write_json(&out.join("density.json"), &doc)?;
            println!(
                "density {} ({} of {} sampled times below {epsilon})",
                d.estimate, d.hits, d.horizon
            );
            Ok(())
        }
        _ => Err(CliError::Validation(
            "density needs an operator or group section".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// report

pub fn cmd_report(dir: &Path) -> Result<(), CliError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|ext| ext == "json")
                && p.file_name().is_some_and(|n| n != "report.json")
        })
        .collect();
    files.sort();

    let mut report = RunReport {
        tool_version: tool_version(),
        directory: dir.display().to_string(),
        seeds: Vec::new(),
        certificates: Vec::new(),
        not_found: Vec::new(),
        densities: Vec::new(),
        timings: Vec::new(),
        skipped: Vec::new(),
    };
    let mut seeds = BTreeSet::new();

    for path in &files {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        let Ok(value) = serde_json::from_str::<serde_json::Value>(&text) else {
            report.skipped.push(name);
            continue;
        };
        let tag = value
            .get("artifact")
            .and_then(|v| v.as_str())
            .map(str::to_owned);
        if tag.as_deref() == Some("search") {
            let doc: SearchDocument = serde_json::from_value(value).map_err(|e| {
                CliError::Verification(format!("{name}: malformed search document: {e}"))
            })?;
            seeds.insert(doc.seed);
            if doc.found {
                let started = Instant::now();
                doc.reverify()
                    .map_err(|e| CliError::Verification(format!("{name}: {e}")))?;
                let body = doc.certificate.as_ref().expect("verified above");
                let (first, last, count) = if let Some(times) = &body.times {
                    (
                        times[0] as f64,
                        *times.last().unwrap() as f64,
                        times.len(),
                    )
                } else {
                    let times = body.grid_times.as_ref().expect("group certificate");
                    (times[0], *times.last().unwrap(), times.len())
                };
                report.certificates.push(ReportCertificateEntry {
                    file: name.clone(),
                    seed: doc.seed,
                    lambda: body.lambda,
                    epsilon: body.epsilon,
                    hit_count: count,
                    first_time: first,
                    last_time: last,
                    probe_label: body.probe_label.clone(),
                    verified: true,
                });
                report.timings.push(ReportTimingEntry {
                    file: name,
                    verify_ms: started.elapsed().as_millis() as u64,
                });
            } else {
                let body = doc.not_found.as_ref().ok_or_else(|| {
                    CliError::Verification(format!(
                        "{name}: not-found document lacks a reason body"
                    ))
                })?;
                report.not_found.push(ReportNotFoundEntry {
                    file: name,
                    scanned: body.scanned,
                    reason: body.reason.clone(),
                });
            }
        } else if tag.as_deref() == Some("density") {
            let doc: DensityDocument = serde_json::from_value(value).map_err(|e| {
                CliError::Verification(format!("{name}: malformed density document: {e}"))
            })?;
            seeds.insert(doc.seed);
            report.densities.push(ReportDensityEntry {
                file: name,
                seed: doc.seed,
                epsilon: doc.epsilon,
                samples: doc.samples,
                hits: doc.hits,
                estimate: doc.estimate,
                chebyshev_floor: doc.chebyshev_floor,
            });
        } else {
            // untagged or unrecognized (approximant files, foreign JSON):
            // listed but not merged
            report.skipped.push(name);
        }
    }

    report.seeds = seeds.into_iter().collect();
    write_json(&dir.join("report.json"), &report)?;
    let text = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Validation(format!("cannot serialize report: {e}")))?;
    println!("{text}");
    Ok(())
}
