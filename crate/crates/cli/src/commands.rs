//! The four subcommands. Each returns the process exit code: 0 all checks
//! pass, 1 a violation was found (witness embedded in the report), with
//! invalid input surfacing as `CliError` (exit 2).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use qds_core::dissipativity::{certify_completely_dissipative, CertifyOptions};
use qds_core::gns::{gns_construct, implementing_operator, theorem_report, ImplementingForm, GRAM_RANK_REL_TOL};
use qds_core::json::{matrix_to_data, vector_to_data, MatrixData, VectorData};
use qds_core::lattice::{convergence_diagnostic, finite_volume_dynamics, ruelle_bound, LatticeRegion};
use qds_core::lattice::embed_observable;
use qds_core::semigroup::{blockwise_positivity_probe, default_time_grid, exp_generator, is_completely_positive};
use qds_core::{AlgebraElement, DissipativityReport, Element, Error, ImplementationReport};

use crate::report::{emit, Envelope};
use crate::scenario::{
    algebra_observable, build_generator, build_interaction, build_state, parse_scenario, site_observable,
    Scenario,
};
use crate::CliError;

/// Flag overrides shared by all subcommands.
pub struct Common {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub n_max: Option<usize>,
    pub out: Option<PathBuf>,
}

fn load(path: &Path, common: &Common) -> Result<Scenario, CliError> {
    let mut sc = parse_scenario(path)?;
    if let Some(seed) = common.seed {
        sc.run.seed = seed;
    }
    if let Some(tol) = common.tol {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(CliError::invalid("--tol must be a positive finite number"));
        }
        sc.run.tol = tol;
    }
    if let Some(n_max) = common.n_max {
        if n_max < 1 {
            return Err(CliError::invalid("--n-max must be at least 1"));
        }
        sc.run.n_max = n_max;
    }
    Ok(sc)
}

fn certify_options(sc: &Scenario) -> CertifyOptions<f64> {
    let defaults = CertifyOptions::default();
    CertifyOptions {
        n_max: sc.run.n_max,
        sample_count: sc.run.sample_count,
        seed: sc.run.seed,
        tol: sc.run.tol,
        alpha_grid: sc.run.alpha_grid.clone().unwrap_or(defaults.alpha_grid),
        t_grid: sc.run.t_grid.clone().unwrap_or(defaults.t_grid),
    }
}

fn run_error(context: &str, e: Error) -> CliError {
    CliError::invalid(format!("{context}: {e}"))
}

#[derive(Serialize)]
struct CpPoint {
    t: f64,
    completely_positive: bool,
    min_eigenvalue: f64,
}

#[derive(Serialize)]
struct CpWitnessData {
    t: f64,
    vector: VectorData,
}

#[derive(Serialize)]
struct CertifyBody {
    passed: bool,
    certificate: DissipativityReport,
    /// "choi" for single-block algebras, "blockwise-probe" for direct sums.
    cp_method: &'static str,
    cp_grid: Vec<CpPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cp_witness: Option<CpWitnessData>,
}

pub fn run_certify(path: &Path, common: &Common) -> Result<u8, CliError> {
    let sc = load(path, common)?;
    let delta = build_generator(&sc)?;
    let certificate =
        certify_completely_dissipative(&delta, &certify_options(&sc)).map_err(|e| run_error("certify", e))?;

    let t_grid = sc.run.t_grid.clone().unwrap_or_else(default_time_grid);
    let single_block = delta.algebra().num_blocks() == 1;
    let mut cp_grid = Vec::with_capacity(t_grid.len());
    let mut cp_witness = None;
    for &t in &t_grid {
        let tau = exp_generator(&delta, t);
        let point = if single_block {
            let check = is_completely_positive(&tau, sc.run.tol).map_err(|e| run_error("cp check", e))?;
            if !check.completely_positive && cp_witness.is_none() {
                cp_witness = check.witness.as_ref().map(|w| CpWitnessData {
                    t,
                    vector: vector_to_data(w),
                });
            }
            CpPoint {
                t,
                completely_positive: check.completely_positive,
                min_eigenvalue: check.min_eigenvalue,
            }
        } else {
            let probe = blockwise_positivity_probe(&tau, sc.run.n_max, sc.run.sample_count, sc.run.seed, sc.run.tol)
                .map_err(|e| run_error("cp probe", e))?;
            CpPoint {
                t,
                completely_positive: probe.passed,
                min_eigenvalue: probe.min_eigenvalue,
            }
        };
        cp_grid.push(point);
    }

    let passed = certificate.passed() && cp_grid.iter().all(|p| p.completely_positive);
    let body = CertifyBody {
        passed,
        certificate,
        cp_method: if single_block { "choi" } else { "blockwise-probe" },
        cp_grid,
        cp_witness,
    };
    emit(common.out.as_deref(), &Envelope::new("certify", &sc, body).to_json())?;
    Ok(if passed { 0 } else { 1 })
}

/// Expands "start:stop:step" into an inclusive grid; "a:a:_" is the single
/// point a.
fn parse_t_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::invalid(format!(
            "--t-grid {spec:?}: expected start:stop:step"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| CliError::invalid(format!("--t-grid {spec:?}: {p:?} is not a number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !start.is_finite() || !stop.is_finite() || !step.is_finite() {
        return Err(CliError::invalid(format!("--t-grid {spec:?}: values must be finite")));
    }
    if stop < start {
        return Err(CliError::invalid(format!("--t-grid {spec:?}: stop is before start")));
    }
    if start == stop {
        return Ok(vec![start]);
    }
    if step <= 0.0 {
        return Err(CliError::invalid(format!("--t-grid {spec:?}: step must be positive")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    if count > 100_000 {
        return Err(CliError::invalid(format!("--t-grid {spec:?}: more than 100000 points")));
    }
    Ok((0..=count).map(|k| start + step * k as f64).collect())
}

fn csv_rows(label: &str, rows: &[(f64, Element)]) -> String {
    let mut csv = String::from("t,observable");
    if let Some((_, first)) = rows.first() {
        for (g, m) in first.blocks().iter().enumerate() {
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    let _ = write!(csv, ",re_{g}_{r}_{c},im_{g}_{r}_{c}");
                }
            }
        }
    }
    csv.push('\n');
    for (t, x) in rows {
        let _ = write!(csv, "{t},{label}");
        for m in x.blocks() {
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    let e = m[(r, c)];
                    let _ = write!(csv, ",{},{}", e.re, e.im);
                }
            }
        }
        csv.push('\n');
    }
    csv
}

pub fn run_evolve(
    path: &Path,
    common: &Common,
    t_grid: Option<&str>,
    observable: &str,
    radius: i64,
) -> Result<u8, CliError> {
    let sc = load(path, common)?;
    let ts = match t_grid {
        Some(spec) => parse_t_grid(spec)?,
        None => sc.run.t_grid.clone().unwrap_or_else(default_time_grid),
    };

    let mut rows: Vec<(f64, Element)> = Vec::with_capacity(ts.len());
    if sc.generator.is_some() {
        let delta = build_generator(&sc)?;
        let obs = algebra_observable(observable, delta.algebra())?;
        for &t in &ts {
            let tau = exp_generator(&delta, t);
            rows.push((t, tau.apply(&obs).map_err(|e| run_error("evolve", e))?));
        }
    } else {
        if radius < 0 {
            return Err(CliError::invalid("--radius must be nonnegative"));
        }
        let phi = build_interaction(&sc)?;
        let region = LatticeRegion::centered(radius, phi.q()).map_err(|e| run_error("--radius", e))?;
        let site = LatticeRegion::new(0, 0, phi.q()).map_err(|e| run_error("lattice.q", e))?;
        let small = AlgebraElement::from_matrix(site_observable(observable, phi.q())?)
            .map_err(|e| run_error("observable", e))?;
        let obs = embed_observable(&small, &site, &region).map_err(|e| run_error("observable", e))?;
        for &t in &ts {
            rows.push((
                t,
                finite_volume_dynamics(&phi, &region, t, &obs).map_err(|e| run_error("evolve", e))?,
            ));
        }
    }
    emit(common.out.as_deref(), &csv_rows(observable, &rows))?;
    Ok(0)
}

#[derive(Serialize)]
struct RuelleData {
    lambda: f64,
    contributions: Vec<f64>,
    total: f64,
    finite_range_exact: bool,
}

#[derive(Serialize)]
struct ConvergenceData {
    radii: Vec<i64>,
    time: f64,
    observable: String,
    gaps: Vec<f64>,
    strictly_decreasing: bool,
}

#[derive(Serialize)]
struct LatticeBody {
    #[serde(skip_serializing_if = "Option::is_none")]
    ruelle: Option<RuelleData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    convergence: Option<ConvergenceData>,
}

pub fn run_lattice(
    path: &Path,
    common: &Common,
    lambda: f64,
    radii: &str,
    time: f64,
    observable: Option<&str>,
) -> Result<u8, CliError> {
    let sc = load(path, common)?;
    let phi = build_interaction(&sc)?;

    // The weighted norm needs translation invariance; pinned terms leave
    // only the convergence diagnostic.
    let ruelle = if phi.explicit_terms().is_empty() {
        let bound = ruelle_bound(&phi, lambda, sc.run.n_max).map_err(|e| run_error("--lambda", e))?;
        Some(RuelleData {
            lambda,
            contributions: bound.contributions,
            total: bound.total,
            finite_range_exact: bound.finite_range_exact,
        })
    } else {
        None
    };

    let convergence = match observable {
        None => None,
        Some(label) => {
            let parsed: Vec<i64> = radii
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<i64>()
                        .map_err(|_| CliError::invalid(format!("--radii: {p:?} is not an integer")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if parsed.len() < 2 {
                return Err(CliError::invalid("--radii: need at least two radii to measure gaps"));
            }
            if parsed.windows(2).any(|w| w[0] >= w[1]) || parsed[0] < 0 {
                return Err(CliError::invalid("--radii: radii must be nonnegative and strictly increasing"));
            }
            let volumes = parsed
                .iter()
                .map(|&r| LatticeRegion::centered(r, phi.q()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| run_error("--radii", e))?;
            let support = LatticeRegion::new(0, 0, phi.q()).map_err(|e| run_error("lattice.q", e))?;
            let a = AlgebraElement::from_matrix(site_observable(label, phi.q())?)
                .map_err(|e| run_error("observable", e))?;
            let diag =
                convergence_diagnostic(&phi, &a, &support, time, &volumes).map_err(|e| run_error("lattice", e))?;
            Some(ConvergenceData {
                radii: parsed,
                time,
                observable: label.to_string(),
                gaps: diag.gaps,
                strictly_decreasing: diag.strictly_decreasing,
            })
        }
    };

    let passed = convergence.as_ref().is_none_or(|c| c.strictly_decreasing);
    let body = LatticeBody { ruelle, convergence };
    emit(common.out.as_deref(), &Envelope::new("lattice", &sc, body).to_json())?;
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct GnsBody {
    implementable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    operator: Option<MatrixData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<ImplementationReport>,
}

pub fn run_gns(path: &Path, common: &Common) -> Result<u8, CliError> {
    let sc = load(path, common)?;
    let delta = build_generator(&sc)?;
    let algebra = delta.algebra().clone();
    let omega = build_state(&sc, &algebra)?;

    match theorem_report(&delta, &omega, sc.run.n_max, sc.run.sample_count, sc.run.seed, sc.run.tol) {
        Ok(report) => {
            let rep = gns_construct(&algebra, &omega, GRAM_RANK_REL_TOL).map_err(|e| run_error("gns", e))?;
            let op = implementing_operator(&delta, &rep, ImplementingForm::TwoSided, true, sc.run.tol)
                .map_err(|e| run_error("gns", e))?;
            let passed = report.pipeline_passed() && report.consistent;
            let body = GnsBody {
                implementable: true,
                residual: None,
                operator: Some(matrix_to_data(&op.matrix)),
                report: Some(report),
            };
            emit(common.out.as_deref(), &Envelope::new("gns", &sc, body).to_json())?;
            Ok(if passed { 0 } else { 1 })
        }
        // A clean least-squares answer that the strict two-sided form does
        // not exist is a finding, not an input error.
        Err(Error::NotImplementable { residual, .. }) => {
            let body = GnsBody {
                implementable: false,
                residual: Some(residual),
                operator: None,
                report: None,
            };
            emit(common.out.as_deref(), &Envelope::new("gns", &sc, body).to_json())?;
            Ok(1)
        }
        Err(e) => Err(run_error("gns", e)),
    }
}
