use std::f64::consts::FRAC_1_SQRT_2;
use std::time::Instant;

use rayon::prelude::*;
use steerkit::assemblage::{conditional_states, no_signalling_check, purity_profile};
use steerkit::linalg::real_vector;
use steerkit::states::{
    ghz_state, nopa_truncated, qudit_schmidt_state, separable_state, theta_state,
};
use steerkit::steering::{
    default_candidates, ghz_lhv_bruteforce, ghz_operator_expectations, lhs_feasibility_lp,
    lhs_reconstruct, pure_state_paradox, separable_lhs_model, FeasibilityStatus, GHZ_EIGENVALUES,
};
use steerkit::{BipartitePureState, ComplexMatrix, MeasurementSetting, Verdict};

use crate::config::{CandidateSet, GridAxis, RunConfig, Scenario};
use crate::error::CliError;
use crate::report::*;
use crate::settings::{parse_settings, spread_qubit_settings};

struct Outcome {
    verdict: String,
    exit_code: i32,
    checks: CheckSummary,
    result: ScenarioResult,
}

/// Runs one configuration; failures are captured in the report.
pub fn run(config: &RunConfig) -> ReportDocument {
    let start = Instant::now();
    let outcome = dispatch(config).unwrap_or_else(|e| Outcome {
        verdict: "error".into(),
        exit_code: EXIT_PRECONDITION,
        checks: CheckSummary::default(),
        result: ScenarioResult::Error(ErrorResult {
            message: e.to_string(),
        }),
    });
    ReportDocument {
        schema: SCHEMA_VERSION.into(),
        config: config.clone(),
        verdict: outcome.verdict,
        exit_code: outcome.exit_code,
        checks: outcome.checks,
        result: outcome.result,
        duration_seconds: start.elapsed().as_secs_f64(),
    }
}

fn dispatch(config: &RunConfig) -> Result<Outcome, CliError> {
    config.tolerances.validate()?;
    match config.scenario {
        Scenario::ParadoxQubit => {
            let psi = theta_state(require(config.theta, "theta")?)?;
            let settings = qubit_settings(config)?;
            paradox(psi, None, settings, config)
        }
        Scenario::ParadoxQudit => {
            let lambdas = match (&config.lambdas, config.d) {
                (Some(l), Some(d)) if l.len() != d => {
                    return Err(CliError::Config(format!(
                        "{} Schmidt coefficients given for d = {d}",
                        l.len()
                    )))
                }
                (Some(l), _) => l.clone(),
                (None, Some(d)) if d >= 2 => vec![1.0 / (d as f64).sqrt(); d],
                (None, d) => {
                    return Err(CliError::Config(format!("d must be at least 2, got {d:?}")))
                }
            };
            let psi = qudit_schmidt_state(&lambdas)?;
            let settings = qudit_settings(config, lambdas.len())?;
            paradox(psi, None, settings, config)
        }
        Scenario::ParadoxNopa => {
            let d = require(config.d, "d")?;
            let nopa = nopa_truncated(require(config.r, "r")?, d)?;
            let settings = qudit_settings(config, d)?;
            paradox(nopa.state, Some(nopa.truncation_weight), settings, config)
        }
        Scenario::SeparableLhs => separable_lhs(config),
        Scenario::Feasibility => feasibility(config),
        Scenario::Ghz => ghz(config),
        Scenario::Sweep => sweep(config),
    }
}

fn require<T>(value: Option<T>, name: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Config(format!("missing --{name}")))
}

fn labels(settings: &[MeasurementSetting]) -> Vec<String> {
    settings.iter().map(|s| s.label.clone()).collect()
}

fn qubit_settings(config: &RunConfig) -> Result<Vec<MeasurementSetting>, CliError> {
    let tol = &config.tolerances;
    let settings = match (&config.settings, config.k) {
        (Some(spec), _) => parse_settings(spec, 2, tol)?,
        (None, Some(k)) => spread_qubit_settings(k, tol)?,
        (None, None) => parse_settings("z,x", 2, tol)?,
    };
    check_k(config, &settings)?;
    Ok(settings)
}

fn qudit_settings(config: &RunConfig, d: usize) -> Result<Vec<MeasurementSetting>, CliError> {
    let tol = &config.tolerances;
    let settings = match (&config.settings, config.k) {
        (Some(spec), _) => parse_settings(spec, d, tol)?,
        (None, Some(k)) if k != 2 => {
            return Err(CliError::Config(format!(
                "k = {k} in dimension {d} needs an explicit --settings list"
            )))
        }
        _ if d == 2 => parse_settings("z,x", 2, tol)?,
        _ => parse_settings("Z,X", d, tol)?,
    };
    check_k(config, &settings)?;
    Ok(settings)
}

fn check_k(config: &RunConfig, settings: &[MeasurementSetting]) -> Result<(), CliError> {
    match config.k {
        Some(k) if k != settings.len() => Err(CliError::Config(format!(
            "--k {k} disagrees with {} settings",
            settings.len()
        ))),
        _ => Ok(()),
    }
}

fn paradox(
    psi: BipartitePureState,
    truncation_weight: Option<f64>,
    settings: Vec<MeasurementSetting>,
    config: &RunConfig,
) -> Result<Outcome, CliError> {
    let cert = pure_state_paradox(&psi, &settings, &config.tolerances)?;
    let exit_code = match cert.verdict {
        Verdict::Contradiction => EXIT_OK,
        Verdict::Separable | Verdict::DegenerateSettingGeometry => EXIT_PRECONDITION,
        Verdict::NumericalFailure => EXIT_NUMERICAL,
    };
    let checks = CheckSummary {
        no_signalling_deviation: cert.no_signalling_deviation,
        max_purity_residual: cert.purity.as_ref().map(|p| p.max_residual_mass()),
        passed: exit_code == EXIT_OK,
    };
    let verdict = serde_json::to_value(cert.verdict)?
        .as_str()
        .unwrap_or_default()
        .to_owned();
    let (d_a, d_b) = psi.dims();
    Ok(Outcome {
        verdict,
        exit_code,
        checks,
        result: ScenarioResult::Paradox(ParadoxResult {
            dims: [d_a, d_b],
            schmidt_coefficients: psi.schmidt().coeffs.clone(),
            truncation_weight,
            settings: labels(&settings),
            certificate: cert,
        }),
    })
}

fn feasibility_verdict(status: &FeasibilityStatus) -> &'static str {
    match status {
        FeasibilityStatus::FeasibleModelFound { .. } => "feasible_model_found",
        FeasibilityStatus::InfeasibleWithinAnsatz { .. } => "infeasible_within_ansatz",
    }
}

fn separable_lhs(config: &RunConfig) -> Result<Outcome, CliError> {
    let tol = &config.tolerances;
    let beta = require(config.beta, "beta")?;
    let psi = separable_state(&real_vector(&[beta.cos(), beta.sin()]))?;
    let settings = qubit_settings(config)?;
    let model = separable_lhs_model(&psi, &settings, tol)?;
    let direct = conditional_states(&psi.density(), &settings, (2, 2), tol)?;
    let reconstruction_deviation = lhs_reconstruct(&model, &settings)?.max_deviation(&direct)?;
    let model_check = model.check(&direct.bob_reduced, tol);
    let feasibility = lhs_feasibility_lp(&direct, &default_candidates(&direct, tol), tol)?;
    let passed =
        model_check.passed && reconstruction_deviation <= tol.tol_lp && feasibility.is_feasible();
    Ok(Outcome {
        verdict: if passed {
            "lhs_model_found"
        } else {
            "lhs_model_failed"
        }
        .into(),
        exit_code: if passed { EXIT_OK } else { EXIT_NUMERICAL },
        checks: CheckSummary {
            no_signalling_deviation: Some(no_signalling_check(&direct)),
            max_purity_residual: None,
            passed,
        },
        result: ScenarioResult::SeparableLhs(SeparableLhsResult {
            settings: labels(&settings),
            model,
            model_check,
            reconstruction_deviation,
            feasibility,
        }),
    })
}

fn feasibility(config: &RunConfig) -> Result<Outcome, CliError> {
    let tol = &config.tolerances;
    let psi = theta_state(require(config.theta, "theta")?)?;
    let settings = qubit_settings(config)?;
    let a = conditional_states(&psi.density(), &settings, (2, 2), tol)?;
    let candidates = match config.candidates {
        CandidateSet::Default => default_candidates(&a, tol),
        CandidateSet::AxisEigenstates => {
            let h = FRAC_1_SQRT_2;
            [[1.0, 0.0], [0.0, 1.0], [h, h], [h, -h]]
                .iter()
                .map(|v| ComplexMatrix::projector(&real_vector(v)))
                .collect()
        }
    };
    let outcome = lhs_feasibility_lp(&a, &candidates, tol)?;
    let purity = purity_profile(&a, tol)?;
    let converged = outcome.diagnostics.converged;
    Ok(Outcome {
        verdict: feasibility_verdict(&outcome.status).into(),
        exit_code: if converged { EXIT_OK } else { EXIT_NUMERICAL },
        checks: CheckSummary {
            no_signalling_deviation: Some(no_signalling_check(&a)),
            max_purity_residual: Some(purity.max_residual_mass()),
            passed: converged,
        },
        result: ScenarioResult::Feasibility(FeasibilityResult {
            settings: labels(&settings),
            candidates,
            outcome,
        }),
    })
}

fn ghz(config: &RunConfig) -> Result<Outcome, CliError> {
    let expectations = ghz_operator_expectations(&ghz_state(), &config.tolerances)?;
    let lhv = ghz_lhv_bruteforce();
    let matches = expectations
        .values
        .iter()
        .zip(GHZ_EIGENVALUES)
        .all(|(v, e)| (v - e as f64).abs() <= config.tolerances.tol_eig);
    let passed = matches && expectations.common_eigenstate && lhv.satisfying_assignments == 0;
    Ok(Outcome {
        verdict: if passed {
            "no_lhv_assignment"
        } else {
            "ghz_check_failed"
        }
        .into(),
        exit_code: if passed { EXIT_OK } else { EXIT_NUMERICAL },
        checks: CheckSummary {
            no_signalling_deviation: None,
            max_purity_residual: None,
            passed,
        },
        result: ScenarioResult::Ghz(GhzResult { expectations, lhv }),
    })
}

fn point_config(config: &RunConfig, base: Scenario, axis: GridAxis, value: f64) -> RunConfig {
    let mut c = config.clone();
    c.scenario = base;
    c.grid = None;
    c.base = None;
    c.output = None;
    match axis {
        GridAxis::Theta => c.theta = Some(value),
        GridAxis::D => {
            c.d = Some(value as usize);
            c.lambdas = None;
        }
        GridAxis::R => c.r = Some(value),
        GridAxis::K => c.k = Some(value as usize),
    }
    c
}

fn sweep(config: &RunConfig) -> Result<Outcome, CliError> {
    let grid = config
        .grid
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep requires --grid".into()))?;
    if grid.values.is_empty() {
        return Err(CliError::Config("sweep grid is empty".into()));
    }
    let base = config.base.unwrap_or_else(|| grid.axis.default_base());
    if base == Scenario::Sweep {
        return Err(CliError::Config("sweeps cannot be nested".into()));
    }
    let points: Vec<SweepPoint> = grid
        .values
        .par_iter()
        .map(|&value| SweepPoint {
            value,
            report: run(&point_config(config, base, grid.axis, value)),
        })
        .collect();

    let magnitudes: Vec<f64> = points
        .iter()
        .filter_map(|p| match &p.report.result {
            ScenarioResult::Paradox(r) => r.certificate.contradiction_magnitude,
            _ => None,
        })
        .collect();
    let ns: Vec<f64> = points
        .iter()
        .filter_map(|p| p.report.checks.no_signalling_deviation)
        .collect();
    let mut exit_code_counts = [0; 3];
    for p in &points {
        exit_code_counts[p.report.exit_code.clamp(0, 2) as usize] += 1;
    }
    let exit_code = points
        .iter()
        .map(|p| p.report.exit_code)
        .max()
        .unwrap_or(EXIT_OK);
    let summary = SweepSummary {
        points: points.len(),
        min_contradiction_magnitude: magnitudes.iter().copied().reduce(f64::min),
        max_contradiction_magnitude: magnitudes.iter().copied().reduce(f64::max),
        max_no_signalling_deviation: ns.iter().copied().reduce(f64::max),
        exit_code_counts,
    };
    Ok(Outcome {
        verdict: if exit_code == EXIT_OK {
            "all_points_passed"
        } else {
            "some_points_failed"
        }
        .into(),
        exit_code,
        checks: CheckSummary {
            no_signalling_deviation: summary.max_no_signalling_deviation,
            max_purity_residual: points
                .iter()
                .filter_map(|p| p.report.checks.max_purity_residual)
                .reduce(f64::max),
            passed: exit_code == EXIT_OK,
        },
        result: ScenarioResult::Sweep(SweepResult {
            axis: grid.axis,
            base,
            points,
            summary,
        }),
    })
}
