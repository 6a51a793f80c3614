use serde::{Deserialize, Serialize};
use steerkit::steering::{FeasibilityOutcome, GhzExpectations, GhzLhvReport, LhsModel, ModelCheck};
use steerkit::{ComplexMatrix, ParadoxCertificate};

use crate::config::{Format, GridAxis, RunConfig, Scenario};
use crate::error::CliError;
use crate::text::flatten;

pub const SCHEMA_VERSION: &str = "steerkit-report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportDocument {
    pub schema: String,
    pub config: RunConfig,
    pub verdict: String,
    pub exit_code: i32,
    pub checks: CheckSummary,
    pub result: ScenarioResult,
    pub duration_seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckSummary {
    pub no_signalling_deviation: Option<f64>,
    /// Largest subdominant eigenvalue mass over non-vacuous conditional states.
    pub max_purity_residual: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScenarioResult {
    Paradox(ParadoxResult),
    SeparableLhs(SeparableLhsResult),
    Feasibility(FeasibilityResult),
    Ghz(GhzResult),
    Sweep(SweepResult),
    Error(ErrorResult),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ParadoxResult {
    pub dims: [usize; 2],
    pub schmidt_coefficients: Vec<f64>,
    /// Discarded Fock-tail weight, NOPA only.
    pub truncation_weight: Option<f64>,
    pub settings: Vec<String>,
    pub certificate: ParadoxCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeparableLhsResult {
    pub settings: Vec<String>,
    pub model: LhsModel,
    pub model_check: ModelCheck,
    pub reconstruction_deviation: f64,
    pub feasibility: FeasibilityOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FeasibilityResult {
    pub settings: Vec<String>,
    pub candidates: Vec<ComplexMatrix>,
    pub outcome: FeasibilityOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GhzResult {
    pub expectations: GhzExpectations,
    pub lhv: GhzLhvReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepResult {
    pub axis: GridAxis,
    pub base: Scenario,
    pub points: Vec<SweepPoint>,
    pub summary: SweepSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepPoint {
    pub value: f64,
    pub report: ReportDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepSummary {
    pub points: usize,
    pub min_contradiction_magnitude: Option<f64>,
    pub max_contradiction_magnitude: Option<f64>,
    pub max_no_signalling_deviation: Option<f64>,
    /// Number of points that ended with exit codes 0, 1 and 2.
    pub exit_code_counts: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ErrorResult {
    pub message: String,
}

impl ReportDocument {
    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        let doc: ReportDocument = serde_json::from_str(s)?;
        if doc.schema != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema `{}`, expected `{SCHEMA_VERSION}`",
                doc.schema
            )));
        }
        Ok(doc)
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => self.to_json(),
            Format::Text => Ok(flatten(&serde_json::to_value(self)?)),
        }
    }
}
