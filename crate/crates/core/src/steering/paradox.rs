//! The trace-sum contradiction for pure entangled states.
//!
//! Every non-vacuous conditional state of a pure entangled state is rank one,
//! so in any LHS decomposition `ρ̃^n_a = Σ_ξ p(a|n,ξ) ℘_ξ ρ_ξ` it can only be
//! built from a single hidden state, with response probability one. With the
//! conditional states pairwise distinct, each `(n, a)` consumes its own hidden
//! state. Summing the traces over all `k` settings gives `k`, while the
//! ensemble constraint `Σ_ξ ℘_ξ ρ_ξ = ρ_B` forces the same sum to equal 1.

use serde::{Deserialize, Serialize};

use crate::assemblage::{conditional_states, no_signalling_check, purity_profile, PurityProfile};
use crate::error::{Error, Result};
use crate::linalg::Tolerances;
use crate::measurements::{validate_setting, MeasurementSetting};
use crate::states::BipartitePureState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// `k = 1` contradiction established.
    Contradiction,
    /// Product input; the argument does not apply.
    Separable,
    /// Two non-vacuous conditional states coincide.
    DegenerateSettingGeometry,
    /// An identity guaranteed for pure entangled states failed numerically.
    NumericalFailure,
}

/// Hidden state `ξ` forced by the rank-one conditional state `ρ̃^n_a = ℘_ξ ρ_ξ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CollapsedAssignment {
    pub setting: usize,
    pub outcome: usize,
    pub hidden_index: usize,
    /// `℘_ξ = tr ρ̃^n_a`
    pub weight: f64,
    /// `p(a|n,ξ)`, always 1 after the collapse.
    pub forced_response: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ParadoxCertificate {
    pub applicable: bool,
    pub verdict: Verdict,
    pub reason: String,
    pub k: usize,
    /// More than two settings: the two-setting collapse applied verbatim.
    pub k_setting_extension: bool,
    /// `Σ_{n,a} tr ρ̃^n_a`, equal to `k`.
    pub lhs_trace_sum: Option<f64>,
    /// `tr ρ_B`, equal to 1.
    pub quantum_trace_sum: Option<f64>,
    /// `lhs_trace_sum − quantum_trace_sum`, equal to `k − 1`.
    pub contradiction_magnitude: Option<f64>,
    pub no_signalling_deviation: Option<f64>,
    pub purity: Option<PurityProfile>,
    pub collapsed: Vec<CollapsedAssignment>,
    pub tolerances: Tolerances,
}

impl ParadoxCertificate {
    fn not_applicable(
        verdict: Verdict,
        reason: impl Into<String>,
        k: usize,
        tol: &Tolerances,
    ) -> Self {
        ParadoxCertificate {
            applicable: false,
            verdict,
            reason: reason.into(),
            k,
            k_setting_extension: k > 2,
            lhs_trace_sum: None,
            quantum_trace_sum: None,
            contradiction_magnitude: None,
            no_signalling_deviation: None,
            purity: None,
            collapsed: Vec::new(),
            tolerances: *tol,
        }
    }
}

/// Runs the collapse argument on `psi` under `settings` and reports the
/// resulting trace-sum mismatch.
pub fn pure_state_paradox(
    psi: &BipartitePureState,
    settings: &[MeasurementSetting],
    tol: &Tolerances,
) -> Result<ParadoxCertificate> {
    tol.validate()?;
    let k = settings.len();
    if k < 2 {
        return Err(Error::TooFewSettings {
            required: 2,
            got: k,
        });
    }
    let (d_a, d_b) = psi.dims();
    for s in settings {
        if s.dim() != d_a {
            return Err(Error::DimensionMismatch(format!(
                "setting `{}` acts on dimension {}, Alice has {d_a}",
                s.label,
                s.dim()
            )));
        }
        let report = validate_setting(s, tol);
        if !report.passed {
            return Err(Error::InvalidSetting {
                label: s.label.clone(),
                report,
            });
        }
    }
    for (i, s) in settings.iter().enumerate() {
        for t in &settings[i + 1..] {
            if s.coincides_with(t, tol.tol_state_eq) {
                return Err(Error::CoincidentSettings {
                    first: s.label.clone(),
                    second: t.label.clone(),
                });
            }
        }
    }

    if !psi.is_entangled(tol) {
        return Ok(ParadoxCertificate::not_applicable(
            Verdict::Separable,
            "separable: paradox not applicable",
            k,
            tol,
        ));
    }

    let assemblage = conditional_states(&psi.density(), settings, (d_a, d_b), tol)?;
    let ns = no_signalling_check(&assemblage);
    let purity = purity_profile(&assemblage, tol)?;

    let mut cert = ParadoxCertificate::not_applicable(Verdict::NumericalFailure, "", k, tol);
    cert.no_signalling_deviation = Some(ns);

    if ns > tol.tol_eig {
        cert.reason = format!("no-signalling deviation {ns:e} exceeds tol_eig");
        cert.purity = Some(purity);
        return Ok(cert);
    }
    let impure = purity.nonvacuous().find(|o| !o.rank_one).map(|bad| {
        format!(
            "conditional state (setting {}, outcome {}) is not rank one: residual mass {:e}",
            bad.setting, bad.outcome, bad.residual_mass
        )
    });
    if let Some(reason) = impure {
        cert.reason = reason;
        cert.purity = Some(purity);
        return Ok(cert);
    }
    let coincident = purity.coincident_pairs(tol.tol_state_eq);
    if let Some(((n1, a1), (n2, a2))) = coincident.first() {
        cert.verdict = Verdict::DegenerateSettingGeometry;
        cert.reason = format!(
            "degenerate setting geometry: conditional states ({n1},{a1}) and ({n2},{a2}) coincide \
             ({} coincident pairs)",
            coincident.len()
        );
        cert.purity = Some(purity);
        return Ok(cert);
    }

    // Lexicographic (setting, outcome) order fixes the hidden-state labels.
    let collapsed: Vec<CollapsedAssignment> = purity
        .nonvacuous()
        .enumerate()
        .map(|(xi, o)| CollapsedAssignment {
            setting: o.setting,
            outcome: o.outcome,
            hidden_index: xi,
            weight: o.probability,
            forced_response: 1.0,
        })
        .collect();
    let lhs: f64 = assemblage
        .states
        .iter()
        .flatten()
        .map(|s| s.trace().re)
        .sum();
    let quantum = assemblage.bob_reduced.trace().re;

    cert.lhs_trace_sum = Some(lhs);
    cert.quantum_trace_sum = Some(quantum);
    cert.contradiction_magnitude = Some(lhs - quantum);
    cert.purity = Some(purity);
    cert.collapsed = collapsed;

    let kf = k as f64;
    if (lhs - kf).abs() > tol.tol_lp || (quantum - 1.0).abs() > tol.tol_lp {
        cert.reason = format!("trace sums {lhs} vs {quantum} deviate from {k} vs 1");
        return Ok(cert);
    }
    cert.applicable = true;
    cert.verdict = Verdict::Contradiction;
    cert.reason = format!("{k} = 1");
    Ok(cert)
}
