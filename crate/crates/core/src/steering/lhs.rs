//! Local-hidden-state models: explicit construction for product states,
//! reconstruction of the assemblage they predict, and LP feasibility over a
//! fixed set of candidate hidden states.

use serde::{Deserialize, Serialize};

use super::simplex::phase_one;
use crate::assemblage::{validate_density, Assemblage};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Tolerances};
use crate::measurements::{validate_setting, MeasurementSetting};
use crate::states::BipartitePureState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HiddenState {
    pub weight: f64,
    pub state: ComplexMatrix,
}

/// `ρ̃^n_a = Σ_ξ p(a|n,ξ) ℘_ξ ρ_ξ`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LhsModel {
    pub hidden: Vec<HiddenState>,
    /// `responses[ξ][n][a] = p(a|n,ξ)`
    pub responses: Vec<Vec<Vec<f64>>>,
}

/// Deviations from the three model constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelCheck {
    pub min_weight: f64,
    /// `|Σ_ξ ℘_ξ − 1|`
    pub weight_sum_deviation: f64,
    /// `max_{n,ξ} |Σ_a p(a|n,ξ) − 1|`, also covering negative responses.
    pub response_deviation: f64,
    /// `max |Σ_ξ ℘_ξ ρ_ξ − ρ_B|` entrywise.
    pub ensemble_deviation: f64,
    pub passed: bool,
}

impl LhsModel {
    pub fn ensemble_average(&self) -> Option<ComplexMatrix> {
        let d = self.hidden.first()?.state.rows();
        Some(
            self.hidden
                .iter()
                .fold(ComplexMatrix::zeros(d, d), |acc, h| {
                    &acc + &h.state.scale_real(h.weight)
                }),
        )
    }

    pub fn check(&self, bob_reduced: &ComplexMatrix, tol: &Tolerances) -> ModelCheck {
        let min_weight = self
            .hidden
            .iter()
            .map(|h| h.weight)
            .fold(f64::INFINITY, f64::min);
        let weight_sum_deviation = (self.hidden.iter().map(|h| h.weight).sum::<f64>() - 1.0).abs();
        let mut response_deviation: f64 = 0.0;
        for per_setting in &self.responses {
            for probs in per_setting {
                let neg = probs.iter().map(|p| (-p).max(0.0)).fold(0.0, f64::max);
                response_deviation = response_deviation
                    .max((probs.iter().sum::<f64>() - 1.0).abs())
                    .max(neg);
            }
        }
        let ensemble_deviation = self
            .ensemble_average()
            .and_then(|avg| avg.max_abs_diff(bob_reduced).ok())
            .unwrap_or(f64::MAX);
        let passed = !self.hidden.is_empty()
            && self.responses.len() == self.hidden.len()
            && min_weight > 0.0
            && weight_sum_deviation <= tol.tol_lp
            && response_deviation <= tol.tol_lp
            && ensemble_deviation <= tol.tol_lp;
        ModelCheck {
            min_weight,
            weight_sum_deviation,
            response_deviation,
            ensemble_deviation,
            passed,
        }
    }
}

/// One hidden state `|R⟩⟨R|` with responses `p(a|n) = ⟨L|P^n_a|L⟩` for a
/// product state `|L⟩|R⟩`.
pub fn separable_lhs_model(
    psi: &BipartitePureState,
    settings: &[MeasurementSetting],
    tol: &Tolerances,
) -> Result<LhsModel> {
    if psi.is_entangled(tol) {
        return Err(Error::Entangled(
            "a local hidden state model can only be constructed for product states".into(),
        ));
    }
    let (d_a, _) = psi.dims();
    let schmidt = psi.schmidt();
    let left = &schmidt.left[0];
    let right = &schmidt.right[0];
    let mut responses = Vec::with_capacity(settings.len());
    for s in settings {
        check_setting(s, d_a, tol)?;
        let probs = s
            .projectors
            .iter()
            .map(|p| Ok(crate::linalg::inner(left, &p.apply(left)?).re))
            .collect::<Result<Vec<f64>>>()?;
        responses.push(probs);
    }
    Ok(LhsModel {
        hidden: vec![HiddenState {
            weight: 1.0,
            state: ComplexMatrix::projector(right),
        }],
        responses: vec![responses],
    })
}

fn check_setting(s: &MeasurementSetting, d_a: usize, tol: &Tolerances) -> Result<()> {
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
    Ok(())
}

/// Builds the assemblage an LHS model predicts for the given settings.
pub fn lhs_reconstruct(model: &LhsModel, settings: &[MeasurementSetting]) -> Result<Assemblage> {
    let labels: Vec<String> = settings.iter().map(|s| s.label.clone()).collect();
    let counts: Vec<usize> = settings.iter().map(MeasurementSetting::outcomes).collect();
    let d_a = settings.first().map_or(0, MeasurementSetting::dim);
    reconstruct(model, &labels, &counts, d_a)
}

fn reconstruct(
    model: &LhsModel,
    labels: &[String],
    outcome_counts: &[usize],
    d_a: usize,
) -> Result<Assemblage> {
    let bob_reduced = model
        .ensemble_average()
        .ok_or_else(|| Error::InvalidParameter("model has no hidden states".into()))?;
    if model.responses.len() != model.hidden.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} response tables for {} hidden states",
            model.responses.len(),
            model.hidden.len()
        )));
    }
    let d_b = bob_reduced.rows();
    let mut states = Vec::with_capacity(outcome_counts.len());
    for (n, &outcomes) in outcome_counts.iter().enumerate() {
        let mut row = vec![ComplexMatrix::zeros(d_b, d_b); outcomes];
        for (h, table) in model.hidden.iter().zip(&model.responses) {
            let probs = table
                .get(n)
                .filter(|p| p.len() == outcomes)
                .ok_or_else(|| {
                    Error::DimensionMismatch(format!(
                        "no response table of length {outcomes} for setting {n}"
                    ))
                })?;
            for (acc, p) in row.iter_mut().zip(probs) {
                *acc = &*acc + &h.state.scale_real(p * h.weight);
            }
        }
        states.push(row);
    }
    Ok(Assemblage {
        labels: labels.to_vec(),
        states,
        bob_reduced,
        dims: (d_a, d_b),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolverDiagnostics {
    pub iterations: usize,
    /// Phase-1 objective: total shortfall of the vectorized constraints.
    pub residual: f64,
    pub unknowns: usize,
    pub constraints: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "status",
    rename_all = "snake_case",
    rename_all_fields = "camelCase"
)]
pub enum FeasibilityStatus {
    /// A complete LHS certificate for the assemblage.
    FeasibleModelFound {
        model: LhsModel,
        reconstruction_deviation: f64,
    },
    /// Rules out only the supplied candidate ensemble.
    InfeasibleWithinAnsatz { max_residual: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FeasibilityOutcome {
    #[serde(flatten)]
    pub status: FeasibilityStatus,
    pub diagnostics: SolverDiagnostics,
}

impl FeasibilityOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self.status, FeasibilityStatus::FeasibleModelFound { .. })
    }
}

/// Real coordinates of a Hermitian matrix: diagonal, then real and imaginary
/// parts of the strict upper triangle.
pub fn hermitian_components(m: &ComplexMatrix) -> Vec<f64> {
    let d = m.rows();
    let mut out = Vec::with_capacity(d * d);
    out.extend((0..d).map(|i| m[(i, i)].re));
    let upper: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
        .collect();
    out.extend(upper.iter().map(|&(i, j)| m[(i, j)].re));
    out.extend(upper.iter().map(|&(i, j)| m[(i, j)].im));
    out
}

/// Normalized non-vacuous conditional states plus `ρ_B`, without near-duplicates.
pub fn default_candidates(a: &Assemblage, tol: &Tolerances) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = Vec::new();
    let rho_b = a.bob_reduced.scale_real(1.0 / a.bob_reduced.trace().re);
    for s in a.states.iter().flatten().chain(std::iter::once(&rho_b)) {
        let p = s.trace().re;
        if p <= tol.tol_rank1 {
            continue;
        }
        let n = s.scale_real(1.0 / p);
        if !out
            .iter()
            .any(|c| c.max_abs_diff(&n).is_ok_and(|d| d <= tol.tol_state_eq))
        {
            out.push(n);
        }
    }
    out
}

/// Searches for `w_{c,D} ≥ 0` with `ρ̃^n_a = Σ_c Σ_{D: D(n)=a} w_{c,D} ρ_c`,
/// where `D` ranges over deterministic strategies assigning one outcome per
/// setting.
pub fn lhs_feasibility_lp(
    a: &Assemblage,
    candidates: &[ComplexMatrix],
    tol: &Tolerances,
) -> Result<FeasibilityOutcome> {
    if candidates.is_empty() {
        return Err(Error::InvalidParameter(
            "candidate ensemble is empty".into(),
        ));
    }
    let d_b = a.bob_reduced.rows();
    for c in candidates {
        if c.dims() != (d_b, d_b) {
            return Err(Error::DimensionMismatch(format!(
                "candidate is {}x{}, Bob's space has dimension {d_b}",
                c.rows(),
                c.cols()
            )));
        }
        validate_density(c, tol)?;
    }
    let outcome_counts: Vec<usize> = a.states.iter().map(Vec::len).collect();
    let strategies: usize = outcome_counts.iter().product();
    let strategy_outcome = |s: usize, n: usize| -> usize {
        let stride: usize = outcome_counts[..n].iter().product();
        (s / stride) % outcome_counts[n]
    };

    let comp = d_b * d_b;
    let cand_vecs: Vec<Vec<f64>> = candidates.iter().map(hermitian_components).collect();
    let cols = candidates.len() * strategies;
    let rows: usize = outcome_counts.iter().sum::<usize>() * comp;
    let mut matrix = vec![0.0; rows * cols];
    let mut rhs = Vec::with_capacity(rows);
    let mut row = 0;
    for (n, per_setting) in a.states.iter().enumerate() {
        for (outcome, target) in per_setting.iter().enumerate() {
            let target = hermitian_components(target);
            for k in 0..comp {
                for (c, cv) in cand_vecs.iter().enumerate() {
                    for s in 0..strategies {
                        if strategy_outcome(s, n) == outcome {
                            matrix[row * cols + c * strategies + s] = cv[k];
                        }
                    }
                }
                rhs.push(target[k]);
                row += 1;
            }
        }
    }

    let solution = phase_one(&matrix, &rhs, cols);
    let diagnostics = SolverDiagnostics {
        iterations: solution.iterations,
        residual: solution.objective,
        unknowns: cols,
        constraints: rows,
        converged: solution.converged,
    };
    if solution.objective > tol.tol_lp || !solution.converged {
        return Ok(FeasibilityOutcome {
            status: FeasibilityStatus::InfeasibleWithinAnsatz {
                max_residual: solution.objective,
            },
            diagnostics,
        });
    }

    let build = |min_weight: f64| -> LhsModel {
        let mut hidden = Vec::new();
        let mut responses = Vec::new();
        for (c, cand) in candidates.iter().enumerate() {
            let w = &solution.x[c * strategies..(c + 1) * strategies];
            let weight: f64 = w.iter().sum();
            if weight <= min_weight {
                continue;
            }
            let table = outcome_counts
                .iter()
                .enumerate()
                .map(|(n, &k)| {
                    let mut probs = vec![0.0; k];
                    for (s, ws) in w.iter().enumerate() {
                        probs[strategy_outcome(s, n)] += ws / weight;
                    }
                    probs
                })
                .collect();
            hidden.push(HiddenState {
                weight,
                state: cand.clone(),
            });
            responses.push(table);
        }
        LhsModel { hidden, responses }
    };

    let mut best: Option<(LhsModel, f64)> = None;
    for min_weight in [tol.tol_lp, 0.0] {
        let model = build(min_weight);
        let deviation =
            reconstruct(&model, &a.labels, &outcome_counts, a.dims.0)?.max_deviation(a)?;
        if deviation <= tol.tol_lp {
            return Ok(FeasibilityOutcome {
                status: FeasibilityStatus::FeasibleModelFound {
                    model,
                    reconstruction_deviation: deviation,
                },
                diagnostics,
            });
        }
        if best.as_ref().is_none_or(|(_, d)| deviation < *d) {
            best = Some((model, deviation));
        }
    }
    let max_residual = best.map_or(solution.objective, |(_, d)| d);
    Ok(FeasibilityOutcome {
        status: FeasibilityStatus::InfeasibleWithinAnsatz { max_residual },
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemblage::conditional_states;
    use crate::linalg::{real_vector, I, ONE};
    use crate::measurements::{angle_projectors, axis_setting};
    use crate::states::{separable_state, theta_state};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn zx() -> Vec<MeasurementSetting> {
        vec![axis_setting('z').unwrap(), axis_setting('x').unwrap()]
    }

    #[test]
    fn separable_model_angles() {
        let plus = real_vector(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let psi = separable_state(&plus).unwrap();
        let (a1, a2) = (0.3f64, 1.1f64);
        let settings = vec![angle_projectors(a1), angle_projectors(a2)];
        let model = separable_lhs_model(&psi, &settings, &tol()).unwrap();
        assert_eq!(model.hidden.len(), 1);
        assert_eq!(model.hidden[0].weight, 1.0);
        assert!(
            model.hidden[0]
                .state
                .max_abs_diff(&ComplexMatrix::projector(&plus))
                .unwrap()
                < 1e-15
        );
        let r = &model.responses[0];
        let expected = [
            a1.cos().powi(2),
            a1.sin().powi(2),
            a2.cos().powi(2),
            a2.sin().powi(2),
        ];
        for (got, want) in r.iter().flatten().zip(expected) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn separable_model_z_x_responses() {
        let beta = vec![ONE * 0.6, I * 0.8];
        let psi = separable_state(&beta).unwrap();
        let model = separable_lhs_model(&psi, &zx(), &tol()).unwrap();
        let r: Vec<f64> = model.responses[0].iter().flatten().copied().collect();
        for (got, want) in r.iter().zip([1.0, 0.0, 0.5, 0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
        let direct = conditional_states(&psi.density(), &zx(), (2, 2), &tol()).unwrap();
        let rebuilt = lhs_reconstruct(&model, &zx()).unwrap();
        assert!(rebuilt.max_deviation(&direct).unwrap() < 1e-15);
        assert!(model.check(&direct.bob_reduced, &tol()).passed);
    }

    #[test]
    fn separable_model_rejects_entangled() {
        let psi = theta_state(0.5).unwrap();
        assert!(matches!(
            separable_lhs_model(&psi, &zx(), &tol()),
            Err(Error::Entangled(_))
        ));
    }

    #[test]
    fn reconstruct_two_hidden_states() {
        let p0 = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_diag(&[0.0, 1.0]);
        let model = LhsModel {
            hidden: vec![
                HiddenState {
                    weight: 0.5,
                    state: p0.clone(),
                },
                HiddenState {
                    weight: 0.5,
                    state: p1,
                },
            ],
            // p(a|n,ξ) = δ_{a,ξ}
            responses: vec![vec![vec![1.0, 0.0]; 2], vec![vec![0.0, 1.0]; 2]],
        };
        let a = lhs_reconstruct(&model, &zx()).unwrap();
        for n in 0..2 {
            assert!(a.states[n][0].max_abs_diff(&p0.scale_real(0.5)).unwrap() < 1e-15);
        }
        assert!(crate::assemblage::no_signalling_check(&a) < 1e-15);
    }

    #[test]
    fn reconstruct_rejects_short_tables() {
        let model = LhsModel {
            hidden: vec![HiddenState {
                weight: 1.0,
                state: ComplexMatrix::identity(2).scale_real(0.5),
            }],
            responses: vec![vec![vec![1.0, 0.0]]],
        };
        assert!(lhs_reconstruct(&model, &zx()).is_err());
    }

    #[test]
    fn hermitian_vectorization_layout() {
        let mut m =
            ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 5.0], &[3.0, 5.0, 6.0]]);
        m[(0, 1)] += I * 0.5;
        m[(1, 0)] -= I * 0.5;
        let v = hermitian_components(&m);
        assert_eq!(v, vec![1.0, 4.0, 6.0, 2.0, 3.0, 5.0, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn lp_separable_single_candidate() {
        let beta = real_vector(&[0.3f64.cos(), 0.3f64.sin()]);
        let psi = separable_state(&beta).unwrap();
        let settings = vec![angle_projectors(0.4), angle_projectors(1.3)];
        let a = conditional_states(&psi.density(), &settings, (2, 2), &tol()).unwrap();
        let out = lhs_feasibility_lp(&a, &[ComplexMatrix::projector(&beta)], &tol()).unwrap();
        let FeasibilityStatus::FeasibleModelFound { model, .. } = out.status else {
            panic!("expected feasible, got {out:?}")
        };
        let explicit = separable_lhs_model(&psi, &settings, &tol()).unwrap();
        for (x, y) in model.responses[0]
            .iter()
            .flatten()
            .zip(explicit.responses[0].iter().flatten())
        {
            assert!((x - y).abs() < 1e-10);
        }
        assert!(model.check(&a.bob_reduced, &tol()).passed);
    }

    #[test]
    fn lp_uncorrelated_assemblage() {
        let rho_b = ComplexMatrix::from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]]);
        let half = rho_b.scale_real(0.5);
        let a = Assemblage {
            labels: vec!["z".into(), "x".into()],
            states: vec![vec![half.clone(), half.clone()], vec![half.clone(), half]],
            bob_reduced: rho_b.clone(),
            dims: (2, 2),
        };
        let out = lhs_feasibility_lp(&a, &[rho_b], &tol()).unwrap();
        let FeasibilityStatus::FeasibleModelFound { model, .. } = out.status else {
            panic!("expected feasible")
        };
        for p in model.responses[0].iter().flatten() {
            assert!((p - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn lp_entangled_is_infeasible_within_ansatz() {
        let psi = theta_state(std::f64::consts::FRAC_PI_4).unwrap();
        let a = conditional_states(&psi.density(), &zx(), (2, 2), &tol()).unwrap();
        let out = lhs_feasibility_lp(&a, &default_candidates(&a, &tol()), &tol()).unwrap();
        assert!(!out.is_feasible());
        assert!(out.diagnostics.residual > 0.01);
    }

    #[test]
    fn lp_rejects_bad_candidates() {
        let psi = theta_state(0.3).unwrap();
        let a = conditional_states(&psi.density(), &zx(), (2, 2), &tol()).unwrap();
        assert!(lhs_feasibility_lp(&a, &[], &tol()).is_err());
        assert!(matches!(
            lhs_feasibility_lp(
                &a,
                &[ComplexMatrix::identity(3).scale_real(1.0 / 3.0)],
                &tol()
            ),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn default_candidates_dedupe() {
        let beta = real_vector(&[0.6, 0.8]);
        let psi = separable_state(&beta).unwrap();
        let a = conditional_states(&psi.density(), &zx(), (2, 2), &tol()).unwrap();
        // outcome z=1 is vacuous; everything else equals |β⟩⟨β|
        assert_eq!(default_candidates(&a, &tol()).len(), 1);
    }
}
