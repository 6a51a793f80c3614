//! Bob's conditional-state assemblage `ρ̃^n_a = tr_A[(P^n_a ⊗ 𝟙) ρ_AB]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, is_rank_one, kron, partial_trace, trace_distance, ComplexMatrix, Subsystem,
    Tolerances,
};
use crate::measurements::{validate_setting, MeasurementSetting};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Assemblage {
    pub labels: Vec<String>,
    /// `states[n][a]`: unnormalized conditional state for setting `n`, outcome `a`.
    pub states: Vec<Vec<ComplexMatrix>>,
    pub bob_reduced: ComplexMatrix,
    pub dims: (usize, usize),
}

impl Assemblage {
    pub fn settings(&self) -> usize {
        self.states.len()
    }

    /// `tr ρ̃^n_a` for every setting and outcome.
    pub fn probabilities(&self) -> Vec<Vec<f64>> {
        self.states
            .iter()
            .map(|row| row.iter().map(|s| s.trace().re).collect())
            .collect()
    }

    /// Largest entrywise deviation between two assemblages of the same shape.
    pub fn max_deviation(&self, other: &Assemblage) -> Result<f64> {
        if self.states.len() != other.states.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} settings vs {}",
                self.states.len(),
                other.states.len()
            )));
        }
        let mut dev = self.bob_reduced.max_abs_diff(&other.bob_reduced)?;
        for (r1, r2) in self.states.iter().zip(&other.states) {
            if r1.len() != r2.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} outcomes vs {}",
                    r1.len(),
                    r2.len()
                )));
            }
            for (a, b) in r1.iter().zip(r2) {
                dev = dev.max(a.max_abs_diff(b)?);
            }
        }
        Ok(dev)
    }
}

/// Checks that `rho` is a Hermitian, unit-trace, positive semidefinite operator.
pub fn validate_density(rho: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    rho.ensure_hermitian(tol.tol_herm)?;
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > tol.tol_eig {
        return Err(Error::InvalidParameter(format!(
            "density matrix has trace {tr}, expected 1"
        )));
    }
    let eig = hermitian_eig(rho, tol.tol_herm)?;
    let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -tol.tol_eig {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// Computes the assemblage of `rho_ab` under Alice's settings.
pub fn conditional_states(
    rho_ab: &ComplexMatrix,
    settings: &[MeasurementSetting],
    dims: (usize, usize),
    tol: &Tolerances,
) -> Result<Assemblage> {
    let (d_a, d_b) = dims;
    if rho_ab.dims() != (d_a * d_b, d_a * d_b) {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{} but dims ({d_a}, {d_b}) need {}x{}",
            rho_ab.rows(),
            rho_ab.cols(),
            d_a * d_b,
            d_a * d_b
        )));
    }
    validate_density(rho_ab, tol)?;
    let id_b = ComplexMatrix::identity(d_b);
    let mut states = Vec::with_capacity(settings.len());
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
        let row = s
            .projectors
            .iter()
            .map(|p| {
                let lifted = kron(p, &id_b);
                partial_trace(&(&lifted * rho_ab), d_a, d_b, Subsystem::B)
            })
            .collect::<Result<Vec<_>>>()?;
        states.push(row);
    }
    Ok(Assemblage {
        labels: settings.iter().map(|s| s.label.clone()).collect(),
        states,
        bob_reduced: partial_trace(rho_ab, d_a, d_b, Subsystem::B)?,
        dims,
    })
}

/// `max_n ‖Σ_a ρ̃^n_a − ρ_B‖` (entrywise maximum).
pub fn no_signalling_check(a: &Assemblage) -> f64 {
    a.states
        .iter()
        .map(|row| {
            let d = a.bob_reduced.rows();
            let sum = row
                .iter()
                .fold(ComplexMatrix::zeros(d, d), |acc, s| &acc + s);
            sum.max_abs_diff(&a.bob_reduced).unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OutcomeProfile {
    pub setting: usize,
    pub outcome: usize,
    pub probability: f64,
    /// Probability at or below `tol_rank1`; excluded from rank and distinctness tests.
    pub vacuous: bool,
    pub rank_one: bool,
    pub residual_mass: f64,
    pub principal: Option<Vec<Complex64>>,
    pub normalized: Option<ComplexMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PurityProfile {
    /// `outcomes[n][a]`
    pub outcomes: Vec<Vec<OutcomeProfile>>,
    /// `(setting, outcome)` for each row/column of `distances`; vacuous outcomes are omitted.
    pub distance_index: Vec<(usize, usize)>,
    /// Pairwise trace distances between normalized non-vacuous conditional states.
    pub distances: Vec<Vec<f64>>,
}

impl PurityProfile {
    pub fn all_rank_one(&self) -> bool {
        self.nonvacuous().all(|o| o.rank_one)
    }

    pub fn max_residual_mass(&self) -> f64 {
        self.nonvacuous()
            .map(|o| o.residual_mass)
            .fold(0.0, f64::max)
    }

    pub fn min_pairwise_distance(&self) -> Option<f64> {
        let n = self.distances.len();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| self.distances[i][j])
            .reduce(f64::min)
    }

    /// Index pairs into `distance_index` whose states are closer than `threshold`.
    pub fn coincident_pairs(&self, threshold: f64) -> Vec<((usize, usize), (usize, usize))> {
        let n = self.distances.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.distances[i][j] <= threshold {
                    out.push((self.distance_index[i], self.distance_index[j]));
                }
            }
        }
        out
    }

    pub fn nonvacuous(&self) -> impl Iterator<Item = &OutcomeProfile> {
        self.outcomes.iter().flatten().filter(|o| !o.vacuous)
    }
}

/// Rank-one flags, outcome probabilities and pairwise distances of the
/// normalized conditional states.
pub fn purity_profile(a: &Assemblage, tol: &Tolerances) -> Result<PurityProfile> {
    let mut outcomes = Vec::with_capacity(a.states.len());
    for (n, row) in a.states.iter().enumerate() {
        let mut profiles = Vec::with_capacity(row.len());
        for (k, state) in row.iter().enumerate() {
            let probability = state.trace().re;
            if probability <= tol.tol_rank1 {
                profiles.push(OutcomeProfile {
                    setting: n,
                    outcome: k,
                    probability,
                    vacuous: true,
                    rank_one: false,
                    residual_mass: 0.0,
                    principal: None,
                    normalized: None,
                });
                continue;
            }
            let normalized = state.scale_real(1.0 / probability);
            let check = is_rank_one(&normalized, tol)?;
            profiles.push(OutcomeProfile {
                setting: n,
                outcome: k,
                probability,
                vacuous: false,
                rank_one: check.rank_one,
                residual_mass: check.residual_mass,
                principal: Some(check.principal),
                normalized: Some(normalized),
            });
        }
        outcomes.push(profiles);
    }

    let live: Vec<&OutcomeProfile> = outcomes.iter().flatten().filter(|o| !o.vacuous).collect();
    let mut distances = vec![vec![0.0; live.len()]; live.len()];
    for i in 0..live.len() {
        for j in (i + 1)..live.len() {
            let (Some(p), Some(q)) = (&live[i].normalized, &live[j].normalized) else {
                unreachable!("non-vacuous outcomes carry a normalized state")
            };
            let d = trace_distance(p, q, tol)?;
            distances[i][j] = d;
            distances[j][i] = d;
        }
    }
    Ok(PurityProfile {
        distance_index: live.iter().map(|o| (o.setting, o.outcome)).collect(),
        outcomes,
        distances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{real_vector, ONE};
    use crate::measurements::{
        angle_projectors, axis_setting, computational_basis, fourier_mub_basis,
    };
    use crate::states::{qudit_schmidt_state, separable_state, theta_state};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn zx() -> Vec<MeasurementSetting> {
        vec![axis_setting('z').unwrap(), axis_setting('x').unwrap()]
    }

    #[test]
    fn theta_state_closed_forms() {
        let theta = 0.4;
        let psi = theta_state(theta).unwrap();
        let a = conditional_states(&psi.density(), &zx(), (2, 2), &tol()).unwrap();
        let (s, c) = theta.sin_cos();
        let chi_p = real_vector(&[c, s]);
        let chi_m = real_vector(&[c, -s]);
        let expected = [
            ComplexMatrix::from_diag(&[c * c, 0.0]),
            ComplexMatrix::from_diag(&[0.0, s * s]),
            ComplexMatrix::projector(&chi_p).scale_real(0.5),
            ComplexMatrix::projector(&chi_m).scale_real(0.5),
        ];
        let got: Vec<&ComplexMatrix> = a.states.iter().flatten().collect();
        for (g, e) in got.iter().zip(&expected) {
            assert!(g.max_abs_diff(e).unwrap() < 1e-15);
        }
        let p = a.probabilities();
        assert!((p[0][0] - c * c).abs() < 1e-15 && (p[1][0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn separable_conditionals_proportional_to_beta() {
        let beta = real_vector(&[0.6, 0.8]);
        let (a1, a2) = (0.3f64, 1.1f64);
        let psi = separable_state(&beta).unwrap();
        let settings = vec![angle_projectors(a1), angle_projectors(a2)];
        let a = conditional_states(&psi.density(), &settings, (2, 2), &tol()).unwrap();
        let bb = ComplexMatrix::projector(&beta);
        let weights = [
            a1.cos().powi(2),
            a1.sin().powi(2),
            a2.cos().powi(2),
            a2.sin().powi(2),
        ];
        for (g, w) in a.states.iter().flatten().zip(weights) {
            assert!(g.max_abs_diff(&bb.scale_real(w)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn qudit_z_conditionals() {
        let lambdas = [0.2f64, 0.4, 0.8, 0.4];
        let norm = lambdas.iter().map(|l| l * l).sum::<f64>().sqrt();
        let lambdas: Vec<f64> = lambdas.iter().map(|l| l / norm).collect();
        let psi = qudit_schmidt_state(&lambdas).unwrap();
        let settings = vec![
            computational_basis(4).unwrap(),
            fourier_mub_basis(4).unwrap(),
        ];
        let a = conditional_states(&psi.density(), &settings, (4, 4), &tol()).unwrap();
        for (m, s) in a.states[0].iter().enumerate() {
            assert!((s.trace().re - lambdas[m].powi(2)).abs() < 1e-15);
            let mut e = ComplexMatrix::zeros(4, 4);
            e[(m, m)] = ONE;
            assert!(s.scale_real(1.0 / s.trace().re).max_abs_diff(&e).unwrap() < 1e-14);
        }
    }

    #[test]
    fn no_signalling_examples() {
        let psi = theta_state(0.9).unwrap();
        let mut a = conditional_states(&psi.density(), &zx(), (2, 2), &tol()).unwrap();
        assert!(no_signalling_check(&a) <= 1e-12);
        a.states[1][0][(0, 0)] += 0.01;
        assert!(no_signalling_check(&a) >= 0.01 - 1e-15);

        let d = 5;
        let u = 1.0 / (d as f64).sqrt();
        let q = qudit_schmidt_state(&vec![u; d]).unwrap();
        let settings = vec![
            computational_basis(d).unwrap(),
            fourier_mub_basis(d).unwrap(),
        ];
        let a = conditional_states(&q.density(), &settings, (d, d), &tol()).unwrap();
        assert!(no_signalling_check(&a) <= 1e-12);
    }

    #[test]
    fn purity_profile_maximally_entangled() {
        let psi = theta_state(PI / 4.0).unwrap();
        let a = conditional_states(&psi.density(), &zx(), (2, 2), &tol()).unwrap();
        let p = purity_profile(&a, &tol()).unwrap();
        assert!(p.all_rank_one());
        // |0⟩,|1⟩ vs |±⟩: distance 1/√2; |0⟩ vs |1⟩ and |+⟩ vs |−⟩: distance 1.
        assert!((p.min_pairwise_distance().unwrap() - FRAC_1_SQRT_2).abs() < 1e-14);
        assert!((p.distances[0][1] - 1.0).abs() < 1e-14);
        assert!((p.distances[2][3] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn purity_profile_separable_all_equal() {
        let beta = real_vector(&[0.6, 0.8]);
        let psi = separable_state(&beta).unwrap();
        let settings = vec![angle_projectors(0.3), angle_projectors(1.1)];
        let a = conditional_states(&psi.density(), &settings, (2, 2), &tol()).unwrap();
        let p = purity_profile(&a, &tol()).unwrap();
        assert!(p.all_rank_one());
        assert!(p.distances.iter().flatten().all(|&d| d < 1e-14));
        assert_eq!(p.coincident_pairs(1e-9).len(), 6);
    }

    #[test]
    fn purity_profile_werner_like_is_mixed() {
        let pure = theta_state(PI / 4.0).unwrap().density();
        let rho = &pure.scale_real(0.5) + &ComplexMatrix::identity(4).scale_real(0.125);
        let a = conditional_states(&rho, &zx(), (2, 2), &tol()).unwrap();
        let p = purity_profile(&a, &tol()).unwrap();
        // Each conditional is ¼|s⟩⟨s| + ⅛𝟙: eigenvalues (3/8, 1/8), trace 1/2, residual 1/4.
        for o in p.outcomes.iter().flatten() {
            assert!(!o.rank_one);
            assert!((o.residual_mass - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn vacuous_outcomes_are_flagged() {
        let psi = theta_state(0.0).unwrap();
        let a = conditional_states(&psi.density(), &zx(), (2, 2), &tol()).unwrap();
        let p = purity_profile(&a, &tol()).unwrap();
        assert!(p.outcomes[0][1].vacuous);
        assert_eq!(p.distance_index.len(), 3);
    }

    #[test]
    fn rejects_bad_inputs() {
        let psi = theta_state(0.3).unwrap();
        assert!(matches!(
            conditional_states(&psi.density(), &zx(), (2, 3), &tol()),
            Err(Error::DimensionMismatch(_))
        ));
        let p0 = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let bad = MeasurementSetting::from_projectors("bad", vec![p0.clone(), p0]);
        assert!(matches!(
            conditional_states(&psi.density(), &[bad], (2, 2), &tol()),
            Err(Error::InvalidSetting { .. })
        ));
        let q3 = vec![computational_basis(3).unwrap()];
        assert!(conditional_states(&psi.density(), &q3, (2, 2), &tol()).is_err());
        let not_density = ComplexMatrix::identity(4);
        assert!(conditional_states(&not_density, &zx(), (2, 2), &tol()).is_err());
    }
}
