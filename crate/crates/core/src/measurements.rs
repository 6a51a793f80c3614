//! Projective measurement settings on Alice's side.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    basis_vector, pauli_x, pauli_y, pauli_z, real_vector, ComplexMatrix, Tolerances,
};

/// A complete set of orthogonal rank-one projectors; outcome `a` is the index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MeasurementSetting {
    pub label: String,
    pub projectors: Vec<ComplexMatrix>,
}

/// Maximum deviations from the projective-measurement axioms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SettingReport {
    pub hermiticity: f64,
    pub idempotence: f64,
    /// `max |tr P − 1|`
    pub rank: f64,
    pub orthogonality: f64,
    pub completeness: f64,
    pub passed: bool,
}

impl fmt::Display for SettingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hermiticity {:e}, idempotence {:e}, rank {:e}, orthogonality {:e}, completeness {:e}",
            self.hermiticity, self.idempotence, self.rank, self.orthogonality, self.completeness
        )
    }
}

impl MeasurementSetting {
    /// Wraps projectors without validation; see [`validate_setting`].
    pub fn from_projectors(label: impl Into<String>, projectors: Vec<ComplexMatrix>) -> Self {
        MeasurementSetting {
            label: label.into(),
            projectors,
        }
    }

    /// Projectors onto the columns of `unitary`.
    pub fn from_unitary(label: impl Into<String>, unitary: &ComplexMatrix) -> Result<Self> {
        if !unitary.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "basis matrix must be square, got {}x{}",
                unitary.rows(),
                unitary.cols()
            )));
        }
        let projectors = (0..unitary.cols())
            .map(|j| ComplexMatrix::projector(&unitary.column(j)))
            .collect();
        Ok(Self::from_projectors(label, projectors))
    }

    /// Dimension of the measured system.
    pub fn dim(&self) -> usize {
        self.projectors.first().map_or(0, ComplexMatrix::rows)
    }

    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }

    /// True when both settings contain the same projectors up to outcome
    /// relabeling, comparing entrywise within `tol`.
    pub fn coincides_with(&self, other: &MeasurementSetting, tol: f64) -> bool {
        if self.outcomes() != other.outcomes() || self.dim() != other.dim() {
            return false;
        }
        let mut used = vec![false; other.outcomes()];
        self.projectors.iter().all(|p| {
            let hit = other
                .projectors
                .iter()
                .enumerate()
                .find(|(j, q)| !used[*j] && p.max_abs_diff(q).is_ok_and(|d| d <= tol));
            match hit {
                Some((j, _)) => {
                    used[j] = true;
                    true
                }
                None => false,
            }
        })
    }
}

/// `P_a = (𝟙 + (−1)^a n·σ)/2` for a unit Bloch vector `n`.
pub fn bloch_projectors(n: [f64; 3], tol: &Tolerances) -> Result<MeasurementSetting> {
    let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > tol.tol_eig {
        return Err(Error::NotNormalized { norm });
    }
    let n_sigma =
        &(&pauli_x().scale_real(n[0]) + &pauli_y().scale_real(n[1])) + &pauli_z().scale_real(n[2]);
    let id = ComplexMatrix::identity(2);
    Ok(MeasurementSetting::from_projectors(
        format!("bloch({},{},{})", n[0], n[1], n[2]),
        vec![
            (&id + &n_sigma).scale_real(0.5),
            (&id - &n_sigma).scale_real(0.5),
        ],
    ))
}

/// Named Bloch settings used throughout: `z`, `x`, `y`.
pub fn axis_setting(axis: char) -> Result<MeasurementSetting> {
    let n = match axis {
        'x' => [1.0, 0.0, 0.0],
        'y' => [0.0, 1.0, 0.0],
        'z' => [0.0, 0.0, 1.0],
        other => return Err(Error::InvalidParameter(format!("unknown axis `{other}`"))),
    };
    let mut s = bloch_projectors(n, &Tolerances::default())?;
    s.label = axis.to_string();
    Ok(s)
}

/// Projectors onto `cos α|0⟩ + sin α|1⟩` and `sin α|0⟩ − cos α|1⟩`.
pub fn angle_projectors(alpha: f64) -> MeasurementSetting {
    let (s, c) = alpha.sin_cos();
    MeasurementSetting::from_projectors(
        format!("angle({alpha})"),
        vec![
            ComplexMatrix::projector(&real_vector(&[c, s])),
            ComplexMatrix::projector(&real_vector(&[s, -c])),
        ],
    )
}

/// `{|m⟩⟨m|}` for `m = 0..d`.
pub fn computational_basis(d: usize) -> Result<MeasurementSetting> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "basis dimension must be >= 2, got {d}"
        )));
    }
    Ok(MeasurementSetting::from_projectors(
        "Z",
        (0..d)
            .map(|m| ComplexMatrix::projector(&basis_vector(d, m)))
            .collect(),
    ))
}

/// Discrete Fourier basis `|m'⟩ = d^{-1/2} Σ_k ω^{k m'} |k⟩`, `ω = e^{2πi/d}`,
/// mutually unbiased with the computational basis.
pub fn fourier_mub_basis(d: usize) -> Result<MeasurementSetting> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "basis dimension must be >= 2, got {d}"
        )));
    }
    let amp = 1.0 / (d as f64).sqrt();
    let projectors = (0..d)
        .map(|mp| {
            let v: Vec<Complex64> = (0..d)
                .map(|k| {
                    // reduce k·m' mod d before taking the phase
                    let phase = 2.0 * PI * ((k * mp) % d) as f64 / d as f64;
                    Complex64::from_polar(amp, phase)
                })
                .collect();
            ComplexMatrix::projector(&v)
        })
        .collect();
    Ok(MeasurementSetting::from_projectors("X", projectors))
}

/// Checks hermiticity, idempotence, unit rank, mutual orthogonality and completeness.
pub fn validate_setting(s: &MeasurementSetting, tol: &Tolerances) -> SettingReport {
    let d = s.dim();
    let shape_ok = d > 0 && s.projectors.iter().all(|p| p.dims() == (d, d));
    if !shape_ok {
        return SettingReport {
            hermiticity: f64::INFINITY,
            idempotence: f64::INFINITY,
            rank: f64::INFINITY,
            orthogonality: f64::INFINITY,
            completeness: f64::INFINITY,
            passed: false,
        };
    }
    let mut hermiticity: f64 = 0.0;
    let mut idempotence: f64 = 0.0;
    let mut rank: f64 = 0.0;
    let mut orthogonality: f64 = 0.0;
    let mut total = ComplexMatrix::zeros(d, d);
    for (a, p) in s.projectors.iter().enumerate() {
        hermiticity = hermiticity.max(p.hermiticity_deviation());
        idempotence = idempotence.max((&(p * p) - p).max_abs());
        rank = rank.max((p.trace() - 1.0).norm());
        for q in &s.projectors[a + 1..] {
            orthogonality = orthogonality.max((p * q).max_abs());
        }
        total = &total + p;
    }
    let completeness = (&total - &ComplexMatrix::identity(d)).max_abs();
    let passed = [hermiticity, idempotence, rank, orthogonality, completeness]
        .iter()
        .all(|&x| x <= tol.tol_eig);
    SettingReport {
        hermiticity,
        idempotence,
        rank,
        orthogonality,
        completeness,
        passed,
    }
}
