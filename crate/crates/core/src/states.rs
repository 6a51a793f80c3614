//! Pure-state constructors: Schmidt-form qubit and qudit pairs, truncated
//! two-mode squeezed vacuum, product states and the three-qubit GHZ state.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    basis_vector, kron_vec, schmidt_decompose, vector_norm, ComplexMatrix, SchmidtDecomposition,
    Tolerances, ZERO,
};

/// A normalized pure state on `C^dA ⊗ C^dB` with its Schmidt data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRecord", into = "StateRecord")]
pub struct BipartitePureState {
    vector: Vec<Complex64>,
    d_a: usize,
    d_b: usize,
    schmidt: SchmidtDecomposition,
}

/// Wire form: dims plus amplitudes as `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct StateRecord {
    dims: [usize; 2],
    amplitudes: Vec<Complex64>,
}

impl TryFrom<StateRecord> for BipartitePureState {
    type Error = Error;

    fn try_from(r: StateRecord) -> Result<Self> {
        BipartitePureState::new(r.amplitudes, r.dims[0], r.dims[1], &Tolerances::default())
    }
}

impl From<BipartitePureState> for StateRecord {
    fn from(s: BipartitePureState) -> Self {
        StateRecord {
            dims: [s.d_a, s.d_b],
            amplitudes: s.vector,
        }
    }
}

impl BipartitePureState {
    pub fn new(vector: Vec<Complex64>, d_a: usize, d_b: usize, tol: &Tolerances) -> Result<Self> {
        let schmidt = schmidt_decompose(&vector, d_a, d_b, tol)?;
        Ok(BipartitePureState {
            vector,
            d_a,
            d_b,
            schmidt,
        })
    }

    pub fn vector(&self) -> &[Complex64] {
        &self.vector
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_a, self.d_b)
    }

    pub fn schmidt(&self) -> &SchmidtDecomposition {
        &self.schmidt
    }

    /// Schmidt rank above `tol_rank1`, i.e. second coefficient is significant.
    pub fn is_entangled(&self, tol: &Tolerances) -> bool {
        self.schmidt
            .coeffs
            .get(1)
            .is_some_and(|&c| c > tol.tol_rank1)
    }

    pub fn density(&self) -> ComplexMatrix {
        density(&self.vector)
    }
}

/// A normalized `n`-qubit pure state; qubit 1 is the most significant bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MultiQubitPureState {
    vector: Vec<Complex64>,
    n_qubits: usize,
}

impl MultiQubitPureState {
    pub fn new(vector: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        let len = vector.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "multi-qubit state needs a power-of-two length, got {len}"
            )));
        }
        let norm = vector_norm(&vector);
        if (norm - 1.0).abs() > tol.tol_eig {
            return Err(Error::NotNormalized { norm });
        }
        Ok(MultiQubitPureState {
            n_qubits: len.trailing_zeros() as usize,
            vector,
        })
    }

    /// Computational basis state given as a bit string such as `"000"`.
    pub fn basis(bits: &str) -> Result<Self> {
        let n = bits.len();
        let index = usize::from_str_radix(bits, 2)
            .map_err(|_| Error::InvalidParameter(format!("`{bits}` is not a bit string")))?;
        if n == 0 {
            return Err(Error::InvalidParameter("empty bit string".into()));
        }
        Self::new(basis_vector(1 << n, index), &Tolerances::default())
    }

    pub fn vector(&self) -> &[Complex64] {
        &self.vector
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn density(&self) -> ComplexMatrix {
        density(&self.vector)
    }
}

/// `cos θ |00⟩ + sin θ |11⟩` for `θ ∈ [0, π/2]`.
pub fn theta_state(theta: f64) -> Result<BipartitePureState> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in [0, pi/2], got {theta}"
        )));
    }
    let mut v = vec![ZERO; 4];
    v[0] = Complex64::new(theta.cos(), 0.0);
    v[3] = Complex64::new(theta.sin(), 0.0);
    BipartitePureState::new(v, 2, 2, &Tolerances::default())
}

/// `Σ_m λ_m |mm⟩` for non-negative, unit-norm coefficients.
pub fn qudit_schmidt_state(lambdas: &[f64]) -> Result<BipartitePureState> {
    let tol = Tolerances::default();
    let d = lambdas.len();
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 Schmidt coefficients, got {d}"
        )));
    }
    if let Some(bad) = lambdas.iter().find(|&&l| !l.is_finite() || l < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Schmidt coefficient {bad} is not a non-negative number"
        )));
    }
    let norm = lambdas.iter().map(|l| l * l).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > tol.tol_eig {
        return Err(Error::NotNormalized { norm });
    }
    let mut v = vec![ZERO; d * d];
    for (m, &l) in lambdas.iter().enumerate() {
        v[m * d + m] = Complex64::new(l, 0.0);
    }
    BipartitePureState::new(v, d, d, &tol)
}

/// A truncated two-mode squeezed vacuum together with the discarded tail weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TruncatedNopa {
    pub state: BipartitePureState,
    /// Raw coefficients `tanh(r)^m / cosh(r)` before renormalization.
    pub raw_coeffs: Vec<f64>,
    /// `1 − Σ_{m<d} raw_m²`
    pub truncation_weight: f64,
}

/// Two-mode squeezed vacuum with squeezing `r`, cut at Fock level `d − 1`
/// and renormalized to unit norm.
pub fn nopa_truncated(r: f64, d: usize) -> Result<TruncatedNopa> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "squeezing parameter must be positive, got {r}"
        )));
    }
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "truncation dimension must be >= 2, got {d}"
        )));
    }
    let t = r.tanh();
    let c = r.cosh();
    let raw: Vec<f64> = (0..d).map(|m| t.powi(m as i32) / c).collect();
    let kept: f64 = raw.iter().map(|x| x * x).sum();
    let norm = kept.sqrt();
    let lambdas: Vec<f64> = raw.iter().map(|x| x / norm).collect();
    Ok(TruncatedNopa {
        state: qudit_schmidt_state(&lambdas)?,
        raw_coeffs: raw,
        truncation_weight: 1.0 - kept,
    })
}

/// `|0⟩ ⊗ |β⟩` for a unit qubit vector `β`.
pub fn separable_state(beta: &[Complex64]) -> Result<BipartitePureState> {
    let tol = Tolerances::default();
    if beta.len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "beta must be a qubit vector, got length {}",
            beta.len()
        )));
    }
    let norm = vector_norm(beta);
    if (norm - 1.0).abs() > tol.tol_eig {
        return Err(Error::NotNormalized { norm });
    }
    BipartitePureState::new(kron_vec(&basis_vector(2, 0), beta), 2, 2, &tol)
}

/// `(|000⟩ + |111⟩)/√2`
pub fn ghz_state() -> MultiQubitPureState {
    let mut v = vec![ZERO; 8];
    v[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    v[7] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    MultiQubitPureState {
        vector: v,
        n_qubits: 3,
    }
}

/// `|ψ⟩⟨ψ|`
pub fn density(psi: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::projector(psi)
}
