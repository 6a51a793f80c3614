//! Dense complex linear algebra: Kronecker products, partial traces,
//! Hermitian eigendecomposition, Schmidt decomposition and state metrics.

mod eig;
mod matrix;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use eig::{hermitian_eig, HermitianEigen};
pub use matrix::{
    basis_vector, inner, kron_vec, pauli_x, pauli_y, pauli_z, real_vector, vector_norm,
    ComplexMatrix, I, ONE, ZERO,
};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every check in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerances {
    pub tol_herm: f64,
    pub tol_eig: f64,
    /// Trace-distance threshold below which two states count as equal.
    pub tol_state_eq: f64,
    /// Allowed subdominant eigenvalue mass for a rank-one state.
    pub tol_rank1: f64,
    /// Residual threshold for LP feasibility and model invariants.
    pub tol_lp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_herm: 1e-10,
            tol_eig: 1e-10,
            tol_state_eq: 1e-9,
            tol_rank1: 1e-9,
            tol_lp: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("tol_herm", self.tol_herm),
            ("tol_eig", self.tol_eig),
            ("tol_state_eq", self.tol_state_eq),
            ("tol_rank1", self.tol_rank1),
            ("tol_lp", self.tol_lp),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidTolerances(format!("{name} = {value}")));
            }
        }
        Ok(())
    }
}

/// Which factor of a bipartite space survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = b.dims();
    let mut out = ComplexMatrix::zeros(a.rows() * br, a.cols() * bc);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a[(i, j)];
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Partial trace of an operator on `C^dA ⊗ C^dB`, keeping `keep`.
pub fn partial_trace(
    rho: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    let n = d_a * d_b;
    if d_a == 0 || d_b == 0 || rho.dims() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "partial trace expects a {n}x{n} matrix for dA={d_a}, dB={d_b}, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let out = match keep {
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(d_b, d_b);
            for m in 0..d_b {
                for k in 0..d_b {
                    out[(m, k)] = (0..d_a).map(|i| rho[(i * d_b + m, i * d_b + k)]).sum();
                }
            }
            out
        }
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(d_a, d_a);
            for i in 0..d_a {
                for j in 0..d_a {
                    out[(i, j)] = (0..d_b).map(|m| rho[(i * d_b + m, j * d_b + m)]).sum();
                }
            }
            out
        }
    };
    Ok(out)
}

/// `½ Σ |λ_i(ρ − σ)|`
pub fn trace_distance(rho: &ComplexMatrix, sigma: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch(format!(
            "trace distance between {}x{} and {}x{}",
            rho.rows(),
            rho.cols(),
            sigma.rows(),
            sigma.cols()
        )));
    }
    rho.ensure_hermitian(tol.tol_herm)?;
    sigma.ensure_hermitian(tol.tol_herm)?;
    let eig = hermitian_eig(&(rho - sigma), tol.tol_herm)?;
    Ok(0.5 * eig.eigenvalues.iter().map(|x| x.abs()).sum::<f64>())
}

/// Outcome of a rank-one test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankOneCheck {
    pub rank_one: bool,
    /// Top eigenvector (unit norm).
    pub principal: Vec<Complex64>,
    /// `(Σ_{i≥2} |λ_i|) / tr ρ`
    pub residual_mass: f64,
}

/// Tests whether a positive semidefinite operator is proportional to a pure state.
pub fn is_rank_one(rho: &ComplexMatrix, tol: &Tolerances) -> Result<RankOneCheck> {
    let eig = hermitian_eig(rho, tol.tol_herm)?;
    let trace: f64 = eig.eigenvalues.iter().sum();
    let scale = trace.abs().max(1.0);
    let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -tol.tol_eig * scale {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    if trace <= tol.tol_eig {
        return Err(Error::ZeroTrace);
    }
    let residual_mass = eig.eigenvalues[1..].iter().map(|x| x.abs()).sum::<f64>() / trace;
    Ok(RankOneCheck {
        rank_one: residual_mass <= tol.tol_rank1,
        principal: eig.eigenvector(0),
        residual_mass,
    })
}

/// `ψ = Σ_m coeffs[m] |left_m⟩|right_m⟩`, keeping only coefficients above `tol_eig`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SchmidtDecomposition {
    /// Non-negative, descending.
    pub coeffs: Vec<f64>,
    pub left: Vec<Vec<Complex64>>,
    pub right: Vec<Vec<Complex64>>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn reconstruct(&self) -> Vec<Complex64> {
        let n = self.left.first().map_or(0, Vec::len) * self.right.first().map_or(0, Vec::len);
        let mut out = vec![ZERO; n];
        for ((c, l), r) in self.coeffs.iter().zip(&self.left).zip(&self.right) {
            for (o, x) in out.iter_mut().zip(kron_vec(l, r)) {
                *o += x * c;
            }
        }
        out
    }
}

/// Schmidt decomposition of a unit vector on `C^dA ⊗ C^dB`.
///
/// The amplitudes are reshaped into the `dA x dB` matrix `M`; the left
/// vectors are eigenvectors of `M M†` and the coefficients are the row norms
/// of `U† M`, which keeps tiny singular values accurate to machine precision.
pub fn schmidt_decompose(
    psi: &[Complex64],
    d_a: usize,
    d_b: usize,
    tol: &Tolerances,
) -> Result<SchmidtDecomposition> {
    if d_a == 0 || d_b == 0 || psi.len() != d_a * d_b {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} does not match dA={d_a}, dB={d_b}",
            psi.len()
        )));
    }
    let norm = vector_norm(psi);
    if (norm - 1.0).abs() > tol.tol_eig {
        return Err(Error::NotNormalized { norm });
    }
    let m = ComplexMatrix::from_vec(d_a, d_b, psi.to_vec())?;
    let gram = &m * &m.adjoint();
    let eig = hermitian_eig(&gram, f64::INFINITY)?;
    let projected = &eig.eigenvectors.adjoint() * &m;

    let mut terms: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = (0..d_a)
        .map(|k| {
            let row: Vec<Complex64> = (0..d_b).map(|j| projected[(k, j)]).collect();
            (vector_norm(&row), eig.eigenvector(k), row)
        })
        .filter(|(s, _, _)| *s > tol.tol_eig)
        .collect();
    terms.sort_by(|x, y| y.0.total_cmp(&x.0));

    let mut out = SchmidtDecomposition {
        coeffs: Vec::with_capacity(terms.len()),
        left: Vec::with_capacity(terms.len()),
        right: Vec::with_capacity(terms.len()),
    };
    for (s, l, row) in terms {
        out.coeffs.push(s);
        out.left.push(l);
        out.right.push(row.iter().map(|x| x / s).collect());
    }
    Ok(out)
}
