#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steerkit::linalg::{vector_norm, ComplexMatrix};
use steerkit::{Complex64, MeasurementSetting};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box–Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn random_unit_vector(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
        .collect();
    let norm = vector_norm(&v);
    v.into_iter().map(|x| x / norm).collect()
}

/// Haar-ish unitary from Gram–Schmidt on Gaussian columns.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
            .collect();
        for c in &cols {
            let p: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= p * ci;
            }
        }
        let norm = vector_norm(&v);
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            u[(i, j)] = *x;
        }
    }
    u
}

pub fn random_setting(rng: &mut impl Rng, n: usize, label: &str) -> MeasurementSetting {
    MeasurementSetting::from_unitary(label, &random_unitary(rng, n)).unwrap()
}

pub fn random_density(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = Complex64::new(gaussian(rng), gaussian(rng));
        }
    }
    let rho = &g * &g.adjoint();
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr)
}

pub fn random_bloch(rng: &mut impl Rng) -> [f64; 3] {
    let v = [gaussian(rng), gaussian(rng), gaussian(rng)];
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Schmidt vector with every coefficient above 0.05 after normalization.
pub fn random_schmidt(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(0.2..1.0)).collect();
    let n = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    raw.into_iter().map(|x| x / n).collect()
}

pub fn uniform(rng: &mut impl Rng) -> f64 {
    rng.gen()
}
