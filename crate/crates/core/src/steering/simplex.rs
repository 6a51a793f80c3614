//! Dense phase-1 simplex for `A x = b, x ≥ 0` feasibility.
//!
//! Rows are sign-normalized so that `b ≥ 0`, then each gets one artificial
//! variable. The optimum is the smallest total shortfall `Σ_i (b_i − (A x)_i)`
//! over non-negative `x` with no row overshooting its target. Entering and
//! leaving variables follow Bland's rule, so the method cannot cycle.

const PIVOT_EPS: f64 = 1e-12;
const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOneResult {
    pub x: Vec<f64>,
    /// Sum of artificial variables at the optimum; zero iff `A x = b` is feasible.
    pub objective: f64,
    pub iterations: usize,
    /// False only if the iteration cap was hit.
    pub converged: bool,
}

/// Solves phase 1 for a row-major `rows x cols` constraint matrix.
pub fn phase_one(a: &[f64], b: &[f64], cols: usize) -> PhaseOneResult {
    let rows = b.len();
    assert_eq!(a.len(), rows * cols, "constraint matrix shape");
    let width = cols + rows + 1;
    let rhs = width - 1;
    let mut t = vec![0.0; rows * width];
    for i in 0..rows {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..cols {
            t[i * width + j] = sign * a[i * cols + j];
        }
        t[i * width + cols + i] = 1.0;
        t[i * width + rhs] = sign * b[i];
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Reduced costs: artificial columns start at zero.
    let mut cost = vec![0.0; width];
    for i in 0..rows {
        for j in 0..cols {
            cost[j] -= t[i * width + j];
        }
        cost[rhs] -= t[i * width + rhs];
    }

    let mut iterations = 0;
    let mut converged = true;
    while let Some(enter) = (0..cols + rows).find(|&j| cost[j] < -PIVOT_EPS) {
        if iterations >= MAX_ITERATIONS {
            converged = false;
            break;
        }
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            let coef = t[i * width + enter];
            if coef > PIVOT_EPS {
                let ratio = t[i * width + rhs] / coef;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((r, best)) => {
                        if ratio < best - PIVOT_EPS
                            || (ratio <= best + PIVOT_EPS && basis[i] < basis[r])
                        {
                            Some((i, ratio))
                        } else {
                            Some((r, best))
                        }
                    }
                };
            }
        }
        // Phase 1 is bounded below by zero, so an entering column always has a pivot row.
        let Some((pivot_row, _)) = leave else {
            cost[enter] = 0.0;
            continue;
        };
        pivot(&mut t, &mut cost, width, rows, pivot_row, enter);
        basis[pivot_row] = enter;
        iterations += 1;
    }

    let mut x = vec![0.0; cols];
    for (i, &var) in basis.iter().enumerate() {
        if var < cols {
            x[var] = t[i * width + rhs].max(0.0);
        }
    }
    PhaseOneResult {
        x,
        objective: (-cost[rhs]).max(0.0),
        iterations,
        converged,
    }
}

fn pivot(t: &mut [f64], cost: &mut [f64], width: usize, rows: usize, r: usize, c: usize) {
    let p = t[r * width + c];
    for j in 0..width {
        t[r * width + j] /= p;
    }
    t[r * width + c] = 1.0;
    for i in 0..rows {
        if i == r {
            continue;
        }
        let f = t[i * width + c];
        if f != 0.0 {
            for j in 0..width {
                t[i * width + j] -= f * t[r * width + j];
            }
            t[i * width + c] = 0.0;
        }
    }
    let f = cost[c];
    if f != 0.0 {
        for j in 0..width {
            cost[j] -= f * t[r * width + j];
        }
        cost[c] = 0.0;
    }
}
