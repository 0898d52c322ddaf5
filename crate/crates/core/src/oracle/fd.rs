//! Three-point finite-difference Schrödinger eigensolver.
//!
//! H = -c d²/dx² + V on a uniform grid with Dirichlet ends. V at each node is
//! the average over its cell, so a breakpoint between nodes is weighted by
//! the fraction of the cell on either side. Eigenvalues come from Sturm
//! bisection, eigenvectors from one-shot inverse iteration.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{Height, PotentialSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdGrid {
    pub x_min: f64,
    pub x_max: f64,
    /// Nodes including the two Dirichlet ends.
    pub n_points: usize,
    pub max_states: usize,
}

impl FdGrid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Self {
        FdGrid {
            x_min,
            x_max,
            n_points,
            max_states: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdState {
    pub energy: f64,
    /// ψ at every grid node, h Σ ψ² = 1.
    pub psi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdSolution {
    pub x: Vec<f64>,
    pub states: Vec<FdState>,
    pub warnings: Vec<String>,
}

fn cell_average(spec: &PotentialSpec, a: f64, b: f64) -> f64 {
    let bp = spec.breakpoints();
    let mut total = 0.0;
    let mut lo = a;
    for r in spec.region_of(a)..spec.n_regions() {
        let end = if r + 1 < spec.n_regions() {
            bp[r].min(b)
        } else {
            b
        };
        if end > lo {
            // Infinite regions are outside the clamped domain; the tiny slivers
            // a rounding error can leave are given zero weight.
            total += spec.height(r).finite().unwrap_or(0.0) * (end - lo);
        }
        lo = lo.max(end);
        if lo >= b {
            break;
        }
    }
    total / (b - a)
}

/// Negative pivots of T - λ, i.e. the number of eigenvalues below λ.
fn sturm_count(diag: &[f64], off: f64, lambda: f64) -> usize {
    let off2 = off * off;
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        q = if i == 0 {
            d - lambda
        } else {
            d - lambda - off2 / q
        };
        if q == 0.0 {
            q = f64::EPSILON * (d.abs() + off.abs());
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solves (T - λ) x = rhs with partial pivoting.
fn tridiagonal_solve(diag: &[f64], off: f64, lambda: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    // Row i holds u0 on the diagonal, u1 and u2 to its right.
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut b = rhs.to_vec();
    let tiny = f64::EPSILON * (off.abs() + diag.iter().fold(0.0_f64, |m, d| m.max(d.abs())));

    let (mut a0, mut a1) = (diag[0] - lambda, if n > 1 { off } else { 0.0 });
    let mut a2 = 0.0;
    for i in 0..n {
        if i + 1 == n {
            u0[i] = if a0.abs() < tiny { tiny } else { a0 };
            break;
        }
        let (n0, n1, n2) = (off, diag[i + 1] - lambda, if i + 2 < n { off } else { 0.0 });
        if n0.abs() > a0.abs() {
            // Swap rows i and i + 1.
            let f = a0 / n0;
            u0[i] = n0;
            u1[i] = n1;
            u2[i] = n2;
            let rb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = rb - f * b[i];
            a0 = a1 - f * n1;
            a1 = a2 - f * n2;
        } else {
            let p = if a0.abs() < tiny { tiny } else { a0 };
            let f = n0 / p;
            u0[i] = p;
            u1[i] = a1;
            u2[i] = a2;
            b[i + 1] -= f * b[i];
            a0 = n1 - f * a1;
            a1 = n2 - f * a2;
        }
        a2 = 0.0;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * x[i + 2];
        }
        x[i] = s / u0[i];
    }
    x
}

/// All eigenpairs below the lower outer height, up to `grid.max_states`.
pub fn fd_eigensolve(spec: &PotentialSpec, grid: &FdGrid) -> Result<FdSolution> {
    let n = spec.n_regions();
    let bp = spec.breakpoints();
    let mut x_min = grid.x_min;
    let mut x_max = grid.x_max;
    if spec.height(0) == Height::Infinite {
        x_min = x_min.max(bp[0]);
    }
    if spec.height(n - 1) == Height::Infinite {
        x_max = x_max.min(bp[n - 2]);
    }
    if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) || grid.n_points < 3 {
        return Err(Error::Config(format!(
            "finite-difference grid [{x_min}, {x_max}] with {} points is empty",
            grid.n_points
        )));
    }
    let h = (x_max - x_min) / (grid.n_points - 1) as f64;
    let c = spec.units().hbar2_over_2m();
    let x: Vec<f64> = (0..grid.n_points).map(|i| x_min + i as f64 * h).collect();
    let inner = &x[1..grid.n_points - 1];
    let diag: Vec<f64> = inner
        .iter()
        .map(|&xi| 2.0 * c / (h * h) + cell_average(spec, xi - 0.5 * h, xi + 0.5 * h))
        .collect();
    let off = -c / (h * h);

    let lower = diag.iter().fold(f64::INFINITY, |m, &d| m.min(d)) - 2.0 * off.abs();
    let gershgorin = diag.iter().fold(f64::NEG_INFINITY, |m, &d| m.max(d)) + 2.0 * off.abs();
    let ceiling = match (spec.height(0).finite(), spec.height(n - 1).finite()) {
        (None, None) => gershgorin,
        (a, b) => a.unwrap_or(f64::INFINITY).min(b.unwrap_or(f64::INFINITY)),
    };
    let n_states = sturm_count(&diag, off, ceiling).min(grid.max_states);

    let mut warnings = Vec::new();
    let mut states = Vec::with_capacity(n_states);
    let v_min = spec.min_finite_height();
    for j in 0..n_states {
        let (mut lo, mut hi) = (lower, ceiling);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(&diag, off, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let energy = 0.5 * (lo + hi);
        let mut v = vec![1.0; diag.len()];
        for _ in 0..3 {
            v = tridiagonal_solve(&diag, off, energy, &v);
            let scale = v.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
            v.iter_mut().for_each(|a| *a /= scale);
        }
        let mut psi = Vec::with_capacity(grid.n_points);
        psi.push(0.0);
        psi.extend(v);
        psi.push(0.0);
        let norm = (h * psi.iter().map(|p| p * p).sum::<f64>()).sqrt();
        let peak = psi.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
        let first = psi
            .iter()
            .find(|p| p.abs() > 1e-3 * peak)
            .copied()
            .unwrap_or(1.0);
        let sign = first.signum() / norm;
        psi.iter_mut().for_each(|p| *p *= sign);

        let k = ((energy - v_min) / c).sqrt();
        if k > 0.0 && 2.0 * std::f64::consts::PI / k < 20.0 * h {
            warnings.push(format!(
                "state {} at E = {energy:.6e} has fewer than 20 points per wavelength",
                j + 1
            ));
        }
        states.push(FdState { energy, psi });
    }
    Ok(FdSolution {
        x,
        states,
        warnings,
    })
}
