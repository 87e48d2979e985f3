//! Cartesian cross-check for the radial harmonic solve.
//!
//! For `g = φ⁴δ` with `Δφ = 0` the product `ψ = φu` is flat-harmonic, so
//! the flat Laplacian is discretised on the octant `[0, R]³` (the solution
//! is radial, so the coordinate planes are mirror planes). The inner sphere
//! uses a symmetric cut-cell treatment and the outer faces a Robin
//! condition matching `ψ ∝ 1/r`.

use super::HarmonicSolution;
use crate::error::{Error, Result};
use crate::geom::RadialMetric;
use serde::Serialize;

/// Grid resolution and solver controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    /// Cells per axis.
    pub cells: usize,
    pub outer_radius: f64,
    /// Relative residual for conjugate gradients.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            cells: 64,
            outer_radius: 16.0,
            tol: 1e-8,
            max_iter: 20_000,
        }
    }
}

/// Nodal values of `u` on the octant grid.
#[derive(Debug, Clone)]
pub struct GridSolution {
    spec: GridSpec,
    boundary_radius: f64,
    /// `u` at every node; nodes inside the inner sphere hold `NaN`.
    u: Vec<f64>,
    iterations: usize,
    relative_residual: f64,
}

const THETA_MIN: f64 = 1e-8;

impl GridSolution {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn relative_residual(&self) -> f64 {
        self.relative_residual
    }

    fn spacing(&self) -> f64 {
        self.spec.outer_radius / self.spec.cells as f64
    }

    /// `(radius, u)` at every solved node.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.spec.cells + 1;
        let h = self.spacing();
        self.u
            .iter()
            .enumerate()
            .filter(|(_, u)| !u.is_nan())
            .map(move |(idx, &u)| {
                let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
                let r = h * ((i * i + j * j + k * k) as f64).sqrt();
                (r, u)
            })
    }

    /// `max |u_grid − u_ref|` over all solved nodes.
    pub fn sup_error(&self, reference: &HarmonicSolution) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (r, u) in self.nodes() {
            let exact = reference.eval(r.max(self.boundary_radius))?.0;
            worst = worst.max((u - exact).abs());
        }
        Ok(worst)
    }
}

/// Fraction along `p → q` at which `|x| = rb`, with `|p| > rb ≥ |q|`.
fn crossing(p: [f64; 3], q: [f64; 3], rb: f64) -> f64 {
    let d = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
    let a = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    let b = 2.0 * (p[0] * d[0] + p[1] * d[1] + p[2] * d[2]);
    let c = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - rb * rb;
    let disc = (b * b - 4.0 * a * c).max(0.0);
    // smaller root: first contact moving from p towards q
    let theta = (-b - disc.sqrt()) / (2.0 * a);
    theta.clamp(THETA_MIN, 1.0)
}

/// Solves for `u` with `u = 1` on the inner boundary sphere of `end`.
///
/// Requires a flat-harmonic conformal factor.
pub fn solve_harmonic_grid3d(end: &RadialMetric, spec: GridSpec) -> Result<GridSolution> {
    let factor = end.factor();
    if !factor.is_flat_harmonic() {
        return Err(Error::Precondition(
            "grid solve needs a flat-harmonic conformal factor".into(),
        ));
    }
    let rb = end.r_min();
    if !(rb > 0.0) {
        return Err(Error::Boundary("the end has no boundary sphere".into()));
    }
    if spec.cells < 4 || !(spec.outer_radius > 2.0 * rb) {
        return Err(Error::Domain(format!(
            "grid needs at least 4 cells and outer radius above 2 r_b (got {} cells, R = {})",
            spec.cells, spec.outer_radius
        )));
    }
    let cells = spec.cells;
    let n = cells + 1;
    let total = n * n * n;
    if total > 40_000_000 {
        return Err(Error::TooLarge {
            what: "grid nodes",
            size: total,
            limit: 40_000_000,
        });
    }
    let h = spec.outer_radius / cells as f64;
    let psi_boundary = factor.value(rb);
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let pos = |i: usize, j: usize, k: usize| [i as f64 * h, j as f64 * h, k as f64 * h];
    let norm = |p: [f64; 3]| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let half = |m: usize| if m == 0 || m == cells { 0.5 } else { 1.0 };

    let active: Vec<bool> = (0..total)
        .map(|id| {
            let (i, j, k) = (id / (n * n), (id / n) % n, id % n);
            norm(pos(i, j, k)) > rb
        })
        .collect();

    // couple[a][id]: coefficient of the edge from id to id + e_a
    let mut couple = vec![vec![0.0; total]; 3];
    let mut diag = vec![0.0; total];
    let mut rhs = vec![0.0; total];
    let strides = [n * n, n, 1];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let id = idx(i, j, k);
                let ijk = [i, j, k];
                for axis in 0..3 {
                    if ijk[axis] == cells {
                        continue;
                    }
                    let nb = id + strides[axis];
                    let kappa: f64 = (0..3)
                        .filter(|&b| b != axis)
                        .map(|b| h * half(ijk[b]))
                        .product::<f64>()
                        / h;
                    let (a_on, b_on) = (active[id], active[nb]);
                    let mut nb_ijk = ijk;
                    nb_ijk[axis] += 1;
                    match (a_on, b_on) {
                        (true, true) => {
                            couple[axis][id] = kappa;
                            diag[id] += kappa;
                            diag[nb] += kappa;
                        }
                        (true, false) => {
                            let theta =
                                crossing(pos(i, j, k), pos(nb_ijk[0], nb_ijk[1], nb_ijk[2]), rb);
                            diag[id] += kappa / theta;
                            rhs[id] += kappa * psi_boundary / theta;
                        }
                        (false, true) => {
                            let theta =
                                crossing(pos(nb_ijk[0], nb_ijk[1], nb_ijk[2]), pos(i, j, k), rb);
                            diag[nb] += kappa / theta;
                            rhs[nb] += kappa * psi_boundary / theta;
                        }
                        (false, false) => {}
                    }
                }
                if active[id] {
                    let p = pos(i, j, k);
                    let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
                    for axis in 0..3 {
                        if ijk[axis] == cells {
                            let area: f64 = (0..3)
                                .filter(|&b| b != axis)
                                .map(|b| h * half(ijk[b]))
                                .product();
                            diag[id] += p[axis] / r2 * area;
                        }
                    }
                }
            }
        }
    }

    // Padded copies so that every neighbour index is in range; padding and
    // inactive nodes carry zero coefficients.
    let pad = n * n;
    let padded = |v: &[f64]| {
        let mut out = vec![0.0; total + 2 * pad];
        out[pad..pad + total].copy_from_slice(v);
        out
    };
    let [cx, cy, cz] = [padded(&couple[0]), padded(&couple[1]), padded(&couple[2])];
    drop(couple);
    let apply = |x: &[f64], y: &mut [f64]| {
        for id in pad..pad + total {
            y[id] = diag[id - pad] * x[id]
                - cx[id] * x[id + n * n]
                - cx[id - n * n] * x[id - n * n]
                - cy[id] * x[id + n]
                - cy[id - n] * x[id - n]
                - cz[id] * x[id + 1]
                - cz[id - 1] * x[id - 1];
        }
    };

    let (psi, iterations, relative_residual) = conjugate_gradient(
        apply,
        &padded(&diag),
        &padded(&rhs),
        spec.tol,
        spec.max_iter,
    )?;
    let psi = &psi[pad..pad + total];
    let u = (0..total)
        .map(|id| {
            if active[id] {
                let (i, j, k) = (id / (n * n), (id / n) % n, id % n);
                psi[id] / factor.value(norm(pos(i, j, k)))
            } else {
                f64::NAN
            }
        })
        .collect();
    Ok(GridSolution {
        spec,
        boundary_radius: rb,
        u,
        iterations,
        relative_residual,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned conjugate gradients; rows with zero diagonal are
/// inert.
fn conjugate_gradient<A: Fn(&[f64], &mut [f64])>(
    apply: A,
    diag: &[f64],
    rhs: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, usize, f64)> {
    let len = rhs.len();
    let inv: Vec<f64> = (0..len)
        .map(|i| if diag[i] > 0.0 { 1.0 / diag[i] } else { 0.0 })
        .collect();
    let bnorm = dot(rhs, rhs).sqrt();
    if bnorm == 0.0 {
        return Ok((vec![0.0; len], 0, 0.0));
    }
    let mut x = vec![0.0; len];
    let mut r = rhs.to_vec();
    let mut p: Vec<f64> = r.iter().zip(&inv).map(|(a, b)| a * b).collect();
    let mut ap = vec![0.0; len];
    let mut rz = dot(&r, &p);
    let mut history = Vec::new();
    for it in 1..=max_iter {
        apply(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        let (mut rr, mut rz_new) = (0.0, 0.0);
        for i in 0..len {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            rr += r[i] * r[i];
            rz_new += r[i] * r[i] * inv[i];
        }
        let rel = rr.sqrt() / bnorm;
        if it % 100 == 0 {
            history.push(rel);
        }
        if rel < tol {
            return Ok((x, it, rel));
        }
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..len {
            p[i] = r[i] * inv[i] + beta * p[i];
        }
    }
    let last = history.last().copied().unwrap_or(f64::NAN);
    let tail: Vec<String> = history
        .iter()
        .rev()
        .take(5)
        .rev()
        .map(|v| format!("{v:.2e}"))
        .collect();
    Err(Error::Solver {
        stage: "grid conjugate gradients",
        message: format!(
            "no convergence in {max_iter} iterations; residual history [{}]",
            tail.join(", ")
        ),
        residual: last,
    })
}
