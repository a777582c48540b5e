//! Backends for the truncated system `(I + Ã) Φ = G`.
//!
//! Every [`SolveResult`] carries a residual `‖W̃Φ − G̃‖₂` recomputed from the
//! returned solution, whatever the backend reported internally.

use nalgebra::DVector;
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

use crate::assembly::MemSystem;
use crate::coeffs::CoefficientVector;
use crate::{Error, Result};

/// Largest `M(2N+1)` accepted by [`solve_dense`].
pub const DENSE_DIMENSION_CAP: usize = 20_000;
pub const DEFAULT_RESTART: usize = 50;
pub const DEFAULT_GMRES_TOL: f64 = 1e-12;
pub const GMRES_MAX_ITERATIONS: usize = 5_000;
pub const DEFAULT_REFLECTION_TOL: f64 = 1e-12;
pub const DEFAULT_REFLECTION_ITERATIONS: usize = 1_000;
/// Consecutive growing updates after which reflections are declared divergent.
pub const DIVERGENCE_STREAK: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Dense,
    Gmres,
    Reflections,
    FirstOrder,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Dense => "dense",
            Backend::Gmres => "gmres",
            Backend::Reflections => "reflections",
            Backend::FirstOrder => "first-order",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Backend::Dense),
            "gmres" => Ok(Backend::Gmres),
            "reflections" => Ok(Backend::Reflections),
            "first-order" | "first_order" => Ok(Backend::FirstOrder),
            other => Err(Error::Parse(format!("unknown backend '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub solution: CoefficientVector,
    pub backend: Backend,
    /// Arnoldi steps for GMRES, sweeps for reflections, 0 otherwise.
    pub iterations: usize,
    /// `‖W̃Φ − G̃‖₂` for the returned `Φ`.
    pub residual: f64,
    pub converged: bool,
    pub diverged: bool,
}

impl SolveResult {
    fn new(
        system: &MemSystem,
        solution: CoefficientVector,
        backend: Backend,
        iterations: usize,
    ) -> Result<Self> {
        let residual = residual(system, &solution)?;
        Ok(SolveResult {
            solution,
            backend,
            iterations,
            residual,
            converged: true,
            diverged: false,
        })
    }

    pub fn relative_residual(&self, system: &MemSystem) -> f64 {
        let g = system.rhs.l2();
        if g == 0.0 {
            self.residual
        } else {
            self.residual / g
        }
    }
}

pub fn residual(system: &MemSystem, x: &CoefficientVector) -> Result<f64> {
    let r = system.rhs.padded_difference(&system.apply(x)?)?;
    Ok(r.l2())
}

fn wrap(system: &MemSystem, data: Vec<Complex64>) -> Result<CoefficientVector> {
    CoefficientVector::from_vec(system.cylinders(), system.truncation(), data)
}

/// Dense LU with partial pivoting.
pub fn solve_dense(system: &MemSystem) -> Result<SolveResult> {
    let dim = system.dimension();
    if dim > DENSE_DIMENSION_CAP {
        return Err(Error::Capability(format!(
            "dense solve of dimension {dim} exceeds {DENSE_DIMENSION_CAP}"
        )));
    }
    let lu = system.operator.to_dense().lu();
    let b = DVector::from_column_slice(system.rhs.as_slice());
    let x = lu.solve(&b).ok_or(Error::SingularMatrix)?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularMatrix);
    }
    SolveResult::new(
        system,
        wrap(system, x.as_slice().to_vec())?,
        Backend::Dense,
        0,
    )
}

/// `‖W̃‖₁ ‖W̃⁻¹‖₁`, from an explicit inverse (diagnostic; cubic cost).
pub fn condition_estimate(system: &MemSystem) -> Result<f64> {
    let a = system.operator.to_dense();
    let norm1 = |m: &crate::assembly::CMatrix| {
        m.column_iter()
            .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let inv = a.clone().try_inverse().ok_or(Error::SingularMatrix)?;
    Ok(norm1(&a) * norm1(&inv))
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Restarted GMRES on the matrix-free operator, starting from zero.
pub fn solve_gmres(system: &MemSystem, tol: f64, restart: usize) -> Result<SolveResult> {
    if tol.is_nan() || tol <= 0.0 || restart == 0 {
        return Err(Error::Domain(format!(
            "gmres needs tol > 0 and restart > 0, got {tol}, {restart}"
        )));
    }
    let apply = |v: &[Complex64]| -> Result<Vec<Complex64>> {
        Ok(system.apply(&wrap(system, v.to_vec())?)?.into_vec())
    };
    let b = system.rhs.as_slice();
    let dim = b.len();
    let b_norm = norm(b);
    let mut x = vec![Complex64::new(0.0, 0.0); dim];
    let mut iterations = 0;
    if b_norm == 0.0 {
        return SolveResult::new(system, wrap(system, x)?, Backend::Gmres, 0);
    }
    let restart = restart.min(dim);
    let mut converged = false;

    while iterations < GMRES_MAX_ITERATIONS {
        let ax = apply(&x)?;
        let r: Vec<Complex64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm(&r);
        if beta <= tol * b_norm {
            converged = true;
            break;
        }
        let mut basis: Vec<Vec<Complex64>> = vec![r.iter().map(|z| z / beta).collect()];
        // Hessenberg columns, already rotated
        let mut hess: Vec<Vec<Complex64>> = Vec::with_capacity(restart);
        let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(restart);
        let mut g = vec![Complex64::new(beta, 0.0)];

        for j in 0..restart {
            iterations += 1;
            let mut w = apply(&basis[j])?;
            let mut h = vec![Complex64::new(0.0, 0.0); j + 2];
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(v, &w);
                h[i] = hij;
                w.iter_mut().zip(v).for_each(|(wk, vk)| *wk -= hij * vk);
            }
            let h_next = norm(&w);
            h[j + 1] = Complex64::new(h_next, 0.0);
            for (i, &(c, s)) in rotations.iter().enumerate() {
                let (a, bb) = (h[i], h[i + 1]);
                h[i] = c * a + s * bb;
                h[i + 1] = -s.conj() * a + c * bb;
            }
            let (a, bb) = (h[j], h[j + 1]);
            let r = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (1.0, Complex64::new(0.0, 0.0))
            } else if a.norm() == 0.0 {
                (0.0, Complex64::new(1.0, 0.0))
            } else {
                (a.norm() / r, a / a.norm() * bb.conj() / r)
            };
            h[j] = c * a + s * bb;
            h[j + 1] = Complex64::new(0.0, 0.0);
            rotations.push((c, s));
            g.push(-s.conj() * g[j]);
            g[j] *= c;
            hess.push(h);

            let estimate = g[j + 1].norm();
            let breakdown = h_next <= f64::EPSILON * beta;
            if estimate <= tol * b_norm || breakdown || iterations >= GMRES_MAX_ITERATIONS {
                break;
            }
            basis.push(w.iter().map(|z| z / h_next).collect());
        }

        // back substitution on the rotated upper-triangular system
        let k = hess.len();
        let mut y = vec![Complex64::new(0.0, 0.0); k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for l in i + 1..k {
                s -= hess[l][i] * y[l];
            }
            y[i] = s / hess[i][i];
        }
        for (l, yl) in y.iter().enumerate() {
            x.iter_mut()
                .zip(&basis[l])
                .for_each(|(xi, vi)| *xi += yl * vi);
        }
    }

    let mut result = SolveResult::new(system, wrap(system, x)?, Backend::Gmres, iterations)?;
    result.converged = converged || result.residual <= tol * b_norm;
    Ok(result)
}

/// Parallel method of reflections: `Φ⁰ = G̃`, `Φʲ = G̃ − ÃΦʲ⁻¹`.
///
/// Converges when `‖Φʲ − Φʲ⁻¹‖ ≤ tol ‖Φʲ‖`; `iterations` is the number of
/// coupling sweeps applied before that happened. Divergence is declared after
/// [`DIVERGENCE_STREAK`] consecutive growing updates.
pub fn solve_reflections(system: &MemSystem, max_iters: usize, tol: f64) -> Result<SolveResult> {
    if max_iters == 0 {
        return Err(Error::Domain("reflections need max_iters >= 1".into()));
    }
    let g = &system.rhs;
    let mut phi = g.clone();
    let mut last_update = f64::INFINITY;
    let mut streak = 0;
    let mut converged = false;
    let mut diverged = false;
    let mut iterations = 0;
    for j in 0..max_iters {
        let next = g.padded_difference(&system.apply_coupling(&phi)?)?;
        let update = next.padded_difference(&phi)?.l2();
        let scale = next.l2();
        if !update.is_finite() {
            diverged = true;
            iterations = j;
            break;
        }
        if update <= tol * scale || update == 0.0 {
            phi = next;
            converged = true;
            iterations = j;
            break;
        }
        streak = if update > last_update { streak + 1 } else { 0 };
        last_update = update;
        phi = next;
        iterations = j + 1;
        if streak >= DIVERGENCE_STREAK {
            diverged = true;
            break;
        }
    }
    let residual = if diverged {
        f64::INFINITY
    } else {
        residual(system, &phi)?
    };
    let residual = if residual.is_finite() {
        residual
    } else {
        f64::INFINITY
    };
    Ok(SolveResult {
        solution: phi,
        backend: Backend::Reflections,
        iterations,
        residual,
        converged,
        diverged,
    })
}

/// Single-scattering solution `Φ̂ = G̃`; its residual is the neglected
/// coupling `‖ÃG̃‖₂`.
pub fn first_order_solution(system: &MemSystem) -> Result<SolveResult> {
    SolveResult::new(system, system.rhs.clone(), Backend::FirstOrder, 0)
}

/// Runs `backend` with its default parameters.
pub fn solve(system: &MemSystem, backend: Backend) -> Result<SolveResult> {
    match backend {
        Backend::Dense => solve_dense(system),
        Backend::Gmres => solve_gmres(system, DEFAULT_GMRES_TOL, DEFAULT_RESTART),
        Backend::Reflections => solve_reflections(
            system,
            DEFAULT_REFLECTION_ITERATIONS,
            DEFAULT_REFLECTION_TOL,
        ),
        Backend::FirstOrder => first_order_solution(system),
    }
}
