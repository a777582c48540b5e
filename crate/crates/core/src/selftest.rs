//! Oracle suites runnable from the command line: special-function
//! identities, quadrature certification of the closed forms, backend
//! agreement and the multipole field constant.

use num_complex::Complex64;
use std::fmt;

use crate::assembly::{self, MemSystem};
use crate::field;
use crate::presets::Preset;
use crate::scene::Point;
use crate::solver;
use crate::specfun;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    /// Measured deviation against the tolerance.
    pub value: f64,
    pub tolerance: f64,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}/{}: {:.3e} (tol {:.1e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.value,
            self.tolerance
        )
    }
}

fn check(suite: &'static str, name: impl Into<String>, value: f64, tolerance: f64) -> Check {
    Check {
        suite,
        name: name.into(),
        passed: value <= tolerance,
        value,
        tolerance,
    }
}

fn j0_series(x: f64) -> f64 {
    let q = -x * x / 4.0;
    let (mut term, mut sum, mut k) = (1.0f64, 1.0f64, 1.0);
    while term.abs() > 1e-18 * sum.abs() {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

/// Ascending series for `Y_0`, adequate for small arguments.
fn y0_series(x: f64) -> f64 {
    let q = -x * x / 4.0;
    let (mut term, mut harmonic, mut sum, mut k) = (1.0, 0.0, 0.0, 1.0);
    while k < 60.0 {
        term *= q / (k * k);
        harmonic += 1.0 / k;
        sum += term * harmonic;
        k += 1.0;
    }
    let gamma = 0.577_215_664_901_532_9;
    (2.0 / std::f64::consts::PI) * (((x / 2.0).ln() + gamma) * j0_series(x) - sum)
}

pub fn specfun_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut wronskian = 0.0f64;
    for x in [0.5, 1.0, 2.0, 10.0, 50.0] {
        let j = specfun::bessel_j_seq_scaled(51, x)?;
        let y = specfun::bessel_y_seq_scaled(51, x)?;
        let w = 2.0 / (std::f64::consts::PI * x);
        for m in 0..=50 {
            let jy = (j[m] * y[m + 1]).to_f64()?;
            let yj = (j[m + 1] * y[m]).to_f64()?;
            wronskian = wronskian.max((jy - yj + w).abs() / w);
        }
    }
    out.push(check("specfun", "wronskian", wronskian, 1e-10));

    let mut recurrence = 0.0f64;
    for x in [0.5, 2.0, 10.0, 50.0] {
        let h = specfun::hankel1_seq(40, x)?;
        for m in 1..40 {
            let r = h[m - 1] + h[m + 1] - h[m] * (2.0 * m as f64 / x);
            recurrence = recurrence.max(r.norm() / h[m + 1].norm());
        }
    }
    out.push(check("specfun", "hankel recurrence", recurrence, 1e-10));

    let j = (specfun::bessel_j(0, 1.0)? - j0_series(1.0)).abs();
    let y = (specfun::bessel_y(0, 1.0)? - y0_series(1.0)).abs();
    out.push(check("specfun", "J0(1) series", j, 1e-10));
    out.push(check("specfun", "Y0(1) series", y, 1e-10));

    let mut symmetry = 0.0f64;
    for m in 1..30 {
        let (p, n) = (specfun::hankel1(m, 3.5)?, specfun::hankel1(-m, 3.5)?);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        symmetry = symmetry.max((n - p * sign).norm());
    }
    out.push(check("specfun", "negative orders", symmetry, 0.0));
    Ok(out)
}

pub fn assembly_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in [0.6, 3.0] {
        let s = Preset::Moderate.scene(k);
        let g = s.geometry();
        let mut off = 0.0f64;
        let mut diag = 0.0f64;
        for p in 0..s.len() {
            for q in 0..s.len() {
                let closed = assembly::v_block(&s, &g, p, q, 4)?;
                let quad = assembly::pairing_quadrature_block(&s, p, q, 4, 256)?;
                let dev = (closed - quad).camax();
                if p == q {
                    diag = diag.max(dev);
                } else {
                    off = off.max(dev);
                }
            }
        }
        out.push(check(
            "assembly",
            format!("off-diagonal quadrature k={k}"),
            off,
            1e-8,
        ));
        out.push(check(
            "assembly",
            format!("diagonal singular rule k={k}"),
            diag,
            1e-6,
        ));
        let mut incident = 0.0f64;
        for p in 0..s.len() {
            let f = assembly::incident_coeffs(&s, &g, p, 4)?;
            for (i, m) in (-4..=4).enumerate() {
                incident = incident
                    .max((f[i] - assembly::incident_trace_quadrature(&s, p, m, 256)?).norm());
            }
        }
        out.push(check(
            "assembly",
            format!("incident trace k={k}"),
            incident,
            1e-8,
        ));
    }
    Ok(out)
}

pub fn solver_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for preset in Preset::ALL {
        let sys = MemSystem::assemble(&preset.scene(0.6), 10)?;
        let dense = solver::solve_dense(&sys)?;
        let scale = dense.solution.l2();
        let gmres = solver::solve_gmres(&sys, 1e-12, solver::DEFAULT_RESTART)?;
        let refl = solver::solve_reflections(&sys, solver::DEFAULT_REFLECTION_ITERATIONS, 1e-12)?;
        let dg = gmres.solution.padded_difference(&dense.solution)?.l2() / scale;
        let dr = if refl.converged {
            refl.solution.padded_difference(&dense.solution)?.l2() / scale
        } else {
            f64::INFINITY
        };
        out.push(check(
            "solver",
            format!("{preset}: dense residual"),
            dense.relative_residual(&sys),
            1e-12,
        ));
        out.push(check(
            "solver",
            format!("{preset}: gmres vs dense"),
            dg,
            1e-9,
        ));
        out.push(check(
            "solver",
            format!("{preset}: reflections vs dense"),
            dr,
            1e-9,
        ));
    }
    Ok(out)
}

pub fn field_suite() -> Result<Vec<Check>> {
    let s = Preset::Moderate.scene(0.6);
    let sol = solver::solve_dense(&MemSystem::assemble(&s, 12)?)?.solution;
    let mut dev = 0.0f64;
    for x in [
        Point(3.5, 2.0),
        Point(-3.0, -1.0),
        Point(5.0, -4.0),
        Point(9.0, 9.0),
    ] {
        let a = field::scattered_field(&s, &sol, x)?;
        let b = field::single_layer_field_quadrature(&s, &sol, x, 512)?;
        dev = dev.max((a - b).norm());
    }
    let zero = crate::coeffs::CoefficientVector::zeros(s.len(), 2);
    let z = field::scattered_field(&s, &zero, Point(20.0, 0.0))?;
    Ok(vec![
        check("field", "multipole vs quadrature", dev, 1e-8),
        check(
            "field",
            "zero density",
            (z - Complex64::new(0.0, 0.0)).norm(),
            0.0,
        ),
    ])
}

/// Runs every suite; an error inside a suite is reported as a failed check.
type Suite = fn() -> Result<Vec<Check>>;

pub fn run_all() -> Vec<Check> {
    let suites: [(&'static str, Suite); 4] = [
        ("specfun", specfun_suite),
        ("assembly", assembly_suite),
        ("solver", solver_suite),
        ("field", field_suite),
    ];
    let mut out = Vec::new();
    for (name, suite) in suites {
        match suite() {
            Ok(checks) => out.extend(checks),
            Err(e) => out.push(Check {
                suite: name,
                name: format!("error: {e}"),
                passed: false,
                value: f64::NAN,
                tolerance: 0.0,
            }),
        }
    }
    out
}
