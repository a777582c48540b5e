//! Scattered and total fields from solved density coefficients.
//!
//! Outside all cylinders the single-layer potential of
//! `φ^p = Σ_m φ_m^p b_m^p` is
//!
//! `u^s(x) = Σ_p (i/4)√(2π a_p) Σ_m φ_m^p J_m(ka_p) H_m(k r_p) e^{imθ_p}`,
//!
//! with `(r_p, θ_p)` the polar coordinates of `x` about `O_p`. The constant is
//! checked against direct quadrature of the potential
//! ([`single_layer_field_quadrature`]).

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::coeffs::CoefficientVector;
use crate::scene::{Point, Scene};
use crate::specfun::{self, signed_order};
use crate::{Error, Result};

/// Evaluation points must clear every boundary by this fraction of the
/// smallest radius.
pub const BOUNDARY_MARGIN: f64 = 1e-9;
/// Quadrature needs the point at least this fraction of the smallest radius
/// away from every boundary.
pub const QUADRATURE_MARGIN: f64 = 0.01;

fn check_solution(scene: &Scene, solution: &CoefficientVector) -> Result<()> {
    if solution.cylinders() != scene.len() {
        return Err(Error::DimensionMismatch(format!(
            "solution has {} cylinders, scene has {}",
            solution.cylinders(),
            scene.len()
        )));
    }
    Ok(())
}

fn check_exterior(scene: &Scene, x: Point, margin: f64, too_close: bool) -> Result<()> {
    let tol = margin * scene.min_radius();
    for (p, c) in scene.cylinders.iter().enumerate() {
        let gap = c.center.dist(x) - c.radius;
        if gap <= 0.0 {
            return Err(Error::InsideCylinder {
                x: x.0,
                y: x.1,
                cylinder: p,
            });
        }
        if gap < tol {
            return Err(if too_close {
                Error::TooCloseToBoundary {
                    x: x.0,
                    y: x.1,
                    cylinder: p,
                }
            } else {
                Error::InsideCylinder {
                    x: x.0,
                    y: x.1,
                    cylinder: p,
                }
            });
        }
    }
    Ok(())
}

pub fn incident_field(scene: &Scene, x: Point) -> Result<Complex64> {
    scene.incident_at(x)
}

/// Multipole evaluation of `u^s(x)`.
pub fn scattered_field(scene: &Scene, solution: &CoefficientVector, x: Point) -> Result<Complex64> {
    check_solution(scene, solution)?;
    check_exterior(scene, x, BOUNDARY_MARGIN, false)?;
    multipole_sum(scene, solution, x)
}

/// The series also converges on the boundaries themselves, where the
/// single-layer potential is continuous.
fn multipole_sum(scene: &Scene, solution: &CoefficientVector, x: Point) -> Result<Complex64> {
    let n = solution.truncation();
    let k = scene.wavenumber;
    let mut total = Complex64::new(0.0, 0.0);
    for (p, c) in scene.cylinders.iter().enumerate() {
        let coeffs = solution.block(p);
        if coeffs.iter().all(|z| z.norm_sqr() == 0.0) {
            continue;
        }
        let j = specfun::bessel_j_seq_scaled(n, k * c.radius)?;
        let h = specfun::hankel1_seq_scaled(n, k * c.center.dist(x))?;
        let theta = c.center.angle_to(x);
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, phi) in coeffs.iter().enumerate() {
            let m = i as i32 - n as i32;
            let jh = (signed_order(&j, m) * signed_order(&h, m)).to_c64()?;
            sum += phi * jh * Complex64::from_polar(1.0, f64::from(m) * theta);
        }
        total += sum * Complex64::new(0.0, 0.25 * (2.0 * PI * c.radius).sqrt());
    }
    Ok(total)
}

/// Density `φ^p(y)` at boundary angle `t`.
fn density(block: &[Complex64], radius: f64, t: f64) -> Complex64 {
    let n = (block.len() / 2) as i32;
    let s: Complex64 = block
        .iter()
        .enumerate()
        .map(|(i, phi)| phi * Complex64::from_polar(1.0, f64::from(i as i32 - n) * t))
        .sum();
    s / (2.0 * PI * radius).sqrt()
}

/// Trapezoid quadrature of `∫_Γ G(x − y) φ(y) dσ(y)`.
pub fn single_layer_field_quadrature(
    scene: &Scene,
    solution: &CoefficientVector,
    x: Point,
    n_quad: usize,
) -> Result<Complex64> {
    check_solution(scene, solution)?;
    check_exterior(scene, x, QUADRATURE_MARGIN, true)?;
    if n_quad == 0 {
        return Err(Error::Domain("n_quad must be positive".into()));
    }
    let h = 2.0 * PI / n_quad as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for (p, c) in scene.cylinders.iter().enumerate() {
        let block = solution.block(p);
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..n_quad {
            let t = i as f64 * h;
            let y = Point(
                c.center.0 + c.radius * t.cos(),
                c.center.1 + c.radius * t.sin(),
            );
            sum += specfun::green(scene.wavenumber, x.dist(y))? * density(block, c.radius, t);
        }
        total += sum * (c.radius * h);
    }
    Ok(total)
}

/// `max |u^inc + u^s|` over `samples_per_cylinder` equispaced points on
/// each boundary. Sampling on `Γ_p` itself is exact for the multipole
/// series; an outward offset `δ` would add about `|∂_n u| δ` to the result.
pub fn boundary_residual(
    scene: &Scene,
    solution: &CoefficientVector,
    samples_per_cylinder: usize,
) -> Result<f64> {
    check_solution(scene, solution)?;
    let points: Vec<Point> = scene
        .cylinders
        .iter()
        .flat_map(|c| {
            let r = c.radius;
            (0..samples_per_cylinder).map(move |i| {
                let t = 2.0 * PI * i as f64 / samples_per_cylinder as f64;
                Point(c.center.0 + r * t.cos(), c.center.1 + r * t.sin())
            })
        })
        .collect();
    let values = points
        .par_iter()
        .map(|&x| Ok((incident_field(scene, x)? + multipole_sum(scene, solution, x)?).norm()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValue {
    pub incident: Complex64,
    pub scattered: Complex64,
    pub total: Complex64,
}

/// One grid point; `value` is `None` inside (or on) a cylinder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub point: Point,
    pub value: Option<FieldValue>,
}

impl FieldSample {
    pub fn inside(&self) -> bool {
        self.value.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub origin: Point,
    pub spacing: (f64, f64),
    pub counts: (usize, usize),
}

impl GridSpec {
    /// `counts.0 × counts.1` points covering `[x0, x1] × [y0, y1]`.
    pub fn covering(x: (f64, f64), y: (f64, f64), counts: (usize, usize)) -> GridSpec {
        let step =
            |(a, b): (f64, f64), n: usize| if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
        GridSpec {
            origin: Point(x.0, y.0),
            spacing: (step(x, counts.0), step(y, counts.1)),
            counts,
        }
    }

    /// Points in row-major order (x fastest).
    pub fn points(&self) -> Vec<Point> {
        let (nx, ny) = self.counts;
        (0..ny)
            .flat_map(|j| {
                (0..nx).map(move |i| {
                    Point(
                        self.origin.0 + i as f64 * self.spacing.0,
                        self.origin.1 + j as f64 * self.spacing.1,
                    )
                })
            })
            .collect()
    }
}

pub fn total_field_grid(
    scene: &Scene,
    solution: &CoefficientVector,
    grid: &GridSpec,
) -> Result<Vec<FieldSample>> {
    check_solution(scene, solution)?;
    grid.points()
        .par_iter()
        .map(|&x| {
            if check_exterior(scene, x, BOUNDARY_MARGIN, false).is_err() {
                return Ok(FieldSample {
                    point: x,
                    value: None,
                });
            }
            let incident = incident_field(scene, x)?;
            let scattered = scattered_field(scene, solution, x)?;
            Ok(FieldSample {
                point: x,
                value: Some(FieldValue {
                    incident,
                    scattered,
                    total: incident + scattered,
                }),
            })
        })
        .collect()
}

/// `x,y,re_total,im_total,abs_total,inside`; masked rows carry `nan`.
pub fn grid_csv(samples: &[FieldSample]) -> String {
    let mut out = String::from("x,y,re_total,im_total,abs_total,inside\n");
    for s in samples {
        let (x, y) = (s.point.0, s.point.1);
        match s.value {
            Some(v) => writeln!(
                out,
                "{x:.16e},{y:.16e},{:.16e},{:.16e},{:.16e},0",
                v.total.re,
                v.total.im,
                v.total.norm()
            ),
            None => writeln!(out, "{x:.16e},{y:.16e},nan,nan,nan,1"),
        }
        .unwrap();
    }
    out
}
