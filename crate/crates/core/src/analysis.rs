//! Truncation-error harness: `E(N)` sweeps against a reference solution,
//! the decay envelopes `γ1`/`γ2`, log-linear rate fits and the σ-series
//! diagnostics behind the envelopes.

use rayon::prelude::*;
use std::fmt::Write as _;

use crate::assembly::MemSystem;
use crate::coeffs::CoefficientVector;
pub use crate::coeffs::Norm;
use crate::scene::{IncidentField, PairGeometry, Scene};
use crate::solver::{self, SolveResult};
use crate::specfun;
use crate::{Error, Result};

/// The reference truncation is this many modes above the largest `N`.
pub const REFERENCE_OFFSET: usize = 5;
/// Values at or below this are treated as round-off and skipped by fits.
pub const FIT_FLOOR: f64 = 1e-13;
/// Values at or above this are treated as pre-asymptotic and skipped by fits.
pub const FIT_CEILING: f64 = 1e-2;
pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;
pub const MIN_FIT_POINTS: usize = 4;
/// Sub-exponential slack per unit `N` allowed by the envelope bound check.
pub const BOUND_SLACK: f64 = 0.05;

/// Dense solve at `N_ref = n_max + 5`.
pub fn reference_solution(scene: &Scene, n_max: usize) -> Result<SolveResult> {
    solver::solve_dense(&MemSystem::assemble(scene, n_max + REFERENCE_OFFSET)?)
}

/// `‖reference − candidate‖` after zero-padding the candidate.
pub fn approximation_error(
    reference: &CoefficientVector,
    candidate: &CoefficientVector,
    norm: Norm,
) -> Result<f64> {
    if candidate.truncation() > reference.truncation() {
        return Err(Error::DimensionMismatch(format!(
            "candidate N={} exceeds reference N={}",
            candidate.truncation(),
            reference.truncation()
        )));
    }
    Ok(reference.padded_difference(candidate)?.norm(norm))
}

/// Bases of the two envelopes; `γ(N) = base^N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaBases {
    pub gamma1: f64,
    pub gamma2: f64,
}

/// Maximum over all terms of each envelope. A single cylinder under a plane
/// wave has no terms, and both bases are 0.
pub fn gamma_bases(scene: &Scene, geom: &PairGeometry) -> GammaBases {
    let mut g1 = 0.0f64;
    let mut g2 = 0.0f64;
    let r = |p: usize| scene.cylinders[p].radius;
    let point = matches!(scene.incident, IncidentField::PointSource { .. });
    for p in 0..scene.len() {
        if let (true, Some(dp)) = (point, geom.source_distance(p)) {
            g1 = g1.max(r(p) / dp);
            g2 = g2.max(r(p) / dp);
        }
        for q in 0..scene.len() {
            if p == q {
                continue;
            }
            let d = geom.distance(p, q);
            g1 = g1.max(r(p) / (d - r(q)));
            g2 = g2.max(match geom.source_distance(q) {
                Some(dq) if point => r(p) * dq / (d * dq - r(q) * r(q)),
                _ => r(p) / d,
            });
        }
    }
    GammaBases {
        gamma1: g1,
        gamma2: g2,
    }
}

fn power(base: f64, n: usize) -> f64 {
    if n == 0 {
        1.0
    } else {
        base.powi(n as i32)
    }
}

pub fn gamma1(scene: &Scene, geom: &PairGeometry, n: usize) -> f64 {
    power(gamma_bases(scene, geom).gamma1, n)
}

pub fn gamma2(scene: &Scene, geom: &PairGeometry, n: usize) -> f64 {
    power(gamma_bases(scene, geom).gamma2, n)
}

/// Least-squares fit of `ln(value)` against `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    /// Log-slope per unit `N`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
    pub first_n: f64,
    pub last_n: f64,
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let r2 = if ss_tot <= f64::EPSILON * f64::EPSILON * n {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    (slope, intercept, r2)
}

/// Rate fit over the last `tail_fraction` of the points inside
/// `(FIT_FLOOR, FIT_CEILING)` (at least [`MIN_FIT_POINTS`] of them).
pub fn fit_rate(n_values: &[f64], values: &[f64], tail_fraction: f64) -> Result<RateFit> {
    fit_rate_window(n_values, values, tail_fraction, FIT_FLOOR, FIT_CEILING)
}

pub fn fit_rate_window(
    n_values: &[f64],
    values: &[f64],
    tail_fraction: f64,
    floor: f64,
    ceiling: f64,
) -> Result<RateFit> {
    if n_values.len() != values.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} N values vs {} curve values",
            n_values.len(),
            values.len()
        )));
    }
    let kept: Vec<(f64, f64)> = n_values
        .iter()
        .zip(values)
        .filter(|(_, v)| **v > floor && **v < ceiling)
        .map(|(n, v)| (*n, v.ln()))
        .collect();
    if kept.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints {
            needed: MIN_FIT_POINTS,
            have: kept.len(),
        });
    }
    let take =
        ((tail_fraction.clamp(0.0, 1.0) * kept.len() as f64).ceil() as usize).max(MIN_FIT_POINTS);
    let tail = &kept[kept.len() - take..];
    let x: Vec<f64> = tail.iter().map(|t| t.0).collect();
    let y: Vec<f64> = tail.iter().map(|t| t.1).collect();
    let (slope, intercept, r_squared) = least_squares(&x, &y);
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        points: take,
        first_n: x[0],
        last_n: x[take - 1],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedRates {
    pub e: Option<RateFit>,
    pub gamma1: Option<RateFit>,
    pub gamma2: Option<RateFit>,
    pub e1_surrogate: Option<RateFit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub scene_id: String,
    pub wavenumber: f64,
    pub norm: Norm,
    pub n_values: Vec<usize>,
    pub n_ref: usize,
    pub e: Vec<f64>,
    pub gamma1: Vec<f64>,
    pub gamma2: Vec<f64>,
    /// Measurable part of the first-order error, when requested.
    pub e1_surrogate: Option<Vec<f64>>,
    pub rates: FittedRates,
}

impl ConvergenceReport {
    fn ns(&self) -> Vec<f64> {
        self.n_values.iter().map(|&n| n as f64).collect()
    }

    pub fn fit(&self, curve: &[f64]) -> Result<RateFit> {
        fit_rate(&self.ns(), curve, DEFAULT_TAIL_FRACTION)
    }

    fn refit(&mut self) {
        let ns = self.ns();
        let fit = |c: &[f64]| fit_rate(&ns, c, DEFAULT_TAIL_FRACTION).ok();
        self.rates = FittedRates {
            e: fit(&self.e),
            gamma1: fit(&self.gamma1),
            gamma2: fit(&self.gamma2),
            e1_surrogate: self.e1_surrogate.as_deref().and_then(fit),
        };
    }

    /// First `N` with `E(N) < E(0)/10`; needs `N = 0` in the sweep.
    pub fn onset(&self) -> Option<usize> {
        let first = self.n_values.iter().position(|&n| n == 0)?;
        let threshold = self.e[first] / 10.0;
        self.n_values
            .iter()
            .zip(&self.e)
            .find(|(_, e)| **e < threshold)
            .map(|(n, _)| *n)
    }

    /// `N,E,gamma1,gamma2[,E1_surrogate]` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,E,gamma1,gamma2");
        if self.e1_surrogate.is_some() {
            out.push_str(",E1_surrogate");
        }
        out.push('\n');
        for (i, n) in self.n_values.iter().enumerate() {
            write!(
                out,
                "{n},{:.16e},{:.16e},{:.16e}",
                self.e[i], self.gamma1[i], self.gamma2[i]
            )
            .unwrap();
            if let Some(s) = &self.e1_surrogate {
                write!(out, ",{:.16e}", s[i]).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn check_n_list(n_list: &[usize]) -> Result<usize> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(
            "N list must be nonempty and strictly ascending".into(),
        ));
    }
    Ok(*n_list.last().unwrap())
}

fn base_report(
    scene: &Scene,
    n_list: &[usize],
    norm: Norm,
    n_ref: usize,
    e: Vec<f64>,
) -> ConvergenceReport {
    let bases = gamma_bases(scene, &scene.geometry());
    ConvergenceReport {
        scene_id: "scene".into(),
        wavenumber: scene.wavenumber,
        norm,
        n_values: n_list.to_vec(),
        n_ref,
        e,
        gamma1: n_list.iter().map(|&n| power(bases.gamma1, n)).collect(),
        gamma2: n_list.iter().map(|&n| power(bases.gamma2, n)).collect(),
        e1_surrogate: None,
        rates: FittedRates {
            e: None,
            gamma1: None,
            gamma2: None,
            e1_surrogate: None,
        },
    }
}

/// `E(N)` for every `N` in `n_list` (ascending) against a dense reference
/// at `max(n_list) + 5`. Solves run in parallel; results do not depend on
/// the thread count.
pub fn convergence_sweep(scene: &Scene, n_list: &[usize], norm: Norm) -> Result<ConvergenceReport> {
    let n_max = check_n_list(n_list)?;
    let reference = reference_solution(scene, n_max)?;
    let e = n_list
        .par_iter()
        .map(|&n| {
            let sol = solver::solve_dense(&MemSystem::assemble(scene, n)?)?;
            approximation_error(&reference.solution, &sol.solution, norm)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = base_report(scene, n_list, norm, n_max + REFERENCE_OFFSET, e);
    report.refit();
    Ok(report)
}

/// [`convergence_sweep`] plus the measurable part of the first-order error,
/// `‖G − G̃(N)‖ + ‖(Ã(N_ref) − Ã(N)) G̃(N_ref)‖`, both at truncation `N_ref`.
/// The bounded factor `‖(I + Ã)⁻¹‖` is dropped, so this is a surrogate.
pub fn first_order_error_sweep(
    scene: &Scene,
    n_list: &[usize],
    norm: Norm,
) -> Result<ConvergenceReport> {
    let mut report = convergence_sweep(scene, n_list, norm)?;
    let reference = MemSystem::assemble(scene, report.n_ref)?;
    let g_ref = &reference.rhs;
    let coupled_ref = reference.apply_coupling(g_ref)?;
    let surrogate = n_list
        .par_iter()
        .map(|&n| {
            let sys = MemSystem::assemble(scene, n)?;
            let rhs_gap = g_ref.padded_difference(&sys.rhs)?.norm(norm);
            let coupled = sys.apply_coupling(&g_ref.truncate(n)?)?;
            let coupling_gap = coupled_ref.padded_difference(&coupled)?.norm(norm);
            Ok(rhs_gap + coupling_gap)
        })
        .collect::<Result<Vec<_>>>()?;
    report.e1_surrogate = Some(surrogate);
    report.refit();
    Ok(report)
}

/// Envelope bound `ln E(N) − ln γ1(N) ≤ 0.05 N + C` over the fitted tail of `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    /// Smallest `C` that makes the bound hold on the tail.
    pub constant: f64,
    /// Least-squares slope of `ln E − ln γ1` on the tail.
    pub excess_slope: f64,
    pub points: usize,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.constant.is_finite() && self.excess_slope <= BOUND_SLACK
    }
}

pub fn bound_check(report: &ConvergenceReport) -> Result<BoundCheck> {
    let fit = report.fit(&report.e)?;
    let rows: Vec<(f64, f64)> = report
        .n_values
        .iter()
        .enumerate()
        .filter(|(_, &n)| (n as f64) >= fit.first_n && (n as f64) <= fit.last_n)
        .filter(|(i, _)| report.e[*i] > FIT_FLOOR && report.e[*i] < FIT_CEILING)
        .map(|(i, &n)| (n as f64, report.e[i].ln() - report.gamma1[i].ln()))
        .collect();
    let constant = rows
        .iter()
        .map(|(n, g)| g - BOUND_SLACK * n)
        .fold(f64::NEG_INFINITY, f64::max);
    let x: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let (excess_slope, _, _) = least_squares(&x, &y);
    Ok(BoundCheck {
        constant,
        excess_slope,
        points: rows.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaKernel {
    /// `(a_q/d_pq)^{2n}`.
    Standard,
    /// `(a_q²/(d_pq d_qx₀))^{2n}`.
    PointSource,
    /// `(e k a_q²/(2 d_pq))^{2n} n^{−2n}`.
    PlaneWave,
}

/// Partial sum `Σ_{n=1}^{n_max} σ^pq(m, n)` with
/// `σ = ((m+n)/m)^{2m} ((m+n)/n)^{2n} (a_p/d_pq)^{2m} · kernel(n)`,
/// stopping once terms fall below `1e-18` of the partial sum.
pub fn sigma_series(
    scene: &Scene,
    geom: &PairGeometry,
    p: usize,
    q: usize,
    m: u32,
    kernel: SigmaKernel,
    n_max: u32,
) -> Result<f64> {
    if p == q || p >= scene.len() || q >= scene.len() {
        return Err(Error::Domain(format!(
            "sigma series needs distinct cylinders, got ({p}, {q})"
        )));
    }
    if m == 0 {
        return Err(Error::Domain("sigma series needs m >= 1".into()));
    }
    let d = geom.distance(p, q);
    let (ap, aq) = (scene.cylinders[p].radius, scene.cylinders[q].radius);
    let log_kernel = |n: f64| -> Result<f64> {
        Ok(match kernel {
            SigmaKernel::Standard => 2.0 * n * (aq / d).ln(),
            SigmaKernel::PointSource => {
                let dq = geom.source_distance(q).ok_or_else(|| {
                    Error::Domain("point-source kernel needs a point source".into())
                })?;
                2.0 * n * (aq * aq / (d * dq)).ln()
            }
            SigmaKernel::PlaneWave => {
                2.0 * n * (std::f64::consts::E * scene.wavenumber * aq * aq / (2.0 * d)).ln()
                    - 2.0 * n * n.ln()
            }
        })
    };
    let mf = f64::from(m);
    let log_front = 2.0 * mf * (ap / d).ln();
    let mut sum = 0.0;
    let mut prev_term = 0.0;
    let mut growing = false;
    for n in 1..=n_max {
        let nf = f64::from(n);
        let log_term = 2.0 * mf * ((mf + nf) / mf).ln()
            + 2.0 * nf * ((mf + nf) / nf).ln()
            + log_front
            + log_kernel(nf)?;
        let term = log_term.exp();
        sum += term;
        if term < 1e-18 * sum {
            return Ok(sum);
        }
        growing = n > 1 && term >= prev_term;
        prev_term = term;
    }
    if growing {
        return Err(Error::NonConvergent(format!(
            "sigma terms still growing at n = {n_max}"
        )));
    }
    Ok(sum)
}

/// `(₂F₁(m+1, m+1; 1; (a/b)²) / [(b²/(b²−a²))^m ((b+a)/(b−a))^m])^{1/m}`,
/// which tends to a limit no larger than one.
pub fn hyp2f1_bound_ratio(m: u32, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > a) {
        return Err(Error::Domain(format!(
            "need 0 < a < b, got a = {a}, b = {b}"
        )));
    }
    let mf = f64::from(m.max(1));
    let f = specfun::hyp2f1_peaked(m, (a / b).powi(2))?;
    let log_bound = mf * ((b * b / (b * b - a * a)).ln() + ((b + a) / (b - a)).ln());
    Ok(((f.ln() - log_bound) / mf).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Breakdown {
    FirstOrderValid,
    FirstOrderSuspect,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakdownReport {
    pub classification: Breakdown,
    pub largest: usize,
    pub mid: usize,
    pub gap: f64,
    /// `5/4` of the mid-sized radius.
    pub threshold: f64,
}

/// Compares the gap between the two largest cylinders with `5/4` of the
/// smaller of the two radii.
pub fn breakdown_check(scene: &Scene, geom: &PairGeometry) -> Result<BreakdownReport> {
    if scene.len() < 2 {
        return Err(Error::Domain(
            "breakdown check needs at least two cylinders".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scene.len()).collect();
    order.sort_by(|&a, &b| {
        scene.cylinders[b]
            .radius
            .total_cmp(&scene.cylinders[a].radius)
    });
    let (largest, mid) = (order[0], order[1]);
    let (al, am) = (scene.cylinders[largest].radius, scene.cylinders[mid].radius);
    let gap = geom.distance(largest, mid) - al - am;
    let threshold = 1.25 * am;
    let classification = if gap > threshold {
        Breakdown::FirstOrderValid
    } else {
        Breakdown::FirstOrderSuspect
    };
    Ok(BreakdownReport {
        classification,
        largest,
        mid,
        gap,
        threshold,
    })
}
