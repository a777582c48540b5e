//! Scene description: cylinders, wavenumber and incident field.
//!
//! Scenes serialise to a small JSON document:
//!
//! ```json
//! {
//!   "cylinders": [{"center": [0.0, 0.0], "radius": 2.0}, {"center": [7.0, 0.0], "radius": 1.0}],
//!   "wavenumber": 0.6,
//!   "incident": {"type": "point", "location": [-40.0, 30.0]}
//! }
//! ```
//!
//! `incident` is either `{"type": "plane", "angle": β}` (propagation
//! direction `(cos β, sin β)`, radians) or `{"type": "point", "location":
//! [x, y]}`. Unknown fields are rejected.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use crate::specfun;
use crate::Complex64;
use crate::{Error, Result};

/// Absolute slack (length units) in the strict disjointness test.
pub const DISJOINT_SLACK: f64 = 1e-12;
/// `|J_m(ka)| / |H_m(ka)|` below this (for `m < ka`) triggers the
/// near-eigenvalue warning.
pub const EIGENVALUE_WARN_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point(pub f64, pub f64);

impl Point {
    pub fn dist(self, other: Point) -> f64 {
        (self.0 - other.0).hypot(self.1 - other.1)
    }

    /// Polar angle of `other - self` in `(-π, π]`.
    pub fn angle_to(self, other: Point) -> f64 {
        (other.1 - self.1).atan2(other.0 - self.0)
    }

    pub fn translate(self, dx: f64, dy: f64) -> Point {
        Point(self.0 + dx, self.1 + dy)
    }

    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point(c * self.0 - s * self.1, s * self.0 + c * self.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cylinder {
    pub center: Point,
    pub radius: f64,
}

impl Cylinder {
    pub fn new(x: f64, y: f64, radius: f64) -> Self {
        Cylinder {
            center: Point(x, y),
            radius,
        }
    }

    pub fn contains_closed(&self, p: Point) -> bool {
        self.center.dist(p) <= self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum IncidentField {
    /// `exp(i k β·x)` with `β = (cos angle, sin angle)`.
    #[serde(rename = "plane")]
    PlaneWave { angle: f64 },
    /// `(i/4) H_0(k |x - location|)`.
    #[serde(rename = "point")]
    PointSource { location: Point },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub cylinders: Vec<Cylinder>,
    pub wavenumber: f64,
    pub incident: IncidentField,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Empty,
    NonPositiveRadius {
        cylinder: usize,
        radius: f64,
    },
    NonPositiveWavenumber(f64),
    NonFinite,
    Overlap {
        p: usize,
        q: usize,
        distance: f64,
        min_distance: f64,
    },
    SourceInside {
        cylinder: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// `k a_p` sits close to a zero of `J_m`, i.e. `k²` is close to an
    /// interior Dirichlet eigenvalue of cylinder `cylinder`.
    NearEigenvalue {
        cylinder: usize,
        mode: i32,
        ratio: f64,
    },
    /// Some envelope base `a_p / (d_pq - a_q)` is at least one.
    NonContractive { p: usize, q: usize, base: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "scene has no cylinders"),
            Violation::NonPositiveRadius { cylinder, radius } => {
                write!(f, "cylinder {cylinder}: nonpositive radius {radius}")
            }
            Violation::NonPositiveWavenumber(k) => write!(f, "nonpositive wavenumber {k}"),
            Violation::NonFinite => write!(f, "non-finite number in scene"),
            Violation::Overlap {
                p,
                q,
                distance,
                min_distance,
            } => write!(
                f,
                "overlap: cylinders {p} and {q} have center distance {distance} <= {min_distance}"
            ),
            Violation::SourceInside { cylinder } => {
                write!(f, "point source lies inside cylinder {cylinder}")
            }
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NearEigenvalue {
                cylinder,
                mode,
                ratio,
            } => write!(
                f,
                "near eigenvalue: cylinder {cylinder}, |J_{mode}(ka)|/|H_{mode}(ka)| = {ratio:.3e}"
            ),
            Warning::NonContractive { p, q, base } => {
                write!(f, "non-contractive: a_{p}/(d_{p}{q} - a_{q}) = {base:.4}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<Self> {
        if self.is_ok() {
            Ok(self)
        } else {
            let msg: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
            Err(Error::InvalidScene(msg.join("; ")))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            writeln!(f, "ok")?;
        }
        for v in &self.violations {
            writeln!(f, "error: {v}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// Smallest ratio `|J_m(x)| / |H_m(x)|` over orders `m < x` (the only orders
/// where `J_m` can vanish), with the order attaining it.
pub(crate) fn eigenvalue_proximity(x: f64, max_order: usize) -> Result<Option<(i32, f64)>> {
    if x <= 0.0 {
        return Ok(None);
    }
    let top = max_order.min(specfun::MAX_ORDER);
    let h = specfun::hankel1_seq_scaled(top, x)?;
    let j = specfun::bessel_j_seq_scaled(top, x)?;
    let mut best: Option<(i32, f64)> = None;
    for (m, (jm, hm)) in j.iter().zip(&h).enumerate() {
        if (m as f64) >= x {
            break;
        }
        let ratio = jm.abs_ratio(hm);
        if best.is_none_or(|(_, r)| ratio < r) {
            best = Some((m as i32, ratio));
        }
    }
    Ok(best)
}

impl Scene {
    pub fn new(cylinders: Vec<Cylinder>, wavenumber: f64, incident: IncidentField) -> Self {
        Scene {
            cylinders,
            wavenumber,
            incident,
        }
    }

    pub fn len(&self) -> usize {
        self.cylinders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    pub fn min_radius(&self) -> f64 {
        self.cylinders
            .iter()
            .map(|c| c.radius)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_radius(&self) -> f64 {
        self.cylinders.iter().map(|c| c.radius).fold(0.0, f64::max)
    }

    pub fn with_wavenumber(&self, k: f64) -> Scene {
        Scene {
            wavenumber: k,
            ..self.clone()
        }
    }

    pub fn with_incident(&self, incident: IncidentField) -> Scene {
        Scene {
            incident,
            ..self.clone()
        }
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Scene {
        let mut s = self.clone();
        for c in &mut s.cylinders {
            c.center = c.center.translate(dx, dy);
        }
        if let IncidentField::PointSource { location } = &mut s.incident {
            *location = location.translate(dx, dy);
        }
        s
    }

    /// Rigid rotation about the origin; plane-wave directions rotate too.
    pub fn rotated(&self, angle: f64) -> Scene {
        let mut s = self.clone();
        for c in &mut s.cylinders {
            c.center = c.center.rotate(angle);
        }
        s.incident = match s.incident {
            IncidentField::PointSource { location } => IncidentField::PointSource {
                location: location.rotate(angle),
            },
            IncidentField::PlaneWave { angle: b } => IncidentField::PlaneWave {
                angle: (b + angle).rem_euclid(2.0 * PI),
            },
        };
        s
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.cylinders.is_empty() {
            report.violations.push(Violation::Empty);
        }
        let finite = self.wavenumber.is_finite()
            && self
                .cylinders
                .iter()
                .all(|c| c.radius.is_finite() && c.center.0.is_finite() && c.center.1.is_finite())
            && match self.incident {
                IncidentField::PlaneWave { angle } => angle.is_finite(),
                IncidentField::PointSource { location } => {
                    location.0.is_finite() && location.1.is_finite()
                }
            };
        if !finite {
            report.violations.push(Violation::NonFinite);
            return report;
        }
        if self.wavenumber <= 0.0 {
            report
                .violations
                .push(Violation::NonPositiveWavenumber(self.wavenumber));
        }
        for (p, c) in self.cylinders.iter().enumerate() {
            if c.radius <= 0.0 {
                report.violations.push(Violation::NonPositiveRadius {
                    cylinder: p,
                    radius: c.radius,
                });
            }
        }
        for p in 0..self.len() {
            for q in p + 1..self.len() {
                let (cp, cq) = (&self.cylinders[p], &self.cylinders[q]);
                let distance = cp.center.dist(cq.center);
                let min_distance = cp.radius + cq.radius;
                if distance <= min_distance + DISJOINT_SLACK {
                    report.violations.push(Violation::Overlap {
                        p,
                        q,
                        distance,
                        min_distance,
                    });
                }
            }
        }
        if let IncidentField::PointSource { location } = self.incident {
            for (p, c) in self.cylinders.iter().enumerate() {
                if c.contains_closed(location) {
                    report
                        .violations
                        .push(Violation::SourceInside { cylinder: p });
                }
            }
        }
        if !report.is_ok() {
            return report;
        }

        for (p, c) in self.cylinders.iter().enumerate() {
            let ka = self.wavenumber * c.radius;
            let top = ka.ceil() as usize + 10;
            if let Ok(Some((mode, ratio))) = eigenvalue_proximity(ka, top) {
                if ratio < EIGENVALUE_WARN_RATIO {
                    report.warnings.push(Warning::NearEigenvalue {
                        cylinder: p,
                        mode,
                        ratio,
                    });
                }
            }
        }
        for p in 0..self.len() {
            for q in 0..self.len() {
                if p == q {
                    continue;
                }
                let d = self.cylinders[p].center.dist(self.cylinders[q].center);
                let base = self.cylinders[p].radius / (d - self.cylinders[q].radius);
                if base >= 1.0 {
                    report.warnings.push(Warning::NonContractive { p, q, base });
                }
            }
        }
        report
    }

    pub fn from_json(text: &str) -> Result<Scene> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serialisation cannot fail")
    }

    pub fn geometry(&self) -> PairGeometry {
        PairGeometry::new(self)
    }

    /// Value of the incident field at `x`.
    pub fn incident_at(&self, x: Point) -> Result<Complex64> {
        match self.incident {
            IncidentField::PlaneWave { angle } => {
                let phase = self.wavenumber * (angle.cos() * x.0 + angle.sin() * x.1);
                Ok(Complex64::from_polar(1.0, phase))
            }
            IncidentField::PointSource { location } => {
                specfun::green(self.wavenumber, location.dist(x))
            }
        }
    }
}

/// Pairwise center distances and angles, plus source distances.
///
/// `angle(p, q)` is the polar angle of `O_q - O_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairGeometry {
    count: usize,
    distance: Vec<f64>,
    angle: Vec<f64>,
    source_distance: Option<Vec<f64>>,
    source_angle: Option<Vec<f64>>,
}

impl PairGeometry {
    pub fn new(scene: &Scene) -> Self {
        let count = scene.len();
        let mut distance = vec![0.0; count * count];
        let mut angle = vec![0.0; count * count];
        for (p, cp) in scene.cylinders.iter().enumerate() {
            for (q, cq) in scene.cylinders.iter().enumerate() {
                if p != q {
                    distance[p * count + q] = cp.center.dist(cq.center);
                    angle[p * count + q] = cp.center.angle_to(cq.center);
                }
            }
        }
        let (source_distance, source_angle) = match scene.incident {
            IncidentField::PointSource { location } => (
                Some(
                    scene
                        .cylinders
                        .iter()
                        .map(|c| c.center.dist(location))
                        .collect(),
                ),
                Some(
                    scene
                        .cylinders
                        .iter()
                        .map(|c| c.center.angle_to(location))
                        .collect(),
                ),
            ),
            IncidentField::PlaneWave { .. } => (None, None),
        };
        PairGeometry {
            count,
            distance,
            angle,
            source_distance,
            source_angle,
        }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn distance(&self, p: usize, q: usize) -> f64 {
        self.distance[p * self.count + q]
    }

    pub fn angle(&self, p: usize, q: usize) -> f64 {
        self.angle[p * self.count + q]
    }

    /// `d_{p x0}` for point sources.
    pub fn source_distance(&self, p: usize) -> Option<f64> {
        self.source_distance.as_ref().map(|d| d[p])
    }

    /// Polar angle of the source about `O_p`.
    pub fn source_angle(&self, p: usize) -> Option<f64> {
        self.source_angle.as_ref().map(|d| d[p])
    }
}
