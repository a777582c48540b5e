//! Three named geometries with radii `(2, 1, 0.5)` and a point source at
//! `(-40, 30)`. The centers are choices, not published data:
//!
//! | preset   | centers                        | gap between the two largest |
//! |----------|--------------------------------|-----------------------------|
//! | close    | (0,0), (4,0), (−1,−4.5)        | 1.0                         |
//! | moderate | (0,0), (7,0), (2,−7)           | 4.0                         |
//! | far      | (0,0), (10,0), (3,−12)         | 7.0                         |

use std::fmt;
use std::str::FromStr;

use crate::scene::{Cylinder, IncidentField, Point, Scene};
use crate::Error;

pub const RADII: [f64; 3] = [2.0, 1.0, 0.5];
pub const SOURCE: Point = Point(-40.0, 30.0);
/// Wavenumbers of the reference experiments.
pub const WAVENUMBERS: [f64; 3] = [0.6, 3.0, 15.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Close,
    Moderate,
    Far,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Close, Preset::Moderate, Preset::Far];

    pub fn centers(self) -> [Point; 3] {
        match self {
            Preset::Close => [Point(0.0, 0.0), Point(4.0, 0.0), Point(-1.0, -4.5)],
            Preset::Moderate => [Point(0.0, 0.0), Point(7.0, 0.0), Point(2.0, -7.0)],
            Preset::Far => [Point(0.0, 0.0), Point(10.0, 0.0), Point(3.0, -12.0)],
        }
    }

    pub fn scene(self, wavenumber: f64) -> Scene {
        self.scene_with(wavenumber, IncidentField::PointSource { location: SOURCE })
    }

    pub fn scene_with(self, wavenumber: f64, incident: IncidentField) -> Scene {
        let cylinders = self
            .centers()
            .iter()
            .zip(RADII)
            .map(|(c, r)| Cylinder {
                center: *c,
                radius: r,
            })
            .collect();
        Scene::new(cylinders, wavenumber, incident)
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Close => "close",
            Preset::Moderate => "moderate",
            Preset::Far => "far",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown preset '{s}' (close, moderate, far)")))
    }
}
