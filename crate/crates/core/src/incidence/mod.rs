//! One checker per incidence statement. Each returns an
//! [`IncidenceReport`] listing every residual it measured.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::conic::Conic;
use crate::geom::{GeneralizedCircle, Line, Point};

mod annulus;
mod conics;
mod locus;
mod pairs;
mod pappus;

pub use annulus::{check_no_orthogonal_annulus, common_orthogonal_circles};
pub use conics::{check_center_conic, ConicSource, ExpectedKind, FociLine};
pub use locus::{check_chord_locus, Branch, LocusProblem, LocusSample};
pub use pairs::{check_orthogonal_parents, check_pair_concyclic, check_w_circle};
pub use pappus::{
    check_ortho_circle, check_pappus_concurrency, check_quad_circle_angle,
    check_quad_circle_angles, check_triangle_circle_tangencies, check_triangle_circle_tangency,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckOptions {
    /// Pointwise incidence, tangency and concyclicity.
    pub point_tol: f64,
    /// Angles, in radians.
    pub angle_tol: f64,
    /// Holdout residuals of conic fits.
    pub conic_tol: f64,
    /// Distance of fitted foci from a predicted line, relative to the
    /// size of the fitted point set.
    pub foci_tol: f64,
    /// Relative spread of focal distance sums or differences.
    pub focal_tol: f64,
    /// Smallest residual that counts as a genuine failure.
    pub failure_floor: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            point_tol: 1e-9,
            angle_tol: 1e-9,
            conic_tol: 1e-7,
            foci_tol: 1e-7,
            focal_tol: 1e-6,
            failure_floor: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub label: String,
    pub value: f64,
    /// Per-entry tolerance when it differs from the report tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Artifact {
    Point(Point),
    Points(Vec<Point>),
    Circle(GeneralizedCircle),
    Circles(Vec<GeneralizedCircle>),
    Line(Line),
    Conic(Conic),
    Number(f64),
    Text(String),
}

/// Outcome of one check.
///
/// `pass` holds exactly when every residual is within its tolerance
/// (the report tolerance unless the entry carries its own). Non-finite
/// residuals always fail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidenceReport {
    pub check_name: String,
    pub residuals: Vec<Residual>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub artifacts: BTreeMap<String, Artifact>,
}

impl IncidenceReport {
    pub fn new(check_name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            check_name: check_name.into(),
            residuals: Vec::new(),
            max_residual: 0.0,
            tolerance,
            pass: true,
            artifacts: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, value: f64) -> &mut Self {
        self.push_entry(label.into(), value, None)
    }

    pub fn push_with_tol(
        &mut self,
        label: impl Into<String>,
        value: f64,
        tolerance: f64,
    ) -> &mut Self {
        let t = if tolerance == self.tolerance {
            None
        } else {
            Some(tolerance)
        };
        self.push_entry(label.into(), value, t)
    }

    fn push_entry(&mut self, label: String, value: f64, tolerance: Option<f64>) -> &mut Self {
        let value = if value.is_nan() {
            f64::INFINITY
        } else {
            value.abs()
        };
        self.residuals.push(Residual {
            label,
            value,
            tolerance,
        });
        self.refresh();
        self
    }

    pub fn artifact(&mut self, key: impl Into<String>, value: Artifact) -> &mut Self {
        self.artifacts.insert(key.into(), value);
        self
    }

    /// Replaces the report tolerance, keeping per-entry overrides.
    pub fn set_tolerance(&mut self, tolerance: f64) {
        self.tolerance = tolerance;
        self.refresh();
    }

    /// Value of the first residual with this label.
    pub fn residual(&self, label: &str) -> Option<f64> {
        self.residuals
            .iter()
            .find(|r| r.label == label)
            .map(|r| r.value)
    }

    /// Largest residual whose label starts with `prefix`.
    pub fn max_with_prefix(&self, prefix: &str) -> f64 {
        self.residuals
            .iter()
            .filter(|r| r.label.starts_with(prefix))
            .map(|r| r.value)
            .fold(0.0, f64::max)
    }

    fn refresh(&mut self) {
        self.max_residual = self.residuals.iter().map(|r| r.value).fold(0.0, f64::max);
        self.pass = self
            .residuals
            .iter()
            .all(|r| r.value.is_finite() && r.value <= r.tolerance.unwrap_or(self.tolerance));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_follows_residuals() {
        let mut r = IncidenceReport::new("demo", 1e-9);
        assert!(r.pass);
        r.push("a", 1e-12);
        assert!(r.pass);
        r.push_with_tol("b", 5e-7, 1e-6);
        assert!(r.pass);
        assert_eq!(r.max_residual, 5e-7);
        r.push("c", 2e-9);
        assert!(!r.pass);
        r.set_tolerance(1e-8);
        assert!(r.pass);
        r.push("d", f64::NAN);
        assert!(!r.pass && r.max_residual.is_infinite());
        assert_eq!(r.max_with_prefix("a"), 1e-12);
    }
}
