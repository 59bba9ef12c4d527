use serde::{Deserialize, Serialize};

use super::{Artifact, CheckOptions, IncidenceReport};
use crate::conic::fit_exact_5;
use crate::error::{Error, Result};
use crate::geom::{GeneralizedCircle, Point};
use crate::inversion::Inversion;

/// Which of the two circles about a point of the line is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Larger circle: the chord lies on the far side of the unit circle's
    /// center.
    #[default]
    Plus,
    Minus,
}

/// Circles centered on the line `x = offset` cutting a chord of length
/// `chord` from the unit circle, inverted in the circle about
/// `omega_center` of radius `omega_radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusProblem {
    pub chord: f64,
    pub offset: f64,
    pub omega_center: Point,
    pub omega_radius: f64,
    #[serde(default)]
    pub branch: Branch,
}

/// Image center of the circle about `(offset, y)`, by both paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocusSample {
    pub y: f64,
    pub formula: Point,
    pub oracle: Point,
}

/// Relative distance under which a sample counts as sitting on a pole of
/// the center map.
pub const POLE_TOL: f64 = 1e-6;

impl LocusProblem {
    pub fn validate(&self) -> Result<()> {
        if !(self.chord > 0.0 && self.chord < 2.0) {
            return Err(Error::BadChord(self.chord));
        }
        if !(self.offset > 0.0) || !self.offset.is_finite() {
            return Err(Error::InvalidParameter(
                "line offset must be positive".into(),
            ));
        }
        if !(self.omega_radius > 0.0)
            || !self.omega_radius.is_finite()
            || !self.omega_center.is_finite()
        {
            return Err(Error::InvalidParameter(
                "omega must have a positive radius".into(),
            ));
        }
        Ok(())
    }

    fn sign(&self) -> f64 {
        match self.branch {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    /// Closed-form image center, or `None` near a pole.
    pub fn formula_center(&self, y: f64) -> Option<Point> {
        let m = Point::new(self.offset, y);
        let c = self.omega_center;
        let s = 2.0 * (1.0 - self.chord * self.chord / 4.0).sqrt();
        let r2 = m.norm2() + self.sign() * s * m.norm() + 1.0;
        let mc2 = (m - c).norm2();
        let denom = mc2 - r2;
        if denom.abs() <= POLE_TOL * (mc2 + r2) {
            return None;
        }
        Some(c + (m - c) * (self.omega_radius * self.omega_radius / denom))
    }

    /// The circle about `(offset, y)` through the endpoints of its chord
    /// with the unit circle, built from the chord geometry.
    pub fn source_circle(&self, y: f64) -> GeneralizedCircle {
        let m = Point::new(self.offset, y);
        let u = m.unit();
        let half_gap = (1.0 - self.chord * self.chord / 4.0).sqrt();
        let midpoint = u * (-self.sign() * half_gap);
        let endpoint = midpoint + u.perp() * (self.chord / 2.0);
        GeneralizedCircle::Circle {
            center: m,
            radius: m.dist(endpoint),
        }
    }

    /// Image center computed by inverting [`Self::source_circle`].
    pub fn oracle_center(&self, y: f64) -> Result<Point> {
        let inv = Inversion::new(self.omega_center, self.omega_radius * self.omega_radius)?;
        inv.invert_gcircle(&self.source_circle(y))
            .center()
            .ok_or(Error::AtInfinity)
    }

    pub fn sample(&self, y: f64) -> Result<Option<LocusSample>> {
        let Some(formula) = self.formula_center(y) else {
            return Ok(None);
        };
        Ok(Some(LocusSample {
            y,
            formula,
            oracle: self.oracle_center(y)?,
        }))
    }
}

/// Image centers lie on one conic.
///
/// Five samples spread over `y_range` fix the conic and `holdout`
/// interleaved samples are tested against it. Every sample is computed
/// twice, by the closed form and by inverting the constructed circle.
pub fn check_chord_locus(
    problem: &LocusProblem,
    holdout: usize,
    y_range: (f64, f64),
    opts: &CheckOptions,
) -> Result<IncidenceReport> {
    problem.validate()?;
    let (lo, hi) = y_range;
    if !(hi > lo) {
        return Err(Error::InvalidParameter("empty sample range".into()));
    }
    let mut report = IncidenceReport::new("locus", opts.conic_tol);
    let mut skipped = 0usize;
    let mut take = |y: f64, report: &mut IncidenceReport| -> Result<Option<Point>> {
        match problem.sample(y)? {
            None => {
                skipped += 1;
                Ok(None)
            }
            Some(s) => {
                let agreement = s.formula.dist(s.oracle) / s.formula.norm().max(1.0);
                report.push_with_tol(format!("paths agree at y={y:.6}"), agreement, 1e-10);
                Ok(Some(s.formula))
            }
        }
    };
    let mut fit = Vec::with_capacity(5);
    let mut attempt = 0usize;
    while fit.len() < 5 {
        if attempt > 40 {
            return Err(Error::RankDeficient);
        }
        let t = (fit.len() as f64 + 0.013 * attempt as f64) / 4.0;
        if let Some(p) = take(lo + (hi - lo) * t.min(1.0), &mut report)? {
            fit.push(p);
        } else {
            attempt += 1;
        }
    }
    let conic = fit_exact_5(&[fit[0], fit[1], fit[2], fit[3], fit[4]])?;
    let mut tested = Vec::new();
    for t in 0..holdout {
        let y = lo + (hi - lo) * (t as f64 + 0.5) / holdout as f64;
        if let Some(p) = take(y, &mut report)? {
            report.push(format!("holdout y={y:.6}"), conic.residual(p));
            tested.push(p);
        }
    }
    report.artifact("conic", Artifact::Conic(conic));
    report.artifact(
        "kind",
        Artifact::Text(format!("{:?}", conic.kind).to_lowercase()),
    );
    report.artifact("poles_skipped", Artifact::Number(skipped as f64));
    report.artifact("fit_points", Artifact::Points(fit));
    report.artifact("holdout_points", Artifact::Points(tested));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> LocusProblem {
        LocusProblem {
            chord: 1.0,
            offset: 2.0,
            omega_center: Point::new(0.0, 3.0),
            omega_radius: 1.0,
            branch: Branch::Plus,
        }
    }

    #[test]
    fn source_circle_cuts_the_requested_chord() {
        for branch in [Branch::Plus, Branch::Minus] {
            let p = LocusProblem {
                branch,
                ..example()
            };
            let (m, r) = p.source_circle(0.7).as_circle().unwrap();
            let pts = crate::geom::intersect(
                &GeneralizedCircle::circle(Point::ORIGIN, 1.0),
                &GeneralizedCircle::circle(m, r),
                1e-12,
            )
            .unwrap();
            assert_eq!(pts.len(), 2);
            assert!((pts[0].dist(pts[1]) - 1.0).abs() < 1e-12);
            let s = 3f64.sqrt();
            let expected = m.norm2() + if branch == Branch::Plus { s } else { -s } * m.norm() + 1.0;
            assert!((r * r - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn worked_example() {
        let r = check_chord_locus(&example(), 100, (-3.0, 3.0), &CheckOptions::default()).unwrap();
        assert!(r.pass, "{}", r.max_residual);
        assert_eq!(r.artifacts["poles_skipped"], Artifact::Number(0.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            check_chord_locus(
                &LocusProblem {
                    chord: 2.0,
                    ..example()
                },
                10,
                (-1.0, 1.0),
                &CheckOptions::default()
            ),
            Err(Error::BadChord(2.0))
        );
        assert!(check_chord_locus(
            &LocusProblem {
                offset: 0.0,
                ..example()
            },
            10,
            (-1.0, 1.0),
            &CheckOptions::default()
        )
        .is_err());
    }

    #[test]
    fn branches_merge_as_chord_approaches_diameter() {
        let plus = LocusProblem {
            chord: 2.0 - 1e-15,
            ..example()
        };
        let minus = LocusProblem {
            branch: Branch::Minus,
            ..plus
        };
        for y in [-2.0, 0.0, 1.5] {
            let (a, b) = (
                plus.formula_center(y).unwrap(),
                minus.formula_center(y).unwrap(),
            );
            assert!(a.dist(b) < 1e-6, "{a:?} {b:?}");
        }
    }
}
