use serde::{Deserialize, Serialize};

use super::{Artifact, CheckOptions, IncidenceReport};
use crate::chain::{Chain, ChainPair};
use crate::conic::{central_foci, fit_exact_5, fit_min_residual, ConicKind};
use crate::error::{Error, Result};
use crate::family::{
    chain_tuples, contact_quad, contact_triangle, pair_quadruple, pair_tuples, secondary_circle,
    Family, SecondaryCircle, Selector,
};
use crate::geom::{collinearity, GeneralizedCircle, Line, Point, DUPLICATE_TOL};
use crate::inversion::Inversion;

#[derive(Debug, Clone, Copy)]
pub enum ConicSource<'a> {
    Chain(&'a Chain),
    Pair(&'a ChainPair),
}

/// Line the foci of a center conic are predicted to lie on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FociLine {
    /// Through the centers of a chain's two parents.
    CenterLine,
    /// Through the centers of the two outer parents of a pair, i.e. the
    /// perpendicular bisector of their common chord.
    OuterChordBisector,
    /// The same for the two inner parents.
    InnerChordBisector,
    /// Perpendicular bisector of the common point of a Pappus pair and
    /// its inverse in the shared member.
    SharedInverseBisector,
}

impl FociLine {
    pub fn resolve(self, source: ConicSource<'_>) -> Result<Line> {
        let centers = |a: &GeneralizedCircle, b: &GeneralizedCircle| -> Result<Line> {
            match (a.center(), b.center()) {
                (Some(p), Some(q)) => Line::through(p, q),
                _ => Err(Error::WrongKind("parents must be circles".into())),
            }
        };
        match (self, source) {
            (FociLine::CenterLine, ConicSource::Chain(c)) => centers(&c.outer, &c.inner),
            (FociLine::CenterLine, ConicSource::Pair(p)) => centers(&p.first.outer, &p.first.inner),
            (FociLine::OuterChordBisector, ConicSource::Pair(p)) => {
                centers(&p.first.outer, &p.second.outer)
            }
            (FociLine::InnerChordBisector, ConicSource::Pair(p)) => {
                centers(&p.first.inner, &p.second.inner)
            }
            (FociLine::SharedInverseBisector, ConicSource::Pair(p)) => {
                let w = p
                    .apex
                    .ok_or_else(|| Error::WrongKind("pair has no common point".into()))?;
                let image =
                    Inversion::in_circle(&p.first.circles[p.shared_first])?.invert_point(w)?;
                Line::new((w + image) / 2.0, (image - w).perp())
            }
            (line, ConicSource::Chain(_)) => {
                Err(Error::WrongKind(format!("{line:?} needs a chain pair")))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedKind {
    Ellipse,
    Hyperbola,
    #[default]
    Any,
}

impl ExpectedKind {
    fn accepts(self, kind: ConicKind) -> bool {
        match self {
            ExpectedKind::Ellipse => kind.is_elliptic(),
            ExpectedKind::Hyperbola => kind == ConicKind::Hyperbola,
            ExpectedKind::Any => true,
        }
    }
}

fn family_circles(
    source: ConicSource<'_>,
    selector: &Selector,
) -> Result<Vec<Result<SecondaryCircle>>> {
    Ok(match source {
        ConicSource::Chain(chain) => chain_tuples(chain, selector)?
            .into_iter()
            .map(|(i, j)| match selector.family {
                Family::ContactTriangle => contact_triangle(chain, i, j),
                _ => contact_quad(chain, i, j),
            })
            .collect(),
        ConicSource::Pair(pair) => pair_tuples(pair, selector)?
            .into_iter()
            .map(|(i, j)| {
                secondary_circle(
                    (i, j),
                    pair_quadruple(pair, selector.family, i, j)?.to_vec(),
                )
            })
            .collect(),
    })
}

/// Five positions spread evenly over `0..n`.
fn spread_five(n: usize) -> [usize; 5] {
    std::array::from_fn(|t| (t * (n - 1) + 2) / 4)
}

/// Centers of a family of secondary circles lie on one conic.
///
/// The conic is fitted exactly through five centers spread along the
/// family and every other center is a holdout. Members whose points
/// collapse (a secondary line, or fewer than three distinct points) have
/// no finite center and are skipped, as are repeated centers. A family
/// left with at most five distinct centers has nothing to test and is
/// reported with zero holdouts. A rank-deficient design falls back
/// to a collinearity test, since a line of centers is a legitimate
/// outcome.
pub fn check_center_conic(
    source: ConicSource<'_>,
    selector: &Selector,
    expected: ExpectedKind,
    foci_line: Option<&Line>,
    opts: &CheckOptions,
) -> Result<IncidenceReport> {
    let family = family_circles(source, selector)?;
    if family.len() < 6 {
        return Err(Error::BadCount {
            min: 6,
            got: family.len(),
        });
    }
    let mut centers = Vec::new();
    let mut indices = Vec::new();
    let mut skipped = 0usize;
    let mut repeated = 0usize;
    for c in family {
        match c {
            Ok(SecondaryCircle {
                circle: GeneralizedCircle::Circle { center, .. },
                indices: ij,
                ..
            }) => {
                let scale = center.max_abs().max(1.0);
                if centers
                    .iter()
                    .any(|q: &Point| q.dist(center) <= DUPLICATE_TOL * scale)
                {
                    repeated += 1;
                    continue;
                }
                centers.push(center);
                indices.push(ij);
            }
            Ok(_) | Err(Error::DuplicatePoints) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let mut report = IncidenceReport::new("center_conic", opts.conic_tol);
    report.artifact("centers", Artifact::Points(centers.clone()));
    report.artifact("degenerate_skipped", Artifact::Number(skipped as f64));
    report.artifact("repeated_skipped", Artifact::Number(repeated as f64));
    if centers.len() < 6 {
        // five or fewer distinct points always lie on a conic
        report.artifact("kind", Artifact::Text("underdetermined".into()));
        report.artifact("holdouts", Artifact::Number(0.0));
        return Ok(report);
    }
    report.artifact("holdouts", Artifact::Number((centers.len() - 5) as f64));
    let picks = spread_five(centers.len());
    let fit_points = picks.map(|t| centers[t]);
    let conic = match fit_exact_5(&fit_points) {
        Ok(c) => c,
        Err(Error::RankDeficient) => {
            let (line, residual) = collinearity(&centers)?;
            report.push("collinear centers", residual);
            report.push(
                "kind",
                if expected == ExpectedKind::Any {
                    0.0
                } else {
                    1.0
                },
            );
            report.artifact("kind", Artifact::Text("line".into()));
            report.artifact("line", Artifact::Line(line));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    for (t, &p) in centers
        .iter()
        .enumerate()
        .filter(|(t, _)| !picks.contains(t))
    {
        let (i, j) = indices[t];
        report.push(format!("holdout ({i},{j})"), conic.residual(p));
    }
    report.push(
        "kind",
        if expected.accepts(conic.kind) {
            0.0
        } else {
            1.0
        },
    );
    report.artifact(
        "kind",
        Artifact::Text(format!("{:?}", conic.kind).to_lowercase()),
    );
    report.artifact("conic", Artifact::Conic(conic));
    if let Ok(ls) = fit_min_residual(&centers) {
        report.artifact("least_squares", Artifact::Conic(ls));
    }
    if conic.kind.is_central() {
        if let Ok((f1, f2)) = central_foci(&conic) {
            report.artifact("foci", Artifact::Points(vec![f1, f2]));
            if let Some(line) = foci_line {
                let scale = conic.frame.reference;
                report.push_with_tol("focus 1 on line", line.distance(f1) / scale, opts.foci_tol);
                report.push_with_tol("focus 2 on line", line.distance(f2) / scale, opts.foci_tol);
            }
            let focal = |p: Point| {
                let (a, b) = (p.dist(f1), p.dist(f2));
                if conic.kind == ConicKind::Hyperbola {
                    (a - b).abs()
                } else {
                    a + b
                }
            };
            let base = focal(centers[0]);
            let spread = centers
                .iter()
                .map(|&p| (focal(p) - base).abs())
                .fold(0.0, f64::max);
            report.push_with_tol(
                "focal distances constant",
                spread / conic.frame.reference,
                opts.focal_tol,
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{build_pappus, Side};
    use crate::family::IndexRule;
    use crate::geom::GeneralizedCircle;

    #[test]
    fn contact_triangle_centers_on_ellipse() {
        let chain = build_pappus(
            GeneralizedCircle::circle(Point::ORIGIN, 1.0),
            GeneralizedCircle::circle(Point::new(0.5, 0.0), 0.5),
            11,
            Side::Up,
        )
        .unwrap();
        let axis = chain.center_line().unwrap();
        let sel = Selector::new(Family::ContactTriangle, 1, IndexRule::FixedDifference);
        let r = check_center_conic(
            ConicSource::Chain(&chain),
            &sel,
            ExpectedKind::Ellipse,
            Some(&axis),
            &CheckOptions::default(),
        )
        .unwrap();
        assert!(r.pass, "{r:#?}");
        let r = check_center_conic(
            ConicSource::Chain(&chain),
            &sel,
            ExpectedKind::Hyperbola,
            Some(&axis),
            &CheckOptions::default(),
        )
        .unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn too_few_centers() {
        let chain = build_pappus(
            GeneralizedCircle::circle(Point::ORIGIN, 1.0),
            GeneralizedCircle::circle(Point::new(0.5, 0.0), 0.5),
            6,
            Side::Up,
        )
        .unwrap();
        let sel = Selector::new(Family::ContactQuad, 1, IndexRule::FixedDifference);
        assert!(matches!(
            check_center_conic(
                ConicSource::Chain(&chain),
                &sel,
                ExpectedKind::Any,
                None,
                &CheckOptions::default()
            ),
            Err(Error::BadCount { min: 6, got: 5 })
        ));
    }
}
