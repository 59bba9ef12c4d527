use std::f64::consts::FRAC_PI_4;

use super::{Artifact, CheckOptions, IncidenceReport};
use crate::chain::{ChainPair, PairKind, Which};
use crate::error::{Error, Result};
use crate::family::{pair_circles, pair_quadruple, Family, IndexRule, Selector};
use crate::geom::{
    circle_from_3_points, collinearity, concyclicity_residual, intersect, intersection_angle,
    orthogonality_residual, tangency_point, GeneralizedCircle, Line, Point,
};

/// Every tuple `(i, j)` with `1 ≤ i < j` available in both chains, or
/// `(i, i)` for cross contacts.
fn all_tuples(pair: &ChainPair, family: Family) -> Vec<(usize, usize)> {
    let neighbor = family == Family::CrossNeighbor;
    let limit = |w: Which| {
        let a = pair.available(w);
        if neighbor && !pair.chain(w).closed {
            a - 1
        } else {
            a
        }
    };
    let n = limit(Which::First).min(limit(Which::Second));
    if family == Family::CrossContact {
        return (1..=n).map(|i| (i, i)).collect();
    }
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect()
}

/// The four points a pair family names are concyclic.
///
/// `indices` defaults to every tuple the pair supports. For cross
/// contacts on an orthogonal Pappus pair the companion statements are
/// checked as well: the centers of all those circles and of the shared
/// member are collinear, and one circle (or line) through the common
/// point is orthogonal to all of them.
pub fn check_pair_concyclic(
    pair: &ChainPair,
    family: Family,
    indices: Option<&[(usize, usize)]>,
    opts: &CheckOptions,
) -> Result<IncidenceReport> {
    if !family.needs_pair() {
        return Err(Error::WrongKind(format!(
            "{family} is a single-chain family"
        )));
    }
    let tuples = match indices {
        Some(t) => t.to_vec(),
        None => all_tuples(pair, family),
    };
    let mut report = IncidenceReport::new(format!("pair_concyclic_{family}"), opts.point_tol);
    let mut collinear = 0usize;
    let mut coincident = 0usize;
    for &(i, j) in &tuples {
        if family != Family::CrossContact && i == j {
            return Err(Error::InvalidParameter(format!(
                "tuple ({i}, {j}) names only two points"
            )));
        }
        let q = pair_quadruple(pair, family, i, j)?;
        match concyclicity_residual(q) {
            Ok(c) => {
                if c.collinear {
                    collinear += 1;
                }
                report.push(format!("({i},{j})"), c.residual);
            }
            // at most three distinct points always share a circle
            Err(Error::DuplicatePoints) => {
                coincident += 1;
                report.push(format!("({i},{j}) coincident points"), 0.0);
            }
            Err(e) => return Err(e),
        }
    }
    report.artifact("collinear_quadruples", Artifact::Number(collinear as f64));
    report.artifact("coincident_quadruples", Artifact::Number(coincident as f64));
    if family == Family::CrossContact && pair.kind == PairKind::OrthogonalPappus {
        cross_contact_companions(pair, &mut report)?;
    }
    Ok(report)
}

fn cross_contact_companions(pair: &ChainPair, report: &mut IncidenceReport) -> Result<()> {
    let w = pair
        .apex
        .ok_or_else(|| Error::WrongKind("orthogonal pair without common point".into()))?;
    let circles: Vec<GeneralizedCircle> = pair_circles(
        pair,
        &Selector::new(Family::CrossContact, 0, IndexRule::FixedDifference),
    )?
    .into_iter()
    .map(|c| c.circle)
    .collect();
    let shared = pair.first.circles[pair.shared_first];
    let mut centers: Vec<Point> = circles.iter().filter_map(|c| c.center()).collect();
    if centers.len() != circles.len() {
        return Err(Error::DegenerateMember { index: 0 });
    }
    centers.push(shared.center().ok_or(Error::DegenerateMember {
        index: pair.shared_first,
    })?);
    let (line, residual) = collinearity(&centers)?;
    report.push("centers collinear", residual);
    report.artifact("center_line", Artifact::Line(line));
    if circles.len() < 3 {
        return Ok(());
    }
    let ortho = orthogonal_through(w, &circles[1], &circles[2])?;
    for (t, c) in circles.iter().enumerate() {
        report.push(
            format!("orthogonal to c_{}", t + 1),
            orthogonality_residual(&ortho, c),
        );
    }
    report.push(
        "orthogonal to shared member",
        orthogonality_residual(&ortho, &shared),
    );
    report.push("orthogonal passes through W", ortho.relative_distance_to(w));
    report.artifact("orthogonal_circle", Artifact::Circle(ortho));
    Ok(())
}

/// Generalized circle through `w` orthogonal to two circles.
fn orthogonal_through(
    w: Point,
    a: &GeneralizedCircle,
    b: &GeneralizedCircle,
) -> Result<GeneralizedCircle> {
    let ((oa, ra), (ob, rb)) = match (a.as_circle(), b.as_circle()) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::WrongKind("expected circles".into())),
    };
    // |X − o|² − |X − w|² = r² for both circles
    let (p, q) = (w - oa, w - ob);
    let rhs_a = 0.5 * (ra * ra - oa.norm2() + w.norm2());
    let rhs_b = 0.5 * (rb * rb - ob.norm2() + w.norm2());
    let det = p.cross(q);
    let scale = p.norm() * q.norm();
    if det.abs() <= 1e-12 * scale {
        // the center escapes to infinity: the line through w and both centers
        let line = Line::through(oa, ob)?;
        return Ok(line.to_generalized());
    }
    let x = Point::new(
        (rhs_a * q.y - rhs_b * p.y) / det,
        (p.x * rhs_b - q.x * rhs_a) / det,
    );
    Ok(GeneralizedCircle::Circle {
        center: x,
        radius: x.dist(w),
    })
}

fn apex_of(pair: &ChainPair) -> Result<Point> {
    if pair.kind != PairKind::OrthogonalPappus {
        return Err(Error::WrongKind(
            "check needs an orthogonal Pappus pair".into(),
        ));
    }
    tangency_point(&pair.first.outer, &pair.first.inner, 1e-9)
}

fn parents(pair: &ChainPair) -> [(&'static str, GeneralizedCircle); 4] {
    [
        ("l_1", pair.first.outer),
        ("m_1", pair.first.inner),
        ("l_2", pair.second.outer),
        ("m_2", pair.second.inner),
    ]
}

/// All four parents of an orthogonal pair pass through the tangency point
/// of the first pair of parents, and the two lines of centers cross there
/// at a right angle.
pub fn check_orthogonal_parents(pair: &ChainPair, opts: &CheckOptions) -> Result<IncidenceReport> {
    let w = apex_of(pair)?;
    let mut report = IncidenceReport::new("orthogonal_parents", opts.point_tol);
    let scale = pair.first.scale().max(pair.second.scale());
    for (name, c) in parents(pair) {
        report.push(format!("{name} through W"), c.distance_to(w) / scale);
    }
    let l1 = pair
        .first
        .center_line()
        .ok_or_else(|| Error::WrongKind("parents must be circles".into()))?;
    let l2 = pair
        .second
        .center_line()
        .ok_or_else(|| Error::WrongKind("parents must be circles".into()))?;
    report.push("center lines perpendicular", l1.direction.dot(l2.direction));
    report.push("first center line through W", l1.distance(w) / scale);
    report.push("second center line through W", l2.distance(w) / scale);
    for (x, y) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
        let p = parents(pair);
        report.push(
            format!("{} orthogonal to {}", p[x].0, p[y].0),
            orthogonality_residual(&p[x].1, &p[y].1),
        );
    }
    report.artifact("W", Artifact::Point(w));
    Ok(report)
}

/// The second intersections of the second parents with the first
/// parents are concyclic, and that circle meets all four parents at 45°.
pub fn check_w_circle(pair: &ChainPair, opts: &CheckOptions) -> Result<IncidenceReport> {
    let w = apex_of(pair)?;
    let p = parents(pair);
    let other = |a: &GeneralizedCircle, b: &GeneralizedCircle| -> Result<Point> {
        let pts = intersect(a, b, opts.point_tol)?;
        pts.into_iter()
            .max_by(|x, y| x.dist(w).total_cmp(&y.dist(w)))
            .ok_or(Error::NoIntersection)
    };
    let corners = [
        other(&p[2].1, &p[0].1)?,
        other(&p[2].1, &p[1].1)?,
        other(&p[3].1, &p[0].1)?,
        other(&p[3].1, &p[1].1)?,
    ];
    let mut report = IncidenceReport::new("w_circle", opts.point_tol);
    report.push(
        "W_1..W_4 concyclic",
        concyclicity_residual(corners)?.residual,
    );
    let circle = circle_from_3_points(corners[0], corners[1], corners[2])?;
    report.push("W_4 on circle", circle.relative_distance_to(corners[3]));
    for (name, c) in p {
        let angle = intersection_angle(&circle, &c, opts.point_tol)?;
        report.push_with_tol(
            format!("angle with {name}"),
            angle - FRAC_PI_4,
            opts.angle_tol,
        );
    }
    report.artifact("corners", Artifact::Points(corners.to_vec()));
    report.artifact("circle", Artifact::Circle(circle));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{
        build_mirrored_steiner_pair, build_orthogonal_pappus_pair, build_pappus, Direction, Side,
    };

    fn ortho(count: usize, shared: usize) -> ChainPair {
        let base = build_pappus(
            GeneralizedCircle::circle(Point::ORIGIN, 1.0),
            GeneralizedCircle::circle(Point::new(0.5, 0.0), 0.5),
            count,
            Side::Up,
        )
        .unwrap();
        build_orthogonal_pappus_pair(&base, shared, Direction::Left).unwrap()
    }

    #[test]
    fn orthogonal_through_is_orthogonal() {
        let a = GeneralizedCircle::circle(Point::new(2.0, 0.0), 1.0);
        let b = GeneralizedCircle::circle(Point::new(0.0, 3.0), 1.5);
        let w = Point::new(-1.0, -1.0);
        let c = orthogonal_through(w, &a, &b).unwrap();
        assert!(orthogonality_residual(&c, &a) < 1e-14);
        assert!(orthogonality_residual(&c, &b) < 1e-14);
        assert!(c.distance_to(w) < 1e-14);
    }

    #[test]
    fn cross_families_on_orthogonal_pair() {
        let pair = ortho(8, 0);
        let opts = CheckOptions::default();
        for family in [
            Family::CrossContact,
            Family::CrossOuter,
            Family::CrossInner,
            Family::CrossNeighbor,
        ] {
            let r = check_pair_concyclic(&pair, family, None, &opts).unwrap();
            assert!(r.pass, "{family}: {r:#?}");
        }
    }

    #[test]
    fn parents_and_w_circle() {
        let opts = CheckOptions::default();
        for shared in [0, 2] {
            let pair = ortho(6, shared);
            let r = check_orthogonal_parents(&pair, &opts).unwrap();
            assert!(r.pass, "{r:#?}");
            let r = check_w_circle(
                &pair,
                &CheckOptions {
                    angle_tol: 1e-7,
                    ..opts
                },
            )
            .unwrap();
            assert!(r.pass, "{r:#?}");
        }
    }

    #[test]
    fn mirrored_pair_quadruples() {
        let pair =
            build_mirrored_steiner_pair(6, 3.0, 0.0, std::f64::consts::FRAC_PI_3, None).unwrap();
        let r = check_pair_concyclic(
            &pair,
            Family::CrossNeighbor,
            Some(&[(2, 4)]),
            &CheckOptions::default(),
        )
        .unwrap();
        assert!(r.pass && r.max_residual < 1e-9, "{r:#?}");
        assert!(check_orthogonal_parents(&pair, &CheckOptions::default()).is_err());
    }
}
