//! Plane primitives and the tolerance-based predicates every checker is
//! built from.
//!
//! All predicates compare against a relative tolerance. Exact tangency or
//! concyclicity cannot be represented in floating point, so every residual
//! is normalized by the natural length scale of its inputs (radii, RMS
//! radius about the centroid, configuration diameter).

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance for pointwise predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative tolerance under which three points count as collinear.
pub const COLLINEAR_TOL: f64 = 1e-10;

/// Relative separation under which two points count as the same point.
pub const DUPLICATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(radius: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(radius * c, radius * s)
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise rotation by a right angle.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn unit(self) -> Point {
        self / self.norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, o: Point) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        p * self
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, s: f64) -> Point {
        Point::new(self.x / s, self.y / s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Infinite straight line given by an anchor point and a unit direction.
///
/// Used for the chords through a member's two contact points and for the
/// common tangents between neighbouring members.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub point: Point,
    pub direction: Point,
}

impl Line {
    pub fn new(point: Point, direction: Point) -> Result<Self> {
        let n = direction.norm();
        if !(n > 0.0) || !n.is_finite() || !point.is_finite() {
            return Err(Error::InvalidParameter(
                "line direction must be a finite non-zero vector".into(),
            ));
        }
        Ok(Self {
            point,
            direction: direction / n,
        })
    }

    pub fn through(p: Point, q: Point) -> Result<Self> {
        let scale = p.max_abs().max(q.max_abs());
        let sep = p.dist(q);
        if sep <= DUPLICATE_TOL * scale || sep == 0.0 {
            return Err(Error::DuplicatePoints);
        }
        Line::new(p, q - p)
    }

    /// Unit normal (direction rotated counter-clockwise).
    pub fn normal(&self) -> Point {
        self.direction.perp()
    }

    pub fn signed_distance(&self, p: Point) -> f64 {
        self.normal().dot(p - self.point)
    }

    pub fn distance(&self, p: Point) -> f64 {
        self.signed_distance(p).abs()
    }

    pub fn project(&self, p: Point) -> Point {
        self.point + self.direction * self.direction.dot(p - self.point)
    }

    pub fn reflect(&self, p: Point) -> Point {
        let foot = self.project(p);
        foot * 2.0 - p
    }

    pub fn to_generalized(&self) -> GeneralizedCircle {
        let n = self.normal();
        GeneralizedCircle::Line {
            normal: n,
            offset: n.dot(self.point),
        }
    }
}

/// A circle or a line: the class of curves closed under inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneralizedCircle {
    Circle {
        center: Point,
        radius: f64,
    },
    /// Points with `normal · p = offset`; `normal` has unit length.
    Line {
        normal: Point,
        offset: f64,
    },
}

impl GeneralizedCircle {
    pub fn circle(center: Point, radius: f64) -> Self {
        debug_assert!(radius > 0.0, "radius must be positive");
        GeneralizedCircle::Circle { center, radius }
    }

    pub fn line(normal: Point, offset: f64) -> Self {
        let n = normal.norm();
        GeneralizedCircle::Line {
            normal: normal / n,
            offset: offset / n,
        }
    }

    pub fn as_circle(&self) -> Option<(Point, f64)> {
        match *self {
            GeneralizedCircle::Circle { center, radius } => Some((center, radius)),
            GeneralizedCircle::Line { .. } => None,
        }
    }

    pub fn center(&self) -> Option<Point> {
        self.as_circle().map(|(c, _)| c)
    }

    pub fn radius(&self) -> Option<f64> {
        self.as_circle().map(|(_, r)| r)
    }

    pub fn is_line(&self) -> bool {
        matches!(self, GeneralizedCircle::Line { .. })
    }

    /// Unsigned distance from `p` to the curve.
    pub fn distance_to(&self, p: Point) -> f64 {
        match *self {
            GeneralizedCircle::Circle { center, radius } => (p.dist(center) - radius).abs(),
            GeneralizedCircle::Line { normal, offset } => (normal.dot(p) - offset).abs(),
        }
    }

    /// Distance from `p` to the curve relative to the curve's own scale
    /// (radius for circles, `|p|` floored at 1 for lines).
    pub fn relative_distance_to(&self, p: Point) -> f64 {
        match *self {
            GeneralizedCircle::Circle { radius, .. } => self.distance_to(p) / radius,
            GeneralizedCircle::Line { .. } => self.distance_to(p) / p.norm().max(1.0),
        }
    }

    pub fn contains_point(&self, p: Point, tol: f64) -> bool {
        self.relative_distance_to(p) <= tol
    }

    pub fn reflect(&self, axis: &Line) -> Self {
        match *self {
            GeneralizedCircle::Circle { center, radius } => GeneralizedCircle::Circle {
                center: axis.reflect(center),
                radius,
            },
            GeneralizedCircle::Line { normal, offset } => {
                let p = normal * offset;
                let q = p + normal.perp();
                let (p, q) = (axis.reflect(p), axis.reflect(q));
                let dir = (q - p).unit();
                let n = dir.perp();
                GeneralizedCircle::Line {
                    normal: n,
                    offset: n.dot(p),
                }
            }
        }
    }

    /// Equality of the represented curves within a relative tolerance.
    /// Lines compare regardless of normal orientation.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (*self, *other) {
            (
                GeneralizedCircle::Circle {
                    center: c1,
                    radius: r1,
                },
                GeneralizedCircle::Circle {
                    center: c2,
                    radius: r2,
                },
            ) => {
                let scale = r1.max(r2);
                c1.dist(c2) <= tol * scale && (r1 - r2).abs() <= tol * scale
            }
            (
                GeneralizedCircle::Line {
                    normal: n1,
                    offset: o1,
                },
                GeneralizedCircle::Line {
                    normal: n2,
                    offset: o2,
                },
            ) => {
                let s = if n1.dot(n2) < 0.0 { -1.0 } else { 1.0 };
                (n1 - n2 * s).norm() <= tol && (o1 - o2 * s).abs() <= tol * o1.abs().max(1.0)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TangencyClass {
    ExternallyTangent,
    InternallyTangent,
    Intersecting,
    Disjoint,
    Nested,
}

impl TangencyClass {
    pub fn is_tangent(self) -> bool {
        matches!(
            self,
            TangencyClass::ExternallyTangent | TangencyClass::InternallyTangent
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangency {
    pub class: TangencyClass,
    pub residual: f64,
}

fn max_scale(points: &[Point]) -> f64 {
    points.iter().map(|p| p.max_abs()).fold(0.0, f64::max)
}

fn check_distinct(points: &[Point]) -> Result<()> {
    let mut spread = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            spread = spread.max(p.dist(*q));
        }
    }
    let scale = spread.max(max_scale(points));
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let d = p.dist(*q);
            if d == 0.0 || d <= DUPLICATE_TOL * scale {
                return Err(Error::DuplicatePoints);
            }
        }
    }
    Ok(())
}

/// Circle through three points, or the line through them when they are
/// collinear within [`COLLINEAR_TOL`] of the longest side.
pub fn circle_from_3_points(p1: Point, p2: Point, p3: Point) -> Result<GeneralizedCircle> {
    check_distinct(&[p1, p2, p3])?;
    let b = p2 - p1;
    let c = p3 - p1;
    let sides = [
        (p1, p2, b.norm()),
        (p1, p3, c.norm()),
        (p2, p3, p2.dist(p3)),
    ];
    let (fa, fb, longest) = sides
        .iter()
        .copied()
        .fold(sides[0], |acc, s| if s.2 > acc.2 { s } else { acc });
    let twice_area = b.cross(c);
    if twice_area.abs() / longest <= COLLINEAR_TOL * longest {
        let dir = (fb - fa).unit();
        let n = dir.perp();
        return Ok(GeneralizedCircle::Line {
            normal: n,
            offset: n.dot(fa),
        });
    }
    let d = 2.0 * twice_area;
    let (b2, c2) = (b.norm2(), c.norm2());
    let u = Point::new((c.y * b2 - b.y * c2) / d, (b.x * c2 - c.x * b2) / d);
    Ok(GeneralizedCircle::Circle {
        center: p1 + u,
        radius: u.norm(),
    })
}

/// Classifies the relative position of two generalized circles.
///
/// For two circles the residual is the normalized distance from tangency,
/// `min(|d − (r1+r2)|, |d − |r1−r2||) / (r1+r2)`. For a line and a circle
/// it is `|h − r| / r` with `h` the center-to-line distance. Two parallel
/// lines touch at infinity and classify as externally tangent.
pub fn tangency_classify(c1: &GeneralizedCircle, c2: &GeneralizedCircle, tol: f64) -> Tangency {
    use GeneralizedCircle as G;
    match (*c1, *c2) {
        (
            G::Circle {
                center: o1,
                radius: r1,
            },
            G::Circle {
                center: o2,
                radius: r2,
            },
        ) => {
            let d = o1.dist(o2);
            let sum = r1 + r2;
            let diff = (r1 - r2).abs();
            let ext = (d - sum).abs() / sum;
            let int = (d - diff).abs() / sum;
            let residual = ext.min(int);
            let class = if ext <= tol {
                TangencyClass::ExternallyTangent
            } else if int <= tol {
                TangencyClass::InternallyTangent
            } else if d > sum {
                TangencyClass::Disjoint
            } else if d < diff {
                TangencyClass::Nested
            } else {
                TangencyClass::Intersecting
            };
            Tangency { class, residual }
        }
        (G::Circle { center, radius }, G::Line { normal, offset })
        | (G::Line { normal, offset }, G::Circle { center, radius }) => {
            let h = (normal.dot(center) - offset).abs();
            let residual = (h - radius).abs() / radius;
            let class = if residual <= tol {
                TangencyClass::ExternallyTangent
            } else if h < radius {
                TangencyClass::Intersecting
            } else {
                TangencyClass::Disjoint
            };
            Tangency { class, residual }
        }
        (G::Line { normal: n1, .. }, G::Line { normal: n2, .. }) => {
            let residual = n1.cross(n2).abs();
            let class = if residual <= tol {
                TangencyClass::ExternallyTangent
            } else {
                TangencyClass::Intersecting
            };
            Tangency { class, residual }
        }
    }
}

/// The common point of two tangent generalized circles.
pub fn tangency_point(c1: &GeneralizedCircle, c2: &GeneralizedCircle, tol: f64) -> Result<Point> {
    use GeneralizedCircle as G;
    let t = tangency_classify(c1, c2, tol);
    if !t.class.is_tangent() {
        return Err(Error::NotTangent {
            residual: t.residual,
        });
    }
    match (*c1, *c2) {
        (
            G::Circle {
                center: o1,
                radius: r1,
            },
            G::Circle {
                center: o2,
                radius: r2,
            },
        ) => {
            let d = o1.dist(o2);
            if d == 0.0 {
                return Err(Error::NotTangent {
                    residual: t.residual,
                });
            }
            match t.class {
                TangencyClass::ExternallyTangent => Ok(o1 + (o2 - o1) * (r1 / (r1 + r2))),
                _ => {
                    let (big, rb, small) = if r1 >= r2 { (o1, r1, o2) } else { (o2, r2, o1) };
                    Ok(big + (small - big) * (rb / d))
                }
            }
        }
        (G::Circle { center, .. }, G::Line { normal, offset })
        | (G::Line { normal, offset }, G::Circle { center, .. }) => {
            Ok(center - normal * (normal.dot(center) - offset))
        }
        (G::Line { .. }, G::Line { .. }) => Err(Error::AtInfinity),
    }
}

/// Zero iff the two curves meet at right angles.
///
/// Circles: `|d² − r1² − r2²| / (r1² + r2²)`. Circle and line: distance
/// from the center to the line over the radius. Two lines: `|n1 · n2|`.
pub fn orthogonality_residual(c1: &GeneralizedCircle, c2: &GeneralizedCircle) -> f64 {
    use GeneralizedCircle as G;
    match (*c1, *c2) {
        (
            G::Circle {
                center: o1,
                radius: r1,
            },
            G::Circle {
                center: o2,
                radius: r2,
            },
        ) => {
            let (a, b) = (r1 * r1, r2 * r2);
            (o1.dist(o2).powi(2) - a - b).abs() / (a + b)
        }
        (G::Circle { center, radius }, G::Line { normal, offset })
        | (G::Line { normal, offset }, G::Circle { center, radius }) => {
            (normal.dot(center) - offset).abs() / radius
        }
        (G::Line { normal: n1, .. }, G::Line { normal: n2, .. }) => n1.dot(n2).abs(),
    }
}

/// Angle in `[0, π/2]` between the tangent lines at a common point.
pub fn intersection_angle(c1: &GeneralizedCircle, c2: &GeneralizedCircle, tol: f64) -> Result<f64> {
    use GeneralizedCircle as G;
    let t = tangency_classify(c1, c2, tol);
    match t.class {
        TangencyClass::Disjoint | TangencyClass::Nested => return Err(Error::NoIntersection),
        TangencyClass::ExternallyTangent | TangencyClass::InternallyTangent => return Ok(0.0),
        TangencyClass::Intersecting => {}
    }
    let cos = match (*c1, *c2) {
        (
            G::Circle {
                center: o1,
                radius: r1,
            },
            G::Circle {
                center: o2,
                radius: r2,
            },
        ) => (r1 * r1 + r2 * r2 - o1.dist(o2).powi(2)).abs() / (2.0 * r1 * r2),
        (G::Circle { center, radius }, G::Line { normal, offset })
        | (G::Line { normal, offset }, G::Circle { center, radius }) => {
            (normal.dot(center) - offset).abs() / radius
        }
        (G::Line { normal: n1, .. }, G::Line { normal: n2, .. }) => n1.dot(n2).abs(),
    };
    Ok(cos.clamp(0.0, 1.0).acos())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Concyclicity {
    pub residual: f64,
    /// All four points lie on one line, the "infinite radius" circle.
    pub collinear: bool,
}

/// Normalized incircle determinant of four points.
///
/// The points are translated to their centroid and scaled to unit RMS
/// radius before taking `det [x²+y², x, y, 1]`, so the residual is
/// invariant under similarity transforms.
pub fn concyclicity_residual(points: [Point; 4]) -> Result<Concyclicity> {
    check_distinct(&points)?;
    let centroid = points.iter().fold(Point::ORIGIN, |a, &p| a + p) / 4.0;
    let rms = (points.iter().map(|&p| (p - centroid).norm2()).sum::<f64>() / 4.0).sqrt();
    let q = points.map(|p| (p - centroid) / rms);
    let m = Matrix4::from_fn(|r, c| {
        let p = q[r];
        match c {
            0 => p.norm2(),
            1 => p.x,
            2 => p.y,
            _ => 1.0,
        }
    });
    let (sxx, sxy, syy) = q.iter().fold((0.0, 0.0, 0.0), |(a, b, c), p| {
        (a + p.x * p.x, b + p.x * p.y, c + p.y * p.y)
    });
    let (sxx, sxy, syy) = (sxx / 4.0, sxy / 4.0, syy / 4.0);
    let half_tr = 0.5 * (sxx + syy);
    let lambda_min = half_tr - (0.25 * (sxx - syy).powi(2) + sxy * sxy).sqrt();
    Ok(Concyclicity {
        residual: m.determinant().abs(),
        collinear: lambda_min.max(0.0).sqrt() <= COLLINEAR_TOL,
    })
}

/// Least-squares common point of a family of lines.
///
/// Returns the point minimizing the sum of squared distances, together
/// with the largest distance from it to any line divided by the diameter
/// of the configuration (anchor points plus the solution).
pub fn concurrency(lines: &[Line]) -> Result<(Point, f64)> {
    if lines.len() < 2 {
        return Err(Error::InvalidParameter(
            "concurrency needs at least two lines".into(),
        ));
    }
    let (mut a, mut b, mut c, mut rx, mut ry) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for l in lines {
        let n = l.normal();
        let off = n.dot(l.point);
        a += n.x * n.x;
        b += n.x * n.y;
        c += n.y * n.y;
        rx += n.x * off;
        ry += n.y * off;
    }
    let det = a * c - b * b;
    if det <= 1e-12 * (a + c).powi(2) {
        return Err(Error::AllParallel);
    }
    let x = Point::new((c * rx - b * ry) / det, (a * ry - b * rx) / det);
    let worst = lines.iter().map(|l| l.distance(x)).fold(0.0, f64::max);
    let (mut lo, mut hi) = (x, x);
    for l in lines {
        lo = Point::new(lo.x.min(l.point.x), lo.y.min(l.point.y));
        hi = Point::new(hi.x.max(l.point.x), hi.y.max(l.point.y));
    }
    let diameter = hi.dist(lo);
    let diameter = if diameter > 0.0 { diameter } else { 1.0 };
    Ok((x, worst / diameter))
}

/// Tangent line to `c` at the point `p` on it.
pub fn tangent_line_at(c: &GeneralizedCircle, p: Point, tol: f64) -> Result<Line> {
    match *c {
        GeneralizedCircle::Circle { center, radius } => {
            let off = (p.dist(center) - radius).abs();
            if off > tol * radius {
                return Err(Error::PointNotOnCircle { distance: off });
            }
            Line::new(p, (p - center).perp())
        }
        GeneralizedCircle::Line { normal, offset } => {
            let off = (normal.dot(p) - offset).abs();
            if off > tol * p.norm().max(1.0) {
                return Err(Error::PointNotOnCircle { distance: off });
            }
            Line::new(p, normal.perp())
        }
    }
}

/// Common points of two generalized circles (zero, one or two).
pub fn intersect(c1: &GeneralizedCircle, c2: &GeneralizedCircle, tol: f64) -> Result<Vec<Point>> {
    use GeneralizedCircle as G;
    if c1.approx_eq(c2, tol) {
        return Err(Error::CoincidentObjects);
    }
    let t = tangency_classify(c1, c2, tol);
    match (*c1, *c2) {
        (
            G::Circle {
                center: o1,
                radius: r1,
            },
            G::Circle {
                center: o2,
                radius: r2,
            },
        ) => match t.class {
            TangencyClass::ExternallyTangent | TangencyClass::InternallyTangent => {
                Ok(vec![tangency_point(c1, c2, tol)?])
            }
            TangencyClass::Disjoint | TangencyClass::Nested => Ok(vec![]),
            TangencyClass::Intersecting => {
                let d = o1.dist(o2);
                let u = (o2 - o1) / d;
                let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
                let h = (r1 * r1 - a * a).max(0.0).sqrt();
                let base = o1 + u * a;
                Ok(vec![base + u.perp() * h, base - u.perp() * h])
            }
        },
        (G::Circle { center, radius }, G::Line { normal, offset })
        | (G::Line { normal, offset }, G::Circle { center, radius }) => {
            let foot = center - normal * (normal.dot(center) - offset);
            match t.class {
                TangencyClass::ExternallyTangent => Ok(vec![foot]),
                TangencyClass::Intersecting => {
                    let h = foot.dist(center);
                    let half = (radius * radius - h * h).max(0.0).sqrt();
                    let dir = normal.perp();
                    Ok(vec![foot + dir * half, foot - dir * half])
                }
                _ => Ok(vec![]),
            }
        }
        (
            G::Line {
                normal: n1,
                offset: o1,
            },
            G::Line {
                normal: n2,
                offset: o2,
            },
        ) => {
            let det = n1.cross(n2);
            if det.abs() <= tol {
                return Ok(vec![]);
            }
            Ok(vec![Point::new(
                (o1 * n2.y - o2 * n1.y) / det,
                (n1.x * o2 - n2.x * o1) / det,
            )])
        }
    }
}

/// Line through the centroid minimizing squared distances, with the
/// largest point-to-line distance divided by the point set's diameter.
pub fn collinearity(points: &[Point]) -> Result<(Line, f64)> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter(
            "collinearity needs at least two points".into(),
        ));
    }
    let n = points.len() as f64;
    let centroid = points.iter().fold(Point::ORIGIN, |a, &p| a + p) / n;
    let (sxx, sxy, syy) = points.iter().fold((0.0, 0.0, 0.0), |(a, b, c), &p| {
        let q = p - centroid;
        (a + q.x * q.x, b + q.x * q.y, c + q.y * q.y)
    });
    let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let line = Line::new(centroid, Point::polar(1.0, angle))?;
    let mut diameter = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            diameter = diameter.max(p.dist(*q));
        }
    }
    if diameter == 0.0 {
        return Err(Error::DuplicatePoints);
    }
    let worst = points.iter().map(|&p| line.distance(p)).fold(0.0, f64::max);
    Ok((line, worst / diameter))
}
