//! Conics through sample points: exact five-point fits, least-squares
//! fits, Sampson residuals, classification and foci.
//!
//! Fits run on points translated to their centroid and scaled to RMS
//! radius √2. The conic keeps that frame so residuals can be evaluated
//! where the coefficients are well conditioned.

use nalgebra::{DMatrix, Matrix2, Matrix3, Matrix5, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;

/// Relative tolerance on singular values and invariants.
pub const CONIC_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicKind {
    Ellipse,
    Circle,
    Hyperbola,
    Parabola,
    DegenerateLines,
}

impl ConicKind {
    pub fn is_elliptic(self) -> bool {
        matches!(self, ConicKind::Ellipse | ConicKind::Circle)
    }

    pub fn is_central(self) -> bool {
        matches!(
            self,
            ConicKind::Ellipse | ConicKind::Circle | ConicKind::Hyperbola
        )
    }
}

/// Affine frame `q = (p − origin) / unit` in which the conic was fitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub origin: Point,
    pub unit: f64,
    /// Length that residuals are reported relative to.
    pub reference: f64,
}

impl Frame {
    pub const IDENTITY: Frame = Frame {
        origin: Point::ORIGIN,
        unit: 1.0,
        reference: 1.0,
    };

    fn of_points(points: &[Point]) -> Result<Frame> {
        let n = points.len() as f64;
        let origin = points.iter().fold(Point::ORIGIN, |a, &p| a + p) / n;
        let rms = (points.iter().map(|&p| (p - origin).norm2()).sum::<f64>() / n).sqrt();
        if !(rms > 0.0) || !rms.is_finite() {
            return Err(Error::DuplicatePoints);
        }
        Ok(Frame {
            origin,
            unit: rms / std::f64::consts::SQRT_2,
            reference: rms,
        })
    }

    pub fn to_local(&self, p: Point) -> Point {
        (p - self.origin) / self.unit
    }

    pub fn to_world(&self, q: Point) -> Point {
        self.origin + q * self.unit
    }
}

/// `A x² + B xy + C y² + D x + E y + F = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conic {
    /// World coefficients, unit norm, first non-zero entry positive.
    pub coefficients: [f64; 6],
    pub kind: ConicKind,
    pub frame: Frame,
    /// Coefficients in `frame`, canonicalized the same way.
    pub local: [f64; 6],
}

fn canonical(mut v: [f64; 6]) -> [f64; 6] {
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm == 0.0 {
        return v;
    }
    let lead = v
        .iter()
        .copied()
        .find(|c| c.abs() > 1e-14 * norm)
        .unwrap_or(1.0);
    let s = lead.signum() / norm;
    for c in &mut v {
        *c *= s;
    }
    v
}

fn local_to_world(v: &[f64; 6], frame: &Frame) -> [f64; 6] {
    let [a, b, c, d, e, f] = *v;
    let s = 1.0 / frame.unit;
    let (ox, oy) = (frame.origin.x, frame.origin.y);
    // substitute X = s (x − ox), Y = s (y − oy)
    let (a2, b2, c2) = (a * s * s, b * s * s, c * s * s);
    let (d1, e1) = (d * s, e * s);
    canonical([
        a2,
        b2,
        c2,
        -2.0 * a2 * ox - b2 * oy + d1,
        -2.0 * c2 * oy - b2 * ox + e1,
        a2 * ox * ox + b2 * ox * oy + c2 * oy * oy - d1 * ox - e1 * oy + f,
    ])
}

fn design_row(q: Point) -> [f64; 6] {
    [q.x * q.x, q.x * q.y, q.y * q.y, q.x, q.y, 1.0]
}

fn check_distinct(points: &[Point]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::InvalidParameter("conic sample is not finite".into()));
        }
        for q in &points[i + 1..] {
            if p == q {
                return Err(Error::DuplicatePoints);
            }
        }
    }
    Ok(())
}

impl Conic {
    /// Conic with the given world coefficients, evaluated in world units.
    pub fn from_coefficients(coefficients: [f64; 6]) -> Conic {
        let local = canonical(coefficients);
        Conic {
            coefficients: local,
            kind: classify(&local),
            frame: Frame::IDENTITY,
            local,
        }
    }

    fn from_local(local: [f64; 6], frame: Frame) -> Conic {
        let local = canonical(local);
        Conic {
            coefficients: local_to_world(&local, &frame),
            kind: classify(&local),
            frame,
            local,
        }
    }

    fn eval_local(&self, q: Point) -> (f64, Point) {
        let [a, b, c, d, e, f] = self.local;
        let value = a * q.x * q.x + b * q.x * q.y + c * q.y * q.y + d * q.x + e * q.y + f;
        let grad = Point::new(2.0 * a * q.x + b * q.y + d, b * q.x + 2.0 * c * q.y + e);
        (value, grad)
    }

    /// Sampson distance of `p`, relative to the RMS radius of the fit
    /// points (world units for conics built from coefficients), and
    /// whether the gradient underflowed so `|Q(p)|` was returned instead.
    pub fn residual_detail(&self, p: Point) -> (f64, bool) {
        let (value, grad) = self.eval_local(self.frame.to_local(p));
        let g = grad.norm();
        if g < 1e-12 {
            return (value.abs(), true);
        }
        (
            value.abs() / g * self.frame.unit / self.frame.reference,
            false,
        )
    }

    pub fn residual(&self, p: Point) -> f64 {
        self.residual_detail(p).0
    }

    /// Center where the gradient vanishes.
    pub fn center(&self) -> Result<Point> {
        if !self.kind.is_central() {
            return Err(Error::NotCentral);
        }
        let [a, b, c, d, e, _] = self.local;
        let m = Matrix2::new(2.0 * a, b, b, 2.0 * c);
        let x = m
            .lu()
            .solve(&nalgebra::Vector2::new(-d, -e))
            .ok_or(Error::NotCentral)?;
        Ok(self.frame.to_world(Point::new(x[0], x[1])))
    }

    /// Both foci of a central conic in lexicographic order.
    pub fn foci(&self) -> Result<(Point, Point)> {
        central_foci(self)
    }

    /// Points along each branch, `per_branch` per branch. Hyperbola
    /// branches run out to `extent` (world units) from the center.
    pub fn sample_branches(&self, per_branch: usize, extent: f64) -> Vec<Vec<Point>> {
        let Ok(axes) = principal_axes(self) else {
            return Vec::new();
        };
        let n = per_branch.max(2);
        match self.kind {
            ConicKind::Ellipse | ConicKind::Circle => {
                let pts = (0..n)
                    .map(|i| {
                        let t = 2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64;
                        axes.center
                            + axes.major * (axes.a * t.cos())
                            + axes.minor * (axes.b * t.sin())
                    })
                    .collect();
                vec![self.map_local(pts)]
            }
            ConicKind::Hyperbola => {
                let reach = extent / self.frame.unit;
                let t_max = (reach / axes.a.min(axes.b)).max(1.0).asinh() + 1.0;
                [1.0, -1.0]
                    .iter()
                    .map(|&sign| {
                        let pts = (0..n)
                            .map(|i| {
                                let t = -t_max + 2.0 * t_max * i as f64 / (n - 1) as f64;
                                axes.center
                                    + axes.major * (sign * axes.a * t.cosh())
                                    + axes.minor * (axes.b * t.sinh())
                            })
                            .collect();
                        self.map_local(pts)
                    })
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    fn map_local(&self, pts: Vec<Point>) -> Vec<Point> {
        pts.into_iter().map(|q| self.frame.to_world(q)).collect()
    }
}

/// Classification from the discriminant and the 3×3 determinant.
pub fn classify(v: &[f64; 6]) -> ConicKind {
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let [a, b, c, d, e, f] = v.map(|x| x / norm);
    let m = Matrix3::new(
        a,
        b / 2.0,
        d / 2.0,
        b / 2.0,
        c,
        e / 2.0,
        d / 2.0,
        e / 2.0,
        f,
    );
    let disc = b * b - 4.0 * a * c;
    if m.determinant().abs() <= CONIC_TOL {
        ConicKind::DegenerateLines
    } else if disc.abs() <= CONIC_TOL {
        ConicKind::Parabola
    } else if disc < 0.0 {
        if b.abs() <= CONIC_TOL && (a - c).abs() <= CONIC_TOL {
            ConicKind::Circle
        } else {
            ConicKind::Ellipse
        }
    } else {
        ConicKind::Hyperbola
    }
}

/// The conic through five points.
///
/// Coefficients are the signed 5×5 minors of the design matrix, which
/// span its null space when the rank is five.
pub fn fit_exact_5(points: &[Point; 5]) -> Result<Conic> {
    check_distinct(points)?;
    let frame = Frame::of_points(points)?;
    let rows: Vec<[f64; 6]> = points
        .iter()
        .map(|&p| design_row(frame.to_local(p)))
        .collect();
    let design = DMatrix::from_fn(5, 6, |r, c| rows[r][c]);
    let sv = design.clone().svd(false, false).singular_values;
    let (max, min) = (sv.max(), sv.min());
    if min <= CONIC_TOL * max {
        return Err(Error::RankDeficient);
    }
    let mut v = [0.0; 6];
    for (k, slot) in v.iter_mut().enumerate() {
        let minor = Matrix5::from_fn(|r, c| rows[r][if c < k { c } else { c + 1 }]);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *slot = sign * minor.determinant();
    }
    Ok(Conic::from_local(v, frame))
}

/// Unit-norm coefficients minimizing the algebraic residual over six or
/// more points.
pub fn fit_min_residual(points: &[Point]) -> Result<Conic> {
    if points.len() < 6 {
        return Err(Error::BadCount {
            min: 6,
            got: points.len(),
        });
    }
    check_distinct(points)?;
    let frame = Frame::of_points(points)?;
    let design = DMatrix::from_fn(points.len(), 6, |r, c| {
        design_row(frame.to_local(points[r]))[c]
    });
    let svd = design.svd(false, true);
    let v_t = svd.v_t.ok_or(Error::RankDeficient)?;
    let sv = svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));
    let max = sv.max();
    if sv[order[1]] <= CONIC_TOL * max {
        return Err(Error::RankDeficient);
    }
    let row = v_t.row(order[0]);
    Ok(Conic::from_local(
        [row[0], row[1], row[2], row[3], row[4], row[5]],
        frame,
    ))
}

struct Axes {
    center: Point,
    /// Axis carrying the foci (local frame).
    major: Point,
    minor: Point,
    a: f64,
    b: f64,
}

fn principal_axes(conic: &Conic) -> Result<Axes> {
    if !conic.kind.is_central() {
        return Err(Error::NotCentral);
    }
    let [a, b, c, d, e, f] = conic.local;
    let s = Matrix2::new(a, b / 2.0, b / 2.0, c);
    let center = (s * 2.0)
        .lu()
        .solve(&nalgebra::Vector2::new(-d, -e))
        .ok_or(Error::NotCentral)?;
    let center = Point::new(center[0], center[1]);
    let f0 = f + 0.5 * (d * center.x + e * center.y);
    let eig = SymmetricEigen::new(s);
    let sq = [-f0 / eig.eigenvalues[0], -f0 / eig.eigenvalues[1]];
    let vec = |i: usize| Point::new(eig.eigenvectors[(0, i)], eig.eigenvectors[(1, i)]);
    let (i, j) = match conic.kind {
        ConicKind::Hyperbola => {
            if sq[0] > 0.0 {
                (0, 1)
            } else {
                (1, 0)
            }
        }
        _ => {
            if sq[0] < 0.0 && sq[1] < 0.0 {
                return Err(Error::NotCentral);
            }
            if sq[0] >= sq[1] {
                (0, 1)
            } else {
                (1, 0)
            }
        }
    };
    if !(sq[i] > 0.0) {
        return Err(Error::NotCentral);
    }
    Ok(Axes {
        center,
        major: vec(i),
        minor: vec(j),
        a: sq[i].sqrt(),
        b: sq[j].abs().sqrt(),
    })
}

/// Foci of an ellipse or hyperbola, lexicographically ordered.
pub fn central_foci(conic: &Conic) -> Result<(Point, Point)> {
    let axes = principal_axes(conic)?;
    let c = match conic.kind {
        ConicKind::Hyperbola => (axes.a * axes.a + axes.b * axes.b).sqrt(),
        _ => (axes.a * axes.a - axes.b * axes.b).abs().sqrt(),
    };
    let f1 = conic.frame.to_world(axes.center + axes.major * c);
    let f2 = conic.frame.to_world(axes.center - axes.major * c);
    let ordered = if (f1.x, f1.y) <= (f2.x, f2.y) {
        (f1, f2)
    } else {
        (f2, f1)
    };
    Ok(ordered)
}
