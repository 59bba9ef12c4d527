use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    tangency_classify, tangency_point, GeneralizedCircle, Point, TangencyClass, DEFAULT_TOL,
};

/// Relative tolerance under which a circle is treated as passing through
/// the inversion center (and so maps to a line).
pub const THROUGH_CENTER_TOL: f64 = 1e-12;

/// Inversion in the circle with the given center and squared radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inversion {
    pub center: Point,
    pub power: f64,
}

impl Inversion {
    pub fn new(center: Point, power: f64) -> Result<Self> {
        if !(power > 0.0) || !power.is_finite() || !center.is_finite() {
            return Err(Error::InvalidInversion);
        }
        Ok(Self { center, power })
    }

    /// Inversion in a circle (radius squared becomes the power).
    pub fn in_circle(c: &GeneralizedCircle) -> Result<Self> {
        let (center, radius) = c
            .as_circle()
            .ok_or_else(|| Error::WrongKind("inversion circle must be a circle".into()))?;
        Inversion::new(center, radius * radius)
    }

    pub fn invert_point(&self, p: Point) -> Result<Point> {
        let d = p - self.center;
        let d2 = d.norm2();
        let scale = self.power.sqrt().max(self.center.max_abs());
        if d.norm() <= 1e-14 * scale {
            return Err(Error::CenterIsSingular);
        }
        Ok(self.center + d * (self.power / d2))
    }

    pub fn invert_gcircle(&self, g: &GeneralizedCircle) -> GeneralizedCircle {
        let c = self.center;
        let rho2 = self.power;
        match *g {
            GeneralizedCircle::Circle { center, radius } => {
                let d = center.dist(c);
                if (d - radius).abs() <= THROUGH_CENTER_TOL * radius.max(d) {
                    let u = (center - c) / d;
                    return GeneralizedCircle::Line {
                        normal: u,
                        offset: u.dot(c) + rho2 / (2.0 * radius),
                    };
                }
                let q = d * d - radius * radius;
                GeneralizedCircle::Circle {
                    center: c + (center - c) * (rho2 / q),
                    radius: rho2 * radius / q.abs(),
                }
            }
            GeneralizedCircle::Line { normal, offset } => {
                let h = offset - normal.dot(c);
                let scale = rho2.sqrt().max(offset.abs()).max(c.max_abs());
                if h.abs() <= THROUGH_CENTER_TOL * scale {
                    return *g;
                }
                GeneralizedCircle::Circle {
                    center: c + normal * (rho2 / (2.0 * h)),
                    radius: rho2 / (2.0 * h.abs()),
                }
            }
        }
    }
}

/// The strip picture of two tangent parent circles: inversion at the
/// tangency point sends both to parallel lines.
///
/// `axis` points from the apex toward the centers, so the images are
/// `axis · (p − apex) = outer_offset` and `= inner_offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripFrame {
    pub inversion: Inversion,
    pub apex: Point,
    pub axis: Point,
    pub outer_offset: f64,
    pub inner_offset: f64,
    /// Parents touch externally, so the chain lives outside the strip.
    pub external: bool,
}

impl StripFrame {
    pub fn width(&self) -> f64 {
        (self.inner_offset - self.outer_offset).abs()
    }

    /// Frame point at `along` on the axis and `across` on the
    /// counter-clockwise perpendicular, measured from the apex.
    pub fn at(&self, along: f64, across: f64) -> Point {
        self.apex + self.axis * along + self.axis.perp() * across
    }
}

/// Power-one inversion at the tangency point of two tangent circles.
pub fn tangent_pair_frame(l: &GeneralizedCircle, m: &GeneralizedCircle) -> Result<StripFrame> {
    let ((lc, lr), (mc, mr)) = match (l.as_circle(), m.as_circle()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::WrongKind(
                "tangent pair frame needs two circles".into(),
            ))
        }
    };
    let t = tangency_classify(l, m, DEFAULT_TOL);
    if !t.class.is_tangent() {
        return Err(Error::NotTangent {
            residual: t.residual,
        });
    }
    let apex = tangency_point(l, m, DEFAULT_TOL)?;
    let external = t.class == TangencyClass::ExternallyTangent;
    let axis = (lc - apex).unit();
    // a circle through the apex with center apex + r·u maps to u·(p − apex) = 1/(2r)
    let side = |c: Point| {
        if (c - apex).dot(axis) >= 0.0 {
            1.0
        } else {
            -1.0
        }
    };
    let inversion = Inversion::new(apex, 1.0)?;
    Ok(StripFrame {
        inversion,
        apex,
        axis,
        outer_offset: side(lc) / (2.0 * lr),
        inner_offset: side(mc) / (2.0 * mr),
        external,
    })
}

/// Inversion at a limiting point of the pencil spanned by two nested
/// circles, mapping both to concentric circles.
///
/// The limiting point inside the inner circle is chosen, so both images
/// are bounded. Already concentric pairs get the common center.
pub fn concentricizing_inversion(
    l: &GeneralizedCircle,
    m: &GeneralizedCircle,
) -> Result<Inversion> {
    let ((c1, r1), (c2, r2)) = match (l.as_circle(), m.as_circle()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::NotNested),
    };
    if tangency_classify(l, m, DEFAULT_TOL).class != TangencyClass::Nested {
        return Err(Error::NotNested);
    }
    let ((big_c, big_r), (small_c, small_r)) = if r1 >= r2 {
        ((c1, r1), (c2, r2))
    } else {
        ((c2, r2), (c1, r1))
    };
    let e = big_c.dist(small_c);
    if e <= 1e-15 * big_r {
        return Inversion::new(big_c, 1.0);
    }
    let u = (small_c - big_c) / e;
    // limiting points x along u solve e x² − (R² + e² − r²) x + e R² = 0
    let b = big_r * big_r + e * e - small_r * small_r;
    let disc = b * b - 4.0 * e * e * big_r * big_r;
    let x = 2.0 * e * big_r * big_r / (b + disc.max(0.0).sqrt());
    Inversion::new(big_c + u * x, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circ(x: f64, y: f64, r: f64) -> GeneralizedCircle {
        GeneralizedCircle::circle(Point::new(x, y), r)
    }

    fn unit_at(x: f64, y: f64) -> Inversion {
        Inversion::new(Point::new(x, y), 1.0).unwrap()
    }

    #[test]
    fn points() {
        let inv = unit_at(0.0, 0.0);
        assert_eq!(
            inv.invert_point(Point::new(2.0, 0.0)).unwrap(),
            Point::new(0.5, 0.0)
        );
        assert_eq!(
            inv.invert_point(Point::new(1.0, 0.0)).unwrap(),
            Point::new(1.0, 0.0)
        );
        assert_eq!(
            unit_at(1.0, 0.0).invert_point(Point::ORIGIN).unwrap(),
            Point::ORIGIN
        );
        assert_eq!(
            inv.invert_point(Point::ORIGIN),
            Err(Error::CenterIsSingular)
        );
    }

    #[test]
    fn rejects_bad_power() {
        assert_eq!(
            Inversion::new(Point::ORIGIN, 0.0),
            Err(Error::InvalidInversion)
        );
        assert_eq!(
            Inversion::new(Point::ORIGIN, f64::NAN),
            Err(Error::InvalidInversion)
        );
    }

    #[test]
    fn generalized_circles() {
        let inv = unit_at(0.0, 0.0);
        let img = inv.invert_gcircle(&GeneralizedCircle::line(Point::new(1.0, 0.0), 0.5));
        assert!(img.approx_eq(&circ(1.0, 0.0, 1.0), 1e-15));

        let img = inv.invert_gcircle(&circ(3.0, 0.0, 1.0));
        assert!(img.approx_eq(&circ(0.375, 0.0, 0.125), 1e-15));

        let img = unit_at(1.0, 0.0).invert_gcircle(&circ(0.0, 0.0, 1.0));
        assert!(
            img.approx_eq(&GeneralizedCircle::line(Point::new(1.0, 0.0), 0.5), 1e-15),
            "{img:?}"
        );

        let through = GeneralizedCircle::line(Point::new(0.0, 1.0), 0.0);
        assert_eq!(inv.invert_gcircle(&through), through);
    }

    /// Image computed by inverting three sample points and refitting.
    fn image_by_points(inv: &Inversion, c: Point, r: f64) -> GeneralizedCircle {
        let pts: Vec<Point> = [0.3, 2.1, 4.4]
            .iter()
            .map(|&t| inv.invert_point(c + Point::polar(r, t)).unwrap())
            .collect();
        crate::geom::circle_from_3_points(pts[0], pts[1], pts[2]).unwrap()
    }

    #[test]
    fn circle_image_matches_pointwise_image() {
        let inv = Inversion::new(Point::new(0.4, -1.3), 2.5).unwrap();
        for &(x, y, r) in &[(3.0, 1.0, 1.5), (0.0, 0.0, 0.7), (0.5, -1.0, 3.0)] {
            let formula = inv.invert_gcircle(&circ(x, y, r));
            let oracle = image_by_points(&inv, Point::new(x, y), r);
            assert!(
                formula.approx_eq(&oracle, 1e-12),
                "{formula:?} vs {oracle:?}"
            );
        }
    }

    #[test]
    fn strip_frame_of_worked_pair() {
        let f = tangent_pair_frame(&circ(0.0, 0.0, 1.0), &circ(0.5, 0.0, 0.5)).unwrap();
        assert_eq!(f.inversion.center, Point::new(1.0, 0.0));
        assert_eq!(f.inversion.power, 1.0);
        assert!(!f.external);
        let outer = f.inversion.invert_gcircle(&circ(0.0, 0.0, 1.0));
        let inner = f.inversion.invert_gcircle(&circ(0.5, 0.0, 0.5));
        assert!(outer.approx_eq(&GeneralizedCircle::line(Point::new(1.0, 0.0), 0.5), 1e-15));
        assert!(inner.approx_eq(&GeneralizedCircle::line(Point::new(1.0, 0.0), 0.0), 1e-15));
        assert_eq!((f.outer_offset, f.inner_offset), (0.5, 1.0));
    }

    #[test]
    fn strip_frame_external_and_failure() {
        let f = tangent_pair_frame(&circ(0.0, 0.0, 1.0), &circ(2.0, 0.0, 1.0)).unwrap();
        assert!(f.external);
        assert_eq!(f.outer_offset, -f.inner_offset);
        assert!(matches!(
            tangent_pair_frame(&circ(0.0, 0.0, 1.0), &circ(3.0, 0.0, 1.0)),
            Err(Error::NotTangent { .. })
        ));
    }

    fn assert_concentric(inv: &Inversion, a: &GeneralizedCircle, b: &GeneralizedCircle) {
        let (ca, ra) = inv.invert_gcircle(a).as_circle().unwrap();
        let (cb, rb) = inv.invert_gcircle(b).as_circle().unwrap();
        assert!(ca.dist(cb) / ra.max(rb) < 1e-9, "{ca:?} {cb:?}");
    }

    #[test]
    fn concentricizing() {
        let inv = concentricizing_inversion(&circ(0.0, 0.0, 1.0), &circ(0.0, 0.0, 3.0)).unwrap();
        assert_eq!(inv, unit_at(0.0, 0.0));

        let (l, m) = (circ(0.0, 0.0, 4.0), circ(1.0, 0.0, 1.0));
        let inv = concentricizing_inversion(&l, &m).unwrap();
        // smaller root of x² − 16x + 16 = 0
        assert!((inv.center.x - (8.0 - 48f64.sqrt())).abs() < 1e-14);
        assert!(m.distance_to(inv.center) > 0.0 && inv.center.dist(Point::new(1.0, 0.0)) < 1.0);
        assert_concentric(&inv, &l, &m);

        let (l, m) = (circ(-1.0, 2.0, 5.0), circ(0.5, 3.0, 1.2));
        assert_concentric(&concentricizing_inversion(&l, &m).unwrap(), &l, &m);

        assert_eq!(
            concentricizing_inversion(&circ(0.0, 0.0, 2.0), &circ(1.0, 0.0, 1.0)),
            Err(Error::NotNested)
        );
    }
}
