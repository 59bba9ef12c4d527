use std::f64::consts::PI;

use super::{Artifact, CheckOptions, IncidenceReport};
use crate::error::{Error, Result};
use crate::geom::{
    intersect, orthogonality_residual, tangency_classify, GeneralizedCircle, Point, TangencyClass,
};
use crate::inversion::{concentricizing_inversion, Inversion};

fn nested(a: &GeneralizedCircle, b: &GeneralizedCircle) -> Result<((Point, f64), (Point, f64))> {
    match (a.as_circle(), b.as_circle()) {
        (Some(x), Some(y)) if tangency_classify(a, b, 1e-9).class == TangencyClass::Nested => {
            Ok((x, y))
        }
        _ => Err(Error::NotNested),
    }
}

/// `count` generalized circles orthogonal to both nested circles: the
/// images of diameters of the concentric picture, at evenly spread angles.
pub fn common_orthogonal_circles(
    l: &GeneralizedCircle,
    k: &GeneralizedCircle,
    count: usize,
) -> Result<Vec<GeneralizedCircle>> {
    nested(l, k)?;
    let inv = concentricizing_inversion(l, k)?;
    let center = inv.invert_gcircle(l).center().ok_or(Error::NotNested)?;
    let offset = 0.5 * (5f64.sqrt() - 1.0);
    Ok((0..count)
        .map(|t| {
            let angle = PI * ((t as f64 + offset) / count as f64);
            let normal = Point::polar(1.0, angle).perp();
            let line = GeneralizedCircle::Line {
                normal,
                offset: normal.dot(center),
            };
            inv.invert_gcircle(&line)
        })
        .collect())
}

/// No circle is orthogonal to two nested circles with both images in the
/// concentric picture, and any two common orthogonal circles cross
/// twice.
///
/// The gap `R'² − r'²` between the squared image radii is the witness
/// that `d² = r'² + ρ²` and `d² = R'² + ρ²` cannot hold at once. Already
/// concentric input is measured as given.
pub fn check_no_orthogonal_annulus(
    l: &GeneralizedCircle,
    k: &GeneralizedCircle,
    trials: usize,
    opts: &CheckOptions,
) -> Result<IncidenceReport> {
    let ((cl, rl), (ck, rk)) = nested(l, k)?;
    let concentric = cl.dist(ck) <= 1e-15 * rl.max(rk);
    let (ra, rb) = if concentric {
        (rl, rk)
    } else {
        let inv: Inversion = concentricizing_inversion(l, k)?;
        (
            inv.invert_gcircle(l).radius().ok_or(Error::NotNested)?,
            inv.invert_gcircle(k).radius().ok_or(Error::NotNested)?,
        )
    };
    let gap = (ra * ra - rb * rb).abs();
    let mut report = IncidenceReport::new("no_orthogonal_annulus", opts.point_tol);
    report.push("infeasible", if gap > 0.0 { 0.0 } else { 1.0 });
    report.artifact("gap", Artifact::Number(gap));

    let circles = common_orthogonal_circles(l, k, trials)?;
    for (t, c) in circles.iter().enumerate() {
        let worst = orthogonality_residual(c, l).max(orthogonality_residual(c, k));
        report.push(format!("circle {t} orthogonal to both"), worst);
    }
    let mut wrong = 0usize;
    for (a, ca) in circles.iter().enumerate() {
        for cb in &circles[a + 1..] {
            let finite = intersect(ca, cb, opts.point_tol)
                .map(|p| p.len())
                .unwrap_or(0);
            // two lines also meet at infinity
            let total = finite + usize::from(ca.is_line() && cb.is_line());
            if total != 2 {
                wrong += 1;
            }
        }
    }
    report.push("pairs without two common points", wrong as f64);
    report.artifact("circles", Artifact::Circles(circles));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circ(x: f64, y: f64, r: f64) -> GeneralizedCircle {
        GeneralizedCircle::circle(Point::new(x, y), r)
    }

    #[test]
    fn concentric_gap() {
        let r = check_no_orthogonal_annulus(
            &circ(0.0, 0.0, 3.0),
            &circ(0.0, 0.0, 1.0),
            6,
            &CheckOptions::default(),
        )
        .unwrap();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.artifacts["gap"], Artifact::Number(8.0));
    }

    #[test]
    fn offset_pair() {
        let r = check_no_orthogonal_annulus(
            &circ(1.0, 0.0, 1.0),
            &circ(0.0, 0.0, 4.0),
            10,
            &CheckOptions::default(),
        )
        .unwrap();
        assert!(r.pass, "{r:#?}");
        match r.artifacts["gap"] {
            Artifact::Number(g) => assert!(g > 0.0),
            _ => unreachable!(),
        }
    }

    #[test]
    fn tangent_pair_rejected() {
        assert_eq!(
            check_no_orthogonal_annulus(
                &circ(0.0, 0.0, 2.0),
                &circ(1.0, 0.0, 1.0),
                4,
                &CheckOptions::default()
            ),
            Err(Error::NotNested)
        );
    }
}
