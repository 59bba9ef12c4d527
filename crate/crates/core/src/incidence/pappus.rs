use super::{Artifact, CheckOptions, IncidenceReport};
use crate::chain::{Chain, ChainKind};
use crate::error::{Error, Result};
use crate::family::{contact_quad, contact_triangle};
use crate::geom::{
    concurrency, intersection_angle, orthogonality_residual, tangency_classify, tangency_point,
    GeneralizedCircle,
};

fn require_pappus(chain: &Chain) -> Result<()> {
    if chain.kind != ChainKind::Pappus {
        return Err(Error::WrongKind("check needs a Pappus chain".into()));
    }
    if chain.len() < 2 {
        return Err(Error::BadCount {
            min: 2,
            got: chain.len(),
        });
    }
    Ok(())
}

/// Contact chords and neighbor tangents all pass through one point on
/// the line of centers of the parents.
pub fn check_pappus_concurrency(chain: &Chain, opts: &CheckOptions) -> Result<IncidenceReport> {
    require_pappus(chain)?;
    let mut lines = chain.contact_chords.clone();
    lines.extend_from_slice(&chain.neighbor_tangents);
    let (b, residual) = concurrency(&lines)?;
    let mut report = IncidenceReport::new("pappus_concurrency", opts.point_tol);
    report.push("concurrency", residual);
    let axis = chain
        .center_line()
        .ok_or_else(|| Error::WrongKind("parents must be circles".into()))?;
    report.push("on center line", axis.distance(b) / chain.scale());
    report.artifact("B", Artifact::Point(b));
    Ok(report)
}

/// The circle about the concurrency point through the neighbor contacts
/// is orthogonal to every member and touches both parents at the apex.
pub fn check_ortho_circle(chain: &Chain, opts: &CheckOptions) -> Result<IncidenceReport> {
    require_pappus(chain)?;
    let mut lines = chain.contact_chords.clone();
    lines.extend_from_slice(&chain.neighbor_tangents);
    let (b, _) = concurrency(&lines)?;
    let radius = b.dist(chain.neighbor_contacts[0]);
    let circle = GeneralizedCircle::Circle { center: b, radius };
    let mut report = IncidenceReport::new("ortho_circle", opts.point_tol);
    for (i, &n) in chain.neighbor_contacts.iter().enumerate() {
        report.push(
            format!("N_{i} on circle"),
            (b.dist(n) - radius).abs() / radius,
        );
    }
    for (i, k) in chain.circles.iter().enumerate() {
        report.push(
            format!("orthogonal to k_{i}"),
            orthogonality_residual(&circle, k),
        );
    }
    if let Some(a) = chain.apex {
        report.push("apex on circle", (b.dist(a) - radius).abs() / radius);
    }
    for (parent, name) in [(&chain.outer, "outer"), (&chain.inner, "inner")] {
        report.push(
            format!("tangent to {name}"),
            tangency_classify(&circle, parent, opts.point_tol).residual,
        );
    }
    report.artifact("circle", Artifact::Circle(circle));
    report.artifact("B", Artifact::Point(b));
    Ok(report)
}

fn quad_circle_into(
    chain: &Chain,
    i: usize,
    j: usize,
    opts: &CheckOptions,
    report: &mut IncidenceReport,
) -> Result<GeneralizedCircle> {
    if j <= i {
        return Err(Error::InvalidParameter(format!(
            "need j > i, got ({i}, {j})"
        )));
    }
    let quad_circle = contact_quad(chain, i, j)?;
    let expected = ((j - i) as f64).atan();
    report.push(format!("({i},{j}) M_j on circle"), quad_circle.membership);
    for idx in [i, j] {
        let angle = intersection_angle(&quad_circle.circle, &chain.circles[idx], opts.point_tol)?;
        report.push_with_tol(
            format!("({i},{j}) angle at k_{idx}"),
            angle - expected,
            opts.angle_tol,
        );
    }
    Ok(quad_circle.circle)
}

/// The circle through `L_j, L_i, M_i, M_j` meets `k_i` and `k_j` at
/// `arctan(j − i)`.
pub fn check_quad_circle_angle(
    chain: &Chain,
    i: usize,
    j: usize,
    opts: &CheckOptions,
) -> Result<IncidenceReport> {
    let mut report = IncidenceReport::new("quad_circle_angle", opts.point_tol);
    let circle = quad_circle_into(chain, i, j, opts, &mut report)?;
    report.artifact("circle", Artifact::Circle(circle));
    Ok(report)
}

/// [`check_quad_circle_angle`] for every `0 ≤ i < j ≤ max_index`.
pub fn check_quad_circle_angles(
    chain: &Chain,
    max_index: usize,
    opts: &CheckOptions,
) -> Result<IncidenceReport> {
    let mut report = IncidenceReport::new("quad_circle_angle", opts.point_tol);
    let top = max_index.min(chain.len() - 1);
    for j in 1..=top {
        for i in 0..j {
            quad_circle_into(chain, i, j, opts, &mut report)?;
        }
    }
    Ok(report)
}

fn triangle_circle_into(
    chain: &Chain,
    i: usize,
    j: usize,
    opts: &CheckOptions,
    report: &mut IncidenceReport,
) -> Result<GeneralizedCircle> {
    let n = chain.len();
    if j + 1 >= n && !chain.closed {
        return Err(Error::IndexOutOfRange {
            index: j,
            limit: n - 1,
        });
    }
    let omega = contact_triangle(chain, i, j)?;
    let nj = chain.neighbor_contacts[j];
    let scale = chain.scale();
    for idx in [j, (j + 1) % n] {
        let k = &chain.circles[idx];
        if omega.circle.approx_eq(k, opts.point_tol) {
            // the contact circle for i == j is the member itself
            report.push(format!("({i},{j}) coincides with k_{idx}"), 0.0);
            continue;
        }
        let t = tangency_classify(&omega.circle, k, opts.point_tol);
        report.push(format!("({i},{j}) tangent to k_{idx}"), t.residual);
        match tangency_point(&omega.circle, k, opts.point_tol) {
            Ok(p) => report.push(
                format!("({i},{j}) touches k_{idx} at N_{j}"),
                p.dist(nj) / scale,
            ),
            Err(_) => report.push(format!("({i},{j}) touches k_{idx} at N_{j}"), f64::INFINITY),
        };
    }
    Ok(omega.circle)
}

/// The circle through `L_i, M_i, N_j` touches `k_j` and `k_{j+1}` at `N_j`.
pub fn check_triangle_circle_tangency(
    chain: &Chain,
    i: usize,
    j: usize,
    opts: &CheckOptions,
) -> Result<IncidenceReport> {
    let mut report = IncidenceReport::new("triangle_circle_tangency", opts.point_tol);
    let circle = triangle_circle_into(chain, i, j, opts, &mut report)?;
    report.artifact("circle", Artifact::Circle(circle));
    Ok(report)
}

/// [`check_triangle_circle_tangency`] for every `i ≤ max_i`, `j ≤ max_j` that fits
/// the chain.
pub fn check_triangle_circle_tangencies(
    chain: &Chain,
    max_i: usize,
    max_j: usize,
    opts: &CheckOptions,
) -> Result<IncidenceReport> {
    let mut report = IncidenceReport::new("triangle_circle_tangency", opts.point_tol);
    let n = chain.len();
    for i in 0..=max_i.min(n - 1) {
        for j in 0..=max_j.min(chain.neighbor_contacts.len() - 1) {
            triangle_circle_into(chain, i, j, opts, &mut report)?;
        }
    }
    Ok(report)
}
