//! Chain constructors: Pappus chains from the strip picture, Steiner
//! chains from the concentric picture, and the three kinds of chain pairs
//! that share a member.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    tangency_classify, tangent_line_at, GeneralizedCircle, Line, Point, TangencyClass, DEFAULT_TOL,
};
use crate::inversion::{concentricizing_inversion, tangent_pair_frame, Inversion, StripFrame};

/// Relative tolerance used when re-validating constructed chains.
pub const CHAIN_TOL: f64 = 1e-9;

/// Relative tolerance for the shared member of a pair.
pub const SHARED_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    Pappus,
    Steiner,
}

/// Which way a Pappus chain marches from its axis-symmetric member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    #[default]
    Up,
    Down,
}

/// Marching direction of the second chain of an orthogonal pair, seen
/// from the tangency point of the first chain's parents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Away from the tangency point.
    #[default]
    Left,
    /// Toward the tangency point.
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub kind: ChainKind,
    pub outer: GeneralizedCircle,
    pub inner: GeneralizedCircle,
    pub circles: Vec<GeneralizedCircle>,
    /// Contact of each member with the outer parent.
    pub outer_contacts: Vec<Point>,
    /// Contact of each member with the inner parent.
    pub inner_contacts: Vec<Point>,
    /// Contact of member `i` with member `i + 1` (wrapping when closed).
    pub neighbor_contacts: Vec<Point>,
    /// Line through the two parent contacts of each member.
    pub contact_chords: Vec<Line>,
    /// Common tangent at each neighbor contact.
    pub neighbor_tangents: Vec<Line>,
    pub closed: bool,
    /// Tangency point of the parents (Pappus chains only).
    pub apex: Option<Point>,
}

struct FramePoints {
    members: Vec<(Point, f64)>,
    outer: Vec<Point>,
    inner: Vec<Point>,
    neighbors: Vec<Point>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    pub fn center(&self, i: usize) -> Point {
        self.circles[i].center().expect("chain members are circles")
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.circles[i].radius().expect("chain members are circles")
    }

    /// Largest coordinate magnitude or member radius, used to scale
    /// absolute point tolerances.
    pub fn scale(&self) -> f64 {
        let mut s = 0.0f64;
        for c in &self.circles {
            if let Some((o, r)) = c.as_circle() {
                s = s.max(o.max_abs()).max(r);
            }
        }
        s.max(1e-300)
    }

    fn assemble(
        kind: ChainKind,
        outer: GeneralizedCircle,
        inner: GeneralizedCircle,
        circles: Vec<GeneralizedCircle>,
        outer_contacts: Vec<Point>,
        inner_contacts: Vec<Point>,
        neighbor_contacts: Vec<Point>,
        closed: bool,
        apex: Option<Point>,
    ) -> Result<Chain> {
        let contact_chords = outer_contacts
            .iter()
            .zip(&inner_contacts)
            .map(|(&l, &m)| Line::through(l, m))
            .collect::<Result<Vec<_>>>()?;
        let neighbor_tangents = neighbor_contacts
            .iter()
            .enumerate()
            .map(|(i, &n)| tangent_line_at(&circles[i], n, CHAIN_TOL))
            .collect::<Result<Vec<_>>>()?;
        let chain = Chain {
            kind,
            outer,
            inner,
            circles,
            outer_contacts,
            inner_contacts,
            neighbor_contacts,
            contact_chords,
            neighbor_tangents,
            closed,
            apex,
        };
        chain.validate()?;
        Ok(chain)
    }

    fn from_frame(
        kind: ChainKind,
        inv: &Inversion,
        outer: GeneralizedCircle,
        inner: GeneralizedCircle,
        frame: FramePoints,
        closed: bool,
        apex: Option<Point>,
    ) -> Result<Chain> {
        let mut circles = Vec::with_capacity(frame.members.len());
        for (index, &(c, r)) in frame.members.iter().enumerate() {
            if (c.dist(inv.center) - r).abs() <= CHAIN_TOL * r {
                return Err(Error::DegenerateMember { index });
            }
            circles.push(inv.invert_gcircle(&GeneralizedCircle::Circle {
                center: c,
                radius: r,
            }));
        }
        let map = |pts: &[Point]| {
            pts.iter()
                .map(|&p| inv.invert_point(p))
                .collect::<Result<Vec<_>>>()
        };
        Chain::assemble(
            kind,
            outer,
            inner,
            circles,
            map(&frame.outer)?,
            map(&frame.inner)?,
            map(&frame.neighbors)?,
            closed,
            apex,
        )
    }

    /// Checks the tangency and incidence invariants at [`CHAIN_TOL`].
    pub fn validate(&self) -> Result<()> {
        let n = self.circles.len();
        let scale = self.scale();
        let fail = |what: String, residual: f64| Err(Error::InvariantViolated { what, residual });
        let expected_neighbors = if self.closed { n } else { n.saturating_sub(1) };
        if self.outer_contacts.len() != n
            || self.inner_contacts.len() != n
            || self.neighbor_contacts.len() != expected_neighbors
        {
            return fail("contact point counts".into(), f64::INFINITY);
        }
        for (i, k) in self.circles.iter().enumerate() {
            if k.is_line() {
                return Err(Error::DegenerateMember { index: i });
            }
            for (parent, name) in [(&self.outer, "outer"), (&self.inner, "inner")] {
                let t = tangency_classify(k, parent, CHAIN_TOL);
                if !t.class.is_tangent() {
                    return fail(format!("member {i} tangent to {name} parent"), t.residual);
                }
            }
            let next = (i + 1) % n;
            if i + 1 < n || self.closed {
                let t = tangency_classify(k, &self.circles[next], CHAIN_TOL);
                if !t.class.is_tangent() {
                    return fail(format!("members {i} and {next} tangent"), t.residual);
                }
            }
        }
        let on = |c: &GeneralizedCircle, p: Point| c.distance_to(p) / scale;
        for i in 0..n {
            let k = &self.circles[i];
            let r = on(k, self.outer_contacts[i]).max(on(&self.outer, self.outer_contacts[i]));
            if r > CHAIN_TOL {
                return fail(format!("outer contact {i}"), r);
            }
            let r = on(k, self.inner_contacts[i]).max(on(&self.inner, self.inner_contacts[i]));
            if r > CHAIN_TOL {
                return fail(format!("inner contact {i}"), r);
            }
        }
        for (i, &p) in self.neighbor_contacts.iter().enumerate() {
            let r = on(&self.circles[i], p).max(on(&self.circles[(i + 1) % n], p));
            if r > CHAIN_TOL {
                return fail(format!("neighbor contact {i}"), r);
            }
        }
        Ok(())
    }

    /// Maps every member and contact point through `inv`.
    pub fn transplant(&self, inv: &Inversion) -> Result<Chain> {
        let mut circles = Vec::with_capacity(self.len());
        for (index, k) in self.circles.iter().enumerate() {
            let (c, r) = k.as_circle().ok_or(Error::DegenerateMember { index })?;
            if (c.dist(inv.center) - r).abs() <= CHAIN_TOL * r {
                return Err(Error::DegenerateMember { index });
            }
            circles.push(inv.invert_gcircle(k));
        }
        let map = |pts: &[Point]| {
            pts.iter()
                .map(|&p| inv.invert_point(p))
                .collect::<Result<Vec<_>>>()
        };
        Chain::assemble(
            self.kind,
            inv.invert_gcircle(&self.outer),
            inv.invert_gcircle(&self.inner),
            circles,
            map(&self.outer_contacts)?,
            map(&self.inner_contacts)?,
            map(&self.neighbor_contacts)?,
            self.closed,
            self.apex.map(|a| inv.invert_point(a)).transpose()?,
        )
    }

    /// Mirror image across `axis`, keeping member order.
    pub fn reflect(&self, axis: &Line) -> Result<Chain> {
        let pts = |v: &[Point]| v.iter().map(|&p| axis.reflect(p)).collect::<Vec<_>>();
        Chain::assemble(
            self.kind,
            self.outer.reflect(axis),
            self.inner.reflect(axis),
            self.circles.iter().map(|c| c.reflect(axis)).collect(),
            pts(&self.outer_contacts),
            pts(&self.inner_contacts),
            pts(&self.neighbor_contacts),
            self.closed,
            self.apex.map(|a| axis.reflect(a)),
        )
    }

    /// The same closed chain listed in the opposite direction, keeping
    /// member `anchor` at its position.
    pub fn reversed(&self, anchor: usize) -> Result<Chain> {
        let n = self.len();
        if !self.closed {
            return Err(Error::WrongKind(
                "only closed chains can be reversed in place".into(),
            ));
        }
        if anchor >= n {
            return Err(Error::IndexOutOfRange {
                index: anchor,
                limit: n,
            });
        }
        let member = |t: usize| (2 * anchor + n - t) % n;
        let neighbor = |t: usize| (2 * anchor + 2 * n - t - 1) % n;
        let pick =
            |v: &[Point], f: &dyn Fn(usize) -> usize| (0..n).map(|t| v[f(t)]).collect::<Vec<_>>();
        Chain::assemble(
            self.kind,
            self.outer,
            self.inner,
            (0..n).map(|t| self.circles[member(t)]).collect(),
            pick(&self.outer_contacts, &member),
            pick(&self.inner_contacts, &member),
            pick(&self.neighbor_contacts, &neighbor),
            true,
            self.apex,
        )
    }

    /// Line through the centers of the two parents, if both are circles
    /// with distinct centers.
    pub fn center_line(&self) -> Option<Line> {
        let (a, b) = (self.outer.center()?, self.inner.center()?);
        Line::through(a, b).ok()
    }
}

/// Pappus chain of `count` members between two internally tangent
/// circles. Member 0 is symmetric about the line of centers and member
/// `j` sits `j` diameters away from that line.
pub fn build_pappus(
    outer: GeneralizedCircle,
    inner: GeneralizedCircle,
    count: usize,
    side: Side,
) -> Result<Chain> {
    if count < 2 {
        return Err(Error::BadCount { min: 2, got: count });
    }
    let frame = tangent_pair_frame(&outer, &inner)?;
    if frame.external {
        return Err(Error::WrongKind(
            "Pappus parents must be internally tangent".into(),
        ));
    }
    let (ro, ri) = (outer.radius().unwrap_or(0.0), inner.radius().unwrap_or(0.0));
    if ro <= ri {
        return Err(Error::WrongKind(
            "outer parent must be the larger circle".into(),
        ));
    }
    let sign = match side {
        Side::Up => 1.0,
        Side::Down => -1.0,
    };
    // ccw perpendicular of (apex − outer center) is −axis.perp()
    let march = -frame.axis.perp() * sign;
    let pts = strip_points(&frame, march, count, 0.0);
    Chain::from_frame(
        ChainKind::Pappus,
        &frame.inversion,
        outer,
        inner,
        pts,
        false,
        Some(frame.apex),
    )
}

fn strip_points(frame: &StripFrame, march: Point, count: usize, start: f64) -> FramePoints {
    let w = frame.width();
    let h = w / 2.0;
    let u = frame.axis;
    let z = frame.apex + u * (0.5 * (frame.outer_offset + frame.inner_offset));
    let at = |j: f64| z + march * ((start + j) * w);
    FramePoints {
        members: (0..count).map(|j| (at(j as f64), h)).collect(),
        outer: (0..count).map(|j| at(j as f64) - u * h).collect(),
        inner: (0..count).map(|j| at(j as f64) + u * h).collect(),
        neighbors: (0..count - 1).map(|j| at(j as f64 + 0.5)).collect(),
    }
}

/// Inner radius admitting a closed chain of `n` about an outer circle of
/// radius `outer_radius` with the same center.
pub fn steiner_inner_radius(n: usize, outer_radius: f64) -> f64 {
    let s = (PI / n as f64).sin();
    outer_radius * (1.0 - s) / (1.0 + s)
}

fn concentric_chain(center: Point, n: usize, outer_radius: f64, start_angle: f64) -> Result<Chain> {
    if n < 3 {
        return Err(Error::BadCount { min: 3, got: n });
    }
    if !(outer_radius > 0.0) || !outer_radius.is_finite() || !start_angle.is_finite() {
        return Err(Error::InvalidParameter(
            "outer radius must be positive and angles finite".into(),
        ));
    }
    let r_in = steiner_inner_radius(n, outer_radius);
    let mid = 0.5 * (outer_radius + r_in);
    let radius = 0.5 * (outer_radius - r_in);
    let step = 2.0 * PI / n as f64;
    let angle = |j: usize| start_angle + step * j as f64;
    let circles = (0..n)
        .map(|j| GeneralizedCircle::Circle {
            center: center + Point::polar(mid, angle(j)),
            radius,
        })
        .collect();
    let outer_contacts = (0..n)
        .map(|j| center + Point::polar(outer_radius, angle(j)))
        .collect();
    let inner_contacts = (0..n)
        .map(|j| center + Point::polar(r_in, angle(j)))
        .collect();
    let neighbor_contacts = (0..n)
        .map(|j| center + Point::polar(mid * (PI / n as f64).cos(), angle(j) + step / 2.0))
        .collect();
    Chain::assemble(
        ChainKind::Steiner,
        GeneralizedCircle::Circle {
            center,
            radius: outer_radius,
        },
        GeneralizedCircle::Circle {
            center,
            radius: r_in,
        },
        circles,
        outer_contacts,
        inner_contacts,
        neighbor_contacts,
        true,
        None,
    )
}

/// Closed Steiner chain of `n` members about the origin.
pub fn build_steiner_concentric(n: usize, outer_radius: f64, start_angle: f64) -> Result<Chain> {
    concentric_chain(Point::ORIGIN, n, outer_radius, start_angle)
}

/// Closed Steiner chain between two arbitrary nested circles, with the
/// first member placed at `start_angle` in the concentric picture.
pub fn build_steiner(
    outer: GeneralizedCircle,
    inner: GeneralizedCircle,
    n: usize,
    start_angle: f64,
) -> Result<Chain> {
    if n < 3 {
        return Err(Error::BadCount { min: 3, got: n });
    }
    let inv = concentricizing_inversion(&outer, &inner)?;
    let (a, b) = (inv.invert_gcircle(&outer), inv.invert_gcircle(&inner));
    let ((ca, ra), (cb, rb)) = match (a.as_circle(), b.as_circle()) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::NotNested),
    };
    let (big, small) = if ra >= rb { (ra, rb) } else { (rb, ra) };
    let center = (ca + cb) / 2.0;
    let needed = steiner_inner_radius(n, 1.0);
    let ratio = small / big;
    if (ratio - needed).abs() > CHAIN_TOL * needed.max(1.0) {
        return Err(Error::NotClosable { n, ratio, needed });
    }
    let frame_chain = concentric_chain(center, n, big, start_angle)?;
    let mut chain = frame_chain.transplant(&inv)?;
    if chain.outer.approx_eq(&inner, 1e-6) {
        std::mem::swap(&mut chain.outer_contacts, &mut chain.inner_contacts);
    }
    chain.outer = outer;
    chain.inner = inner;
    chain.validate()?;
    Ok(chain)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    OrthogonalPappus,
    MirroredSteiner,
    TransplantedSteiner,
}

/// Two chains sharing one member.
///
/// Pair indices are 1-based and count from the shared member, so pair
/// index 1 is the shared circle in both chains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainPair {
    pub first: Chain,
    pub second: Chain,
    pub shared_first: usize,
    pub shared_second: usize,
    pub kind: PairKind,
    /// Common point of all four parents (orthogonal Pappus pairs only).
    pub apex: Option<Point>,
    /// The two chains coincide (mirror line through both centers).
    pub coincident: bool,
}

/// Selects one chain of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    First,
    Second,
}

impl ChainPair {
    pub fn chain(&self, which: Which) -> &Chain {
        match which {
            Which::First => &self.first,
            Which::Second => &self.second,
        }
    }

    fn shared(&self, which: Which) -> usize {
        match which {
            Which::First => self.shared_first,
            Which::Second => self.shared_second,
        }
    }

    /// Number of pair indices available in one chain.
    pub fn available(&self, which: Which) -> usize {
        let chain = self.chain(which);
        if chain.closed {
            chain.len()
        } else {
            chain.len() - self.shared(which)
        }
    }

    /// Chain position of 1-based pair index `i`.
    pub fn position(&self, which: Which, i: usize) -> Result<usize> {
        let limit = self.available(which);
        if i == 0 || i > limit {
            return Err(Error::IndexOutOfRange { index: i, limit });
        }
        let chain = self.chain(which);
        Ok((self.shared(which) + i - 1) % chain.len())
    }

    /// Neighbor contact `N_i` of the 1-based pair index `i`.
    pub fn neighbor_position(&self, which: Which, i: usize) -> Result<usize> {
        let p = self.position(which, i)?;
        let chain = self.chain(which);
        if p >= chain.neighbor_contacts.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.available(which) - 1,
            });
        }
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.first.validate()?;
        self.second.validate()?;
        let a = self
            .first
            .circles
            .get(self.shared_first)
            .ok_or(Error::IndexOutOfRange {
                index: self.shared_first,
                limit: self.first.len(),
            })?;
        let b = self
            .second
            .circles
            .get(self.shared_second)
            .ok_or(Error::IndexOutOfRange {
                index: self.shared_second,
                limit: self.second.len(),
            })?;
        if !a.approx_eq(b, SHARED_TOL) {
            let residual = match (a.as_circle(), b.as_circle()) {
                (Some((c1, r1)), Some((c2, r2))) => c1.dist(c2).max((r1 - r2).abs()) / r1,
                _ => f64::INFINITY,
            };
            return Err(Error::InvariantViolated {
                what: "shared member".into(),
                residual,
            });
        }
        if self.kind == PairKind::OrthogonalPappus {
            for (x, y) in [
                (&self.first.outer, &self.second.outer),
                (&self.first.outer, &self.second.inner),
                (&self.first.inner, &self.second.outer),
                (&self.first.inner, &self.second.inner),
            ] {
                let residual = crate::geom::orthogonality_residual(x, y);
                if residual > CHAIN_TOL {
                    return Err(Error::NotOrthogonal { residual });
                }
            }
        }
        Ok(())
    }
}

/// Second Pappus chain through member `shared_index` of `base` whose
/// parents are orthogonal to the parents of `base`.
///
/// In the strip picture of `base` the second strip is bounded by the two
/// tangents of the shared member perpendicular to the first strip. Its
/// parents are labelled so that the reflection of the picture swapping
/// the two marching directions sends the first parents to the second.
pub fn build_orthogonal_pappus_pair(
    base: &Chain,
    shared_index: usize,
    direction: Direction,
) -> Result<ChainPair> {
    if base.kind != ChainKind::Pappus {
        return Err(Error::WrongKind(
            "orthogonal pairs are built from Pappus chains".into(),
        ));
    }
    if shared_index >= base.len() {
        return Err(Error::IndexOutOfRange {
            index: shared_index,
            limit: base.len(),
        });
    }
    let frame = tangent_pair_frame(&base.outer, &base.inner)?;
    let inv = frame.inversion;
    let image_center = |i: usize| {
        inv.invert_gcircle(&base.circles[i])
            .center()
            .ok_or(Error::DegenerateMember { index: i })
    };
    let z = image_center(shared_index)?;
    let neighbor = if shared_index + 1 < base.len() {
        shared_index + 1
    } else {
        shared_index - 1
    };
    let mut e1 = (image_center(neighbor)? - z).unit();
    if neighbor < shared_index {
        e1 = -e1;
    }
    let u = frame.axis;
    let e2 = match direction {
        Direction::Left => u,
        Direction::Right => -u,
    };
    let w = frame.width();
    let h = w / 2.0;
    let swap = |v: Point| e1 * v.dot(e2) + e2 * v.dot(e1);
    let n_dir = swap(u);
    let outer_anchor = z + swap(-u * h);
    let inner_anchor = z + swap(u * h);
    let outer2 = inv.invert_gcircle(&GeneralizedCircle::Line {
        normal: n_dir,
        offset: n_dir.dot(outer_anchor),
    });
    let inner2 = inv.invert_gcircle(&GeneralizedCircle::Line {
        normal: n_dir,
        offset: n_dir.dot(inner_anchor),
    });

    let count = base.len();
    let at = |j: f64| e2 * (j * w);
    let pts = FramePoints {
        members: (0..count).map(|j| (z + at(j as f64), h)).collect(),
        outer: (0..count).map(|j| outer_anchor + at(j as f64)).collect(),
        inner: (0..count).map(|j| inner_anchor + at(j as f64)).collect(),
        neighbors: (0..count - 1).map(|j| z + at(j as f64 + 0.5)).collect(),
    };
    let second = Chain::from_frame(
        ChainKind::Pappus,
        &inv,
        outer2,
        inner2,
        pts,
        false,
        Some(frame.apex),
    )?;
    let pair = ChainPair {
        first: base.clone(),
        second,
        shared_first: shared_index,
        shared_second: 0,
        kind: PairKind::OrthogonalPappus,
        apex: Some(frame.apex),
        coincident: false,
    };
    pair.validate()?;
    Ok(pair)
}

/// Concentric Steiner chain and its mirror image across the line through
/// the center of member 0 at `mirror_angle`, optionally both moved by
/// `post_inversion`.
pub fn build_mirrored_steiner_pair(
    n: usize,
    outer_radius: f64,
    shared_angle: f64,
    mirror_angle: f64,
    post_inversion: Option<Inversion>,
) -> Result<ChainPair> {
    let first = build_steiner_concentric(n, outer_radius, shared_angle)?;
    let pivot = first.center(0);
    let axis = Line::new(pivot, Point::polar(1.0, mirror_angle))?;
    let second = first.reflect(&axis)?;
    let coincident = axis.distance(Point::ORIGIN) <= DEFAULT_TOL * outer_radius;
    let (first, second) = match post_inversion {
        Some(inv) => (first.transplant(&inv)?, second.transplant(&inv)?),
        None => (first, second),
    };
    let pair = ChainPair {
        first,
        second,
        shared_first: 0,
        shared_second: 0,
        kind: PairKind::MirroredSteiner,
        apex: None,
        coincident,
    };
    pair.validate()?;
    Ok(pair)
}

/// Circle centered at `center` orthogonal to `target`.
pub fn orthogonal_circle_at(
    target: &GeneralizedCircle,
    center: Point,
) -> Result<GeneralizedCircle> {
    let (c, r) = target
        .as_circle()
        .ok_or_else(|| Error::WrongKind("target must be a circle".into()))?;
    let d2 = center.dist(c).powi(2) - r * r;
    if !(d2 > 0.0) {
        return Err(Error::NotOrthogonal { residual: 1.0 });
    }
    Ok(GeneralizedCircle::Circle {
        center,
        radius: d2.sqrt(),
    })
}

/// Concentric Steiner chain paired with its image under inversion in
/// `omega`, which must be orthogonal to the shared member.
pub fn build_transplanted_pair(
    n: usize,
    outer_radius: f64,
    shared_angle: f64,
    omega: GeneralizedCircle,
) -> Result<ChainPair> {
    let first = build_steiner_concentric(n, outer_radius, shared_angle)?;
    if omega.is_line() {
        return Err(Error::WrongKind("omega must be a circle".into()));
    }
    let residual = crate::geom::orthogonality_residual(&omega, &first.circles[0]);
    if residual > CHAIN_TOL {
        return Err(Error::NotOrthogonal { residual });
    }
    let inv = Inversion::in_circle(&omega)?;
    // listed in the rotational sense of the first chain
    let mut second = first.transplant(&inv)?.reversed(0)?;
    // the shared member is fixed setwise; keep its exact value
    second.circles[0] = first.circles[0];
    second.validate()?;
    let pair = ChainPair {
        first,
        second,
        shared_first: 0,
        shared_second: 0,
        kind: PairKind::TransplantedSteiner,
        apex: None,
        coincident: false,
    };
    pair.validate()?;
    Ok(pair)
}

/// Classification helper for callers that need to reject tangent or
/// intersecting parent pairs.
pub fn is_nested(a: &GeneralizedCircle, b: &GeneralizedCircle) -> bool {
    tangency_classify(a, b, DEFAULT_TOL).class == TangencyClass::Nested
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    fn circ(x: f64, y: f64, r: f64) -> GeneralizedCircle {
        GeneralizedCircle::circle(Point::new(x, y), r)
    }

    fn worked(count: usize) -> Chain {
        build_pappus(circ(0.0, 0.0, 1.0), circ(0.5, 0.0, 0.5), count, Side::Up).unwrap()
    }

    fn close(a: &GeneralizedCircle, b: &GeneralizedCircle, tol: f64) {
        let (c1, r1) = a.as_circle().unwrap();
        let (c2, r2) = b.as_circle().unwrap();
        assert!(
            c1.dist(c2) <= tol && (r1 - r2).abs() <= tol,
            "{a:?} != {b:?}"
        );
    }

    #[test]
    fn worked_pappus_members() {
        let chain = worked(3);
        close(&chain.circles[0], &circ(-0.5, 0.0, 0.5), 1e-15);
        close(&chain.circles[1], &circ(0.0, 2.0 / 3.0, 1.0 / 3.0), 1e-15);
        close(&chain.circles[2], &circ(0.5, 2.0 / 3.0, 1.0 / 6.0), 1e-15);
        assert!(chain.outer_contacts[0].dist(Point::new(-1.0, 0.0)) < 1e-15);
        assert!(chain.neighbor_contacts[0].dist(Point::new(-0.2, 0.4)) < 1e-15);
        assert_eq!(chain.apex, Some(Point::new(1.0, 0.0)));
    }

    #[test]
    fn pappus_down_mirrors_up() {
        let up = worked(4);
        let down = build_pappus(circ(0.0, 0.0, 1.0), circ(0.5, 0.0, 0.5), 4, Side::Down).unwrap();
        for (a, b) in up.circles.iter().zip(&down.circles) {
            let (ca, ra) = a.as_circle().unwrap();
            let (cb, rb) = b.as_circle().unwrap();
            assert!(
                (ca.x - cb.x).abs() < 1e-15
                    && (ca.y + cb.y).abs() < 1e-15
                    && (ra - rb).abs() < 1e-15
            );
        }
    }

    #[test]
    fn pappus_height_identity() {
        let chain = worked(21);
        for j in 0..21 {
            let (c, r) = chain.circles[j].as_circle().unwrap();
            assert!((c.y - 2.0 * j as f64 * r).abs() / r < 1e-9, "member {j}");
        }
    }

    #[test]
    fn pappus_contract() {
        assert_eq!(
            build_pappus(circ(0.0, 0.0, 1.0), circ(0.5, 0.0, 0.5), 1, Side::Up),
            Err(Error::BadCount { min: 2, got: 1 })
        );
        assert!(matches!(
            build_pappus(circ(0.0, 0.0, 1.0), circ(0.2, 0.0, 0.5), 3, Side::Up),
            Err(Error::NotTangent { .. })
        ));
        assert!(matches!(
            build_pappus(circ(0.5, 0.0, 0.5), circ(0.0, 0.0, 1.0), 3, Side::Up),
            Err(Error::WrongKind(_))
        ));
    }

    #[test]
    fn concentric_steiner_six() {
        let chain = build_steiner_concentric(6, 3.0, 0.0).unwrap();
        assert!((chain.inner.radius().unwrap() - 1.0).abs() < 1e-15);
        for j in 0..6 {
            let (c, r) = chain.circles[j].as_circle().unwrap();
            assert!((r - 1.0).abs() < 1e-15);
            assert!(c.dist(Point::polar(2.0, j as f64 * FRAC_PI_3)) < 1e-14);
        }
        assert!(chain.closed);
        assert_eq!(chain.neighbor_contacts.len(), 6);
        assert_eq!(
            build_steiner_concentric(2, 1.0, 0.0),
            Err(Error::BadCount { min: 3, got: 2 })
        );
    }

    #[test]
    fn concentric_steiner_three_closes() {
        let chain = build_steiner_concentric(3, 1.0, 0.4).unwrap();
        let s = (PI / 3.0).sin();
        assert!((chain.inner.radius().unwrap() - (1.0 - s) / (1.0 + s)).abs() < 1e-15);
        let t = tangency_classify(&chain.circles[2], &chain.circles[0], CHAIN_TOL);
        assert!(t.class.is_tangent() && t.residual < 1e-9);
    }

    #[test]
    fn transplant_round_trip_and_degenerate() {
        let chain = build_steiner_concentric(6, 3.0, 0.0).unwrap();
        let inv = Inversion::new(Point::new(7.0, 0.0), 1.0).unwrap();
        let moved = chain.transplant(&inv).unwrap();
        let (co, _) = moved.outer.as_circle().unwrap();
        let (ci, _) = moved.inner.as_circle().unwrap();
        assert!(co.dist(ci) > 1e-3, "image parents should not be concentric");
        let back = moved.transplant(&inv).unwrap();
        for (a, b) in chain.circles.iter().zip(&back.circles) {
            assert!(a.approx_eq(b, 1e-10));
        }
        let on_member = Inversion::new(Point::new(3.0, 0.0), 1.0).unwrap();
        assert_eq!(
            chain.transplant(&on_member),
            Err(Error::DegenerateMember { index: 0 })
        );
    }

    #[test]
    fn general_steiner_round_trip() {
        let chain = build_steiner_concentric(6, 3.0, 0.2).unwrap();
        let moved = chain
            .transplant(&Inversion::new(Point::new(6.0, 1.0), 4.0).unwrap())
            .unwrap();
        let rebuilt = build_steiner(moved.outer, moved.inner, 6, 1.1).unwrap();
        assert_eq!(rebuilt.len(), 6);
        let err = build_steiner(circ(0.0, 0.0, 3.0), circ(0.0, 0.0, 1.5), 6, 0.0).unwrap_err();
        assert!(matches!(err, Error::NotClosable { n: 6, .. }));
    }

    #[test]
    fn orthogonal_pair_of_worked_chain() {
        let pair = build_orthogonal_pappus_pair(&worked(6), 0, Direction::Left).unwrap();
        close(&pair.second.outer, &circ(1.0, -2.0, 2.0), 1e-14);
        close(&pair.second.inner, &circ(1.0, 2.0, 2.0), 1e-14);
        close(
            &pair.second.circles[1],
            &circ(1.0 / 6.0, 0.0, 1.0 / 6.0),
            1e-15,
        );
        close(
            &pair.second.circles[2],
            &circ(5.0 / 12.0, 0.0, 1.0 / 12.0),
            1e-15,
        );
        assert_eq!(pair.apex, Some(Point::new(1.0, 0.0)));
        assert!(matches!(
            build_orthogonal_pappus_pair(&worked(6), 0, Direction::Right),
            Err(Error::DegenerateMember { index: 1 })
        ));
    }

    #[test]
    fn orthogonal_pair_off_axis() {
        let base = build_pappus(circ(0.0, 0.0, 2.0), circ(1.4, 0.0, 0.6), 8, Side::Up).unwrap();
        for s in 0..4 {
            for dir in [Direction::Left, Direction::Right] {
                match build_orthogonal_pappus_pair(&base, s, dir) {
                    Ok(pair) => pair.validate().unwrap(),
                    Err(e) => assert!(s == 0 && dir == Direction::Right, "{s} {dir:?}: {e}"),
                }
            }
        }
    }

    #[test]
    fn mirrored_pairs() {
        let pair = build_mirrored_steiner_pair(6, 3.0, 0.0, FRAC_PI_3, None).unwrap();
        let c = pair.second.outer.center().unwrap();
        assert!(c.dist(Point::new(3.0, -3f64.sqrt())) < 1e-14);
        let pair = build_mirrored_steiner_pair(6, 3.0, 0.0, PI / 2.0, None).unwrap();
        assert!(
            pair.second
                .outer
                .center()
                .unwrap()
                .dist(Point::new(4.0, 0.0))
                < 1e-14
        );
        assert!(!pair.coincident);
        let pair = build_mirrored_steiner_pair(6, 3.0, 0.0, 0.0, None).unwrap();
        assert!(pair.coincident);
        let inv = Inversion::new(Point::new(7.0, 0.0), 1.0).unwrap();
        build_mirrored_steiner_pair(8, 3.0, 0.3, PI / 4.0, Some(inv)).unwrap();
    }

    #[test]
    fn transplanted_pair() {
        let shared = circ(2.0, 0.0, 1.0);
        let omega = orthogonal_circle_at(&shared, Point::new(5.0, 1.0)).unwrap();
        assert!((omega.radius().unwrap() - 3.0).abs() < 1e-15);
        let pair = build_transplanted_pair(6, 3.0, 0.0, omega).unwrap();
        let img = Inversion::in_circle(&omega)
            .unwrap()
            .invert_gcircle(&shared);
        assert!(img.approx_eq(&shared, 1e-10));
        assert_eq!(pair.kind, PairKind::TransplantedSteiner);
        assert!(matches!(
            orthogonal_circle_at(&shared, Point::new(2.0, 0.0)),
            Err(Error::NotOrthogonal { .. })
        ));
        assert!(matches!(
            build_transplanted_pair(6, 3.0, 0.0, circ(2.0, 0.0, 2.0)),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn pair_positions() {
        let pair = build_mirrored_steiner_pair(6, 3.0, 0.0, FRAC_PI_3, None).unwrap();
        assert_eq!(pair.position(Which::First, 1).unwrap(), 0);
        assert_eq!(pair.position(Which::First, 6).unwrap(), 5);
        assert!(pair.position(Which::First, 7).is_err());
        let ortho = build_orthogonal_pappus_pair(&worked(6), 2, Direction::Left).unwrap();
        assert_eq!(ortho.position(Which::First, 1).unwrap(), 2);
        assert_eq!(ortho.available(Which::First), 4);
        assert!(ortho.neighbor_position(Which::First, 4).is_err());
    }
}
