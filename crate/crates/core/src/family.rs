//! Secondary circles through contact points, indexed by family and rule.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chain::{Chain, ChainPair, Which};
use crate::error::{Error, Result};
use crate::geom::{circle_from_3_points, GeneralizedCircle, Point, DUPLICATE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Circle through `L_i`, `M_i`, `N_j` of one chain.
    #[serde(alias = "omega")]
    ContactTriangle,
    /// Circle through `L_j`, `L_i`, `M_i`, `M_j` of one chain.
    #[serde(alias = "quad_circle")]
    ContactQuad,
    /// Circle through `L_i`, `M_i` of both chains of a pair.
    #[serde(alias = "c_i")]
    CrossContact,
    /// Circle through `L_i`, `L_j` of both chains.
    #[serde(alias = "c_ll", alias = "c_l")]
    CrossOuter,
    /// Circle through `M_i`, `M_j` of both chains.
    #[serde(alias = "c_mm", alias = "c_m")]
    CrossInner,
    /// Circle through `N_i`, `N_j` of both chains.
    #[serde(alias = "c_nn")]
    CrossNeighbor,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::ContactTriangle,
        Family::ContactQuad,
        Family::CrossContact,
        Family::CrossOuter,
        Family::CrossInner,
        Family::CrossNeighbor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::ContactTriangle => "contact_triangle",
            Family::ContactQuad => "contact_quad",
            Family::CrossContact => "cross_contact",
            Family::CrossOuter => "cross_outer",
            Family::CrossInner => "cross_inner",
            Family::CrossNeighbor => "cross_neighbor",
        }
    }

    pub fn needs_pair(self) -> bool {
        !matches!(self, Family::ContactTriangle | Family::ContactQuad)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        Ok(match norm.as_str() {
            "contact_triangle" | "omega" => Family::ContactTriangle,
            "contact_quad" | "quad_circle" => Family::ContactQuad,
            "cross_contact" | "c_i" => Family::CrossContact,
            "cross_outer" | "c_ll" | "c_l" => Family::CrossOuter,
            "cross_inner" | "c_mm" | "c_m" => Family::CrossInner,
            "cross_neighbor" | "c_nn" => Family::CrossNeighbor,
            _ => return Err(Error::InvalidParameter(format!("unknown family `{s}`"))),
        })
    }
}

/// How the second index of each tuple follows from the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexRule {
    /// `(i, i − k)`.
    #[default]
    FixedDifference,
    /// `(i, i(k + 1) − 1)` on 1-based pair indices.
    PairProgression,
    /// `(i, 2ik − i − k + 1)`: the images of `(1, k)` under the
    /// homotheties of the strip picture.
    Homothetic,
    /// `(i, ((i + k − 2) mod n) + 1)` on a closed chain of `n`.
    Cyclic,
}

impl FromStr for IndexRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "fixed_difference" => IndexRule::FixedDifference,
            "pair_progression" => IndexRule::PairProgression,
            "homothetic" => IndexRule::Homothetic,
            "cyclic" => IndexRule::Cyclic,
            _ => return Err(Error::InvalidParameter(format!("unknown index rule `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selector {
    pub family: Family,
    pub k: usize,
    #[serde(default)]
    pub rule: IndexRule,
}

impl Selector {
    pub fn new(family: Family, k: usize, rule: IndexRule) -> Self {
        Self { family, k, rule }
    }
}

/// One member of a family: its index tuple, the circle through the first
/// three defining points, and the relative distance of the fourth point
/// from it (zero for three-point families).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondaryCircle {
    pub indices: (usize, usize),
    pub circle: GeneralizedCircle,
    pub points: Vec<Point>,
    pub membership: f64,
}

/// Secondary circle through the first three distinct points of `points`;
/// any remaining point is scored for membership.
pub fn secondary_circle(indices: (usize, usize), points: Vec<Point>) -> Result<SecondaryCircle> {
    let scale = points
        .iter()
        .fold(0.0f64, |m, p| m.max(p.max_abs()))
        .max(f64::MIN_POSITIVE);
    let mut distinct: Vec<Point> = Vec::with_capacity(points.len());
    for &p in &points {
        if distinct.iter().all(|q| q.dist(p) > DUPLICATE_TOL * scale) {
            distinct.push(p);
        }
    }
    if distinct.len() < 3 {
        return Err(Error::DuplicatePoints);
    }
    let circle = circle_from_3_points(distinct[0], distinct[1], distinct[2])?;
    let membership = distinct.get(3).map_or(0.0, |&p| match circle {
        GeneralizedCircle::Circle { .. } => circle.relative_distance_to(p),
        GeneralizedCircle::Line { .. } => circle.distance_to(p) / distinct[0].dist(distinct[1]),
    });
    Ok(SecondaryCircle {
        indices,
        circle,
        points,
        membership,
    })
}

/// Circle through both parent contacts of member `i` and the contact
/// between members `j` and `j + 1` (0-based).
pub fn contact_triangle(chain: &Chain, i: usize, j: usize) -> Result<SecondaryCircle> {
    let n = chain.len();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, limit: n });
    }
    let nc = chain.neighbor_contacts.len();
    if j >= nc {
        return Err(Error::IndexOutOfRange {
            index: j,
            limit: nc,
        });
    }
    secondary_circle(
        (i, j),
        vec![
            chain.outer_contacts[i],
            chain.inner_contacts[i],
            chain.neighbor_contacts[j],
        ],
    )
}

/// Circle through the outer contacts of members `j` and `i` and the
/// inner contact of `i`; the inner contact of `j` is the fourth point.
pub fn contact_quad(chain: &Chain, i: usize, j: usize) -> Result<SecondaryCircle> {
    let n = chain.len();
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::IndexOutOfRange {
                index: idx,
                limit: n,
            });
        }
    }
    if i == j {
        return Err(Error::InvalidParameter(
            "contact quad needs two distinct members".into(),
        ));
    }
    secondary_circle(
        (i, j),
        vec![
            chain.outer_contacts[j],
            chain.outer_contacts[i],
            chain.inner_contacts[i],
            chain.inner_contacts[j],
        ],
    )
}

#[derive(Debug, Clone, Copy)]
enum Contact {
    Outer,
    Inner,
    Neighbor,
}

fn pair_point(pair: &ChainPair, which: Which, contact: Contact, i: usize) -> Result<Point> {
    let chain = pair.chain(which);
    Ok(match contact {
        Contact::Outer => chain.outer_contacts[pair.position(which, i)?],
        Contact::Inner => chain.inner_contacts[pair.position(which, i)?],
        Contact::Neighbor => chain.neighbor_contacts[pair.neighbor_position(which, i)?],
    })
}

/// The four points a pair family names for the 1-based tuple `(i, j)`,
/// ordered first-chain `i`, first-chain `j`, second-chain `i`,
/// second-chain `j` (or `L¹_i, M¹_i, L²_i, M²_i` for cross contacts).
pub fn pair_quadruple(pair: &ChainPair, family: Family, i: usize, j: usize) -> Result<[Point; 4]> {
    let contact = match family {
        Family::CrossContact => {
            return Ok([
                pair_point(pair, Which::First, Contact::Outer, i)?,
                pair_point(pair, Which::First, Contact::Inner, i)?,
                pair_point(pair, Which::Second, Contact::Outer, i)?,
                pair_point(pair, Which::Second, Contact::Inner, i)?,
            ])
        }
        Family::CrossOuter => Contact::Outer,
        Family::CrossInner => Contact::Inner,
        Family::CrossNeighbor => Contact::Neighbor,
        other => {
            return Err(Error::WrongKind(format!(
                "{other} is a single-chain family"
            )))
        }
    };
    Ok([
        pair_point(pair, Which::First, contact, i)?,
        pair_point(pair, Which::First, contact, j)?,
        pair_point(pair, Which::Second, contact, i)?,
        pair_point(pair, Which::Second, contact, j)?,
    ])
}

fn rule_index(rule: IndexRule, i: usize, k: usize, n: usize) -> Option<usize> {
    let (i, k) = (i as i64, k as i64);
    let j = match rule {
        IndexRule::FixedDifference => i - k,
        IndexRule::PairProgression => i * (k + 1) - 1,
        IndexRule::Homothetic => 2 * i * k - i - k + 1,
        IndexRule::Cyclic => (i + k - 2).rem_euclid(n.max(1) as i64) + 1,
    };
    usize::try_from(j).ok()
}

/// Index tuples a selector produces on a single chain (0-based).
pub fn chain_tuples(chain: &Chain, selector: &Selector) -> Result<Vec<(usize, usize)>> {
    if selector.family.needs_pair() {
        return Err(Error::WrongKind(format!(
            "{} needs a chain pair",
            selector.family
        )));
    }
    if selector.rule != IndexRule::FixedDifference {
        return Err(Error::InvalidParameter(
            "single-chain families use the fixed-difference rule".into(),
        ));
    }
    let k = selector.k;
    let n = chain.len();
    let limit = match selector.family {
        Family::ContactTriangle => n.min(chain.neighbor_contacts.len() + k),
        _ => n,
    };
    if selector.family == Family::ContactQuad && k == 0 {
        return Err(Error::InvalidParameter("contact quads need k ≥ 1".into()));
    }
    Ok((k..limit).map(|i| (i, i - k)).collect())
}

/// Index tuples a selector produces on a pair (1-based, from the shared
/// member). Tuples with `i = j` name only two points and are skipped;
/// generation stops at the first tuple that leaves either chain.
pub fn pair_tuples(pair: &ChainPair, selector: &Selector) -> Result<Vec<(usize, usize)>> {
    if !selector.family.needs_pair() {
        return Err(Error::WrongKind(format!(
            "{} is a single-chain family",
            selector.family
        )));
    }
    let neighbor = selector.family == Family::CrossNeighbor;
    let limit = |w: Which| {
        let a = pair.available(w);
        let chain = pair.chain(w);
        if neighbor && !chain.closed {
            a - 1
        } else {
            a
        }
    };
    let n = limit(Which::First).min(limit(Which::Second));
    if selector.family == Family::CrossContact {
        return Ok((1..=n).map(|i| (i, i)).collect());
    }
    if selector.rule == IndexRule::Cyclic && !(pair.first.closed && pair.second.closed) {
        return Err(Error::InvalidParameter(
            "the cyclic rule needs closed chains".into(),
        ));
    }
    let mut out = Vec::new();
    for i in 1..=n {
        let Some(j) = rule_index(selector.rule, i, selector.k, n) else {
            continue;
        };
        if j == 0 {
            continue;
        }
        if j > n {
            if selector.rule == IndexRule::FixedDifference {
                continue;
            }
            break;
        }
        if j != i {
            out.push((i, j));
        }
    }
    Ok(out)
}

/// Secondary circles of one chain.
pub fn chain_circles(chain: &Chain, selector: &Selector) -> Result<Vec<SecondaryCircle>> {
    chain_tuples(chain, selector)?
        .into_iter()
        .map(|(i, j)| match selector.family {
            Family::ContactTriangle => contact_triangle(chain, i, j),
            _ => contact_quad(chain, i, j),
        })
        .collect()
}

/// Secondary circles of a pair.
pub fn pair_circles(pair: &ChainPair, selector: &Selector) -> Result<Vec<SecondaryCircle>> {
    pair_tuples(pair, selector)?
        .into_iter()
        .map(|(i, j)| {
            let q = pair_quadruple(pair, selector.family, i, j)?;
            secondary_circle((i, j), q.to_vec())
        })
        .collect()
}
