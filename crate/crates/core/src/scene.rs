//! Declarative scenes: named circles, chains and pairs, a list of checks
//! to run on them and settings for drawing the result.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::chain::{
    build_mirrored_steiner_pair, build_orthogonal_pappus_pair, build_pappus, build_steiner,
    build_steiner_concentric, build_transplanted_pair, orthogonal_circle_at, Chain, ChainPair,
    Direction, Side,
};
use crate::error::{Error, Result};
use crate::family::{Family, IndexRule, Selector};
use crate::geom::{GeneralizedCircle, Point};
use crate::incidence::{
    check_center_conic, check_chord_locus, check_no_orthogonal_annulus, check_ortho_circle,
    check_orthogonal_parents, check_pair_concyclic, check_pappus_concurrency,
    check_quad_circle_angles, check_triangle_circle_tangencies, check_w_circle, Artifact, Branch,
    CheckOptions, ConicSource, ExpectedKind, FociLine, IncidenceReport, LocusProblem,
};
use crate::inversion::Inversion;
use crate::svg::{SvgWriter, ViewBox};

/// The only scene format version understood.
pub const SCENE_VERSION: u32 = 1;

/// Version of the run report layout.
pub const REPORT_SCHEMA: u32 = 1;

/// Built-in scene names.
pub const FIXTURE_NAMES: [&str; 6] = [
    "pappus-basic",
    "ortho-pair",
    "steiner-6",
    "mirrored-60",
    "counterexample",
    "locus-default",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    pub center: [f64; 2],
    pub radius: f64,
}

impl CircleSpec {
    pub fn new(x: f64, y: f64, radius: f64) -> Self {
        Self {
            center: [x, y],
            radius,
        }
    }

    pub fn to_circle(self) -> Result<GeneralizedCircle> {
        let c = point(self.center);
        if !(self.radius > 0.0) || !self.radius.is_finite() || !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "circle needs a finite center and positive radius, got r = {}",
                self.radius
            )));
        }
        Ok(GeneralizedCircle::Circle {
            center: c,
            radius: self.radius,
        })
    }
}

fn point(xy: [f64; 2]) -> Point {
    Point::new(xy[0], xy[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InversionSpec {
    pub center: [f64; 2],
    pub power: f64,
}

impl InversionSpec {
    pub fn to_inversion(self) -> Result<Inversion> {
        Inversion::new(point(self.center), self.power)
    }
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

fn is_false(v: &bool) -> bool {
    !*v
}

/// How a named chain is constructed. Angles are in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChainSpec {
    /// Pappus chain between two internally tangent circles named in
    /// `circles`.
    Pappus {
        outer: String,
        inner: String,
        count: usize,
        #[serde(default)]
        side: Side,
    },
    /// Closed chain of `n` between circles about the origin.
    SteinerConcentric {
        n: usize,
        outer_radius: f64,
        #[serde(default, skip_serializing_if = "is_zero")]
        start_deg: f64,
    },
    /// Steiner chain between two nested named circles.
    Steiner {
        outer: String,
        inner: String,
        n: usize,
        #[serde(default, skip_serializing_if = "is_zero")]
        start_deg: f64,
    },
}

/// How a named pair of chains is constructed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairSpec {
    /// A named Pappus chain and the chain orthogonal to it through
    /// member `shared`.
    OrthogonalPappus {
        base: String,
        shared: usize,
        #[serde(default)]
        direction: Direction,
    },
    /// Concentric chain and its mirror image across a line through the
    /// shared member's center, optionally moved by an inversion.
    MirroredSteiner {
        n: usize,
        outer_radius: f64,
        #[serde(default, skip_serializing_if = "is_zero")]
        shared_deg: f64,
        mirror_deg: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        post_inversion: Option<InversionSpec>,
    },
    /// Concentric chain and its image under inversion in the circle
    /// about `omega_center` orthogonal to the shared member.
    TransplantedSteiner {
        n: usize,
        outer_radius: f64,
        #[serde(default, skip_serializing_if = "is_zero")]
        shared_deg: f64,
        omega_center: [f64; 2],
    },
}

/// One check and the names it reads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum Check {
    PappusConcurrency {
        chain: String,
    },
    OrthoCircle {
        chain: String,
    },
    QuadCircleAngles {
        chain: String,
        max_index: usize,
    },
    TriangleCircleTangencies {
        chain: String,
        max_i: usize,
        max_j: usize,
    },
    /// Centers of a family of secondary circles on a chain or pair.
    CenterConic {
        target: String,
        family: Family,
        k: usize,
        #[serde(default)]
        rule: IndexRule,
        #[serde(default)]
        expected: ExpectedKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        foci_line: Option<FociLine>,
    },
    PairConcyclic {
        pair: String,
        family: Family,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        indices: Option<Vec<(usize, usize)>>,
    },
    OrthogonalParents {
        pair: String,
    },
    WCircle {
        pair: String,
    },
    /// Uses the parents of the named chain.
    NoOrthogonalAnnulus {
        chain: String,
        trials: usize,
    },
    Locus {
        problem: LocusProblem,
        holdout: usize,
        y_range: (f64, f64),
    },
}

impl Check {
    pub fn name(&self) -> String {
        match self {
            Check::PappusConcurrency { chain } => format!("pappus_concurrency[{chain}]"),
            Check::OrthoCircle { chain } => format!("ortho_circle[{chain}]"),
            Check::QuadCircleAngles { chain, .. } => format!("quad_circle_angles[{chain}]"),
            Check::TriangleCircleTangencies { chain, .. } => {
                format!("triangle_circle_tangencies[{chain}]")
            }
            Check::CenterConic {
                target,
                family,
                k,
                rule,
                ..
            } => format!("center_conic[{target}:{family}:{rule:?}:k={k}]"),
            Check::PairConcyclic { pair, family, .. } => format!("pair_concyclic[{pair}:{family}]"),
            Check::OrthogonalParents { pair } => format!("orthogonal_parents[{pair}]"),
            Check::WCircle { pair } => format!("w_circle[{pair}]"),
            Check::NoOrthogonalAnnulus { chain, .. } => format!("no_orthogonal_annulus[{chain}]"),
            Check::Locus { .. } => "locus".into(),
        }
    }
}

/// Per-check replacements for [`CheckOptions`] fields.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub foci: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focal: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_floor: Option<f64>,
}

impl Tolerances {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    pub fn apply(&self, base: &CheckOptions) -> CheckOptions {
        CheckOptions {
            point_tol: self.point.unwrap_or(base.point_tol),
            angle_tol: self.angle.unwrap_or(base.angle_tol),
            conic_tol: self.conic.unwrap_or(base.conic_tol),
            foci_tol: self.foci.unwrap_or(base.foci_tol),
            focal_tol: self.focal.unwrap_or(base.focal_tol),
            failure_floor: self.failure_floor.unwrap_or(base.failure_floor),
        }
    }

    fn values(&self) -> impl Iterator<Item = f64> {
        [
            self.point,
            self.angle,
            self.conic,
            self.foci,
            self.focal,
            self.failure_floor,
        ]
        .into_iter()
        .flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    #[serde(flatten)]
    pub check: Check,
    /// The check is a known counterexample and must fail.
    #[serde(default, skip_serializing_if = "is_false")]
    pub expect_fail: bool,
    #[serde(default, skip_serializing_if = "Tolerances::is_empty")]
    pub tolerances: Tolerances,
}

impl CheckSpec {
    pub fn new(check: Check) -> Self {
        Self {
            check,
            expect_fail: false,
            tolerances: Tolerances::default(),
        }
    }

    pub fn expecting_failure(mut self) -> Self {
        self.expect_fail = true;
        self
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }
}

fn yes() -> bool {
    true
}

fn is_true(v: &bool) -> bool {
    *v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layers {
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub chains: bool,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub lines: bool,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub points: bool,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub secondary: bool,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub conics: bool,
}

impl Default for Layers {
    fn default() -> Self {
        Self {
            chains: true,
            lines: true,
            points: true,
            secondary: true,
            conics: true,
        }
    }
}

fn default_width() -> u32 {
    800
}

fn default_stroke() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderSettings {
    #[serde(default = "default_width")]
    pub width_px: u32,
    /// `[min_x, min_y, width, height]`; fitted to the scene when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viewbox: Option<[f64; 4]>,
    /// In output pixels.
    #[serde(default = "default_stroke")]
    pub stroke_width: f64,
    #[serde(default)]
    pub layers: Layers,
}

impl Default for RenderSettings {
    fn default() -> Self {
        Self {
            width_px: default_width(),
            viewbox: None,
            stroke_width: default_stroke(),
            layers: Layers::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub version: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub circles: BTreeMap<String, CircleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub chains: BTreeMap<String, ChainSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pairs: BTreeMap<String, PairSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub render: RenderSettings,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            version: SCENE_VERSION,
            circles: BTreeMap::new(),
            chains: BTreeMap::new(),
            pairs: BTreeMap::new(),
            checks: Vec::new(),
            render: RenderSettings::default(),
        }
    }
}

/// Every chain and pair of a scene, constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct Built {
    pub chains: BTreeMap<String, Chain>,
    pub pairs: BTreeMap<String, ChainPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub expect_fail: bool,
    /// Passed, or failed clearly when a failure was expected.
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<IncidenceReport>,
}

/// Result of running every check of a scene. Field order is part of the
/// schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    /// SHA-256 of the canonical JSON of the scene, hex encoded.
    pub input_hash: String,
    pub checks: Vec<CheckOutcome>,
    pub overall: bool,
    pub wall_time_s: f64,
}

impl RunReport {
    /// Compact JSON with 17 significant digits per number.
    pub fn to_json(&self) -> String {
        crate::report_json::to_string(self).expect("reports serialize")
    }
}

fn scene_err(msg: impl Into<String>) -> Error {
    Error::Scene(msg.into())
}

impl SceneConfig {
    /// Parses a scene. Errors name the field path, line and column of
    /// the first problem.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            scene_err(format!("at `{path}`: {}", e.into_inner()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenes serialize")
    }

    pub fn input_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("scenes serialize");
        Sha256::digest(canonical.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    fn circle(&self, name: &str, by: &str) -> Result<GeneralizedCircle> {
        let spec = self
            .circles
            .get(name)
            .ok_or_else(|| scene_err(format!("{by} names unknown circle `{name}`")))?;
        spec.to_circle()
            .map_err(|e| scene_err(format!("circle `{name}`: {e}")))
    }

    /// Checks names and parameters and constructs every chain and pair.
    pub fn build(&self) -> Result<Built> {
        if self.version != SCENE_VERSION {
            return Err(scene_err(format!(
                "version must be {SCENE_VERSION}, got {}",
                self.version
            )));
        }
        let mut chains = BTreeMap::new();
        for (name, spec) in &self.chains {
            let by = format!("chain `{name}`");
            let chain = match spec {
                ChainSpec::Pappus {
                    outer,
                    inner,
                    count,
                    side,
                } => build_pappus(
                    self.circle(outer, &by)?,
                    self.circle(inner, &by)?,
                    *count,
                    *side,
                ),
                ChainSpec::SteinerConcentric {
                    n,
                    outer_radius,
                    start_deg,
                } => build_steiner_concentric(*n, *outer_radius, start_deg.to_radians()),
                ChainSpec::Steiner {
                    outer,
                    inner,
                    n,
                    start_deg,
                } => build_steiner(
                    self.circle(outer, &by)?,
                    self.circle(inner, &by)?,
                    *n,
                    start_deg.to_radians(),
                ),
            }
            .map_err(|e| scene_err(format!("{by}: {e}")))?;
            chains.insert(name.clone(), chain);
        }
        let mut pairs = BTreeMap::new();
        for (name, spec) in &self.pairs {
            let by = format!("pair `{name}`");
            let pair = match spec {
                PairSpec::OrthogonalPappus {
                    base,
                    shared,
                    direction,
                } => {
                    let chain = chains
                        .get(base)
                        .ok_or_else(|| scene_err(format!("{by} names unknown chain `{base}`")))?;
                    build_orthogonal_pappus_pair(chain, *shared, *direction)
                }
                PairSpec::MirroredSteiner {
                    n,
                    outer_radius,
                    shared_deg,
                    mirror_deg,
                    post_inversion,
                } => post_inversion
                    .map(InversionSpec::to_inversion)
                    .transpose()
                    .and_then(|inv| {
                        build_mirrored_steiner_pair(
                            *n,
                            *outer_radius,
                            shared_deg.to_radians(),
                            mirror_deg.to_radians(),
                            inv,
                        )
                    }),
                PairSpec::TransplantedSteiner {
                    n,
                    outer_radius,
                    shared_deg,
                    omega_center,
                } => transplanted(
                    *n,
                    *outer_radius,
                    shared_deg.to_radians(),
                    point(*omega_center),
                ),
            }
            .map_err(|e| scene_err(format!("{by}: {e}")))?;
            pairs.insert(name.clone(), pair);
        }
        let built = Built { chains, pairs };
        for (t, spec) in self.checks.iter().enumerate() {
            if spec
                .tolerances
                .values()
                .any(|v| !(v > 0.0) || !v.is_finite())
            {
                return Err(scene_err(format!("check {t}: tolerances must be positive")));
            }
            self.resolve_names(&built, &spec.check)
                .map_err(|e| scene_err(format!("check {t} ({}): {e}", spec.check.name())))?;
        }
        Ok(built)
    }

    fn resolve_names(&self, built: &Built, check: &Check) -> Result<()> {
        let chain = |n: &str| {
            built
                .chains
                .get(n)
                .map(|_| ())
                .ok_or_else(|| scene_err(format!("unknown chain `{n}`")))
        };
        let pair = |n: &str| {
            built
                .pairs
                .get(n)
                .map(|_| ())
                .ok_or_else(|| scene_err(format!("unknown pair `{n}`")))
        };
        match check {
            Check::PappusConcurrency { chain: c }
            | Check::OrthoCircle { chain: c }
            | Check::QuadCircleAngles { chain: c, .. }
            | Check::TriangleCircleTangencies { chain: c, .. }
            | Check::NoOrthogonalAnnulus { chain: c, .. } => chain(c),
            Check::PairConcyclic { pair: p, .. }
            | Check::OrthogonalParents { pair: p }
            | Check::WCircle { pair: p } => pair(p),
            Check::CenterConic { target, .. } => {
                if built.chains.contains_key(target) || built.pairs.contains_key(target) {
                    Ok(())
                } else {
                    Err(scene_err(format!("unknown chain or pair `{target}`")))
                }
            }
            Check::Locus { problem, .. } => problem.validate(),
        }
    }

    /// Runs one check against already built geometry.
    pub fn run_check(
        &self,
        built: &Built,
        check: &Check,
        opts: &CheckOptions,
    ) -> Result<IncidenceReport> {
        let chain = |n: &str| {
            built
                .chains
                .get(n)
                .ok_or_else(|| scene_err(format!("unknown chain `{n}`")))
        };
        let pair = |n: &str| {
            built
                .pairs
                .get(n)
                .ok_or_else(|| scene_err(format!("unknown pair `{n}`")))
        };
        match check {
            Check::PappusConcurrency { chain: c } => check_pappus_concurrency(chain(c)?, opts),
            Check::OrthoCircle { chain: c } => check_ortho_circle(chain(c)?, opts),
            Check::QuadCircleAngles {
                chain: c,
                max_index,
            } => check_quad_circle_angles(chain(c)?, *max_index, opts),
            Check::TriangleCircleTangencies {
                chain: c,
                max_i,
                max_j,
            } => check_triangle_circle_tangencies(chain(c)?, *max_i, *max_j, opts),
            Check::CenterConic {
                target,
                family,
                k,
                rule,
                expected,
                foci_line,
            } => {
                let source = match built.chains.get(target) {
                    Some(c) => ConicSource::Chain(c),
                    None => ConicSource::Pair(pair(target)?),
                };
                let line = foci_line.map(|f| f.resolve(source)).transpose()?;
                check_center_conic(
                    source,
                    &Selector::new(*family, *k, *rule),
                    *expected,
                    line.as_ref(),
                    opts,
                )
            }
            Check::PairConcyclic {
                pair: p,
                family,
                indices,
            } => check_pair_concyclic(pair(p)?, *family, indices.as_deref(), opts),
            Check::OrthogonalParents { pair: p } => check_orthogonal_parents(pair(p)?, opts),
            Check::WCircle { pair: p } => check_w_circle(pair(p)?, opts),
            Check::NoOrthogonalAnnulus { chain: c, trials } => {
                let c = chain(c)?;
                check_no_orthogonal_annulus(&c.outer, &c.inner, *trials, opts)
            }
            Check::Locus {
                problem,
                holdout,
                y_range,
            } => check_chord_locus(problem, *holdout, *y_range, opts),
        }
    }

    /// Builds the scene and runs every check in order. `base` supplies
    /// the tolerances each check does not override.
    pub fn execute(&self, base: &CheckOptions) -> Result<(Built, RunReport)> {
        let start = Instant::now();
        let built = self.build()?;
        let mut checks = Vec::with_capacity(self.checks.len());
        for spec in &self.checks {
            let opts = spec.tolerances.apply(base);
            let outcome = match self.run_check(&built, &spec.check, &opts) {
                Ok(report) => {
                    let ok = if spec.expect_fail {
                        !report.pass && report.max_residual >= opts.failure_floor
                    } else {
                        report.pass
                    };
                    CheckOutcome {
                        name: spec.check.name(),
                        expect_fail: spec.expect_fail,
                        ok,
                        error: None,
                        report: Some(report),
                    }
                }
                Err(e) => CheckOutcome {
                    name: spec.check.name(),
                    expect_fail: spec.expect_fail,
                    ok: false,
                    error: Some(e.to_string()),
                    report: None,
                },
            };
            checks.push(outcome);
        }
        let overall = checks.iter().all(|c| c.ok);
        let report = RunReport {
            schema_version: REPORT_SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            input_hash: self.input_hash(),
            checks,
            overall,
            wall_time_s: start.elapsed().as_secs_f64(),
        };
        Ok((built, report))
    }

    /// Draws the scene, with the artifacts of `outcomes` when given.
    pub fn render_svg(&self, built: &Built, outcomes: &[CheckOutcome]) -> Result<String> {
        let settings = &self.render;
        let layers = settings.layers;
        let mut chains: Vec<(String, &Chain)> =
            built.chains.iter().map(|(n, c)| (n.clone(), c)).collect();
        for (n, p) in &built.pairs {
            chains.push((format!("{n}-first"), &p.first));
            chains.push((format!("{n}-second"), &p.second));
        }
        let reports: Vec<&IncidenceReport> =
            outcomes.iter().filter_map(|o| o.report.as_ref()).collect();
        let view = match settings.viewbox {
            Some([x, y, w, h]) => ViewBox::new(x, y, w, h)?,
            None => fitted_view(&chains, &reports),
        };
        let mut svg = SvgWriter::new(view, settings.width_px, settings.stroke_width)?;
        if layers.chains {
            for (name, chain) in &chains {
                svg.begin_group(&format!("parents-{name}"), "#000000");
                svg.gcircle(&chain.outer);
                svg.gcircle(&chain.inner);
                svg.end_group();
                svg.begin_group(&format!("members-{name}"), "#1f77b4");
                for c in &chain.circles {
                    svg.gcircle(c);
                }
                svg.end_group();
            }
        }
        if layers.lines {
            for (name, chain) in chains.iter().filter(|(_, c)| c.apex.is_some()) {
                svg.begin_group(&format!("lines-{name}"), "#7f7f7f");
                for l in chain.contact_chords.iter().chain(&chain.neighbor_tangents) {
                    svg.line(l);
                }
                svg.end_group();
            }
        }
        for (t, report) in reports.iter().enumerate() {
            let id = format!("check-{t}");
            if layers.secondary {
                let circles: Vec<GeneralizedCircle> = report
                    .artifacts
                    .values()
                    .flat_map(|a| match a {
                        Artifact::Circle(c) => vec![*c],
                        Artifact::Circles(cs) => cs.clone(),
                        _ => Vec::new(),
                    })
                    .collect();
                if !circles.is_empty() {
                    svg.begin_group(&format!("{id}-circles"), "#2ca02c");
                    circles.iter().for_each(|c| svg.gcircle(c));
                    svg.end_group();
                }
            }
            if layers.conics {
                let conics: Vec<_> = report
                    .artifacts
                    .iter()
                    .filter_map(|(k, a)| match a {
                        Artifact::Conic(c) if k != "least_squares" => Some(*c),
                        _ => None,
                    })
                    .collect();
                if !conics.is_empty() {
                    svg.begin_group(&format!("{id}-conics"), "#d62728");
                    conics.iter().for_each(|c| svg.conic(c));
                    svg.end_group();
                }
            }
            if layers.points {
                let points: Vec<Point> = report_points(report);
                if !points.is_empty() {
                    svg.begin_group(&format!("{id}-points"), "none");
                    points.iter().for_each(|&p| svg.dot(p, "#d62728"));
                    svg.end_group();
                }
            }
        }
        if layers.points {
            for (name, chain) in &chains {
                svg.begin_group(&format!("contacts-{name}"), "none");
                for &p in chain
                    .outer_contacts
                    .iter()
                    .chain(&chain.inner_contacts)
                    .chain(&chain.neighbor_contacts)
                {
                    svg.dot(p, "#000000");
                }
                svg.end_group();
            }
        }
        Ok(svg.finish())
    }
}

fn report_points(report: &IncidenceReport) -> Vec<Point> {
    report
        .artifacts
        .values()
        .flat_map(|a| match a {
            Artifact::Point(p) => vec![*p],
            Artifact::Points(ps) => ps.clone(),
            _ => Vec::new(),
        })
        .collect()
}

fn fitted_view(chains: &[(String, &Chain)], reports: &[&IncidenceReport]) -> ViewBox {
    let mut corners = Vec::new();
    for (_, chain) in chains {
        for c in [&chain.outer, &chain.inner] {
            if let Some((p, r)) = c.as_circle() {
                corners.push(p - Point::new(r, r));
                corners.push(p + Point::new(r, r));
            }
        }
    }
    if corners.is_empty() {
        corners = reports.iter().flat_map(|r| report_points(r)).collect();
    }
    ViewBox::around(&corners, 0.05).unwrap_or(ViewBox {
        min_x: -1.0,
        min_y: -1.0,
        width: 2.0,
        height: 2.0,
    })
}

fn transplanted(
    n: usize,
    outer_radius: f64,
    shared_angle: f64,
    omega_center: Point,
) -> Result<ChainPair> {
    let first = build_steiner_concentric(n, outer_radius, shared_angle)?;
    let omega = orthogonal_circle_at(&first.circles[0], omega_center)?;
    build_transplanted_pair(n, outer_radius, shared_angle, omega)
}

fn concyclic_all(pair: &str) -> impl Iterator<Item = CheckSpec> + '_ {
    [
        Family::CrossContact,
        Family::CrossOuter,
        Family::CrossInner,
        Family::CrossNeighbor,
    ]
    .into_iter()
    .map(move |family| {
        CheckSpec::new(Check::PairConcyclic {
            pair: pair.into(),
            family,
            indices: None,
        })
    })
}

/// The Pappus scene with the worked parents and `count` members.
pub fn pappus_scene(outer: CircleSpec, inner: CircleSpec, count: usize) -> SceneConfig {
    let mut s = SceneConfig::default();
    s.circles.insert("outer".into(), outer);
    s.circles.insert("inner".into(), inner);
    s.chains.insert(
        "pappus".into(),
        ChainSpec::Pappus {
            outer: "outer".into(),
            inner: "inner".into(),
            count,
            side: Side::Up,
        },
    );
    let chain = || "pappus".to_string();
    s.checks = vec![
        CheckSpec::new(Check::PappusConcurrency { chain: chain() }),
        CheckSpec::new(Check::OrthoCircle { chain: chain() }),
        CheckSpec::new(Check::QuadCircleAngles {
            chain: chain(),
            max_index: 8.min(count.saturating_sub(1)),
        }),
        CheckSpec::new(Check::TriangleCircleTangencies {
            chain: chain(),
            max_i: 4.min(count.saturating_sub(2)),
            max_j: 6.min(count.saturating_sub(2)),
        }),
        CheckSpec::new(Check::CenterConic {
            target: chain(),
            family: Family::ContactTriangle,
            k: 1,
            rule: IndexRule::FixedDifference,
            expected: ExpectedKind::Ellipse,
            foci_line: Some(FociLine::CenterLine),
        }),
    ];
    s
}

/// The transplanted pair with every family expected to fail.
pub fn counterexample_scene(n: usize, outer_radius: f64, omega_center: Point) -> SceneConfig {
    let mut s = SceneConfig::default();
    let pair = || "transplanted".to_string();
    s.pairs.insert(
        pair(),
        PairSpec::TransplantedSteiner {
            n,
            outer_radius,
            shared_deg: 0.0,
            omega_center: [omega_center.x, omega_center.y],
        },
    );
    s.checks = vec![
        CheckSpec::new(Check::PairConcyclic {
            pair: pair(),
            family: Family::CrossInner,
            indices: None,
        })
        .expecting_failure(),
        CheckSpec::new(Check::PairConcyclic {
            pair: pair(),
            family: Family::CrossOuter,
            indices: None,
        })
        .expecting_failure(),
        CheckSpec::new(Check::CenterConic {
            target: pair(),
            family: Family::CrossOuter,
            k: 2,
            rule: IndexRule::Cyclic,
            expected: ExpectedKind::Any,
            foci_line: None,
        })
        .expecting_failure(),
    ];
    s
}

/// The default problem of the inverted-chord locus.
pub fn locus_problem() -> LocusProblem {
    LocusProblem {
        chord: 1.0,
        offset: 2.0,
        omega_center: Point::new(0.0, 3.0),
        omega_radius: 1.0,
        branch: Branch::Plus,
    }
}

/// A built-in scene by name.
pub fn fixture(name: &str) -> Result<SceneConfig> {
    let unit = CircleSpec::new(0.0, 0.0, 1.0);
    let half = CircleSpec::new(0.5, 0.0, 0.5);
    match name {
        "pappus-basic" => Ok(pappus_scene(unit, half, 12)),
        "ortho-pair" => {
            let mut s = SceneConfig::default();
            s.circles.insert("outer".into(), unit);
            s.circles.insert("inner".into(), half);
            s.chains.insert(
                "base".into(),
                ChainSpec::Pappus {
                    outer: "outer".into(),
                    inner: "inner".into(),
                    count: 12,
                    side: Side::Up,
                },
            );
            s.pairs.insert(
                "ortho".into(),
                PairSpec::OrthogonalPappus {
                    base: "base".into(),
                    shared: 0,
                    direction: Direction::Left,
                },
            );
            s.checks.push(CheckSpec::new(Check::OrthogonalParents {
                pair: "ortho".into(),
            }));
            s.checks.push(
                CheckSpec::new(Check::WCircle {
                    pair: "ortho".into(),
                })
                .with_tolerances(Tolerances {
                    angle: Some(1e-7),
                    ..Tolerances::default()
                }),
            );
            s.checks.extend(concyclic_all("ortho"));
            Ok(s)
        }
        "steiner-6" => {
            let mut s = SceneConfig::default();
            s.chains.insert(
                "steiner".into(),
                ChainSpec::SteinerConcentric {
                    n: 6,
                    outer_radius: 3.0,
                    start_deg: 0.0,
                },
            );
            s.checks.push(CheckSpec::new(Check::NoOrthogonalAnnulus {
                chain: "steiner".into(),
                trials: 6,
            }));
            Ok(s)
        }
        "mirrored-60" => {
            let mut s = SceneConfig::default();
            let post = InversionSpec {
                center: [7.0, 0.0],
                power: 1.0,
            };
            s.pairs.insert(
                "mirrored".into(),
                PairSpec::MirroredSteiner {
                    n: 6,
                    outer_radius: 3.0,
                    shared_deg: 0.0,
                    mirror_deg: 60.0,
                    post_inversion: Some(post),
                },
            );
            s.checks.extend(concyclic_all("mirrored"));
            s.checks.push(CheckSpec::new(Check::CenterConic {
                target: "mirrored".into(),
                family: Family::CrossOuter,
                k: 2,
                rule: IndexRule::Cyclic,
                expected: ExpectedKind::Any,
                foci_line: None,
            }));
            Ok(s)
        }
        "counterexample" => Ok(counterexample_scene(6, 3.0, Point::new(5.0, 1.0))),
        "locus-default" => {
            let mut s = SceneConfig::default();
            s.checks.push(CheckSpec::new(Check::Locus {
                problem: locus_problem(),
                holdout: 100,
                y_range: (-3.0, 3.0),
            }));
            Ok(s)
        }
        other => Err(Error::UnknownFixture(other.into())),
    }
}
