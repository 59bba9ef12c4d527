//! Browser bindings: each function returns a complete SVG document.

use tangent_chains::chain::{steiner_inner_radius, Side};
use tangent_chains::family::{Family, IndexRule};
use tangent_chains::incidence::{CheckOptions, ExpectedKind, FociLine};
use tangent_chains::scene::{
    ChainSpec, Check, CheckSpec, CircleSpec, InversionSpec, PairSpec, SceneConfig,
};
use tangent_chains::{GeneralizedCircle, Inversion, Point};
use wasm_bindgen::prelude::*;

const WIDTH_PX: u32 = 640;

fn draw(mut scene: SceneConfig) -> tangent_chains::Result<String> {
    scene.render.width_px = WIDTH_PX;
    let (built, report) = scene.execute(&CheckOptions::default())?;
    scene.render_svg(&built, &report.checks)
}

/// Pappus chain in the unit circle around an inner parent of radius
/// `ratio` touching it at `(1, 0)`, with the concurrent lines and the
/// conic through the contact-triangle circle centers.
pub fn pappus(ratio: f64, count: usize) -> tangent_chains::Result<String> {
    let mut s = SceneConfig::default();
    s.circles
        .insert("outer".into(), CircleSpec::new(0.0, 0.0, 1.0));
    s.circles
        .insert("inner".into(), CircleSpec::new(1.0 - ratio, 0.0, ratio));
    s.chains.insert(
        "chain".into(),
        ChainSpec::Pappus {
            outer: "outer".into(),
            inner: "inner".into(),
            count,
            side: Side::Up,
        },
    );
    s.checks.push(CheckSpec::new(Check::PappusConcurrency {
        chain: "chain".into(),
    }));
    s.checks.push(CheckSpec::new(Check::CenterConic {
        target: "chain".into(),
        family: Family::ContactTriangle,
        k: 1,
        rule: IndexRule::FixedDifference,
        expected: ExpectedKind::Any,
        foci_line: Some(FociLine::CenterLine),
    }));
    draw(s)
}

/// Closed Steiner chain of `n` starting at `start_deg`, between the
/// images of two concentric parents under inversion about `(center_x, 0)`.
pub fn steiner(n: usize, start_deg: f64, center_x: f64) -> tangent_chains::Result<String> {
    if n < 3 {
        return Err(tangent_chains::Error::BadCount { min: 3, got: n });
    }
    let inv = Inversion::new(Point::new(center_x, 0.0), 16.0)?;
    let spec = |radius: f64| -> tangent_chains::Result<CircleSpec> {
        match inv.invert_gcircle(&GeneralizedCircle::circle(Point::ORIGIN, radius)) {
            GeneralizedCircle::Circle { center, radius } => {
                Ok(CircleSpec::new(center.x, center.y, radius))
            }
            GeneralizedCircle::Line { .. } => Err(tangent_chains::Error::AtInfinity),
        }
    };
    let mut s = SceneConfig::default();
    s.circles.insert("outer".into(), spec(3.0)?);
    s.circles
        .insert("inner".into(), spec(steiner_inner_radius(n, 3.0))?);
    s.chains.insert(
        "chain".into(),
        ChainSpec::Steiner {
            outer: "outer".into(),
            inner: "inner".into(),
            n,
            start_deg,
        },
    );
    draw(s)
}

/// Mirrored Steiner pair with the circles through matching outer
/// contacts of both chains.
pub fn mirrored(n: usize, mirror_deg: f64) -> tangent_chains::Result<String> {
    let mut s = SceneConfig::default();
    s.pairs.insert(
        "pair".into(),
        PairSpec::MirroredSteiner {
            n,
            outer_radius: 3.0,
            shared_deg: 0.0,
            mirror_deg,
            post_inversion: Some(InversionSpec {
                center: [7.0, 0.0],
                power: 16.0,
            }),
        },
    );
    s.checks.push(CheckSpec::new(Check::CenterConic {
        target: "pair".into(),
        family: Family::CrossOuter,
        k: 2,
        rule: IndexRule::Cyclic,
        expected: ExpectedKind::Any,
        foci_line: None,
    }));
    draw(s)
}

fn js(r: tangent_chains::Result<String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen(js_name = pappusSvg)]
pub fn pappus_svg(ratio: f64, count: usize) -> Result<String, JsValue> {
    js(pappus(ratio, count))
}

#[wasm_bindgen(js_name = steinerSvg)]
pub fn steiner_svg(n: usize, start_deg: f64, center_x: f64) -> Result<String, JsValue> {
    js(steiner(n, start_deg, center_x))
}

#[wasm_bindgen(js_name = mirroredSvg)]
pub fn mirrored_svg(n: usize, mirror_deg: f64) -> Result<String, JsValue> {
    js(mirrored(n, mirror_deg))
}
