use tangent_chains::chain::{build_pappus, Side};
use tangent_chains::family::{Family, IndexRule, Selector};
use tangent_chains::incidence::{
    check_center_conic, Artifact, CheckOptions, ConicSource, ExpectedKind,
};
use tangent_chains::scene::{fixture, SceneConfig, FIXTURE_NAMES};
use tangent_chains::{Error, GeneralizedCircle, Point};

#[test]
fn every_fixture_verifies() {
    for name in FIXTURE_NAMES {
        let scene = fixture(name).unwrap();
        let (_, report) = scene.execute(&CheckOptions::default()).unwrap();
        assert!(report.overall, "{name}: {}", report.to_json());
    }
}

#[test]
fn fixtures_round_trip_through_json() {
    for name in FIXTURE_NAMES {
        let scene = fixture(name).unwrap();
        let again = SceneConfig::from_json(&scene.to_json()).unwrap();
        assert_eq!(again.to_json(), scene.to_json());
        assert_eq!(again.input_hash(), scene.input_hash());
    }
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let scene = fixture("mirrored-60").unwrap();
    let run = || {
        let (_, mut report) = scene.execute(&CheckOptions::default()).unwrap();
        report.wall_time_s = 0.0;
        report.to_json()
    };
    assert_eq!(run(), run());
}

#[test]
fn unknown_version_is_rejected() {
    let mut scene = fixture("pappus-basic").unwrap();
    scene.version = 99;
    assert!(matches!(scene.build(), Err(Error::Scene(_))));
}

#[test]
fn worked_fixture_quad_conic_turns_hyperbolic_at_k3() {
    let chain = build_pappus(
        GeneralizedCircle::circle(Point::ORIGIN, 1.0),
        GeneralizedCircle::circle(Point::new(0.5, 0.0), 0.5),
        12,
        Side::Up,
    )
    .unwrap();
    let sel = Selector::new(Family::ContactQuad, 3, IndexRule::FixedDifference);
    let r = check_center_conic(
        ConicSource::Chain(&chain),
        &sel,
        ExpectedKind::Any,
        None,
        &CheckOptions::default(),
    )
    .unwrap();
    assert!(matches!(r.artifacts.get("kind"), Some(Artifact::Text(t)) if t == "hyperbola"));
}
