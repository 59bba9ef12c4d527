use tangent_chains::chain::{
    build_orthogonal_pappus_pair, build_pappus, ChainPair, Direction, Side,
};
use tangent_chains::family::{Family, IndexRule, Selector};
use tangent_chains::incidence::{
    check_center_conic, Artifact, CheckOptions, ConicSource, ExpectedKind, FociLine,
    IncidenceReport,
};
use tangent_chains::{GeneralizedCircle, Point};

fn pair(count: usize) -> ChainPair {
    let base = build_pappus(
        GeneralizedCircle::circle(Point::ORIGIN, 1.0),
        GeneralizedCircle::circle(Point::new(0.5, 0.0), 0.5),
        count,
        Side::Up,
    )
    .unwrap();
    build_orthogonal_pappus_pair(&base, 0, Direction::Left).unwrap()
}

fn kind(r: &IncidenceReport) -> &str {
    match r.artifacts.get("kind") {
        Some(Artifact::Text(t)) => t,
        _ => "",
    }
}

fn homothetic(
    pair: &ChainPair,
    family: Family,
    k: usize,
    expected: ExpectedKind,
    line: Option<FociLine>,
) -> IncidenceReport {
    let opts = CheckOptions {
        conic_tol: 1e-7,
        foci_tol: 1e-6,
        ..CheckOptions::default()
    };
    let line = line.map(|l| l.resolve(ConicSource::Pair(pair)).unwrap());
    check_center_conic(
        ConicSource::Pair(pair),
        &Selector::new(family, k, IndexRule::Homothetic),
        expected,
        line.as_ref(),
        &opts,
    )
    .unwrap()
}

#[test]
fn outer_cross_centers_lie_on_ellipses_focused_on_the_outer_chord_bisector() {
    let p = pair(64);
    for k in 2..=4 {
        let r = homothetic(
            &p,
            Family::CrossOuter,
            k,
            ExpectedKind::Ellipse,
            Some(FociLine::OuterChordBisector),
        );
        assert!(r.pass, "k={k}: {r:?}");
    }
}

#[test]
fn neighbor_cross_centers_lie_on_hyperbolas_focused_on_the_shared_inverse_bisector() {
    let p = pair(64);
    for k in 2..=4 {
        let r = homothetic(
            &p,
            Family::CrossNeighbor,
            k,
            ExpectedKind::Hyperbola,
            Some(FociLine::SharedInverseBisector),
        );
        assert!(r.pass, "k={k}: {r:?}");
    }
}

#[test]
fn inner_cross_centers_lie_on_hyperbolas() {
    let p = pair(64);
    for k in 2..=4 {
        let r = homothetic(&p, Family::CrossInner, k, ExpectedKind::Hyperbola, None);
        assert!(r.pass, "k={k}: {r:?}");
        assert!(r.residual("focal distances constant").unwrap() < 1e-6);
    }
}

#[test]
fn pair_progression_misses_the_outer_chord_bisector_at_k1() {
    let p = pair(64);
    let opts = CheckOptions {
        conic_tol: 1e-7,
        foci_tol: 1e-6,
        ..CheckOptions::default()
    };
    let line = FociLine::OuterChordBisector
        .resolve(ConicSource::Pair(&p))
        .unwrap();
    let sel = Selector::new(Family::CrossOuter, 1, IndexRule::PairProgression);
    let r = check_center_conic(
        ConicSource::Pair(&p),
        &sel,
        ExpectedKind::Hyperbola,
        Some(&line),
        &opts,
    )
    .unwrap();
    assert!(!r.pass);
    assert_eq!(kind(&r), "ellipse");
    assert!(r.max_with_prefix("holdout") < 1e-7);
}

#[test]
fn homothetic_k1_is_degenerate() {
    let p = pair(24);
    let sel = Selector::new(Family::CrossOuter, 1, IndexRule::Homothetic);
    assert!(check_center_conic(
        ConicSource::Pair(&p),
        &sel,
        ExpectedKind::Any,
        None,
        &CheckOptions::default()
    )
    .is_err());
}
