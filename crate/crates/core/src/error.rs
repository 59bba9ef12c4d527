use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("two input points coincide")]
    DuplicatePoints,
    #[error("objects are not tangent (residual {residual:.3e})")]
    NotTangent { residual: f64 },
    #[error("objects touch only at infinity")]
    AtInfinity,
    #[error("objects do not intersect")]
    NoIntersection,
    #[error("point is not on the circle (off by {distance:.3e})")]
    PointNotOnCircle { distance: f64 },
    #[error("all lines are parallel")]
    AllParallel,
    #[error("objects coincide")]
    CoincidentObjects,
    #[error("point coincides with the inversion center")]
    CenterIsSingular,
    #[error("invalid inversion: power must be positive and finite")]
    InvalidInversion,
    #[error("circles are not strictly nested")]
    NotNested,
    #[error("chain member {index} would pass through the inversion center")]
    DegenerateMember { index: usize },
    #[error("chain needs at least {min} circles, got {got}")]
    BadCount { min: usize, got: usize },
    #[error("circle is not orthogonal to the shared circle (residual {residual:.3e})")]
    NotOrthogonal { residual: f64 },
    #[error(
        "parent circles do not admit a closed chain of {n} (radius ratio {ratio}, needed {needed})"
    )]
    NotClosable { n: usize, ratio: f64, needed: f64 },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("wrong input kind: {0}")]
    WrongKind(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("chain invariant violated: {what} (residual {residual:.3e})")]
    InvariantViolated { what: String, residual: f64 },
    #[error("design matrix is rank deficient")]
    RankDeficient,
    #[error("conic has no center")]
    NotCentral,
    #[error("chord length must lie in (0, 2), got {0}")]
    BadChord(f64),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("invalid scene: {0}")]
    Scene(String),
    #[error("cannot write `{0}`")]
    UnwritablePath(String),
}
