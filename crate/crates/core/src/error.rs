use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown environment family `{0}`")]
    UnknownFamily(String),
    #[error("unknown functional kind `{0}`")]
    UnknownFunctional(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("parameter `{name}` = {value} out of range: {reason}")]
    OutOfRange {
        name: String,
        value: f64,
        reason: &'static str,
    },
    #[error(
        "E(eta_1) = 0: the quenched fluctuation vanishes and the walk degenerates to an \
         i.i.d. random walk of the quenched means; normalization is undefined"
    )]
    DegenerateFluctuation,
    #[error("environment spec must be normalized first")]
    NotNormalized,
    #[error("{0} must be positive")]
    ZeroLength(&'static str),
    #[error("alpha-moment of order {alpha} is infinite at step indices {indices:?}")]
    InfiniteMoment { alpha: f64, indices: Vec<usize> },
    #[error("`{kind}` is not Lipschitz; self-check needs a Lipschitz kind")]
    NonLipschitz { kind: &'static str },
    #[error(
        "Lipschitz self-check failed: |f(x)-f(y)| / sup|x-y| = {ratio} > K = {lipschitz} \
         (witness x = {x:?}, y = {y:?})"
    )]
    LipschitzViolation {
        ratio: f64,
        lipschitz: f64,
        x: Vec<f64>,
        y: Vec<f64>,
    },
    #[error("bound violated: |f(x)| = {value} > L = {bound} (witness x = {x:?})")]
    BoundViolation { value: f64, bound: f64, x: Vec<f64> },
    #[error("empty sample")]
    EmptySample,
    #[error("sample contains a non-finite value")]
    NonFiniteSample,
    #[error("rate fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("distance at index {0} is not positive")]
    NonPositiveDistance(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid config field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },
    #[error("sigma nonzero (sigma^2 = {0}); this experiment needs a degenerate limit")]
    SigmaNonzero(f64),
    #[error("experiment needs a bio_normal environment, got `{0}`")]
    NotBioNormal(String),
    #[error("malformed distribution file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
