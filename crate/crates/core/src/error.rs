use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty domain: no cube accepted up to level {j_max}")]
    EmptyDomain { j_max: u32 },
    #[error("oracle inconsistent at {point:?}: contains = {contains}, distance = {distance}")]
    OracleInconsistent {
        point: Vec<f64>,
        contains: bool,
        distance: f64,
    },
    #[error("no admissible reflected cube for level {level} index {index:?}")]
    NoReflection { level: u32, index: Vec<i64> },
    #[error("partition of unity degenerate at {point:?}")]
    DegenerateCover { point: Vec<f64> },
    #[error("not Ahlfors regular: constant {constant} exceeds cap {cap}")]
    NotRegular { constant: f64, cap: f64 },
    #[error("no path between the sampled cubes")]
    Disconnected,
    #[error("quadrature node {point:?} hits a declared singular point")]
    SingularQuadraturePoint { point: Vec<f64> },
    #[error("quadrature underflow: {cells} cells, need at least {required}")]
    QuadratureUnderflow { cells: usize, required: usize },
    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("kernel underresolved: t = {t} < 2h = {}", 2.0 * .h)]
    KernelUnderresolved { t: f64, h: f64 },
    #[error("exterior point {point:?} in the collar is covered by no small cube")]
    PlanGap { point: Vec<f64> },
    #[error("support leak at {} points, first {first:?}", .count)]
    SupportLeak { count: usize, first: Vec<f64> },
    #[error("field nonzero ({value}) on the declared collar at {point:?}")]
    CollarViolation { point: Vec<f64>, value: f64 },
    #[error("boundary point {point:?} has no patch ball")]
    PatchGap { point: Vec<f64> },
    #[error("cube ball at level {level} index {index:?} contains no cloud point")]
    EmptyBall { level: u32, index: Vec<i64> },
    #[error("ball of radius {radius} at {point:?} holds {cells} quadrature cells")]
    UnderresolvedBall { point: Vec<f64>, radius: f64, cells: usize },
    #[error("ellipticity check failed: sampled {sampled} < required {required}")]
    EllipticityFail { sampled: f64, required: f64 },
    #[error("every node is constrained")]
    EmptySpace,
    #[error("Neumann data incompatible: <f, 1> = {mean}")]
    Incompatible { mean: f64 },
    #[error("solver did not converge in {iterations} iterations (residual {residual})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that signal a violated mathematical invariant rather
    /// than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        !matches!(self, Error::InvalidInput(_) | Error::Config(_) | Error::Io(_))
    }
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
