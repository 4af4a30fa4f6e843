use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no eligible payoff U >= 0 with price 1 exists")]
    NoUnitPayoff,
    #[error("payoff columns are linearly dependent")]
    DegenerateMarket,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("acceptance set is not admissible: {0}")]
    NotAdmissible(String),
    #[error("too many branches: {count} exceeds the cap {cap}")]
    TooManyBranches { count: usize, cap: usize },
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("linear program has no finite optimum")]
    NotOptimal,
    #[error("ambient dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("set is empty after intersecting with the box of half-width {0}")]
    EmptyAfterBoxing(String),
    /// Some position can be made acceptable at arbitrarily negative cost;
    /// `ray` is a portfolio direction with negative price along which
    /// acceptability is preserved.
    #[error("acceptability arbitrage: the risk measure is -inf")]
    AcceptabilityArbitrage { ray: Vec<String> },
    #[error("no eligible payoff makes the position acceptable: the risk measure is +inf")]
    NeverAcceptable,
    #[error("risk measure is not finite at this position")]
    NotFinite,
    #[error("operation not supported for this acceptance set: {0}")]
    UnsupportedVariant(String),
    #[error("minimizer touches the artificial box of half-width {0}")]
    BoxBoundaryHit(f64),
    #[error("optimal payoff set is empty")]
    EmptyOptimalSet,
}
