use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("rank mismatch: class has {got} coefficients, lattice rank is {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("not pseudoeffective: {0}")]
    NotPseudoeffective(String),
    #[error("singular support system: Gram matrix of curves {curves:?} is not negative definite")]
    SingularSupport { curves: Vec<usize> },
    #[error("non-pseudoeffective at t=0: {0}")]
    NotAmpleAtZero(String),
    #[error("irrational wall beyond supported degree: {0}")]
    IrrationalWall(String),
    #[error("beta = {0} outside [0, 1]")]
    BetaOutOfRange(String),
    #[error("-K_X - (1-beta)D is not big at beta = {0}")]
    NotBig(String),
    #[error("missing kappa data on segment {0}; v1 needs the (K+D) pairing")]
    MissingKappa(usize),
    #[error("irrational threshold unsupported here: {0}")]
    IrrationalThreshold(String),
    #[error("algebraic chamber walls unsupported for symbolic eta")]
    AlgebraicWalls,
    #[error("unbounded polytope: {0}")]
    UnboundedPolytope(String),
    #[error("non-integral divisor: {0}")]
    NonIntegral(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("computation failed: {0}")]
    Computation(String),
}
