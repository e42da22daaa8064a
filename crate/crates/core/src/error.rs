use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown family: {0}")]
    UnknownFamily(String),
    #[error("missing parameter `{0}`")]
    MissingParam(String),
    #[error("unexpected parameter `{0}`")]
    ExtraParam(String),
    #[error("invalid weights ({a0},{a1},{a2}): {reason}")]
    InvalidWeights {
        a0: u32,
        a1: u32,
        a2: u32,
        reason: &'static str,
    },
    #[error("both polynomials are constant in the eliminated variable")]
    BothConstantInVar,
    #[error("root finder did not converge after {iterations} iterations")]
    DidNotConverge { iterations: usize },
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("target lies on or near the caustic (min |det Jac| = {min_jac:e}, threshold {threshold:e})")]
    CausticTarget { min_jac: f64, threshold: f64 },
    #[error("degenerate system: found {found} pre-images, expected {expected}")]
    DegenerateSystem { found: usize, expected: usize },
    #[error("point lies on the critical curve (|det Jac| = {0:e})")]
    OnCriticalCurve(f64),
    #[error("polynomial is not weighted-homogeneous")]
    NonHomogeneousInput,
    #[error("the homogenized pair has {0} common root(s) at infinity")]
    RootsAtInfinityPresent(usize),
    #[error("d1*d2 = {product} is not divisible by a0*a1 = {divisor}")]
    NonIntegerCount { product: u64, divisor: u64 },
    #[error("root is not simple (|J| = {0:e})")]
    NonSimpleRoot(f64),
    #[error("no sign change of det Jac inside the box")]
    EmptyCriticalSet,
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
}
