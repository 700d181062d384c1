use thiserror::Error;

use crate::af::AfError;
use crate::entailment::LogicError;
use crate::formula::ParseError;
use crate::gradual::Ranking;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Af(#[from] AfError),
    #[error("strict premises are inconsistent")]
    StrictPremisesInconsistent,
    #[error("the set of assumptions is empty")]
    EmptyAssumptions,
    #[error("`{0}` is both a strict premise and an assumption")]
    GammaAbOverlap(String),
    #[error("assumption `{0}` is listed more than once")]
    DuplicateAssumption(String),
    #[error("{what}: {size} assumptions exceeds the limit of {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("no convergence after {} iterations (residual {residual:.3e})", .last.iterations)]
    NoConvergence { last: Box<Ranking>, residual: f64 },
    #[error("unknown semantics `{0}`")]
    UnknownSemantics(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no valid instance after {0} rejected samples")]
    GenerationExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
