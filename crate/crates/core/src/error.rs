use num_complex::Complex64;
use thiserror::Error;

use crate::expr::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("symbol evaluated at z = 0")]
    ZeroArgument,

    #[error("expected a tridiagonal matrix, got lower bandwidth {lower} and upper bandwidth {upper}")]
    NotTridiagonal { lower: usize, upper: usize },

    #[error("eigensolver hit the iteration cap with {unconverged} of {n} eigenvalues unconverged")]
    NoConvergence { unconverged: usize, n: usize },

    #[error("empty point cloud")]
    EmptyCloud,

    #[error("z = {0} lies on (or within screening distance of) the exceptional set")]
    ExceptionalPoint(Complex64),

    #[error("z = {0} is an eigenvalue of a block; perturb z")]
    SingularBlock(Complex64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
