use alloc::string::String;

use crate::polyring::Var;

/// Errors raised by the algebraic and numerical layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("operands disagree on the variable set ({left} vs {right} sites)")]
    SiteMismatch { left: usize, right: usize },
    #[error("operands disagree on the truncation degree ({left} vs {right})")]
    TruncationMismatch { left: u32, right: u32 },
    #[error("variable {0:?} is not part of the polynomial's variable set")]
    UnknownVariable(Var),
    #[error("assignment covers {got} of the {need} phase variables")]
    MissingAssignment { need: usize, got: usize },
    #[error("polynomial still depends on t or on formal parameters")]
    Unevaluated,
    #[error("field series has order {have}, degree {degree} needs order {need}")]
    FieldOrder { have: usize, need: usize, degree: u32 },
    #[error("state contains non-finite entries")]
    NonFinite,
    #[error("lattice needs at least {need} sites, got {got}")]
    TooFewSites { need: usize, got: usize },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("step budget exhausted at t = {t}")]
    TooManySteps { t: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
