use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree {degree} would need v{needed}, but only v1..v{k} are configured")]
    Capacity {
        degree: i64,
        needed: usize,
        k: usize,
    },

    #[error("degree {degree} is outside the window {lo}..{hi}")]
    OutOfWindow { degree: i64, lo: i64, hi: i64 },

    #[error("coefficient of c1^{exponent} is not 2-locally integral: {value}")]
    NotIntegral { exponent: usize, value: String },

    #[error("degree {needed} exceeds the configured bound {bound}")]
    DegreeBound { needed: u32, bound: u32 },

    #[error("Steenrod closure of the relation ideal does not stabilize below degree {0}")]
    ClosureUnstable(u32),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}
