use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty range: hi = {hi} < lo = {lo}")]
    EmptyRange { lo: u64, hi: u64 },

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),

    #[error("singular model: discriminant is zero")]
    Singular,

    #[error("discriminant cofactor {0} is too large to factor")]
    Unfactored(String),

    /// `p` divides the model discriminant.
    #[error("bad reduction at p = {p}")]
    BadReduction { p: u64 },

    #[error("baby-step giant-step could not pin the group order at p = {p} after {attempts} points")]
    Ambiguous { p: u64, attempts: usize },

    /// A real-number decision that stayed undecided at the highest working precision.
    #[error("decision at p = {p} is undecided at {bits} bits")]
    Uncertain { p: u64, bits: u32 },

    #[error("quadrature did not converge on [{a}, {b}]: estimate {estimate}, error {error_estimate}")]
    Quadrature {
        a: f64,
        b: f64,
        estimate: f64,
        error_estimate: f64,
    },

    #[error("trace cache entry rejected: a_p = {ap} violates the Hasse bound at p = {p}")]
    CacheCorrupt { p: u64, ap: i64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}
