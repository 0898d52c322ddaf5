use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid potential: {0}")]
    InvalidSpec(String),

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error(
        "degenerate threshold: a wave number vanishes (k_left = {k_left}, k_right = {k_right})"
    )]
    DegenerateThreshold { k_left: String, k_right: String },

    #[error("multiple-reflection denominator vanishes exactly")]
    ResonanceSingularity,

    #[error("energy {energy} is a pole of the Green's function")]
    AtPole { energy: f64 },

    #[error("family system is singular at E = {energy}")]
    SingularSystem { energy: String },

    #[error("position {x} lies in region {found}; {expected}")]
    Region {
        x: f64,
        found: usize,
        expected: &'static str,
    },

    #[error("geometry: {0}")]
    Geometry(String),

    #[error("root refinement did not converge for state {n} (|f| = {residual:e})")]
    NonConvergence { n: usize, residual: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
