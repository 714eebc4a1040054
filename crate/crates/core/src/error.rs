use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} = {value} is outside the domain of the function")]
    Domain { what: &'static str, value: f64 },

    #[error("dimensionless energy eps_n is not set")]
    MissingEnergy,

    #[error("negative NU discriminant a + b + c = {radicand}: no real solution")]
    NegativeDiscriminant { radicand: f64 },

    #[error("trial energy above the binding threshold (c = {c} < 0)")]
    NegativeC { c: f64 },

    #[error("no bound state: the quantization condition has no root in the admissible window")]
    NoBoundState,

    #[error(
        "fall to center: coupling mu*V0*(A+B)^2/(2 hbar^2 alpha^2) = {coupling} exceeds the critical value 1/4 + l(l+1) = {critical}"
    )]
    Supercritical { coupling: f64, critical: f64 },

    #[error("state (n = {n}, l = {l}) is not a valid bound state")]
    InvalidState { n: u32, l: u32 },

    #[error("norm integral underflowed")]
    ZeroNorm,

    #[error("grid does not cover the support: tail amplitude ratio {ratio:e}")]
    TruncatedSupport { ratio: f64 },

    #[error("grid too coarse: {points} points (need at least {min})")]
    GridTooCoarse { points: usize, min: usize },

    #[error("requested {k} eigenvalues; allowed range is 1..={max}")]
    EigenCountOutOfRange { k: usize, max: usize },

    #[error("no bound levels: every eigenvalue lies above the continuum threshold {threshold}")]
    NoBoundLevels { threshold: f64 },
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
