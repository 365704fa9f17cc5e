use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite derivative at parameter {t}")]
    NonFiniteDerivative { t: f64 },

    #[error("degenerate curve: speed {speed:e} at parameter {t}")]
    DegenerateCurve { t: f64, speed: f64 },

    #[error("tangent lift failed between nodes {index} and {next}: angle step {step} too large, raise sample density", next = index + 1)]
    LiftFailure { index: usize, step: f64 },

    #[error("non-finite curvature at arclength {s}")]
    NonFiniteCurvature { s: f64 },

    #[error("arclength {s} outside [{lo}, {hi}]")]
    OutOfRange { s: f64, lo: f64, hi: f64 },

    #[error("zero curvature at arclength {s}: |kappa| = {kappa:e} below kappa_min")]
    ZeroCurvature { s: f64, kappa: f64 },

    #[error("derivative of curvature vanishes at arclength {s}: evolute curvature undefined")]
    VanishingKappaPrime { s: f64 },

    #[error("involute constant c = {c} lies inside the arclength interval [{lo}, {hi}]")]
    InvoluteConstantInside { c: f64, lo: f64, hi: f64 },

    #[error("singular involute at s~ = {s_tilde}: speed {speed:e}")]
    SingularInvolute { s_tilde: f64, speed: f64 },

    #[error("evolute is singular at s = {s}: radius of curvature is not strictly monotone")]
    SingularEvolute { s: f64 },

    #[error("ambiguous vanishing order at s = {s}: estimate {estimate}, fit r2 {fit_r2}")]
    AmbiguousOrder { s: f64, estimate: f64, fit_r2: f64 },

    #[error("vanishing order at s = {s} exceeds the cap: radius derivative is flat")]
    InfiniteOrder { s: f64 },

    #[error("s = {s} is not a critical point of R: {reason}")]
    NotACriticalPoint { s: f64, reason: String },

    #[error("local-frame projection is not injective near s = {s}")]
    NonInjectiveProjection { s: f64 },

    #[error("radius of curvature is not monotone on [{lo}, {hi}]: critical point at {at}")]
    NonMonotonePrecondition { lo: f64, hi: f64, at: f64 },

    #[error("quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}
