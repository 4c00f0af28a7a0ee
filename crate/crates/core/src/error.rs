use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A chart quantity involving cot/tan was requested on θ₀ ∈ {0, π/2}.
    #[error("point lies on the chart boundary (theta0 = {theta0}); cot/tan undefined")]
    BoundaryChart { theta0: f64 },

    #[error("vector field is singular at theta0 = {theta0}: momentum {momentum} is nonzero on that boundary")]
    SingularField { theta0: f64, momentum: &'static str },

    #[error("state has no theta0 oscillation ({0})")]
    NoOscillation(&'static str),

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e})")]
    QuadratureFailure { tolerance: f64, estimate: f64 },

    #[error(
        "step rejected at t = {t}: local error {error:e} above budget with step floor {h_min:e}"
    )]
    StepRejected { t: f64, error: f64, h_min: f64 },

    #[error("trajectory approached a singular boundary at t = {t} (theta0 = {theta0})")]
    SingularApproach { t: f64, theta0: f64 },

    #[error("need at least two same-direction events, found {found}")]
    InsufficientEvents { found: usize },

    #[error("momentum {name} = {value:e} lies inside the zero deadband but is not exactly zero")]
    AmbiguousZero { name: &'static str, value: f64 },

    #[error("energy level {level} lies below the potential minimum {min}")]
    EmptyLevel { level: f64, min: f64 },

    #[error("closure ratio {r} is not rational within tolerance (q <= {q_max})")]
    NotClosed { r: f64, q_max: u64 },

    #[error("theta0 does not oscillate for this state ({0})")]
    NotOscillating(&'static str),

    #[error("vertical energy vanishes (xi1 + xi2 = 0); closure ratio is zero")]
    ZeroVerticalEnergy,

    #[error("ratio {r} is infeasible for xi1 = {xi1}, xi2 = {xi2}")]
    InfeasibleRatio { r: f64, xi1: f64, xi2: f64 },

    #[error("{p} and {q} are not coprime")]
    NotCoprime { p: u64, q: u64 },

    #[error("finite-difference stencil leaves (0, pi/2) at theta0 = {theta0} with h = {h}")]
    StencilOutOfDomain { theta0: f64, h: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
