use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("out of scope: {0}")]
    Unsupported(String),

    #[error("truncated basis would hold {count} states, above the budget of {budget}")]
    BasisTooLarge { count: u128, budget: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "Krylov error estimate {estimate:.3e} exceeds tolerance {tolerance:.3e} at t = {t}; \
         use a smaller dt or a larger krylov_dim"
    )]
    ToleranceExceeded {
        estimate: f64,
        tolerance: f64,
        t: f64,
    },

    #[error("correlation tail has not decayed: residual {residual:.3e} of peak at tau = {tau}")]
    UndecayedTail { residual: f64, tau: f64 },

    #[error("relaxation not reached by t = {t}: <sigma_z> drift {drift:.3e} per unit time")]
    NotRelaxed { drift: f64, t: f64 },

    #[error("averaging window starting at t = {start} lies before the steady state ({steady})")]
    NotSteady { start: f64, steady: f64 },

    #[error("no steady state detected up to t = {t}")]
    NoSteadyState { t: f64 },

    #[error("no work-to-work conversion at omega = {omega}")]
    NoConversion { omega: f64 },

    #[error("singular Onsager matrix at omega = {omega} (det = {det:.3e})")]
    SingularOnsager { omega: f64, det: f64 },

    #[error("pole of the digamma function at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("derivative stencil incomplete at omega = {omega}")]
    IncompleteStencil { omega: f64 },

    #[error("|P_out| = {value:.3e} below the floor {floor:.1e} at omega = {omega}")]
    BelowFloor { value: f64, floor: f64, omega: f64 },

    #[error(
        "ground state did not converge: residual {residual:.3e} after {iterations} iterations"
    )]
    NoConvergence { residual: f64, iterations: usize },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
