//! Linear response: equilibrium correlations, Onsager matrix and maximum-efficiency performance.

pub mod correlation;
pub mod onsager;

pub use correlation::{
    equilibrium_correlation, fluctuations_from_correlation, ground_state, half_line_fourier,
    half_line_transform, onsager_from_correlation, CorrelationFunction, FourierOptions,
    NumericSource, Preparation,
};
pub use onsager::{
    efficiency, me_line_and_performance, mean_powers, MEPoint, MeanPowers, OnsagerMatrix,
    Provenance, Regime,
};

use crate::error::Result;
use crate::hilbert::Beta;

/// Anything that yields an Onsager matrix at a drive frequency and phase.
pub trait OnsagerSource: Sync {
    fn onsager(&self, omega: f64, phi: f64) -> Result<OnsagerMatrix>;
    fn beta(&self) -> Beta;
}
