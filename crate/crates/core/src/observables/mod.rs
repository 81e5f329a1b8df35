//! Quantities along trajectories: powers, energies, fluctuations and the reduced TLS state.

pub mod power;
pub mod reduced;

pub use power::{
    channel_power, detect_steady_state, period_average, power_fluctuations, record_powers,
    steady_period_average, window_average, FluctuationOptions, PowerRecord, PowerSeries,
    SteadyState,
};
pub use reduced::{reduce, trace_distance, witness_series, ReducedState, WitnessSeries};
