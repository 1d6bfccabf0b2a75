//! End-to-end experiments: the Hadamard test on the maximally mixed state,
//! the stochastic random-phase baseline and the relaxation lifetime of the
//! prepared mixed state.

mod hadamard;
mod lifetime;
mod series;
mod stochastic;

pub use hadamard::{
    hadamard_test_point, run_hadamard_series, Evolution, HadamardTest, Measurement, MmsRealization, NoiseSchedule,
};
pub use lifetime::{mms_lifetime_experiment, LifetimePoint};
pub use series::{uniform_grid, SeriesMeta, TimeSeries};
pub use stochastic::{
    run_stochastic_series, stochastic_state, Propagator, StochasticBasis, StochasticRun, StochasticSample,
    EULER_DRIFT_WARNING,
};
