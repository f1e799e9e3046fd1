pub mod cli;
pub mod evaluator;
pub mod forms;
pub mod numfield;
pub mod oracle;
pub mod regularize;
pub mod scalar;
pub mod series_builder;
pub mod transforms;
pub mod words;

pub use evaluator::{EvalConfig, EvalError, EvalResult};
pub use scalar::{cplx::C, Dd, Real};
pub use series_builder::{build_series_integral, SeriesSpec};
pub use oracle::sum_series;

/// Complex value in machine precision.
pub type C64 = C<f64>;
/// Complex value in double-double precision.
pub type CDd = C<Dd>;
/// Evaluation result in machine precision.
pub type EvalResult64 = EvalResult<f64>;
/// Evaluation result in double-double precision.
pub type EvalResultDd = EvalResult<Dd>;
