//! Exact longest-run test for heteroscedasticity in fixed-design
//! univariate regression.
//!
//! The test dichotomizes squared residuals about their median and rejects
//! homoscedasticity when the longest run of identical symbols is long; the
//! null law of that run length is a finite combinatorial object computed
//! here exactly, so critical values and p-values carry no simulation or
//! approximation error.
//!
//! Module map:
//! - [`runs_combinatorics`]: exact run-count combinatorics and the null
//!   distribution of the longest-run statistic.
//! - [`mean_estimation`]: mean-function estimators (known, constant,
//!   linear least squares, kernel smoother) producing residual sequences.
//! - [`lrt_test`]: the end-to-end test on a dataset, from residuals to an
//!   accept/reject report.
//! - [`simulation`]: Monte Carlo power estimation over three benchmark
//!   heteroscedasticity models, with published reference values bundled
//!   for comparison.

pub mod error;
pub mod lrt_test;
pub mod mean_estimation;
pub mod runs_combinatorics;
pub mod simulation;

pub use error::{Error, Result};
pub use lrt_test::{dichotomize, run_test, Decision, TestReport};
pub use mean_estimation::{
    auto_bandwidth, fit_mean, Bandwidth, Dataset, MeanEstimatorSpec, ResidualSequence,
};
pub use runs_combinatorics::{
    count_constrained, critical_value, critical_value_with, longest_run, null_distribution,
    null_distribution_uncached, p_value, BinarySequence, CriticalValueRecord, ExactCount,
    ExactProb, LevelConvention, RunLengthDistribution,
};
pub use simulation::{
    estimate_power, estimate_power_serial, generate, reproduce_table, table_to_csv, table_to_json,
    ModelId, MonteCarloConfig, PowerEstimate, SimulationModel,
};
