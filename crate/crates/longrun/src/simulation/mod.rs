//! Monte Carlo size/power estimation over three benchmark
//! heteroscedasticity models on the unit interval.
//!
//! Replicates are fully deterministic: each one draws from a stream keyed
//! by (master seed, model, n, c, replicate index), so serial and parallel
//! executions produce bit-identical results and a grid cell can be
//! re-evaluated at several levels without re-simulating. Normal variates
//! come from inverse-CDF transformation of fixed-precision uniforms, which
//! keeps runs stable across platforms.

pub mod reference;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::lrt_test::dichotomize;
use crate::mean_estimation::{fit_mean, Dataset, MeanEstimatorSpec};
use crate::runs_combinatorics::{longest_run, null_distribution, LevelConvention};

pub use reference::{reference_for, ReferenceCell, REFERENCE_TABLE};

/// Supported sample-size range for Monte Carlo runs.
pub const SIM_MIN_N: usize = 10;
pub const SIM_MAX_N: usize = 10_000;

/// The three benchmark model identifiers, in table order.
pub const ALL_MODELS: [u8; 3] = [1, 2, 3];
/// Defaults of the published study's grid: 50 and 100 observations,
/// strengths 0, 0.5, and 1, nominal levels 5% and 10%, 1000 replicates.
pub const DEFAULT_GRID_N: [usize; 2] = [50, 100];
pub const DEFAULT_GRID_C: [f64; 3] = [0.0, 0.5, 1.0];
pub const DEFAULT_GRID_LEVELS: [f64; 2] = [0.05, 0.10];
pub const DEFAULT_REPLICATES: usize = 1000;
/// Master seed of the documented reproduction run.
pub const DEFAULT_MASTER_SEED: u64 = 7;

/// Which benchmark model generates the data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum ModelId {
    /// `mu(x) = 1 + sin x`, `sigma(x) = 0.5 e^{cx}`.
    SineMeanExpScale = 1,
    /// `mu(x) = 1 + x`, `sigma(x) = 0.5 (1 + c sin 10x)^2`.
    LinearMeanPeriodicScale = 2,
    /// `mu(x) = 1 + x`, `sigma(x) = 0.5 (1 + cx)^2`.
    LinearMeanPolynomialScale = 3,
}

impl ModelId {
    pub fn as_u8(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for ModelId {
    type Error = Error;

    fn try_from(id: u8) -> Result<Self> {
        match id {
            1 => Ok(ModelId::SineMeanExpScale),
            2 => Ok(ModelId::LinearMeanPeriodicScale),
            3 => Ok(ModelId::LinearMeanPolynomialScale),
            _ => Err(Error::InvalidModelId { id }),
        }
    }
}

impl From<ModelId> for u8 {
    fn from(id: ModelId) -> u8 {
        id.as_u8()
    }
}

/// A benchmark model with its heteroscedasticity strength `c`; `c = 0` is
/// the homoscedastic null in all three models.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationModel {
    id: ModelId,
    c: f64,
}

impl SimulationModel {
    pub fn new(id: ModelId, c: f64) -> Result<Self> {
        if !c.is_finite() || c < 0.0 {
            return Err(Error::InvalidStrength { c });
        }
        Ok(Self { id, c })
    }

    pub fn from_parts(id: u8, c: f64) -> Result<Self> {
        Self::new(ModelId::try_from(id)?, c)
    }

    pub fn id(&self) -> ModelId {
        self.id
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Mean function `mu(x)` (sine arguments in radians).
    pub fn mean(&self, x: f64) -> f64 {
        match self.id {
            ModelId::SineMeanExpScale => 1.0 + x.sin(),
            ModelId::LinearMeanPeriodicScale | ModelId::LinearMeanPolynomialScale => 1.0 + x,
        }
    }

    /// Scale function `sigma(x)`; nonnegative, and exactly 0.5 everywhere
    /// when `c = 0`.
    pub fn scale(&self, x: f64) -> f64 {
        match self.id {
            ModelId::SineMeanExpScale => 0.5 * (self.c * x).exp(),
            ModelId::LinearMeanPeriodicScale => {
                let b = 1.0 + self.c * (10.0 * x).sin();
                0.5 * b * b
            }
            ModelId::LinearMeanPolynomialScale => {
                let b = 1.0 + self.c * x;
                0.5 * b * b
            }
        }
    }
}

/// Configuration of a single Monte Carlo cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub model: SimulationModel,
    pub n: usize,
    pub replicates: usize,
    pub target_level: f64,
    pub estimator: MeanEstimatorSpec,
    pub master_seed: u64,
}

impl MonteCarloConfig {
    fn validate(&self) -> Result<()> {
        if !(SIM_MIN_N..=SIM_MAX_N).contains(&self.n) {
            return Err(Error::SimulationSizeOutOfRange {
                n: self.n,
                min: SIM_MIN_N,
                max: SIM_MAX_N,
            });
        }
        if self.replicates == 0 {
            return Err(Error::InvalidReplicates);
        }
        if !(self.target_level > 0.0 && self.target_level < 1.0) || !self.target_level.is_finite() {
            return Err(Error::InvalidLevel {
                level: self.target_level,
            });
        }
        Ok(())
    }
}

/// One estimated table cell, in the exact shape of the wire schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerEstimate {
    /// Model identifier (1, 2, or 3).
    pub model: u8,
    pub n: usize,
    pub c: f64,
    /// Discrete attained level actually used for the decision rule.
    pub level_attained: f64,
    /// Fraction of replicates rejecting; exactly rejections/replicates.
    pub rejection_rate: f64,
    /// Binomial standard error `sqrt(p (1 - p) / replicates)`.
    pub std_err: f64,
    pub replicates: usize,
    pub estimator: String,
    pub seed: u64,
    /// Published reference rejection rate for this cell, when one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paper_reference_value: Option<f64>,
}

/// The fixed equispaced design `x_i = (i - 1)/(n - 1)` on `[0, 1]`.
fn design_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// SplitMix64 output mixer; used to fold identifying integers into
/// per-replicate seeds.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-replicate stream seed. The target level is
/// deliberately not folded in, so every level shares the same replicate
/// data and power is exactly monotone across levels of one cell.
fn replicate_seed(master_seed: u64, model: &SimulationModel, n: usize, replicate: usize) -> u64 {
    let mut s = master_seed;
    for part in [
        u64::from(model.id.as_u8()),
        n as u64,
        model.c.to_bits(),
        replicate as u64,
    ] {
        s = splitmix64(s ^ part);
    }
    s
}

/// Draws one dataset from the model on the fixed design.
///
/// Errors are standard normal via inverse-CDF applied to 53-bit uniforms
/// centered in (0, 1), one 64-bit draw per observation.
pub fn generate(model: &SimulationModel, n: usize, seed: u64) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::SampleTooSmall { n, min: 2 });
    }
    let normal = Normal::new(0.0, 1.0).expect("unit normal parameters are valid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = design_grid(n);
    let y = x
        .iter()
        .map(|&xi| {
            let u = ((rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
            model.mean(xi) + model.scale(xi) * normal.inverse_cdf(u)
        })
        .collect();
    Dataset::new(x, y)
}

/// A `Known` estimator with no values means "use the model truth"; fill it
/// in once per cell (the design is shared by every replicate).
fn resolved_estimator(
    spec: &MeanEstimatorSpec,
    model: &SimulationModel,
    n: usize,
) -> Result<MeanEstimatorSpec> {
    match spec {
        MeanEstimatorSpec::Known { values: None } => {
            let truth = design_grid(n).iter().map(|&x| model.mean(x)).collect();
            Ok(MeanEstimatorSpec::Known {
                values: Some(truth),
            })
        }
        MeanEstimatorSpec::Known { values: Some(v) } if v.len() != n => {
            Err(Error::KnownMeanLength {
                expected: n,
                got: v.len(),
            })
        }
        other => Ok(other.clone()),
    }
}

fn replicate_longest_run(
    model: &SimulationModel,
    n: usize,
    estimator: &MeanEstimatorSpec,
    seed: u64,
) -> Result<usize> {
    let data = generate(model, n, seed)?;
    let residuals = fit_mean(&data, estimator)?;
    Ok(longest_run(&dichotomize(&residuals)?))
}

/// Longest-run statistic of every replicate in a cell, sequentially.
fn cell_longest_runs_serial(
    model: &SimulationModel,
    n: usize,
    replicates: usize,
    estimator: &MeanEstimatorSpec,
    master_seed: u64,
) -> Result<Vec<usize>> {
    let est = resolved_estimator(estimator, model, n)?;
    (0..replicates)
        .map(|r| replicate_longest_run(model, n, &est, replicate_seed(master_seed, model, n, r)))
        .collect()
}

/// Longest-run statistic of every replicate in a cell; data-parallel when
/// the `parallel` feature is enabled, with output identical to the serial
/// path (replicates are independent and order is preserved).
#[cfg(feature = "parallel")]
fn cell_longest_runs(
    model: &SimulationModel,
    n: usize,
    replicates: usize,
    estimator: &MeanEstimatorSpec,
    master_seed: u64,
) -> Result<Vec<usize>> {
    use rayon::prelude::*;
    let est = resolved_estimator(estimator, model, n)?;
    (0..replicates)
        .into_par_iter()
        .map(|r| replicate_longest_run(model, n, &est, replicate_seed(master_seed, model, n, r)))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn cell_longest_runs(
    model: &SimulationModel,
    n: usize,
    replicates: usize,
    estimator: &MeanEstimatorSpec,
    master_seed: u64,
) -> Result<Vec<usize>> {
    cell_longest_runs_serial(model, n, replicates, estimator, master_seed)
}

/// Turns a cell's replicate statistics into a table row at the discrete
/// attained level nearest the target.
fn summarize_cell(config: &MonteCarloConfig, runs: &[usize]) -> Result<PowerEstimate> {
    let dist = null_distribution(config.n)?;
    let record = dist.critical_value_record(config.target_level, LevelConvention::Nearest)?;
    let rejections = runs.iter().filter(|&&l| l > record.critical_value).count();
    let rate = rejections as f64 / runs.len() as f64;
    let std_err = (rate * (1.0 - rate) / runs.len() as f64).sqrt();
    Ok(PowerEstimate {
        model: config.model.id.as_u8(),
        n: config.n,
        c: config.model.c,
        level_attained: record.attained_level,
        rejection_rate: rate,
        std_err,
        replicates: runs.len(),
        estimator: config.estimator.name().to_string(),
        seed: config.master_seed,
        paper_reference_value: None,
    })
}

/// Monte Carlo rejection rate of the test for one configuration.
///
/// The decision rule rejects when the longest run exceeds the critical
/// value at the discrete attained level nearest `target_level`. Results
/// are reproducible from `master_seed` alone, independent of worker count
/// or scheduling.
pub fn estimate_power(config: &MonteCarloConfig) -> Result<PowerEstimate> {
    config.validate()?;
    let runs = cell_longest_runs(
        &config.model,
        config.n,
        config.replicates,
        &config.estimator,
        config.master_seed,
    )?;
    summarize_cell(config, &runs)
}

/// [`estimate_power`] forced onto the sequential path; useful as a
/// baseline and for verifying that parallel execution changes nothing.
pub fn estimate_power_serial(config: &MonteCarloConfig) -> Result<PowerEstimate> {
    config.validate()?;
    let runs = cell_longest_runs_serial(
        &config.model,
        config.n,
        config.replicates,
        &config.estimator,
        config.master_seed,
    )?;
    summarize_cell(config, &runs)
}

/// Runs a size/power grid: the given models crossed with the given sample
/// sizes, strengths, and levels. Replicate data is simulated once per
/// (model, n, c) cell and shared across levels. Published reference
/// values are attached to rows whose cell appears in the bundled table.
pub fn reproduce_table(
    models: &[u8],
    n_values: &[usize],
    c_values: &[f64],
    levels: &[f64],
    replicates: usize,
    master_seed: u64,
    estimator: &MeanEstimatorSpec,
) -> Result<Vec<PowerEstimate>> {
    if replicates == 0 {
        return Err(Error::InvalidReplicates);
    }
    for &id in models {
        ModelId::try_from(id)?;
    }
    for &n in n_values {
        if !(SIM_MIN_N..=SIM_MAX_N).contains(&n) {
            return Err(Error::SimulationSizeOutOfRange {
                n,
                min: SIM_MIN_N,
                max: SIM_MAX_N,
            });
        }
    }
    for &level in levels {
        if !(level > 0.0 && level < 1.0) || !level.is_finite() {
            return Err(Error::InvalidLevel { level });
        }
    }
    let mut rows =
        Vec::with_capacity(models.len() * n_values.len() * c_values.len() * levels.len());
    for &id in models {
        for &n in n_values {
            for &c in c_values {
                let model = SimulationModel::from_parts(id, c)?;
                let runs = cell_longest_runs(&model, n, replicates, estimator, master_seed)?;
                let dist = null_distribution(n)?;
                for &level in levels {
                    let config = MonteCarloConfig {
                        model,
                        n,
                        replicates,
                        target_level: level,
                        estimator: estimator.clone(),
                        master_seed,
                    };
                    let mut row = summarize_cell(&config, &runs)?;
                    let record = dist.critical_value_record(level, LevelConvention::Nearest)?;
                    row.paper_reference_value =
                        reference_for(id, n, c, record.attained.percent_tenths())
                            .map(|cell| cell.lr / 100.0);
                    rows.push(row);
                }
            }
        }
    }
    Ok(rows)
}

/// Renders table rows as CSV with a fixed header matching the wire
/// schema; the reference column is left empty where absent.
pub fn table_to_csv(rows: &[PowerEstimate]) -> String {
    let mut out = String::from(
        "model,n,c,level_attained,rejection_rate,std_err,replicates,estimator,seed,paper_reference_value\n",
    );
    for r in rows {
        let reference = r
            .paper_reference_value
            .map(|v| v.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.model,
            r.n,
            r.c,
            r.level_attained,
            r.rejection_rate,
            r.std_err,
            r.replicates,
            r.estimator,
            r.seed,
            reference,
        ));
    }
    out
}

/// Renders table rows as pretty-printed JSON.
pub fn table_to_json(rows: &[PowerEstimate]) -> String {
    serde_json::to_string_pretty(rows).expect("table rows serialize")
}
