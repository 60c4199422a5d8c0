//! Mean-function estimation for fixed-design regression.
//!
//! The test consumes residuals `e_i = y_i - mhat(x_i)`; this module turns a
//! dataset plus an estimator choice into that residual sequence. Estimators
//! are deliberately simple and deterministic: a user-supplied mean, the
//! sample mean, ordinary least squares, and a Nadaraya-Watson kernel
//! smoother with an optional leave-one-out variant and a cross-validated
//! automatic bandwidth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A univariate fixed-design sample, sorted by the design points.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl Dataset {
    /// Builds a dataset from design points already sorted in nondecreasing
    /// order. All values must be finite and the vectors equally long, with
    /// at least two observations.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                x_len: x.len(),
                y_len: y.len(),
            });
        }
        if x.len() < 2 {
            return Err(Error::SampleTooSmall { n: x.len(), min: 2 });
        }
        for (i, &v) in x.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    field: "x",
                    index: i,
                });
            }
        }
        for (i, &v) in y.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    field: "y",
                    index: i,
                });
            }
        }
        if let Some(i) = x.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::UnsortedDesign { index: i + 1 });
        }
        Ok(Self { x, y })
    }

    /// Builds a dataset from unordered observations by sorting the pairs
    /// on the design point (ties keep input order).
    pub fn from_unsorted(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                x_len: x.len(),
                y_len: y.len(),
            });
        }
        let mut pairs: Vec<(f64, f64)> = x.into_iter().zip(y).collect();
        for (i, &(px, py)) in pairs.iter().enumerate() {
            if !px.is_finite() {
                return Err(Error::NonFinite {
                    field: "x",
                    index: i,
                });
            }
            if !py.is_finite() {
                return Err(Error::NonFinite {
                    field: "y",
                    index: i,
                });
            }
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite values compare"));
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        Self::new(x, y)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }
}

/// Kernel bandwidth: fixed by the caller or chosen by leave-one-out
/// cross-validation on the data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bandwidth {
    Auto,
    Fixed(f64),
}

/// Which mean function to remove before testing the residuals.
///
/// The serialized `kind` tags match the command-line estimator names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MeanEstimatorSpec {
    /// The mean is known; `values` holds `mu(x_i)` per observation. A
    /// `None` is only meaningful inside the simulator, which fills in the
    /// model truth.
    #[serde(rename = "known")]
    Known { values: Option<Vec<f64>> },
    /// The sample mean (constant mean model).
    #[serde(rename = "constant")]
    Constant,
    /// Ordinary least squares for a linear mean.
    #[serde(rename = "ols")]
    LinearLeastSquares,
    /// Nadaraya-Watson smoother with a Gaussian kernel. With `loo` set,
    /// each fitted value excludes its own observation.
    #[serde(rename = "kernel")]
    KernelSmoother { bandwidth: Bandwidth, loo: bool },
}

impl MeanEstimatorSpec {
    /// Short stable name used in reports and wire formats.
    pub fn name(&self) -> &'static str {
        match self {
            MeanEstimatorSpec::Known { .. } => "known",
            MeanEstimatorSpec::Constant => "constant",
            MeanEstimatorSpec::LinearLeastSquares => "ols",
            MeanEstimatorSpec::KernelSmoother { .. } => "kernel",
        }
    }
}

/// Residuals from a mean fit, kept in design order, together with how they
/// were produced.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualSequence {
    residuals: Vec<f64>,
    estimator: &'static str,
    /// Bandwidth actually used, when the estimator was a kernel smoother.
    bandwidth: Option<f64>,
}

impl ResidualSequence {
    /// Wraps residuals computed outside [`fit_mean`] (an external fit or a
    /// synthetic sequence); values must be finite and nonempty.
    pub fn from_raw(residuals: Vec<f64>, estimator: &'static str) -> Result<Self> {
        if residuals.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some(i) = residuals.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                field: "residual",
                index: i,
            });
        }
        Ok(Self {
            residuals,
            estimator,
            bandwidth: None,
        })
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn n(&self) -> usize {
        self.residuals.len()
    }

    pub fn estimator(&self) -> &'static str {
        self.estimator
    }

    pub fn bandwidth(&self) -> Option<f64> {
        self.bandwidth
    }
}

/// Fits the requested mean and returns the residual sequence.
pub fn fit_mean(data: &Dataset, spec: &MeanEstimatorSpec) -> Result<ResidualSequence> {
    let fitted: Vec<f64>;
    let mut used_bandwidth = None;
    match spec {
        MeanEstimatorSpec::Known { values } => {
            let values = values.as_ref().ok_or(Error::KnownMeanMissing)?;
            if values.len() != data.n() {
                return Err(Error::KnownMeanLength {
                    expected: data.n(),
                    got: values.len(),
                });
            }
            if let Some(i) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    field: "known mean",
                    index: i,
                });
            }
            fitted = values.clone();
        }
        MeanEstimatorSpec::Constant => {
            let mean = data.y().iter().sum::<f64>() / data.n() as f64;
            fitted = vec![mean; data.n()];
        }
        MeanEstimatorSpec::LinearLeastSquares => {
            let (intercept, slope) = ols_line(data)?;
            fitted = data.x().iter().map(|&x| intercept + slope * x).collect();
        }
        MeanEstimatorSpec::KernelSmoother { bandwidth, loo } => {
            let h = match bandwidth {
                Bandwidth::Fixed(h) => {
                    if !(h.is_finite() && *h > 0.0) {
                        return Err(Error::InvalidBandwidth { bandwidth: *h });
                    }
                    *h
                }
                Bandwidth::Auto => auto_bandwidth(data)?,
            };
            fitted = nadaraya_watson(data.x(), data.y(), h, *loo)?;
            used_bandwidth = Some(h);
        }
    }
    let residuals = data.y().iter().zip(&fitted).map(|(&y, &m)| y - m).collect();
    Ok(ResidualSequence {
        residuals,
        estimator: spec.name(),
        bandwidth: used_bandwidth,
    })
}

/// Least-squares line in centered form; `Sxx = 0` (all design points
/// equal) has no defined slope.
fn ols_line(data: &Dataset) -> Result<(f64, f64)> {
    let n = data.n() as f64;
    let xbar = data.x().iter().sum::<f64>() / n;
    let ybar = data.y().iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in data.x().iter().zip(data.y()) {
        sxx += (x - xbar) * (x - xbar);
        sxy += (x - xbar) * (y - ybar);
    }
    if sxx == 0.0 {
        return Err(Error::SingularDesign);
    }
    let slope = sxy / sxx;
    Ok((ybar - slope * xbar, slope))
}

/// Gaussian Nadaraya-Watson fit at every design point.
///
/// Terms with `((x_i - x_j)/h)^2 >= 1600` are skipped: `exp(-800)` is an
/// exact floating-point zero, so the skip changes no bits and bounds the
/// work per point by the local window.
fn nadaraya_watson(x: &[f64], y: &[f64], h: f64, loo: bool) -> Result<Vec<f64>> {
    let n = x.len();
    let mut fitted = Vec::with_capacity(n);
    for i in 0..n {
        let mut num = 0.0;
        let mut den = 0.0;
        // the design is sorted: scan outward from i and stop once the
        // kernel weight underflows to zero
        let weight_at = |j: usize| -> f64 {
            let t = (x[i] - x[j]) / h;
            let t2 = t * t;
            if t2 >= 1600.0 {
                0.0
            } else {
                (-0.5 * t2).exp()
            }
        };
        let in_window = |j: usize| -> bool {
            let t = (x[i] - x[j]) / h;
            t * t < 1600.0
        };
        let add = |j: usize, num: &mut f64, den: &mut f64| {
            if loo && j == i {
                return;
            }
            let w = weight_at(j);
            *num += w * y[j];
            *den += w;
        };
        add(i, &mut num, &mut den);
        let mut j = i;
        while j > 0 && in_window(j - 1) {
            j -= 1;
            add(j, &mut num, &mut den);
        }
        let mut j = i;
        while j + 1 < n && in_window(j + 1) {
            j += 1;
            add(j, &mut num, &mut den);
        }
        if den == 0.0 || !den.is_finite() || !num.is_finite() {
            return Err(Error::EmptyKernelNeighborhood {
                index: i,
                bandwidth: h,
            });
        }
        fitted.push(num / den);
    }
    Ok(fitted)
}

/// Number of candidate bandwidths scanned by the automatic selector.
const BANDWIDTH_GRID_POINTS: usize = 25;

/// Minimum sample size for cross-validated bandwidth selection.
const AUTO_BANDWIDTH_MIN_N: usize = 10;

/// Leave-one-out cross-validated bandwidth for the Gaussian smoother.
///
/// Candidates lie on a fixed logarithmic grid from twice the largest gap
/// between adjacent design points (so every leave-one-out neighborhood
/// keeps substantial weight) up to half the design range; the candidate
/// minimizing the leave-one-out squared prediction error wins, with ties
/// going to the smallest bandwidth.
pub fn auto_bandwidth(data: &Dataset) -> Result<f64> {
    if data.n() < AUTO_BANDWIDTH_MIN_N {
        return Err(Error::AutoBandwidthTooFewPoints { n: data.n() });
    }
    let x = data.x();
    let max_gap = x.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::max);
    if max_gap <= 0.0 {
        // all design points coincide; no scale to smooth over
        return Err(Error::SingularDesign);
    }
    let lo = 2.0 * max_gap;
    let hi = (x[x.len() - 1] - x[0]) / 2.0;
    let grid: Vec<f64> = if lo >= hi {
        vec![lo]
    } else {
        let (llo, lhi) = (lo.ln(), hi.ln());
        (0..BANDWIDTH_GRID_POINTS)
            .map(|i| {
                let t = i as f64 / (BANDWIDTH_GRID_POINTS - 1) as f64;
                (llo + t * (lhi - llo)).exp()
            })
            .collect()
    };
    let mut best: Option<(f64, f64)> = None;
    for &h in &grid {
        let fitted = nadaraya_watson(x, data.y(), h, true)?;
        let score = fitted
            .iter()
            .zip(data.y())
            .map(|(&m, &y)| (y - m) * (y - m))
            .sum::<f64>();
        if best.map_or(true, |(s, _)| score < s) {
            best = Some((score, h));
        }
    }
    Ok(best.expect("grid is nonempty").1)
}
