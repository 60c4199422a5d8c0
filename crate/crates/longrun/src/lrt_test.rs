//! The end-to-end longest-run test: residuals, median dichotomization,
//! longest run, exact decision.
//!
//! Squared residuals are dichotomized about their median into a 0/1
//! sequence with exactly `floor(n/2)` ones; under homoscedasticity every
//! arrangement is equally likely, so the longest run has the exact law
//! from [`crate::runs_combinatorics`] and both the critical value and the
//! p-value are free of approximation error.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mean_estimation::{fit_mean, Dataset, MeanEstimatorSpec, ResidualSequence};
use crate::runs_combinatorics::{critical_value, longest_run, p_value, BinarySequence, ExactProb};

/// Outcome of the test at the requested level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Reject,
    FailToReject,
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decision::Reject => "reject",
            Decision::FailToReject => "fail-to-reject",
        })
    }
}

/// Full structured result of a single test run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub n: usize,
    /// Longest run of the dichotomized squared residuals.
    pub statistic: usize,
    /// Sample median of the squared residuals (the dichotomization
    /// threshold scale).
    pub median_of_squared_residuals: f64,
    /// Reject when `statistic > critical_value`.
    pub critical_value: usize,
    pub target_level: f64,
    /// Exact null probability of exceeding the critical value.
    pub attained_level: f64,
    pub attained_level_exact: ExactProb,
    /// Exact null probability of a statistic at least as large as
    /// observed.
    pub p_value: f64,
    pub p_value_exact: ExactProb,
    pub decision: Decision,
    pub estimator_used: MeanEstimatorSpec,
}

/// Sample median: middle order statistic for odd `n`, average of the two
/// middle order statistics for even `n`.
fn sample_median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Dichotomizes squared residuals about their median into a 0/1 sequence
/// with exactly `floor(n/2)` ones.
///
/// The indices holding the `floor(n/2)` largest squared residuals receive
/// a 1; ties at the cutoff are broken by the smaller design index
/// receiving a 1 first. The rule depends only on the ranks of the squared
/// residuals, so it is invariant to any strictly increasing relabeling.
pub fn dichotomize(residuals: &ResidualSequence) -> Result<BinarySequence> {
    let n = residuals.n();
    if n < 4 {
        return Err(Error::SampleTooSmall { n, min: 4 });
    }
    let squared: Vec<f64> = residuals.residuals().iter().map(|e| e * e).collect();
    let k = n / 2;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        squared[b]
            .partial_cmp(&squared[a])
            .expect("finite values compare")
            .then(a.cmp(&b))
    });
    let mut bits = vec![false; n];
    for &i in order.iter().take(k) {
        bits[i] = true;
    }
    BinarySequence::new(bits)
}

/// Runs the longest-run heteroscedasticity test on a dataset.
///
/// The critical value uses the conservative nearest-below level
/// convention, so the test's exact size never exceeds `target_level`; the
/// exact p-value is reported alongside for use at any other level.
pub fn run_test(data: &Dataset, spec: &MeanEstimatorSpec, target_level: f64) -> Result<TestReport> {
    let n = data.n();
    if n < 4 {
        return Err(Error::SampleTooSmall { n, min: 4 });
    }
    if !(target_level > 0.0 && target_level < 1.0) || !target_level.is_finite() {
        return Err(Error::InvalidLevel {
            level: target_level,
        });
    }
    let residuals = fit_mean(data, spec)?;
    let squared: Vec<f64> = residuals.residuals().iter().map(|e| e * e).collect();
    let median = sample_median(&squared);
    let sequence = dichotomize(&residuals)?;
    let statistic = longest_run(&sequence);
    let record = critical_value(n, target_level)?;
    let p_exact = p_value(n, statistic)?;
    let decision = if statistic > record.critical_value {
        Decision::Reject
    } else {
        Decision::FailToReject
    };
    Ok(TestReport {
        n,
        statistic,
        median_of_squared_residuals: median,
        critical_value: record.critical_value,
        target_level,
        attained_level: record.attained_level,
        attained_level_exact: record.attained,
        p_value: p_exact.to_f64(),
        p_value_exact: p_exact,
        decision,
        estimator_used: spec.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn raw(values: &[f64]) -> ResidualSequence {
        ResidualSequence::from_raw(values.to_vec(), "known").unwrap()
    }

    fn bits_of(seq: &BinarySequence) -> Vec<u8> {
        seq.bits().iter().map(|&b| u8::from(b)).collect()
    }

    #[test]
    fn dichotomize_distinct_values() {
        // squared residuals 1, 4, 9, 16
        let s = dichotomize(&raw(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(bits_of(&s), vec![0, 0, 1, 1]);
    }

    #[test]
    fn dichotomize_all_ties_prefers_early_indices() {
        let s = dichotomize(&raw(&[5.0, 5.0, 5.0, 5.0])).unwrap();
        assert_eq!(bits_of(&s), vec![1, 1, 0, 0]);
    }

    #[test]
    fn dichotomize_odd_length_has_floor_ones() {
        // squared residuals 9, 1, 4, 16, 25: the top-2 are 16 and 25
        let s = dichotomize(&raw(&[3.0, 1.0, 2.0, 4.0, 5.0])).unwrap();
        assert_eq!(bits_of(&s), vec![0, 0, 0, 1, 1]);
        assert_eq!(s.ones(), 2);
    }

    #[test]
    fn dichotomize_ones_count_is_always_half() {
        for n in 4..=21 {
            let values: Vec<f64> = (0..n).map(|i| ((i * 7919) % 23) as f64 * 0.5).collect();
            let s = dichotomize(&raw(&values)).unwrap();
            assert_eq!(s.ones(), n / 2, "n={n}");
        }
    }

    #[test]
    fn dichotomize_needs_four_points() {
        assert!(matches!(
            dichotomize(&raw(&[1.0, 2.0, 3.0])),
            Err(Error::SampleTooSmall { n: 3, min: 4 })
        ));
    }

    #[test]
    fn sample_median_even_and_odd() {
        assert_eq!(sample_median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(sample_median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    #[test]
    fn alternating_residuals_give_minimal_statistic() {
        let d = Dataset::new(
            (0..8).map(|i| i as f64).collect(),
            vec![2.0, 1.0, -2.0, -1.0, 2.0, 1.0, -2.0, -1.0],
        )
        .unwrap();
        // known zero mean: residual magnitudes alternate 2, 1, 2, 1, ...
        let spec = MeanEstimatorSpec::Known {
            values: Some(vec![0.0; 8]),
        };
        let report = run_test(&d, &spec, 0.05).unwrap();
        assert_eq!(report.statistic, 1);
        assert!(report.p_value_exact.is_one());
        assert_eq!(report.decision, Decision::FailToReject);
    }

    #[test]
    fn worked_example_constant_mean() {
        let d = Dataset::new(vec![1.0, 2.0, 3.0, 4.0], vec![0.0, 10.0, 0.0, 10.0]).unwrap();
        let report = run_test(&d, &MeanEstimatorSpec::Constant, 0.05).unwrap();
        // residuals (-5, 5, -5, 5): squared all 25, so the tie rule yields
        // (1, 1, 0, 0) and a longest run of 2
        assert_eq!(report.n, 4);
        assert_eq!(report.statistic, 2);
        assert_eq!(report.median_of_squared_residuals, 25.0);
        assert_eq!(
            report.p_value_exact,
            ExactProb::new(BigUint::from(4u32), BigUint::from(6u32))
        );
        // at n = 4 no positive attained level sits below 5%, so the
        // conservative rule degenerates to never rejecting
        assert_eq!(report.critical_value, 2);
        assert!(report.attained_level_exact.is_zero());
        assert_eq!(report.decision, Decision::FailToReject);
    }

    #[test]
    fn strong_heteroscedasticity_rejects() {
        // residual magnitudes explode in the second half
        let n = 50;
        let x: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let y: Vec<f64> = (0..n)
            .map(|i| {
                let sign = if i % 3 == 0 { -1.0 } else { 1.0 };
                let scale = if i < n / 2 { 0.01 } else { 10.0 };
                sign * scale * (1.0 + (i % 5) as f64)
            })
            .collect();
        let d = Dataset::new(x, y).unwrap();
        let spec = MeanEstimatorSpec::Known {
            values: Some(vec![0.0; n]),
        };
        let report = run_test(&d, &spec, 0.05).unwrap();
        assert!(report.statistic >= 25, "statistic {}", report.statistic);
        assert_eq!(report.decision, Decision::Reject);
        assert!(report.p_value_exact.is_zero() || report.p_value < 1e-6);
    }

    #[test]
    fn decision_matches_critical_value_invariant() {
        let n = 50;
        let x: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        for seed_ish in 0..20u64 {
            let y: Vec<f64> = (0..n)
                .map(|i| {
                    let t = (i as u64)
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(seed_ish);
                    ((t >> 33) as f64 / (1u64 << 31) as f64) - 0.5
                })
                .collect();
            let d = Dataset::new(x.clone(), y).unwrap();
            let report = run_test(&d, &MeanEstimatorSpec::Constant, 0.05).unwrap();
            assert_eq!(
                report.decision == Decision::Reject,
                report.statistic > report.critical_value
            );
            assert!(report.statistic >= 1 && report.statistic <= n);
        }
    }

    #[test]
    fn scale_invariance_under_least_squares() {
        let n = 40;
        let x: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let y: Vec<f64> = (0..n)
            .map(|i| 2.0 + 3.0 * (i as f64) + ((i * i * 37 + 11) % 101) as f64 / 25.0)
            .collect();
        let scaled: Vec<f64> = y.iter().map(|v| v * 4.0).collect();
        let a = run_test(
            &Dataset::new(x.clone(), y).unwrap(),
            &MeanEstimatorSpec::LinearLeastSquares,
            0.05,
        )
        .unwrap();
        let b = run_test(
            &Dataset::new(x, scaled).unwrap(),
            &MeanEstimatorSpec::LinearLeastSquares,
            0.05,
        )
        .unwrap();
        assert_eq!(a.statistic, b.statistic);
        assert_eq!(a.decision, b.decision);
        assert_eq!(a.p_value_exact, b.p_value_exact);
    }

    #[test]
    fn run_test_validates_inputs() {
        let d = Dataset::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            run_test(&d, &MeanEstimatorSpec::Constant, 0.05),
            Err(Error::SampleTooSmall { n: 3, min: 4 })
        ));
        let d = Dataset::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            run_test(&d, &MeanEstimatorSpec::Constant, 0.0),
            Err(Error::InvalidLevel { .. })
        ));
        assert!(matches!(
            run_test(&d, &MeanEstimatorSpec::Constant, 1.5),
            Err(Error::InvalidLevel { .. })
        ));
    }

    #[test]
    fn report_serializes_with_exact_fractions() {
        let d = Dataset::new(vec![1.0, 2.0, 3.0, 4.0], vec![0.0, 10.0, 0.0, 10.0]).unwrap();
        let report = run_test(&d, &MeanEstimatorSpec::Constant, 0.05).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["p_value_exact"]["numerator"], "4");
        assert_eq!(json["p_value_exact"]["denominator"], "6");
        assert_eq!(json["decision"], "fail-to-reject");
        assert_eq!(json["estimator_used"]["kind"], "constant");
        let back: TestReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, report);
    }
}
