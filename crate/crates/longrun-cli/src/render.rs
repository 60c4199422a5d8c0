//! Output rendering: human tables with exact rationals alongside their
//! decimal rounding, and stable CSV shapes for scripting.

use longrun::runs_combinatorics::ExactProb;
use longrun::{Bandwidth, Decision, MeanEstimatorSpec, PowerEstimate, TestReport};

use crate::{DistReport, COMPARE_TOLERANCE_PP};

const GREEN: &str = "\x1b[32m";
const RED: &str = "\x1b[31m";
const YELLOW: &str = "\x1b[33m";
const RESET: &str = "\x1b[0m";

/// Formats a probability to four significant digits, switching to
/// scientific notation once a fixed rendering would need more than six
/// leading decimal zeros.
pub fn sig4(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    if exponent < -6 {
        format!("{v:.3e}")
    } else {
        let decimals = (3 - exponent).max(0) as usize;
        format!("{v:.decimals$}")
    }
}

/// `2/6 = 1/3 = 0.3333`: the stored rational (common denominator
/// `C(n, k)`), its lowest-terms form when that differs, and the decimal.
fn fmt_prob(p: &ExactProb) -> String {
    let reduced = p.reduced();
    let decimal = sig4(p.to_f64());
    if &reduced == p {
        format!("{p} = {decimal}")
    } else {
        format!("{p} = {reduced} = {decimal}")
    }
}

/// One-decimal percentage from an exact probability, e.g. `4.1%`.
fn percent_tenths(p: &ExactProb) -> String {
    let tenths = p.percent_tenths();
    format!("{}.{}%", tenths / 10, tenths % 10)
}

fn describe_estimator(spec: &MeanEstimatorSpec) -> String {
    match spec {
        MeanEstimatorSpec::Known { .. } => "known mean function".to_string(),
        MeanEstimatorSpec::Constant => "constant mean".to_string(),
        MeanEstimatorSpec::LinearLeastSquares => "least-squares line".to_string(),
        MeanEstimatorSpec::KernelSmoother { bandwidth, loo } => {
            let bandwidth = match bandwidth {
                Bandwidth::Auto => "auto bandwidth".to_string(),
                Bandwidth::Fixed(h) => format!("bandwidth {h}"),
            };
            let fits = if *loo {
                "leave-one-out fits"
            } else {
                "ordinary fits"
            };
            format!("kernel smoother ({bandwidth}, {fits})")
        }
    }
}

pub fn print_test_human(report: &TestReport, color: bool) {
    let decision = match report.decision {
        Decision::Reject => {
            let text = "reject homoscedasticity";
            if color {
                format!("{RED}{text}{RESET}")
            } else {
                text.to_string()
            }
        }
        Decision::FailToReject => {
            let text = "fail to reject homoscedasticity";
            if color {
                format!("{GREEN}{text}{RESET}")
            } else {
                text.to_string()
            }
        }
    };
    println!("longest-run heteroscedasticity test");
    println!("  observations:    {}", report.n);
    println!(
        "  estimator:       {}",
        describe_estimator(&report.estimator_used)
    );
    println!(
        "  median of squared residuals: {}",
        sig4(report.median_of_squared_residuals)
    );
    println!("  statistic L:     {}", report.statistic);
    println!(
        "  critical value:  {} (reject when L > {}, nearest-below convention)",
        report.critical_value, report.critical_value
    );
    println!("  target level:    {}", sig4(report.target_level));
    let degenerate = if report.attained_level_exact.is_zero() {
        " — no achievable level this small; the test never rejects"
    } else {
        ""
    };
    println!(
        "  attained level:  {} ({}){degenerate}",
        fmt_prob(&report.attained_level_exact),
        percent_tenths(&report.attained_level_exact)
    );
    println!("  p-value:         {}", fmt_prob(&report.p_value_exact));
    println!("  decision:        {decision}");
}

/// Single-row CSV rendering of a test report; exact rationals ride along
/// as separate numerator/denominator columns.
pub fn test_to_csv(report: &TestReport) -> String {
    let mut out = String::from(
        "n,statistic,median_of_squared_residuals,critical_value,target_level,\
         attained_level,attained_level_numerator,attained_level_denominator,\
         p_value,p_value_numerator,p_value_denominator,decision,estimator\n",
    );
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        report.n,
        report.statistic,
        report.median_of_squared_residuals,
        report.critical_value,
        report.target_level,
        report.attained_level,
        report.attained_level_exact.numerator(),
        report.attained_level_exact.denominator(),
        report.p_value,
        report.p_value_exact.numerator(),
        report.p_value_exact.denominator(),
        report.decision,
        report.estimator_used.name(),
    ));
    out
}

pub fn print_dist_human(report: &DistReport) {
    println!("exact null distribution of the longest run");
    println!(
        "  n = {} observations, k = {} ones, denominator C({}, {}) = {}",
        report.n, report.ones, report.n, report.ones, report.denominator
    );
    println!();
    let width = report
        .rows
        .iter()
        .map(|r| fmt_prob(&r.cdf).len())
        .max()
        .unwrap_or(12);
    println!("  {:>4}  {:<width$}  P(L = x)", "x", "P(L <= x)");
    for row in &report.rows {
        println!(
            "  {:>4}  {:<width$}  {}",
            row.x,
            fmt_prob(&row.cdf),
            fmt_prob(&row.pmf),
        );
    }
    if report.rows.last().is_some_and(|r| r.x < report.n) {
        println!("  (P(L <= x) = 1 for all larger x)");
    }
    if !report.critical_values.is_empty() {
        println!();
        println!("  critical values (the test subcommand uses nearest-below):");
        let target_width = report
            .critical_values
            .iter()
            .map(|c| sig4(c.target_level).len())
            .max()
            .unwrap_or(7);
        for critical in &report.critical_values {
            for (label, record) in [
                ("nearest-below", &critical.nearest_below),
                ("nearest", &critical.nearest),
            ] {
                let degenerate = if record.degenerate {
                    "; degenerate: never rejects"
                } else {
                    ""
                };
                println!(
                    "    target {:<target_width$}  {:<13}  reject when L > {:<3} attained {} ({}){}",
                    sig4(critical.target_level),
                    label,
                    record.critical_value,
                    fmt_prob(&record.attained),
                    percent_tenths(&record.attained),
                    degenerate,
                );
            }
        }
    }
}

/// CSV rendering of the distribution rows with unreduced exact columns.
pub fn dist_to_csv(report: &DistReport) -> String {
    let mut out =
        String::from("x,cdf_numerator,cdf_denominator,cdf,pmf_numerator,pmf_denominator,pmf\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.x,
            row.cdf.numerator(),
            row.cdf.denominator(),
            row.cdf_value,
            row.pmf.numerator(),
            row.pmf.denominator(),
            row.pmf_value,
        ));
    }
    out
}

pub fn print_simulate_human(rows: &[PowerEstimate], flagged: &[usize], compare: bool, color: bool) {
    if let Some(first) = rows.first() {
        println!(
            "Monte Carlo size/power, {} replicates per cell, estimator {}, seed {}",
            first.replicates, first.estimator, first.seed
        );
    }
    println!();
    let header = if compare {
        format!(
            "  {:<6}{:<6}{:<6}{:<8}{:<11}{:<9}{}",
            "model", "n", "c", "level", "rejection", "std.err", "reference"
        )
    } else {
        format!(
            "  {:<6}{:<6}{:<6}{:<8}{:<11}{}",
            "model", "n", "c", "level", "rejection", "std.err"
        )
    };
    println!("{header}");
    for (i, row) in rows.iter().enumerate() {
        let level = format!("{:.1}%", row.level_attained * 100.0);
        let rejection = format!("{:.1}%", row.rejection_rate * 100.0);
        let std_err = format!("{:.1}%", row.std_err * 100.0);
        if compare {
            let reference = row
                .paper_reference_value
                .map(|v| format!("{:.1}%", v * 100.0))
                .unwrap_or_else(|| "-".to_string());
            let marker = if flagged.contains(&i) {
                if color {
                    format!(" {YELLOW}!{RESET}")
                } else {
                    " !".to_string()
                }
            } else {
                String::new()
            };
            println!(
                "  {:<6}{:<6}{:<6}{:<8}{:<11}{:<9}{reference}{marker}",
                row.model, row.n, row.c, level, rejection, std_err
            );
        } else {
            println!(
                "  {:<6}{:<6}{:<6}{:<8}{:<11}{std_err}",
                row.model, row.n, row.c, level, rejection
            );
        }
    }
    if compare {
        println!();
        if flagged.is_empty() {
            println!(
                "  all compared cells within {COMPARE_TOLERANCE_PP} percentage points of the published values"
            );
        } else {
            println!(
                "  ! {} cell(s) deviate more than {COMPARE_TOLERANCE_PP} percentage points from the published values",
                flagged.len()
            );
        }
    }
}
