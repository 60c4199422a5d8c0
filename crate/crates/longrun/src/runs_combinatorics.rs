//! Exact counting of run-constrained binary sequences and the exact null
//! distribution of the longest-run statistic.
//!
//! For sequences of length `n` with `k` ones, `count_constrained(n, k, x)`
//! counts arrangements whose longest run of either symbol is at most `x`.
//! With `k = floor(n/2)` ones fixed by median dichotomization, these counts
//! over the binomial coefficient `C(n, k)` give the exact law of the
//! longest-run statistic under homoscedasticity. All counts are exact
//! integers and all probabilities exact rationals; floating point enters
//! only at the reporting boundary.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision sequence count; `C(100, 50)` is about `1.01e29` and
/// must be held exactly.
pub type ExactCount = BigUint;

/// Largest `n` for which every count (and every intermediate scalar update)
/// fits in `u128`; beyond this the arbitrary-precision path is used.
const U128_LIMIT: usize = 120;

/// A 0/1 sequence. Always nonempty; when produced by the dichotomizer the
/// number of ones equals `floor(n/2)` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinarySequence {
    bits: Vec<bool>,
}

impl BinarySequence {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Number of ones in the sequence.
    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Length of the longest run of identical consecutive symbols.
pub fn longest_run(seq: &BinarySequence) -> usize {
    let bits = seq.bits();
    let mut best = 1;
    let mut current = 1;
    for w in bits.windows(2) {
        if w[0] == w[1] {
            current += 1;
            best = best.max(current);
        } else {
            current = 1;
        }
    }
    best
}

/// An exact probability stored as numerator over denominator.
///
/// The fraction is deliberately kept unreduced: for distribution entries the
/// denominator is always the binomial coefficient `C(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactProb {
    numerator: ExactCount,
    denominator: ExactCount,
}

impl ExactProb {
    pub fn new(numerator: ExactCount, denominator: ExactCount) -> Self {
        debug_assert!(!denominator.is_zero());
        Self {
            numerator,
            denominator,
        }
    }

    pub fn numerator(&self) -> &ExactCount {
        &self.numerator
    }

    pub fn denominator(&self) -> &ExactCount {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.numerator == self.denominator
    }

    /// Floating-point value of the fraction, correct to within a couple of
    /// ulps regardless of operand size.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.numerator, &self.denominator)
    }

    /// The same probability in lowest terms (`0/d` reduces to `0/1`);
    /// intended for display, since the stored form keeps the common
    /// denominator `C(n, k)`.
    pub fn reduced(&self) -> ExactProb {
        let g = self.numerator.gcd(&self.denominator);
        ExactProb::new(&self.numerator / &g, &self.denominator / &g)
    }

    /// The probability as a percentage rounded (exactly, half away from
    /// zero) to one decimal, returned in tenths of a percent.
    /// `4.0859...% -> 41`.
    pub fn percent_tenths(&self) -> u32 {
        let scaled = &self.numerator * 1000u32;
        let q = &scaled / &self.denominator;
        let r = scaled % &self.denominator;
        let rounded = if r * 2u32 >= self.denominator {
            q + 1u32
        } else {
            q
        };
        rounded
            .to_u32()
            .expect("probability in [0, 1] scales to at most 1000")
    }

    /// Exact comparison of the fraction against a floating-point target,
    /// via the target's dyadic decomposition.
    pub fn cmp_f64(&self, target: f64) -> Ordering {
        debug_assert!(target.is_finite());
        if target <= 0.0 {
            return if self.numerator.is_zero() && target == 0.0 {
                Ordering::Equal
            } else {
                Ordering::Greater
            };
        }
        let (mant, exp) = dyadic_parts(target);
        // self = num/den, target = mant * 2^exp
        let rhs = mant * &self.denominator;
        if exp >= 0 {
            self.numerator.cmp(&(rhs << exp as u64))
        } else {
            (&self.numerator << (-exp) as u64).cmp(&rhs)
        }
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

#[derive(Serialize, Deserialize)]
struct ExactProbWire {
    numerator: String,
    denominator: String,
}

impl Serialize for ExactProb {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ExactProbWire {
            numerator: self.numerator.to_string(),
            denominator: self.denominator.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactProb {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = ExactProbWire::deserialize(deserializer)?;
        let numerator = BigUint::from_str(&wire.numerator)
            .map_err(|e| D::Error::custom(format!("bad numerator: {e}")))?;
        let denominator = BigUint::from_str(&wire.denominator)
            .map_err(|e| D::Error::custom(format!("bad denominator: {e}")))?;
        if denominator.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(ExactProb::new(numerator, denominator))
    }
}

/// Mantissa/exponent decomposition of a positive finite `f64`:
/// `value = mant * 2^exp` exactly.
fn dyadic_parts(value: f64) -> (BigUint, i64) {
    debug_assert!(value > 0.0 && value.is_finite());
    let bits = value.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    if raw_exp == 0 {
        (BigUint::from(fraction), -1074)
    } else {
        (BigUint::from(fraction | (1u64 << 52)), raw_exp - 1075)
    }
}

/// `num/den` as `f64`: shift the numerator so the integer quotient carries
/// at least 64 significant bits, then scale back by the (exact) power of
/// two.
fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = (den.bits() + 64).saturating_sub(num.bits());
    let q = (num << shift) / den;
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    qf * 2f64.powi(-(shift as i32))
}

/// Discrete-level selection rule used when mapping a continuous target
/// level onto the discrete attained levels of the longest-run statistic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelConvention {
    /// Largest attained level not exceeding the target (conservative: the
    /// test's true size never exceeds the nominal level).
    NearestBelow,
    /// Attained level closest to the target in absolute distance; ties go
    /// to the smaller attained level.
    Nearest,
}

impl fmt::Display for LevelConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LevelConvention::NearestBelow => "nearest-below",
            LevelConvention::Nearest => "nearest",
        })
    }
}

/// A critical value together with the exact level it attains.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueRecord {
    pub n: usize,
    pub target_level: f64,
    /// Reject when the observed statistic strictly exceeds this value.
    pub critical_value: usize,
    /// `P(L_n > critical_value)` under the null, exactly.
    pub attained: ExactProb,
    /// Floating-point rendering of `attained`.
    pub attained_level: f64,
    /// Set when no positive attained level satisfies the target, so the
    /// record degenerates to a never-rejecting rule with attained level 0.
    pub degenerate: bool,
    pub convention: LevelConvention,
}

/// Exact null law of the longest-run statistic for sequences of length `n`
/// with `k` ones: an immutable CDF table over `x = 0..=n` with common
/// denominator `C(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunLengthDistribution {
    n: usize,
    k: usize,
    /// `cdf_counts[x]` = number of sequences whose longest run is at most
    /// `x`; nondecreasing, ending at `C(n, k)`.
    cdf_counts: Vec<ExactCount>,
    denominator: ExactCount,
}

impl RunLengthDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Common denominator `C(n, k)` of every table entry.
    pub fn denominator(&self) -> &ExactCount {
        &self.denominator
    }

    /// `P(L_n <= x)`, exactly. Values of `x` beyond `n` clamp to 1.
    pub fn cdf(&self, x: usize) -> ExactProb {
        let x = x.min(self.n);
        ExactProb::new(self.cdf_counts[x].clone(), self.denominator.clone())
    }

    /// `P(L_n = x)`, exactly.
    pub fn pmf(&self, x: usize) -> ExactProb {
        if x == 0 || x > self.n {
            return ExactProb::new(BigUint::from(0u32), self.denominator.clone());
        }
        let diff = &self.cdf_counts[x] - &self.cdf_counts[x - 1];
        ExactProb::new(diff, self.denominator.clone())
    }

    /// `P(L_n > x)`, exactly.
    pub fn exceedance(&self, x: usize) -> ExactProb {
        let x = x.min(self.n);
        let diff = &self.denominator - &self.cdf_counts[x];
        ExactProb::new(diff, self.denominator.clone())
    }

    /// The full CDF table as `(x, P(L_n <= x))` rows.
    pub fn cdf_table(&self) -> Vec<(usize, ExactProb)> {
        (0..=self.n).map(|x| (x, self.cdf(x))).collect()
    }

    /// Critical value for a target level under the given selection
    /// convention.
    pub fn critical_value_record(
        &self,
        target_level: f64,
        convention: LevelConvention,
    ) -> Result<CriticalValueRecord> {
        if !(target_level > 0.0 && target_level < 1.0) || !target_level.is_finite() {
            return Err(Error::InvalidLevel {
                level: target_level,
            });
        }
        let critical_value = match convention {
            LevelConvention::NearestBelow => (0..=self.n)
                .find(|&c| self.exceedance(c).cmp_f64(target_level) != Ordering::Greater)
                .expect("exceedance reaches zero at x = n"),
            LevelConvention::Nearest => self.nearest_critical_value(target_level),
        };
        let attained = self.exceedance(critical_value);
        let attained_level = attained.to_f64();
        let degenerate = attained.is_zero();
        Ok(CriticalValueRecord {
            n: self.n,
            target_level,
            critical_value,
            attained,
            attained_level,
            degenerate,
            convention,
        })
    }

    /// The `c` minimizing `|P(L_n > c) - target|` exactly; ties prefer the
    /// smaller attained level (larger `c`).
    fn nearest_critical_value(&self, target: f64) -> usize {
        let (mant, exp) = dyadic_parts(target);
        debug_assert!(exp < 0, "targets lie strictly inside (0, 1)");
        let shift = (-exp) as u64;
        let target_scaled = mant * &self.denominator;
        // |num * 2^shift - target_scaled| over the common denominator
        // den * 2^shift; the denominator is shared so numerators compare
        // directly.
        let mut best: Option<(BigUint, usize)> = None;
        for c in 0..=self.n {
            let scaled = (&self.denominator - &self.cdf_counts[c.min(self.n)]) << shift;
            let dist = if scaled >= target_scaled {
                &scaled - &target_scaled
            } else {
                &target_scaled - &scaled
            };
            let better = match &best {
                None => true,
                Some((best_dist, _)) => dist <= *best_dist,
            };
            if better {
                best = Some((dist, c));
            }
        }
        best.expect("distribution table is nonempty").1
    }
}

/// Unified arithmetic over `u128` (fast path) and `BigUint` so counting
/// code is written once. Divisions are only ever exact.
trait Counter: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn sub_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn mul_scalar(&mut self, m: u64);
    fn div_scalar(&mut self, d: u64);
    fn into_exact(self) -> ExactCount;
}

impl Counter for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn mul_scalar(&mut self, m: u64) {
        *self *= m as u128;
    }
    fn div_scalar(&mut self, d: u64) {
        debug_assert_eq!(*self % d as u128, 0);
        *self /= d as u128;
    }
    fn into_exact(self) -> ExactCount {
        BigUint::from(self)
    }
}

impl Counter for BigUint {
    fn zero() -> Self {
        BigUint::from(0u32)
    }
    fn one() -> Self {
        BigUint::from(1u32)
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn mul_scalar(&mut self, m: u64) {
        *self *= m;
    }
    fn div_scalar(&mut self, d: u64) {
        *self /= d;
    }
    fn into_exact(self) -> ExactCount {
        self
    }
}

/// `C(n, k)` by the exact multiplicative recurrence.
fn binomial<T: Counter>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut value = T::one();
    for i in 1..=k {
        value.mul_scalar((n - k + i) as u64);
        value.div_scalar(i as u64);
    }
    value
}

/// Number of sequences of length `n` with `k` ones whose longest run of
/// either symbol is at most `x`.
///
/// Dynamic program over (ones used, last symbol, current run length): a
/// position either extends the current run (if below the cap) or switches
/// symbol and resets the run to 1. Complexity `O(n * k * x)`.
pub fn count_constrained(n: usize, k: usize, x: usize) -> Result<ExactCount> {
    if n == 0 {
        return Err(Error::SampleTooSmall { n, min: 1 });
    }
    if k > n {
        return Err(Error::OnesOutOfRange { k, n });
    }
    if x == 0 {
        return Ok(BigUint::from(0u32));
    }
    if x >= k.max(n - k) {
        // no run can exceed the symbol counts themselves
        return Ok(binomial::<BigUint>(n, k));
    }
    if n <= U128_LIMIT {
        Ok(dp_count::<u128>(n, k, x).into_exact())
    } else {
        Ok(dp_count::<BigUint>(n, k, x).into_exact())
    }
}

fn dp_count<T: Counter>(n: usize, k: usize, x: usize) -> T {
    // state index: (ones used j) * 2x + (last symbol s) * x + (run - 1)
    let width = 2 * x;
    let idx = |j: usize, s: usize, r: usize| j * width + s * x + (r - 1);
    let mut cur = vec![T::zero(); (k + 1) * width];
    cur[idx(0, 0, 1)] = T::one();
    if k >= 1 {
        cur[idx(1, 1, 1)] = T::one();
    }
    let mut next = vec![T::zero(); (k + 1) * width];
    for _ in 2..=n {
        for slot in next.iter_mut() {
            *slot = T::zero();
        }
        for j in 0..=k {
            for s in 0..2 {
                for r in 1..=x {
                    let v = &cur[idx(j, s, r)];
                    if v.is_zero() {
                        continue;
                    }
                    // extend the current run
                    if r < x && j + s <= k {
                        next[idx(j + s, s, r + 1)].add_assign_ref(v);
                    }
                    // switch symbol
                    let s2 = 1 - s;
                    if j + s2 <= k {
                        next[idx(j + s2, s2, 1)].add_assign_ref(v);
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let mut total = T::zero();
    for s in 0..2 {
        for r in 1..=x {
            total.add_assign_ref(&cur[idx(k, s, r)]);
        }
    }
    total
}

/// Compositions of `m` into `p` parts, each between 1 and `x`, for every
/// `p` simultaneously (index `p` of the returned vector).
///
/// Uses inclusion–exclusion over parts forced beyond the cap,
/// `N(m, p, x) = sum_j (-1)^j C(p, j) C(m - j*x - 1, p - 1)`,
/// with all binomials advanced incrementally so each term costs O(1)
/// scalar updates.
#[allow(clippy::needless_range_loop)] // `p` drives the binomial recurrences, not just the index
fn part_counts<T: Counter>(m: usize, x: usize) -> Vec<T> {
    let mut plus = vec![T::zero(); m + 1];
    let mut minus = vec![T::zero(); m + 1];
    if m == 0 {
        return plus;
    }
    let pmin = m.div_ceil(x);
    // C(pmin, j), advanced in j
    let mut cpj_start = T::one();
    // C(m - j*x - 1, pmin - 1), advanced in j by x single decrements
    let mut ctp_start = binomial::<T>(m - 1, pmin - 1);
    let mut j = 0usize;
    loop {
        let p_hi = m - j * x;
        let t = p_hi - 1; // first binomial argument: m - j*x - 1
        let mut cpj = cpj_start.clone(); // C(p, j) at p = pmin
        let mut ctp = ctp_start.clone(); // C(t, p - 1) at p = pmin
        let acc = if j % 2 == 0 { &mut plus } else { &mut minus };
        for p in pmin..=p_hi {
            acc[p].add_assign_ref(&cpj.mul_ref(&ctp));
            if p < p_hi {
                // C(p + 1, j) = C(p, j) * (p + 1) / (p + 1 - j)
                cpj.mul_scalar((p + 1) as u64);
                cpj.div_scalar((p + 1 - j) as u64);
                // C(t, p) = C(t, p - 1) * (t - p + 1) / p
                ctp.mul_scalar((t - p + 1) as u64);
                ctp.div_scalar(p as u64);
            }
        }
        // advance the j-start values, stopping when the next p-range is
        // empty (equivalently when parts can no longer reach the cap)
        match m.checked_sub((j + 1) * x) {
            Some(next_hi) if next_hi >= pmin => {
                // C(pmin, j + 1) = C(pmin, j) * (pmin - j) / (j + 1)
                cpj_start.mul_scalar((pmin - j) as u64);
                cpj_start.div_scalar((j + 1) as u64);
                // C(a - 1, r) = C(a, r) * (a - r) / a, stepped x times
                let r = pmin - 1;
                let mut a = t;
                for _ in 0..x {
                    ctp_start.mul_scalar((a - r) as u64);
                    ctp_start.div_scalar(a as u64);
                    a -= 1;
                }
                j += 1;
            }
            _ => break,
        }
    }
    for p in pmin..=m {
        plus[p].sub_assign_ref(&minus[p]);
    }
    plus
}

/// `S_n^k(x)` via the alternating-blocks decomposition: `p` runs of ones
/// interleave with `q` runs of zeros only when `|p - q| <= 1`, and both
/// orders exist exactly when `p = q`.
fn blocks_count<T: Counter>(ones: usize, zeros: usize, x: usize) -> T {
    let a = part_counts::<T>(ones, x);
    let b = part_counts::<T>(zeros, x);
    let mut total = T::zero();
    for (p, ap) in a.iter().enumerate().skip(1) {
        if ap.is_zero() {
            continue;
        }
        let mut combined = T::zero();
        if p >= 2 && p - 1 < b.len() {
            combined.add_assign_ref(&b[p - 1]);
        } else if p == 1 && zeros == 0 {
            // a lone block of ones with no zeros at all
            combined.add_assign_ref(&T::one());
        }
        if p < b.len() {
            combined.add_assign_ref(&b[p]);
            combined.add_assign_ref(&b[p]);
        }
        if p + 1 < b.len() {
            combined.add_assign_ref(&b[p + 1]);
        }
        total.add_assign_ref(&ap.mul_ref(&combined));
    }
    if ones == 0 {
        // a lone block of zeros (or the empty sequence)
        if zeros == 0 || zeros <= x {
            total.add_assign_ref(&T::one());
        }
    }
    total
}

fn build_cdf_counts<T: Counter>(n: usize, k: usize) -> (Vec<T>, T) {
    let ones = k;
    let zeros = n - k;
    let total = binomial::<T>(n, k);
    let cap = ones.max(zeros); // the longest run either symbol can form
    let mut counts = Vec::with_capacity(n + 1);
    counts.push(T::zero());
    for x in 1..=n {
        if x >= cap {
            counts.push(total.clone());
        } else {
            counts.push(blocks_count::<T>(ones, zeros, x));
        }
    }
    (counts, total)
}

/// Exact null distribution of the longest run for length `n` with
/// `k = floor(n/2)` ones, built fresh (no cache). Exposed for benchmarks
/// and cross-validation; most callers want [`null_distribution`].
pub fn null_distribution_uncached(n: usize) -> Result<RunLengthDistribution> {
    if n < 2 {
        return Err(Error::SampleTooSmall { n, min: 2 });
    }
    let k = n / 2;
    let (cdf_counts, denominator) = if n <= U128_LIMIT {
        let (counts, total) = build_cdf_counts::<u128>(n, k);
        (
            counts
                .into_iter()
                .map(Counter::into_exact)
                .collect::<Vec<_>>(),
            total.into_exact(),
        )
    } else {
        build_cdf_counts::<BigUint>(n, k)
    };
    debug_assert!(cdf_counts.windows(2).all(|w| w[0] <= w[1]));
    debug_assert_eq!(cdf_counts[n], denominator);
    Ok(RunLengthDistribution {
        n,
        k,
        cdf_counts,
        denominator,
    })
}

/// Exact null distribution of the longest run for length `n` with
/// `k = floor(n/2)` ones. Tables are memoized per process and shared
/// read-only; the returned handle is safe to use from any thread.
pub fn null_distribution(n: usize) -> Result<Arc<RunLengthDistribution>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<RunLengthDistribution>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("distribution cache poisoned");
    if let Some(dist) = guard.get(&n) {
        return Ok(Arc::clone(dist));
    }
    let dist = Arc::new(null_distribution_uncached(n)?);
    guard.insert(n, Arc::clone(&dist));
    Ok(dist)
}

/// Smallest critical value whose attained level does not exceed the target
/// (the conservative convention; see [`LevelConvention`]).
pub fn critical_value(n: usize, target_level: f64) -> Result<CriticalValueRecord> {
    critical_value_with(n, target_level, LevelConvention::NearestBelow)
}

/// Critical value under an explicit level-selection convention.
pub fn critical_value_with(
    n: usize,
    target_level: f64,
    convention: LevelConvention,
) -> Result<CriticalValueRecord> {
    null_distribution(n)?.critical_value_record(target_level, convention)
}

/// `P(L_n >= observed)` under the null, exactly. Values of `observed`
/// beyond `n` describe an impossible event and yield an exact zero.
pub fn p_value(n: usize, observed: usize) -> Result<ExactProb> {
    if observed == 0 {
        return Err(Error::ObservedOutOfRange { observed });
    }
    let dist = null_distribution(n)?;
    Ok(dist.exceedance(observed - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(bits: &[u8]) -> BinarySequence {
        BinarySequence::new(bits.iter().map(|&b| b == 1).collect()).unwrap()
    }

    fn big(s: &str) -> BigUint {
        BigUint::from_str(s).unwrap()
    }

    #[test]
    fn longest_run_examples() {
        assert_eq!(longest_run(&seq(&[0, 1, 0, 1])), 1);
        assert_eq!(longest_run(&seq(&[1, 1, 1, 0, 0])), 3);
        assert_eq!(longest_run(&seq(&[1, 1, 1, 1, 1])), 5);
        assert_eq!(longest_run(&seq(&[0])), 1);
    }

    #[test]
    fn empty_sequence_rejected() {
        assert_eq!(
            BinarySequence::new(Vec::new()).unwrap_err(),
            Error::EmptySequence
        );
    }

    #[test]
    fn count_constrained_examples() {
        assert_eq!(count_constrained(4, 2, 1).unwrap(), big("2"));
        assert_eq!(count_constrained(6, 3, 2).unwrap(), big("14"));
        // vacuous constraint
        assert_eq!(count_constrained(10, 4, 10).unwrap(), big("210"));
        assert_eq!(count_constrained(10, 4, 6), count_constrained(10, 4, 10));
        // every nonempty sequence has a run
        assert_eq!(count_constrained(7, 3, 0).unwrap(), BigUint::from(0u32));
        // single-symbol sequences
        assert_eq!(count_constrained(5, 0, 4).unwrap(), BigUint::from(0u32));
        assert_eq!(count_constrained(5, 0, 5).unwrap(), big("1"));
        assert_eq!(count_constrained(5, 5, 5).unwrap(), big("1"));
    }

    #[test]
    fn count_constrained_precondition_errors() {
        assert!(matches!(
            count_constrained(0, 0, 1),
            Err(Error::SampleTooSmall { .. })
        ));
        assert!(matches!(
            count_constrained(4, 5, 1),
            Err(Error::OnesOutOfRange { .. })
        ));
    }

    fn brute_force(n: usize, k: usize, x: usize) -> u64 {
        let mut count = 0;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let mut best = 1;
            let mut run = 1;
            for i in 1..n {
                if (mask >> i) & 1 == (mask >> (i - 1)) & 1 {
                    run += 1;
                    best = best.max(run);
                } else {
                    run = 1;
                }
            }
            if best <= x {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn enumeration_oracle_small() {
        for n in 1..=10 {
            for k in 0..=n {
                for x in 0..=n {
                    let expect = if x == 0 { 0 } else { brute_force(n, k, x) };
                    assert_eq!(
                        count_constrained(n, k, x).unwrap(),
                        BigUint::from(expect),
                        "n={n} k={k} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn blocks_path_matches_dp_path() {
        for n in 2..=40 {
            for k in 0..=n {
                for x in 1..n {
                    let via_blocks = blocks_count::<u128>(k, n - k, x);
                    let via_dp = dp_count::<u128>(n, k, x.min(k.max(n - k)));
                    let expected = if x >= k.max(n - k) {
                        binomial::<u128>(n, k)
                    } else {
                        via_dp
                    };
                    assert_eq!(via_blocks, expected, "n={n} k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn biguint_and_u128_paths_agree() {
        for &(n, k, x) in &[
            (121usize, 60usize, 7usize),
            (121, 60, 9),
            (130, 65, 8),
            (125, 40, 11),
        ] {
            let small = dp_count::<u128>(n, k, x).into_exact();
            let large = dp_count::<BigUint>(n, k, x);
            assert_eq!(small, large, "dp n={n} k={k} x={x}");
            let small_b = blocks_count::<u128>(k, n - k, x).into_exact();
            let large_b = blocks_count::<BigUint>(k, n - k, x);
            assert_eq!(small_b, large_b, "blocks n={n} k={k} x={x}");
            assert_eq!(small, small_b);
        }
    }

    #[test]
    fn null_distribution_small_values() {
        let d4 = null_distribution(4).unwrap();
        assert_eq!(d4.cdf(1), ExactProb::new(big("2"), big("6")));
        assert!(d4.cdf(4).is_one());
        assert!(d4.cdf(0).is_zero());
        let d2 = null_distribution(2).unwrap();
        assert_eq!(d2.cdf(1), ExactProb::new(big("2"), big("2")));
        assert!(matches!(
            null_distribution(1),
            Err(Error::SampleTooSmall { .. })
        ));
    }

    #[test]
    fn distribution_for_n50_matches_pinned_counts() {
        let d = null_distribution(50).unwrap();
        assert_eq!(d.denominator(), &big("126410606437752"));
        assert_eq!(d.cdf(7).numerator(), &big("114027646053598"));
        assert_eq!(d.cdf(8).numerator(), &big("121245587788524"));
        assert_eq!(d.exceedance(7).percent_tenths(), 98);
        assert_eq!(d.exceedance(8).percent_tenths(), 41);
    }

    #[test]
    fn reduced_form_is_in_lowest_terms_and_equal_in_value() {
        let p = ExactProb::new(big("2"), big("6"));
        let r = p.reduced();
        assert_eq!(r, ExactProb::new(big("1"), big("3")));
        assert_eq!(
            p.numerator() * r.denominator(),
            r.numerator() * p.denominator()
        );
        let zero = ExactProb::new(big("0"), big("6")).reduced();
        assert_eq!(zero, ExactProb::new(big("0"), big("1")));
        let d = null_distribution(50).unwrap();
        let attained = d.exceedance(8).reduced();
        assert_eq!(
            attained.numerator().gcd(attained.denominator()),
            BigUint::from(1u32)
        );
        assert_eq!(attained.percent_tenths(), 41);
    }

    #[test]
    fn distribution_for_n100_matches_pinned_counts() {
        let d = null_distribution(100).unwrap();
        assert_eq!(d.denominator(), &big("100891344545564193334812497256"));
        assert_eq!(d.cdf(8).numerator(), &big("88241681850941917512600707808"));
        assert_eq!(d.cdf(9).numerator(), &big("94993453696259880895280331480"));
        assert_eq!(d.exceedance(8).percent_tenths(), 125);
        assert_eq!(d.exceedance(9).percent_tenths(), 58);
    }

    #[test]
    fn critical_values_at_tabulated_sizes() {
        let c = critical_value(50, 0.05).unwrap();
        assert_eq!((c.critical_value, c.attained.percent_tenths()), (8, 41));
        assert!(!c.degenerate);
        let c = critical_value(50, 0.10).unwrap();
        assert_eq!((c.critical_value, c.attained.percent_tenths()), (7, 98));
        // nearest-below and nearest agree at n = 50 ...
        let c = critical_value_with(50, 0.05, LevelConvention::Nearest).unwrap();
        assert_eq!((c.critical_value, c.attained.percent_tenths()), (8, 41));
        // ... and split at n = 100, where only `nearest` reproduces the
        // tabulated 5.8% / 12.5% pairing.
        let c = critical_value_with(100, 0.05, LevelConvention::Nearest).unwrap();
        assert_eq!((c.critical_value, c.attained.percent_tenths()), (9, 58));
        let c = critical_value_with(100, 0.10, LevelConvention::Nearest).unwrap();
        assert_eq!((c.critical_value, c.attained.percent_tenths()), (8, 125));
        let c = critical_value(100, 0.05).unwrap();
        assert_eq!((c.critical_value, c.attained.percent_tenths()), (10, 26));
        let c = critical_value(100, 0.10).unwrap();
        assert_eq!((c.critical_value, c.attained.percent_tenths()), (9, 58));
    }

    #[test]
    fn degenerate_record_flagged() {
        let c = critical_value(8, 1e-9).unwrap();
        assert!(c.degenerate);
        assert!(c.attained.is_zero());
        assert_eq!(c.attained_level, 0.0);
    }

    #[test]
    fn invalid_levels_rejected() {
        assert!(matches!(
            critical_value(10, 0.0),
            Err(Error::InvalidLevel { .. })
        ));
        assert!(matches!(
            critical_value(10, 1.0),
            Err(Error::InvalidLevel { .. })
        ));
        assert!(matches!(
            critical_value(10, f64::NAN),
            Err(Error::InvalidLevel { .. })
        ));
    }

    #[test]
    fn p_value_examples() {
        // L >= 1 always
        assert!(p_value(9, 1).unwrap().is_one());
        let p = p_value(4, 2).unwrap();
        assert_eq!(p, ExactProb::new(big("4"), big("6")));
        // impossible event
        assert!(p_value(4, 5).unwrap().is_zero());
        assert!(matches!(
            p_value(4, 0),
            Err(Error::ObservedOutOfRange { .. })
        ));
    }

    #[test]
    fn p_value_coheres_with_critical_value() {
        for n in [10, 25, 50, 100] {
            for level in [0.01, 0.05, 0.10, 0.25] {
                let c = critical_value(n, level).unwrap();
                assert_eq!(p_value(n, c.critical_value + 1).unwrap(), c.attained);
            }
        }
    }

    #[test]
    fn exact_prob_rendering() {
        let p = ExactProb::new(big("1"), big("3"));
        assert!((p.to_f64() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.to_string(), "1/3");
        assert_eq!(p.percent_tenths(), 333);
        let p = ExactProb::new(big("1"), big("2"));
        assert_eq!(p.percent_tenths(), 500);
        assert_eq!(ExactProb::new(big("0"), big("7")).to_f64(), 0.0);
    }

    #[test]
    fn exact_prob_comparisons() {
        let third = ExactProb::new(big("1"), big("3"));
        assert_eq!(third.cmp_f64(0.5), Ordering::Less);
        assert_eq!(third.cmp_f64(0.25), Ordering::Greater);
        // 0.25 is dyadic: exact equality is decidable
        let quarter = ExactProb::new(big("1"), big("4"));
        assert_eq!(quarter.cmp_f64(0.25), Ordering::Equal);
        assert_eq!(
            ExactProb::new(big("0"), big("4")).cmp_f64(0.0),
            Ordering::Equal
        );
    }

    #[test]
    fn exact_prob_serde_round_trip() {
        let p = ExactProb::new(big("121245587788524"), big("126410606437752"));
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"121245587788524\""));
        let back: ExactProb = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn cached_distribution_is_shared() {
        let a = null_distribution(36).unwrap();
        let b = null_distribution(36).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn ratio_to_f64_handles_extreme_magnitudes() {
        let one = BigUint::from(1u32);
        let huge = BigUint::from(2u32).pow(2000);
        assert_eq!(ratio_to_f64(&one, &huge), 0.0);
        assert_eq!(ratio_to_f64(&huge, &huge), 1.0);
        let half = ratio_to_f64(&BigUint::from(1u32), &BigUint::from(2u32));
        assert_eq!(half, 0.5);
    }
}
