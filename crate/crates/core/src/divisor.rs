//! Divisor methods in highest-averages form.
//!
//! State `i` earns its `k`-th seat once `w_i / D` reaches the signpost
//! `s(k)`: `k - 1` for upward rounding, `k - 1/2` for standard rounding and
//! `k` for downward rounding. Seats are handed out one at a time to the
//! largest priority `w_i / s(k)`. Weights are kept as natural logarithms, so
//! every comparison is a subtraction and `p^E` never has to be formed, even
//! when it is far outside the `f64` range.
//!
//! A composite method adds `base` seats per state before rounding. It is
//! the same machinery with every signpost shifted down by `base`. Seats
//! whose shifted signpost is `<= 0` are granted unconditionally.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::SeatVector;
use crate::nice::{nice_in_log10, Decimal, UpperBound};

/// Relative tolerance for deciding that two log-priorities tie.
pub const TIE_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RoundingRule {
    Upward,
    Standard,
    Downward,
}

impl RoundingRule {
    /// Threshold at which the `k`-th seat (1-based) is earned.
    pub fn signpost(self, k: u32) -> f64 {
        f64::from(k) - self.offset()
    }

    fn offset(self) -> f64 {
        match self {
            RoundingRule::Upward => 1.0,
            RoundingRule::Standard => 0.5,
            RoundingRule::Downward => 0.0,
        }
    }
}

impl std::str::FromStr for RoundingRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "up" | "upward" => Ok(RoundingRule::Upward),
            "std" | "standard" => Ok(RoundingRule::Standard),
            "down" | "downward" => Ok(RoundingRule::Downward),
            other => Err(format!("unknown rounding rule `{other}`")),
        }
    }
}

/// Natural logarithm of a positive weight.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct LogWeight(f64);

impl LogWeight {
    /// `population^exponent`, stored as `exponent * ln(population)`.
    pub fn from_power(population: u64, exponent: f64) -> Self {
        LogWeight(exponent * (population as f64).ln())
    }

    pub fn from_weight(weight: f64) -> Self {
        LogWeight(weight.ln())
    }

    pub fn from_ln(ln: f64) -> Self {
        LogWeight(ln)
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    /// The weight itself; overflows to infinity for very large weights.
    pub fn value(self) -> f64 {
        self.0.exp()
    }
}

pub(crate) fn log_close(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    if !(a.is_finite() && b.is_finite()) {
        return false;
    }
    let scale = 1f64.max(a.abs()).max(b.abs());
    (a - b).abs() <= TIE_TOLERANCE * scale
}

/// Signposts of a rule shifted down by a per-state base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Signposts {
    pub rule: RoundingRule,
    pub base: f64,
}

impl Signposts {
    pub fn new(rule: RoundingRule, base: f64) -> Self {
        Self { rule, base }
    }

    pub fn threshold(&self, k: u32) -> f64 {
        self.rule.signpost(k) - self.base
    }

    /// Number of seats every state receives unconditionally.
    pub fn free_seats(&self) -> u32 {
        (self.base + self.rule.offset()).floor().max(0.0) as u32
    }

    /// `ln` of the threshold for seat `k`, `-inf` for free seats.
    fn ln_threshold(&self, k: u32) -> f64 {
        let t = self.threshold(k);
        if t <= 0.0 {
            f64::NEG_INFINITY
        } else {
            t.ln()
        }
    }
}

fn check_weights(weights: &[LogWeight]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::EmptyRoster);
    }
    if let Some(w) = weights.iter().find(|w| !w.0.is_finite()) {
        return Err(Error::InvalidProblem(format!(
            "non-finite log-weight {}",
            w.0
        )));
    }
    Ok(())
}

/// Highest-averages allocation of `total` seats under `signposts`.
pub fn allocate(weights: &[LogWeight], total: u64, signposts: Signposts) -> Result<SeatVector> {
    check_weights(weights)?;
    let n = weights.len();
    let free = signposts.free_seats();
    let required = u64::from(free) * n as u64;
    if total < required {
        return Err(Error::Infeasible {
            seats: total,
            required,
            states: n,
        });
    }
    let mut seats = vec![free; n];
    let priority = |i: usize, k: u32| weights[i].0 - signposts.ln_threshold(k);
    let mut next: Vec<f64> = (0..n).map(|i| priority(i, free + 1)).collect();
    let mut last_awarded = f64::INFINITY;
    for _ in 0..(total - required) {
        let (winner, &best) = next
            .iter()
            .enumerate()
            .fold(None, |acc: Option<(usize, &f64)>, (i, v)| match acc {
                Some((_, b)) if *b >= *v => acc,
                _ => Some((i, v)),
            })
            .expect("nonempty");
        last_awarded = best;
        seats[winner] += 1;
        next[winner] = priority(winner, seats[winner] + 1);
    }

    if last_awarded.is_finite() {
        let best_next = next.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if log_close(last_awarded, best_next) {
            let mut tied: Vec<usize> = (0..n)
                .filter(|&i| {
                    log_close(next[i], last_awarded)
                        || (seats[i] > free && log_close(priority(i, seats[i]), last_awarded))
                })
                .collect();
            tied.dedup();
            return Err(Error::Tie { states: tied });
        }
    }
    Ok(SeatVector::new(seats))
}

/// Apportions `seats` among the weights by the divisor method with `rule`.
///
/// Upward rounding grants every state its first seat, so it needs at least
/// one seat per state.
pub fn apportion(weights: &[LogWeight], seats: u32, rule: RoundingRule) -> Result<SeatVector> {
    allocate(weights, seats.into(), Signposts::new(rule, 0.0))
}

/// Total seats `round_rule(base + w_i / D)` with `D` chosen to fill `house`.
///
/// For an integer base this equals `base` plus the divisor apportionment of
/// the remaining seats. A half-integer base is rounded jointly with the
/// quotient, which is what makes `5 + Upw`, `5.5 + Std` and `6 + Dwn`
/// comparable.
pub fn composite(
    weights: &[LogWeight],
    house: u32,
    base: f64,
    rule: RoundingRule,
) -> Result<SeatVector> {
    if !(base >= 0.0 && base.is_finite()) {
        return Err(Error::InvalidProblem(format!("invalid base {base}")));
    }
    allocate(weights, house.into(), Signposts::new(rule, base))
}

/// Divisors reproducing a seat vector, as the half-open range `[d_min, d_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivisorInterval {
    ln_min: f64,
    ln_max: f64,
    nice: Decimal,
}

impl DivisorInterval {
    pub fn d_min(&self) -> f64 {
        self.ln_min.exp()
    }

    /// Positive infinity when no state holds a seat it had to earn.
    pub fn d_max(&self) -> f64 {
        self.ln_max.exp()
    }

    pub fn ln_min(&self) -> f64 {
        self.ln_min
    }

    pub fn ln_max(&self) -> f64 {
        self.ln_max
    }

    /// Fewest-digit decimal inside the interval.
    pub fn nice(&self) -> Decimal {
        self.nice
    }

    pub fn ln_nice(&self) -> f64 {
        self.nice.log10() * std::f64::consts::LN_10
    }

    pub fn contains(&self, divisor: f64) -> bool {
        let ln = divisor.ln();
        ln >= self.ln_min && ln < self.ln_max
    }

    pub fn contains_decimal(&self, d: Decimal) -> bool {
        let ln = d.log10() * std::f64::consts::LN_10;
        ln >= self.ln_min - TIE_TOLERANCE * self.ln_min.abs().max(1.0) && ln < self.ln_max
    }
}

/// Divisor interval of `vector` under shifted signposts.
pub fn interval_for(
    weights: &[LogWeight],
    vector: &SeatVector,
    signposts: Signposts,
) -> Result<DivisorInterval> {
    check_weights(weights)?;
    if weights.len() != vector.len() {
        return Err(Error::Mismatch(format!(
            "{} weights but {} seat entries",
            weights.len(),
            vector.len()
        )));
    }
    let free = signposts.free_seats();
    let mut ln_min = f64::NEG_INFINITY;
    let mut ln_max = f64::INFINITY;
    for (w, &x) in weights.iter().zip(vector.seats()) {
        if x < free {
            return Err(Error::Inconsistent("divisor"));
        }
        // Not earning seat x + 1 needs w / D <= s(x + 1).
        ln_min = ln_min.max(w.0 - signposts.ln_threshold(x + 1));
        // Earning seat x needs w / D > s(x), unless it is free.
        if x > free {
            ln_max = ln_max.min(w.0 - signposts.ln_threshold(x));
        }
    }
    if ln_min >= ln_max || log_close(ln_min, ln_max) {
        return Err(Error::Inconsistent("divisor"));
    }
    let ln10 = std::f64::consts::LN_10;
    let nice = nice_in_log10(ln_min / ln10, ln_max / ln10, UpperBound::Open)
        .ok_or(Error::Inconsistent("divisor"))?;
    Ok(DivisorInterval {
        ln_min,
        ln_max,
        nice,
    })
}

/// Divisor interval of a plain `rule`-apportionment.
pub fn divisor_interval(
    weights: &[LogWeight],
    vector: &SeatVector,
    rule: RoundingRule,
) -> Result<DivisorInterval> {
    interval_for(weights, vector, Signposts::new(rule, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::eu27;

    fn w(values: &[f64]) -> Vec<LogWeight> {
        values.iter().map(|&v| LogWeight::from_weight(v)).collect()
    }

    const ALL: [RoundingRule; 3] = [
        RoundingRule::Upward,
        RoundingRule::Standard,
        RoundingRule::Downward,
    ];

    #[test]
    fn symmetric_weights() {
        for rule in ALL {
            assert_eq!(
                apportion(&w(&[1., 1., 1.]), 3, rule).unwrap().seats(),
                &[1, 1, 1]
            );
        }
    }

    #[test]
    fn small_upward_example() {
        // Frozen from the brute-force oracle in tests/divisor_oracle.rs.
        let v = apportion(&w(&[10., 3., 1.]), 7, RoundingRule::Upward).unwrap();
        assert_eq!(v.seats(), &[4, 2, 1]);
    }

    #[test]
    fn eu27_linear_germany() {
        let weights = eu27().weights(1.0);
        let y = apportion(&weights, 616, RoundingRule::Upward).unwrap();
        assert_eq!(y[0], 99);
        assert_eq!(y.total(), 616);
    }

    #[test]
    fn upward_needs_a_seat_per_state() {
        let err = apportion(&w(&[3., 2., 1.]), 2, RoundingRule::Upward).unwrap_err();
        assert!(matches!(err, Error::Infeasible { required: 3, .. }));
        assert_eq!(
            apportion(&w(&[3., 2., 1.]), 0, RoundingRule::Downward)
                .unwrap()
                .seats(),
            &[0, 0, 0]
        );
    }

    #[test]
    fn tie_at_last_seat_is_an_error() {
        let err = apportion(&w(&[1., 1., 1.]), 2, RoundingRule::Downward).unwrap_err();
        assert_eq!(
            err,
            Error::Tie {
                states: vec![0, 1, 2]
            }
        );
        // Interior ties are harmless.
        let v = apportion(&w(&[2., 2., 1.]), 2, RoundingRule::Downward).unwrap();
        assert_eq!(v.seats(), &[1, 1, 0]);
        let err = apportion(&w(&[4., 2., 2.]), 5, RoundingRule::Upward).unwrap_err();
        assert!(matches!(err, Error::Tie { .. }));
    }

    #[test]
    fn interval_examples() {
        let weights = eu27().weights(1.0);
        let y = apportion(&weights, 616, RoundingRule::Upward).unwrap();
        let iv = divisor_interval(&weights, &y, RoundingRule::Upward).unwrap();
        assert!(iv.contains(830_000.0), "{} .. {}", iv.d_min(), iv.d_max());
        assert_eq!(iv.nice(), Decimal::new(83, 4));

        let weights = eu27().weights(0.9);
        let y = apportion(&weights, 616, RoundingRule::Upward).unwrap();
        let iv = divisor_interval(&weights, &y, RoundingRule::Upward).unwrap();
        assert!(iv.contains(146_960.0), "{} .. {}", iv.d_min(), iv.d_max());

        let ones = w(&[1., 1., 1.]);
        let iv =
            divisor_interval(&ones, &SeatVector::new(vec![1, 1, 1]), RoundingRule::Upward).unwrap();
        assert_eq!(iv.d_min(), 1.0);
        assert_eq!(iv.d_max(), f64::INFINITY);
        assert_eq!(iv.nice().to_f64(), 1.0);
    }

    #[test]
    fn interval_rejects_foreign_vectors() {
        let weights = w(&[10., 3., 1.]);
        let bad = SeatVector::new(vec![1, 2, 4]);
        assert_eq!(
            divisor_interval(&weights, &bad, RoundingRule::Upward).unwrap_err(),
            Error::Inconsistent("divisor")
        );
        let zero = SeatVector::new(vec![7, 0, 0]);
        assert!(divisor_interval(&weights, &zero, RoundingRule::Upward).is_err());
    }

    #[test]
    fn composite_single_state_takes_all() {
        for rule in ALL {
            let v = composite(&w(&[42.]), 10, 5.0, rule).unwrap();
            assert_eq!(v.seats(), &[10]);
        }
    }

    #[test]
    fn composite_matches_base_plus_apportion() {
        let weights = eu27().weights(1.0);
        let x = composite(&weights, 751, 5.0, RoundingRule::Upward).unwrap();
        let y = apportion(&weights, 616, RoundingRule::Upward).unwrap();
        assert_eq!(x, y.shifted(5));
        assert_eq!(&x.seats()[..4], &[104, 83, 80, 78]);
    }

    #[test]
    fn rounding_identity_on_eu27() {
        let weights = eu27().weights(1.0);
        let up = composite(&weights, 751, 5.0, RoundingRule::Upward).unwrap();
        let std = composite(&weights, 751, 5.5, RoundingRule::Standard).unwrap();
        let down = composite(&weights, 751, 6.0, RoundingRule::Downward).unwrap();
        assert_eq!(up, std);
        assert_eq!(up, down);
    }

    #[test]
    fn huge_weights_do_not_overflow() {
        let weights = eu27().weights(27.5);
        let y = apportion(&weights, 616, RoundingRule::Upward).unwrap();
        assert_eq!(y[0], 590);
        assert!(y.seats()[1..].iter().all(|&s| s == 1));
        let iv = divisor_interval(&weights, &y, RoundingRule::Upward).unwrap();
        assert!(iv.d_min().is_finite());
        assert_eq!(iv.nice().significant_digits(), 3);
    }

    #[test]
    fn free_seat_counts() {
        assert_eq!(Signposts::new(RoundingRule::Upward, 5.0).free_seats(), 6);
        assert_eq!(Signposts::new(RoundingRule::Standard, 5.5).free_seats(), 6);
        assert_eq!(Signposts::new(RoundingRule::Downward, 6.0).free_seats(), 6);
        assert_eq!(Signposts::new(RoundingRule::Downward, 0.0).free_seats(), 0);
        assert_eq!(Signposts::new(RoundingRule::Standard, 0.0).free_seats(), 0);
    }

    #[test]
    fn rule_parsing() {
        assert_eq!("up".parse::<RoundingRule>().unwrap(), RoundingRule::Upward);
        assert_eq!(
            "std".parse::<RoundingRule>().unwrap(),
            RoundingRule::Standard
        );
        assert_eq!(
            "down".parse::<RoundingRule>().unwrap(),
            RoundingRule::Downward
        );
        assert!("hh".parse::<RoundingRule>().is_err());
    }
}
