//! Power-weighted indices `p^E`: exponent-ranges, initial exponents and the
//! solver for the exponents that give the largest state a target.
//!
//! For a fixed seat vector, each ordered pair of states `(i, j)` with
//! `p_i != p_j` yields a critical exponent at which state `i` gaining a seat
//! from state `j` is exactly tied. The vector is constant between the
//! nearest critical exponents on either side of the one that produced it,
//! and crossing a boundary moves exactly one seat between the pair that
//! attains it (unless several pairs attain it at once).

use serde::Serialize;

use crate::divisor::{self, log_close, DivisorInterval, RoundingRule, Signposts};
use crate::error::{Error, Result};
use crate::model::{Roster, SeatVector};
use crate::nice::{nice_between, one_digit_above, one_digit_below, UpperBound};

/// Bracket searched by [`init_exponent`].
pub const INIT_BRACKET: (f64, f64) = (0.001, 40.0);
/// Absolute tolerance of [`init_exponent`].
pub const INIT_TOLERANCE: f64 = 1e-6;

/// `log(y_i / (y_j - 1)) / log(p_i / p_j)` for upward-rounded seats.
pub fn critical_exponent(p_i: u64, p_j: u64, y_i: u32, y_j: u32) -> Result<f64> {
    if p_i == p_j {
        return Err(Error::NoCriticalExponent("equal populations"));
    }
    if y_i < 1 {
        return Err(Error::NoCriticalExponent("y_i must be at least 1"));
    }
    if y_j < 2 {
        return Err(Error::NoCriticalExponent("y_j must be at least 2"));
    }
    Ok(pair_exponent(
        p_i,
        p_j,
        y_i,
        y_j,
        Signposts::new(RoundingRule::Upward, 0.0),
    ))
}

/// Critical exponent for shifted signposts: the tie between `i` earning seat
/// `x_i + 1` and `j` keeping seat `x_j`.
fn pair_exponent(p_i: u64, p_j: u64, x_i: u32, x_j: u32, sp: Signposts) -> f64 {
    let num = sp.threshold(x_i + 1).ln() - sp.threshold(x_j).ln();
    let den = (p_i as f64).ln() - (p_j as f64).ln();
    num / den
}

/// Maximal interval of exponents over which a seat vector is constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentRange {
    pub lower: f64,
    pub upper: f64,
    pub vector: SeatVector,
    /// Pairs `(i, j)` attaining the upper end; `i` gains from `j` above it.
    pub upper_pairs: Vec<(usize, usize)>,
    /// Pairs `(i, j)` attaining the lower end; `i` gains from `j` below it.
    pub lower_pairs: Vec<(usize, usize)>,
}

impl ExponentRange {
    /// The pair realising the upper end, when it is unique.
    pub fn boundary_tie(&self) -> Option<(usize, usize)> {
        match self.upper_pairs.as_slice() {
            [pair] => Some(*pair),
            _ => None,
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    /// Half-open membership: the upper end belongs to the next range.
    pub fn contains(&self, exponent: f64) -> bool {
        exponent >= self.lower && exponent < self.upper
    }

    /// Bounds at `places` decimals, lower rounded up and upper rounded down,
    /// so adjacent ranges print without overlap.
    pub fn display_bounds(&self, places: u32) -> (f64, f64) {
        let scale = 10f64.powi(places as i32);
        let lower = if self.lower == 0.0 {
            0.0
        } else {
            (self.lower * scale).ceil() / scale
        };
        let upper = if self.upper.is_infinite() {
            f64::INFINITY
        } else {
            (self.upper * scale).floor() / scale
        };
        (lower, upper)
    }
}

/// Exponent-range of an upward-rounded remaining-seat vector.
pub fn exponent_range(roster: &Roster, vector: &SeatVector) -> Result<ExponentRange> {
    exponent_range_with(roster, vector, Signposts::new(RoundingRule::Upward, 0.0))
}

/// Exponent-range of a vector apportioned under shifted signposts.
pub fn exponent_range_with(
    roster: &Roster,
    vector: &SeatVector,
    signposts: Signposts,
) -> Result<ExponentRange> {
    let pops: Vec<u64> = roster.populations().collect();
    if pops.len() != vector.len() {
        return Err(Error::Mismatch(format!(
            "{} states but {} seat entries",
            pops.len(),
            vector.len()
        )));
    }
    let x = vector.seats();
    let free = signposts.free_seats();
    if x.iter().any(|&s| s < free) {
        return Err(Error::Inconsistent("exponent"));
    }

    let mut upper = f64::INFINITY;
    let mut lower = 0.0;
    let mut upper_pairs = Vec::new();
    let mut lower_pairs = Vec::new();
    for (i, &p_i) in pops.iter().enumerate() {
        for (j, &p_j) in pops.iter().enumerate() {
            if i == j || x[j] <= free {
                continue;
            }
            if p_i == p_j {
                // Equal weights at every exponent: seats must agree.
                if x[i] != x[j] {
                    return Err(Error::Inconsistent("exponent"));
                }
                continue;
            }
            let e = pair_exponent(p_i, p_j, x[i], x[j], signposts);
            if p_i > p_j {
                let tighter = e < upper;
                tighten(&mut upper, &mut upper_pairs, e, (i, j), tighter);
            } else {
                let tighter = e > lower;
                tighten(&mut lower, &mut lower_pairs, e, (i, j), tighter);
            }
        }
    }
    if lower.partial_cmp(&upper) != Some(std::cmp::Ordering::Less) || log_close(lower, upper) {
        return Err(Error::Inconsistent("exponent"));
    }
    upper_pairs.sort_unstable();
    lower_pairs.sort_unstable();
    Ok(ExponentRange {
        lower,
        upper,
        vector: vector.clone(),
        upper_pairs,
        lower_pairs,
    })
}

/// Replaces `bound` when `e` is strictly tighter, or records another pair
/// attaining it.
fn tighten(
    bound: &mut f64,
    pairs: &mut Vec<(usize, usize)>,
    e: f64,
    pair: (usize, usize),
    tighter: bool,
) {
    if !pairs.is_empty() && log_close(e, *bound) {
        pairs.push(pair);
    } else if tighter {
        *bound = e;
        pairs.clear();
        pairs.push(pair);
    }
}

/// Presentable exponent for a range.
///
/// Bounded ranges get the fewest-digit decimal in `[lower, upper)`, nearest
/// the midpoint. The two extreme ranges are half-open, and their finite end
/// is a tie, so they get the one-digit decimal just inside that end.
pub fn nice_exponent(range: &ExponentRange) -> f64 {
    if range.upper.is_infinite() {
        return one_digit_above(range.lower).map_or(range.lower + 1.0, |d| d.to_f64());
    }
    if range.lower <= 0.0 {
        return one_digit_below(range.upper).map_or(0.5 * range.upper, |d| d.to_f64());
    }
    nice_between(range.lower, range.upper, UpperBound::Open)
        .map(|d| d.to_f64())
        .unwrap_or_else(|| range.midpoint())
}

/// Seat-bias of the largest of `n` states under upward rounding:
/// `-(H_n - 1) / 2`.
pub fn seat_bias_largest(n: usize) -> f64 {
    let harmonic: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
    -0.5 * (harmonic - 1.0)
}

/// Share of the largest state in `sum_i p_i^E`.
fn largest_share(ln_pops: &[f64], exponent: f64) -> f64 {
    let top = ln_pops[0];
    let denom: f64 = ln_pops.iter().map(|&l| (exponent * (l - top)).exp()).sum();
    1.0 / denom
}

/// Exponent at which the largest state's ideal share of `seats` is `target`.
///
/// With `bias_corrected` the target is raised by the magnitude of the
/// upward-rounding seat-bias of the largest state.
pub fn init_exponent(
    roster: &Roster,
    seats: u32,
    target: u32,
    bias_corrected: bool,
) -> Result<f64> {
    if roster.len() < 2 {
        return Err(Error::InvalidProblem("need at least two states".into()));
    }
    if target < 1 || target >= seats {
        return Err(Error::InvalidProblem(format!(
            "target {target} must lie in 1..{seats}"
        )));
    }
    let goal = if bias_corrected {
        f64::from(target) - seat_bias_largest(roster.len())
    } else {
        f64::from(target)
    };
    let ln_pops: Vec<f64> = roster.populations().map(|p| (p as f64).ln()).collect();
    let f = |e: f64| largest_share(&ln_pops, e) * f64::from(seats) - goal;

    let (mut lo, mut hi) = INIT_BRACKET;
    let (f_lo, f_hi) = (f(lo), f(hi));
    if f_lo.abs() < 1e-9 && f_hi.abs() < 1e-9 {
        return Ok(0.5 * (lo + hi));
    }
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(Error::Unattainable(format!(
            "share target {goal:.4} of {seats} not bracketed by exponents {lo}..{hi}"
        )));
    }
    while hi - lo > INIT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One visited range of the solver walk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    /// Representative exponent of the range.
    pub exponent: f64,
    pub range: ExponentRange,
    pub largest_seats: u32,
}

/// A range whose vector gives the largest state exactly the target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub exponent: f64,
    pub range: ExponentRange,
    pub divisor: DivisorInterval,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverTrace {
    pub init_exponent: f64,
    /// Visited ranges ordered by exponent; consecutive ranges abut.
    pub steps: Vec<TraceStep>,
    /// Solution ranges, ascending.
    pub solutions: Vec<Solution>,
    /// States sharing the largest population received differing seats.
    pub co_maximal_split: bool,
}

/// Crosses the upper end of `range`.
pub fn step_up(roster: &Roster, range: &ExponentRange) -> Result<ExponentRange> {
    cross(roster, range, Direction::Up)
}

/// Crosses the lower end of `range`.
pub fn step_down(roster: &Roster, range: &ExponentRange) -> Result<ExponentRange> {
    cross(roster, range, Direction::Down)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Up,
    Down,
}

/// Seat transfer at a range boundary.
///
/// At the boundary every pair `(i, j)` attaining it has `i`'s next seat and
/// `j`'s last seat at one common priority. Those `|{j}|` seats are shared
/// among all these slots, and just past the boundary the ordering of the
/// slots is the ordering of their populations (descending when moving up,
/// ascending when moving down). A single pair is the plain one-seat
/// transfer. Equal populations at the cut leave the transfer undetermined.
fn cross(roster: &Roster, range: &ExponentRange, direction: Direction) -> Result<ExponentRange> {
    let (at, pairs) = match direction {
        Direction::Up => (range.upper, &range.upper_pairs),
        Direction::Down => (range.lower, &range.lower_pairs),
    };
    if pairs.is_empty() || !at.is_finite() {
        return Err(Error::Unattainable(
            "no seat transfer beyond this exponent-range".into(),
        ));
    }
    let mut gainers: Vec<usize> = pairs.iter().map(|&(i, _)| i).collect();
    let mut holders: Vec<usize> = pairs.iter().map(|&(_, j)| j).collect();
    gainers.sort_unstable();
    gainers.dedup();
    holders.sort_unstable();
    holders.dedup();

    let pops: Vec<u64> = roster.populations().collect();
    let mut slots: Vec<usize> = gainers.iter().chain(&holders).copied().collect();
    match direction {
        Direction::Up => slots.sort_by(|&a, &b| pops[b].cmp(&pops[a])),
        Direction::Down => slots.sort_by(|&a, &b| pops[a].cmp(&pops[b])),
    }
    let keep = holders.len();
    if slots.len() > keep && pops[slots[keep - 1]] == pops[slots[keep]] {
        return Err(Error::AmbiguousTransfer {
            exponent: at,
            pairs: pairs.clone(),
        });
    }
    let winners = &slots[..keep];
    let mut seats = range.vector.seats().to_vec();
    for &j in holders.iter().filter(|j| !winners.contains(j)) {
        seats[j] -= 1;
    }
    for &i in gainers.iter().filter(|i| winners.contains(i)) {
        seats[i] += 1;
    }
    let mut next = exponent_range(roster, &SeatVector::new(seats))?;
    // Both sides compute the shared endpoint from the same tied pairs.
    match direction {
        Direction::Up => next.lower = at,
        Direction::Down => next.upper = at,
    }
    Ok(next)
}

fn trace_step(range: ExponentRange) -> TraceStep {
    TraceStep {
        exponent: nice_exponent(&range),
        largest_seats: range.vector[0],
        range,
    }
}

/// Finds every exponent-range in which the largest state (roster index 0)
/// receives exactly `target` of `seats` upward-rounded seats.
///
/// The walk starts at the bias-corrected initial exponent and crosses range
/// boundaries by explicit seat transfers (see [`step_up`]), never by
/// re-evaluating near a boundary.
pub fn solve_target(roster: &Roster, seats: u32, target: u32) -> Result<SolverTrace> {
    if target < 1 {
        return Err(Error::InvalidProblem("target must be at least 1".into()));
    }
    if roster.len() < 2 {
        return Err(Error::InvalidProblem("need at least two states".into()));
    }
    if target > seats + 1 - roster.len() as u32 {
        return Err(Error::Unattainable(format!(
            "largest state cannot hold {target} of {seats} seats"
        )));
    }
    let start = init_exponent(roster, seats, target, true)?;
    let y = divisor::apportion(&roster.weights(start), seats, RoundingRule::Upward)?;
    let first = exponent_range(roster, &y)?;

    let mut walk = std::collections::VecDeque::new();
    walk.push_back(first);
    loop {
        let front = walk.front().expect("nonempty");
        if front.vector[0] <= target {
            break;
        }
        let next = step_down(roster, front).map_err(|e| unattainable(e, target))?;
        walk.push_front(next);
    }
    loop {
        let back = walk.back().expect("nonempty");
        if back.vector[0] >= target {
            break;
        }
        let next = step_up(roster, back).map_err(|e| unattainable(e, target))?;
        walk.push_back(next);
    }
    if !walk.iter().any(|r| r.vector[0] == target) {
        return Err(Error::Unattainable(format!(
            "largest state jumps past {target} seats"
        )));
    }
    // Extend to the full run of solutions plus one neighbour on each side.
    while walk
        .front()
        .is_some_and(|r| r.vector[0] == target && r.lower > 0.0)
    {
        let next = step_down(roster, walk.front().expect("nonempty"))?;
        walk.push_front(next);
    }
    while walk
        .back()
        .is_some_and(|r| r.vector[0] == target && r.upper.is_finite())
    {
        let next = step_up(roster, walk.back().expect("nonempty"))?;
        walk.push_back(next);
    }

    let top = roster.states()[0].population;
    let co_maximal: Vec<usize> = roster
        .populations()
        .enumerate()
        .filter(|&(_, p)| p == top)
        .map(|(i, _)| i)
        .collect();

    let steps: Vec<TraceStep> = walk.into_iter().map(trace_step).collect();
    let mut solutions = Vec::new();
    let mut co_maximal_split = false;
    for step in steps.iter().filter(|s| s.largest_seats == target) {
        let exponent = step.exponent;
        let divisor = divisor::divisor_interval(
            &roster.weights(exponent),
            &step.range.vector,
            RoundingRule::Upward,
        )?;
        co_maximal_split |= co_maximal
            .iter()
            .any(|&i| step.range.vector[i] != step.range.vector[0]);
        solutions.push(Solution {
            exponent,
            range: step.range.clone(),
            divisor,
        });
    }
    Ok(SolverTrace {
        init_exponent: start,
        steps,
        solutions,
        co_maximal_split,
    })
}

fn unattainable(err: Error, target: u32) -> Error {
    match err {
        Error::Unattainable(_) => Error::Unattainable(format!(
            "no exponent gives the largest state {target} seats"
        )),
        other => other,
    }
}

/// Seat vector `y(E)` for the remaining seats, used by sweeps and checks.
pub fn remaining_vector(roster: &Roster, seats: u32, exponent: f64) -> Result<SeatVector> {
    divisor::apportion(&roster.weights(exponent), seats, RoundingRule::Upward)
}
