//! Composite methods built on the divisor and power-law machinery.
//!
//! * [`camcom_apportion`]: base seats plus upward rounding, with states above
//!   the cap fixed at the cap and the remainder re-apportioned among the
//!   rest until nobody exceeds it.
//! * [`power_variant`]: run the composite first; only when the largest state
//!   overshoots the cap, search the exponents that give it exactly the cap.
//! * Audits: degressive proportionality, majorization, and the rounding-rule
//!   identity `5 + Upw = 5.5 + Std = 6 + Dwn`.

use serde::Serialize;

use crate::divisor::{self, interval_for, DivisorInterval, LogWeight, RoundingRule, Signposts};
use crate::error::{Error, Result};
use crate::model::{ApportionmentProblem, Roster, SeatVector};
use crate::powerlaw::{self, ExponentRange};

/// A full house composition with the divisor that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Composition {
    pub problem: ApportionmentProblem,
    /// Total seats per state, base seats included.
    pub seats: SeatVector,
    /// Unrounded `base + w_i / D` at the nice divisor. Capped states hold the
    /// cap itself, since they take no part in the final apportionment.
    pub quotients: Vec<f64>,
    /// Roster indices fixed at the cap, in the order they were capped.
    pub capped: Vec<usize>,
    pub exponent_used: Option<f64>,
    /// Divisor interval of the final apportionment among uncapped states.
    pub divisor: DivisorInterval,
    /// Exponent-range of the remaining-seat vector, for uncapped results.
    pub exponent_range: Option<ExponentRange>,
}

impl Composition {
    pub fn largest_seats(&self) -> u32 {
        self.seats[0]
    }
}

fn quotients(
    weights: &[LogWeight],
    divisor: &DivisorInterval,
    base: f64,
    active: &[usize],
    n: usize,
    cap: u32,
) -> Vec<f64> {
    let ln_d = divisor.ln_nice();
    let mut q = vec![f64::from(cap); n];
    for (k, &i) in active.iter().enumerate() {
        q[i] = base + (weights[k].ln() - ln_d).exp();
    }
    q
}

/// Composite apportionment at the problem's exponent with iterative capping.
pub fn capped_composite(problem: &ApportionmentProblem, rule: RoundingRule) -> Result<Composition> {
    problem.validate()?;
    let n = problem.roster.len();
    if (n as u64) * u64::from(problem.cap) < u64::from(problem.house_size) {
        return Err(Error::CapInfeasible {
            states: n,
            cap: problem.cap,
            house: problem.house_size,
        });
    }
    let all = problem.roster.weights(problem.exponent);
    let base = f64::from(problem.base_seats);
    let signposts = Signposts::new(rule, base);

    let mut active: Vec<usize> = (0..n).collect();
    let mut capped = Vec::new();
    let mut house = problem.house_size;
    loop {
        let weights: Vec<LogWeight> = active.iter().map(|&i| all[i]).collect();
        let sub = divisor::allocate(&weights, house.into(), signposts)?;
        let violators: Vec<usize> = active
            .iter()
            .zip(sub.seats())
            .filter(|(_, &x)| x > problem.cap)
            .map(|(&i, _)| i)
            .collect();
        if violators.is_empty() {
            let mut seats = vec![problem.cap; n];
            for (&i, &x) in active.iter().zip(sub.seats()) {
                seats[i] = x;
            }
            let divisor = interval_for(&weights, &sub, signposts)?;
            let exponent_range = if capped.is_empty() {
                powerlaw::exponent_range_with(&problem.roster, &sub, signposts).ok()
            } else {
                None
            };
            return Ok(Composition {
                quotients: quotients(&weights, &divisor, base, &active, n, problem.cap),
                problem: problem.clone(),
                seats: SeatVector::new(seats),
                capped,
                exponent_used: Some(problem.exponent),
                divisor,
                exponent_range,
            });
        }
        house -= problem.cap * violators.len() as u32;
        active.retain(|i| !violators.contains(i));
        capped.extend(violators);
    }
}

/// Base seats, upward rounding of the rest, and a cap enforced by
/// re-apportioning the seats it frees.
pub fn camcom_apportion(problem: &ApportionmentProblem) -> Result<Composition> {
    capped_composite(problem, RoundingRule::Upward)
}

/// Composite apportionment without any capping step.
pub fn uncapped(problem: &ApportionmentProblem, rule: RoundingRule) -> Result<Composition> {
    let relaxed = problem
        .clone()
        .with_cap(u32::MAX / (problem.roster.len() as u32).max(1));
    let mut c = capped_composite(&relaxed, rule)?;
    c.problem = problem.clone();
    Ok(c)
}

/// Outcome of the two-step power-weighted protocol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerVariant {
    /// True when the plain composite already respects the cap.
    pub cap_slack: bool,
    /// Compositions ordered by exponent, ascending.
    pub compositions: Vec<Composition>,
    pub trace: Option<powerlaw::SolverTrace>,
}

/// Power-weighted variant: the plain composite if it respects the cap,
/// otherwise every composition whose exponent gives the largest state
/// exactly the cap. No capping step is applied.
pub fn power_variant(problem: &ApportionmentProblem) -> Result<Vec<Composition>> {
    power_variant_detailed(problem).map(|p| p.compositions)
}

pub fn power_variant_detailed(problem: &ApportionmentProblem) -> Result<PowerVariant> {
    problem.validate()?;
    let plain = uncapped(problem, RoundingRule::Upward)?;
    if plain.seats.seats().iter().all(|&x| x <= problem.cap) {
        return Ok(PowerVariant {
            cap_slack: true,
            compositions: vec![plain],
            trace: None,
        });
    }
    let base = problem.base_seats;
    let trace = powerlaw::solve_target(
        &problem.roster,
        problem.remaining_seats(),
        problem.cap - base,
    )?;
    let n = problem.roster.len();
    let all: Vec<usize> = (0..n).collect();
    let compositions = trace
        .solutions
        .iter()
        .map(|sol| {
            let weights = problem.roster.weights(sol.exponent);
            Composition {
                quotients: quotients(
                    &weights,
                    &sol.divisor,
                    f64::from(base),
                    &all,
                    n,
                    problem.cap,
                ),
                problem: problem.clone().with_exponent(sol.exponent),
                seats: sol.range.vector.shifted(base),
                capped: Vec::new(),
                exponent_used: Some(sol.exponent),
                divisor: sol.divisor,
                exponent_range: Some(sol.range.clone()),
            }
        })
        .collect();
    Ok(PowerVariant {
        cap_slack: false,
        compositions,
        trace: Some(trace),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    /// Larger state has fewer seats.
    SeatOrder,
    /// Larger state has fewer persons per seat.
    SeatRatio,
    /// Larger state has fewer persons per unrounded quotient.
    QuotientRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub larger: usize,
    pub smaller: usize,
    pub comparison: Comparison,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegressivityReport {
    pub holds_on_seats: bool,
    pub holds_on_quotients: bool,
    pub seat_violations: Vec<Violation>,
    pub quotient_violations: Vec<Violation>,
}

const RATIO_TOLERANCE: f64 = 1e-12;

/// Checks `p_i > p_j => x_i >= x_j and p_i/x_i >= p_j/x_j` on seats, and
/// `p_i/q_i >= p_j/q_j` on the unrounded quotients.
pub fn check_degressive(composition: &Composition) -> DegressivityReport {
    let pops: Vec<f64> = composition
        .problem
        .roster
        .populations()
        .map(|p| p as f64)
        .collect();
    let x = composition.seats.seats();
    let q = &composition.quotients;
    let at_least = |a: f64, b: f64| a >= b * (1.0 - RATIO_TOLERANCE);
    let mut seat_violations = Vec::new();
    let mut quotient_violations = Vec::new();
    for i in 0..pops.len() {
        for j in 0..pops.len() {
            if pops[i] <= pops[j] {
                continue;
            }
            let v = |comparison| Violation {
                larger: i,
                smaller: j,
                comparison,
            };
            if x[i] < x[j] {
                seat_violations.push(v(Comparison::SeatOrder));
            }
            if !at_least(pops[i] / f64::from(x[i]), pops[j] / f64::from(x[j])) {
                seat_violations.push(v(Comparison::SeatRatio));
            }
            if !at_least(pops[i] / q[i], pops[j] / q[j]) {
                quotient_violations.push(v(Comparison::QuotientRatio));
            }
        }
    }
    DegressivityReport {
        holds_on_seats: seat_violations.is_empty(),
        holds_on_quotients: quotient_violations.is_empty(),
        seat_violations,
        quotient_violations,
    }
}

/// How `a` relates to `b` under partial sums over the k largest states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Majorization {
    Equal,
    /// `a` is majorized by `b`.
    MajorizedBy,
    /// `a` majorizes `b`.
    Majorizes,
    Incomparable,
}

/// Compares roster-aligned vectors by their prefix sums.
pub fn majorization_compare(a: &SeatVector, b: &SeatVector) -> Result<Majorization> {
    if a.len() != b.len() {
        return Err(Error::Mismatch(format!(
            "lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.total() != b.total() {
        return Err(Error::Mismatch(format!(
            "totals {} and {}",
            a.total(),
            b.total()
        )));
    }
    let (mut sa, mut sb) = (0u64, 0u64);
    let (mut below, mut above) = (false, false);
    for (&x, &y) in a.seats().iter().zip(b.seats()) {
        sa += u64::from(x);
        sb += u64::from(y);
        below |= sa < sb;
        above |= sa > sb;
    }
    Ok(match (below, above) {
        (false, false) => Majorization::Equal,
        (true, false) => Majorization::MajorizedBy,
        (false, true) => Majorization::Majorizes,
        (true, true) => Majorization::Incomparable,
    })
}

/// The three composites compared by [`identity_report`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub exponent: f64,
    pub upward: SeatVector,
    pub standard: SeatVector,
    pub downward: SeatVector,
    pub holds: bool,
}

/// Computes `5 + Upw`, `5.5 + Std` and `6 + Dwn` on `p^exponent`.
pub fn identity_report(roster: &Roster, house_size: u32, exponent: f64) -> Result<IdentityReport> {
    let weights = roster.weights(exponent);
    let upward = divisor::composite(&weights, house_size, 5.0, RoundingRule::Upward)?;
    let standard = divisor::composite(&weights, house_size, 5.5, RoundingRule::Standard)?;
    let downward = divisor::composite(&weights, house_size, 6.0, RoundingRule::Downward)?;
    let holds = upward == standard && standard == downward;
    Ok(IdentityReport {
        exponent,
        upward,
        standard,
        downward,
        holds,
    })
}

/// Whether `5 + Upw = 5.5 + Std = 6 + Dwn` on the unweighted populations.
pub fn identity_check(roster: &Roster, house_size: u32) -> Result<bool> {
    identity_report(roster, house_size, 1.0).map(|r| r.holds)
}
