//! Batch evaluation over exponent grids and problem sets.
//!
//! With the `parallel` feature (default) [`Execution::Parallel`] runs on the
//! rayon global pool; without it every batch runs sequentially.

use crate::divisor::{self, RoundingRule};
use crate::error::Result;
use crate::model::{Roster, SeatVector};
use crate::powerlaw::{self, ExponentRange};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Order-preserving map over `items`.
pub fn map<T, U, F>(exec: Execution, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Composite apportionment of `house` at every exponent of `grid`.
pub fn composite_grid(
    roster: &Roster,
    house: u32,
    base: f64,
    rule: RoundingRule,
    grid: &[f64],
    exec: Execution,
) -> Vec<Result<SeatVector>> {
    map(exec, grid, |&e| {
        divisor::composite(&roster.weights(e), house, base, rule)
    })
}

/// Seats of the largest state under upward rounding at every exponent.
/// Exponents that land on a tie yield `None`.
pub fn largest_profile(
    roster: &Roster,
    seats: u32,
    grid: &[f64],
    exec: Execution,
) -> Vec<Option<u32>> {
    map(exec, grid, |&e| {
        powerlaw::remaining_vector(roster, seats, e)
            .ok()
            .map(|y| y[0])
    })
}

/// Exponent-range of the upward apportionment at every exponent of `grid`.
pub fn range_grid(
    roster: &Roster,
    seats: u32,
    grid: &[f64],
    exec: Execution,
) -> Vec<Result<ExponentRange>> {
    map(exec, grid, |&e| {
        let y = powerlaw::remaining_vector(roster, seats, e)?;
        powerlaw::exponent_range(roster, &y)
    })
}

/// `n` evenly spaced exponents from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|k| start + (end - start) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}
