//! Domain types shared by all algorithms.
//!
//! A [`Roster`] is always sorted by population, largest first, so index 0 is
//! the largest state. Seat vectors are aligned with that order.

use std::collections::HashSet;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named polity with a positive integer population.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MemberState {
    pub code: String,
    pub name: String,
    pub population: u64,
}

impl MemberState {
    pub fn new(code: impl Into<String>, name: impl Into<String>, population: u64) -> Self {
        Self {
            code: code.into(),
            name: name.into(),
            population,
        }
    }
}

/// States ordered by population descending, ties by code ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Roster {
    states: Vec<MemberState>,
}

impl Roster {
    /// Validates and sorts `states`. Input order does not matter.
    pub fn new(mut states: Vec<MemberState>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::EmptyRoster);
        }
        let mut seen = HashSet::with_capacity(states.len());
        for (line, s) in states.iter().enumerate() {
            if s.code.is_empty() {
                return Err(Error::EmptyCode { line: line + 1 });
            }
            if s.population == 0 {
                return Err(Error::InvalidPopulation {
                    code: s.code.clone(),
                    value: "0".into(),
                });
            }
            if !seen.insert(s.code.as_str()) {
                return Err(Error::DuplicateCode(s.code.clone()));
            }
        }
        states.sort_by(|a, b| {
            b.population
                .cmp(&a.population)
                .then_with(|| a.code.cmp(&b.code))
        });
        Ok(Self { states })
    }

    /// Builds a roster from `(code, population)` pairs, using the code as name.
    pub fn from_populations<S: AsRef<str>>(pairs: &[(S, u64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(c, p)| MemberState::new(c.as_ref(), c.as_ref(), *p))
                .collect(),
        )
    }

    pub fn states(&self) -> &[MemberState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn populations(&self) -> impl ExactSizeIterator<Item = u64> + '_ {
        self.states.iter().map(|s| s.population)
    }

    pub fn total_population(&self) -> u64 {
        self.populations().sum()
    }

    pub fn index_of(&self, code: &str) -> Option<usize> {
        self.states.iter().position(|s| s.code == code)
    }

    /// Power-weighted indices `p^exponent`, stored as logarithms.
    pub fn weights(&self, exponent: f64) -> Vec<crate::divisor::LogWeight> {
        self.populations()
            .map(|p| crate::divisor::LogWeight::from_power(p, exponent))
            .collect()
    }
}

#[derive(Debug, Deserialize)]
struct RosterRecord {
    code: String,
    name: String,
    population: String,
}

fn parse_population(code: &str, raw: &str) -> Result<u64> {
    let digits = raw.trim();
    let invalid = || Error::InvalidPopulation {
        code: code.to_string(),
        value: raw.to_string(),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(invalid());
    }
    match digits.parse::<u64>() {
        Ok(0) | Err(_) => Err(invalid()),
        Ok(p) => Ok(p),
    }
}

/// Reads a `code,name,population` table. Populations are plain digit strings.
pub fn load_roster<R: Read>(source: R) -> Result<Roster> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| Error::Malformed(e.to_string()))?
        .clone();
    let expected = ["code", "name", "population"];
    if headers.len() != expected.len() || headers.iter().zip(expected).any(|(h, e)| h != e) {
        return Err(Error::Malformed(format!(
            "expected header `code,name,population`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut states = Vec::new();
    for (line, record) in reader.deserialize::<RosterRecord>().enumerate() {
        let rec = record.map_err(|e| Error::Malformed(e.to_string()))?;
        if rec.code.is_empty() {
            return Err(Error::EmptyCode { line: line + 1 });
        }
        let population = parse_population(&rec.code, &rec.population)?;
        states.push(MemberState::new(rec.code, rec.name, population));
    }
    Roster::new(states)
}

pub fn load_roster_str(text: &str) -> Result<Roster> {
    load_roster(text.as_bytes())
}

/// The full input to a composite apportionment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApportionmentProblem {
    pub roster: Roster,
    pub house_size: u32,
    pub base_seats: u32,
    pub cap: u32,
    pub exponent: f64,
}

impl ApportionmentProblem {
    pub const DEFAULT_HOUSE: u32 = 751;
    pub const DEFAULT_BASE: u32 = 5;
    pub const DEFAULT_CAP: u32 = 96;

    pub fn new(roster: Roster) -> Self {
        Self {
            roster,
            house_size: Self::DEFAULT_HOUSE,
            base_seats: Self::DEFAULT_BASE,
            cap: Self::DEFAULT_CAP,
            exponent: 1.0,
        }
    }

    pub fn with_house(mut self, house_size: u32) -> Self {
        self.house_size = house_size;
        self
    }

    pub fn with_base(mut self, base_seats: u32) -> Self {
        self.base_seats = base_seats;
        self
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_exponent(mut self, exponent: f64) -> Self {
        self.exponent = exponent;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.roster.len() as u64;
        let floor = (u64::from(self.base_seats) + 1) * n;
        if u64::from(self.house_size) < floor {
            return Err(Error::Infeasible {
                seats: self.house_size.into(),
                required: floor,
                states: self.roster.len(),
            });
        }
        if self.cap <= self.base_seats {
            return Err(Error::InvalidProblem(format!(
                "cap {} must exceed base seats {}",
                self.cap, self.base_seats
            )));
        }
        if !(self.exponent.is_finite() && self.exponent > 0.0) {
            return Err(Error::InvalidProblem(format!(
                "exponent must be positive, got {}",
                self.exponent
            )));
        }
        Ok(())
    }

    /// Seats left after every state has its base seats.
    pub fn remaining_seats(&self) -> u32 {
        self.house_size - self.base_seats * self.roster.len() as u32
    }
}

/// Integer seats per state, aligned with a roster.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SeatVector {
    seats: Vec<u32>,
    total: u64,
}

impl SeatVector {
    pub fn new(seats: Vec<u32>) -> Self {
        let total = seats.iter().map(|&s| u64::from(s)).sum();
        Self { seats, total }
    }

    pub fn seats(&self) -> &[u32] {
        &self.seats
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.seats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seats.is_empty()
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.seats
    }

    /// Adds `offset` seats to every entry.
    pub fn shifted(&self, offset: u32) -> Self {
        Self::new(self.seats.iter().map(|s| s + offset).collect())
    }

    /// Subtracts `offset` from every entry; `None` if any entry would go negative.
    pub fn unshifted(&self, offset: u32) -> Option<Self> {
        self.seats
            .iter()
            .map(|s| s.checked_sub(offset))
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }
}

impl std::ops::Index<usize> for SeatVector {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.seats[i]
    }
}

impl From<Vec<u32>> for SeatVector {
    fn from(seats: Vec<u32>) -> Self {
        Self::new(seats)
    }
}
