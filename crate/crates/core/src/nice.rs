//! Selection of presentable decimals inside an interval.
//!
//! A candidate with `s` significant digits in decade `m` is a multiple of
//! `10^(m - s + 1)`. Candidates are searched by increasing `s`; among those
//! with the fewest digits the one nearest the midpoint wins, ties going to
//! the smaller value. Bounds are passed as base-10 logarithms so that
//! intervals far beyond the `f64` range are still handled.

use std::fmt;

use serde::Serialize;

const MAX_DIGITS: i32 = 17;
const MAX_DECADES: i32 = 40;

/// `mantissa * 10^exponent`, with no trailing zeros in the mantissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Decimal {
    pub mantissa: u64,
    pub exponent: i32,
}

impl Decimal {
    pub fn new(mut mantissa: u64, mut exponent: i32) -> Self {
        if mantissa == 0 {
            return Self {
                mantissa: 0,
                exponent: 0,
            };
        }
        while mantissa.is_multiple_of(10) {
            mantissa /= 10;
            exponent += 1;
        }
        Self { mantissa, exponent }
    }

    pub fn significant_digits(&self) -> u32 {
        self.mantissa.checked_ilog10().map_or(1, |d| d + 1)
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.mantissa as f64;
        if self.exponent >= 0 {
            m * 10f64.powi(self.exponent)
        } else {
            m / 10f64.powi(-self.exponent)
        }
    }

    /// Base-10 logarithm of the value.
    pub fn log10(&self) -> f64 {
        (self.mantissa as f64).log10() + f64::from(self.exponent)
    }
}

impl fmt::Display for Decimal {
    /// Plain positional notation for moderate magnitudes, `d.ddde±x` beyond.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.mantissa.to_string();
        let magnitude = self.exponent + digits.len() as i32 - 1;
        if !(-6..=15).contains(&magnitude) {
            let (head, tail) = digits.split_at(1);
            return if tail.is_empty() {
                write!(f, "{head}e{magnitude}")
            } else {
                write!(f, "{head}.{tail}e{magnitude}")
            };
        }
        if self.exponent >= 0 {
            write!(f, "{digits}{}", "0".repeat(self.exponent as usize))
        } else {
            let frac = (-self.exponent) as usize;
            if digits.len() > frac {
                let (int, dec) = digits.split_at(digits.len() - frac);
                write!(f, "{int}.{dec}")
            } else {
                write!(f, "0.{}{digits}", "0".repeat(frac - digits.len()))
            }
        }
    }
}

/// Whether the upper bound itself may be chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperBound {
    Open,
    Closed,
}

/// Fewest-digit decimal in `[10^lo10, 10^hi10)` (or `]` when `upper` is closed).
///
/// An infinite `hi10` selects the smallest fewest-digit decimal `>= 10^lo10`.
/// Returns `None` for an empty interval.
pub fn nice_in_log10(lo10: f64, hi10: f64, upper: UpperBound) -> Option<Decimal> {
    if lo10.is_nan() || hi10.is_nan() || lo10 > hi10 {
        return None;
    }
    if hi10.is_infinite() {
        return round_up_one_digit(lo10);
    }
    let top = hi10.floor() as i32;
    // Work relative to 10^top so every value sits below 10.
    let lo = if lo10 == f64::NEG_INFINITY {
        0.0
    } else {
        10f64.powf(lo10 - f64::from(top))
    };
    let hi = 10f64.powf(hi10 - f64::from(top));
    let inside = |v: f64| {
        v >= lo
            && match upper {
                UpperBound::Open => v < hi,
                UpperBound::Closed => v <= hi,
            }
    };
    if lo == hi && upper == UpperBound::Open {
        return None;
    }
    let mid = 0.5 * (lo + hi);
    let bottom = if lo > 0.0 {
        (lo10.floor() as i32).max(top - MAX_DECADES)
    } else {
        top - MAX_DECADES
    };

    for digits in 1..=MAX_DIGITS {
        let mut best: Option<(f64, u64, i32)> = None;
        for decade in (bottom..=top).rev() {
            let q = decade - digits + 1;
            let step = 10f64.powi(q - top);
            let decade_lo = 10f64.powi(decade - top);
            let in_decade = |v: f64| v >= decade_lo && v < 10.0 * decade_lo && inside(v);
            let a = lo.max(decade_lo);
            let b = hi.min(10.0 * decade_lo);
            if a > b {
                continue;
            }
            let mut first = ((a / step).ceil().max(1.0)) as u64;
            while first > 1 && in_decade(scaled(first - 1, q, top)) {
                first -= 1;
            }
            while !in_decade(scaled(first, q, top)) && scaled(first, q, top) < a {
                first += 1;
            }
            let mut last = (b / step).floor().max(1.0) as u64;
            while last > first && !in_decade(scaled(last, q, top)) {
                last -= 1;
            }
            while in_decade(scaled(last + 1, q, top)) {
                last += 1;
            }
            if first > last || !in_decade(scaled(first, q, top)) {
                continue;
            }
            let near = ((mid / step).round().max(1.0) as u64).clamp(first, last);
            for c in [near.saturating_sub(1), near, near + 1] {
                if c < first || c > last {
                    continue;
                }
                let v = scaled(c, q, top);
                let dist = (v - mid).abs();
                let better = match best {
                    None => true,
                    Some((bd, bc, bq)) => {
                        if approx_eq(dist, bd) {
                            v < scaled(bc, bq, top)
                        } else {
                            dist < bd
                        }
                    }
                };
                if better {
                    best = Some((dist, c, q));
                }
            }
        }
        if let Some((_, c, q)) = best {
            return Some(Decimal::new(c, q));
        }
    }
    None
}

fn scaled(c: u64, q: i32, top: i32) -> f64 {
    let e = q - top;
    if e >= 0 {
        c as f64 * 10f64.powi(e)
    } else {
        c as f64 / 10f64.powi(-e)
    }
}

fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
}

fn round_up_one_digit(lo10: f64) -> Option<Decimal> {
    if !lo10.is_finite() {
        return None;
    }
    let decade = lo10.floor() as i32;
    let lead = 10f64.powf(lo10 - f64::from(decade));
    let d = lead.ceil() as u64;
    let mut candidate = Decimal::new(d.max(1), decade);
    // Rounding can put 10^lo10 a hair above its true value.
    if d > 1 && (Decimal::new(d - 1, decade).log10() - lo10).abs() <= 1e-12 {
        candidate = Decimal::new(d - 1, decade);
    }
    Some(candidate)
}

/// Smallest one-digit decimal strictly above `lo > 0`.
pub fn one_digit_above(lo: f64) -> Option<Decimal> {
    if !(lo > 0.0 && lo.is_finite()) {
        return None;
    }
    let d = round_up_one_digit(lo.log10())?;
    if d.to_f64() > lo {
        Some(d)
    } else {
        Some(Decimal::new(d.mantissa + 1, d.exponent))
    }
}

/// Largest one-digit decimal strictly below `hi > 0`.
pub fn one_digit_below(hi: f64) -> Option<Decimal> {
    if !(hi > 0.0 && hi.is_finite()) {
        return None;
    }
    let decade = hi.log10().floor() as i32;
    [decade - 1, decade, decade + 1]
        .into_iter()
        .flat_map(|e| (1..=9u64).map(move |k| Decimal::new(k, e)))
        .filter(|d| d.to_f64() < hi)
        .max_by(|a, b| a.to_f64().total_cmp(&b.to_f64()))
}

/// Fewest-digit decimal in `[lo, hi)` for ordinary finite reals.
pub fn nice_between(lo: f64, hi: f64, upper: UpperBound) -> Option<Decimal> {
    if lo < 0.0 || lo.is_nan() {
        return None;
    }
    // log10(0) is -inf, which the search treats as "no lower decade limit".
    nice_in_log10(lo.log10(), hi.log10(), upper)
}
