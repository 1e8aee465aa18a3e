//! Test-only oracles. They evaluate divisor methods directly from their
//! rounding definition with plain `f64` weights, sharing nothing with the
//! log-domain highest-averages implementation.

#![allow(dead_code)]

use camcom_core::divisor::RoundingRule;

/// `round_rule(base + q)` with the rounding written out explicitly.
pub fn round_composite(rule: RoundingRule, base: f64, q: f64) -> i64 {
    let v = base + q;
    match rule {
        RoundingRule::Upward => v.ceil() as i64,
        RoundingRule::Standard => (v + 0.5).floor() as i64,
        RoundingRule::Downward => v.floor() as i64,
    }
}

fn seats_at(weights: &[f64], d: f64, base: f64, rule: RoundingRule) -> Vec<i64> {
    weights
        .iter()
        .map(|&w| round_composite(rule, base, w / d))
        .collect()
}

/// Divisors at which some state's rounded seat count changes.
fn breakpoints(weights: &[f64], total: u64, base: f64, rule: RoundingRule) -> Vec<f64> {
    let offset = match rule {
        RoundingRule::Upward => 1.0,
        RoundingRule::Standard => 0.5,
        RoundingRule::Downward => 0.0,
    };
    let mut points = Vec::new();
    for &w in weights {
        for k in 1..=total + 1 {
            let s = k as f64 - offset - base;
            if s > 0.0 {
                points.push(w / s);
            }
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup();
    points
}

/// Scans one divisor strictly between each pair of consecutive breakpoints
/// (and beyond both ends). Returns the unique vector summing to `total`, or
/// `None` when no divisor or more than one vector works (a tie).
pub fn exhaustive_scan(
    weights: &[f64],
    total: u64,
    base: f64,
    rule: RoundingRule,
) -> Option<Vec<u32>> {
    let points = breakpoints(weights, total, base, rule);
    let mut probes: Vec<f64> = points.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    if let (Some(&first), Some(&last)) = (points.first(), points.last()) {
        probes.push(0.5 * first);
        probes.push(2.0 * last);
    } else {
        probes.push(1.0);
    }
    let mut found: Option<Vec<i64>> = None;
    for d in probes {
        let v = seats_at(weights, d, base, rule);
        if v.iter().sum::<i64>() == total as i64 {
            match &found {
                Some(prev) if *prev != v => return None,
                _ => found = Some(v),
            }
        }
    }
    found.map(|v| v.into_iter().map(|s| s as u32).collect())
}

/// Bisection on the divisor until the rounded seats sum to `total`.
pub fn divisor_bisection(
    weights: &[f64],
    total: u64,
    base: f64,
    rule: RoundingRule,
) -> Option<Vec<u32>> {
    let sum = |d: f64| seats_at(weights, d, base, rule).iter().sum::<i64>();
    let (mut lo, mut hi) = (1e-12f64, 1e12f64);
    for _ in 0..400 {
        let mid = (lo * hi).sqrt();
        let s = sum(mid);
        if s == total as i64 {
            return Some(
                seats_at(weights, mid, base, rule)
                    .into_iter()
                    .map(|x| x as u32)
                    .collect(),
            );
        }
        // More seats at smaller divisors.
        if s > total as i64 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    None
}

/// Highest-averages iteration with plain quotients `w / s(k)`.
pub fn plain_highest_averages(weights: &[f64], seats: u32, rule: RoundingRule) -> Option<Vec<u32>> {
    let offset = match rule {
        RoundingRule::Upward => 1.0,
        RoundingRule::Standard => 0.5,
        RoundingRule::Downward => 0.0,
    };
    let mut x = vec![0u32; weights.len()];
    let prio = |w: f64, k: u32| {
        let s = f64::from(k) - offset;
        if s <= 0.0 {
            f64::INFINITY
        } else {
            w / s
        }
    };
    let mut last = f64::INFINITY;
    for _ in 0..seats {
        let (i, p) = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| (i, prio(w, x[i] + 1)))
            .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
        last = p;
        x[i] += 1;
    }
    let next = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| prio(w, x[i] + 1))
        .fold(f64::NEG_INFINITY, f64::max);
    if last.is_finite() && (last - next).abs() <= 1e-12 * last.abs() {
        return None;
    }
    Some(x)
}
