use std::fmt;
use std::str::FromStr;

use crate::report::Format;

/// One requested column of a comparison table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ColumnSpec {
    /// Capped composite with upward rounding at exponent 1.
    CamCom,
    /// Upward composite of the powered populations, without a cap.
    Power(f64),
    /// Composite at an exponent under the table's rounding rule.
    Composite(f64),
    /// The weighted population index `p^E`.
    Index(f64),
    /// Every cap-achieving power-weighted composition.
    Solve,
    StatusQuo,
    Parabolic,
}

impl ColumnSpec {
    /// Columns of the five-way comparison of the EU27 compositions.
    pub fn comparison() -> Vec<ColumnSpec> {
        vec![
            ColumnSpec::Index(0.91),
            ColumnSpec::Index(0.9),
            ColumnSpec::CamCom,
            ColumnSpec::Parabolic,
            ColumnSpec::Power(0.91),
            ColumnSpec::Power(0.9),
            ColumnSpec::StatusQuo,
        ]
    }
}

fn exponent(s: &str, what: &str) -> Result<f64, String> {
    let e: f64 = s
        .parse()
        .map_err(|_| format!("{what}: `{s}` is not a number"))?;
    if !(e.is_finite() && e > 0.0) {
        return Err(format!("{what}: exponent must be positive, got {s}"));
    }
    Ok(e)
}

impl FromStr for ColumnSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((kind, e)) = s.split_once(':') {
            return match kind {
                "power" | "x" => exponent(e, s).map(ColumnSpec::Power),
                "composite" => exponent(e, s).map(ColumnSpec::Composite),
                "index" => exponent(e, s).map(ColumnSpec::Index),
                _ => Err(format!("unknown column `{s}`")),
            };
        }
        match s {
            "camcom" | "cc" => Ok(ColumnSpec::CamCom),
            "solve" => Ok(ColumnSpec::Solve),
            "statusquo" | "now" => Ok(ColumnSpec::StatusQuo),
            "parabolic" | "par" => Ok(ColumnSpec::Parabolic),
            _ => Err(format!(
                "unknown column `{s}` (expected camcom, solve, statusquo, parabolic, power:E, composite:E or index:E)"
            )),
        }
    }
}

impl fmt::Display for ColumnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSpec::CamCom => write!(f, "camcom"),
            ColumnSpec::Power(e) => write!(f, "power:{e}"),
            ColumnSpec::Composite(e) => write!(f, "composite:{e}"),
            ColumnSpec::Index(e) => write!(f, "index:{e}"),
            ColumnSpec::Solve => write!(f, "solve"),
            ColumnSpec::StatusQuo => write!(f, "statusquo"),
            ColumnSpec::Parabolic => write!(f, "parabolic"),
        }
    }
}

/// What a table run should show and how.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportSpec {
    pub columns: Vec<ColumnSpec>,
    pub format: Format,
    /// Decimal places for exponents and divisors.
    pub precision: usize,
}

impl ReportSpec {
    pub fn new(columns: Vec<ColumnSpec>, format: Format, precision: usize) -> Result<Self, String> {
        if columns.is_empty() {
            return Err("at least one column is required".into());
        }
        if precision < 1 {
            return Err("precision must be at least 1".into());
        }
        Ok(ReportSpec {
            columns,
            format,
            precision,
        })
    }
}
