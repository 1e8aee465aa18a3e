use camcom_core::camcom::{
    camcom_apportion, capped_composite, check_degressive, power_variant_detailed, uncapped,
    Composition, Violation,
};
use camcom_core::data::StaticComposition;
use camcom_core::divisor::{DivisorInterval, RoundingRule};
use camcom_core::model::{ApportionmentProblem, Roster};
use camcom_core::powerlaw::{nice_exponent, ExponentRange};

use crate::columns::{ColumnSpec, ReportSpec};
use crate::report::{Cell, Note, Report};
use crate::{method_error, ApportionArgs, CliError, Pick, SolveArgs, TableArgs};

fn rule_name(rule: RoundingRule) -> &'static str {
    match rule {
        RoundingRule::Upward => "up",
        RoundingRule::Standard => "std",
        RoundingRule::Downward => "down",
    }
}

fn rule_label(rule: RoundingRule) -> &'static str {
    match rule {
        RoundingRule::Upward => "Upw",
        RoundingRule::Standard => "Std",
        RoundingRule::Downward => "Dwn",
    }
}

fn identity_cells(roster: &Roster) -> Vec<Vec<Cell>> {
    roster
        .states()
        .iter()
        .map(|s| {
            vec![
                Cell::text(&s.code),
                Cell::text(&s.name),
                Cell::Int(s.population),
            ]
        })
        .collect()
}

fn sum_cells(roster: &Roster) -> Vec<Cell> {
    vec![
        Cell::text("Sum"),
        Cell::Blank,
        Cell::Int(roster.total_population()),
    ]
}

fn divisor_note(key: String, d: &DivisorInterval, places: usize) -> Note {
    Note::new(key)
        .with("min", Cell::Fixed(d.d_min(), places))
        .with("max", Cell::Fixed(d.d_max(), places))
        .with("nice", Cell::text(d.nice().to_string()))
}

fn range_note(key: String, r: &ExponentRange, places: usize) -> Note {
    let (lower, upper) = r.display_bounds(places as u32);
    Note::new(key)
        .with("lower", Cell::Fixed(lower, places))
        .with("upper", Cell::Fixed(upper, places))
        .with("nice", Cell::text(nice_exponent(r).to_string()))
}

fn violations(roster: &Roster, list: &[Violation]) -> Cell {
    if list.is_empty() {
        return Cell::text("none");
    }
    let code = |i: usize| roster.states()[i].code.as_str();
    Cell::text(
        list.iter()
            .map(|v| format!("{}/{}", code(v.larger), code(v.smaller)))
            .collect::<Vec<_>>()
            .join(" "),
    )
}

fn degressivity_note(key: String, c: &Composition) -> Note {
    let rep = check_degressive(c);
    let roster = &c.problem.roster;
    Note::new(key)
        .with("seats", Cell::Flag(rep.holds_on_seats))
        .with("quotients", Cell::Flag(rep.holds_on_quotients))
        .with("seat_violations", violations(roster, &rep.seat_violations))
        .with(
            "quotient_violations",
            violations(roster, &rep.quotient_violations),
        )
}

fn seats_sum(c: &Composition) -> Cell {
    Cell::Int(c.seats.total())
}

pub fn apportion(args: &ApportionArgs) -> Result<Report, CliError> {
    let roster = args.input.load()?;
    let places = usize::from(args.output.precision);
    let problem = ApportionmentProblem::new(roster.clone())
        .with_house(args.house)
        .with_base(args.base)
        .with_exponent(args.exponent)
        .with_cap(args.cap.unwrap_or(args.house.max(args.base + 1)));
    let composition = match args.cap {
        Some(_) => capped_composite(&problem, args.rule),
        None => uncapped(&problem, args.rule),
    }
    .map_err(|e| method_error(e, &roster))?;

    let mut rows = identity_cells(&roster);
    for (i, row) in rows.iter_mut().enumerate() {
        row.push(Cell::Fixed(composition.quotients[i], places));
        row.push(Cell::Int(composition.seats[i].into()));
    }
    let mut sum = sum_cells(&roster);
    sum.push(Cell::Blank);
    sum.push(seats_sum(&composition));

    let mut notes = vec![divisor_note("divisor".into(), &composition.divisor, places)];
    match &composition.exponent_range {
        Some(r) => notes.push(range_note("exponent-range".into(), r, places)),
        None => notes
            .push(Note::new("exponent-range").with("status", Cell::text("n/a: capping applied"))),
    }
    if !composition.capped.is_empty() {
        let codes: Vec<&str> = composition
            .capped
            .iter()
            .map(|&i| roster.states()[i].code.as_str())
            .collect();
        notes.push(Note::new("capped").with("states", Cell::text(codes.join(" "))));
    }

    let mut flags = vec![
        ("exponent".to_string(), args.exponent.to_string()),
        ("house".into(), args.house.to_string()),
        ("base".into(), args.base.to_string()),
        ("rule".into(), rule_name(args.rule).into()),
    ];
    if let Some(cap) = args.cap {
        flags.push(("cap".into(), cap.to_string()));
    }
    Ok(Report {
        command: "apportion".into(),
        flags,
        headers: ["code", "name", "population", "quotient", "seats"]
            .map(String::from)
            .to_vec(),
        rows,
        sum: Some(sum),
        notes,
    })
}

fn problem(roster: &Roster, house: u32, base: u32, cap: u32) -> ApportionmentProblem {
    ApportionmentProblem::new(roster.clone())
        .with_house(house)
        .with_base(base)
        .with_cap(cap)
}

pub fn solve(args: &SolveArgs) -> Result<Report, CliError> {
    let roster = args.input.load()?;
    let places = usize::from(args.output.precision);
    let p = problem(&roster, args.house, args.base, args.cap);
    let pv = power_variant_detailed(&p).map_err(|e| method_error(e, &roster))?;

    let mut chosen: Vec<&Composition> = pv.compositions.iter().collect();
    match args.pick {
        Pick::All => {}
        Pick::Smallest => chosen.truncate(1),
        Pick::Largest => chosen = chosen.split_off(chosen.len() - 1),
    }

    let mut rows = identity_cells(&roster);
    let mut sum = sum_cells(&roster);
    let mut headers: Vec<String> = ["code", "name", "population"].map(String::from).to_vec();
    let mut notes = Vec::new();
    if pv.cap_slack {
        notes.push(Note::new("status").with("message", Cell::text("cap not binding")));
    } else if let Some(trace) = &pv.trace {
        notes.push(
            Note::new("solver")
                .with("init_exponent", Cell::Fixed(trace.init_exponent, places))
                .with("solutions", Cell::Int(pv.compositions.len() as u64)),
        );
    }
    for c in &chosen {
        let label = if pv.cap_slack {
            "CC".to_string()
        } else {
            format!("x({})", c.exponent_used.unwrap_or(1.0))
        };
        for (i, row) in rows.iter_mut().enumerate() {
            row.push(Cell::Int(c.seats[i].into()));
        }
        sum.push(seats_sum(c));
        if let Some(r) = &c.exponent_range {
            notes.push(range_note(format!("{label} exponent-range"), r, places));
        }
        notes.push(divisor_note(format!("{label} divisor"), &c.divisor, places));
        notes.push(degressivity_note(format!("{label} degressive"), c));
        headers.push(label);
    }

    Ok(Report {
        command: "solve".into(),
        flags: vec![
            ("house".into(), args.house.to_string()),
            ("base".into(), args.base.to_string()),
            ("cap".into(), args.cap.to_string()),
            ("pick".into(), format!("{:?}", args.pick).to_lowercase()),
        ],
        headers,
        rows,
        sum: Some(sum),
        notes,
    })
}

pub fn table(args: &TableArgs) -> Result<Report, CliError> {
    let columns = if args.columns.is_empty() {
        ColumnSpec::comparison()
    } else {
        args.columns.clone()
    };
    let spec = ReportSpec::new(columns, args.output.format, args.output.precision.into())
        .map_err(CliError::Usage)?;
    let roster = args.input.load()?;
    let places = spec.precision;
    let base = problem(&roster, args.house, args.base, args.cap);

    let mut headers: Vec<String> = ["code", "name", "population"].map(String::from).to_vec();
    let mut rows = identity_cells(&roster);
    let mut sum = sum_cells(&roster);
    let mut notes = Vec::new();

    let mut push_composition = |label: String,
                                c: &Composition,
                                headers: &mut Vec<String>,
                                rows: &mut Vec<Vec<Cell>>,
                                sum: &mut Vec<Cell>| {
        for (i, row) in rows.iter_mut().enumerate() {
            row.push(Cell::Int(c.seats[i].into()));
        }
        sum.push(seats_sum(c));
        notes.push(divisor_note(format!("{label} divisor"), &c.divisor, places));
        headers.push(label);
    };

    for column in &spec.columns {
        let fail = |e| method_error(e, &roster);
        match *column {
            ColumnSpec::CamCom => {
                let c = camcom_apportion(&base).map_err(fail)?;
                push_composition("CC".into(), &c, &mut headers, &mut rows, &mut sum);
            }
            ColumnSpec::Power(e) => {
                let c =
                    uncapped(&base.clone().with_exponent(e), RoundingRule::Upward).map_err(fail)?;
                push_composition(format!("x({e})"), &c, &mut headers, &mut rows, &mut sum);
            }
            ColumnSpec::Composite(e) => {
                let c = uncapped(&base.clone().with_exponent(e), args.rule).map_err(fail)?;
                let label = format!("{}({e})", rule_label(args.rule));
                push_composition(label, &c, &mut headers, &mut rows, &mut sum);
            }
            ColumnSpec::Solve => {
                let pv = power_variant_detailed(&base).map_err(fail)?;
                for c in &pv.compositions {
                    let label = if pv.cap_slack {
                        "CC".to_string()
                    } else {
                        format!("x({})", c.exponent_used.unwrap_or(1.0))
                    };
                    push_composition(label, c, &mut headers, &mut rows, &mut sum);
                }
            }
            ColumnSpec::Index(e) => {
                for (row, p) in rows.iter_mut().zip(roster.populations()) {
                    row.push(Cell::Fixed((p as f64).powf(e), 1));
                }
                sum.push(Cell::Blank);
                headers.push(format!("Popn^{e}"));
            }
            ColumnSpec::StatusQuo | ColumnSpec::Parabolic => {
                let which = if *column == ColumnSpec::StatusQuo {
                    StaticComposition::StatusQuo
                } else {
                    StaticComposition::Parabolic
                };
                let seats = which.aligned(&roster).ok_or_else(|| {
                    CliError::Usage(format!(
                        "column `{column}` is data for the builtin EU27 roster only"
                    ))
                })?;
                for (row, &x) in rows.iter_mut().zip(&seats) {
                    row.push(Cell::Int(x.into()));
                }
                sum.push(Cell::Int(seats.iter().map(|&x| u64::from(x)).sum()));
                headers.push(which.label().to_string());
            }
        }
    }

    let listed: Vec<String> = spec.columns.iter().map(ToString::to_string).collect();
    Ok(Report {
        command: "table".into(),
        flags: vec![
            ("columns".into(), listed.join(",")),
            ("house".into(), args.house.to_string()),
            ("base".into(), args.base.to_string()),
            ("cap".into(), args.cap.to_string()),
            ("rule".into(), rule_name(args.rule).into()),
        ],
        headers,
        rows,
        sum: Some(sum),
        notes,
    })
}
