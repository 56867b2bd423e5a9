//! `mspace`: exact computations in Marcinkiewicz spaces on `(0, gamma)`.
//!
//! Subcommands: `norm`, `classify`, `submajorize`, `verify`, `curve`,
//! `remark`.  Exit codes: 0 ok, 1 verification violation, 2 parse/usage
//! error, 3 infinite norm.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mspace_core::norms::{
    lorentz_norm, marcinkiewicz_norm, natural_norm, weak_lp_norm, weak_lp_quasinorm,
};
use mspace_core::profile::submajorizes;
use mspace_core::textio::{
    fmt_decimal, fmt_extent, fmt_rat, fmt_value, fmt_value_decimal, parse_extent, parse_function,
    parse_gauge, parse_rat,
};
use mspace_core::value::{rat_int, Rat, Value};
use mspace_core::verify::{remark_counterexample, remark_with_gauge, run_suite, SuiteConfig};
use mspace_core::{
    AttainedAt, ConcaveGauge, ConditionReport, Extent, NormOutcome, RatioProfile, StepFunction,
};
use num::{One, Signed};

use output::{render_records, render_rows, OutFormat, Record};

const EXIT_VIOLATION: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INFINITE: u8 = 3;

#[derive(Parser)]
#[command(name = "mspace", version, about = "Exact Marcinkiewicz-space calculator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Variant {
    #[default]
    Plain,
    Natural,
    Lorentz,
    Weaklp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Head,
    Ratio,
    Bigpsi,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a norm of a function.
    Norm {
        /// Gauge file (required except for --variant weaklp).
        #[arg(long)]
        gauge: Option<PathBuf>,
        /// Function file.
        #[arg(long = "fn")]
        fn_file: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Plain)]
        variant: Variant,
        /// Truncation point for --variant natural (p/q).
        #[arg(long)]
        delta: Option<String>,
        /// Exponent for --variant weaklp (p/q, p > 1).
        #[arg(long)]
        p: Option<String>,
        /// Enclosure precision in bits.
        #[arg(long, default_value_t = 128)]
        precision: u32,
        #[arg(long, value_enum, default_value_t)]
        out: OutFormat,
    },
    /// Classify a gauge's doubling conditions and report certificates.
    Classify {
        #[arg(long)]
        gauge: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        out: OutFormat,
    },
    /// Decide whether one function is submajorized by another.
    Submajorize {
        /// The candidate (smaller) function.
        #[arg(long = "fn")]
        fn_file: PathBuf,
        /// The dominating function.
        #[arg(long)]
        by: PathBuf,
        /// Range bound (p/q or `inf`; default: the whole domain).
        #[arg(long)]
        upto: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        out: OutFormat,
    },
    /// Run the seeded inequality suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: u32,
        /// Extra gauge files appended to the built-in pool (repeatable).
        #[arg(long = "gauge")]
        gauges: Vec<PathBuf>,
        #[arg(long, default_value_t = 128)]
        precision: u32,
        #[arg(long = "max-pieces", default_value_t = 6)]
        max_pieces: u32,
        #[arg(long, value_enum, default_value_t)]
        out: OutFormat,
    },
    /// Emit plot-ready `t,value` rows for a curve.
    Curve {
        #[arg(long)]
        gauge: PathBuf,
        /// Function file (required for --what head).
        #[arg(long = "fn")]
        fn_file: Option<PathBuf>,
        #[arg(long, value_enum)]
        what: What,
        /// Interior sample count (>= 2).
        #[arg(long, default_value_t = 16)]
        samples: u32,
        /// Emit exact p/q values instead of decimals.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 128)]
        precision: u32,
        #[arg(long, value_enum, default_value_t)]
        out: OutFormat,
    },
    /// Reproduce the fixed counterexample bundle (optionally under another gauge).
    Remark {
        #[arg(long)]
        gauge: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        out: OutFormat,
    },
}

struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn parse(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_PARSE, msg: msg.into() }
    }
}

impl From<mspace_core::Error> for CliError {
    fn from(e: mspace_core::Error) -> Self {
        CliError::parse(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {}", path.display(), e)))
}

fn load_function(path: &Path) -> Result<StepFunction, CliError> {
    parse_function(&read(path)?)
        .map_err(|e| CliError::parse(format!("{}: {}", path.display(), e)))
}

fn load_gauge(path: &Path) -> Result<ConcaveGauge, CliError> {
    parse_gauge(&read(path)?).map_err(|e| CliError::parse(format!("{}: {}", path.display(), e)))
}

fn rat_flag(name: &str, value: &str) -> Result<Rat, CliError> {
    parse_rat(value).map_err(|e| CliError::parse(format!("--{name}: {e}")))
}

fn fmt_attained(at: &Option<AttainedAt>) -> String {
    match at {
        Some(AttainedAt::LimitAtZero) => "limit0".into(),
        Some(AttainedAt::Breakpoint(t)) => fmt_rat(t),
        Some(AttainedAt::LimitAtGamma) => "limitGamma".into(),
        None => "none".into(),
    }
}

fn norm_fields(outcome: &NormOutcome, precision: u32) -> (Vec<(&'static str, String)>, bool) {
    match outcome {
        NormOutcome::Infinite => {
            (vec![("norm", "inf".into()), ("finite", "no".into())], false)
        }
        NormOutcome::Finite(nv) => {
            let mut fields = vec![("norm", fmt_value(&nv.value))];
            if matches!(nv.value, Value::Enclosure(_)) {
                fields.push(("precision_bits", precision.to_string()));
            }
            fields.push(("attained_at", fmt_attained(&nv.attained_at)));
            fields.push(("finite", "yes".into()));
            (fields, true)
        }
    }
}

fn cmd_norm(
    gauge: Option<PathBuf>,
    fn_file: PathBuf,
    variant: Variant,
    delta: Option<String>,
    p: Option<String>,
    precision: u32,
    out: OutFormat,
) -> Result<u8, CliError> {
    let f = load_function(&fn_file)?;
    let mut extra: Vec<(&'static str, String)> = Vec::new();
    let outcome = match variant {
        Variant::Plain => {
            let gauge = gauge.ok_or_else(|| CliError::parse("--gauge is required"))?;
            marcinkiewicz_norm(&f, &load_gauge(&gauge)?, precision)?
        }
        Variant::Natural => {
            let gauge = gauge.ok_or_else(|| CliError::parse("--gauge is required"))?;
            let delta = delta.ok_or_else(|| CliError::parse("--delta is required for --variant natural"))?;
            natural_norm(&f, &load_gauge(&gauge)?, &rat_flag("delta", &delta)?, precision)?
        }
        Variant::Lorentz => {
            let gauge = gauge.ok_or_else(|| CliError::parse("--gauge is required"))?;
            lorentz_norm(&f, &load_gauge(&gauge)?)?
        }
        Variant::Weaklp => {
            let p = p.ok_or_else(|| CliError::parse("--p is required for --variant weaklp"))?;
            let p = rat_flag("p", &p)?;
            let quasi = weak_lp_quasinorm(&f, &p, precision)?;
            match &quasi {
                NormOutcome::Infinite => extra.push(("quasinorm", "inf".into())),
                NormOutcome::Finite(nv) => extra.push(("quasinorm", fmt_value(&nv.value))),
            }
            weak_lp_norm(&f, &p, precision)?
        }
    };
    let (mut fields, finite) = norm_fields(&outcome, precision);
    fields.extend(extra);
    print!("{}", render_records(&[Record::new(fields)], out));
    Ok(if finite { 0 } else { EXIT_INFINITE })
}

fn classify_fields(report: &ConditionReport) -> Vec<(&'static str, String)> {
    vec![
        ("verdict", report.verdict.to_string()),
        ("beta", report.beta.as_ref().map(|b| b.to_string()).unwrap_or_else(|| "none".into())),
        ("delta", report.delta.as_ref().map(|d| fmt_rat(d)).unwrap_or_else(|| "none".into())),
        ("liminf_zero", report.liminf_at_zero.to_string()),
        (
            "liminf_infinity",
            report
                .liminf_at_infinity
                .as_ref()
                .map(|s| s.to_string())
                .unwrap_or_else(|| "none".into()),
        ),
        ("eventually_constant", yes_no(report.eventually_constant)),
        ("grothendieck", yes_no(report.grothendieck)),
    ]
}

fn yes_no(b: bool) -> String {
    (if b { "yes" } else { "no" }).into()
}

fn cmd_classify(gauge: PathBuf, out: OutFormat) -> Result<u8, CliError> {
    let report = load_gauge(&gauge)?.classify();
    print!("{}", render_records(&[Record::new(classify_fields(&report))], out));
    Ok(0)
}

fn cmd_submajorize(
    fn_file: PathBuf,
    by: PathBuf,
    upto: Option<String>,
    out: OutFormat,
) -> Result<u8, CliError> {
    let f = load_function(&fn_file)?;
    let g = load_function(&by)?;
    let range = match upto {
        Some(s) => parse_extent(&s).map_err(|e| CliError::parse(format!("--upto: {e}")))?,
        None => Extent::Infinite,
    };
    let holds = submajorizes(&g, &f, &range)?;
    let fields = vec![
        ("submajorized", yes_no(holds)),
        ("upto", fmt_extent(&range)),
    ];
    print!("{}", render_records(&[Record::new(fields)], out));
    Ok(0)
}

fn check_records(results: &[mspace_core::verify::CheckResult]) -> Vec<Record> {
    results
        .iter()
        .map(|r| {
            Record::new(vec![
                ("check", r.name.to_string()),
                ("instance", r.digest()),
                ("holds", r.outcome.to_string()),
                ("margin", fmt_value(&r.margin)),
                ("witness", r.witness.as_ref().map(|w| fmt_rat(w)).unwrap_or_else(|| "none".into())),
            ])
        })
        .collect()
}

fn cmd_verify(
    seed: u64,
    cases: u32,
    gauges: Vec<PathBuf>,
    precision: u32,
    max_pieces: u32,
    out: OutFormat,
) -> Result<u8, CliError> {
    let mut config = SuiteConfig { seed, cases, max_pieces, precision, ..SuiteConfig::default() };
    for path in gauges {
        config.gauge_pool.push(load_gauge(&path)?);
    }
    let report = run_suite(&config);
    match out {
        OutFormat::Text => print!("{}", report.render_text()),
        OutFormat::Csv | OutFormat::JsonLines => {
            let mut records = check_records(&report.results);
            records.push(Record::new(vec![
                ("violations", report.violations().to_string()),
                ("cases", report.cases().to_string()),
                ("seed", report.seed.to_string()),
            ]));
            print!("{}", render_records(&records, out));
        }
    }
    Ok(if report.violations() > 0 { EXIT_VIOLATION } else { 0 })
}

fn cmd_remark(gauge: Option<PathBuf>, out: OutFormat) -> Result<u8, CliError> {
    let results = match gauge {
        None => remark_counterexample(),
        Some(path) => remark_with_gauge(&load_gauge(&path)?)?,
    };
    let violations = results.iter().filter(|r| !r.holds()).count();
    match out {
        OutFormat::Text => {
            for r in &results {
                println!("{}", r.render_line());
            }
            println!("violations={} cases={}", violations, results.len());
        }
        OutFormat::Csv | OutFormat::JsonLines => {
            let mut records = check_records(&results);
            records.push(Record::new(vec![
                ("violations", violations.to_string()),
                ("cases", results.len().to_string()),
            ]));
            print!("{}", render_records(&records, out));
        }
    }
    Ok(if violations > 0 { EXIT_VIOLATION } else { 0 })
}

/// `count` evenly spaced points in `(0, end]`, or in the open interval
/// `(0, end)` when `include_end` is false.
fn sample_grid(end: &Rat, count: u32, include_end: bool) -> Vec<Rat> {
    let denom = if include_end { count } else { count + 1 };
    (1..=count).map(|i| end * Rat::new(i.into(), denom.into())).collect()
}

fn curve_points(
    gauge: &ConcaveGauge,
    fn_file: Option<PathBuf>,
    what: What,
    samples: u32,
    precision: u32,
) -> Result<Vec<(Rat, Value)>, CliError> {
    let mut points: Vec<Rat> = Vec::new();
    let mut eval: Box<dyn Fn(&Rat) -> Result<Value, CliError>> = match what {
        What::Head => {
            let path = fn_file.ok_or_else(|| CliError::parse("--fn is required for --what head"))?;
            let f = load_function(&path)?;
            if f.gamma() != gauge.gamma() {
                return Err(CliError::parse("function and gauge domains differ"));
            }
            let head = f.head_profile();
            let end = match gauge.gamma() {
                Extent::Finite(g) => g.clone(),
                Extent::Infinite => head
                    .knots()
                    .last()
                    .map(|(t, _)| t * rat_int(2))
                    .unwrap_or_else(Rat::one)
                    .max(Rat::one()),
            };
            points.extend(head.knots().iter().map(|(t, _)| t.clone()));
            points.extend(sample_grid(&end, samples, true));
            Box::new(move |t| Ok(Value::Exact(head.eval(t))))
        }
        What::Ratio => {
            let profile = gauge.doubling_profile();
            match &profile {
                RatioProfile::PiecewiseMoebius { end, .. } => {
                    points.extend(profile.breakpoints());
                    match end {
                        Extent::Finite(l) => points.extend(sample_grid(l, samples, false)),
                        Extent::Infinite => {
                            let top = profile
                                .breakpoints()
                                .last()
                                .map(|b| b * rat_int(2))
                                .unwrap_or_else(|| rat_int(4))
                                .max(rat_int(4));
                            points.extend(sample_grid(&top, samples, true));
                        }
                    }
                }
                RatioProfile::Constant(_) => {
                    let top = match gauge.gamma() {
                        Extent::Finite(g) => g / rat_int(2),
                        Extent::Infinite => rat_int(4),
                    };
                    points.extend(sample_grid(&top, samples, false));
                }
            }
            let scalar_bits = precision;
            Box::new(move |t| match profile.eval_rational(t) {
                Some(v) => Ok(Value::Exact(v)),
                None => match &profile {
                    RatioProfile::Constant(s) => {
                        let enc = s.enclosure(scalar_bits);
                        Ok(if enc.is_point() {
                            Value::Exact(enc.lo().clone())
                        } else {
                            Value::Enclosure(enc)
                        })
                    }
                    RatioProfile::PiecewiseMoebius { .. } => {
                        Err(CliError::parse("sample point outside the ratio domain"))
                    }
                },
            })
        }
        What::Bigpsi => {
            if let Some(profile) = gauge.pl_profile() {
                points.extend(profile.knots().iter().map(|(t, _)| t.clone()));
            }
            match gauge.gamma() {
                Extent::Finite(g) => points.extend(sample_grid(g, samples, false)),
                Extent::Infinite => {
                    let top = gauge
                        .pl_profile()
                        .and_then(|p| p.knots().last().map(|(t, _)| t * rat_int(2)))
                        .unwrap_or_else(|| rat_int(4))
                        .max(rat_int(4));
                    points.extend(sample_grid(&top, samples, true));
                }
            }
            let gauge = gauge.clone();
            Box::new(move |t| Ok(gauge.big_psi(t, precision)?))
        }
    };
    points.retain(|t| t.is_positive());
    points.sort();
    points.dedup();
    let eval = &mut eval;
    points
        .into_iter()
        .map(|t| {
            let v = eval(&t)?;
            Ok((t, v))
        })
        .collect()
}

fn cmd_curve(
    gauge: PathBuf,
    fn_file: Option<PathBuf>,
    what: What,
    samples: u32,
    exact: bool,
    precision: u32,
    out: OutFormat,
) -> Result<u8, CliError> {
    if samples < 2 {
        return Err(CliError::parse("--samples must be at least 2"));
    }
    let gauge = load_gauge(&gauge)?;
    let values = curve_points(&gauge, fn_file, what, samples, precision)?;
    let rows: Vec<(String, String)> = values
        .iter()
        .map(|(t, v)| {
            if exact {
                (fmt_rat(t), fmt_value(v))
            } else {
                (fmt_decimal(t, 12), fmt_value_decimal(v, 12))
            }
        })
        .collect();
    print!("{}", render_rows(&rows, out));
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Norm { gauge, fn_file, variant, delta, p, precision, out } => {
            cmd_norm(gauge, fn_file, variant, delta, p, precision, out)
        }
        Command::Classify { gauge, out } => cmd_classify(gauge, out),
        Command::Submajorize { fn_file, by, upto, out } => cmd_submajorize(fn_file, by, upto, out),
        Command::Verify { seed, cases, gauges, precision, max_pieces, out } => {
            cmd_verify(seed, cases, gauges, precision, max_pieces, out)
        }
        Command::Curve { gauge, fn_file, what, samples, exact, precision, out } => {
            cmd_curve(gauge, fn_file, what, samples, exact, precision, out)
        }
        Command::Remark { gauge, out } => cmd_remark(gauge, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
