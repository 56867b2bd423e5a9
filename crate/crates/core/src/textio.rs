//! Line-oriented textual formats for functions and gauges, plus exact
//! rational parsing/printing and decimal rendering.
//!
//! Function files:
//! ```text
//! gamma = 1/1
//! piece = 0/1 1/2 2/1
//! tail = 0/1
//! ```
//! Gauge files:
//! ```text
//! kind = pl            kind = power
//! gamma = 1/1          gamma = inf
//! jump = 0/1           p = 2/1
//! knot = 1/2 1/1       coeff = 1/1
//! final_slope = 0/1
//! ```
//! Rationals are always rendered as `p/q` with `q >= 1` and `gcd(p, q) = 1`;
//! bare integers are accepted on input.  Blank lines and `#` comments are
//! ignored.

use std::fmt;

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::extent::Extent;
use crate::gauge::{ConcaveGauge, GaugeBackend};
use crate::profile::PiecewiseLinearConcave;
use crate::step::StepFunction;
use crate::value::{Enclosure, Rat, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError { line, col, msg: msg.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn fmt_extent(e: &Extent) -> String {
    match e {
        Extent::Finite(r) => fmt_rat(r),
        Extent::Infinite => "inf".to_string(),
    }
}

pub fn fmt_value(v: &Value) -> String {
    match v {
        Value::Exact(r) => fmt_rat(r),
        Value::Enclosure(e) => fmt_enclosure(e),
    }
}

pub fn fmt_enclosure(e: &Enclosure) -> String {
    format!("[{}, {}]", fmt_rat(e.lo()), fmt_rat(e.hi()))
}

pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| format!("bad integer `{num}`"))?;
    let d: BigInt = den.parse().map_err(|_| format!("bad integer `{den}`"))?;
    if d.is_zero() {
        return Err("zero denominator".to_string());
    }
    Ok(Rat::new(n, d))
}

pub fn parse_extent(s: &str) -> Result<Extent, String> {
    let s = s.trim();
    if s == "inf" {
        return Ok(Extent::Infinite);
    }
    Ok(Extent::Finite(parse_rat(s)?))
}

/// Split a file into `(line_no, key, value, value_col)` records.
fn key_value_lines(text: &str) -> Result<Vec<(usize, &str, &str, usize)>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.split_once('#') {
            Some((body, _)) => body,
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ParseError::new(line_no, 1, "expected `key = value`")
        })?;
        let value_col = key.len() + 2 + (value.len() - value.trim_start().len());
        out.push((line_no, key.trim(), value.trim(), value_col));
    }
    Ok(out)
}

fn rat_at(line: usize, col: usize, s: &str) -> Result<Rat, ParseError> {
    parse_rat(s).map_err(|msg| ParseError::new(line, col, msg))
}

pub fn parse_function(text: &str) -> Result<StepFunction, ParseError> {
    let records = key_value_lines(text)?;
    let mut gamma: Option<(usize, Extent)> = None;
    let mut tail: Option<Rat> = None;
    let mut pieces: Vec<(Rat, Rat, Rat)> = Vec::new();
    for (line, key, value, col) in &records {
        match *key {
            "gamma" => {
                if gamma.is_some() {
                    return Err(ParseError::new(*line, 1, "duplicate `gamma`"));
                }
                let e = parse_extent(value).map_err(|msg| ParseError::new(*line, *col, msg))?;
                gamma = Some((*line, e));
            }
            "piece" => {
                let tokens: Vec<&str> = value.split_whitespace().collect();
                if tokens.len() != 3 {
                    return Err(ParseError::new(
                        *line,
                        *col,
                        "piece needs `left right value`",
                    ));
                }
                let l = rat_at(*line, *col, tokens[0])?;
                let r = rat_at(*line, *col, tokens[1])?;
                let v = rat_at(*line, *col, tokens[2])?;
                pieces.push((l, r, v));
            }
            "tail" => {
                if tail.is_some() {
                    return Err(ParseError::new(*line, 1, "duplicate `tail`"));
                }
                tail = Some(rat_at(*line, *col, value)?);
            }
            other => {
                return Err(ParseError::new(*line, 1, format!("unknown key `{other}`")));
            }
        }
    }
    let (gamma_line, gamma) = gamma.ok_or_else(|| ParseError::new(1, 1, "missing `gamma`"))?;
    StepFunction::from_pieces(&pieces, tail.unwrap_or_else(Rat::zero), gamma)
        .map_err(|e| ParseError::new(gamma_line, 1, e.to_string()))
}

pub fn render_function(f: &StepFunction) -> String {
    let (pieces, tail) = f.to_pieces();
    let mut out = format!("gamma = {}\n", fmt_extent(f.gamma()));
    for (l, r, v) in pieces {
        out.push_str(&format!("piece = {} {} {}\n", fmt_rat(&l), fmt_rat(&r), fmt_rat(&v)));
    }
    out.push_str(&format!("tail = {}\n", fmt_rat(&tail)));
    out
}

pub fn parse_gauge(text: &str) -> Result<ConcaveGauge, ParseError> {
    let records = key_value_lines(text)?;
    let mut kind: Option<(usize, String)> = None;
    let mut gamma: Option<Extent> = None;
    let mut jump: Option<Rat> = None;
    let mut knots: Vec<(Rat, Rat)> = Vec::new();
    let mut final_slope: Option<Rat> = None;
    let mut p: Option<Rat> = None;
    let mut coeff: Option<Rat> = None;
    for (line, key, value, col) in &records {
        match *key {
            "kind" => kind = Some((*line, value.to_string())),
            "gamma" => {
                gamma =
                    Some(parse_extent(value).map_err(|msg| ParseError::new(*line, *col, msg))?)
            }
            "jump" => jump = Some(rat_at(*line, *col, value)?),
            "knot" => {
                let tokens: Vec<&str> = value.split_whitespace().collect();
                if tokens.len() != 2 {
                    return Err(ParseError::new(*line, *col, "knot needs `t value`"));
                }
                knots.push((rat_at(*line, *col, tokens[0])?, rat_at(*line, *col, tokens[1])?));
            }
            "final_slope" => final_slope = Some(rat_at(*line, *col, value)?),
            "p" => p = Some(rat_at(*line, *col, value)?),
            "coeff" => coeff = Some(rat_at(*line, *col, value)?),
            other => {
                return Err(ParseError::new(*line, 1, format!("unknown key `{other}`")));
            }
        }
    }
    let (kind_line, kind) = kind.ok_or_else(|| ParseError::new(1, 1, "missing `kind`"))?;
    let gamma = gamma.ok_or_else(|| ParseError::new(kind_line, 1, "missing `gamma`"))?;
    match kind.as_str() {
        "pl" => {
            let profile = PiecewiseLinearConcave::new(
                jump.unwrap_or_else(Rat::zero),
                knots,
                final_slope.unwrap_or_else(Rat::zero),
                gamma,
            )
            .map_err(|e| ParseError::new(kind_line, 1, e.to_string()))?;
            ConcaveGauge::piecewise_linear(profile)
                .map_err(|e| ParseError::new(kind_line, 1, e.to_string()))
        }
        "power" => {
            let p = p.ok_or_else(|| ParseError::new(kind_line, 1, "missing `p`"))?;
            ConcaveGauge::power(p, coeff.unwrap_or_else(Rat::one), gamma)
                .map_err(|e| ParseError::new(kind_line, 1, e.to_string()))
        }
        other => Err(ParseError::new(kind_line, 1, format!("unknown kind `{other}`"))),
    }
}

pub fn render_gauge(g: &ConcaveGauge) -> String {
    match g.backend() {
        GaugeBackend::PiecewiseLinear(profile) => {
            let mut out = String::from("kind = pl\n");
            out.push_str(&format!("gamma = {}\n", fmt_extent(g.gamma())));
            out.push_str(&format!("jump = {}\n", fmt_rat(profile.jump())));
            for (t, v) in profile.knots() {
                out.push_str(&format!("knot = {} {}\n", fmt_rat(t), fmt_rat(v)));
            }
            out.push_str(&format!("final_slope = {}\n", fmt_rat(profile.final_slope())));
            out
        }
        GaugeBackend::Power { p, coefficient } => {
            format!(
                "kind = power\ngamma = {}\np = {}\ncoeff = {}\n",
                fmt_extent(g.gamma()),
                fmt_rat(p),
                fmt_rat(coefficient)
            )
        }
    }
}

/// Compact single-line rendering used for instance digests in reports.
pub fn function_inline(f: &StepFunction) -> String {
    let cuts: Vec<String> = f.cut_points().iter().map(fmt_rat).collect();
    let values: Vec<String> = f.segment_values().iter().map(fmt_rat).collect();
    format!(
        "gamma={};cuts={};values={}",
        fmt_extent(f.gamma()),
        cuts.join(","),
        values.join(",")
    )
}

pub fn gauge_inline(g: &ConcaveGauge) -> String {
    match g.backend() {
        GaugeBackend::PiecewiseLinear(profile) => {
            let knots: Vec<String> = profile
                .knots()
                .iter()
                .map(|(t, v)| format!("{}:{}", fmt_rat(t), fmt_rat(v)))
                .collect();
            format!(
                "pl;gamma={};jump={};knots={};final={}",
                fmt_extent(g.gamma()),
                fmt_rat(profile.jump()),
                knots.join(","),
                fmt_rat(profile.final_slope())
            )
        }
        GaugeBackend::Power { p, coefficient } => {
            format!(
                "power;gamma={};p={};coeff={}",
                fmt_extent(g.gamma()),
                fmt_rat(p),
                fmt_rat(coefficient)
            )
        }
    }
}

/// Renders a rational as a decimal with `sig` significant digits, rounded
/// half-even; trailing zeros are trimmed.  Exactness is recoverable through
/// the `p/q` forms, never from this rendering.
pub fn fmt_decimal(r: &Rat, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let v = r.abs();
    // Decimal exponent e with 10^e <= v < 10^(e+1).
    let ten = BigInt::from(10);
    let mut e = v.numer().to_string().len() as i64 - v.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> Rat {
        let p = ten.clone().pow(k.unsigned_abs() as u32);
        if k >= 0 {
            Rat::from_integer(p)
        } else {
            Rat::new(BigInt::one(), p)
        }
    };
    while v < pow10(e) {
        e -= 1;
    }
    while v >= pow10(e + 1) {
        e += 1;
    }
    // Round v * 10^(sig-1-e) half-even to an integer with `sig` digits.
    let scaled = &v * pow10(sig as i64 - 1 - e);
    let num = scaled.numer();
    let den = scaled.denom();
    let (mut digits, rem) = (num / den, num % den);
    let twice = &rem * BigInt::from(2);
    let round_up = match twice.cmp(den) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => (&digits % BigInt::from(2)).is_one(),
    };
    if round_up {
        digits += BigInt::one();
    }
    let mut ds = digits.to_string();
    if ds.len() > sig {
        // Rounding carried over (e.g. 999.. -> 1000..).
        e += 1;
        ds.truncate(sig);
    }
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if e >= 0 {
        let int_len = (e + 1) as usize;
        if int_len >= ds.len() {
            out.push_str(&ds);
            out.push_str(&"0".repeat(int_len - ds.len()));
        } else {
            out.push_str(&ds[..int_len]);
            let frac = ds[int_len..].trim_end_matches('0');
            if !frac.is_empty() {
                out.push('.');
                out.push_str(frac);
            }
        }
    } else {
        out.push_str("0.");
        out.push_str(&"0".repeat((-e - 1) as usize));
        out.push_str(ds.trim_end_matches('0'));
    }
    out
}

/// Decimal rendering of an exact value or enclosure midpoint.
pub fn fmt_value_decimal(v: &Value, sig: usize) -> String {
    match v {
        Value::Exact(r) => fmt_decimal(r, sig),
        Value::Enclosure(e) => fmt_decimal(&e.midpoint(), sig),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{rat, rat_int};

    #[test]
    fn rational_round_trip() {
        assert_eq!(fmt_rat(&rat(2, 4)), "1/2");
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat("-6/4").unwrap(), rat(-3, 2));
        assert!(parse_rat("1/0").is_err());
        assert_eq!(parse_extent("inf").unwrap(), Extent::Infinite);
    }

    #[test]
    fn function_round_trip() {
        let f = StepFunction::from_pieces(
            &[(rat(0, 1), rat(1, 2), rat_int(2))],
            Rat::zero(),
            Extent::finite(Rat::one()),
        )
        .unwrap();
        let text = render_function(&f);
        let back = parse_function(&text).unwrap();
        assert_eq!(back, f);
        // Tail-anchored zero piece round-trips too.
        let g = StepFunction::from_pieces(
            &[(rat(0, 1), Rat::one(), rat_int(2)), (rat(3, 1), rat(10, 1), rat_int(5))],
            Rat::zero(),
            Extent::finite(rat(10, 1)),
        )
        .unwrap();
        assert_eq!(parse_function(&render_function(&g)).unwrap(), g);
    }

    #[test]
    fn function_accepts_comments_and_gaps() {
        let text = "# a gap function\ngamma = 1/1\npiece = 1/2 1 2\ntail = 0\n";
        let f = parse_function(text).unwrap();
        assert_eq!(f.value_at(&rat(1, 4)), Rat::zero());
        assert_eq!(f.value_at(&rat(3, 4)), rat_int(2));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_function("gamma = 1/1\npiece = 0 1\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_function("gamma = x\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.col > 1);
        let err = parse_function("piece = 0 1 1\n").unwrap_err();
        assert!(err.msg.contains("gamma"));
    }

    #[test]
    fn gauge_round_trips() {
        let g = ConcaveGauge::capped_linear(rat_int(2), Rat::one(), Extent::finite(Rat::one()))
            .unwrap();
        assert_eq!(parse_gauge(&render_gauge(&g)).unwrap(), g);
        let p = ConcaveGauge::power(rat(3, 2), rat_int(2), Extent::Infinite).unwrap();
        assert_eq!(parse_gauge(&render_gauge(&p)).unwrap(), p);
    }

    #[test]
    fn gauge_rejects_non_concave_data() {
        let err = parse_gauge("kind = pl\ngamma = 1\nknot = 1/2 1/4\nfinal_slope = 2\n")
            .unwrap_err();
        assert!(err.msg.contains("concav"));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(fmt_decimal(&rat(1, 2), 12), "0.5");
        assert_eq!(fmt_decimal(&rat(1, 3), 5), "0.33333");
        assert_eq!(fmt_decimal(&rat(2, 3), 5), "0.66667");
        assert_eq!(fmt_decimal(&rat_int(1234), 3), "1230");
        assert_eq!(fmt_decimal(&rat(-1, 8), 4), "-0.125");
        // Half-even: 0.125 at 2 digits rounds to 0.12.
        assert_eq!(fmt_decimal(&rat(125, 1000), 2), "0.12");
        assert_eq!(fmt_decimal(&rat(135, 1000), 2), "0.14");
        // Carry: 0.999 at 2 digits becomes 1.
        assert_eq!(fmt_decimal(&rat(999, 1000), 2), "1");
    }
}
