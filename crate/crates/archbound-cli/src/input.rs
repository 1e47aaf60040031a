//! Record grammar, one curve per line:
//!
//! ```text
//! record  := [label ":"] "[" coeff ("," coeff)* "]" ["@" place ("," place)*] ["#" comment]
//! coeff   := "(" float "," float ")"     complex pair, f64 parts
//!          | int "/" uint                exact rational
//!          | int ["." digits] [exponent] exact decimal
//! place   := "real" | "complex"
//! ```
//!
//! Integers, rationals, and decimals are parsed into arbitrary-precision
//! rationals before any float conversion, so 70-digit coefficients survive
//! exactly. Blank lines and `#` comment lines parse to nothing.

use archbound::{Coefficient, PlaceSpec};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::identities::Zero;

use crate::{CliError, Result};

/// Exponents past this magnitude would allocate gigantic integers.
const MAX_EXPONENT: i64 = 100_000;

/// One parsed record: exact coefficients plus the places to evaluate.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveInput {
    pub label: Option<String>,
    pub coefficients: [Coefficient; 5],
    pub places: Vec<PlaceSpec>,
}

impl CurveInput {
    /// Validates arity and the label, defaults the place list from the
    /// coefficient kind, and coerces every place to complex when a
    /// coefficient has a nonzero imaginary part (no real embedding exists
    /// for such a model).
    pub fn new(
        label: Option<String>,
        coefficients: Vec<Coefficient>,
        places: Vec<PlaceSpec>,
        line: usize,
    ) -> Result<Self> {
        if coefficients.len() != 5 {
            return Err(CliError::Arity { line, count: coefficients.len() });
        }
        let label = match label {
            None => None,
            Some(raw) => {
                let trimmed = raw.trim();
                if trimmed.is_empty() {
                    None
                } else if trimmed.chars().any(|ch| ":[]#".contains(ch) || ch.is_control()) {
                    return Err(CliError::Config(format!(
                        "label {trimmed:?} may not contain ':', '[', ']', '#', or control characters"
                    )));
                } else {
                    Some(trimmed.to_string())
                }
            }
        };
        let coefficients: [Coefficient; 5] = coefficients.try_into().expect("length checked");
        let real_valued = coefficients.iter().all(|c| match c {
            Coefficient::Rational(_) => true,
            Coefficient::Complex(z) => z.im == 0.0,
        });
        let places = if places.is_empty() {
            vec![if real_valued { PlaceSpec::Real } else { PlaceSpec::Complex }]
        } else if real_valued {
            places
        } else {
            vec![PlaceSpec::Complex; places.len()]
        };
        Ok(CurveInput { label, coefficients, places })
    }
}

/// Canonical text form; `parse_record` of the result reproduces the input
/// structure exactly.
pub fn render(input: &CurveInput) -> String {
    let mut out = String::new();
    if let Some(label) = &input.label {
        out.push_str(label);
        out.push_str(": ");
    }
    out.push('[');
    for (i, c) in input.coefficients.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&render_coefficient(c));
    }
    out.push_str("] @");
    for (i, p) in input.places.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(place_name(*p));
    }
    out
}

pub fn place_name(place: PlaceSpec) -> &'static str {
    match place {
        PlaceSpec::Real => "real",
        PlaceSpec::Complex => "complex",
    }
}

fn render_coefficient(c: &Coefficient) -> String {
    match c {
        Coefficient::Rational(q) => {
            if q.denom() == &BigInt::from(1) {
                q.numer().to_string()
            } else {
                format!("{}/{}", q.numer(), q.denom())
            }
        }
        Coefficient::Complex(z) => format!("({},{})", z.re, z.im),
    }
}

/// Parses one line. `Ok(None)` means the line holds no record (blank or
/// comment); `line_no` is used for error positions and defaults derived
/// from line position.
pub fn parse_record(text: &str, line_no: usize) -> Result<Option<CurveInput>> {
    let mut cur = Cursor { s: text, pos: 0, line: line_no };
    cur.skip_ws();
    match cur.peek() {
        None | Some('#') => return Ok(None),
        _ => {}
    }
    let label = take_label(&mut cur)?;
    cur.skip_ws();
    cur.expect('[')?;
    let mut coefficients = Vec::new();
    loop {
        cur.skip_ws();
        coefficients.push(parse_coefficient(&mut cur)?);
        cur.skip_ws();
        match cur.peek() {
            Some(',') => cur.bump(),
            Some(']') => {
                cur.bump();
                break;
            }
            Some(other) => return cur.fail(format!("expected ',' or ']', found {other:?}")),
            None => return cur.fail("unterminated coefficient list"),
        }
    }
    cur.skip_ws();
    let mut places = Vec::new();
    if cur.peek() == Some('@') {
        cur.bump();
        loop {
            cur.skip_ws();
            places.push(parse_place(&mut cur)?);
            cur.skip_ws();
            if cur.peek() == Some(',') {
                cur.bump();
            } else {
                break;
            }
        }
    }
    cur.skip_ws();
    match cur.peek() {
        None | Some('#') => {}
        Some(other) => return cur.fail(format!("unexpected trailing {other:?}")),
    }
    CurveInput::new(label, coefficients, places, line_no).map(Some)
}

/// Single-record entry point for command-line curve arguments.
pub fn parse_input(text: &str) -> Result<CurveInput> {
    match parse_record(text, 1)? {
        Some(input) => Ok(input),
        None => Err(CliError::Parse {
            line: 1,
            column: 1,
            message: "expected a curve record".into(),
        }),
    }
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) {
        if let Some(ch) = self.peek() {
            self.pos += ch.len_utf8();
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ') | Some('\t')) {
            self.bump();
        }
    }

    fn column_at(&self, pos: usize) -> usize {
        self.s[..pos].chars().count() + 1
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        self.fail_at(self.pos, message)
    }

    fn fail_at<T>(&self, pos: usize, message: impl Into<String>) -> Result<T> {
        Err(CliError::Parse {
            line: self.line,
            column: self.column_at(pos),
            message: message.into(),
        })
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(ch) if ch == want => {
                self.bump();
                Ok(())
            }
            Some(other) => self.fail(format!("expected {want:?}, found {other:?}")),
            None => self.fail(format!("expected {want:?}, found end of line")),
        }
    }
}

/// A label is everything before a ':' that appears ahead of the opening
/// bracket.
fn take_label(cur: &mut Cursor) -> Result<Option<String>> {
    let rest = cur.rest();
    let colon = rest.find(':');
    let bracket = rest.find('[');
    match (colon, bracket) {
        (Some(ci), Some(bi)) if ci < bi => {
            let raw = rest[..ci].to_string();
            if raw.trim().is_empty() {
                return cur.fail("empty label before ':'");
            }
            cur.pos += ci + 1;
            Ok(Some(raw))
        }
        _ => Ok(None),
    }
}

fn scan_digits(cur: &mut Cursor) -> Result<()> {
    let start = cur.pos;
    while matches!(cur.peek(), Some(ch) if ch.is_ascii_digit()) {
        cur.bump();
    }
    if cur.pos == start {
        return match cur.peek() {
            Some(other) => cur.fail(format!("expected a digit, found {other:?}")),
            None => cur.fail("expected a digit, found end of line"),
        };
    }
    Ok(())
}

/// Scans a float token and parses it with the standard correctly-rounded
/// f64 parser; used only for the parts of complex pairs.
fn scan_float(cur: &mut Cursor) -> Result<f64> {
    let start = cur.pos;
    if matches!(cur.peek(), Some('+') | Some('-')) {
        cur.bump();
    }
    scan_digits(cur)?;
    if cur.peek() == Some('.') {
        cur.bump();
        scan_digits(cur)?;
    }
    if matches!(cur.peek(), Some('e') | Some('E')) {
        cur.bump();
        if matches!(cur.peek(), Some('+') | Some('-')) {
            cur.bump();
        }
        scan_digits(cur)?;
    }
    let token = &cur.s[start..cur.pos];
    let value: f64 = token
        .parse()
        .map_err(|_| CliError::Parse {
            line: cur.line,
            column: cur.column_at(start),
            message: format!("invalid float {token:?}"),
        })?;
    if !value.is_finite() {
        return cur.fail_at(start, format!("{token:?} exceeds the f64 range"));
    }
    Ok(value)
}

fn parse_coefficient(cur: &mut Cursor) -> Result<Coefficient> {
    if cur.peek() == Some('(') {
        cur.bump();
        cur.skip_ws();
        let re = scan_float(cur)?;
        cur.skip_ws();
        cur.expect(',')?;
        cur.skip_ws();
        let im = scan_float(cur)?;
        cur.skip_ws();
        cur.expect(')')?;
        return Ok(Coefficient::Complex(Complex64::new(re, im)));
    }
    parse_number(cur)
}

fn parse_number(cur: &mut Cursor) -> Result<Coefficient> {
    let start = cur.pos;
    if matches!(cur.peek(), Some('+') | Some('-')) {
        cur.bump();
    }
    scan_digits(cur)?;
    match cur.peek() {
        Some('/') => {
            let numer: BigInt = cur.s[start..cur.pos].parse().expect("scanned integer");
            cur.bump();
            let den_start = cur.pos;
            scan_digits(cur)?;
            let denom: BigInt = cur.s[den_start..cur.pos].parse().expect("scanned integer");
            if denom.is_zero() {
                return cur.fail_at(den_start, "zero denominator");
            }
            Ok(Coefficient::Rational(BigRational::new(numer, denom)))
        }
        Some('.') | Some('e') | Some('E') => {
            if cur.peek() == Some('.') {
                cur.bump();
                scan_digits(cur)?;
            }
            let mantissa_end = cur.pos;
            let mut exponent: i64 = 0;
            if matches!(cur.peek(), Some('e') | Some('E')) {
                cur.bump();
                let exp_start = cur.pos;
                if matches!(cur.peek(), Some('+') | Some('-')) {
                    cur.bump();
                }
                scan_digits(cur)?;
                exponent = cur.s[exp_start..cur.pos]
                    .parse()
                    .map_err(|_| CliError::Parse {
                        line: cur.line,
                        column: cur.column_at(exp_start),
                        message: "exponent out of range".into(),
                    })?;
            }
            let mantissa_text = &cur.s[start..mantissa_end];
            let frac_len = match mantissa_text.find('.') {
                Some(dot) => (mantissa_text.len() - dot - 1) as i64,
                None => 0,
            };
            let mantissa: BigInt = mantissa_text
                .chars()
                .filter(|ch| *ch != '.')
                .collect::<String>()
                .parse()
                .expect("scanned digits");
            let shift = exponent - frac_len;
            if shift.abs() > MAX_EXPONENT {
                return cur.fail_at(start, "exponent out of range");
            }
            let scale = num_traits::pow(BigInt::from(10), shift.unsigned_abs() as usize);
            let value = if shift >= 0 {
                BigRational::from_integer(mantissa * scale)
            } else {
                BigRational::new(mantissa, scale)
            };
            Ok(Coefficient::Rational(value))
        }
        _ => {
            let numer: BigInt = cur.s[start..cur.pos].parse().expect("scanned integer");
            Ok(Coefficient::Rational(BigRational::from_integer(numer)))
        }
    }
}

fn parse_place(cur: &mut Cursor) -> Result<PlaceSpec> {
    let start = cur.pos;
    while matches!(cur.peek(), Some(ch) if ch.is_ascii_alphabetic()) {
        cur.bump();
    }
    match &cur.s[start..cur.pos] {
        "real" => Ok(PlaceSpec::Real),
        "complex" => Ok(PlaceSpec::Complex),
        other => cur.fail_at(start, format!("unknown place {other:?} (expected real or complex)")),
    }
}
