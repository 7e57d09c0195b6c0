//! Presentation files: TOML documents describing a Vietoris solenoid, an adic
//! surface, or a toral matrix chain.
//!
//! ```toml
//! format_version = 1
//! kind = "adic-surface"   # or "vietoris", "toral"
//! genus = 2               # adic-surface only
//! dimension = 2           # toral only
//! prefix = [3]            # optional, defaults to []
//! period = [2]            # toral: array of row-major n x n matrices
//! ```
//!
//! Parsing validates the same invariants as the library constructors and
//! reports the line and field of the first problem.

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use serde::Deserialize;
use toml::{Spanned, Value};

use crate::bundles::AdicSurface;
use crate::error::Error;
use crate::supernatural::BondingSequence;
use crate::toral::{IntMatrix, MatrixChain};

pub const FORMAT_VERSION: i64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Vietoris,
    AdicSurface,
    Toral,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Vietoris => "vietoris",
            Kind::AdicSurface => "adic-surface",
            Kind::Toral => "toral",
        }
    }

    fn from_name(name: &str) -> Option<Kind> {
        match name {
            "vietoris" => Some(Kind::Vietoris),
            "adic-surface" => Some(Kind::AdicSurface),
            "toral" => Some(Kind::Toral),
            _ => None,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A parsed and validated presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Presentation {
    Vietoris(BondingSequence),
    AdicSurface(AdicSurface),
    Toral(MatrixChain),
}

/// Problem found while reading a presentation or a flag list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl ParseError {
    fn new(line: Option<usize>, field: Option<&str>, message: impl Into<String>) -> Self {
        ParseError { line, field: field.map(str::to_owned), message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "field `{field}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    format_version: Spanned<i64>,
    kind: Spanned<String>,
    genus: Option<Spanned<i64>>,
    dimension: Option<Spanned<i64>>,
    prefix: Option<Spanned<Value>>,
    period: Spanned<Value>,
}

struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    fn line_of(&self, span: Range<usize>) -> usize {
        let end = span.start.min(self.text.len());
        self.text.as_bytes()[..end].iter().filter(|&&b| b == b'\n').count() + 1
    }

    fn error<T>(&self, spanned: &Spanned<T>, field: &str, message: impl Into<String>) -> ParseError {
        ParseError::new(Some(self.line_of(spanned.span())), Some(field), message)
    }
}

fn as_array<'v>(value: &'v Value, path: &str) -> Result<&'v Vec<Value>, String> {
    value.as_array().ok_or_else(|| format!("{path} must be an array"))
}

fn degree_list(value: &Value, field: &str) -> Result<Vec<u64>, (String, String)> {
    let items = as_array(value, field).map_err(|m| (field.to_owned(), m))?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let path = format!("{field}[{i}]");
            match v.as_integer() {
                Some(x) if x >= 2 => Ok(x as u64),
                Some(x) => Err((path, format!("covering degree {x} is below 2"))),
                None => Err((path, "expected an integer".to_owned())),
            }
        })
        .collect()
}

fn matrix_list(value: &Value, field: &str, n: usize) -> Result<Vec<IntMatrix>, (String, String)> {
    let items = as_array(value, field).map_err(|m| (field.to_owned(), m))?;
    let mut out = Vec::with_capacity(items.len());
    for (k, item) in items.iter().enumerate() {
        let path = format!("{field}[{k}]");
        let rows = as_array(item, &path).map_err(|m| (path.clone(), m))?;
        if rows.len() != n {
            return Err((path, format!("expected {n} rows, found {}", rows.len())));
        }
        let mut parsed: Vec<Vec<i64>> = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            let row_path = format!("{path}[{i}]");
            let entries = as_array(row, &row_path).map_err(|m| (row_path.clone(), m))?;
            if entries.len() != n {
                return Err((row_path, format!("expected {n} entries, found {}", entries.len())));
            }
            let row: Option<Vec<i64>> = entries.iter().map(Value::as_integer).collect();
            parsed.push(row.ok_or_else(|| (row_path, "expected integers".to_owned()))?);
        }
        let m = IntMatrix::from_rows(&parsed).map_err(|e| (path.clone(), e.to_string()))?;
        let det = m.determinant().map_err(|e| (path.clone(), e.to_string()))?;
        if det.magnitude() < &2u32.into() {
            return Err((path, format!("|det| = {} but bonding matrices need |det| >= 2", det.magnitude())));
        }
        out.push(m);
    }
    Ok(out)
}

fn reject_field<T>(src: &Source<'_>, field: &Option<Spanned<T>>, name: &str, kind: Kind) -> Result<(), ParseError> {
    match field {
        Some(v) => Err(src.error(v, name, format!("not allowed for kind \"{kind}\""))),
        None => Ok(()),
    }
}

/// Parses and validates a presentation document.
pub fn parse(text: &str) -> Result<Presentation, ParseError> {
    let src = Source { text };
    let raw: RawPresentation = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| src.line_of(s));
        ParseError::new(line, None, e.message().trim().to_owned())
    })?;

    if *raw.format_version.get_ref() != FORMAT_VERSION {
        return Err(src.error(
            &raw.format_version,
            "format_version",
            format!("unsupported version {}, expected {FORMAT_VERSION}", raw.format_version.get_ref()),
        ));
    }
    let kind = Kind::from_name(raw.kind.get_ref())
        .ok_or_else(|| src.error(&raw.kind, "kind", format!("unknown kind {:?}", raw.kind.get_ref())))?;

    let empty = Spanned::new(0..0, Value::Array(Vec::new()));
    let prefix = raw.prefix.as_ref().unwrap_or(&empty);
    let period = &raw.period;
    // validation errors point at the line of the field they came from
    let at = |spanned: &Spanned<Value>| {
        let line = src.line_of(spanned.span());
        move |(field, message): (String, String)| ParseError::new(Some(line), Some(&field), message)
    };

    match kind {
        Kind::Vietoris | Kind::AdicSurface => {
            reject_field(&src, &raw.dimension, "dimension", kind)?;
            let prefix_vals = degree_list(prefix.get_ref(), "prefix").map_err(at(prefix))?;
            let period_vals = degree_list(period.get_ref(), "period").map_err(at(period))?;
            let seq = BondingSequence::new(prefix_vals, period_vals)
                .map_err(|e| src.error(period, "period", e.to_string()))?;
            if kind == Kind::Vietoris {
                reject_field(&src, &raw.genus, "genus", kind)?;
                return Ok(Presentation::Vietoris(seq));
            }
            let genus = raw
                .genus
                .as_ref()
                .ok_or_else(|| ParseError::new(None, Some("genus"), "missing for kind \"adic-surface\""))?;
            let g = *genus.get_ref();
            if !(1..=i64::from(u32::MAX)).contains(&g) {
                return Err(src.error(genus, "genus", format!("genus {g} must be at least 1")));
            }
            let surface = AdicSurface::new(g as u32, seq).map_err(|e| src.error(genus, "genus", e.to_string()))?;
            Ok(Presentation::AdicSurface(surface))
        }
        Kind::Toral => {
            reject_field(&src, &raw.genus, "genus", kind)?;
            let dim = raw
                .dimension
                .as_ref()
                .ok_or_else(|| ParseError::new(None, Some("dimension"), "missing for kind \"toral\""))?;
            let n = *dim.get_ref();
            if n < 1 {
                return Err(src.error(dim, "dimension", format!("dimension {n} must be at least 1")));
            }
            // every matrix row must fit in the document
            if n as u64 > text.len() as u64 {
                return Err(src.error(dim, "dimension", format!("dimension {n} exceeds the document size")));
            }
            let n = n as usize;
            let prefix_ms = matrix_list(prefix.get_ref(), "prefix", n).map_err(at(prefix))?;
            let period_ms = matrix_list(period.get_ref(), "period", n).map_err(at(period))?;
            let chain = MatrixChain::new(n, prefix_ms, period_ms)
                .map_err(|e: Error| src.error(period, "period", e.to_string()))?;
            Ok(Presentation::Toral(chain))
        }
    }
}

impl Presentation {
    pub fn kind(&self) -> Kind {
        match self {
            Presentation::Vietoris(_) => Kind::Vietoris,
            Presentation::AdicSurface(_) => Kind::AdicSurface,
            Presentation::Toral(_) => Kind::Toral,
        }
    }

    /// Canonical document text; [`parse`] reads it back to an equal value.
    pub fn render(&self) -> String {
        let mut out = format!("format_version = {FORMAT_VERSION}\nkind = \"{}\"\n", self.kind());
        let list = |xs: &[u64]| format!("[{}]", xs.iter().map(u64::to_string).collect::<Vec<_>>().join(", "));
        match self {
            Presentation::Vietoris(seq) => {
                out += &format!("prefix = {}\nperiod = {}\n", list(seq.prefix()), list(seq.period()));
            }
            Presentation::AdicSurface(s) => {
                out += &format!(
                    "genus = {}\nprefix = {}\nperiod = {}\n",
                    s.genus(),
                    list(s.seq().prefix()),
                    list(s.seq().period())
                );
            }
            Presentation::Toral(c) => {
                let matrix = |m: &IntMatrix| {
                    let rows: Vec<String> = m
                        .to_rows()
                        .iter()
                        .map(|r| format!("[{}]", r.iter().map(BigInt::to_string).collect::<Vec<_>>().join(", ")))
                        .collect();
                    format!("[{}]", rows.join(", "))
                };
                let matrices = |ms: &[IntMatrix]| format!("[{}]", ms.iter().map(matrix).collect::<Vec<_>>().join(", "));
                out += &format!(
                    "dimension = {}\nprefix = {}\nperiod = {}\n",
                    c.dimension(),
                    matrices(c.prefix()),
                    matrices(c.period())
                );
            }
        }
        out
    }
}

/// Parses a comma-separated list of nonnegative integers such as `2,3`.
/// The empty string is the empty list.
pub fn parse_u64_list(text: &str) -> Result<Vec<u64>, ParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .enumerate()
        .map(|(i, item)| {
            let item = item.trim();
            item.parse::<u64>()
                .map_err(|_| ParseError::new(None, None, format!("item {i}: {item:?} is not a nonnegative integer")))
        })
        .collect()
}
