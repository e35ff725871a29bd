//! Line-oriented lattice documents.
//!
//! ```text
//! # rectangular lattice Z + sqrt(-1)·sqrt(2)·Z
//! lattice rect
//! g = 1
//! field = Q(sqrt 2)
//! F = [[0/1 + 1/1 w]]
//! glue = []
//! ```
//!
//! `w` stands for `√d`. Optional `S = [[...]]` attaches a polarization and
//! `Q = [[...]]` a non-polarizability certificate. A `descended <name>` block
//! carries `g`, `field`, `P` (lattice basis columns in `(re | im)`
//! coordinates) and `theta` instead of `F` and `glue`.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::kernel::{ExactMatrix, ExactScalar, Field};
use crate::lattice::{bits_to_string, DescendedLattice, Diagnostic, GlueGroup, LatticeError, RealLattice};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("lattice {name} (line {line}) is invalid: {diagnostic}")]
    Invalid { name: String, line: usize, diagnostic: Diagnostic },
    #[error("document {name} (line {line}): {source}")]
    Lattice { name: String, line: usize, source: LatticeError },
}

impl DocumentError {
    /// Diagnostic code for semantic failures, `"syntax"` otherwise.
    pub fn code(&self) -> &'static str {
        match self {
            DocumentError::Syntax(_) => "syntax",
            DocumentError::Invalid { diagnostic, .. } => diagnostic.code(),
            DocumentError::Lattice { source: LatticeError::InvalidDescended(d), .. } => d.code(),
            DocumentError::Lattice { .. } => "lattice",
        }
    }
}

/// A named real lattice with optional attached forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeDocument {
    pub name: String,
    pub lattice: RealLattice,
    pub polarization: Option<ExactMatrix>,
    pub certificate: Option<ExactMatrix>,
}

impl LatticeDocument {
    pub fn new(name: impl Into<String>, lattice: RealLattice) -> Self {
        LatticeDocument { name: name.into(), lattice, polarization: None, certificate: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescendedDocument {
    pub name: String,
    pub lattice: DescendedLattice,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Real(LatticeDocument),
    Descended(DescendedDocument),
}

impl Document {
    pub fn name(&self) -> &str {
        match self {
            Document::Real(d) => &d.name,
            Document::Descended(d) => &d.name,
        }
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    offset: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize, offset: usize) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line, offset, _src: src }
    }

    fn column(&self) -> usize {
        self.offset + self.pos + 1
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(err(self.line, self.column(), message))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.fail(format!("expected '{c}', found '{x}'")),
            None => self.fail(format!("expected '{c}', found end of line")),
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            self.pos = start;
            return self.fail("expected an integer");
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    /// `p` or `p/q`, unsigned.
    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let numer = self.integer()?;
        if self.peek() == Some('/') {
            self.pos += 1;
            let col = self.column();
            let denom = self.integer()?;
            if denom.is_zero() {
                return Err(err(self.line, col, "zero denominator"));
            }
            return Ok(BigRational::new(numer, denom));
        }
        Ok(BigRational::from_integer(numer))
    }

    /// Sum of signed terms `r` and `r w`.
    fn scalar(&mut self, field: Field) -> Result<ExactScalar, ParseError> {
        let start = self.column();
        let mut rational = BigRational::zero();
        let mut surd = BigRational::zero();
        let mut first = true;
        loop {
            let mut negative = false;
            match self.peek() {
                Some('+') if !first => self.pos += 1,
                Some('-') => {
                    negative = true;
                    self.pos += 1;
                }
                _ if !first => break,
                _ => {}
            }
            let value = if self.peek() == Some('w') { BigRational::from_integer(1.into()) } else { self.rational()? };
            let value = if negative { -value } else { value };
            if self.peek() == Some('w') {
                self.pos += 1;
                surd += value;
            } else {
                rational += value;
            }
            first = false;
            if !matches!(self.peek(), Some('+') | Some('-')) {
                break;
            }
        }
        ExactScalar::new(field, rational, surd).map_err(|_| {
            err(self.line, start, format!("entry uses w but the field is {field}"))
        })
    }

    fn matrix(&mut self, field: Field) -> Result<(usize, Vec<Vec<ExactScalar>>, usize), ParseError> {
        let col = self.column();
        self.expect('[')?;
        let mut rows = Vec::new();
        if self.peek() != Some(']') {
            loop {
                self.expect('[')?;
                let mut row = Vec::new();
                loop {
                    row.push(self.scalar(field)?);
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        _ => break,
                    }
                }
                self.expect(']')?;
                rows.push(row);
                match self.peek() {
                    Some(',') => self.pos += 1,
                    _ => break,
                }
            }
        }
        self.expect(']')?;
        let width = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != width) {
            return Err(err(self.line, col, "rows of unequal length"));
        }
        Ok((rows.len(), rows, width))
    }

    fn bits(&mut self) -> Result<Vec<bool>, ParseError> {
        self.skip_ws();
        let mut out = Vec::new();
        while let Some(&c) = self.chars.get(self.pos) {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                _ => break,
            }
            self.pos += 1;
        }
        Ok(out)
    }

    /// `[x|y, ...]`, each block checked against `g`.
    fn glue(&mut self, g: usize) -> Result<Vec<Vec<bool>>, ParseError> {
        self.expect('[')?;
        let mut vectors = Vec::new();
        if self.peek() != Some(']') {
            loop {
                let col = self.column();
                let mut x = self.bits()?;
                self.expect('|')?;
                let y = self.bits()?;
                if x.len() != g || y.len() != g {
                    return Err(err(
                        self.line,
                        col,
                        format!("glue blocks have lengths {}|{}, expected {g}|{g}", x.len(), y.len()),
                    ));
                }
                x.extend(y);
                vectors.push(x);
                match self.peek() {
                    Some(',') => self.pos += 1,
                    _ => break,
                }
            }
        }
        self.expect(']')?;
        Ok(vectors)
    }
}

#[derive(Default)]
struct Block {
    kind_descended: bool,
    name: String,
    line: usize,
    g: Option<(usize, usize)>,
    field: Option<Field>,
    entries: Vec<(String, usize, usize, String)>,
}

/// `Q` or `Q(sqrt d)`.
pub fn parse_field_spec(value: &str) -> Result<Field, ParseError> {
    parse_field(value, 1, 1)
}

fn parse_field(value: &str, line: usize, column: usize) -> Result<Field, ParseError> {
    let compact: String = value.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "Q" {
        return Ok(Field::Rational);
    }
    let inner = compact
        .strip_prefix("Q(sqrt")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| err(line, column, format!("expected 'Q' or 'Q(sqrt d)', found '{value}'")))?;
    let d: i64 = inner.parse().map_err(|_| err(line, column, format!("bad radicand '{inner}'")))?;
    Field::quadratic(d).map_err(|e| err(line, column, e.to_string()))
}

fn finish(block: Block) -> Result<Document, DocumentError> {
    let line = block.line;
    let Some((g, g_line)) = block.g else {
        return Err(err(line, 1, format!("'{}' has no 'g =' line", block.name)).into());
    };
    let field = block.field.unwrap_or(Field::Rational);
    let mut matrices: Vec<(String, ExactMatrix)> = Vec::new();
    let mut glue = None;
    for (key, l, col, value) in &block.entries {
        let mut cur = Cursor::new(value, *l, *col);
        if key == "glue" {
            glue = Some(cur.glue(g)?);
        } else {
            let (rows, data, cols) = cur.matrix(field)?;
            let expected = if matches!(key.as_str(), "P" | "theta") { 2 * g } else { g };
            if rows != expected || cols != expected {
                return Err(err(*l, *col + 1, format!("{key} is {rows}x{cols}, expected {expected}x{expected} for g = {g}")).into());
            }
            matrices.push((key.clone(), ExactMatrix::from_rows(field, data).expect("shape checked")));
        }
        if !cur.at_end() {
            return Err(err(*l, cur.column(), "trailing characters").into());
        }
    }
    let take = |k: &str| matrices.iter().find(|(key, _)| key == k).map(|(_, m)| m.clone());
    let wrap = |source: LatticeError| DocumentError::Lattice { name: block.name.clone(), line, source };
    if block.kind_descended {
        let (Some(p), Some(theta)) = (take("P"), take("theta")) else {
            return Err(err(line, 1, format!("descended block '{}' needs P and theta", block.name)).into());
        };
        let lattice = DescendedLattice::new(field, p, theta).map_err(wrap)?;
        return Ok(Document::Descended(DescendedDocument { name: block.name, lattice }));
    }
    let Some(period) = take("F") else {
        return Err(err(line, 1, format!("lattice '{}' has no 'F =' line", block.name)).into());
    };
    if g == 0 {
        return Err(err(g_line, 1, "g must be positive").into());
    }
    let glue = GlueGroup::new(g, glue.unwrap_or_default()).map_err(wrap)?;
    let raw = RealLattice::from_parts(field, period, glue).map_err(wrap)?;
    if let Err(diagnostic) = raw.validate() {
        return Err(DocumentError::Invalid { name: block.name, line, diagnostic });
    }
    let lattice = RealLattice::new(raw.field(), raw.period().clone(), raw.glue().clone()).map_err(wrap)?;
    Ok(Document::Real(LatticeDocument {
        name: block.name,
        lattice,
        polarization: take("S"),
        certificate: take("Q"),
    }))
}

/// Parses every block in `text`.
pub fn parse_documents(text: &str) -> Result<Vec<Document>, DocumentError> {
    let mut docs = Vec::new();
    let mut current: Option<Block> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let header = trimmed.split_whitespace().next().unwrap_or("");
        if header == "lattice" || header == "descended" {
            if let Some(b) = current.take() {
                docs.push(finish(b)?);
            }
            let name = trimmed[header.len()..].trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(err(line_no, indent + header.len() + 2, "expected a single-word name").into());
            }
            current = Some(Block {
                kind_descended: header == "descended",
                name: name.to_string(),
                line: line_no,
                ..Block::default()
            });
            continue;
        }
        let Some(block) = current.as_mut() else {
            return Err(err(line_no, indent + 1, "expected 'lattice <name>' or 'descended <name>'").into());
        };
        let Some(eq) = trimmed.find('=') else {
            return Err(err(line_no, indent + 1, "expected 'key = value'").into());
        };
        let key = trimmed[..eq].trim();
        let value = &trimmed[eq + 1..];
        let value_col = indent + eq + 1;
        let allowed: &[&str] = if block.kind_descended { &["g", "field", "P", "theta"] } else { &["g", "field", "F", "glue", "S", "Q"] };
        if !allowed.contains(&key) {
            return Err(err(line_no, indent + 1, format!("unknown key '{key}'")).into());
        }
        let duplicate = match key {
            "g" => block.g.is_some(),
            "field" => block.field.is_some(),
            _ => block.entries.iter().any(|(k, ..)| k == key),
        };
        if duplicate {
            return Err(err(line_no, indent + 1, format!("duplicate key '{key}'")).into());
        }
        match key {
            "g" => {
                let g: usize = value
                    .trim()
                    .parse()
                    .map_err(|_| err(line_no, value_col + 2, format!("expected a nonnegative integer, found '{}'", value.trim())))?;
                block.g = Some((g, line_no));
            }
            "field" => block.field = Some(parse_field(value, line_no, value_col + 2)?),
            _ => block.entries.push((key.to_string(), line_no, value_col, value.to_string())),
        }
    }
    if let Some(b) = current {
        docs.push(finish(b)?);
    }
    Ok(docs)
}

/// Parses text holding exactly one real lattice document.
pub fn parse_lattice(text: &str) -> Result<LatticeDocument, DocumentError> {
    let mut docs = parse_documents(text)?;
    match (docs.len(), docs.pop()) {
        (1, Some(Document::Real(d))) => Ok(d),
        (1, Some(Document::Descended(d))) => {
            Err(err(1, 1, format!("'{}' is a descended block, expected a lattice", d.name)).into())
        }
        (n, _) => Err(err(1, 1, format!("expected one lattice document, found {n}")).into()),
    }
}

fn write_glue(out: &mut String, glue: &GlueGroup) {
    let g = glue.g();
    let parts: Vec<String> = glue
        .basis()
        .iter()
        .map(|v| format!("{}|{}", bits_to_string(&v[..g]), bits_to_string(&v[g..])))
        .collect();
    let _ = writeln!(out, "glue = [{}]", parts.join(", "));
}

pub fn emit_lattice(doc: &LatticeDocument) -> String {
    let l = &doc.lattice;
    let mut out = String::new();
    let _ = writeln!(out, "lattice {}", doc.name);
    let _ = writeln!(out, "g = {}", l.g());
    let _ = writeln!(out, "field = {}", l.field());
    let _ = writeln!(out, "F = {}", l.period());
    write_glue(&mut out, l.glue());
    if let Some(s) = &doc.polarization {
        let _ = writeln!(out, "S = {s}");
    }
    if let Some(q) = &doc.certificate {
        let _ = writeln!(out, "Q = {q}");
    }
    out
}

pub fn emit_descended(doc: &DescendedDocument) -> String {
    let d = &doc.lattice;
    let mut out = String::new();
    let _ = writeln!(out, "descended {}", doc.name);
    let _ = writeln!(out, "g = {}", d.g());
    let _ = writeln!(out, "field = {}", d.field());
    let _ = writeln!(out, "P = {}", d.basis());
    let _ = writeln!(out, "theta = {}", d.theta());
    out
}

pub fn emit_document(doc: &Document) -> String {
    match doc {
        Document::Real(d) => emit_lattice(d),
        Document::Descended(d) => emit_descended(d),
    }
}

impl fmt::Display for LatticeDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&emit_lattice(self))
    }
}
