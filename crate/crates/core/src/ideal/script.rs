//! Replayable antichain streams:
//!
//! ```text
//! antichain n=1: 0x1
//! antichain n=2: 0x1,0x6
//! envelope n=1 value=1/1
//! envelope n=2 value=1/2
//! ```
//!
//! Cantor elements are written as braced node lists, `{0,10}`.

use super::Envelope;
use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct AntichainScript {
    pub antichains: Vec<(usize, Vec<Element>)>,
    /// Declared bounds for the selected values, by index.
    pub envelope: Vec<(usize, Rational)>,
}

impl AntichainScript {
    pub fn parse(text: &str, algebra: Algebra) -> Result<Self> {
        let mut antichains: Vec<(usize, Vec<Element>)> = Vec::new();
        let mut envelope: Vec<(usize, Rational)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("antichain ") {
                let (head, body) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line_no, "expected `antichain n=<k>: ...`"))?;
                let n = parse_index(head, line_no)?;
                if antichains.last().is_some_and(|(prev, _)| *prev >= n) {
                    return Err(Error::parse(line_no, "antichain indices must increase"));
                }
                let elements = split_top_level(body)
                    .into_iter()
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| {
                        algebra
                            .parse_element(s)
                            .map_err(|e| Error::parse(line_no, e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                antichains.push((n, elements));
            } else if let Some(rest) = line.strip_prefix("envelope ") {
                let mut fields = rest.split_whitespace();
                let n = parse_index(fields.next().unwrap_or(""), line_no)?;
                let value = fields
                    .next()
                    .and_then(|f| f.strip_prefix("value="))
                    .and_then(rational::parse)
                    .ok_or_else(|| Error::parse(line_no, "expected value=<p>/<q>"))?;
                if envelope.last().is_some_and(|(prev, _)| *prev >= n) {
                    return Err(Error::parse(line_no, "envelope indices must increase"));
                }
                envelope.push((n, value));
            } else {
                return Err(Error::parse(line_no, format!("unrecognised line `{line}`")));
            }
        }
        Ok(AntichainScript {
            antichains,
            envelope,
        })
    }

    /// Declared envelope as a table from index 0; gaps hold the previous
    /// declaration and indices before the first declaration get `1`.
    pub fn declared_envelope(&self) -> Option<Envelope> {
        let (last, _) = self.envelope.last()?;
        let mut table = vec![rational::int(1); last + 1];
        let mut decl = self.envelope.iter().peekable();
        let mut cur = rational::int(1);
        for (n, slot) in table.iter_mut().enumerate() {
            while let Some((i, v)) = decl.peek() {
                if *i > n {
                    break;
                }
                cur = v.clone();
                decl.next();
            }
            *slot = cur.clone();
        }
        Some(Envelope::Table(table))
    }
}

fn parse_index(field: &str, line_no: usize) -> Result<usize> {
    field
        .trim()
        .strip_prefix("n=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::parse(line_no, "expected n=<k>"))
}

/// Splits on commas outside braces.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut from = 0;
    for (i, c) in s.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[from..i]);
                from = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[from..]);
    out
}
