//! Line format for tabulated submeasures.
//!
//! ```text
//! atoms=4
//! kind=constructed
//! source=levels.frag
//! elem=0x0 value=0/1
//! elem=0x1 value=1/2
//! ...
//! ```
//!
//! `atoms=` comes first; `kind=` and `source=` are optional header lines.
//! Every element of the algebra must appear exactly once.

use std::fmt::Write as _;

use super::Submeasure;
use crate::algebra::{full_mask, parse_mask, Algebra};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct TableFile {
    pub atoms: u8,
    pub kind: String,
    pub source: Option<String>,
    pub values: Vec<Rational>,
}

impl TableFile {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "atoms={}", self.atoms).unwrap();
        writeln!(out, "kind={}", self.kind).unwrap();
        if let Some(src) = &self.source {
            writeln!(out, "source={src}").unwrap();
        }
        for (m, v) in self.values.iter().enumerate() {
            writeln!(out, "elem={m:#x} value={}", rational::format(v)).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<TableFile> {
        let mut atoms: Option<u8> = None;
        let mut kind = String::from("table");
        let mut source = None;
        let mut slots: Vec<Option<Rational>> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(n) = line.strip_prefix("atoms=") {
                if atoms.is_some() {
                    return Err(Error::parse(line_no, "duplicate atoms= header"));
                }
                let n: u8 = n
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line_no, "bad atom count"))?;
                Algebra::finite(n).map_err(|e| Error::parse(line_no, e.to_string()))?;
                atoms = Some(n);
                slots = vec![None; full_mask(n) as usize + 1];
            } else if let Some(k) = line.strip_prefix("kind=") {
                kind = k.trim().to_string();
            } else if let Some(s) = line.strip_prefix("source=") {
                source = Some(s.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("elem=") {
                if atoms.is_none() {
                    return Err(Error::parse(line_no, "elem= before atoms= header"));
                }
                let (mask, value) = rest
                    .split_once(" value=")
                    .ok_or_else(|| Error::parse(line_no, "expected `elem=<hex> value=<p>/<q>`"))?;
                let mask =
                    parse_mask(mask).ok_or_else(|| Error::parse(line_no, "bad element mask"))?;
                let value =
                    rational::parse(value).ok_or_else(|| Error::parse(line_no, "bad rational"))?;
                let slot = slots
                    .get_mut(mask as usize)
                    .ok_or_else(|| Error::parse(line_no, "element outside the algebra"))?;
                if slot.replace(value).is_some() {
                    return Err(Error::parse(
                        line_no,
                        format!("duplicate entry for {mask:#x}"),
                    ));
                }
            } else {
                return Err(Error::parse(line_no, format!("unrecognised line `{line}`")));
            }
        }
        let atoms = atoms.ok_or_else(|| Error::parse(0, "missing atoms= header"))?;
        let mut values = Vec::with_capacity(slots.len());
        for (m, slot) in slots.into_iter().enumerate() {
            values
                .push(slot.ok_or_else(|| Error::input(format!("table has no entry for {m:#x}")))?);
        }
        Ok(TableFile {
            atoms,
            kind,
            source,
            values,
        })
    }

    pub fn into_submeasure(self) -> Result<Submeasure> {
        let alg = Algebra::finite(self.atoms)?;
        Submeasure::from_table(alg, self.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Element;

    #[test]
    fn round_trip() {
        let m = Submeasure::uniform(Algebra::finite(3).unwrap());
        let text = m.to_table_file(Some("x.frag".into())).unwrap().render();
        assert!(text.starts_with("atoms=3\nkind=atom-weights\nsource=x.frag\nelem=0x0 value=0/1\n"));
        let back = TableFile::parse(&text).unwrap().into_submeasure().unwrap();
        assert_eq!(
            back.eval(&Element::Finite(0b011)).unwrap(),
            rational::ratio(2, 3)
        );
    }

    #[test]
    fn missing_entries_rejected() {
        let err =
            TableFile::parse("atoms=2\nelem=0x0 value=0/1\nelem=0x3 value=1/1\n").unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        assert!(TableFile::parse("elem=0x0 value=0/1").is_err());
        assert!(TableFile::parse("atoms=2\nelem=0x9 value=0/1").is_err());
    }
}
