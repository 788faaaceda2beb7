//! Fragmentation files:
//!
//! ```text
//! levels=3
//! level=1
//! gen=0xf
//! level=2
//! gen=0x3
//! ...
//! ```

use std::fmt::Write as _;

use super::Fragmentation;
use crate::algebra::{parse_mask, upward_closure, Algebra, Element, UpwardClosedFamily};
use crate::error::{Error, Result};

pub(super) fn render(f: &Fragmentation) -> Result<String> {
    let levels = f.levels()?;
    let mut out = String::new();
    writeln!(out, "levels={}", levels.len()).unwrap();
    for (i, fam) in levels.iter().enumerate() {
        writeln!(out, "level={}", i + 1).unwrap();
        for g in fam.generators() {
            writeln!(out, "gen={g}").unwrap();
        }
    }
    Ok(out)
}

pub(super) fn parse(text: &str, algebra: Algebra) -> Result<Fragmentation> {
    algebra.require_finite()?;
    let mut declared: Option<usize> = None;
    let mut levels: Vec<Vec<Element>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(v) = line.strip_prefix("levels=") {
            let n = v
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, "bad level count"))?;
            declared = Some(n);
        } else if let Some(v) = line.strip_prefix("level=") {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, "bad level index"))?;
            if n != levels.len() + 1 {
                return Err(Error::parse(
                    line_no,
                    format!("expected level={}", levels.len() + 1),
                ));
            }
            levels.push(Vec::new());
        } else if let Some(v) = line.strip_prefix("gen=") {
            let mask = parse_mask(v).ok_or_else(|| Error::parse(line_no, "bad generator mask"))?;
            let e = algebra
                .element(mask)
                .map_err(|e| Error::parse(line_no, e.to_string()))?;
            levels
                .last_mut()
                .ok_or_else(|| Error::parse(line_no, "gen= before any level="))?
                .push(e);
        } else {
            return Err(Error::parse(line_no, format!("unrecognised line `{line}`")));
        }
    }
    let declared = declared.ok_or_else(|| Error::parse(0, "missing levels= header"))?;
    if declared != levels.len() {
        return Err(Error::input(format!(
            "header declares {declared} levels, file has {}",
            levels.len()
        )));
    }
    let families = levels
        .iter()
        .map(|gens| {
            let fam = upward_closure(algebra, gens)?;
            if fam.generators().len() != gens.len() {
                return Err(Error::input(
                    "level generators are not pairwise incomparable",
                ));
            }
            Ok(fam)
        })
        .collect::<Result<Vec<UpwardClosedFamily>>>()?;
    Fragmentation::from_levels(algebra, families)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submeasure::Submeasure;

    #[test]
    fn round_trip() {
        let alg = Algebra::finite(4).unwrap();
        let f = Fragmentation::from_submeasure_dyadic(&Submeasure::uniform(alg)).unwrap();
        let text = f.render().unwrap();
        assert!(text.starts_with("levels=2\nlevel=1\ngen=0x3\n"));
        let back = Fragmentation::parse(&text, alg).unwrap();
        assert_eq!(back.levels().unwrap(), f.levels().unwrap());
    }

    #[test]
    fn rejects_bad_files() {
        let alg = Algebra::finite(2).unwrap();
        assert!(Fragmentation::parse("level=1\ngen=0x3\n", alg).is_err());
        assert!(Fragmentation::parse("levels=1\nlevel=2\ngen=0x3\n", alg).is_err());
        assert!(Fragmentation::parse("levels=2\nlevel=1\ngen=0x3\n", alg).is_err());
        // 0x1 <= 0x3 on the same level
        assert!(
            Fragmentation::parse("levels=1\nlevel=1\ngen=0x1\ngen=0x3\ngen=0x2\n", alg).is_err()
        );
        assert!(Fragmentation::parse("levels=1\nlevel=1\ngen=0x1\ngen=0x2\n", alg).is_ok());
    }
}
