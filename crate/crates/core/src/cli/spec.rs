//! Spec files, one clause per line:
//!
//! ```text
//! algebra finite 8
//! submeasure uniform
//! fragmentation dyadic
//! family atleast 4
//! ```
//!
//! Clauses: `algebra finite N | cantor`; `submeasure uniform | trivial |
//! weights p/q ... | covering K { 0x.. 0x.. } | table <path> |
//! constructed <fragfile>`; `fragmentation harmonic | dyadic | file <path>`;
//! `family atleast K | family <elem> ...`; `eps p/q`; `horizon N`;
//! `budget N`; `antichains <path>`. Paths are relative to the spec file.

use std::path::{Path, PathBuf};

use crate::algebra::{Algebra, Element};
use crate::budget::Budget;
use crate::construction::construct_submeasure;
use crate::error::{Error, Result};
use crate::fragmentation::Fragmentation;
use crate::ideal::AntichainScript;
use crate::rational::{self, Rational};
use crate::submeasure::{CoveringParams, Submeasure, TableFile};

#[derive(Debug, Clone, PartialEq)]
pub enum SubmeasureClause {
    Uniform,
    Trivial,
    Weights(Vec<Rational>),
    Covering { scale: u32, family: Vec<String> },
    Table(PathBuf),
    Constructed(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FragmentationClause {
    Harmonic,
    Dyadic,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyClause {
    AtLeast(u32),
    Members(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecFile {
    pub algebra: Algebra,
    pub submeasure: Option<SubmeasureClause>,
    pub fragmentation: Option<FragmentationClause>,
    pub family: Option<FamilyClause>,
    pub eps: Option<Rational>,
    pub horizon: Option<usize>,
    pub budget: Option<u64>,
    pub antichains: Option<PathBuf>,
}

impl SpecFile {
    pub fn load(path: &Path) -> Result<SpecFile> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        SpecFile::parse(&text, base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<SpecFile> {
        let mut algebra = None;
        let mut spec = SpecFile {
            algebra: Algebra::Cantor,
            submeasure: None,
            fragmentation: None,
            family: None,
            eps: None,
            horizon: None,
            budget: None,
            antichains: None,
        };
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| Error::parse(line_no, msg.to_string());
            let once = |taken: bool, what: &str| {
                if taken {
                    Err(Error::parse(line_no, format!("duplicate {what} clause")))
                } else {
                    Ok(())
                }
            };
            match words[0] {
                "algebra" => {
                    once(algebra.is_some(), "algebra")?;
                    algebra = Some(match words.get(1..) {
                        Some(["finite", n]) => {
                            let n: u8 = n.parse().map_err(|_| bad("bad atom count"))?;
                            Algebra::finite(n).map_err(|e| Error::parse(line_no, e.to_string()))?
                        }
                        Some(["cantor"]) => Algebra::Cantor,
                        _ => return Err(bad("expected `algebra finite N` or `algebra cantor`")),
                    });
                }
                "submeasure" => {
                    once(spec.submeasure.is_some(), "submeasure")?;
                    spec.submeasure = Some(match words.get(1..) {
                        Some(["uniform"]) => SubmeasureClause::Uniform,
                        Some(["trivial"]) => SubmeasureClause::Trivial,
                        Some(["weights", ws @ ..]) if !ws.is_empty() => SubmeasureClause::Weights(
                            ws.iter()
                                .map(|w| rational::parse(w).ok_or_else(|| bad("bad weight")))
                                .collect::<Result<_>>()?,
                        ),
                        Some(["covering", k, rest @ ..]) => {
                            let scale = k.parse().map_err(|_| bad("bad covering scale"))?;
                            let body = rest.join(" ");
                            let inner = body
                                .trim()
                                .strip_prefix('{')
                                .and_then(|b| b.strip_suffix('}'))
                                .ok_or_else(|| bad("covering family must be braced"))?;
                            SubmeasureClause::Covering {
                                scale,
                                family: inner.split_whitespace().map(str::to_string).collect(),
                            }
                        }
                        Some(["table", p]) => SubmeasureClause::Table(base.join(p)),
                        Some(["constructed", p]) => SubmeasureClause::Constructed(base.join(p)),
                        _ => return Err(bad("unrecognised submeasure clause")),
                    });
                }
                "fragmentation" => {
                    once(spec.fragmentation.is_some(), "fragmentation")?;
                    spec.fragmentation = Some(match words.get(1..) {
                        Some(["harmonic"]) => FragmentationClause::Harmonic,
                        Some(["dyadic"]) => FragmentationClause::Dyadic,
                        Some(["file", p]) => FragmentationClause::File(base.join(p)),
                        _ => return Err(bad("expected harmonic, dyadic or file <path>")),
                    });
                }
                "family" => {
                    once(spec.family.is_some(), "family")?;
                    spec.family = Some(match words.get(1..) {
                        Some(["atleast", k]) => {
                            FamilyClause::AtLeast(k.parse().map_err(|_| bad("bad size"))?)
                        }
                        Some(members) if !members.is_empty() => {
                            FamilyClause::Members(members.iter().map(|s| s.to_string()).collect())
                        }
                        _ => return Err(bad("empty family")),
                    });
                }
                "eps" => {
                    once(spec.eps.is_some(), "eps")?;
                    spec.eps = Some(
                        words
                            .get(1)
                            .and_then(|w| rational::parse(w))
                            .ok_or_else(|| bad("bad eps"))?,
                    );
                }
                "horizon" => {
                    once(spec.horizon.is_some(), "horizon")?;
                    spec.horizon = Some(
                        words
                            .get(1)
                            .and_then(|w| w.parse().ok())
                            .ok_or_else(|| bad("bad horizon"))?,
                    );
                }
                "budget" => {
                    once(spec.budget.is_some(), "budget")?;
                    spec.budget = Some(
                        words
                            .get(1)
                            .and_then(|w| w.parse().ok())
                            .ok_or_else(|| bad("bad budget"))?,
                    );
                }
                "antichains" => {
                    once(spec.antichains.is_some(), "antichains")?;
                    spec.antichains =
                        Some(base.join(words.get(1).ok_or_else(|| bad("missing path"))?));
                }
                other => return Err(bad(&format!("unknown clause `{other}`"))),
            }
        }
        spec.algebra = algebra.ok_or_else(|| Error::parse(0, "missing algebra clause"))?;
        Ok(spec)
    }

    pub fn submeasure(&self, budget: &mut Budget) -> Result<Submeasure> {
        let alg = self.algebra;
        match self
            .submeasure
            .as_ref()
            .ok_or_else(|| Error::input("spec has no submeasure clause"))?
        {
            SubmeasureClause::Uniform => Ok(Submeasure::uniform(alg)),
            SubmeasureClause::Trivial => Ok(Submeasure::trivial(alg)),
            SubmeasureClause::Weights(w) => Submeasure::from_atom_weights(alg, w.clone()),
            SubmeasureClause::Covering { scale, family } => {
                let members = family
                    .iter()
                    .map(|s| alg.parse_element(s))
                    .collect::<Result<Vec<_>>>()?;
                Submeasure::from_covering(alg, CoveringParams::new(members, *scale)?)
            }
            SubmeasureClause::Table(p) => {
                let file = TableFile::parse(&std::fs::read_to_string(p)?)?;
                if Some(file.atoms) != alg.atom_count() {
                    return Err(Error::input(
                        "table atom count differs from the algebra clause",
                    ));
                }
                file.into_submeasure()
            }
            SubmeasureClause::Constructed(p) => {
                let f = Fragmentation::parse(&std::fs::read_to_string(p)?, alg)?;
                construct_submeasure(&f, budget)
            }
        }
    }

    pub fn fragmentation(&self, budget: &mut Budget) -> Result<Fragmentation> {
        match self
            .fragmentation
            .as_ref()
            .ok_or_else(|| Error::input("spec has no fragmentation clause"))?
        {
            FragmentationClause::Harmonic => {
                Fragmentation::from_submeasure_harmonic(&self.submeasure(budget)?)
            }
            FragmentationClause::Dyadic => {
                Fragmentation::from_submeasure_dyadic(&self.submeasure(budget)?)
            }
            FragmentationClause::File(p) => {
                Fragmentation::parse(&std::fs::read_to_string(p)?, self.algebra)
            }
        }
    }

    pub fn family(&self) -> Result<Vec<Element>> {
        let alg = self.algebra;
        match self
            .family
            .as_ref()
            .ok_or_else(|| Error::input("spec has no family clause"))?
        {
            FamilyClause::AtLeast(k) => {
                let full = alg.full_mask()?;
                Ok((1..=full)
                    .filter(|m| m.count_ones() >= *k)
                    .map(Element::Finite)
                    .collect())
            }
            FamilyClause::Members(ms) => ms.iter().map(|s| alg.parse_element(s)).collect(),
        }
    }

    pub fn antichain_script(&self) -> Result<Option<AntichainScript>> {
        self.antichains
            .as_ref()
            .map(|p| AntichainScript::parse(&std::fs::read_to_string(p)?, self.algebra))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn parses_all_clauses() {
        let text = "algebra finite 4   # comment\nsubmeasure covering 2 { 0x3 0xc }\n\
                    fragmentation file frag.txt\nfamily atleast 2\neps 1/8\nhorizon 20\nbudget 99\n\
                    antichains a.txt\n";
        let s = SpecFile::parse(text, Path::new("/tmp/x")).unwrap();
        assert_eq!(s.algebra, Algebra::finite(4).unwrap());
        assert_eq!(
            s.submeasure,
            Some(SubmeasureClause::Covering {
                scale: 2,
                family: vec!["0x3".into(), "0xc".into()]
            })
        );
        assert_eq!(
            s.fragmentation,
            Some(FragmentationClause::File("/tmp/x/frag.txt".into()))
        );
        assert_eq!(s.eps, Some(ratio(1, 8)));
        assert_eq!(s.family().unwrap().len(), 11);
        assert_eq!(s.budget, Some(99));
    }

    #[test]
    fn rejects_bad_specs() {
        let base = Path::new(".");
        assert!(SpecFile::parse("submeasure uniform\n", base).is_err());
        assert!(SpecFile::parse("algebra finite 4\nalgebra cantor\n", base).is_err());
        assert!(SpecFile::parse("algebra finite 40\n", base).is_err());
        assert!(SpecFile::parse("algebra cantor\nsubmeasure nonsense\n", base).is_err());
        assert!(SpecFile::parse("algebra cantor\nwhatever\n", base).is_err());
    }

    #[test]
    fn builds_inputs() {
        let s = SpecFile::parse(
            "algebra finite 3\nsubmeasure weights 1/2 1/4 1/4\nfragmentation dyadic\n",
            Path::new("."),
        )
        .unwrap();
        let mut b = Budget::default();
        let m = s.submeasure(&mut b).unwrap();
        assert_eq!(m.eval(&Element::Finite(0b011)).unwrap(), ratio(3, 4));
        assert_eq!(s.fragmentation(&mut b).unwrap().level_count(), Some(2));
        assert!(s.family().is_err());
    }
}
