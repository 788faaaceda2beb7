use std::collections::HashMap;

use crate::algebra::{bits, Element, Node, NodeSet};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fragmentation::Fragmentation;
use crate::rational::Rational;

pub(super) const DEFAULT_DEPTH: u8 = 3;
pub(super) const DEFAULT_MAX_LEVEL: usize = 12;
const MAX_PARTS: usize = 16;

/// The construction on the Cantor backend, evaluated on demand.
///
/// Decompositions are searched among unions of the nodes of `a` refined to
/// `depth` (or to the deepest node of `a`, whichever is finer) and levels are
/// capped at `max_level`. Both truncations can only raise the value, so the
/// result is an upper bound for the untruncated minimum that tightens as the
/// depth grows.
#[derive(Debug, Clone)]
pub struct CantorConstruction {
    frag: Fragmentation,
    depth: u8,
    max_level: usize,
}

impl CantorConstruction {
    pub fn new(frag: Fragmentation, depth: u8, max_level: usize) -> Result<Self> {
        if frag.rule().is_none() {
            return Err(Error::Unsupported("cantor"));
        }
        if !(1..=40).contains(&max_level) {
            return Err(Error::input("max level must lie in 1..=40"));
        }
        Ok(CantorConstruction {
            frag,
            depth,
            max_level,
        })
    }

    pub fn fragmentation(&self) -> &Fragmentation {
        &self.frag
    }

    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub fn eval(&self, a: &Element, budget: &mut Budget) -> Result<Rational> {
        let Element::Cantor(set) = a else {
            return Err(Error::MixedBackend);
        };
        if set.is_empty() {
            return Ok(Rational::from_integer(0.into()));
        }
        let parts = parts_of(set, self.depth)?;
        let full = (1u32 << parts.len()) - 1;
        let mut in_u: HashMap<(usize, u32), bool> = HashMap::new();
        let mut memo: HashMap<(usize, u32), u64> = HashMap::new();
        let best = self.best(full, 1, &parts, &mut in_u, &mut memo, budget)?;
        let denom = 1u64 << self.max_level;
        Ok(if best >= denom {
            Rational::from_integer(1.into())
        } else {
            Rational::new(best.into(), denom.into())
        })
    }

    fn best(
        &self,
        rem: u32,
        lo: usize,
        parts: &[Node],
        in_u: &mut HashMap<(usize, u32), bool>,
        memo: &mut HashMap<(usize, u32), u64>,
        budget: &mut Budget,
    ) -> Result<u64> {
        if rem == 0 {
            return Ok(0);
        }
        if lo > self.max_level {
            return Ok(u64::MAX);
        }
        if let Some(&v) = memo.get(&(lo, rem)) {
            return Ok(v);
        }
        budget.step()?;
        let w = 1u64 << (self.max_level - lo);
        let mut v = self.best(rem, lo + 1, parts, in_u, memo, budget)?;
        for sub in crate::algebra::submasks(rem) {
            budget.step()?;
            let key = (lo, sub);
            let ok = match in_u.get(&key) {
                Some(&ok) => ok,
                None => {
                    let ok = self.frag.in_u(lo, &join_parts(parts, sub))?;
                    in_u.insert(key, ok);
                    ok
                }
            };
            if !ok {
                continue;
            }
            let rest = self.best(rem & !sub, lo + 1, parts, in_u, memo, budget)?;
            if rest != u64::MAX {
                v = v.min(w + rest);
            }
        }
        memo.insert((lo, rem), v);
        Ok(v)
    }
}

/// Nodes of `set` refined to `depth`, or left at their own depth if deeper.
pub(super) fn parts_of(set: &NodeSet, depth: u8) -> Result<Vec<Node>> {
    let parts = set.refine_to(depth.max(set.max_depth()));
    if parts.len() > MAX_PARTS {
        return Err(Error::input(format!(
            "element splits into {} parts, more than the {MAX_PARTS} supported",
            parts.len()
        )));
    }
    Ok(parts)
}

pub(super) fn join_parts(parts: &[Node], mask: u32) -> Element {
    Element::Cantor(NodeSet::from_nodes(bits(mask).map(|i| parts[i as usize])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::construct_submeasure;
    use crate::rational::ratio;
    use crate::submeasure::Submeasure;

    fn node(s: &str) -> Element {
        Element::Cantor(NodeSet::single(Node::parse(s).unwrap()))
    }

    #[test]
    fn lebesgue_half_depends_on_depth() {
        let f = Fragmentation::from_submeasure_dyadic(&Submeasure::lebesgue()).unwrap();
        let mut b = Budget::default();
        // block of measure 1/2 - 2^-d at level 1, the last 2^-d piece at level d-1
        for d in 3..=4u8 {
            let c = CantorConstruction::new(f.clone(), d, 12).unwrap();
            let want = ratio(1, 2) + crate::rational::dyadic(u32::from(d) - 1);
            assert_eq!(c.eval(&node("0"), &mut b).unwrap(), want, "depth {d}");
        }
    }

    #[test]
    fn sandwich_on_small_nodes() {
        let f = Fragmentation::from_submeasure_dyadic(&Submeasure::lebesgue()).unwrap();
        let m = construct_submeasure(&f, &mut Budget::default()).unwrap();
        for s in ["0", "01", "110", "0101"] {
            let a = node(s);
            let v = m.eval(&a).unwrap();
            let n0 = f.least_level(&a).unwrap().unwrap() as u32;
            assert!(v >= crate::rational::dyadic(n0), "{s}");
            assert!(v <= crate::rational::dyadic(n0 - 1), "{s}");
        }
        assert_eq!(
            m.eval(&Element::Cantor(NodeSet::empty())).unwrap(),
            ratio(0, 1)
        );
    }

    #[test]
    fn rejects_finite_fragmentations() {
        let alg = crate::algebra::Algebra::finite(2).unwrap();
        let f = Fragmentation::from_submeasure_dyadic(&Submeasure::uniform(alg)).unwrap();
        assert!(CantorConstruction::new(f, 3, 8).is_err());
    }
}
