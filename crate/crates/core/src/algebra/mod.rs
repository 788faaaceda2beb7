//! Boolean algebras with exact element representations.
//!
//! Two backends sit behind [`Algebra`]: the powerset of `N <= 24` atoms, whose
//! elements are bitmasks, and the clopen algebra of Cantor space, whose
//! elements are canonical node sets (see [`cantor`]). Operations on elements
//! from different backends fail with [`Error::MixedBackend`].

pub mod cantor;
mod family;
mod packing;

use std::fmt;

pub use cantor::{Node, NodeSet};
pub use family::{upward_closure, UpwardClosedFamily};
pub use packing::{max_disjoint_packing, max_packing_masks, Packing, PackingOutcome};

use crate::error::{Error, Result};

pub const MAX_ATOMS: u8 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Finite(u32),
    Cantor(NodeSet),
}

impl Element {
    pub fn mask(&self) -> Option<u32> {
        match self {
            Element::Finite(m) => Some(*m),
            Element::Cantor(_) => None,
        }
    }

    pub fn nodes(&self) -> Option<&NodeSet> {
        match self {
            Element::Cantor(s) => Some(s),
            Element::Finite(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Finite(m) => *m == 0,
            Element::Cantor(s) => s.is_empty(),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Finite(m) => write!(f, "{m:#x}"),
            Element::Cantor(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algebra {
    /// Powerset of `atoms` atoms.
    Finite { atoms: u8 },
    /// Clopen algebra of `{0,1}^N`; atomless.
    Cantor,
}

impl Algebra {
    pub fn finite(atoms: u8) -> Result<Algebra> {
        if atoms == 0 || atoms > MAX_ATOMS {
            return Err(Error::input(format!(
                "finite algebras need 1..={MAX_ATOMS} atoms, got {atoms}"
            )));
        }
        Ok(Algebra::Finite { atoms })
    }

    pub fn cantor() -> Algebra {
        Algebra::Cantor
    }

    pub fn atom_count(&self) -> Option<u8> {
        match self {
            Algebra::Finite { atoms } => Some(*atoms),
            Algebra::Cantor => None,
        }
    }

    /// Atom count, or [`Error::Unsupported`] on the Cantor backend.
    pub fn require_finite(&self) -> Result<u8> {
        self.atom_count().ok_or(Error::Unsupported("finite"))
    }

    /// Mask of the top element (finite backend).
    pub fn full_mask(&self) -> Result<u32> {
        Ok(full_mask(self.require_finite()?))
    }

    pub fn zero(&self) -> Element {
        match self {
            Algebra::Finite { .. } => Element::Finite(0),
            Algebra::Cantor => Element::Cantor(NodeSet::empty()),
        }
    }

    pub fn one(&self) -> Element {
        match self {
            Algebra::Finite { atoms } => Element::Finite(full_mask(*atoms)),
            Algebra::Cantor => Element::Cantor(NodeSet::full()),
        }
    }

    pub fn atom(&self, index: u8) -> Result<Element> {
        let n = self.require_finite()?;
        if index >= n {
            return Err(Error::input(format!("atom {index} out of range")));
        }
        Ok(Element::Finite(1 << index))
    }

    pub fn element(&self, mask: u32) -> Result<Element> {
        let e = Element::Finite(mask);
        self.check(&e)?;
        Ok(e)
    }

    /// Validates that `a` lives in this algebra.
    /// Parses `0x..` masks (finite) or `{node,node,...}` node sets (Cantor),
    /// where `e` names the root.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let t = text.trim();
        match self {
            Algebra::Finite { .. } => {
                let mask = parse_mask(t).ok_or_else(|| Error::input(format!("bad mask `{t}`")))?;
                self.element(mask)
            }
            Algebra::Cantor => {
                let inner = t
                    .strip_prefix('{')
                    .and_then(|r| r.strip_suffix('}'))
                    .ok_or_else(|| Error::input(format!("node set `{t}` must be braced")))?;
                let nodes = inner
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| Node::parse(s).ok_or_else(|| Error::input(format!("bad node `{s}`"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Element::Cantor(NodeSet::from_nodes(nodes)))
            }
        }
    }

    pub fn check(&self, a: &Element) -> Result<()> {
        match (self, a) {
            (Algebra::Finite { atoms }, Element::Finite(mask)) => {
                if *mask & !full_mask(*atoms) != 0 {
                    Err(Error::MaskOutOfRange {
                        mask: *mask,
                        atoms: *atoms,
                    })
                } else {
                    Ok(())
                }
            }
            (Algebra::Cantor, Element::Cantor(_)) => Ok(()),
            _ => Err(Error::MixedBackend),
        }
    }

    fn pair<'a>(&self, a: &'a Element, b: &'a Element) -> Result<Operands<'a>> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (Element::Finite(x), Element::Finite(y)) => Operands::Finite(*x, *y),
            (Element::Cantor(x), Element::Cantor(y)) => Operands::Cantor(x, y),
            _ => return Err(Error::MixedBackend),
        })
    }

    pub fn join(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(match self.pair(a, b)? {
            Operands::Finite(x, y) => Element::Finite(x | y),
            Operands::Cantor(x, y) => Element::Cantor(x.join(y)),
        })
    }

    pub fn meet(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(match self.pair(a, b)? {
            Operands::Finite(x, y) => Element::Finite(x & y),
            Operands::Cantor(x, y) => Element::Cantor(x.meet(y)),
        })
    }

    pub fn symdiff(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(match self.pair(a, b)? {
            Operands::Finite(x, y) => Element::Finite(x ^ y),
            Operands::Cantor(x, y) => Element::Cantor(x.symdiff(y)),
        })
    }

    pub fn leq(&self, a: &Element, b: &Element) -> Result<bool> {
        Ok(match self.pair(a, b)? {
            Operands::Finite(x, y) => x & !y == 0,
            Operands::Cantor(x, y) => x.leq(y),
        })
    }

    pub fn disjoint(&self, a: &Element, b: &Element) -> Result<bool> {
        Ok(match self.pair(a, b)? {
            Operands::Finite(x, y) => x & y == 0,
            Operands::Cantor(x, y) => x.is_disjoint(y),
        })
    }

    pub fn complement(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(match (self, a) {
            (Algebra::Finite { atoms }, Element::Finite(x)) => {
                Element::Finite(!x & full_mask(*atoms))
            }
            (Algebra::Cantor, Element::Cantor(x)) => Element::Cantor(x.complement()),
            _ => unreachable!("checked above"),
        })
    }

    /// Pairwise disjoint pieces joining to `a`: the atoms below `a` on the
    /// finite backend, the canonical nodes of `a` on the Cantor backend.
    pub fn atoms_below(&self, a: &Element) -> Result<Vec<Element>> {
        self.check(a)?;
        Ok(match a {
            Element::Finite(x) => bits(*x).map(|i| Element::Finite(1 << i)).collect(),
            Element::Cantor(s) => s
                .nodes()
                .iter()
                .map(|&n| Element::Cantor(NodeSet::single(n)))
                .collect(),
        })
    }

    /// Pairwise disjoint and nonzero. An empty list is vacuously an antichain.
    pub fn is_antichain(&self, xs: &[Element]) -> Result<bool> {
        for x in xs {
            self.check(x)?;
        }
        if xs.iter().any(Element::is_zero) {
            return Ok(false);
        }
        for (i, x) in xs.iter().enumerate() {
            for y in &xs[i + 1..] {
                if !self.disjoint(x, y)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// All `2^N` elements in mask order (finite backend).
    pub fn elements(&self) -> Result<impl Iterator<Item = Element>> {
        let n = self.require_finite()?;
        Ok((0..=full_mask(n)).map(Element::Finite))
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::Finite { atoms } => write!(f, "finite({atoms})"),
            Algebra::Cantor => f.write_str("cantor"),
        }
    }
}

enum Operands<'a> {
    Finite(u32, u32),
    Cantor(&'a NodeSet, &'a NodeSet),
}

#[inline]
pub fn full_mask(atoms: u8) -> u32 {
    if atoms >= 32 {
        u32::MAX
    } else {
        (1u32 << atoms) - 1
    }
}

/// Indices of set bits, ascending.
pub fn bits(mut mask: u32) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros();
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Nonempty submasks of `mask`, descending from `mask` itself.
pub fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut cur = Some(mask);
    std::iter::from_fn(move || {
        let s = cur?;
        if s == 0 {
            cur = None;
            return None;
        }
        cur = Some((s - 1) & mask);
        Some(s)
    })
}

/// Minimal masks of the set `{mask : member[mask]}` (finite backend helper).
pub(crate) fn minimal_masks(member: &[bool]) -> Vec<u32> {
    let size = member.len();
    let atoms = size.trailing_zeros();
    // below[m]: some member is a subset of m
    let mut below = member.to_vec();
    for i in 0..atoms {
        let bit = 1usize << i;
        for m in 0..size {
            if m & bit != 0 && below[m ^ bit] {
                below[m] = true;
            }
        }
    }
    (0..size)
        .filter(|&m| member[m] && bits(m as u32).all(|i| !below[m ^ (1 << i)]))
        .map(|m| m as u32)
        .collect()
}

pub fn parse_mask(text: &str) -> Option<u32> {
    let t = text.trim();
    let t = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    u32::from_str_radix(t, 16).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Algebra {
        Algebra::finite(4).unwrap()
    }

    fn cset(nodes: &[&str]) -> Element {
        Element::Cantor(NodeSet::from_nodes(
            nodes.iter().map(|s| Node::parse(s).unwrap()),
        ))
    }

    #[test]
    fn parse_elements() {
        assert_eq!(f4().parse_element("0x3").unwrap(), Element::Finite(3));
        assert!(f4().parse_element("0x10").is_err());
        let c = Algebra::cantor();
        assert_eq!(c.parse_element("{0, 10}").unwrap(), cset(&["0", "10"]));
        assert_eq!(c.parse_element("{}").unwrap(), c.zero());
        assert_eq!(c.parse_element("{e}").unwrap(), c.one());
        assert!(c.parse_element("0").is_err());
    }

    #[test]
    fn finite_ops() {
        let b = f4();
        let j = b
            .join(&Element::Finite(0b0011), &Element::Finite(0b0101))
            .unwrap();
        assert_eq!(j, Element::Finite(0b0111));
        let a = Element::Finite(0b1010);
        assert!(b.symdiff(&a, &a).unwrap().is_zero());
        assert_eq!(b.complement(&a).unwrap(), Element::Finite(0b0101));
    }

    #[test]
    fn cantor_sibling_join_is_one() {
        let c = Algebra::cantor();
        let j = c.join(&cset(&["0"]), &cset(&["1"])).unwrap();
        assert_eq!(j, c.one());
        let a = cset(&["10", "0"]);
        assert!(c.symdiff(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn mixed_backends_rejected() {
        let err = f4().join(&Element::Finite(1), &cset(&["0"])).unwrap_err();
        assert!(matches!(err, Error::MixedBackend));
        let err = f4()
            .join(&Element::Finite(1), &Element::Finite(0x10))
            .unwrap_err();
        assert!(matches!(err, Error::MaskOutOfRange { .. }));
        assert!(Algebra::finite(0).is_err());
        assert!(Algebra::finite(25).is_err());
    }

    #[test]
    fn atoms_below_examples() {
        let b = f4();
        assert_eq!(
            b.atoms_below(&Element::Finite(0b0110)).unwrap(),
            vec![Element::Finite(0b0010), Element::Finite(0b0100)]
        );
        assert!(b.atoms_below(&Element::Finite(0)).unwrap().is_empty());
        let c = Algebra::cantor();
        let a = cset(&["00", "01"]);
        assert_eq!(a, cset(&["0"]));
        assert_eq!(c.atoms_below(&a).unwrap(), vec![cset(&["0"])]);
    }

    #[test]
    fn antichain_examples() {
        let b = f4();
        let ok = [0b0001, 0b0010, 0b1100].map(Element::Finite);
        assert!(b.is_antichain(&ok).unwrap());
        let bad = [0b0011, 0b0010].map(Element::Finite);
        assert!(!b.is_antichain(&bad).unwrap());
        let with_zero = [0b0001, 0].map(Element::Finite);
        assert!(!b.is_antichain(&with_zero).unwrap());
        let c = Algebra::cantor();
        assert!(c
            .is_antichain(&[cset(&["0"]), cset(&["10"]), cset(&["11"])])
            .unwrap());
        assert!(!c.is_antichain(&[cset(&["0"]), cset(&["01"])]).unwrap());
    }

    #[test]
    fn mask_helpers() {
        assert_eq!(bits(0b1010).collect::<Vec<_>>(), vec![1, 3]);
        let mut subs: Vec<u32> = submasks(0b101).collect();
        subs.sort();
        assert_eq!(subs, vec![0b001, 0b100, 0b101]);
        assert_eq!(parse_mask("0x1f"), Some(31));
        assert_eq!(parse_mask("ff"), Some(255));
    }
}
