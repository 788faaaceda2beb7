use crate::algebra::{Algebra, Element};
use crate::error::Result;

/// An upward-closed family stored by its minimal elements.
///
/// `a` is a member iff some generator lies below `a`. The complement of the
/// family is downward closed and shares the same generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpwardClosedFamily {
    algebra: Algebra,
    generators: Vec<Element>,
}

impl UpwardClosedFamily {
    pub fn empty(algebra: Algebra) -> Self {
        UpwardClosedFamily {
            algebra,
            generators: Vec::new(),
        }
    }

    /// Finite-backend constructor from masks that are already pairwise
    /// incomparable. Sorted into mask order.
    pub(crate) fn from_minimal_masks(algebra: Algebra, mut masks: Vec<u32>) -> Self {
        masks.sort_unstable();
        masks.dedup();
        UpwardClosedFamily {
            algebra,
            generators: masks.into_iter().map(Element::Finite).collect(),
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generator masks; empty on the Cantor backend.
    pub fn masks(&self) -> Vec<u32> {
        self.generators.iter().filter_map(Element::mask).collect()
    }

    pub fn member(&self, a: &Element) -> Result<bool> {
        self.algebra.check(a)?;
        if let Element::Finite(x) = a {
            return Ok(self
                .generators
                .iter()
                .any(|g| matches!(g, Element::Finite(m) if m & !x == 0)));
        }
        for g in &self.generators {
            if self.algebra.leq(g, a)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// The least upward-closed family containing `xs`; generators are the
/// minimal elements of `xs`.
pub fn upward_closure(algebra: Algebra, xs: &[Element]) -> Result<UpwardClosedFamily> {
    for x in xs {
        algebra.check(x)?;
    }
    if let Algebra::Finite { .. } = algebra {
        let mut masks: Vec<u32> = xs.iter().filter_map(Element::mask).collect();
        masks.sort_unstable_by_key(|m| (m.count_ones(), *m));
        masks.dedup();
        let mut minimal: Vec<u32> = Vec::new();
        for m in masks {
            if !minimal.iter().any(|g| g & !m == 0) {
                minimal.push(m);
            }
        }
        return Ok(UpwardClosedFamily::from_minimal_masks(algebra, minimal));
    }
    let mut sorted: Vec<Element> = xs.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut minimal: Vec<Element> = Vec::new();
    for x in &sorted {
        let mut dominated = false;
        for y in &sorted {
            if y != x && algebra.leq(y, x)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            minimal.push(x.clone());
        }
    }
    Ok(UpwardClosedFamily {
        algebra,
        generators: minimal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Algebra {
        Algebra::finite(4).unwrap()
    }

    #[test]
    fn membership_examples() {
        let c = upward_closure(f4(), &[Element::Finite(0b0011)]).unwrap();
        assert!(c.member(&Element::Finite(0b0111)).unwrap());
        assert!(!c.member(&Element::Finite(0b0001)).unwrap());
        let empty = UpwardClosedFamily::empty(f4());
        assert!(!empty.member(&Element::Finite(0b1111)).unwrap());
    }

    #[test]
    fn closure_keeps_minimal() {
        let c = upward_closure(f4(), &[Element::Finite(0b0011), Element::Finite(0b0111)]).unwrap();
        assert_eq!(c.generators(), &[Element::Finite(0b0011)]);
        let c = upward_closure(f4(), &[Element::Finite(0b0010), Element::Finite(0b0001)]).unwrap();
        assert_eq!(
            c.generators(),
            &[Element::Finite(0b0001), Element::Finite(0b0010)]
        );
        assert!(upward_closure(f4(), &[]).unwrap().is_empty());
    }

    #[test]
    fn cantor_closure() {
        use crate::algebra::{Node, NodeSet};
        let el = |s: &[&str]| {
            Element::Cantor(NodeSet::from_nodes(
                s.iter().map(|x| Node::parse(x).unwrap()),
            ))
        };
        let c = upward_closure(Algebra::cantor(), &[el(&["0"]), el(&["01"]), el(&["1"])]).unwrap();
        assert_eq!(c.generators().len(), 2);
        assert!(c.member(&el(&["01", "10"])).unwrap());
        assert!(!c.member(&el(&["00"])).unwrap());
    }
}
