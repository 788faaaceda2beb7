use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{Algebra, Element, Node, NodeSet};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::submeasure::Submeasure;

/// A nonincreasing bound on the values of a sequence, with limit zero unless
/// stated otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Envelope {
    /// `scale * 2^-n`
    Geometric {
        scale: Rational,
    },
    /// `scale / n` for `n >= 1`, `scale` at `n = 0`
    Harmonic {
        scale: Rational,
    },
    /// Explicit values; the last value repeats past the end.
    Table(Vec<Rational>),
    Constant(Rational),
    /// Pointwise sum, the certificate of a pointwise join.
    Sum(Vec<Envelope>),
}

impl Envelope {
    pub fn geometric(scale: Rational) -> Self {
        Envelope::Geometric { scale }
    }

    pub fn harmonic(scale: Rational) -> Self {
        Envelope::Harmonic { scale }
    }

    pub fn at(&self, n: usize) -> Rational {
        match self {
            Envelope::Geometric { scale } => {
                if n > 4096 {
                    // far below anything representable at desk scale
                    scale * rational::dyadic(4096)
                } else {
                    scale * rational::dyadic(n as u32)
                }
            }
            Envelope::Harmonic { scale } => scale / rational::int(n.max(1) as i64),
            Envelope::Table(t) => t
                .get(n)
                .or_else(|| t.last())
                .cloned()
                .unwrap_or_else(Rational::zero),
            Envelope::Constant(c) => c.clone(),
            Envelope::Sum(parts) => parts.iter().map(|p| p.at(n)).sum(),
        }
    }

    pub fn tends_to_zero(&self) -> bool {
        match self {
            Envelope::Geometric { .. } | Envelope::Harmonic { .. } => true,
            Envelope::Table(t) => t.last().is_none_or(Zero::is_zero),
            Envelope::Constant(c) => c.is_zero(),
            Envelope::Sum(parts) => parts.iter().all(Envelope::tends_to_zero),
        }
    }

    /// Least `n >= from` with `at(n) < t`, searching no further than `limit`.
    pub fn first_below(&self, t: &Rational, from: usize, limit: usize) -> Option<usize> {
        match self {
            Envelope::Harmonic { scale } if !t.is_zero() => {
                // scale / n < t  <=>  n > scale / t
                let q = (scale / t).floor().to_integer();
                let n = num_traits::ToPrimitive::to_usize(&q).map(|q| q + 1)?;
                let n = n.max(from);
                (n <= limit).then_some(n)
            }
            _ => (from..=limit).find(|&n| self.at(n) < *t),
        }
    }

    /// Checks that the first `len` values do not increase.
    pub fn is_nonincreasing(&self, len: usize) -> bool {
        let mut prev = self.at(0);
        for n in 1..len {
            let cur = self.at(n);
            if cur > prev {
                return false;
            }
            prev = cur;
        }
        true
    }
}

impl fmt::Display for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Envelope::Geometric { scale } if scale.is_one() => f.write_str("2^-n"),
            Envelope::Geometric { scale } => write!(f, "({})*2^-n", rational::format(scale)),
            Envelope::Harmonic { scale } if scale.is_one() => f.write_str("1/n"),
            Envelope::Harmonic { scale } => write!(f, "({})/n", rational::format(scale)),
            Envelope::Table(t) => write!(f, "table[{}]", t.len()),
            Envelope::Constant(c) => write!(f, "{}", rational::format(c)),
            Envelope::Sum(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "({p})")?;
                }
                Ok(())
            }
        }
    }
}

type TermFn = Arc<dyn Fn(usize) -> Element + Send + Sync>;

/// A lazily generated sequence `{a_n}` with a certificate of convergence to
/// zero: an envelope `e` with `m(a_n) <= e(n)`. Terms are pure functions of
/// their index, so derived sequences can share the generator.
#[derive(Clone)]
pub struct CertifiedSequence {
    algebra: Algebra,
    start: usize,
    term: TermFn,
    envelope: Envelope,
}

impl fmt::Debug for CertifiedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CertifiedSequence")
            .field("algebra", &self.algebra)
            .field("start", &self.start)
            .field("envelope", &self.envelope)
            .finish_non_exhaustive()
    }
}

impl CertifiedSequence {
    pub fn new(
        algebra: Algebra,
        start: usize,
        envelope: Envelope,
        term: impl Fn(usize) -> Element + Send + Sync + 'static,
    ) -> Self {
        CertifiedSequence {
            algebra,
            start,
            term: Arc::new(term),
            envelope,
        }
    }

    /// Finite prefix given explicitly; past the end the sequence is zero.
    pub fn from_terms(
        algebra: Algebra,
        start: usize,
        envelope: Envelope,
        terms: Vec<Element>,
    ) -> Self {
        let zero = algebra.zero();
        let terms = Arc::new(terms);
        CertifiedSequence::new(algebra, start, envelope, move |n| {
            n.checked_sub(start)
                .and_then(|i| terms.get(i).cloned())
                .unwrap_or_else(|| zero.clone())
        })
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn envelope(&self) -> &Envelope {
        &self.envelope
    }

    pub fn term(&self, n: usize) -> Element {
        (self.term)(n)
    }

    /// The term with its value, rejected if it exceeds the envelope.
    pub fn checked_term(&self, m: &Submeasure, n: usize) -> Result<(Element, Rational)> {
        let e = self.term(n);
        let v = m.eval(&e)?;
        let bound = self.envelope.at(n);
        if v > bound {
            return Err(Error::envelope(n, v, bound));
        }
        Ok((e, v))
    }

    /// `{a_{f(n)}}` for a strictly increasing `f` with `f(n) >= n`. The
    /// original envelope still bounds it because envelopes never increase.
    pub fn subsequence(&self, index_map: impl Fn(usize) -> usize + Send + Sync + 'static) -> Self {
        let inner = self.term.clone();
        CertifiedSequence {
            algebra: self.algebra,
            start: self.start,
            term: Arc::new(move |n| inner(index_map(n))),
            envelope: self.envelope.clone(),
        }
    }

    /// `{b_n}` with `b_n <= a_n`; `shrink` must return something below its
    /// input. Keeps the envelope by monotonicity.
    pub fn dominated(
        &self,
        shrink: impl Fn(usize, Element) -> Element + Send + Sync + 'static,
    ) -> Self {
        let inner = self.term.clone();
        CertifiedSequence {
            algebra: self.algebra,
            start: self.start,
            term: Arc::new(move |n| shrink(n, inner(n))),
            envelope: self.envelope.clone(),
        }
    }

    /// `{a_n ∨ b_n}` certified by the sum of the envelopes (subadditivity).
    pub fn join(&self, other: &CertifiedSequence) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::MixedBackend);
        }
        let (a, b) = (self.term.clone(), other.term.clone());
        let alg = self.algebra;
        Ok(CertifiedSequence {
            algebra: alg,
            start: self.start.max(other.start),
            term: Arc::new(move |n| alg.join(&a(n), &b(n)).expect("same algebra")),
            envelope: Envelope::Sum(vec![self.envelope.clone(), other.envelope.clone()]),
        })
    }
}

/// A stream of pairwise disjoint nonzero elements, indexed from `start`.
/// Disjointness is checked against everything emitted so far.
pub struct AntichainStream {
    algebra: Algebra,
    start: usize,
    next_index: usize,
    source: Box<dyn Iterator<Item = Element> + Send>,
    envelope: Option<Envelope>,
    history: Vec<Element>,
    joined: Element,
}

impl AntichainStream {
    pub fn new(
        algebra: Algebra,
        start: usize,
        envelope: Option<Envelope>,
        source: impl Iterator<Item = Element> + Send + 'static,
    ) -> Self {
        AntichainStream {
            algebra,
            start,
            next_index: start,
            source: Box::new(source),
            envelope,
            history: Vec::new(),
            joined: algebra.zero(),
        }
    }

    pub fn from_elements(algebra: Algebra, start: usize, elements: Vec<Element>) -> Self {
        AntichainStream::new(algebra, start, None, elements.into_iter())
    }

    /// The atoms of a finite algebra, in index order from 0.
    pub fn atoms(algebra: Algebra) -> Result<Self> {
        let n = algebra.require_finite()?;
        Ok(AntichainStream::from_elements(
            algebra,
            0,
            (0..n).map(|i| Element::Finite(1 << i)).collect(),
        ))
    }

    /// `1, 01, 001, ...`: the node `0^(n-1) 1` at index `n >= 1`, whose
    /// Lebesgue measure is `2^-n`.
    pub fn cantor_depth_nodes() -> Self {
        let nodes = (1..=crate::algebra::cantor::MAX_DEPTH).map(|d| {
            let node = Node::new(d, 1).expect("depth within range");
            Element::Cantor(NodeSet::single(node))
        });
        AntichainStream::new(
            Algebra::Cantor,
            1,
            Some(Envelope::geometric(rational::int(1))),
            nodes,
        )
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn envelope(&self) -> Option<&Envelope> {
        self.envelope.as_ref()
    }

    pub fn emitted(&self) -> &[Element] {
        &self.history
    }
}

impl Iterator for AntichainStream {
    type Item = Result<(usize, Element)>;

    fn next(&mut self) -> Option<Self::Item> {
        let e = self.source.next()?;
        let index = self.next_index;
        self.next_index += 1;
        Some(self.admit(index, e))
    }
}

impl AntichainStream {
    fn admit(&mut self, index: usize, e: Element) -> Result<(usize, Element)> {
        self.algebra.check(&e)?;
        if e.is_zero() {
            return Err(Error::input(format!(
                "antichain stream emitted 0 at index {index}"
            )));
        }
        if !self.algebra.disjoint(&e, &self.joined)? {
            let mut first = 0;
            for (i, prev) in self.history.iter().enumerate() {
                if !self.algebra.disjoint(prev, &e)? {
                    first = i;
                    break;
                }
            }
            return Err(Error::NotDisjoint {
                first: self.start + first,
                second: index,
            });
        }
        self.joined = self.algebra.join(&self.joined, &e)?;
        self.history.push(e.clone());
        Ok((index, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dyadic, ratio};

    #[test]
    fn envelope_values() {
        let g = Envelope::geometric(rational::int(1));
        assert_eq!(g.at(3), dyadic(3));
        assert_eq!(g.first_below(&ratio(1, 5), 0, 100), Some(3));
        let h = Envelope::harmonic(rational::int(1));
        assert_eq!(h.at(4), ratio(1, 4));
        assert_eq!(h.first_below(&ratio(1, 4), 1, 100), Some(5));
        let s = Envelope::Sum(vec![g.clone(), h]);
        assert_eq!(s.at(2), ratio(3, 4));
        assert!(s.is_nonincreasing(50));
        assert!(!Envelope::Constant(ratio(1, 2)).tends_to_zero());
    }

    #[test]
    fn depth_nodes_are_disjoint() {
        let s = AntichainStream::cantor_depth_nodes();
        let items: Vec<_> = s.take(10).collect::<Result<_>>().unwrap();
        assert_eq!(items[0].0, 1);
        let m = Submeasure::lebesgue();
        assert_eq!(m.eval(&items[3].1).unwrap(), dyadic(4));
    }

    #[test]
    fn derived_sequences() {
        let alg = Algebra::cantor();
        let s = CertifiedSequence::new(alg, 0, Envelope::geometric(rational::int(1)), |n| {
            Element::Cantor(NodeSet::single(Node::new(n as u8, 0).unwrap()))
        });
        let m = Submeasure::lebesgue();
        for n in 0..20 {
            s.checked_term(&m, n).unwrap();
            s.subsequence(|k| 2 * k).checked_term(&m, n).unwrap();
        }
        let j = s.join(&s.subsequence(|k| k + 1)).unwrap();
        assert_eq!(j.envelope().at(1), ratio(1, 2) + ratio(1, 2));
        j.checked_term(&m, 5).unwrap();
    }
}
