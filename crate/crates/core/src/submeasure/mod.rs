//! Submeasures with exact rational values.
//!
//! A [`Submeasure`] is an evaluation map from elements to rationals in
//! `[0, 1]` together with the data that defines it. Nothing about the
//! constructors guarantees the submeasure axioms except for atom weights;
//! [`check_axioms`] is the authority.

mod axioms;
mod covering;
mod exhaustive;
mod table;

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

pub use axioms::{
    check_axioms, check_axioms_with, AxiomReport, CheckMode, Violation, MAX_EXHAUSTIVE_ATOMS,
};
pub use covering::CoveringParams;
pub use exhaustive::{is_exhaustive_on, uniform_exhaustivity_bound, ExhaustivityOutcome};
pub use table::TableFile;

use crate::algebra::{bits, full_mask, Algebra, Element};
use crate::budget::Budget;
use crate::construction::CantorConstruction;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone)]
pub enum Kind {
    /// Finitely additive: `m(a)` is the sum of the weights of the atoms of `a`.
    AtomWeights(Vec<Rational>),
    /// Lebesgue measure on the Cantor backend.
    Lebesgue,
    /// `m(a) = 1` for every nonzero `a`. A submeasure that is not exhaustive.
    Trivial,
    Covering(CoveringParams),
    Table(Arc<[Rational]>),
    /// Output of the dyadic construction, tabulated (finite backend).
    Constructed {
        table: Arc<[Rational]>,
        levels: usize,
    },
    /// Output of the dyadic construction, evaluated on demand (Cantor backend).
    ConstructedCantor(Arc<CantorConstruction>),
}

impl Kind {
    pub fn tag(&self) -> &'static str {
        match self {
            Kind::AtomWeights(_) => "atom-weights",
            Kind::Lebesgue => "lebesgue",
            Kind::Trivial => "trivial",
            Kind::Covering(_) => "covering-family",
            Kind::Table(_) => "table",
            Kind::Constructed { .. } | Kind::ConstructedCantor(_) => "constructed",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Submeasure {
    algebra: Algebra,
    kind: Kind,
}

impl Submeasure {
    pub fn from_atom_weights(algebra: Algebra, weights: Vec<Rational>) -> Result<Submeasure> {
        let n = algebra.require_finite()?;
        if weights.len() != n as usize {
            return Err(Error::input(format!(
                "expected {n} atom weights, got {}",
                weights.len()
            )));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::input("atom weights must be nonnegative"));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::input(format!("atom weights sum to {total}, not 1")));
        }
        Ok(Submeasure {
            algebra,
            kind: Kind::AtomWeights(weights),
        })
    }

    /// Equal atom weights on the finite backend, Lebesgue measure on Cantor space.
    pub fn uniform(algebra: Algebra) -> Submeasure {
        match algebra {
            Algebra::Finite { atoms } => {
                let w = rational::ratio(1, i64::from(atoms));
                Submeasure {
                    algebra,
                    kind: Kind::AtomWeights(vec![w; atoms as usize]),
                }
            }
            Algebra::Cantor => Submeasure::lebesgue(),
        }
    }

    pub fn lebesgue() -> Submeasure {
        Submeasure {
            algebra: Algebra::Cantor,
            kind: Kind::Lebesgue,
        }
    }

    pub fn trivial(algebra: Algebra) -> Submeasure {
        Submeasure {
            algebra,
            kind: Kind::Trivial,
        }
    }

    pub fn from_covering(algebra: Algebra, params: CoveringParams) -> Result<Submeasure> {
        params.validate(algebra)?;
        Ok(Submeasure {
            algebra,
            kind: Kind::Covering(params),
        })
    }

    /// A total table indexed by mask. Values must lie in `[0, 1]` with
    /// `m(0) = 0` and `m(1) = 1`; everything else is left to the axiom checker.
    pub fn from_table(algebra: Algebra, values: Vec<Rational>) -> Result<Submeasure> {
        Ok(Submeasure {
            algebra,
            kind: Kind::Table(validate_table(algebra, values)?),
        })
    }

    pub(crate) fn constructed(
        algebra: Algebra,
        values: Vec<Rational>,
        levels: usize,
    ) -> Submeasure {
        Submeasure {
            algebra,
            kind: Kind::Constructed {
                table: values.into(),
                levels,
            },
        }
    }

    pub(crate) fn constructed_cantor(c: CantorConstruction) -> Submeasure {
        Submeasure {
            algebra: Algebra::Cantor,
            kind: Kind::ConstructedCantor(Arc::new(c)),
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    /// Finitely additive by construction.
    pub fn is_additive_by_construction(&self) -> bool {
        matches!(self.kind, Kind::AtomWeights(_) | Kind::Lebesgue)
    }

    pub fn eval(&self, a: &Element) -> Result<Rational> {
        self.eval_with(a, &mut Budget::default())
    }

    pub fn eval_with(&self, a: &Element, budget: &mut Budget) -> Result<Rational> {
        self.algebra.check(a)?;
        Ok(match (&self.kind, a) {
            (Kind::AtomWeights(w), Element::Finite(m)) => bits(*m).map(|i| &w[i as usize]).sum(),
            (Kind::Lebesgue, Element::Cantor(s)) => s.lebesgue(),
            (Kind::Trivial, _) => {
                if a.is_zero() {
                    Rational::zero()
                } else {
                    Rational::one()
                }
            }
            (Kind::Covering(p), Element::Finite(m)) => p.value(p.cover_count(*m, budget)?),
            (Kind::Table(t), Element::Finite(m))
            | (Kind::Constructed { table: t, .. }, Element::Finite(m)) => t[*m as usize].clone(),
            (Kind::ConstructedCantor(c), Element::Cantor(_)) => c.eval(a, budget)?,
            _ => return Err(Error::MixedBackend),
        })
    }

    /// Values of every element, indexed by mask (finite backend).
    pub fn values(&self) -> Result<Vec<Rational>> {
        let n = self.algebra.require_finite()?;
        let size = 1usize << n;
        Ok(match &self.kind {
            Kind::AtomWeights(w) => {
                let mut out = vec![Rational::zero(); size];
                for m in 1..size {
                    let low = m.trailing_zeros() as usize;
                    out[m] = &out[m & (m - 1)] + &w[low];
                }
                out
            }
            Kind::Covering(p) => p.cover_table(n).into_iter().map(|c| p.value(c)).collect(),
            Kind::Table(t) | Kind::Constructed { table: t, .. } => t.to_vec(),
            Kind::Trivial => (0..size)
                .map(|m| {
                    if m == 0 {
                        Rational::zero()
                    } else {
                        Rational::one()
                    }
                })
                .collect(),
            Kind::Lebesgue | Kind::ConstructedCantor(_) => {
                return Err(Error::Unsupported("finite"))
            }
        })
    }

    /// `m(a △ b)`; a metric when `m` is strictly positive, a pseudometric otherwise.
    pub fn distance(&self, a: &Element, b: &Element) -> Result<Rational> {
        let d = self.algebra.symdiff(a, b)?;
        self.eval(&d)
    }

    /// Least nonzero element with value zero (finite backend), if any.
    pub fn positivity_witness(&self) -> Result<Option<Element>> {
        let values = self.values()?;
        Ok(values
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, v)| v.is_zero())
            .map(|(m, _)| Element::Finite(m as u32)))
    }

    pub fn to_table_file(&self, source: Option<String>) -> Result<TableFile> {
        let atoms = self.algebra.require_finite()?;
        Ok(TableFile {
            atoms,
            kind: self.kind.tag().to_string(),
            source,
            values: self.values()?,
        })
    }
}

fn validate_table(algebra: Algebra, values: Vec<Rational>) -> Result<Arc<[Rational]>> {
    let n = algebra.require_finite()?;
    let size = full_mask(n) as usize + 1;
    if values.len() != size {
        return Err(Error::input(format!(
            "table has {} entries, expected {size}",
            values.len()
        )));
    }
    if let Some((m, _)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !rational::in_unit_interval(v))
    {
        return Err(Error::input(format!("table value at {m:#x} outside [0,1]")));
    }
    if !values[0].is_zero() || !values[size - 1].is_one() {
        return Err(Error::input("table must have m(0) = 0 and m(1) = 1"));
    }
    Ok(values.into())
}

/// Value table of a finite-backend submeasure with a fast integer image for
/// the scanners.
#[derive(Debug, Clone)]
pub struct ValueTable {
    values: Vec<Rational>,
    scaled: Option<(u64, Vec<u64>)>,
}

impl ValueTable {
    pub fn new(values: Vec<Rational>) -> Self {
        let scaled = rational::scaled_u64(&values);
        ValueTable { values, scaled }
    }

    pub fn of(m: &Submeasure) -> Result<Self> {
        Ok(ValueTable::new(m.values()?))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, mask: u32) -> &Rational {
        &self.values[mask as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    #[inline]
    pub fn le(&self, a: u32, b: u32) -> bool {
        match &self.scaled {
            Some((_, n)) => n[a as usize] <= n[b as usize],
            None => self.values[a as usize] <= self.values[b as usize],
        }
    }

    /// `m(c) <= m(a) + m(b)`
    #[inline]
    pub fn le_sum(&self, c: u32, a: u32, b: u32) -> bool {
        match &self.scaled {
            Some((_, n)) => n[c as usize] <= n[a as usize] + n[b as usize],
            None => self.values[c as usize] <= &self.values[a as usize] + &self.values[b as usize],
        }
    }

    #[inline]
    pub fn is_zero(&self, a: u32) -> bool {
        match &self.scaled {
            Some((_, n)) => n[a as usize] == 0,
            None => self.values[a as usize].is_zero(),
        }
    }

    /// `m(a) >= t`
    pub fn at_least(&self, a: u32, t: &Rational) -> bool {
        self.values[a as usize] >= *t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn f4() -> Algebra {
        Algebra::finite(4).unwrap()
    }

    #[test]
    fn uniform_values() {
        let m = Submeasure::uniform(f4());
        assert_eq!(m.eval(&Element::Finite(0b0011)).unwrap(), ratio(1, 2));
        assert_eq!(m.eval(&Element::Finite(0)).unwrap(), int(0));
        assert_eq!(
            m.distance(&Element::Finite(0b0011), &Element::Finite(0b0101))
                .unwrap(),
            ratio(1, 2)
        );
        let a = Element::Finite(0b0110);
        assert_eq!(m.distance(&a, &a).unwrap(), int(0));
        assert_eq!(
            m.distance(&a, &Element::Finite(0)).unwrap(),
            m.eval(&a).unwrap()
        );
    }

    #[test]
    fn atom_weights_in_index_order() {
        let w = vec![ratio(1, 2), ratio(1, 4), ratio(1, 8), ratio(1, 8)];
        let m = Submeasure::from_atom_weights(f4(), w).unwrap();
        assert_eq!(m.eval(&Element::Finite(0b1100)).unwrap(), ratio(1, 4));
        let bad = vec![ratio(1, 2), ratio(1, 4), ratio(1, 8), ratio(1, 4)];
        assert!(Submeasure::from_atom_weights(f4(), bad).is_err());
        let neg = vec![ratio(3, 2), ratio(-1, 2), int(0), int(0)];
        assert!(Submeasure::from_atom_weights(f4(), neg).is_err());
    }

    #[test]
    fn table_matches_weights() {
        let u = Submeasure::uniform(f4());
        let t = Submeasure::from_table(f4(), u.values().unwrap()).unwrap();
        for a in f4().elements().unwrap() {
            assert_eq!(u.eval(&a).unwrap(), t.eval(&a).unwrap());
        }
        assert!(Submeasure::from_table(f4(), vec![int(0); 3]).is_err());
    }

    #[test]
    fn lebesgue_on_cantor() {
        use crate::algebra::{Node, NodeSet};
        let m = Submeasure::uniform(Algebra::cantor());
        let a = Element::Cantor(NodeSet::from_nodes([
            Node::parse("01").unwrap(),
            Node::parse("1").unwrap(),
        ]));
        assert_eq!(m.eval(&a).unwrap(), ratio(3, 4));
        assert!(m.eval(&Element::Finite(1)).is_err());
    }

    #[test]
    fn positivity_witness_finds_zero_atom() {
        let m = Submeasure::from_atom_weights(
            f4(),
            vec![int(0), ratio(1, 2), ratio(1, 4), ratio(1, 4)],
        )
        .unwrap();
        assert_eq!(m.positivity_witness().unwrap(), Some(Element::Finite(1)));
        assert_eq!(
            Submeasure::uniform(f4()).positivity_witness().unwrap(),
            None
        );
    }
}
