//! Kelley intersection numbers and finitely additive measures extracted from
//! fragmentations (finite backend).
//!
//! The intersection number of a family `F` is
//!
//! ```text
//! max over probability weightings μ of the atoms of  min_{a ∈ F} μ(a).
//! ```
//!
//! It is solved through the fractional packing LP
//! `max Σ y_a` subject to `Σ_{a ∋ i} y_a <= 1` for every atom `i`, `y >= 0`.
//! Its optimum `P` is the reciprocal of the intersection number, and the
//! optimal covering duals `w` (with `Σ_{i ∈ a} w_i >= 1` on every member)
//! scaled to `w / P` are an optimal `μ`. Only the minimal members matter,
//! since `μ` is monotone.

mod simplex;

use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use simplex::{maximize, LpSolution};

use crate::algebra::{bits, Algebra, Element};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fragmentation::Fragmentation;
use crate::par::{self, Exec};
use crate::rational::{self, Rational};
use crate::submeasure::Submeasure;

/// Longest sequence [`sequence_ratio`] accepts.
pub const SEQUENCE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionResult {
    pub value: Rational,
    /// Atom weights summing to 1 with `μ(a) >= value` on every member.
    pub mu: Vec<Rational>,
    /// Members repeated in proportion to the optimal packing, when that
    /// fits within [`SEQUENCE_CAP`]; its ratio equals `value`.
    pub dual_sequence: Option<Vec<Element>>,
}

impl IntersectionResult {
    pub fn weight_of(&self, a: &Element) -> Result<Rational> {
        let mask = a.mask().ok_or(Error::Unsupported("finite"))?;
        Ok(bits(mask).map(|i| &self.mu[i as usize]).sum())
    }

    /// `mu atom=<i> value=<p>/<q>` lines followed by `value=<p>/<q>`.
    pub fn render_certificate(&self) -> String {
        let mut out = String::new();
        for (i, w) in self.mu.iter().enumerate() {
            writeln!(out, "mu atom={i} value={}", rational::format(w)).unwrap();
        }
        writeln!(out, "value={}", rational::format(&self.value)).unwrap();
        out
    }
}

pub fn intersection_number(algebra: Algebra, family: &[Element]) -> Result<IntersectionResult> {
    intersection_number_with(algebra, family, &mut Budget::default())
}

pub fn intersection_number_with(
    algebra: Algebra,
    family: &[Element],
    budget: &mut Budget,
) -> Result<IntersectionResult> {
    let atoms = algebra.require_finite()? as usize;
    if family.is_empty() {
        return Err(Error::input("family is empty"));
    }
    let mut masks = Vec::with_capacity(family.len());
    for e in family {
        algebra.check(e)?;
        let m = e.mask().ok_or(Error::MixedBackend)?;
        if m == 0 {
            return Err(Error::input("family contains 0"));
        }
        masks.push(m);
    }
    let mut minimal: Vec<u32> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| o != m && o & m == o))
        .collect();
    minimal.sort_unstable();
    minimal.dedup();

    let one = Rational::one();
    let a: Vec<Vec<Rational>> = (0..atoms)
        .map(|i| {
            minimal
                .iter()
                .map(|&g| {
                    if g >> i & 1 == 1 {
                        one.clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let b = vec![one.clone(); atoms];
    let c = vec![one.clone(); minimal.len()];
    let lp = maximize(&a, &b, &c, budget)?;
    if !lp.value.is_positive() {
        return Err(Error::input("packing LP returned a nonpositive optimum"));
    }
    let value = lp.value.recip();
    let mu: Vec<Rational> = lp.dual.iter().map(|w| w / &lp.value).collect();

    let dual_sequence = {
        let denom = lp
            .primal
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, y| acc.lcm(y.denom()));
        let counts: Vec<usize> = lp
            .primal
            .iter()
            .map(|y| {
                num_traits::ToPrimitive::to_usize(&(y * &denom).to_integer()).unwrap_or(usize::MAX)
            })
            .collect();
        let total = counts.iter().try_fold(0usize, |acc, &c| acc.checked_add(c));
        match total {
            Some(t) if t > 0 && t <= SEQUENCE_CAP => Some(
                minimal
                    .iter()
                    .zip(&counts)
                    .flat_map(|(&g, &c)| std::iter::repeat_n(Element::Finite(g), c))
                    .collect(),
            ),
            _ => None,
        }
    };
    Ok(IntersectionResult {
        value,
        mu,
        dual_sequence,
    })
}

/// Largest number of terms with a nonzero common meet, over the length.
pub fn sequence_ratio(algebra: Algebra, seq: &[Element]) -> Result<Rational> {
    if seq.is_empty() {
        return Err(Error::input("sequence is empty"));
    }
    if seq.len() > SEQUENCE_CAP {
        return Err(Error::input(format!("sequence longer than {SEQUENCE_CAP}")));
    }
    for e in seq {
        algebra.check(e)?;
    }
    let mut best = 0usize;
    best_meet(algebra, seq, 0, &algebra.one(), 0, &mut best)?;
    Ok(rational::ratio(best as i64, seq.len() as i64))
}

fn best_meet(
    alg: Algebra,
    seq: &[Element],
    i: usize,
    meet: &Element,
    taken: usize,
    best: &mut usize,
) -> Result<()> {
    if taken + (seq.len() - i) <= *best {
        return Ok(());
    }
    if i == seq.len() {
        *best = taken;
        return Ok(());
    }
    let next = alg.meet(meet, &seq[i])?;
    if !next.is_zero() {
        best_meet(alg, seq, i + 1, &next, taken + 1, best)?;
    }
    best_meet(alg, seq, i + 1, meet, taken, best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelFloor {
    pub level: usize,
    /// Intersection number of `C_n`.
    pub intersection: Rational,
    /// `min over C_n` of the combined measure.
    pub floor: Rational,
}

#[derive(Debug, Clone)]
pub struct MeasureExtraction {
    pub measure: Submeasure,
    pub weights: Vec<Rational>,
    pub levels: Vec<LevelFloor>,
}

/// Combines the optimal weightings `μ_n` of the levels `C_n` into
/// `μ = Σ 2^-n μ_n / Σ 2^-n` (levels with no members are skipped). The last
/// level contains every atom, so `μ` is strictly positive.
///
/// The fragmentation must be graded; on the finite backend every level is
/// bounded, so the chain condition holds automatically.
pub fn measure_from_fragmentation(
    f: &Fragmentation,
    budget: &mut Budget,
) -> Result<MeasureExtraction> {
    let alg = f.algebra();
    alg.require_finite()?;
    if let (n, crate::fragmentation::GradedOutcome::Witness { a, b }) = f.check_graded_all()? {
        return Err(Error::input(format!(
            "fragmentation is not graded at level {n}: a={a} b={b}"
        )));
    }
    let levels = f.levels()?;
    let per_level_budget = budget.limit().saturating_sub(budget.used());
    let solved: Vec<Result<Option<(usize, IntersectionResult)>>> = par::map_slice(
        Exec::default(),
        &(1..=levels.len()).collect::<Vec<_>>(),
        |&n| {
            let fam = &levels[n - 1];
            if fam.is_empty() {
                return Ok(None);
            }
            let members: Vec<Element> = fam.generators().to_vec();
            let r = intersection_number_with(alg, &members, &mut Budget::new(per_level_budget))?;
            Ok(Some((n, r)))
        },
    );
    let mut weights = vec![Rational::zero(); alg.require_finite()? as usize];
    let mut total = Rational::zero();
    let mut results = Vec::new();
    for item in solved {
        let Some((n, r)) = item? else { continue };
        let scale = rational::dyadic(n as u32);
        for (w, m) in weights.iter_mut().zip(&r.mu) {
            *w += &scale * m;
        }
        total += &scale;
        results.push((n, r));
    }
    if total.is_zero() {
        return Err(Error::input("fragmentation has no nonempty level"));
    }
    for w in weights.iter_mut() {
        *w /= &total;
    }
    let measure = Submeasure::from_atom_weights(alg, weights.clone())?;
    let floors = results
        .into_iter()
        .map(|(n, r)| {
            let floor = levels[n - 1]
                .generators()
                .iter()
                .map(|g| {
                    let m = g.mask().expect("finite generator");
                    bits(m).map(|i| &weights[i as usize]).sum::<Rational>()
                })
                .min()
                .expect("nonempty level");
            LevelFloor {
                level: n,
                intersection: r.value,
                floor,
            }
        })
        .collect();
    Ok(MeasureExtraction {
        measure,
        weights,
        levels: floors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn f(n: u8) -> Algebra {
        Algebra::finite(n).unwrap()
    }

    fn at_least(alg: Algebra, k: u32) -> Vec<Element> {
        let n = alg.atom_count().unwrap();
        (0..1u32 << n)
            .filter(|m| m.count_ones() >= k)
            .map(Element::Finite)
            .collect()
    }

    #[test]
    fn four_of_eight() {
        let alg = f(8);
        let r = intersection_number(alg, &at_least(alg, 4)).unwrap();
        assert_eq!(r.value, ratio(1, 2));
        assert!(r.mu.iter().all(|w| *w == ratio(1, 8)));
        let seq = r.dual_sequence.clone().unwrap();
        assert_eq!(sequence_ratio(alg, &seq).unwrap(), ratio(1, 2));
        assert!(r.render_certificate().ends_with("value=1/2\n"));
    }

    #[test]
    fn small_families() {
        let alg = f(4);
        assert_eq!(
            intersection_number(alg, &[alg.one()]).unwrap().value,
            ratio(1, 1)
        );
        let a = Element::Finite(1);
        let not_a = alg.complement(&a).unwrap();
        let r = intersection_number(alg, &[a.clone(), not_a]).unwrap();
        assert_eq!(r.value, ratio(1, 2));
        assert_eq!(r.weight_of(&a).unwrap(), ratio(1, 2));
        assert!(intersection_number(alg, &[Element::Finite(0)]).is_err());
        assert!(intersection_number(alg, &[]).is_err());
    }

    #[test]
    fn sequence_ratios() {
        let alg = f(4);
        let two = [Element::Finite(0b0011), Element::Finite(0b1100)];
        assert_eq!(sequence_ratio(alg, &two).unwrap(), ratio(1, 2));
        let same = vec![Element::Finite(0b0110); 5];
        assert_eq!(sequence_ratio(alg, &same).unwrap(), ratio(1, 1));
        let threes: Vec<Element> = [0b0111, 0b1011, 0b1101, 0b1110]
            .into_iter()
            .map(Element::Finite)
            .collect();
        assert_eq!(sequence_ratio(alg, &threes).unwrap(), ratio(3, 4));
        assert!(sequence_ratio(alg, &vec![Element::Finite(1); 21]).is_err());
    }

    #[test]
    fn measure_from_dyadic_uniform() {
        let alg = f(8);
        let frag = Fragmentation::from_submeasure_dyadic(&Submeasure::uniform(alg)).unwrap();
        let out = measure_from_fragmentation(&frag, &mut Budget::default()).unwrap();
        assert_eq!(out.levels.len(), 3);
        assert!(out.levels.iter().all(|l| l.floor.is_positive()));
        assert!(out.weights.iter().all(Signed::is_positive));
        assert_eq!(out.weights.iter().sum::<Rational>(), ratio(1, 1));
    }

    #[test]
    fn non_graded_is_rejected() {
        let alg = f(4);
        let frag = Fragmentation::from_submeasure_harmonic(&Submeasure::uniform(alg)).unwrap();
        assert!(measure_from_fragmentation(&frag, &mut Budget::default()).is_err());
    }
}
