//! Submeasure built from a graded fragmentation.
//!
//! With `U_n = B - C_n` and `U_0 = B`, a dyadic rational
//! `r = 2^-n_1 + ... + 2^-n_k` (`0 < n_1 < ... < n_k`) names the set
//! `V_r = U_{n_1} ∨ ... ∨ U_{n_k}`, and
//!
//! ```text
//! m(a) = min { r : a ∈ V_r } ∪ { 1 }.
//! ```
//!
//! Levels past `L` contribute only `0` on the finite backend, so indices are
//! drawn from `1..=L` and the minimum is attained.
//!
//! Membership `a ∈ V_r` is decided over partitions of the atoms of `a` into
//! one block per index. Restricting to disjoint blocks loses nothing: if
//! `a = x ∨ y` with `x ∈ U_i`, `y ∈ U_j`, then `y ∧ -x ≤ y` is still in `U_j`
//! because every `U_n` is downward closed. Empty blocks are allowed since
//! `0 ∈ U_n` for every `n`.

mod cantor;
mod dyadic;
mod verify;

use std::collections::HashMap;

pub use cantor::CantorConstruction;
pub use dyadic::DyadicIndex;
pub use verify::{verify_construction, ConstructionReport, SandwichRow};

use crate::algebra::{submasks, Algebra, Element};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fragmentation::Fragmentation;
use crate::par::{self, Exec};
use crate::rational::{self, Rational};
use crate::submeasure::Submeasure;

/// Blocks `(part, level)` of a decomposition witnessing `a ∈ V_r`: pairwise
/// disjoint, joining to `a`, with `part ∈ U_level`, one block per index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionWitness {
    pub parts: Vec<(Element, usize)>,
}

impl DecompositionWitness {
    /// One-pass check against the fragmentation.
    pub fn verify(&self, f: &Fragmentation, target: &Element, index: &DyadicIndex) -> Result<bool> {
        let alg = f.algebra();
        let levels: Vec<usize> = self.parts.iter().map(|(_, l)| *l).collect();
        if levels != index.levels() {
            return Ok(false);
        }
        let mut acc = alg.zero();
        for (part, level) in &self.parts {
            if !alg.disjoint(&acc, part)? || !f.in_u(*level, part)? {
                return Ok(false);
            }
            acc = alg.join(&acc, part)?;
        }
        Ok(acc == *target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VMembership {
    Member(DecompositionWitness),
    NotMember,
}

impl VMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, VMembership::Member(_))
    }
}

/// Decides `a ∈ V_r` with a witness. Exhausting the budget is an error,
/// never a silent `NotMember`.
pub fn v_member(
    f: &Fragmentation,
    a: &Element,
    r: &DyadicIndex,
    budget: &mut Budget,
) -> Result<VMembership> {
    f.algebra().check(a)?;
    match a {
        Element::Finite(target) => {
            let least = f.least_table()?;
            let in_u = |n: usize, m: u32| !Fragmentation::in_c_mask(least, n, m) || n == 0;
            let blocks = search_blocks(*target, r.levels(), &in_u, budget)?;
            Ok(match blocks {
                Some(bs) => VMembership::Member(DecompositionWitness {
                    parts: bs
                        .into_iter()
                        .zip(r.levels().iter())
                        .map(|(m, &l)| (Element::Finite(m), l))
                        .collect(),
                }),
                None => VMembership::NotMember,
            })
        }
        Element::Cantor(set) => {
            let parts = cantor::parts_of(set, cantor::DEFAULT_DEPTH)?;
            let part_count = parts.len() as u32;
            let joined = |mask: u32| cantor::join_parts(&parts, mask);
            let mut cache: HashMap<(usize, u32), bool> = HashMap::new();
            let mut err = None;
            let mut in_u = |n: usize, m: u32| -> bool {
                if n == 0 {
                    return true;
                }
                *cache
                    .entry((n, m))
                    .or_insert_with(|| match f.in_u(n, &joined(m)) {
                        Ok(v) => v,
                        Err(e) => {
                            err = Some(e);
                            false
                        }
                    })
            };
            let full = if part_count == 32 {
                u32::MAX
            } else {
                (1u32 << part_count) - 1
            };
            let blocks = search_blocks_mut(full, r.levels(), &mut in_u, budget)?;
            if let Some(e) = err {
                return Err(e);
            }
            Ok(match blocks {
                Some(bs) => VMembership::Member(DecompositionWitness {
                    parts: bs
                        .into_iter()
                        .zip(r.levels().iter())
                        .map(|(m, &l)| (joined(m), l))
                        .collect(),
                }),
                None => VMembership::NotMember,
            })
        }
    }
}

fn search_blocks(
    target: u32,
    levels: &[usize],
    in_u: &dyn Fn(usize, u32) -> bool,
    budget: &mut Budget,
) -> Result<Option<Vec<u32>>> {
    let mut f = |n: usize, m: u32| in_u(n, m);
    search_blocks_mut(target, levels, &mut f, budget)
}

/// Assigns a (possibly empty) block of `target` to each level in turn; the
/// last level takes whatever remains.
fn search_blocks_mut(
    target: u32,
    levels: &[usize],
    in_u: &mut dyn FnMut(usize, u32) -> bool,
    budget: &mut Budget,
) -> Result<Option<Vec<u32>>> {
    if levels.is_empty() {
        return Ok((target == 0).then(Vec::new));
    }
    let mut memo: HashMap<(usize, u32), Option<u32>> = HashMap::new();
    if !blocks_rec(0, target, levels, in_u, budget, &mut memo)? {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(levels.len());
    let mut rem = target;
    for i in 0..levels.len() {
        let block = if i + 1 == levels.len() {
            rem
        } else {
            memo[&(i, rem)].expect("successful state records its block")
        };
        out.push(block);
        rem &= !block;
    }
    Ok(Some(out))
}

fn blocks_rec(
    i: usize,
    rem: u32,
    levels: &[usize],
    in_u: &mut dyn FnMut(usize, u32) -> bool,
    budget: &mut Budget,
    memo: &mut HashMap<(usize, u32), Option<u32>>,
) -> Result<bool> {
    if i + 1 == levels.len() {
        return Ok(in_u(levels[i], rem));
    }
    if let Some(found) = memo.get(&(i, rem)) {
        return Ok(found.is_some());
    }
    budget.step()?;
    let mut found = None;
    // larger blocks first; the empty block last
    for sub in submasks(rem).chain(std::iter::once(0)) {
        budget.step()?;
        if in_u(levels[i], sub) && blocks_rec(i + 1, rem & !sub, levels, in_u, budget, memo)? {
            found = Some(sub);
            break;
        }
    }
    memo.insert((i, rem), found);
    Ok(found.is_some())
}

/// The constructed submeasure, tabulated on the finite backend and lazy on
/// the Cantor backend (see [`CantorConstruction`]).
pub fn construct_submeasure(f: &Fragmentation, budget: &mut Budget) -> Result<Submeasure> {
    construct_submeasure_with(f, budget, Exec::default())
}

pub fn construct_submeasure_with(
    f: &Fragmentation,
    budget: &mut Budget,
    exec: Exec,
) -> Result<Submeasure> {
    if f.algebra() == Algebra::Cantor {
        return Ok(Submeasure::constructed_cantor(CantorConstruction::new(
            f.clone(),
            cantor::DEFAULT_DEPTH,
            cantor::DEFAULT_MAX_LEVEL,
        )?));
    }
    let atoms = f.algebra().require_finite()?;
    let l = f.require_levels()?;
    if l > 62 {
        return Err(Error::input(format!(
            "{l} levels exceed the 62 supported by the construction"
        )));
    }
    budget.charge(
        3u64.saturating_pow(u32::from(atoms))
            .saturating_mul(l as u64),
    )?;
    let numerators = min_decomposition_table(f.least_table()?, l, exec);
    let denom = 1u64 << l;
    let values = numerators
        .into_iter()
        .map(|n| {
            if n >= denom {
                rational::int(1)
            } else {
                Rational::new(n.into(), denom.into())
            }
        })
        .collect();
    Ok(Submeasure::constructed(f.algebra(), values, l))
}

const INF: u64 = u64::MAX;

/// `best_lo[m]`: least `Σ 2^(L-n)` over decompositions of `m` into one block
/// per level from a strictly increasing list of levels `>= lo`. Computed from
/// `lo = L` down to `1`; each level is a data-parallel pass over all masks.
pub(crate) fn min_decomposition_table(least: &[u16], l: usize, exec: Exec) -> Vec<u64> {
    let size = least.len() as u64;
    let mut best: Vec<u64> = (0..size).map(|m| if m == 0 { 0 } else { INF }).collect();
    for lo in (1..=l).rev() {
        let w = 1u64 << (l - lo);
        let prev = &best;
        best = par::map_range(exec, 0..size, |m| {
            let m = m as u32;
            let mut v = prev[m as usize];
            for sub in submasks(m) {
                if Fragmentation::in_c_mask(least, lo, sub) {
                    continue;
                }
                let rest = prev[(m & !sub) as usize];
                if rest != INF {
                    v = v.min(w + rest);
                }
            }
            v
        });
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn dyadic_uniform(n: u8) -> Fragmentation {
        Fragmentation::from_submeasure_dyadic(&Submeasure::uniform(Algebra::finite(n).unwrap()))
            .unwrap()
    }

    #[test]
    fn v_member_examples() {
        let f = dyadic_uniform(8);
        let mut b = Budget::default();
        let atom = Element::Finite(0b1000);
        assert!(
            v_member(&f, &atom, &DyadicIndex::new(vec![2]).unwrap(), &mut b)
                .unwrap()
                .is_member()
        );
        let four = Element::Finite(0b1111);
        assert_eq!(
            v_member(&f, &four, &DyadicIndex::new(vec![1]).unwrap(), &mut b).unwrap(),
            VMembership::NotMember
        );
        let r = DyadicIndex::new(vec![1, 2]).unwrap();
        match v_member(&f, &four, &r, &mut b).unwrap() {
            VMembership::Member(w) => {
                assert!(w.verify(&f, &four, &r).unwrap());
                let sizes: Vec<u32> = w
                    .parts
                    .iter()
                    .map(|(p, _)| p.mask().unwrap().count_ones())
                    .collect();
                assert_eq!(sizes, vec![3, 1]);
            }
            VMembership::NotMember => panic!("expected membership"),
        }
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let f = dyadic_uniform(8);
        let r = DyadicIndex::new(vec![1, 2, 3]).unwrap();
        let err = v_member(&f, &Element::Finite(0xff), &r, &mut Budget::new(3)).unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted(3)));
    }

    #[test]
    fn constructed_values_dyadic_eight() {
        let f = dyadic_uniform(8);
        let m = construct_submeasure(&f, &mut Budget::default()).unwrap();
        let expect = [
            (0b1, ratio(1, 4)),
            (0b11, ratio(1, 2)),
            (0b111, ratio(1, 2)),
            (0b1111, ratio(3, 4)),
            (0b11111, ratio(1, 1)),
            (0xff, ratio(1, 1)),
        ];
        for (mask, v) in expect {
            assert_eq!(m.eval(&Element::Finite(mask)).unwrap(), v, "mask {mask:#x}");
        }
        assert_eq!(m.eval(&Element::Finite(0)).unwrap(), ratio(0, 1));
    }

    #[test]
    fn constructed_values_dyadic_four() {
        let f = dyadic_uniform(4);
        let m = construct_submeasure(&f, &mut Budget::default()).unwrap();
        for a in 1..16u32 {
            let want = if a.count_ones() == 1 {
                ratio(1, 2)
            } else {
                ratio(1, 1)
            };
            assert_eq!(m.eval(&Element::Finite(a)).unwrap(), want);
        }
    }

    #[test]
    fn sequential_and_parallel_tables_agree() {
        let f = dyadic_uniform(9);
        let least = f.least_table().unwrap();
        let l = f.level_count().unwrap();
        assert_eq!(
            min_decomposition_table(least, l, Exec::Sequential),
            min_decomposition_table(least, l, Exec::Parallel)
        );
    }
}
