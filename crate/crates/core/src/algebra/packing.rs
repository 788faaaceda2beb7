use std::collections::HashMap;

use crate::algebra::{bits, Element, UpwardClosedFamily};
use crate::budget::Budget;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    pub size: usize,
    pub witness: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PackingOutcome {
    Exact(Packing),
    /// Budget ran out; carries the best antichain found, a lower bound only.
    Unknown(Packing),
}

impl PackingOutcome {
    pub fn exact(self) -> Result<Packing> {
        match self {
            PackingOutcome::Exact(p) => Ok(p),
            PackingOutcome::Unknown(_) => Err(Error::BudgetExhausted(0)),
        }
    }

    pub fn packing(&self) -> &Packing {
        match self {
            PackingOutcome::Exact(p) | PackingOutcome::Unknown(p) => p,
        }
    }
}

/// Largest antichain inside an upward-closed family (finite backend).
///
/// Shrinking each member to a generator below it keeps an antichain an
/// antichain, so this is maximum set packing over the generators.
pub fn max_disjoint_packing(
    family: &UpwardClosedFamily,
    budget: &mut Budget,
) -> Result<PackingOutcome> {
    let atoms = family.algebra().require_finite()?;
    let mut gens = family.masks();
    if gens.contains(&0) {
        // the family is all of B; inside B+ the atoms are optimal
        gens = (0..atoms).map(|i| 1u32 << i).collect();
    }
    let (outcome, witness) = max_packing_masks(&gens, budget);
    let packing = Packing {
        size: witness.len(),
        witness: witness.into_iter().map(Element::Finite).collect(),
    };
    Ok(match outcome {
        true => PackingOutcome::Exact(packing),
        false => PackingOutcome::Unknown(packing),
    })
}

/// Maximum number of pairwise disjoint masks from `gens` (zero masks are
/// ignored). Returns `(exact, witness)`; on budget exhaustion the witness is
/// the greedy packing.
pub fn max_packing_masks(gens: &[u32], budget: &mut Budget) -> (bool, Vec<u32>) {
    let mut gens: Vec<u32> = gens.iter().copied().filter(|&g| g != 0).collect();
    gens.sort_unstable_by_key(|g| (g.count_ones(), *g));
    gens.dedup();

    let mut by_atom: Vec<Vec<u32>> = vec![Vec::new(); 32];
    let mut universe = 0u32;
    for &g in &gens {
        universe |= g;
        for i in bits(g) {
            by_atom[i as usize].push(g);
        }
    }

    let mut search = Search {
        by_atom: &by_atom,
        memo: HashMap::new(),
        budget,
    };
    match search.best(universe) {
        Ok(_) => {
            let mut witness = Vec::new();
            let mut free = universe;
            while free != 0 {
                let (_, choice) = search.memo[&free];
                match choice {
                    Some(g) => {
                        witness.push(g);
                        free &= !g;
                    }
                    None => free &= free - 1,
                }
            }
            witness.sort_unstable();
            (true, witness)
        }
        Err(_) => (false, greedy(&gens)),
    }
}

fn greedy(gens: &[u32]) -> Vec<u32> {
    let mut used = 0u32;
    let mut out = Vec::new();
    for &g in gens {
        if g & used == 0 {
            used |= g;
            out.push(g);
        }
    }
    out.sort_unstable();
    out
}

struct Search<'a> {
    by_atom: &'a [Vec<u32>],
    /// free atoms -> (best count, generator used for the lowest free atom)
    memo: HashMap<u32, (u32, Option<u32>)>,
    budget: &'a mut Budget,
}

impl Search<'_> {
    fn best(&mut self, free: u32) -> Result<u32> {
        if free == 0 {
            return Ok(0);
        }
        if let Some(&(v, _)) = self.memo.get(&free) {
            return Ok(v);
        }
        self.budget.step()?;
        let low = free.trailing_zeros() as usize;
        // either the lowest free atom stays uncovered ...
        let mut best = self.best(free & (free - 1))?;
        let mut choice = None;
        // ... or some generator through it is used
        for gi in 0..self.by_atom[low].len() {
            let g = self.by_atom[low][gi];
            if g & !free == 0 {
                let v = 1 + self.best(free & !g)?;
                if v > best {
                    best = v;
                    choice = Some(g);
                }
            }
        }
        self.memo.insert(free, (best, choice));
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{upward_closure, Algebra};

    fn family_min_size(atoms: u8, min: u32) -> UpwardClosedFamily {
        let alg = Algebra::finite(atoms).unwrap();
        let xs: Vec<Element> = (1..1u32 << atoms)
            .filter(|m| m.count_ones() >= min)
            .map(Element::Finite)
            .collect();
        upward_closure(alg, &xs).unwrap()
    }

    #[test]
    fn packing_examples() {
        let p = max_disjoint_packing(&family_min_size(8, 2), &mut Budget::default())
            .unwrap()
            .exact()
            .unwrap();
        assert_eq!(p.size, 4);
        let alg = Algebra::finite(8).unwrap();
        assert!(alg.is_antichain(&p.witness).unwrap());

        let alg4 = Algebra::finite(4).unwrap();
        let top = upward_closure(alg4, &[alg4.one()]).unwrap();
        assert_eq!(
            max_disjoint_packing(&top, &mut Budget::default())
                .unwrap()
                .exact()
                .unwrap()
                .size,
            1
        );
        assert_eq!(
            max_disjoint_packing(&family_min_size(4, 1), &mut Budget::default())
                .unwrap()
                .exact()
                .unwrap()
                .size,
            4
        );
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let out = max_disjoint_packing(&family_min_size(12, 3), &mut Budget::new(5)).unwrap();
        match out {
            PackingOutcome::Unknown(p) => assert!(p.size >= 1),
            PackingOutcome::Exact(_) => panic!("budget should run out"),
        }
    }

    #[test]
    fn cantor_is_rejected() {
        let fam = UpwardClosedFamily::empty(Algebra::cantor());
        assert!(max_disjoint_packing(&fam, &mut Budget::default()).is_err());
    }
}
