use crate::algebra::{max_packing_masks, Element};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fragmentation::Fragmentation;
use crate::rational::{self, Rational};
use crate::submeasure::{
    check_axioms, AxiomReport, CheckMode, Submeasure, ValueTable, MAX_EXHAUSTIVE_ATOMS,
};

/// `2^-n0 <= m(a) <= 2^-(n0-1)` where `n0` is the least level containing `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichRow {
    pub element: Element,
    pub least_level: usize,
    pub value: Rational,
    pub holds: bool,
}

impl SandwichRow {
    pub fn lower(&self) -> Rational {
        rational::dyadic(self.least_level as u32)
    }

    pub fn upper(&self) -> Rational {
        rational::dyadic(self.least_level as u32 - 1)
    }
}

#[derive(Debug, Clone)]
pub struct ConstructionReport {
    pub axioms: AxiomReport,
    pub strictly_positive: bool,
    pub sandwich: Vec<SandwichRow>,
    /// Largest antichain in `{a : m(a) >= 2^-n}` for `n = 1..=L`.
    pub level_packings: Vec<(usize, usize)>,
}

impl ConstructionReport {
    pub fn passed(&self) -> bool {
        self.axioms.passed() && self.strictly_positive && self.sandwich.iter().all(|r| r.holds)
    }

    pub fn first_sandwich_failure(&self) -> Option<&SandwichRow> {
        self.sandwich.iter().find(|r| !r.holds)
    }
}

/// Re-checks a constructed submeasure against the fragmentation it came from
/// (finite backend).
pub fn verify_construction(
    f: &Fragmentation,
    m: &Submeasure,
    budget: &mut Budget,
) -> Result<ConstructionReport> {
    let atoms = f.algebra().require_finite()?;
    if m.algebra() != f.algebra() {
        return Err(Error::MixedBackend);
    }
    let mode = if atoms <= MAX_EXHAUSTIVE_ATOMS {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled {
            count: 100_000,
            seed: 0,
        }
    };
    let axioms = check_axioms(m, mode)?;
    let table = ValueTable::of(m)?;
    let strictly_positive = (1..table.len() as u32).all(|a| !table.is_zero(a));
    let least = f.least_table()?;
    let sandwich = (1..table.len() as u32)
        .map(|a| {
            let n0 = least[a as usize] as usize;
            let value = table.get(a).clone();
            let holds =
                value >= rational::dyadic(n0 as u32) && value <= rational::dyadic(n0 as u32 - 1);
            SandwichRow {
                element: Element::Finite(a),
                least_level: n0,
                value,
                holds,
            }
        })
        .collect();
    let l = f.require_levels()?;
    let mut level_packings = Vec::with_capacity(l);
    for n in 1..=l {
        let t = rational::dyadic(n as u32);
        let member: Vec<bool> = (0..table.len() as u32)
            .map(|a| a != 0 && table.at_least(a, &t))
            .collect();
        let gens = crate::algebra::minimal_masks(&member);
        let (exact, witness) = max_packing_masks(&gens, budget);
        if !exact {
            return Err(Error::BudgetExhausted(budget.limit()));
        }
        level_packings.push((n, witness.len()));
    }
    Ok(ConstructionReport {
        axioms,
        strictly_positive,
        sandwich,
        level_packings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::construction::construct_submeasure;

    #[test]
    fn dyadic_construction_verifies() {
        for n in [4u8, 6, 8] {
            let alg = Algebra::finite(n).unwrap();
            let f = Fragmentation::from_submeasure_dyadic(&Submeasure::uniform(alg)).unwrap();
            let m = construct_submeasure(&f, &mut Budget::default()).unwrap();
            let report = verify_construction(&f, &m, &mut Budget::default()).unwrap();
            assert!(
                report.passed(),
                "finite({n}): {:?}",
                report.first_sandwich_failure()
            );
            assert_eq!(report.level_packings.len(), f.level_count().unwrap());
        }
    }

    #[test]
    fn dyadic_eight_packings() {
        let alg = Algebra::finite(8).unwrap();
        let f = Fragmentation::from_submeasure_dyadic(&Submeasure::uniform(alg)).unwrap();
        let m = construct_submeasure(&f, &mut Budget::default()).unwrap();
        let report = verify_construction(&f, &m, &mut Budget::default()).unwrap();
        // m >= 1/2 needs 2 atoms, m >= 1/4 and m >= 1/8 hold on single atoms
        assert_eq!(report.level_packings, vec![(1, 4), (2, 8), (3, 8)]);
    }
}
