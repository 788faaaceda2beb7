use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Fragmentation, NO_LEVEL};
use crate::algebra::{bits, full_mask, Algebra, Element, NodeSet};
use crate::error::{Error, Result};
use crate::par::{self, Exec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradedOutcome {
    Graded,
    /// `a ∨ b ∈ C_n` with neither `a` nor `b` in `C_{n+1}`.
    Witness {
        a: Element,
        b: Element,
    },
}

impl GradedOutcome {
    pub fn is_graded(&self) -> bool {
        matches!(self, GradedOutcome::Graded)
    }
}

/// Exhaustive over all pairs in lexicographic `(a, b)` order; the first
/// witness wins regardless of how the scan is split.
pub(super) fn check_graded(f: &Fragmentation, n: usize, exec: Exec) -> Result<GradedOutcome> {
    if n == 0 {
        return Err(Error::input("levels are numbered from 1"));
    }
    let least = f.least_table()?;
    let size = least.len() as u64;
    let in_c = |k: usize, m: u32| Fragmentation::in_c_mask(least, k, m);
    let hit = par::find_first(exec, 0..size, |a| {
        let a = a as u32;
        if in_c(n + 1, a) {
            return None;
        }
        (0..size as u32)
            .find(|&b| !in_c(n + 1, b) && in_c(n, a | b))
            .map(|b| (a, b))
    });
    Ok(match hit {
        Some((a, b)) => GradedOutcome::Witness {
            a: Element::Finite(a),
            b: Element::Finite(b),
        },
        None => GradedOutcome::Graded,
    })
}

/// Samples random `c ∈ C_n` and tries every split of `c` along its nodes
/// refined one level below its deepest node.
pub(super) fn check_graded_sampled(
    f: &Fragmentation,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<GradedOutcome> {
    if f.algebra() != Algebra::Cantor {
        return check_graded(f, n, Exec::default());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let depth = rng.gen_range(1..=4);
        let c = Element::Cantor(NodeSet::random(&mut rng, depth));
        if !f.member(n, &c)? {
            continue;
        }
        let Element::Cantor(set) = &c else {
            unreachable!()
        };
        let parts = set.refine_to(set.max_depth() + 1);
        if parts.len() > 16 {
            continue;
        }
        for split in 0u32..(1 << parts.len()) {
            let pick = |want: bool| {
                NodeSet::from_nodes(
                    parts
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| (split >> i & 1 == 1) == want)
                        .map(|(_, p)| *p),
                )
            };
            let a = Element::Cantor(pick(true));
            let b = Element::Cantor(pick(false));
            if !f.member(n + 1, &a)? && !f.member(n + 1, &b)? {
                return Ok(GradedOutcome::Witness { a, b });
            }
        }
    }
    Ok(GradedOutcome::Graded)
}

/// Maximal elements of the downward-closed `U_k`.
fn maximal_in_u(least: &[u16], k: usize, atoms: u8) -> Vec<u32> {
    let full = full_mask(atoms);
    (0..least.len() as u32)
        .filter(|&x| {
            !Fragmentation::in_c_mask(least, k, x)
                && bits(full & !x).all(|i| Fragmentation::in_c_mask(least, k, x | 1 << i))
        })
        .collect()
}

/// `U_k ∨ U_k ⊆ U_n`, checked on pairs of maximal elements of `U_k`: joins
/// are monotone and `U_n` is downward closed, so this covers every pair.
pub(crate) fn joins_stay_below(least: &[u16], k: usize, n: usize, atoms: u8, exec: Exec) -> bool {
    let maximal = maximal_in_u(least, k, atoms);
    let count = maximal.len() as u64;
    par::find_first(exec, 0..count, |i| {
        let x = maximal[i as usize];
        maximal[i as usize..]
            .iter()
            .any(|&y| Fragmentation::in_c_mask(least, n, x | y))
            .then_some(())
    })
    .is_none()
}

pub(super) fn find_grading_indices(
    f: &Fragmentation,
    exec: Exec,
) -> Result<BTreeMap<usize, Option<usize>>> {
    let l = f.require_levels()?;
    let atoms = f.algebra().require_finite()?;
    let least = f.least_table()?;
    debug_assert!(least[0] == NO_LEVEL);
    let mut out = BTreeMap::new();
    for n in 1..l {
        let k = (1..=l).find(|&k| joins_stay_below(least, k, n, atoms, exec));
        out.insert(n, k);
    }
    Ok(out)
}

pub(super) fn graded_subfragmentation(f: &Fragmentation) -> Result<(Fragmentation, Vec<usize>)> {
    let l = f.require_levels()?;
    let ks = find_grading_indices(f, Exec::default())?;
    let mut indices = vec![1usize];
    let mut cur = 1usize;
    while cur < l {
        let k =
            ks.get(&cur).copied().flatten().ok_or_else(|| {
                Error::input(format!("no grading index for level {cur} within {l}"))
            })?;
        // k <= cur means U_{cur+1} ⊆ U_k already works
        cur = k.max(cur + 1);
        indices.push(cur);
    }
    let levels = indices
        .iter()
        .map(|&n| f.level(n).cloned())
        .collect::<Result<Vec<_>>>()?;
    Ok((Fragmentation::from_levels(f.algebra(), levels)?, indices))
}
