//! Fragmentations: increasing chains `C_1 ⊆ C_2 ⊆ ...` of upward-closed
//! families whose union is every nonzero element.
//!
//! On the finite backend a fragmentation is stored level by level through
//! minimal generators and stabilises at `L`, the least level containing every
//! atom. Alongside the generators it keeps, per element, the least level
//! containing it; every scan in this module reads that table. On the Cantor
//! backend a fragmentation is a closed-form rule `C_n = {a : m(a) >= t_n}`
//! attached to a submeasure.
//!
//! `U_n` denotes the complement `B - C_n`, with `U_0 = B`.

mod grading;
mod io;

use std::collections::BTreeMap;

use num_traits::Zero;

pub use grading::GradedOutcome;

use crate::algebra::{full_mask, minimal_masks, Algebra, Element, UpwardClosedFamily};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::rational::{self, Rational};
use crate::submeasure::{Submeasure, ValueTable};

pub(crate) const NO_LEVEL: u16 = u16::MAX;
const MAX_LEVELS: usize = (u16::MAX - 1) as usize;

/// Which thresholds turn a submeasure into levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelScale {
    /// `C_n = {a : m(a) >= 1/n}`
    Harmonic,
    /// `C_n = {a : m(a) >= 2^-n}`
    Dyadic,
}

impl LevelScale {
    pub fn threshold(self, n: usize) -> Rational {
        match self {
            LevelScale::Harmonic => rational::ratio(1, n as i64),
            LevelScale::Dyadic => rational::dyadic(n as u32),
        }
    }

    /// Least `n >= 1` with `v >= threshold(n)`; `None` for `v = 0`.
    pub fn least_level(self, v: &Rational) -> Option<usize> {
        if v.is_zero() {
            return None;
        }
        let (p, q) = (v.numer(), v.denom());
        Some(match self {
            LevelScale::Harmonic => {
                // ceil(q / p)
                let c = num_integer::Integer::div_ceil(q, p);
                num_traits::ToPrimitive::to_usize(&c)
                    .unwrap_or(usize::MAX)
                    .max(1)
            }
            LevelScale::Dyadic => {
                let mut n = 0usize;
                let mut scaled = p.clone();
                while scaled < *q {
                    scaled <<= 1;
                    n += 1;
                }
                n.max(1)
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            LevelScale::Harmonic => "harmonic",
            LevelScale::Dyadic => "dyadic",
        }
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Finite {
        levels: Vec<UpwardClosedFamily>,
        /// least level containing each mask; `NO_LEVEL` for 0
        least: Vec<u16>,
    },
    Rule {
        m: Submeasure,
        scale: LevelScale,
    },
}

#[derive(Debug, Clone)]
pub struct Fragmentation {
    algebra: Algebra,
    repr: Repr,
    bounds: Vec<Option<usize>>,
}

impl Fragmentation {
    /// Validates the chain, upward closure and exhaustion conditions.
    pub fn from_levels(algebra: Algebra, levels: Vec<UpwardClosedFamily>) -> Result<Fragmentation> {
        let atoms = algebra.require_finite()?;
        if levels.is_empty() {
            return Err(Error::input("a fragmentation needs at least one level"));
        }
        if levels.len() > MAX_LEVELS {
            return Err(Error::input("too many levels"));
        }
        let size = full_mask(atoms) as usize + 1;
        let mut least = vec![NO_LEVEL; size];
        for (i, fam) in levels.iter().enumerate() {
            if fam.algebra() != algebra {
                return Err(Error::MixedBackend);
            }
            let gens = fam.masks();
            if gens.contains(&0) {
                return Err(Error::input(format!("level {} contains 0", i + 1)));
            }
            for (j, &g) in gens.iter().enumerate() {
                if gens.iter().enumerate().any(|(k, &h)| k != j && h & !g == 0) {
                    return Err(Error::input(format!(
                        "level {} generators are not an antichain",
                        i + 1
                    )));
                }
                let slot = &mut least[g as usize];
                *slot = (*slot).min(i as u16 + 1);
            }
        }
        // propagate upward: least[m] = min over generators below m
        for bit in 0..atoms {
            let b = 1usize << bit;
            for m in 0..size {
                if m & b != 0 && least[m ^ b] < least[m] {
                    least[m] = least[m ^ b];
                }
            }
        }
        // chain: every generator of C_n must be a member of C_{n+1}
        for (i, fam) in levels.iter().enumerate().skip(1) {
            let prev = &levels[i - 1];
            for g in prev.masks() {
                if !fam.masks().iter().any(|h| h & !g == 0) {
                    return Err(Error::input(format!(
                        "not a chain: generator {g:#x} of level {i} is missing from level {}",
                        i + 1
                    )));
                }
            }
        }
        let top = levels.len() as u16;
        if let Some(m) = (1..size).find(|&m| least[m] > top) {
            return Err(Error::input(format!(
                "not exhaustive: {m:#x} lies in no level up to {top}"
            )));
        }
        let n = levels.len();
        Ok(Fragmentation {
            algebra,
            repr: Repr::Finite { levels, least },
            bounds: vec![None; n],
        })
    }

    pub fn from_submeasure_harmonic(m: &Submeasure) -> Result<Fragmentation> {
        Fragmentation::from_submeasure(m, LevelScale::Harmonic)
    }

    pub fn from_submeasure_dyadic(m: &Submeasure) -> Result<Fragmentation> {
        Fragmentation::from_submeasure(m, LevelScale::Dyadic)
    }

    /// Level sets of a strictly positive submeasure. On the finite backend
    /// the chain stops at the least level containing every nonzero element.
    pub fn from_submeasure(m: &Submeasure, scale: LevelScale) -> Result<Fragmentation> {
        let algebra = m.algebra();
        let Algebra::Finite { atoms } = algebra else {
            return Ok(Fragmentation {
                algebra,
                repr: Repr::Rule {
                    m: m.clone(),
                    scale,
                },
                bounds: Vec::new(),
            });
        };
        let table = ValueTable::of(m)?;
        let size = 1usize << atoms;
        let mut least = vec![NO_LEVEL; size];
        for (a, slot) in least.iter_mut().enumerate().skip(1) {
            let level = scale
                .least_level(table.get(a as u32))
                .ok_or(Error::NotStrictlyPositive(Element::Finite(a as u32)))?;
            if level > MAX_LEVELS {
                return Err(Error::input(format!(
                    "{a:#x} needs level {level}, above the supported maximum"
                )));
            }
            *slot = level as u16;
        }
        let top = least[1..].iter().copied().max().unwrap_or(1) as usize;
        let levels = (1..=top)
            .map(|n| {
                let member: Vec<bool> = least.iter().map(|&l| l as usize <= n).collect();
                UpwardClosedFamily::from_minimal_masks(algebra, minimal_masks(&member))
            })
            .collect();
        Fragmentation::from_levels(algebra, levels)
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    /// Stabilisation level `L` (finite backend).
    pub fn level_count(&self) -> Option<usize> {
        match &self.repr {
            Repr::Finite { levels, .. } => Some(levels.len()),
            Repr::Rule { .. } => None,
        }
    }

    pub(crate) fn require_levels(&self) -> Result<usize> {
        self.level_count().ok_or(Error::Unsupported("finite"))
    }

    /// Generators of `C_n`, `1 <= n <= L` (finite backend).
    pub fn level(&self, n: usize) -> Result<&UpwardClosedFamily> {
        match &self.repr {
            Repr::Finite { levels, .. } if n >= 1 && n <= levels.len() => Ok(&levels[n - 1]),
            Repr::Finite { .. } => Err(Error::input(format!("level {n} out of range"))),
            Repr::Rule { .. } => Err(Error::Unsupported("finite")),
        }
    }

    pub fn levels(&self) -> Result<&[UpwardClosedFamily]> {
        match &self.repr {
            Repr::Finite { levels, .. } => Ok(levels),
            Repr::Rule { .. } => Err(Error::Unsupported("finite")),
        }
    }

    /// Per-element least level table (finite backend).
    pub(crate) fn least_table(&self) -> Result<&[u16]> {
        match &self.repr {
            Repr::Finite { least, .. } => Ok(least),
            Repr::Rule { .. } => Err(Error::Unsupported("finite")),
        }
    }

    pub fn rule(&self) -> Option<(&Submeasure, LevelScale)> {
        match &self.repr {
            Repr::Rule { m, scale } => Some((m, *scale)),
            Repr::Finite { .. } => None,
        }
    }

    /// Least level containing `a`; `None` for 0.
    pub fn least_level(&self, a: &Element) -> Result<Option<usize>> {
        self.algebra.check(a)?;
        match (&self.repr, a) {
            (Repr::Finite { least, .. }, Element::Finite(x)) => {
                let l = least[*x as usize];
                Ok((l != NO_LEVEL).then_some(l as usize))
            }
            (Repr::Rule { m, scale }, _) => Ok(scale.least_level(&m.eval(a)?)),
            _ => Err(Error::MixedBackend),
        }
    }

    /// `a ∈ C_n`. Levels past `L` repeat `C_L`; `C_0` is empty.
    pub fn member(&self, n: usize, a: &Element) -> Result<bool> {
        Ok(n >= 1 && self.least_level(a)?.is_some_and(|l| l <= n))
    }

    /// `a ∈ U_n = B - C_n`.
    pub fn in_u(&self, n: usize, a: &Element) -> Result<bool> {
        Ok(!self.member(n, a)?)
    }

    #[inline]
    pub(crate) fn in_c_mask(least: &[u16], n: usize, mask: u32) -> bool {
        (least[mask as usize] as usize) <= n
    }

    /// Chain-condition bounds `K_n` filled by [`Fragmentation::with_bounds`].
    pub fn bounds(&self) -> &[Option<usize>] {
        &self.bounds
    }

    /// Exact largest antichain inside `C_n` (finite backend).
    pub fn check_sigma_cc(&self, n: usize, budget: &mut Budget) -> Result<usize> {
        let fam = self.level(n)?;
        Ok(crate::algebra::max_disjoint_packing(fam, budget)?
            .exact()?
            .size)
    }

    /// Copy with every `K_n` computed.
    pub fn with_bounds(&self, budget: &mut Budget) -> Result<Fragmentation> {
        let l = self.require_levels()?;
        let mut out = self.clone();
        for n in 1..=l {
            out.bounds[n - 1] = Some(self.check_sigma_cc(n, budget)?);
        }
        Ok(out)
    }

    pub fn check_graded(&self, n: usize) -> Result<GradedOutcome> {
        grading::check_graded(self, n, Exec::default())
    }

    pub fn check_graded_with(&self, n: usize, exec: Exec) -> Result<GradedOutcome> {
        grading::check_graded(self, n, exec)
    }

    /// First failing level, or `Graded` when every `n < L` passes.
    pub fn check_graded_all(&self) -> Result<(usize, GradedOutcome)> {
        let l = self.require_levels()?;
        for n in 1..l {
            let out = self.check_graded(n)?;
            if !out.is_graded() {
                return Ok((n, out));
            }
        }
        Ok((l, GradedOutcome::Graded))
    }

    /// Sampled grading check for rule-based (Cantor) fragmentations.
    pub fn check_graded_sampled(
        &self,
        n: usize,
        samples: usize,
        seed: u64,
    ) -> Result<GradedOutcome> {
        grading::check_graded_sampled(self, n, samples, seed)
    }

    /// For each `n < L`, the least `k <= L` with `U_k ∨ U_k ⊆ U_n`.
    pub fn find_grading_indices(&self) -> Result<BTreeMap<usize, Option<usize>>> {
        grading::find_grading_indices(self, Exec::default())
    }

    pub fn find_grading_indices_with(&self, exec: Exec) -> Result<BTreeMap<usize, Option<usize>>> {
        grading::find_grading_indices(self, exec)
    }

    /// Re-indexed subchain `C_{n_1} ⊆ C_{n_2} ⊆ ...` with
    /// `U_{n_{j+1}} ∨ U_{n_{j+1}} ⊆ U_{n_j}`, which is graded. Returns the
    /// selected indices too.
    pub fn graded_subfragmentation(&self) -> Result<(Fragmentation, Vec<usize>)> {
        grading::graded_subfragmentation(self)
    }

    pub fn render(&self) -> Result<String> {
        io::render(self)
    }

    pub fn parse(text: &str, algebra: Algebra) -> Result<Fragmentation> {
        io::parse(text, algebra)
    }
}
