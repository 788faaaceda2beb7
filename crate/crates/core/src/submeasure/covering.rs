use std::collections::HashMap;

use crate::algebra::{full_mask, Algebra, Element};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `m(a) = min(1, c(a) / scale)` where `c(a)` is the least number of family
/// members whose join lies above `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringParams {
    family: Vec<u32>,
    scale: u32,
}

impl CoveringParams {
    pub fn new(family: Vec<Element>, scale: u32) -> Result<Self> {
        let mut masks = Vec::with_capacity(family.len());
        for e in &family {
            masks.push(e.mask().ok_or(Error::Unsupported("finite"))?);
        }
        masks.retain(|&m| m != 0);
        masks.sort_unstable();
        masks.dedup();
        Ok(CoveringParams {
            family: masks,
            scale,
        })
    }

    pub fn family(&self) -> &[u32] {
        &self.family
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub(super) fn validate(&self, algebra: Algebra) -> Result<()> {
        let n = algebra.require_finite()?;
        if self.scale == 0 {
            return Err(Error::input("covering scale must be at least 1"));
        }
        let full = full_mask(n);
        if self.family.iter().any(|m| m & !full != 0) {
            return Err(Error::input("covering family member outside the algebra"));
        }
        if self.family.iter().fold(0, |acc, m| acc | m) != full {
            return Err(Error::input("covering family does not cover 1"));
        }
        Ok(())
    }

    pub(super) fn value(&self, count: u32) -> Rational {
        if count >= self.scale {
            rational::int(1)
        } else {
            rational::ratio(i64::from(count), i64::from(self.scale))
        }
    }

    /// Exact cover number of one element by branch on its lowest atom.
    pub fn cover_count(&self, mask: u32, budget: &mut Budget) -> Result<u32> {
        let mut memo = HashMap::new();
        self.cover_rec(mask, budget, &mut memo)
    }

    fn cover_rec(
        &self,
        rem: u32,
        budget: &mut Budget,
        memo: &mut HashMap<u32, u32>,
    ) -> Result<u32> {
        if rem == 0 {
            return Ok(0);
        }
        if let Some(&c) = memo.get(&rem) {
            return Ok(c);
        }
        budget.step()?;
        let low = rem & rem.wrapping_neg();
        let mut best = u32::MAX;
        for &f in &self.family {
            if f & low != 0 {
                let c = self.cover_rec(rem & !f, budget, memo)?;
                best = best.min(c.saturating_add(1));
            }
        }
        memo.insert(rem, best);
        Ok(best)
    }

    /// Cover numbers of every mask of an `atoms`-atom algebra.
    pub fn cover_table(&self, atoms: u8) -> Vec<u32> {
        let size = 1usize << atoms;
        let mut table = vec![u32::MAX; size];
        table[0] = 0;
        for m in 1..size {
            let low = (m & m.wrapping_neg()) as u32;
            let mut best = u32::MAX;
            for &f in &self.family {
                if f & low != 0 {
                    best = best.min(table[m & !(f as usize)].saturating_add(1));
                }
            }
            table[m] = best;
        }
        table
    }
}
