use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Strictly increasing positive levels `n_1 < ... < n_k`, read as
/// `2^-n_1 + ... + 2^-n_k`. The special index `{0}` stands for `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicIndex {
    levels: Vec<usize>,
}

impl DyadicIndex {
    pub fn new(mut levels: Vec<usize>) -> Result<Self> {
        levels.sort_unstable();
        if levels == [0] {
            return Ok(DyadicIndex::one());
        }
        if levels.is_empty() || levels[0] == 0 || levels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input(
                "dyadic index needs distinct positive levels, or {0}",
            ));
        }
        Ok(DyadicIndex { levels })
    }

    pub fn one() -> Self {
        DyadicIndex { levels: vec![0] }
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn value(&self) -> Rational {
        if self.levels == [0] {
            return Rational::one();
        }
        self.levels
            .iter()
            .map(|&n| rational::dyadic(n as u32))
            .sum()
    }

    /// Binary expansion of a dyadic rational in `(0, 1]`.
    pub fn from_value(r: &Rational) -> Result<Self> {
        if r.is_one() {
            return Ok(DyadicIndex::one());
        }
        let denom = r.denom();
        if r <= &Rational::zero()
            || r > &Rational::one()
            || (denom & (denom - BigInt::one())) != BigInt::zero()
        {
            return Err(Error::input(format!(
                "{} is not a dyadic rational in (0,1]",
                rational::format(r)
            )));
        }
        let shift = denom.bits() as usize - 1;
        let numer = r.numer();
        let levels = (0..shift)
            .filter(|&i| numer.bit(i as u64))
            .map(|i| shift - i)
            .rev()
            .collect();
        DyadicIndex::new(levels)
    }
}

impl Ord for DyadicIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value().cmp(&other.value())
    }
}

impl PartialOrd for DyadicIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn values_and_expansion() {
        let i = DyadicIndex::new(vec![3, 1]).unwrap();
        assert_eq!(i.levels(), &[1, 3]);
        assert_eq!(i.value(), ratio(5, 8));
        assert_eq!(DyadicIndex::from_value(&ratio(5, 8)).unwrap(), i);
        assert_eq!(
            DyadicIndex::from_value(&ratio(1, 1)).unwrap(),
            DyadicIndex::one()
        );
        assert_eq!(DyadicIndex::one().value(), ratio(1, 1));
        assert!(DyadicIndex::from_value(&ratio(1, 3)).is_err());
        assert!(DyadicIndex::from_value(&ratio(0, 1)).is_err());
        assert!(DyadicIndex::new(vec![2, 2]).is_err());
        assert!(DyadicIndex::new(vec![0, 1]).is_err());
    }

    #[test]
    fn ordering_follows_value() {
        let a = DyadicIndex::new(vec![2, 3]).unwrap();
        let b = DyadicIndex::new(vec![1]).unwrap();
        assert!(a < b);
        assert!(b < DyadicIndex::one());
    }
}
