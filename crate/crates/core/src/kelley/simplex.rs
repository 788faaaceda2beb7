//! Dense exact-rational simplex for `max c·x` subject to `A x <= b`, `x >= 0`
//! with `b >= 0`, so the slack basis is a feasible start. Bland's rule picks
//! both the entering and the leaving variable, which rules out cycling.

use num_traits::{Signed, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub primal: Vec<Rational>,
    /// Optimal solution of the dual `min b·w` subject to `Aᵀw >= c`, `w >= 0`.
    pub dual: Vec<Rational>,
}

pub fn maximize(
    a: &[Vec<Rational>],
    b: &[Rational],
    c: &[Rational],
    budget: &mut Budget,
) -> Result<LpSolution> {
    let rows = a.len();
    let cols = c.len();
    if b.len() != rows || a.iter().any(|r| r.len() != cols) {
        return Err(Error::input("inconsistent LP dimensions"));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(Error::input("right-hand side must be nonnegative"));
    }
    let width = cols + rows;
    // tableau rows: [A | I | b]; objective row holds z_j - c_j
    let mut t: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, bi))| {
            let mut r = row.clone();
            r.extend((0..rows).map(|k| {
                if k == i {
                    Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                }
            }));
            r.push(bi.clone());
            r
        })
        .collect();
    let mut obj: Vec<Rational> = c.iter().map(|x| -x).collect();
    obj.extend(std::iter::repeat_n(Rational::zero(), rows + 1));
    let mut basis: Vec<usize> = (cols..width).collect();

    loop {
        budget.step()?;
        let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (pivot_row, _) = leave.ok_or_else(|| Error::input("LP is unbounded"))?;
        pivot(&mut t, &mut obj, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    let mut primal = vec![Rational::zero(); cols];
    for (i, &var) in basis.iter().enumerate() {
        if var < cols {
            primal[var] = t[i][width].clone();
        }
    }
    let dual = obj[cols..width].to_vec();
    Ok(LpSolution {
        value: obj[width].clone(),
        primal,
        dual,
    })
}

fn pivot(t: &mut [Vec<Rational>], obj: &mut [Rational], r: usize, col: usize) {
    let p = t[r][col].clone();
    for x in t[r].iter_mut() {
        *x /= &p;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[col].is_zero() {
            continue;
        }
        let f = row[col].clone();
        for (x, y) in row.iter_mut().zip(&pivot_row) {
            *x -= &f * y;
        }
    }
    if !obj[col].is_zero() {
        let f = obj[col].clone();
        for (x, y) in obj.iter_mut().zip(&pivot_row) {
            *x -= &f * y;
        }
    }
}
