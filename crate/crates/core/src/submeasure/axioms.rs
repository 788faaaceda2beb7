use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Submeasure, ValueTable};
use crate::algebra::{submasks, Algebra, Element, NodeSet};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::rational::{self, Rational};

pub const MAX_EXHAUSTIVE_ATOMS: u8 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Every pair; finite backend with at most 12 atoms.
    Exhaustive,
    Sampled {
        count: u64,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Boundary {
        element: Element,
        value: Rational,
    },
    Monotone {
        a: Element,
        b: Element,
        ma: Rational,
        mb: Rational,
    },
    Subadditive {
        a: Element,
        b: Element,
        ma: Rational,
        mb: Rational,
        mjoin: Rational,
    },
    NotStrictlyPositive {
        a: Element,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = rational::format;
        match self {
            Violation::Boundary { element, value } => {
                write!(f, "violation=boundary elem={element} value={}", q(value))
            }
            Violation::Monotone { a, b, ma, mb } => {
                write!(
                    f,
                    "violation=monotone a={a} b={b} m_a={} m_b={}",
                    q(ma),
                    q(mb)
                )
            }
            Violation::Subadditive {
                a,
                b,
                ma,
                mb,
                mjoin,
            } => write!(
                f,
                "violation=subadditive a={a} b={b} m_a={} m_b={} m_join={}",
                q(ma),
                q(mb),
                q(mjoin)
            ),
            Violation::NotStrictlyPositive { a } => write!(f, "violation=positivity a={a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub mode: CheckMode,
    pub monotone_pairs: u64,
    pub subadditive_pairs: u64,
    /// First violation in scan order: boundary, monotonicity,
    /// subadditivity, then strict positivity.
    pub violation: Option<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn check_axioms(m: &Submeasure, mode: CheckMode) -> Result<AxiomReport> {
    check_axioms_with(m, mode, Exec::default())
}

pub fn check_axioms_with(m: &Submeasure, mode: CheckMode, exec: Exec) -> Result<AxiomReport> {
    match (mode, m.algebra()) {
        (CheckMode::Exhaustive, Algebra::Finite { atoms }) if atoms <= MAX_EXHAUSTIVE_ATOMS => {
            Ok(exhaustive(m, atoms, exec)?)
        }
        (CheckMode::Exhaustive, _) => Err(Error::input(format!(
            "exhaustive axiom checks need a finite algebra with at most {MAX_EXHAUSTIVE_ATOMS} atoms"
        ))),
        (CheckMode::Sampled { count, seed }, Algebra::Finite { atoms }) => sampled_finite(m, atoms, count, seed),
        (CheckMode::Sampled { count, seed }, Algebra::Cantor) => sampled_cantor(m, count, seed),
    }
}

fn boundary(m: &Submeasure) -> Result<Option<Violation>> {
    let alg = m.algebra();
    let zero = alg.zero();
    let v0 = m.eval(&zero)?;
    if !v0.is_zero() {
        return Ok(Some(Violation::Boundary {
            element: zero,
            value: v0,
        }));
    }
    let one = alg.one();
    let v1 = m.eval(&one)?;
    if !v1.is_one() {
        return Ok(Some(Violation::Boundary {
            element: one,
            value: v1,
        }));
    }
    Ok(None)
}

fn exhaustive(m: &Submeasure, atoms: u8, exec: Exec) -> Result<AxiomReport> {
    let table = ValueTable::of(m)?;
    let size = 1u64 << atoms;
    let mut report = AxiomReport {
        mode: CheckMode::Exhaustive,
        monotone_pairs: 3u64.pow(u32::from(atoms)),
        subadditive_pairs: size * (size + 1) / 2,
        violation: None,
    };
    if let Some(v) = boundary(m)? {
        report.violation = Some(v);
        return Ok(report);
    }
    let v = |x: u32| table.get(x).clone();

    // every comparable pair a <= b, b ascending, a ascending within b
    let mono = par::find_first(exec, 0..size, |b| {
        let b = b as u32;
        let mut subs: Vec<u32> = submasks(b).collect();
        subs.push(0);
        subs.reverse();
        subs.into_iter().find(|&a| !table.le(a, b)).map(|a| (a, b))
    });
    if let Some((a, b)) = mono {
        report.violation = Some(Violation::Monotone {
            a: Element::Finite(a),
            b: Element::Finite(b),
            ma: v(a),
            mb: v(b),
        });
        return Ok(report);
    }

    let sub = par::find_first(exec, 0..size, |a| {
        let a = a as u32;
        (a..size as u32)
            .find(|&b| !table.le_sum(a | b, a, b))
            .map(|b| (a, b))
    });
    if let Some((a, b)) = sub {
        report.violation = Some(Violation::Subadditive {
            a: Element::Finite(a),
            b: Element::Finite(b),
            ma: v(a),
            mb: v(b),
            mjoin: v(a | b),
        });
        return Ok(report);
    }

    if let Some(a) = (1..size as u32).find(|&a| table.is_zero(a)) {
        report.violation = Some(Violation::NotStrictlyPositive {
            a: Element::Finite(a),
        });
    }
    Ok(report)
}

/// Random pairs `(a, b)`: monotonicity on `a ∧ b <= a`, subadditivity on
/// `(a, b)`, positivity on `a`.
fn sampled_finite(m: &Submeasure, atoms: u8, count: u64, seed: u64) -> Result<AxiomReport> {
    let table = ValueTable::of(m)?;
    let full = crate::algebra::full_mask(atoms);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AxiomReport {
        mode: CheckMode::Sampled { count, seed },
        monotone_pairs: count,
        subadditive_pairs: count,
        violation: boundary(m)?,
    };
    if report.violation.is_some() {
        return Ok(report);
    }
    let v = |x: u32| table.get(x).clone();
    for _ in 0..count {
        let a = rng.gen::<u32>() & full;
        let b = rng.gen::<u32>() & full;
        let lo = a & b;
        if !table.le(lo, a) {
            report.violation = Some(Violation::Monotone {
                a: Element::Finite(lo),
                b: Element::Finite(a),
                ma: v(lo),
                mb: v(a),
            });
            break;
        }
        if !table.le_sum(a | b, a, b) {
            report.violation = Some(Violation::Subadditive {
                a: Element::Finite(a),
                b: Element::Finite(b),
                ma: v(a),
                mb: v(b),
                mjoin: v(a | b),
            });
            break;
        }
        if a != 0 && table.is_zero(a) {
            report.violation = Some(Violation::NotStrictlyPositive {
                a: Element::Finite(a),
            });
            break;
        }
    }
    Ok(report)
}

const SAMPLE_DEPTH: u8 = 6;

fn sampled_cantor(m: &Submeasure, count: u64, seed: u64) -> Result<AxiomReport> {
    let alg = m.algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AxiomReport {
        mode: CheckMode::Sampled { count, seed },
        monotone_pairs: count,
        subadditive_pairs: count,
        violation: boundary(m)?,
    };
    if report.violation.is_some() {
        return Ok(report);
    }
    for _ in 0..count {
        let depth = rng.gen_range(1..=SAMPLE_DEPTH);
        let a = Element::Cantor(NodeSet::random(&mut rng, depth));
        let b = Element::Cantor(NodeSet::random(&mut rng, depth));
        let lo = alg.meet(&a, &b)?;
        let (ma, mb, mlo) = (m.eval(&a)?, m.eval(&b)?, m.eval(&lo)?);
        if mlo > ma {
            report.violation = Some(Violation::Monotone {
                a: lo,
                b: a,
                ma: mlo,
                mb: ma,
            });
            break;
        }
        let j = alg.join(&a, &b)?;
        let mj = m.eval(&j)?;
        if mj > &ma + &mb {
            report.violation = Some(Violation::Subadditive {
                a,
                b,
                ma,
                mb,
                mjoin: mj,
            });
            break;
        }
        if !a.is_zero() && ma.is_zero() {
            report.violation = Some(Violation::NotStrictlyPositive { a });
            break;
        }
    }
    Ok(report)
}
