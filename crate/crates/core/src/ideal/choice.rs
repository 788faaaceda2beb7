use num_traits::Zero;

use super::{CertifiedSequence, Envelope};
use crate::algebra::{minimal_masks, Algebra, Element, UpwardClosedFamily};
use crate::error::{Error, Result};
use crate::fragmentation::Fragmentation;
use crate::rational::{self, Rational};
use crate::submeasure::{Submeasure, ValueTable};

/// How far past the start a selector may look when the envelope gives no
/// closed-form crossing point.
const SEARCH_LIMIT: usize = 1 << 20;

/// The canonical choice functions of a submeasure-induced ideal: `F_k`
/// returns the first term with `m(a_n) < 1/k`.
#[derive(Debug, Clone)]
pub struct ChoiceFunctions {
    m: Submeasure,
}

impl ChoiceFunctions {
    pub fn from_submeasure(m: &Submeasure) -> Self {
        ChoiceFunctions { m: m.clone() }
    }

    pub fn submeasure(&self) -> &Submeasure {
        &self.m
    }

    /// `F_k(s)` with its index. The scan stops no later than the first index
    /// where the envelope drops below `1/k`; a term there that is not below
    /// `1/k` contradicts the certificate and is reported as a violation.
    pub fn select(&self, k: usize, s: &CertifiedSequence) -> Result<(usize, Element)> {
        if k == 0 {
            return Err(Error::input("choice functions are indexed from 1"));
        }
        let t = rational::ratio(1, k as i64);
        let start = s.start();
        let stop = s
            .envelope()
            .first_below(&t, start, start + SEARCH_LIMIT)
            .ok_or_else(|| Error::input(format!("envelope {} stays above 1/{k}", s.envelope())))?;
        for n in start..=stop {
            let (e, v) = s.checked_term(&self.m, n)?;
            if v < t {
                return Ok((n, e));
            }
        }
        unreachable!("checked_term rejects the term at the crossing point")
    }
}

/// `{F_k(s^k)}_k` for `k = 1..=streams.len()`, where `streams[k-1]` is `s^k`.
/// Each selection sees only `k` and its own stream. The result is indexed
/// from 1, certified by `1/k`, and is zero past the last stream.
pub fn diagonal_select(
    f: &ChoiceFunctions,
    streams: &[CertifiedSequence],
) -> Result<CertifiedSequence> {
    let alg = f.m.algebra();
    let terms = streams
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if s.algebra() != alg {
                return Err(Error::MixedBackend);
            }
            Ok(f.select(i + 1, s)?.1)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CertifiedSequence::from_terms(
        alg,
        1,
        Envelope::harmonic(rational::int(1)),
        terms,
    ))
}

/// Fragmentation from the choice functions: `V_n = {a : a <= F_n(x) for some
/// x ∈ I}`, `U_n = V_1 ∩ ... ∩ V_n`, `C_n = B - U_n`.
///
/// With the canonical `F_n`, `a ∈ V_n` exactly when `F_n` picks `a` out of
/// `(a, 0, 0, ...)`: a selected term is below `1/n` and so is everything under
/// it, and conversely `a` with `m(a) < 1/n` is picked from that sequence. The
/// result therefore matches the harmonic level sets of `m`.
///
/// Levels are built until every nonzero element is in some `C_n`; `depth`
/// caps the search. On the Cantor backend the closed-form rule is returned.
pub fn fragmentation_from_choice_functions(m: &Submeasure, depth: usize) -> Result<Fragmentation> {
    let alg = m.algebra();
    let Algebra::Finite { atoms } = alg else {
        return Fragmentation::from_submeasure_harmonic(m);
    };
    let f = ChoiceFunctions::from_submeasure(m);
    let table = ValueTable::of(m)?;
    let size = 1u32 << atoms;
    let mut least = vec![0usize; size as usize];
    for a in 1..size {
        let v = table.get(a).clone();
        if v.is_zero() {
            return Err(Error::NotStrictlyPositive(Element::Finite(a)));
        }
        // (a, 0, 0, ...): its value bounds term 0, zero bounds the rest
        let seq = CertifiedSequence::from_terms(
            alg,
            0,
            Envelope::Table(vec![v, Rational::zero()]),
            vec![Element::Finite(a)],
        );
        let level = (1..=depth).find(|&n| matches!(f.select(n, &seq), Ok((i, _)) if i != 0));
        least[a as usize] = level.ok_or_else(|| {
            Error::input(format!("{a:#x} stays in every V_n up to depth {depth}"))
        })?;
    }
    let top = least.iter().copied().max().unwrap_or(1).max(1);
    let levels = (1..=top)
        .map(|n| {
            let member: Vec<bool> = least
                .iter()
                .enumerate()
                .map(|(a, &l)| a != 0 && l <= n)
                .collect();
            UpwardClosedFamily::from_minimal_masks(alg, minimal_masks(&member))
        })
        .collect();
    Fragmentation::from_levels(alg, levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f10() -> Algebra {
        Algebra::finite(10).unwrap()
    }

    fn geometric_atoms(alg: Algebra) -> CertifiedSequence {
        // values 1, 1/2, 1/5, then zero
        CertifiedSequence::from_terms(
            alg,
            0,
            Envelope::geometric(rational::int(1)),
            vec![alg.one(), Element::Finite(0b11111), Element::Finite(0b11)],
        )
    }

    #[test]
    fn select_respects_envelope_bound() {
        let alg = f10();
        let m = Submeasure::uniform(alg);
        let f = ChoiceFunctions::from_submeasure(&m);
        let s = geometric_atoms(alg);
        let (i, e) = f.select(5, &s).unwrap();
        assert!(i <= 3);
        assert!(m.eval(&e).unwrap() < ratio(1, 5));
        assert_eq!(f.select(1, &s).unwrap().0, 1);
        assert!(f.select(0, &s).is_err());
    }

    #[test]
    fn lying_envelope_is_caught() {
        let alg = f10();
        let m = Submeasure::uniform(alg);
        let f = ChoiceFunctions::from_submeasure(&m);
        let s = CertifiedSequence::new(alg, 0, Envelope::harmonic(ratio(1, 1)), |_| {
            Element::Finite(0b11)
        });
        // 1/5 is fine for F_4 but breaks the bound 1/6 at index 6 on the way to F_6
        assert_eq!(f.select(4, &s).unwrap().0, 0);
        assert!(matches!(
            f.select(6, &s),
            Err(Error::EnvelopeViolation(f)) if f.index == 6
        ));
    }

    #[test]
    fn diagonal_is_null() {
        let alg = f10();
        let m = Submeasure::uniform(alg);
        let f = ChoiceFunctions::from_submeasure(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let streams: Vec<CertifiedSequence> = (0..40)
            .map(|_| {
                let offset: usize = rng.gen_range(0..4);
                CertifiedSequence::new(alg, 0, Envelope::harmonic(rational::int(10)), move |n| {
                    // n + offset >= 10 atoms would leave the algebra; shrink to 0
                    let keep = 10usize.saturating_sub(n.saturating_sub(offset));
                    Element::Finite(((1u32 << keep) - 1) & 0x3ff)
                })
            })
            .collect();
        let d = diagonal_select(&f, &streams).unwrap();
        for k in 1..=40 {
            assert!(m.eval(&d.term(k)).unwrap() < ratio(1, k as i64));
        }
        assert!(d.term(41).is_zero());
    }

    #[test]
    fn closed_form_matches_harmonic() {
        for alg in [Algebra::finite(4).unwrap(), Algebra::finite(6).unwrap()] {
            let m = Submeasure::uniform(alg);
            let a = fragmentation_from_choice_functions(&m, 64).unwrap();
            let b = Fragmentation::from_submeasure_harmonic(&m).unwrap();
            assert_eq!(a.levels().unwrap(), b.levels().unwrap());
        }
        let m = Submeasure::uniform(f10());
        assert!(fragmentation_from_choice_functions(&m, 3).is_err());
    }
}
