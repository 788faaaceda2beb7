use super::Envelope;
use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::submeasure::Submeasure;

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub index: usize,
    pub element: Element,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConcentrationVerdict {
    /// The selected values are bounded by an envelope that is proved or
    /// declared, not fitted.
    Certified(Envelope),
    /// The running tail maximum of the selected values decreased within the
    /// horizon. Evidence only.
    Empirical(Envelope),
    /// The tail maximum never decreased within the horizon.
    NotConcentrated,
}

impl ConcentrationVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            ConcentrationVerdict::Certified(_) => "certified",
            ConcentrationVerdict::Empirical(_) => "empirical",
            ConcentrationVerdict::NotConcentrated => "not-concentrated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationReport {
    pub selections: Vec<Selection>,
    pub verdict: ConcentrationVerdict,
}

/// Picks `a_n ∈ A_n` of least value (ties go to the smaller element) for
/// each antichain up to `horizon`.
///
/// For finitely additive `m` the values of `A_n` sum to at most 1, so the
/// least is at most `1/|A_n| <= 1/n` and `1/n` certifies the selection. A
/// `declared` envelope is checked term by term and certifies when it holds.
/// Otherwise the verdict rests on the fitted running maximum.
pub fn concentration_witness(
    m: &Submeasure,
    antichains: impl IntoIterator<Item = (usize, Vec<Element>)>,
    declared: Option<Envelope>,
    horizon: usize,
) -> Result<ConcentrationReport> {
    let alg = m.algebra();
    let mut selections = Vec::new();
    for (n, set) in antichains.into_iter().take(horizon) {
        if set.len() < n {
            return Err(Error::input(format!(
                "antichain {n} has {} elements, needs {n}",
                set.len()
            )));
        }
        if !alg.is_antichain(&set)? {
            return Err(Error::input(format!(
                "antichain {n} is not pairwise disjoint and nonzero"
            )));
        }
        let mut best: Option<(Rational, &Element)> = None;
        for e in &set {
            let v = m.eval(e)?;
            let better = match &best {
                None => true,
                Some((bv, be)) => v < *bv || (v == *bv && e < *be),
            };
            if better {
                best = Some((v, e));
            }
        }
        let (value, element) =
            best.ok_or_else(|| Error::input(format!("antichain {n} is empty")))?;
        selections.push(Selection {
            index: n,
            element: element.clone(),
            value,
        });
    }

    if let Some(env) = declared {
        for s in &selections {
            let bound = env.at(s.index);
            if s.value > bound {
                return Err(Error::envelope(s.index, s.value.clone(), bound));
            }
        }
        let verdict = if env.tends_to_zero() {
            ConcentrationVerdict::Certified(env)
        } else {
            ConcentrationVerdict::NotConcentrated
        };
        return Ok(ConcentrationReport {
            selections,
            verdict,
        });
    }

    if m.is_additive_by_construction() {
        return Ok(ConcentrationReport {
            selections,
            verdict: ConcentrationVerdict::Certified(Envelope::harmonic(rational::int(1))),
        });
    }

    // tail maxima: a nonincreasing fit through the selected values
    let mut fitted: Vec<Rational> = Vec::with_capacity(selections.len());
    let mut running: Option<Rational> = None;
    for s in selections.iter().rev() {
        let v = match running {
            Some(r) if r > s.value => r,
            _ => s.value.clone(),
        };
        running = Some(v.clone());
        fitted.push(v);
    }
    fitted.reverse();
    let decreased = match (fitted.first(), fitted.last()) {
        (Some(a), Some(b)) => b < a,
        _ => false,
    };
    let verdict = if decreased {
        let mut table = vec![fitted[0].clone(); selections[0].index];
        for (s, v) in selections.iter().zip(&fitted) {
            table.resize(s.index, v.clone());
            table.push(v.clone());
        }
        ConcentrationVerdict::Empirical(Envelope::Table(table))
    } else {
        ConcentrationVerdict::NotConcentrated
    };
    Ok(ConcentrationReport {
        selections,
        verdict,
    })
}
