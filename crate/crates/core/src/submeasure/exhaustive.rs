use crate::algebra::{max_disjoint_packing, minimal_masks, Algebra, UpwardClosedFamily};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ideal::AntichainStream;
use crate::rational::Rational;

use super::{Submeasure, ValueTable};

#[derive(Debug, Clone, PartialEq)]
pub enum ExhaustivityOutcome {
    /// Every sampled term from `index` on has value below `eps`. `certified`
    /// when the stream ended, or its envelope is consistent with the sampled
    /// values and already below `eps` at the last sampled index.
    Index { index: usize, certified: bool },
    /// The last sampled term is still at or above `eps`.
    HorizonExhausted {
        trailing_max: Rational,
        sampled: usize,
    },
}

/// Samples `stream` up to index `horizon` and finds where its values drop
/// below `eps` for good.
pub fn is_exhaustive_on(
    m: &Submeasure,
    stream: &mut AntichainStream,
    eps: &Rational,
    horizon: usize,
) -> Result<ExhaustivityOutcome> {
    if stream.algebra() != m.algebra() {
        return Err(Error::MixedBackend);
    }
    let start = stream.start();
    let mut values: Vec<Rational> = Vec::new();
    let mut last_bad: Option<usize> = None;
    let mut envelope_ok = stream.envelope().is_some();
    let mut last_index = None;
    let mut finished = true;
    loop {
        let next = stream.next();
        let (index, e) = match next {
            None => break,
            Some(item) => item?,
        };
        if index > horizon {
            finished = false;
            break;
        }
        let v = m.eval(&e)?;
        if let Some(env) = stream.envelope() {
            if v > env.at(index) {
                envelope_ok = false;
            }
        }
        if v >= *eps {
            last_bad = Some(index);
        }
        values.push(v);
        last_index = Some(index);
    }
    let Some(end) = last_index else {
        return Ok(ExhaustivityOutcome::Index {
            index: start,
            certified: true,
        });
    };
    let candidate = last_bad.map_or(start, |i| i + 1);
    if candidate > end {
        let tail = &values[values.len() / 2..];
        let trailing_max = tail.iter().max().cloned().unwrap_or_default();
        return Ok(ExhaustivityOutcome::HorizonExhausted {
            trailing_max,
            sampled: values.len(),
        });
    }
    let certified =
        finished || (envelope_ok && stream.envelope().is_some_and(|env| env.at(end) < *eps));
    Ok(ExhaustivityOutcome::Index {
        index: candidate,
        certified,
    })
}

/// Largest antichain of elements with `m(a) >= eps` (finite backend, exact).
pub fn uniform_exhaustivity_bound(
    m: &Submeasure,
    eps: &Rational,
    budget: &mut Budget,
) -> Result<usize> {
    let family = level_family(m, eps)?;
    Ok(max_disjoint_packing(&family, budget)?.exact()?.size)
}

/// `{a : m(a) >= t}` by its minimal elements.
pub(crate) fn level_family(m: &Submeasure, t: &Rational) -> Result<UpwardClosedFamily> {
    let table = ValueTable::of(m)?;
    Ok(threshold_family(m.algebra(), &table, t))
}

pub(crate) fn threshold_family(
    algebra: Algebra,
    table: &ValueTable,
    t: &Rational,
) -> UpwardClosedFamily {
    let member: Vec<bool> = (0..table.len() as u32)
        .map(|a| table.at_least(a, t))
        .collect();
    UpwardClosedFamily::from_minimal_masks(algebra, minimal_masks(&member))
}
