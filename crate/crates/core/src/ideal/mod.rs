//! Convergence ideals induced by a submeasure: `I = {(a_n) : m(a_n) -> 0}`.
//!
//! Membership in `I` is never inferred from samples. A sequence carries an
//! [`Envelope`] and every term is checked against it when read.
//!
//! Only submeasure-induced ideals are handled. For those the choice
//! functions have the canonical form "first term below `1/k`", and the
//! fragmentation defined from them has a closed form: `V_n = {a : m(a) < 1/n}`.
//! Arbitrary ideals, where one would have to quantify over every sequence in
//! `I`, are out of reach.

mod choice;
mod concentration;
mod script;
mod stream;

pub use choice::{diagonal_select, fragmentation_from_choice_functions, ChoiceFunctions};
pub use concentration::{
    concentration_witness, ConcentrationReport, ConcentrationVerdict, Selection,
};
pub use script::AntichainScript;
pub use stream::{AntichainStream, CertifiedSequence, Envelope};

use crate::algebra::{full_mask, Algebra, Element, Node, NodeSet};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::submeasure::Submeasure;

/// First failure of a certified sequence within the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeFailure {
    pub index: usize,
    pub value: Rational,
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub horizon: usize,
    pub envelope_nonincreasing: bool,
    pub envelope_tends_to_zero: bool,
    pub violation: Option<EnvelopeFailure>,
    /// Derived sequences built from the input (subsequence, domination,
    /// join with a shift), each re-checked against its own certificate.
    pub derived: Vec<(&'static str, Option<EnvelopeFailure>)>,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.envelope_nonincreasing
            && self.envelope_tends_to_zero
            && self.violation.is_none()
            && self.derived.iter().all(|(_, v)| v.is_none())
    }
}

fn first_violation(
    m: &Submeasure,
    s: &CertifiedSequence,
    horizon: usize,
) -> Result<Option<EnvelopeFailure>> {
    for n in s.start()..s.start() + horizon {
        match s.checked_term(m, n) {
            Ok(_) => {}
            Err(Error::EnvelopeViolation(failure)) => {
                return Ok(Some(*failure));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// A fixed element used to shrink terms in the domination check.
fn halving_element(alg: Algebra) -> Element {
    match alg {
        Algebra::Finite { atoms } => Element::Finite(full_mask(atoms) & 0x5555_5555),
        Algebra::Cantor => Element::Cantor(NodeSet::single(Node::new(1, 0).expect("depth 1 node"))),
    }
}

/// Checks `m(a_n) <= e(n)` for `horizon` terms, then does the same for a
/// subsequence, a pointwise-dominated sequence and a join, each with the
/// certificate the ideal axioms give it.
pub fn ideal_membership_check(
    m: &Submeasure,
    s: &CertifiedSequence,
    horizon: usize,
) -> Result<MembershipReport> {
    if m.algebra() != s.algebra() {
        return Err(Error::MixedBackend);
    }
    let alg = s.algebra();
    let start = s.start();
    let violation = first_violation(m, s, horizon)?;

    let sub = s.subsequence(move |n| 2 * n - start.min(n));
    let cut = halving_element(alg);
    let dominated = s.dominated(move |_, e| alg.meet(&e, &cut).expect("same algebra"));
    let shifted = s.subsequence(|n| n + 1);
    let joined = s.join(&shifted)?;

    let mut derived = Vec::new();
    if violation.is_none() {
        derived.push(("subsequence", first_violation(m, &sub, horizon)?));
        derived.push(("dominated", first_violation(m, &dominated, horizon)?));
        derived.push(("join", first_violation(m, &joined, horizon)?));
    }
    Ok(MembershipReport {
        horizon,
        envelope_nonincreasing: s.envelope().is_nonincreasing(start + 2 * horizon + 1),
        envelope_tends_to_zero: s.envelope().tends_to_zero(),
        violation,
        derived,
    })
}
