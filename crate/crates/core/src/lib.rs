//! Exact, desk-scale machinery for submeasures on Boolean algebras.
//!
//! The crate works over two exactly represented algebras: the powerset of a
//! finite set of atoms (elements are bitmasks) and the clopen algebra of
//! Cantor space (elements are canonical sets of binary-tree nodes). On top of
//! those it provides
//!
//! * submeasures with exact rational values, axiom checking, the induced
//!   metric and exhaustivity testing ([`submeasure`]);
//! * fragmentation chains, grading and chain-condition validators
//!   ([`fragmentation`]);
//! * the dyadic construction of a strictly positive exhaustive submeasure
//!   from a graded fragmentation ([`construction`]);
//! * certified null sequences, choice functions and diagonalisation for
//!   submeasure-induced convergence ideals ([`ideal`]);
//! * Kelley intersection numbers by exact linear programming and extraction
//!   of finitely additive measures ([`kelley`]);
//! * a batch command line front-end ([`cli`]).
//!
//! Exhaustive scans run on rayon when the `parallel` feature is enabled (the
//! default) and fall back to plain iteration otherwise; see [`par`].

pub mod algebra;
pub mod budget;
pub mod cli;
pub mod construction;
pub mod error;
pub mod fragmentation;
pub mod ideal;
pub mod kelley;
pub mod par;
pub mod rational;
pub mod submeasure;

pub use algebra::{Algebra, Element, UpwardClosedFamily};
pub use budget::Budget;
pub use error::{Error, Result};
pub use rational::Rational;
pub use submeasure::Submeasure;
