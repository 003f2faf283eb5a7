//! Lazy integer-sequence algebra.
//!
//! Sequences are 1-indexed streams of exact big integers. The transform
//! modules build new sequences from old ones: [`pointwise`] maps and zips,
//! [`inverses`] compositional and geometric inverses, [`setops`] the
//! sequence/set correspondence, [`calcconv`] discrete calculus, convolution
//! and binomial transforms. [`oeis`] looks prefixes up in a local snapshot and
//! [`dsl`] parses and evaluates pipelines such as `primes | add(-2) | intersect(primes)`.

pub mod calcconv;
pub mod dsl;
pub mod error;
pub mod inverses;
pub mod oeis;
pub mod pointwise;
pub mod search;
pub mod seqcore;
pub mod setops;

pub use error::{Result, SeqError, Truncation};
pub use seqcore::{take, Certificate, FinitePrefix, FnSpec, Limits, Monotonicity, Sequence, Term};
