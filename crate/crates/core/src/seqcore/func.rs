use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::Term;
use crate::error::{Result, SeqError};

/// The closed vocabulary of integer functions used by elementwise, index and
/// set maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FnSpec {
    Add(Term),
    Mul(Term),
    Square,
    /// Base-10 digit reversal of the square, leading zeros dropped.
    ReverseSquare,
    /// 1 at `m`, 0 elsewhere.
    Delta(Term),
    /// `x` followed by its own digits reversed.
    ConcatRev,
    Const(Term),
    Identity,
}

impl FnSpec {
    pub fn eval(&self, x: &Term) -> Result<Term> {
        Ok(match self {
            FnSpec::Add(c) => x + c,
            FnSpec::Mul(c) => x * c,
            FnSpec::Square => x * x,
            FnSpec::ReverseSquare => {
                if x.is_negative() {
                    return Err(SeqError::NegativeBaseInput(x.clone()));
                }
                reverse_digits(&(x * x))?
            }
            FnSpec::Delta(m) => BigInt::from(u8::from(x == m)),
            FnSpec::ConcatRev => concat_reversed(x, x)?,
            FnSpec::Const(c) => c.clone(),
            FnSpec::Identity => x.clone(),
        })
    }

    /// Strictly increasing over all integers.
    pub fn is_increasing(&self) -> bool {
        match self {
            FnSpec::Add(_) | FnSpec::Identity => true,
            FnSpec::Mul(c) => c.is_positive(),
            _ => false,
        }
    }

    /// Strictly increasing over the non-negative integers.
    pub fn is_increasing_on_nonnegative(&self) -> bool {
        self.is_increasing() || matches!(self, FnSpec::Square | FnSpec::ConcatRev)
    }

    /// `f` is constant, so the image of any non-empty set is one value.
    pub fn constant_value(&self) -> Option<Term> {
        match self {
            FnSpec::Const(c) => Some(c.clone()),
            FnSpec::Mul(c) if c.is_zero() => Some(BigInt::zero()),
            _ => None,
        }
    }
}

impl fmt::Display for FnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnSpec::Add(c) => write!(f, "add, {c}"),
            FnSpec::Mul(c) => write!(f, "mul, {c}"),
            FnSpec::Square => f.write_str("square"),
            FnSpec::ReverseSquare => f.write_str("revsq"),
            FnSpec::Delta(m) => write!(f, "delta, {m}"),
            FnSpec::ConcatRev => f.write_str("concatrev"),
            FnSpec::Const(c) => write!(f, "const, {c}"),
            FnSpec::Identity => f.write_str("id"),
        }
    }
}

pub fn eval_fn(f: &FnSpec, x: &Term) -> Result<Term> {
    f.eval(x)
}

fn digits(x: &Term) -> Result<String> {
    if x.is_negative() {
        return Err(SeqError::NegativeBaseInput(x.clone()));
    }
    Ok(x.to_str_radix(10))
}

/// Decimal digit reversal as a number: `reverse(120) = 21`, `reverse(0) = 0`.
pub fn reverse_digits(x: &Term) -> Result<Term> {
    let rev: String = digits(x)?.chars().rev().collect();
    Ok(rev.parse().expect("decimal digits"))
}

/// Decimal concatenation of `x` with the digit string of `y` reversed. The
/// reversed string keeps its zeros, so `concat_reversed(10, 10) = 1001` and
/// `concat_reversed(5, 0) = 50`.
pub fn concat_reversed(x: &Term, y: &Term) -> Result<Term> {
    let mut s = digits(x)?;
    s.extend(digits(y)?.chars().rev());
    Ok(s.parse().expect("decimal digits"))
}
