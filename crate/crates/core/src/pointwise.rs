//! Position-by-position transforms: elementwise maps, index maps, composition
//! and binary zips. Every result has random access, delegating each index to
//! the memoized upstream terms.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Result, SeqError};
use crate::seqcore::{concat_reversed, Certificate, FnSpec, Sequence, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZipOp {
    Sum,
    Product,
    /// `a(n)` followed by the digits of `b(n)` reversed.
    ConcatAbRev,
}

impl ZipOp {
    pub fn apply(self, x: &Term, y: &Term) -> Result<Term> {
        match self {
            ZipOp::Sum => Ok(x + y),
            ZipOp::Product => Ok(x * y),
            ZipOp::ConcatAbRev => concat_reversed(x, y),
        }
    }
}

impl fmt::Display for ZipOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZipOp::Sum => "zipsum",
            ZipOp::Product => "zipprod",
            ZipOp::ConcatAbRev => "concatrev",
        })
    }
}

/// `b(n) = f(a(n))`.
pub fn elementwise(a: &Sequence, f: FnSpec) -> Sequence {
    let cert = elementwise_cert(a.cert(), &f);
    let src = a.clone();
    let label = format!("{} | {}", a.label(), stage_text(&f));
    Sequence::direct(label, cert, move |n| f.eval(&src.term_big(n)?))
}

fn stage_text(f: &FnSpec) -> String {
    match f {
        FnSpec::Add(c) => format!("add({c})"),
        FnSpec::Mul(c) => format!("mul({c})"),
        FnSpec::Delta(m) => format!("delta({m})"),
        FnSpec::Const(c) => format!("const({c})"),
        FnSpec::ReverseSquare => "revsq".into(),
        FnSpec::ConcatRev => "concatrev".into(),
        FnSpec::Square => "imap(square)".into(),
        FnSpec::Identity => "id".into(),
    }
}

fn elementwise_cert(c: &Certificate, f: &FnSpec) -> Certificate {
    match f {
        FnSpec::Identity => c.clone(),
        FnSpec::Add(k) => Certificate {
            floor: c.floor.as_ref().map(|x| x + k),
            universal: false,
            ..c.clone()
        },
        FnSpec::Mul(k) if k.is_positive() => Certificate {
            floor: c.floor.as_ref().map(|x| x * k),
            universal: false,
            ..c.clone()
        },
        FnSpec::Mul(k) if k.is_zero() => constant_cert(BigInt::zero()),
        FnSpec::Const(k) => constant_cert(k.clone()),
        FnSpec::Mul(_) => Certificate::unordered(),
        FnSpec::Square | FnSpec::ConcatRev if c.nonnegative() => Certificate {
            floor: Some(
                f.eval(c.floor.as_ref().unwrap())
                    .expect("non-negative floor"),
            ),
            universal: false,
            ..c.clone()
        },
        FnSpec::Square => Certificate {
            floor: Some(BigInt::zero()),
            ..Certificate::unordered()
        },
        FnSpec::ConcatRev | FnSpec::ReverseSquare | FnSpec::Delta(_) => Certificate {
            floor: Some(BigInt::zero()),
            ..Certificate::unordered()
        },
    }
}

fn constant_cert(c: Term) -> Certificate {
    Certificate {
        nondec: true,
        floor: Some(c),
        ..Certificate::unordered()
    }
}

/// `b(n) = a(f(n))`. An index `f(n) < 1` fails at `n` only.
pub fn index_map(a: &Sequence, f: FnSpec) -> Sequence {
    let cert = index_map_cert(a.cert(), &f);
    let src = a.clone();
    let label = format!("{} | imap({f})", a.label());
    Sequence::direct(label, cert, move |n| {
        let k = f.eval(n)?;
        if k < BigInt::from(1) {
            return Err(SeqError::IndexOutOfDomain {
                index: n.clone(),
                value: k,
            });
        }
        src.term_big(&k)
    })
}

fn index_map_cert(c: &Certificate, f: &FnSpec) -> Certificate {
    // The values are a subset of a's values, so the floor always survives.
    let scrambled = Certificate {
        floor: c.floor.clone(),
        ..Certificate::unordered()
    };
    match f {
        FnSpec::Identity => c.clone(),
        // a(n + k) increases strictly wherever n + k >= s.
        FnSpec::Add(k) => Certificate {
            strict_from: c.strict_from.map(|s| {
                let shifted = BigInt::from(s) - k;
                if shifted < BigInt::from(1) {
                    1
                } else {
                    usize::try_from(shifted).unwrap_or(usize::MAX)
                }
            }),
            universal: false,
            ..c.clone()
        },
        // f(n) >= n and f increasing: strictness from s onward is kept.
        FnSpec::Mul(k) if k.is_positive() => Certificate {
            universal: false,
            ..c.clone()
        },
        FnSpec::Square => Certificate {
            universal: false,
            ..c.clone()
        },
        FnSpec::Const(_) | FnSpec::Mul(_) if c.floor.is_some() => Certificate {
            nondec: true,
            ..scrambled
        },
        _ => scrambled,
    }
}

/// `c(n) = a(b(n))`. A term `b(n) < 1` fails at `n` only.
pub fn compose(a: &Sequence, b: &Sequence) -> Sequence {
    let cert = compose_cert(a.cert(), b.cert());
    let (outer, inner) = (a.clone(), b.clone());
    let label = format!("{} | compose({})", b.label(), a.label());
    Sequence::direct(label, cert, move |n| {
        let k = inner.term_big(n)?;
        if k < BigInt::from(1) {
            return Err(SeqError::IndexOutOfDomain {
                index: n.clone(),
                value: k,
            });
        }
        outer.term_big(&k)
    })
}

fn compose_cert(a: &Certificate, b: &Certificate) -> Certificate {
    let nondec = a.nondec && b.nondec;
    // b strict from s_b with values >= s_a keeps a's increase strict from s_b.
    let strict_from = match (a.strict_from, b.strict_from) {
        (Some(sa), Some(_)) if nondec && b.is_strict() && b.floor_at_least(sa as i64) => Some(1),
        (Some(1), Some(sb)) if nondec => Some(sb),
        _ => None,
    };
    Certificate {
        nondec,
        strict_from: strict_from.filter(|_| nondec),
        floor: a.floor.clone(),
        unbounded: a.unbounded && b.unbounded && nondec,
        universal: a.universal && b.universal,
    }
}

/// `c(n) = op(a(n), b(n))`.
pub fn zip_with(op: ZipOp, a: &Sequence, b: &Sequence) -> Sequence {
    let cert = zip_cert(op, a.cert(), b.cert());
    let (x, y) = (a.clone(), b.clone());
    let label = format!("{} | {op}({})", a.label(), b.label());
    Sequence::direct(label, cert, move |n| {
        op.apply(&x.term_big(n)?, &y.term_big(n)?)
    })
}

fn zip_cert(op: ZipOp, a: &Certificate, b: &Certificate) -> Certificate {
    let both_nondec = a.nondec && b.nondec;
    let strict_from = match (a.strict_from, b.strict_from) {
        (Some(s), Some(t)) => Some(s.min(t)),
        (s, t) => s.or(t),
    };
    let floors = a.floor.as_ref().zip(b.floor.as_ref());
    match op {
        ZipOp::Sum => Certificate {
            nondec: both_nondec,
            strict_from: strict_from.filter(|_| both_nondec),
            floor: floors.map(|(x, y)| x + y),
            unbounded: both_nondec && (a.unbounded || b.unbounded),
            universal: false,
        },
        // Monotone only when neither factor can be zero or negative.
        ZipOp::Product if a.positive() && b.positive() => Certificate {
            nondec: both_nondec,
            strict_from: strict_from.filter(|_| both_nondec),
            floor: floors.map(|(x, y)| x * y),
            unbounded: both_nondec && (a.unbounded || b.unbounded),
            universal: false,
        },
        ZipOp::Product if a.nonnegative() && b.nonnegative() => Certificate {
            nondec: both_nondec,
            floor: Some(BigInt::zero()),
            ..Certificate::unordered()
        },
        ZipOp::Product => Certificate::unordered(),
        ZipOp::ConcatAbRev => Certificate {
            floor: Some(BigInt::zero()),
            ..Certificate::unordered()
        },
    }
}

/// Folds `zip_with(op, ..)` over two or more sequences.
pub fn zip_fold(op: ZipOp, seqs: &[Sequence]) -> Option<Sequence> {
    let (first, rest) = seqs.split_first()?;
    Some(
        rest.iter()
            .fold(first.clone(), |acc, s| zip_with(op, &acc, s)),
    )
}
