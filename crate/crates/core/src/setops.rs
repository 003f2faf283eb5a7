//! Sequences read as sets of values, enumerated in increasing order.
//!
//! A value is emitted only once it is decided: every source has produced a
//! term beyond it, or the source has ended. Work per emitted value is capped
//! by [`Limits::scan_budget`]; running out is reported as budget truncation.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, SeqError};
use crate::pointwise::ZipOp;
use crate::seqcore::{count_below_from, Certificate, FnSpec, Limits, Sequence, Term};

/// A read position over the positive terms of a sequence. `peek` yields
/// `None` at a finite end.
struct Cursor {
    seq: Sequence,
    next: usize,
}

impl Cursor {
    fn new(seq: &Sequence) -> Self {
        Cursor {
            seq: seq.clone(),
            next: 1,
        }
    }

    fn peek(&mut self) -> Result<Option<Term>> {
        loop {
            match self.seq.term(self.next) {
                Ok(t) if !t.is_positive() => self.next += 1,
                Ok(t) => return Ok(Some(t)),
                Err(e) if e.is_finite_end() => return Ok(None),
                Err(e) => return Err(e),
            }
        }
    }

    fn advance(&mut self) {
        self.next += 1;
    }

    /// Skips terms `<= bound`. Random-access sources are skipped by galloping,
    /// which costs one tick however far it jumps.
    fn skip_to_above(&mut self, bound: &Term, spent: &mut Spend) -> Result<Option<Term>> {
        if self.seq.random_access() {
            let count = count_below_from(&self.seq, bound, false, &BigInt::from(self.next))?;
            let count = count.to_usize().ok_or(SeqError::IndexTooLarge(count))?;
            if count >= self.next {
                spent.tick()?;
                self.next = count + 1;
            }
            return self.peek();
        }
        loop {
            match self.peek()? {
                Some(t) if t <= *bound => {
                    spent.tick()?;
                    self.advance();
                }
                other => return Ok(other),
            }
        }
    }
}

/// Counts source terms consumed while deciding one output term.
struct Spend {
    used: usize,
    budget: usize,
    decided: usize,
}

impl Spend {
    fn new(decided: usize) -> Self {
        Spend {
            used: 0,
            budget: Limits::current().scan_budget,
            decided,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.budget {
            return Err(SeqError::budget(self.decided));
        }
        Ok(())
    }
}

fn require_set(a: &Sequence) -> Result<()> {
    if !a.cert().nondec {
        return Err(SeqError::NotNonDecreasing(a.label().to_string()));
    }
    if !a.cert().tends_to_infinity() {
        return Err(SeqError::UnboundedRequired(a.label().to_string()));
    }
    Ok(())
}

fn set_cert(floor: Term) -> Certificate {
    Certificate::strictly_increasing(floor)
}

/// Positive integers that are not terms of `a`.
pub fn complement(a: &Sequence) -> Result<Sequence> {
    require_set(a)?;
    if a.cert().universal {
        return Err(SeqError::EmptyResult);
    }
    let mut src = Cursor::new(a);
    let mut candidate = BigInt::zero();
    Ok(Sequence::sequential(
        format!("{} | comp", a.label()),
        set_cert(BigInt::one()),
        move |n, _| {
            let mut spent = Spend::new(n - 1);
            loop {
                candidate += 1u32;
                match src.skip_to_above(&(&candidate - 1u32), &mut spent)? {
                    Some(t) if t == candidate => spent.tick()?,
                    _ => return Ok(Some(candidate.clone())),
                }
            }
        },
    ))
}

/// Positive values common to `a` and `b`.
pub fn intersect(a: &Sequence, b: &Sequence) -> Result<Sequence> {
    require_set(a)?;
    require_set(b)?;
    let (mut x, mut y) = (Cursor::new(a), Cursor::new(b));
    let mut last = BigInt::zero();
    let label = format!("{} | intersect({})", a.label(), b.label());
    let cert = Certificate {
        universal: a.cert().universal && b.cert().universal,
        ..set_cert(BigInt::one())
    };
    Ok(Sequence::sequential(label, cert, move |n, _| {
        let mut spent = Spend::new(n - 1);
        let Some(mut u) = x.skip_to_above(&last, &mut spent)? else {
            return Ok(None);
        };
        let Some(mut v) = y.skip_to_above(&last, &mut spent)? else {
            return Ok(None);
        };
        while u != v {
            let low = u.clone().min(v.clone());
            let next = if u == low {
                x.skip_to_above(&low, &mut spent)?
            } else {
                y.skip_to_above(&low, &mut spent)?
            };
            let Some(t) = next else { return Ok(None) };
            if u == low {
                u = t;
            } else {
                v = t;
            }
        }
        last = u.clone();
        Ok(Some(u))
    }))
}

/// Positive values of `a` or `b`.
pub fn union(a: &Sequence, b: &Sequence) -> Result<Sequence> {
    require_set(a)?;
    require_set(b)?;
    let (mut x, mut y) = (Cursor::new(a), Cursor::new(b));
    let mut last = BigInt::zero();
    let label = format!("{} | union({})", a.label(), b.label());
    let cert = Certificate {
        universal: a.cert().universal || b.cert().universal,
        ..set_cert(BigInt::one())
    };
    Ok(Sequence::sequential(label, cert, move |n, _| {
        let mut spent = Spend::new(n - 1);
        let u = x.skip_to_above(&last, &mut spent)?;
        let v = y.skip_to_above(&last, &mut spent)?;
        let next = match (u, v) {
            (Some(u), Some(v)) => u.min(v),
            (Some(t), None) | (None, Some(t)) => t,
            (None, None) => return Ok(None),
        };
        last = next.clone();
        Ok(Some(next))
    }))
}

/// A lower bound on `f(y)` for every `y >= x`. Past it, the smallest pending
/// image value can no longer be undercut.
///
/// For the reversed square the bound is `10^(d-1)` with `d` the digit count of
/// `x^2`. Multiples of 10 escape it, since `reverse((10y)^2) = reverse(y^2)`,
/// so the enumeration is exact for sets that contain `y` whenever they contain
/// `10y`, and for sets with no multiples of 10.
fn frontier(f: &FnSpec, x: &Term) -> Result<Term> {
    match f {
        FnSpec::ReverseSquare => {
            let digits = (x * x).to_str_radix(10).len() as u32;
            Ok(BigInt::from(10u32).pow(digits - 1))
        }
        _ => f.eval(x),
    }
}

/// The sorted, duplicate-free image of `a`'s values under `f`.
pub fn map_set(f: FnSpec, a: &Sequence) -> Result<Sequence> {
    require_set(a)?;
    let label = format!("{} | mapset({f})", a.label());
    if let FnSpec::Mul(c) = &f {
        if c.is_negative() {
            return Err(SeqError::UnboundedBelow);
        }
    }
    if let Some(c) = f.constant_value() {
        return Ok(finite_set(label, vec![c]));
    }
    if let FnSpec::Delta(m) = &f {
        return Ok(delta_image(label, a, m.clone()));
    }
    let floor = match (&f, &a.cert().floor) {
        (FnSpec::ReverseSquare, _) => Some(BigInt::one()),
        (_, Some(x)) if x.is_positive() => f.eval(x).ok(),
        _ => f.eval(&BigInt::one()).ok(),
    };
    let cert = Certificate {
        floor,
        ..set_cert(BigInt::zero())
    };
    let mut src = Cursor::new(a);
    let mut pending: BTreeSet<Term> = BTreeSet::new();
    let mut last: Option<Term> = None;
    Ok(Sequence::sequential(label, cert, move |n, _| {
        let budget = Limits::current().scan_budget;
        let mut used = 0usize;
        loop {
            let next_src = src.peek()?;
            if let Some(top) = pending.first() {
                let safe = match &next_src {
                    Some(x) => *top <= frontier(&f, x)?,
                    None => true,
                };
                if safe {
                    let top = pending.pop_first().expect("non-empty");
                    if last.as_ref().is_some_and(|l| *l >= top) {
                        continue;
                    }
                    last = Some(top.clone());
                    return Ok(Some(top));
                }
            }
            let Some(x) = next_src else { return Ok(None) };
            used += 1;
            if used > budget {
                return Err(SeqError::UndecidableFrontier {
                    decided: n - 1,
                    budget,
                });
            }
            let y = f.eval(&x)?;
            if last.as_ref().is_none_or(|l| y > *l) {
                pending.insert(y);
            }
            src.advance();
        }
    }))
}

fn finite_set(label: String, values: Vec<Term>) -> Sequence {
    let floor = values.first().cloned();
    let cert = Certificate {
        floor,
        unbounded: false,
        ..Certificate::strictly_increasing(0)
    };
    Sequence::sequential(label, cert, move |n, _| Ok(values.get(n - 1).cloned()))
}

/// `{0, 1} ∩ image`: 0 unless every value equals `m`, 1 iff `m` is a value.
fn delta_image(label: String, a: &Sequence, m: Term) -> Sequence {
    let src = a.clone();
    let mut values: Option<Vec<Term>> = None;
    let cert = Certificate {
        floor: Some(BigInt::zero()),
        unbounded: false,
        ..Certificate::strictly_increasing(0)
    };
    Sequence::sequential(label, cert, move |n, _| {
        if values.is_none() {
            let mut cur = Cursor::new(&src);
            let mut spent = Spend::new(0);
            let (mut hit, mut miss) = (false, false);
            while let Some(t) = cur.peek()? {
                hit |= t == m;
                miss |= t != m;
                if t > m {
                    break;
                }
                spent.tick()?;
                cur.advance();
            }
            let found: Vec<Term> = [(miss, 0u32), (hit, 1u32)]
                .into_iter()
                .filter(|(present, _)| *present)
                .map(|(_, v)| BigInt::from(v))
                .collect();
            values = Some(found);
        }
        Ok(values.as_ref().and_then(|v| v.get(n - 1).cloned()))
    })
}

/// The sorted, duplicate-free set `{op(x, y) : x in a, y in b}` for `op` in
/// `{Sum, Product}`.
pub fn combine_set(op: ZipOp, a: &Sequence, b: &Sequence) -> Result<Sequence> {
    require_set(a)?;
    require_set(b)?;
    if op == ZipOp::ConcatAbRev {
        return Err(SeqError::NotNonDecreasing(
            "concatenation is not monotone".into(),
        ));
    }
    let least = |c: &Certificate| {
        c.floor
            .clone()
            .filter(|f| f.is_positive())
            .unwrap_or_else(BigInt::one)
    };
    let floor = op.apply(&least(a.cert()), &least(b.cert()))?;
    let label = format!(
        "{} | {}({})",
        a.label(),
        if op == ZipOp::Sum {
            "sumset"
        } else {
            "prodset"
        },
        b.label()
    );
    let (x, y) = (a.clone(), b.clone());
    // Pairs (i, j) ordered by value, from the first positive terms (i0, j0).
    // Each pair is pushed exactly once: (i+1, j) from (i, j), and (i0, j+1)
    // from (i0, j).
    let mut heap: BinaryHeap<Reverse<(Term, usize, usize)>> = BinaryHeap::new();
    let mut i0 = 0;
    let mut last: Option<Term> = None;
    let value = move |i: usize, j: usize| -> Result<Option<Term>> {
        let (Some(u), Some(v)) = (term_or_end(&x, i)?, term_or_end(&y, j)?) else {
            return Ok(None);
        };
        op.apply(&u, &v).map(Some)
    };
    let (mut ca, mut cb) = (Cursor::new(a), Cursor::new(b));
    let cert = Certificate {
        floor: Some(floor),
        ..set_cert(BigInt::one())
    };
    Ok(Sequence::sequential(label, cert, move |n, _| {
        if i0 == 0 {
            if ca.peek()?.is_none() || cb.peek()?.is_none() {
                return Ok(None);
            }
            i0 = ca.next;
            if let Some(v) = value(i0, cb.next)? {
                heap.push(Reverse((v, i0, cb.next)));
            }
        }
        let mut spent = Spend::new(n - 1);
        loop {
            let Some(Reverse((v, i, j))) = heap.pop() else {
                return Ok(None);
            };
            spent.tick()?;
            if let Some(w) = value(i + 1, j)? {
                heap.push(Reverse((w, i + 1, j)));
            }
            if i == i0 {
                if let Some(w) = value(i0, j + 1)? {
                    heap.push(Reverse((w, i0, j + 1)));
                }
            }
            if last.as_ref().is_none_or(|l| v > *l) {
                last = Some(v.clone());
                return Ok(Some(v));
            }
        }
    }))
}

fn term_or_end(a: &Sequence, n: usize) -> Result<Option<Term>> {
    match a.term(n) {
        Ok(t) => Ok(Some(t)),
        Err(e) if e.is_finite_end() => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn sumset(a: &Sequence, b: &Sequence) -> Result<Sequence> {
    combine_set(ZipOp::Sum, a, b)
}

pub fn productset(a: &Sequence, b: &Sequence) -> Result<Sequence> {
    combine_set(ZipOp::Product, a, b)
}
