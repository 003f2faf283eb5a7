//! The stream model shared by every transform.
//!
//! A [`Sequence`] is a lazily produced, 1-indexed stream of big integers with a
//! memoized prefix. Each sequence carries a [`Certificate`]: claims about
//! ordering, a lower bound and growth that transforms rely on. Claims are
//! declared by the constructor and checked against every term that enters the
//! memoized prefix.

mod base;
mod func;

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex, MutexGuard, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::error::{Result, SeqError, Truncation};

pub use base::{
    fibonacci, literal, naturals, oblong, ones, primes, squares, triangular, PrimeSieve,
};
pub use func::{concat_reversed, eval_fn, reverse_digits, FnSpec};

/// A sequence element. Exact at every magnitude.
pub type Term = BigInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    StrictlyIncreasing,
    NonDecreasing,
    Unordered,
}

/// Declared properties of a sequence.
///
/// `strict_from = Some(s)` claims `a(k) < a(k+1)` for every `k >= s`, so
/// `Some(1)` is a strictly increasing sequence and the Fibonacci numbers carry
/// `Some(2)`. `unbounded` claims that no value is taken infinitely often and
/// that the terms exceed every bound for as long as the stream keeps producing;
/// a stream that runs dry reports truncation instead.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Certificate {
    pub nondec: bool,
    pub strict_from: Option<usize>,
    pub floor: Option<Term>,
    pub unbounded: bool,
    /// The value set is every positive integer.
    pub universal: bool,
}

impl Certificate {
    pub fn unordered() -> Self {
        Self::default()
    }

    pub fn strictly_increasing(floor: impl Into<Term>) -> Self {
        Certificate {
            nondec: true,
            strict_from: Some(1),
            floor: Some(floor.into()),
            unbounded: true,
            universal: false,
        }
    }

    pub fn mono(&self) -> Monotonicity {
        match (self.nondec, self.strict_from) {
            (true, Some(1)) => Monotonicity::StrictlyIncreasing,
            (true, _) => Monotonicity::NonDecreasing,
            _ => Monotonicity::Unordered,
        }
    }

    pub fn is_strict(&self) -> bool {
        self.mono() == Monotonicity::StrictlyIncreasing
    }

    pub fn floor_at_least(&self, bound: i64) -> bool {
        self.floor
            .as_ref()
            .is_some_and(|f| *f >= BigInt::from(bound))
    }

    pub fn positive(&self) -> bool {
        self.floor_at_least(1)
    }

    pub fn nonnegative(&self) -> bool {
        self.floor_at_least(0)
    }

    /// A monotone sequence that grows past every bound: the admission test for
    /// every operation that scans a sequence as a sorted set.
    pub fn tends_to_infinity(&self) -> bool {
        self.is_strict() || (self.nondec && self.unbounded)
    }

    fn check(
        &self,
        index: usize,
        prev: Option<&Term>,
        next: &Term,
    ) -> std::result::Result<(), String> {
        if let Some(floor) = &self.floor {
            if next < floor {
                return Err(format!("value {next} is below the declared floor {floor}"));
            }
        }
        if let Some(prev) = prev {
            if self.nondec && next < prev {
                return Err(format!(
                    "{next} follows {prev} in a non-decreasing sequence"
                ));
            }
            if let Some(s) = self.strict_from {
                if index > s && next <= prev {
                    return Err(format!(
                        "{next} follows {prev} where strict increase was declared"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Evaluation budgets. Read from the calling thread at evaluation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest index a non-random-access sequence will materialize.
    pub max_materialized: usize,
    /// Source terms a scanning operation may consume while deciding one term.
    pub scan_budget: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_materialized: 10_000_000,
            scan_budget: 1_000_000,
        }
    }
}

thread_local! {
    static LIMITS: Cell<Limits> = Cell::new(Limits::default());
}

impl Limits {
    pub fn current() -> Limits {
        LIMITS.with(Cell::get)
    }

    /// Runs `f` with these limits installed on the current thread.
    pub fn scope<R>(self, f: impl FnOnce() -> R) -> R {
        struct Restore(Limits);
        impl Drop for Restore {
            fn drop(&mut self) {
                LIMITS.with(|l| l.set(self.0));
            }
        }
        let _restore = Restore(LIMITS.with(|l| l.replace(self)));
        f()
    }
}

/// Produces the terms of a sequence.
pub trait Producer: Send {
    /// Produces term `n` given the already materialized terms `1..n`.
    /// `Ok(None)` ends a finite sequence.
    fn next(&mut self, n: usize, prefix: &[Term]) -> Result<Option<Term>>;

    /// Random access to an arbitrary index without materializing the prefix.
    fn at(&self, _n: &BigInt) -> Option<Result<Term>> {
        None
    }

    fn is_direct(&self) -> bool {
        false
    }
}

/// A producer with random access, from a closure over the index.
pub struct Direct<F>(pub F);

impl<F> Producer for Direct<F>
where
    F: Fn(&BigInt) -> Result<Term> + Send,
{
    fn next(&mut self, n: usize, _prefix: &[Term]) -> Result<Option<Term>> {
        (self.0)(&BigInt::from(n)).map(Some)
    }

    fn at(&self, n: &BigInt) -> Option<Result<Term>> {
        Some((self.0)(n))
    }

    fn is_direct(&self) -> bool {
        true
    }
}

/// A producer that builds terms in order, from a closure over `(n, prefix)`.
pub struct Sequential<F>(pub F);

impl<F> Producer for Sequential<F>
where
    F: FnMut(usize, &[Term]) -> Result<Option<Term>> + Send,
{
    fn next(&mut self, n: usize, prefix: &[Term]) -> Result<Option<Term>> {
        (self.0)(n, prefix)
    }
}

struct State {
    cache: Vec<Term>,
    producer: Box<dyn Producer>,
    stop: Option<SeqError>,
}

struct Inner {
    label: String,
    cert: Certificate,
    direct: bool,
    span: OnceLock<(usize, usize)>,
    state: Mutex<State>,
}

/// A lazy, 1-indexed integer sequence. Cloning shares the memoized prefix.
///
/// Extension of the prefix is serialized by an internal lock; a sequence may
/// move between threads, and independent sequences extend independently.
#[derive(Clone)]
pub struct Sequence(Arc<Inner>);

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sequence")
            .field("label", &self.0.label)
            .field("cert", &self.0.cert)
            .finish()
    }
}

impl Sequence {
    pub fn new(
        label: impl Into<String>,
        cert: Certificate,
        producer: impl Producer + 'static,
    ) -> Self {
        Sequence(Arc::new(Inner {
            label: label.into(),
            cert,
            direct: producer.is_direct(),
            span: OnceLock::new(),
            state: Mutex::new(State {
                cache: Vec::new(),
                producer: Box::new(producer),
                stop: None,
            }),
        }))
    }

    pub fn sequential<F>(label: impl Into<String>, cert: Certificate, f: F) -> Self
    where
        F: FnMut(usize, &[Term]) -> Result<Option<Term>> + Send + 'static,
    {
        Self::new(label, cert, Sequential(f))
    }

    pub fn direct<F>(label: impl Into<String>, cert: Certificate, f: F) -> Self
    where
        F: Fn(&BigInt) -> Result<Term> + Send + 'static,
    {
        Self::new(label, cert, Direct(f))
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn cert(&self) -> &Certificate {
        &self.0.cert
    }

    pub fn mono(&self) -> Monotonicity {
        self.0.cert.mono()
    }

    pub fn unbounded(&self) -> bool {
        self.0.cert.unbounded
    }

    /// Terms at arbitrary indices are computed without materializing a prefix.
    pub fn random_access(&self) -> bool {
        self.0.direct
    }

    /// Attributes errors raised by this sequence's own producer to a source span.
    pub fn with_span(self, start: usize, end: usize) -> Self {
        let _ = self.0.span.set((start, end));
        self
    }

    /// Number of memoized terms.
    pub fn materialized(&self) -> usize {
        self.lock().cache.len()
    }

    /// The term at 1-based index `n`.
    pub fn term(&self, n: usize) -> Result<Term> {
        if n == 0 {
            return Err(SeqError::IndexOutOfDomain {
                index: BigInt::from(0),
                value: BigInt::from(0),
            });
        }
        self.term_inner(n).map_err(|e| self.stage(e))
    }

    /// The term at an arbitrary-precision index. Random-access producers answer
    /// directly; others materialize up to the index within [`Limits`].
    pub fn term_big(&self, n: &BigInt) -> Result<Term> {
        if *n < BigInt::one() {
            return Err(SeqError::IndexOutOfDomain {
                index: n.clone(),
                value: n.clone(),
            });
        }
        match n.to_usize() {
            Some(small) => self.term(small),
            None => {
                let st = self.lock();
                match st.producer.at(n) {
                    Some(r) => r.map_err(|e| self.stage(e)),
                    None => Err(SeqError::IndexTooLarge(n.clone())),
                }
            }
        }
    }

    fn term_inner(&self, n: usize) -> Result<Term> {
        let mut st = self.lock();
        if let Some(t) = st.cache.get(n - 1) {
            return Ok(t.clone());
        }
        if st.producer.is_direct() {
            return st.producer.at(&BigInt::from(n)).expect("direct producer");
        }
        self.extend(&mut st, n)?;
        Ok(st.cache[n - 1].clone())
    }

    /// The first `n` terms.
    pub fn take(&self, n: usize) -> Result<FinitePrefix> {
        let mut st = self.lock();
        self.extend(&mut st, n).map_err(|e| self.stage(e))?;
        Ok(FinitePrefix {
            terms: st.cache[..n].to_vec(),
            origin: Origin::One,
        })
    }

    /// As many of the first `n` terms as can be produced, plus the error that
    /// stopped production early, if any.
    pub fn take_partial(&self, n: usize) -> (Vec<Term>, Option<SeqError>) {
        let mut st = self.lock();
        let err = self.extend(&mut st, n).err().map(|e| self.stage(e));
        let end = n.min(st.cache.len());
        (st.cache[..end].to_vec(), err)
    }

    fn lock(&self) -> MutexGuard<'_, State> {
        self.0.state.lock().unwrap_or_else(|p| p.into_inner())
    }

    fn extend(&self, st: &mut State, n: usize) -> Result<()> {
        if st.cache.len() >= n {
            return Ok(());
        }
        let limit = Limits::current().max_materialized;
        if n > limit && !st.producer.is_direct() {
            return Err(SeqError::IndexTooLarge(BigInt::from(n)));
        }
        while st.cache.len() < n {
            if let Some(e) = &st.stop {
                return Err(e.clone());
            }
            let index = st.cache.len() + 1;
            let State {
                cache,
                producer,
                stop,
            } = st;
            match producer.next(index, cache) {
                Ok(Some(t)) => match self.0.cert.check(index, cache.last(), &t) {
                    Ok(()) => cache.push(t),
                    Err(detail) => {
                        *stop = Some(SeqError::CertificateViolation {
                            index,
                            detail: format!("{}: {detail}", self.0.label),
                        })
                    }
                },
                Ok(None) => {
                    *stop = Some(SeqError::Truncated {
                        available: index - 1,
                        kind: Truncation::Finite,
                    })
                }
                Err(e) => *stop = Some(e),
            }
        }
        Ok(())
    }

    fn stage(&self, e: SeqError) -> SeqError {
        match (self.0.span.get(), &e) {
            (_, SeqError::Staged { .. }) => e,
            _ if e.is_truncation() => e,
            (Some(&(start, end)), _) => SeqError::Staged {
                start,
                end,
                message: e.to_string(),
            },
            (None, _) => e,
        }
    }
}

/// Where index 1 of a prefix's first element sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Zero,
    One,
}

/// An immutable, materialized prefix of a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePrefix {
    terms: Vec<Term>,
    origin: Origin,
}

impl FinitePrefix {
    pub fn new(terms: Vec<Term>, origin: Origin) -> Self {
        FinitePrefix { terms, origin }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The term at `index` counted from this prefix's origin.
    pub fn get(&self, index: usize) -> Option<&Term> {
        match self.origin {
            Origin::Zero => self.terms.get(index),
            Origin::One => index.checked_sub(1).and_then(|i| self.terms.get(i)),
        }
    }

    /// Reinterprets the terms as starting at index 0.
    pub fn zero_based(self) -> Self {
        FinitePrefix {
            terms: self.terms,
            origin: Origin::Zero,
        }
    }
}

/// The first `n` terms of `a`.
pub fn take(a: &Sequence, n: usize) -> Result<FinitePrefix> {
    a.take(n)
}

/// Counts the terms `a(k) <= bound` (or `< bound` when `strict`) of a
/// non-decreasing sequence by galloping then bisecting over indices.
pub(crate) fn count_below(a: &Sequence, bound: &Term, strict: bool) -> Result<BigInt> {
    count_below_from(a, bound, strict, &BigInt::one())
}

/// As [`count_below`], given that every index below `from` is already known
/// to satisfy the bound. The gallop starts at `from`, so the cost is
/// logarithmic in the distance skipped.
pub(crate) fn count_below_from(
    a: &Sequence,
    bound: &Term,
    strict: bool,
    from: &BigInt,
) -> Result<BigInt> {
    let within = |t: &Term| match t.cmp(bound) {
        Ordering::Less => true,
        Ordering::Equal => !strict,
        Ordering::Greater => false,
    };
    let probe = |k: &BigInt| -> Result<bool> {
        match a.term_big(k) {
            Ok(t) => Ok(within(&t)),
            Err(e) if e.is_finite_end() => Ok(false),
            Err(e) => Err(e),
        }
    };
    // Invariant: every index < lo satisfies `within`; hi does not.
    let mut lo = from.clone();
    let mut hi = from.clone();
    let mut step = BigInt::one();
    let mut doublings = 0u32;
    while probe(&hi)? {
        lo = &hi + 1u32;
        hi += &step;
        step <<= 1u32;
        doublings += 1;
        if doublings > MAX_GALLOP {
            return Err(SeqError::IndexTooLarge(hi));
        }
    }
    while lo < hi {
        let mid: BigInt = &lo + ((&hi - &lo) >> 1u32);
        if probe(&mid)? {
            lo = mid + 1u32;
        } else {
            hi = mid;
        }
    }
    Ok(lo - 1u32)
}

const MAX_GALLOP: u32 = 4096;
