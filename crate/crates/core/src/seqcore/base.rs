use num_bigint::BigInt;

use num_traits::{One, ToPrimitive, Zero};

use super::{Certificate, Limits, Producer, Sequence, Term};
use crate::error::{Result, SeqError};

pub fn naturals() -> Sequence {
    let cert = Certificate {
        universal: true,
        ..Certificate::strictly_increasing(1)
    };
    Sequence::direct("naturals", cert, |n| Ok(n.clone()))
}

pub fn squares() -> Sequence {
    Sequence::direct(
        "squares",
        Certificate::strictly_increasing(1),
        |n| Ok(n * n),
    )
}

pub fn triangular() -> Sequence {
    Sequence::direct("triangular", Certificate::strictly_increasing(1), |n| {
        Ok(n * (n + 1u32) / 2u32)
    })
}

pub fn oblong() -> Sequence {
    Sequence::direct("oblong", Certificate::strictly_increasing(2), |n| {
        Ok(n * (n + 1u32))
    })
}

/// The all-ones sequence.
pub fn ones() -> Sequence {
    let cert = Certificate {
        nondec: true,
        floor: Some(BigInt::from(1)),
        ..Certificate::default()
    };
    Sequence::direct("ones", cert, |_| Ok(BigInt::from(1)))
}

/// 1, 1, 2, 3, 5, 8, ...
pub fn fibonacci() -> Sequence {
    let cert = Certificate {
        nondec: true,
        strict_from: Some(2),
        floor: Some(BigInt::from(1)),
        unbounded: true,
        universal: false,
    };
    Sequence::new("fib", cert, Fib)
}

/// Sums the prefix going forward; far indices go through fast doubling, still
/// bounded by the materialization limit since the term has ~0.2n digits.
struct Fib;

impl Producer for Fib {
    fn next(&mut self, n: usize, prefix: &[Term]) -> Result<Option<Term>> {
        Ok(Some(if n <= 2 {
            BigInt::from(1)
        } else {
            &prefix[n - 2] + &prefix[n - 3]
        }))
    }

    fn at(&self, n: &BigInt) -> Option<Result<Term>> {
        let limit = Limits::current().max_materialized;
        Some(match n.to_usize() {
            Some(k) if k <= limit => Ok(fib_pair(k).0),
            _ => Err(SeqError::IndexTooLarge(n.clone())),
        })
    }

    fn is_direct(&self) -> bool {
        true
    }
}

/// `(F(k), F(k+1))`.
fn fib_pair(k: usize) -> (Term, Term) {
    if k == 0 {
        return (BigInt::zero(), BigInt::one());
    }
    let (a, b) = fib_pair(k / 2);
    let c = &a * (&b * 2u32 - &a);
    let d = &a * &a + &b * &b;
    if k.is_multiple_of(2) {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

pub fn primes() -> Sequence {
    let mut sieve = PrimeSieve::new();
    Sequence::sequential(
        "primes",
        Certificate::strictly_increasing(2),
        move |n, _| Ok(Some(BigInt::from(sieve.nth(n)))),
    )
}

/// A finite sequence with the given terms. Its certificate is read off the data.
pub fn literal(terms: Vec<Term>) -> Sequence {
    let nondec = terms.windows(2).all(|w| w[0] <= w[1]);
    // Smallest s with strict increase from s onward.
    let strict_from = (0..terms.len().saturating_sub(1))
        .rev()
        .take_while(|&i| terms[i] < terms[i + 1])
        .last()
        .map(|i| i + 1)
        .or(if terms.len() <= 1 { Some(1) } else { None })
        .or(Some(terms.len()));
    let cert = Certificate {
        nondec,
        strict_from,
        floor: terms.iter().min().cloned(),
        // Vacuous for a finite stream: every value occurs finitely often.
        unbounded: true,
        universal: false,
    };
    let label = format!(
        "lit({})",
        terms
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    Sequence::sequential(label, cert, move |n, _| Ok(terms.get(n - 1).cloned()))
}

/// Incremental segmented sieve of Eratosthenes. Grows one segment at a time,
/// so the prime stream has no preset limit.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    primes: Vec<u64>,
    sieved_to: u64,
}

const SEGMENT: u64 = 1 << 16;

impl Default for PrimeSieve {
    fn default() -> Self {
        Self::new()
    }
}

impl PrimeSieve {
    pub fn new() -> Self {
        PrimeSieve {
            primes: Vec::new(),
            sieved_to: 0,
        }
    }

    /// The n-th prime, 1-based.
    pub fn nth(&mut self, n: usize) -> u64 {
        assert!(n >= 1, "primes are 1-indexed");
        while self.primes.len() < n {
            self.grow();
        }
        self.primes[n - 1]
    }

    pub fn found(&self) -> &[u64] {
        &self.primes
    }

    fn grow(&mut self) {
        let lo = self.sieved_to;
        let hi = lo + SEGMENT.max(lo / 4);
        let mut composite = vec![false; (hi - lo) as usize];
        if lo == 0 {
            // First segment: plain sieve.
            for i in 2..hi {
                if composite[i as usize] {
                    continue;
                }
                self.primes.push(i);
                let mut j = i * i;
                while j < hi {
                    composite[j as usize] = true;
                    j += i;
                }
            }
        } else {
            // Every prime up to sqrt(hi) is already known because lo >= sqrt(hi).
            for &p in &self.primes {
                if p * p >= hi {
                    break;
                }
                let mut j = (lo.div_ceil(p) * p).max(p * p);
                while j < hi {
                    composite[(j - lo) as usize] = true;
                    j += p;
                }
            }
            self.primes.extend(
                composite
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| !c)
                    .map(|(i, _)| lo + i as u64),
            );
        }
        self.sieved_to = hi;
    }
}
