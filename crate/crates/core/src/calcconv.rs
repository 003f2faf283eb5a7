//! Discrete calculus, shifted convolution and the binomial transforms.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Result, SeqError};
use crate::seqcore::{Certificate, FinitePrefix, Origin, Sequence, Term};

/// `i(n) = a(1) + ... + a(n)`.
pub fn partial_sums(a: &Sequence) -> Sequence {
    let c = a.cert();
    let cert = if c.positive() {
        Certificate::strictly_increasing(c.floor.clone().expect("positive floor"))
    } else if c.nonnegative() {
        Certificate {
            nondec: true,
            floor: Some(BigInt::zero()),
            ..Certificate::unordered()
        }
    } else {
        Certificate::unordered()
    };
    let src = a.clone();
    let mut acc = BigInt::zero();
    Sequence::sequential(format!("{} | psum", a.label()), cert, move |n, _| {
        acc += src.term(n)?;
        Ok(Some(acc.clone()))
    })
}

/// `d(1) = a(1)`, `d(n) = a(n) - a(n-1)`: the difference with a 0 before the
/// first term.
pub fn first_difference(a: &Sequence) -> Sequence {
    let c = a.cert();
    let floor = match (&c.floor, c.nondec, c.is_strict()) {
        (Some(f), _, true) => Some(f.clone().min(BigInt::one())),
        (Some(f), true, false) => Some(f.clone().min(BigInt::zero())),
        _ => None,
    };
    let cert = Certificate {
        floor,
        ..Certificate::unordered()
    };
    let src = a.clone();
    Sequence::direct(format!("{} | diff", a.label()), cert, move |n| {
        let cur = src.term_big(n)?;
        if n.is_one() {
            return Ok(cur);
        }
        Ok(cur - src.term_big(&(n - 1u32))?)
    })
}

/// `p(n) = a(1) * ... * a(n)`.
pub fn partial_products(a: &Sequence) -> Sequence {
    let c = a.cert();
    let cert = if c.floor_at_least(2) {
        Certificate::strictly_increasing(c.floor.clone().expect("floor"))
    } else if c.positive() {
        Certificate {
            nondec: true,
            floor: Some(BigInt::one()),
            ..Certificate::unordered()
        }
    } else {
        Certificate::unordered()
    };
    let src = a.clone();
    let mut acc = BigInt::one();
    Sequence::sequential(format!("{} | pprod", a.label()), cert, move |n, _| {
        acc *= src.term(n)?;
        Ok(Some(acc.clone()))
    })
}

/// Shifted convolution: `c(n) = sum_{k=1..n} a(k) b(n+1-k)`.
pub fn convolve(a: &Sequence, b: &Sequence) -> Sequence {
    let (ca, cb) = (a.cert(), b.cert());
    // c(n+1) - c(n) >= a(n+1) b(1) > 0 when both are positive and non-decreasing.
    let cert = if ca.positive() && cb.positive() && ca.nondec && cb.nondec {
        let floor = ca.floor.as_ref().unwrap() * cb.floor.as_ref().unwrap();
        Certificate::strictly_increasing(floor)
    } else if ca.nonnegative() && cb.nonnegative() {
        Certificate {
            floor: Some(BigInt::zero()),
            ..Certificate::unordered()
        }
    } else {
        Certificate::unordered()
    };
    let (x, y) = (a.clone(), b.clone());
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let label = format!("{} | conv({})", a.label(), b.label());
    Sequence::sequential(label, cert, move |n, _| {
        xs.push(x.term(n)?);
        ys.push(y.term(n)?);
        Ok(Some(shifted_term(&xs, &ys, n)))
    })
}

fn shifted_term(xs: &[Term], ys: &[Term], n: usize) -> Term {
    (0..n).map(|k| &xs[k] * &ys[n - 1 - k]).sum()
}

/// The sequence `b` with `convolve(a, b) = 1, 0, 0, ...`. Defined iff `a(1) = 1`.
pub fn conv_inverse(a: &Sequence) -> Result<Sequence> {
    let head = a.term(1)?;
    if !head.is_one() {
        return Err(SeqError::NotInvertible(head));
    }
    let src = a.clone();
    let mut xs: Vec<Term> = Vec::new();
    Ok(Sequence::sequential(
        format!("{} | convinv", a.label()),
        Certificate::unordered(),
        move |n, prev| {
            xs.push(src.term(n)?);
            if n == 1 {
                return Ok(Some(BigInt::one()));
            }
            // b(n) = -sum_{k=2..n} a(k) b(n+1-k)
            let s: Term = (2..=n).map(|k| &xs[k - 1] * &prev[n - k]).sum();
            Ok(Some(-s))
        },
    ))
}

/// `v, a(1), a(2), ...`. Read zero-based, `v` plays the role of `a(0)`.
pub fn prepend(a: &Sequence, v: Term) -> Sequence {
    let c = a.cert();
    let below = c.floor.as_ref().map(|f| v.cmp(f));
    let cert = Certificate {
        nondec: c.nondec && below.is_some_and(|o| o.is_le()),
        strict_from: match (c.strict_from, below) {
            (Some(1), Some(o)) if o.is_lt() => Some(1),
            (s, _) => s.map(|s| s + 1),
        },
        floor: c.floor.as_ref().map(|f| f.clone().min(v.clone())),
        unbounded: c.unbounded,
        universal: false,
    };
    let src = a.clone();
    let label = format!("{} | prepend({v})", a.label());
    Sequence::direct(label, cert, move |n| {
        if n.is_one() {
            Ok(v.clone())
        } else {
            src.term_big(&(n - 1u32))
        }
    })
}

/// `k` zeros, then `a`.
pub fn shift_right(a: &Sequence, k: usize) -> Sequence {
    (0..k).fold(a.clone(), |s, _| prepend(&s, BigInt::zero()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinomialVariant {
    /// `b(n) = sum C(n,k) a(k)`.
    Bt,
    /// `b(n) = sum (-1)^(n-k) C(n,k) a(k)`.
    Ibt,
    /// `b(n) = sum (-1)^k C(n,k) a(k)`, its own inverse.
    Bt3,
}

impl fmt::Display for BinomialVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BinomialVariant::Bt => "bt",
            BinomialVariant::Ibt => "ibt",
            BinomialVariant::Bt3 => "bt3",
        })
    }
}

/// Binomial transform of `a` read zero-based: output term `n` is `b(n-1)`
/// computed from `a(1), ..., a(n)` as `x_0, ..., x_(n-1)`.
pub fn binomial_transform(a: &Sequence, variant: BinomialVariant) -> Sequence {
    let c = a.cert();
    // With x_k >= 1: b_(m+1) - b_m = sum_j C(m,j) x_(j+1) > 0.
    let cert = match variant {
        BinomialVariant::Bt if c.positive() => {
            Certificate::strictly_increasing(c.floor.clone().expect("floor"))
        }
        BinomialVariant::Bt if c.nonnegative() => Certificate {
            nondec: true,
            floor: Some(BigInt::zero()),
            ..Certificate::unordered()
        },
        _ => Certificate::unordered(),
    };
    let src = a.clone();
    let mut xs: Vec<Term> = Vec::new();
    let mut row: Vec<Term> = Vec::new();
    Sequence::sequential(format!("{} | {variant}", a.label()), cert, move |n, _| {
        xs.push(src.term(n)?);
        pascal_next(&mut row);
        Ok(Some(binomial_row(variant, &row, &xs)))
    })
}

/// Advances `row` from C(m-1, .) to C(m, .) additively.
fn pascal_next(row: &mut Vec<Term>) {
    row.push(BigInt::one());
    for k in (1..row.len() - 1).rev() {
        let left = row[k - 1].clone();
        row[k] += left;
    }
}

fn binomial_row(variant: BinomialVariant, row: &[Term], xs: &[Term]) -> Term {
    let m = row.len() - 1;
    row.iter()
        .zip(xs)
        .enumerate()
        .map(|(k, (c, x))| {
            let t = c * x;
            let negative = match variant {
                BinomialVariant::Bt => false,
                BinomialVariant::Ibt => (m - k) % 2 == 1,
                BinomialVariant::Bt3 => k % 2 == 1,
            };
            if negative {
                -t
            } else {
                t
            }
        })
        .sum()
}

/// Binomial transform of a finite zero-based prefix.
pub fn binomial_prefix(a: &FinitePrefix, variant: BinomialVariant) -> FinitePrefix {
    let mut row = Vec::new();
    let terms = (0..a.len())
        .map(|m| {
            pascal_next(&mut row);
            binomial_row(variant, &row, &a.terms()[..=m])
        })
        .collect();
    FinitePrefix::new(terms, Origin::Zero)
}

/// The ordinary convolution `c(n) = sum_{k=0..n} a(k) b(n-k)` of two
/// zero-based prefixes, truncated to the shorter length.
pub fn convolve_zero_based(a: &FinitePrefix, b: &FinitePrefix) -> FinitePrefix {
    let len = a.len().min(b.len());
    let terms = (1..=len)
        .map(|n| shifted_term(a.terms(), b.terms(), n))
        .collect();
    FinitePrefix::new(terms, Origin::Zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::{fibonacci, literal, naturals, ones, primes};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Term> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn first(s: &Sequence, n: usize) -> Vec<Term> {
        s.take(n).unwrap().into_terms()
    }

    fn identity_element(n: usize) -> Vec<Term> {
        (0..n).map(|k| BigInt::from(u8::from(k == 0))).collect()
    }

    fn binom(n: u64, k: u64) -> BigInt {
        // Multiplicative formula, independent of the Pascal recurrence.
        (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn calculus_examples() {
        let (n, p, f) = (naturals(), primes(), fibonacci());
        assert_eq!(first(&partial_sums(&n), 6), ints(&[1, 3, 6, 10, 15, 21]));
        assert_eq!(first(&partial_sums(&p), 6), ints(&[2, 5, 10, 17, 28, 41]));
        assert_eq!(first(&partial_sums(&f), 7), ints(&[1, 2, 4, 7, 12, 20, 33]));
        assert_eq!(first(&first_difference(&n), 5), ints(&[1, 1, 1, 1, 1]));
        assert_eq!(
            first(&first_difference(&p), 7),
            ints(&[2, 1, 2, 2, 4, 2, 4])
        );
        assert_eq!(
            first(&first_difference(&f), 8),
            ints(&[1, 0, 1, 1, 2, 3, 5, 8])
        );
        assert_eq!(
            first(&partial_products(&n), 6),
            ints(&[1, 2, 6, 24, 120, 720])
        );
        assert_eq!(
            first(&partial_products(&p), 6),
            ints(&[2, 6, 30, 210, 2310, 30030])
        );
        assert_eq!(
            first(&partial_products(&f), 7),
            ints(&[1, 1, 2, 6, 30, 240, 3120])
        );
    }

    #[test]
    fn primorial_is_exact() {
        let pr = first(&partial_products(&primes()), 15);
        assert_eq!(pr[14].to_string(), "614889782588491410");
        let pr = first(&partial_products(&primes()), 20);
        assert_eq!(pr[19].to_string(), "557940830126698960967415390");
    }

    #[test]
    fn fundamental_theorem() {
        for a in [naturals(), primes(), fibonacci()] {
            let base = first(&a, 100);
            assert_eq!(first(&partial_sums(&first_difference(&a)), 100), base);
            assert_eq!(first(&first_difference(&partial_sums(&a)), 100), base);
        }
    }

    #[test]
    fn fibonacci_partial_sums_closed_form() {
        let f = first(&fibonacci(), 102);
        let s = first(&partial_sums(&fibonacci()), 100);
        for n in 0..100 {
            assert_eq!(s[n], &f[n + 2] - 1u32);
        }
    }

    #[test]
    fn convolution_examples() {
        let (n, p, f) = (naturals(), primes(), fibonacci());
        assert_eq!(first(&convolve(&n, &n), 6), ints(&[1, 4, 10, 20, 35, 56]));
        assert_eq!(
            first(&convolve(&p, &p), 6),
            ints(&[4, 12, 29, 58, 111, 188])
        );
        assert_eq!(
            first(&convolve(&f, &f), 7),
            ints(&[1, 2, 5, 10, 20, 38, 71])
        );
        assert_eq!(first(&convolve(&n, &f), 6), ints(&[1, 3, 7, 14, 26, 46]));
        assert_eq!(first(&convolve(&p, &f), 6), ints(&[2, 5, 12, 24, 47, 84]));
        assert_eq!(first(&convolve(&n, &p), 5), ints(&[2, 7, 17, 34, 62]));
        assert_eq!(
            first(&convolve(&n, &p), 50),
            first(&partial_sums(&partial_sums(&p)), 50)
        );
    }

    #[test]
    fn conv_inverse_examples() {
        assert_eq!(
            first(&conv_inverse(&naturals()).unwrap(), 6),
            ints(&[1, -2, 1, 0, 0, 0])
        );
        assert_eq!(
            first(&conv_inverse(&fibonacci()).unwrap(), 6),
            ints(&[1, -1, -1, 0, 0, 0])
        );
        let p1 = prepend(&primes(), BigInt::one());
        assert_eq!(
            first(&conv_inverse(&p1).unwrap(), 8),
            ints(&[1, -2, 1, -1, 2, -3, 7, -10])
        );
        assert_eq!(
            conv_inverse(&primes()).unwrap_err(),
            SeqError::NotInvertible(BigInt::from(2))
        );
    }

    #[test]
    fn convolution_identity_and_inverse() {
        let e = literal(identity_element(60));
        for a in [naturals(), fibonacci(), prepend(&primes(), BigInt::one())] {
            assert_eq!(first(&convolve(&a, &e), 50), first(&a, 50));
            let inv = conv_inverse(&a).unwrap();
            assert_eq!(first(&convolve(&a, &inv), 50), identity_element(50));
        }
    }

    #[test]
    fn prepend_examples() {
        assert_eq!(
            first(&prepend(&naturals(), BigInt::zero()), 4),
            ints(&[0, 1, 2, 3])
        );
        let p1 = prepend(&primes(), BigInt::one());
        assert_eq!(first(&p1, 6), ints(&[1, 2, 3, 5, 7, 11]));
        assert!(p1.cert().is_strict());
        let z = prepend(&fibonacci(), BigInt::zero());
        assert_eq!(z.cert().strict_from, Some(3));
        z.take(50).unwrap();
    }

    #[test]
    fn zero_based_bridge() {
        // Two zero-prepended sequences convolve, under the shifted rule, to the
        // shifted convolution moved two places right.
        let f = fibonacci();
        let f0 = shift_right(&f, 2);
        assert_eq!(first(&convolve(&f0, &f0), 7), ints(&[0, 0, 0, 0, 1, 2, 5]));
        let one0 = prepend(&f, BigInt::zero());
        assert_eq!(
            first(&convolve(&one0, &one0), 7),
            ints(&[0, 0, 1, 2, 5, 10, 20])
        );
        let (a, b) = (primes(), naturals());
        let a0 = prepend(&a, BigInt::zero()).take(40).unwrap().zero_based();
        let b0 = prepend(&b, BigInt::zero()).take(40).unwrap().zero_based();
        let zero_based = convolve_zero_based(&a0, &b0);
        let shifted = first(&shift_right(&convolve(&a, &b), 2), 40);
        assert_eq!(zero_based.terms(), &shifted[..]);
    }

    #[test]
    fn binomial_examples() {
        let bt = |a: Sequence, v: BinomialVariant, n| first(&binomial_transform(&a, v), n);
        let n0 = prepend(&naturals(), BigInt::zero());
        let p1 = prepend(&primes(), BigInt::one());
        let f0 = prepend(&fibonacci(), BigInt::zero());
        use BinomialVariant::*;
        assert_eq!(bt(n0, Bt, 7), ints(&[0, 1, 4, 12, 32, 80, 192]));
        assert_eq!(bt(p1.clone(), Bt, 6), ints(&[1, 3, 8, 21, 54, 137]));
        assert_eq!(bt(f0.clone(), Bt, 7), ints(&[0, 1, 3, 8, 21, 55, 144]));
        assert_eq!(bt(f0, Ibt, 7), ints(&[0, 1, -1, 2, -3, 5, -8]));
        assert_eq!(bt(p1.clone(), Ibt, 8), ints(&[1, 1, 0, 1, -2, 5, -14, 37]));
        assert_eq!(bt(p1, Bt3, 7), ints(&[1, -1, 0, -1, -2, -5, -14]));
    }

    #[test]
    fn powers_from_repeated_transforms() {
        let mut s = first_difference(&naturals());
        for k in 1..=9u32 {
            s = binomial_transform(&s, BinomialVariant::Bt);
            let expect: Vec<Term> = (0..6).map(|e| BigInt::from(k + 1).pow(e)).collect();
            assert_eq!(first(&s, 6), expect);
            assert!(s.cert().is_strict());
        }
    }

    #[test]
    fn binomial_matches_direct_formula() {
        let xs = first(&primes(), 30);
        let out = first(
            &binomial_transform(&literal(xs.clone()), BinomialVariant::Ibt),
            30,
        );
        for m in 0..30u64 {
            let want: BigInt = (0..=m)
                .map(|k| {
                    let t = binom(m, k) * &xs[k as usize];
                    if (m - k) % 2 == 1 {
                        -t
                    } else {
                        t
                    }
                })
                .sum();
            assert_eq!(out[m as usize], want);
        }
    }

    fn arb_prefix() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-1_000_000i64..1_000_000, 40)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn binomial_algebra(xs in arb_prefix()) {
            use BinomialVariant::*;
            let a = FinitePrefix::new(ints(&xs), Origin::Zero);
            let there = |v| binomial_prefix(&a, v);
            prop_assert_eq!(binomial_prefix(&there(Ibt), Bt).into_terms(), a.terms().to_vec());
            prop_assert_eq!(binomial_prefix(&there(Bt), Ibt).into_terms(), a.terms().to_vec());
            prop_assert_eq!(binomial_prefix(&there(Bt3), Bt3).into_terms(), a.terms().to_vec());
            let (b3, ib) = (there(Bt3), there(Ibt));
            for n in 0..40 {
                let sign = if n % 2 == 1 { -ib.terms()[n].clone() } else { ib.terms()[n].clone() };
                prop_assert_eq!(&b3.terms()[n], &sign);
            }
            // The lazy transform agrees with the eager one.
            let lazy = first(&binomial_transform(&literal(ints(&xs)), Bt3), 40);
            prop_assert_eq!(&lazy[..], b3.terms());
        }

        #[test]
        fn convolution_laws(xs in prop::collection::vec(-1000i64..1000, 50),
                            ys in prop::collection::vec(-1000i64..1000, 50)) {
            let (a, b) = (literal(ints(&xs)), literal(ints(&ys)));
            prop_assert_eq!(first(&convolve(&a, &b), 50), first(&convolve(&b, &a), 50));
            prop_assert_eq!(first(&convolve(&ones(), &b), 50), first(&partial_sums(&b), 50));
            prop_assert_eq!(
                first(&convolve(&naturals(), &b), 50),
                first(&partial_sums(&partial_sums(&b)), 50)
            );
        }
    }
}
