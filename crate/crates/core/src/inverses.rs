//! Compositional inverses, the geometric inverse and the indicator pair.
//!
//! Every counting inverse here is a rank query on a monotone sequence, so the
//! terms have random access: `minlinv(a)(n)` at `n = 10^21` probes only
//! logarithmically many terms of `a`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, SeqError};
use crate::seqcore::{count_below, Certificate, Limits, Sequence, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Minimal,
    Maximal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InverseBound {
    pub side: Side,
    pub extremum: Extremum,
}

/// Dispatches to one of the four extremal inverses.
pub fn inverse(a: &Sequence, bound: InverseBound) -> Result<Sequence> {
    match (bound.side, bound.extremum) {
        (Side::Left, Extremum::Minimal) => minimal_left_inverse(a),
        (Side::Left, Extremum::Maximal) => maximal_left_inverse(a),
        (Side::Right, Extremum::Minimal) => minimal_right_inverse(a),
        (Side::Right, Extremum::Maximal) => maximal_right_inverse(a),
    }
}

fn require_strict(a: &Sequence) -> Result<()> {
    if !a.cert().is_strict() {
        return Err(SeqError::NotStrictlyIncreasing(a.label().to_string()));
    }
    if !a.unbounded() {
        return Err(SeqError::UnboundedRequired(a.label().to_string()));
    }
    Ok(())
}

fn require_monotone(a: &Sequence) -> Result<()> {
    if !a.cert().nondec {
        return Err(SeqError::NotNonDecreasing(a.label().to_string()));
    }
    if !a.cert().tends_to_infinity() {
        return Err(SeqError::UnboundedRequired(a.label().to_string()));
    }
    Ok(())
}

fn counting(floor: i64) -> Certificate {
    Certificate {
        nondec: true,
        floor: Some(BigInt::from(floor)),
        unbounded: true,
        ..Certificate::unordered()
    }
}

/// `#{k : a(k) <= n}`.
pub fn minimal_left_inverse(a: &Sequence) -> Result<Sequence> {
    require_strict(a)?;
    let src = a.clone();
    Ok(Sequence::direct(
        format!("{} | minlinv", a.label()),
        counting(0),
        move |n| count_below(&src, n, false),
    ))
}

/// `#{k : a(k) < n} + 1`.
pub fn maximal_left_inverse(a: &Sequence) -> Result<Sequence> {
    require_strict(a)?;
    let src = a.clone();
    Ok(Sequence::direct(
        format!("{} | maxlinv", a.label()),
        counting(1),
        move |n| Ok(count_below(&src, n, true)? + 1u32),
    ))
}

/// The smallest `k` with `a(k) = n`.
pub fn minimal_right_inverse(a: &Sequence) -> Result<Sequence> {
    require_monotone(a)?;
    let src = a.clone();
    let cert = Certificate::strictly_increasing(1);
    Ok(Sequence::direct(
        format!("{} | minrinv", a.label()),
        cert,
        move |n| {
            let k = count_below(&src, n, true)? + 1u32;
            attained_at(&src, n, &k)
        },
    ))
}

/// The largest `k` with `a(k) = n`.
pub fn maximal_right_inverse(a: &Sequence) -> Result<Sequence> {
    require_monotone(a)?;
    let src = a.clone();
    let cert = Certificate::strictly_increasing(1);
    Ok(Sequence::direct(
        format!("{} | maxrinv", a.label()),
        cert,
        move |n| {
            let k = count_below(&src, n, false)?;
            attained_at(&src, n, &k)
        },
    ))
}

fn attained_at(a: &Sequence, n: &Term, k: &BigInt) -> Result<Term> {
    if k.is_positive() {
        match a.term_big(k) {
            Ok(t) if t == *n => return Ok(k.clone()),
            Ok(_) => {}
            Err(e) if e.is_finite_end() => {}
            Err(e) => return Err(e),
        }
    }
    Err(SeqError::ValueNotAttained(n.clone()))
}

/// `#{k >= 1 : a(k) < n}`: the staircase of `a` reflected in the diagonal.
pub fn geometric_inverse(a: &Sequence) -> Result<Sequence> {
    require_monotone(a)?;
    let src = a.clone();
    Ok(Sequence::direct(
        format!("{} | geominv", a.label()),
        counting(0),
        move |n| count_below(&src, n, true),
    ))
}

fn indicator_cert() -> Certificate {
    Certificate {
        floor: Some(BigInt::zero()),
        ..Certificate::unordered()
    }
}

/// `#{k : a(k) = n}`, for a sequence that takes each value finitely often.
pub fn indicator(a: &Sequence) -> Result<Sequence> {
    require_monotone(a)?;
    let src = a.clone();
    Ok(Sequence::direct(
        format!("{} | ind", a.label()),
        indicator_cert(),
        move |n| Ok(count_below(&src, n, false)? - count_below(&src, n, true)?),
    ))
}

/// `#{k <= bound : a(k) = n}`, for any sequence.
pub fn indicator_within(a: &Sequence, bound: usize) -> Sequence {
    let src = a.clone();
    let mut seen: Option<Vec<Term>> = None;
    let label = format!("{} | ind({bound})", a.label());
    Sequence::sequential(label, indicator_cert(), move |n, _| {
        if seen.is_none() {
            seen = Some(src.take(bound)?.into_terms());
        }
        let target = BigInt::from(n);
        let terms = seen.as_deref().unwrap_or_default();
        Ok(Some(BigInt::from(
            terms.iter().filter(|t| **t == target).count(),
        )))
    })
}

/// Lists each `v = 1, 2, ...` repeated `a(v)` times.
pub fn reverse_indicator(a: &Sequence) -> Sequence {
    let src = a.clone();
    let mut value = 0usize;
    let mut left = BigInt::zero();
    let cert = Certificate {
        nondec: true,
        floor: Some(BigInt::one()),
        unbounded: true,
        ..Certificate::unordered()
    };
    Sequence::sequential(format!("{} | revind", a.label()), cert, move |n, _| {
        let budget = Limits::current().scan_budget;
        let mut empty_runs = 0usize;
        while left.is_zero() {
            if empty_runs == budget {
                return Err(SeqError::budget(n - 1));
            }
            value += 1;
            left = match src.term(value) {
                Ok(c) => c,
                Err(e) if e.is_finite_end() => return Ok(None),
                Err(e) => return Err(e),
            };
            if left.is_negative() {
                return Err(SeqError::NegativeCount {
                    index: value,
                    value: left.clone(),
                });
            }
            empty_runs += 1;
        }
        left -= 1u32;
        Ok(Some(BigInt::from(value)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointwise::index_map;
    use crate::seqcore::{fibonacci, literal, naturals, primes, squares, FnSpec};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Term> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn first(s: &Sequence, n: usize) -> Vec<Term> {
        s.take(n).unwrap().into_terms()
    }

    fn trimmed_fib() -> Sequence {
        index_map(&fibonacci(), FnSpec::Add(BigInt::one()))
    }

    fn brute_count(prefix: &[Term], keep: impl Fn(&Term) -> bool) -> BigInt {
        BigInt::from(prefix.iter().filter(|t| keep(t)).count())
    }

    #[test]
    fn left_inverse_examples() {
        let p = primes();
        assert_eq!(
            first(&minimal_left_inverse(&p).unwrap(), 10),
            ints(&[0, 1, 2, 2, 3, 3, 4, 4, 4, 4])
        );
        assert_eq!(
            first(&maximal_left_inverse(&p).unwrap(), 10),
            ints(&[1, 1, 2, 3, 3, 4, 4, 5, 5, 5])
        );
        assert_eq!(
            first(&minimal_left_inverse(&trimmed_fib()).unwrap(), 10),
            ints(&[1, 2, 3, 3, 4, 4, 4, 5, 5, 5])
        );
        assert_eq!(
            first(&maximal_left_inverse(&trimmed_fib()).unwrap(), 9),
            ints(&[1, 2, 3, 4, 4, 5, 5, 5, 6])
        );
        let nat: Vec<Term> = first(&naturals(), 20);
        assert_eq!(first(&minimal_left_inverse(&naturals()).unwrap(), 20), nat);
        assert_eq!(first(&maximal_left_inverse(&naturals()).unwrap(), 20), nat);
    }

    #[test]
    fn left_inverses_need_strict_input() {
        assert_eq!(
            minimal_left_inverse(&fibonacci()).unwrap_err(),
            SeqError::NotStrictlyIncreasing("fib".into())
        );
        assert!(maximal_left_inverse(&literal(ints(&[1, 1, 2]))).is_err());
    }

    #[test]
    fn left_inverse_at_huge_index() {
        let sq = minimal_left_inverse(&squares()).unwrap();
        let n = BigInt::from(10u32).pow(40);
        assert_eq!(sq.term_big(&n).unwrap(), BigInt::from(10u32).pow(20));
    }

    #[test]
    fn right_inverse_examples() {
        let n = naturals();
        assert_eq!(
            first(&minimal_right_inverse(&n).unwrap(), 10),
            first(&n, 10)
        );
        assert_eq!(
            first(&maximal_right_inverse(&n).unwrap(), 10),
            first(&n, 10)
        );
        let pi = minimal_left_inverse(&primes()).unwrap();
        assert_eq!(
            first(&minimal_right_inverse(&pi).unwrap(), 5),
            ints(&[2, 3, 5, 7, 11])
        );
        let tri = reverse_indicator(&naturals());
        assert_eq!(
            first(&maximal_right_inverse(&tri).unwrap(), 4),
            ints(&[1, 3, 6, 10])
        );
    }

    #[test]
    fn right_inverse_of_gappy_sequence() {
        let r = minimal_right_inverse(&primes()).unwrap();
        assert_eq!(r.term(2).unwrap(), BigInt::from(1));
        assert_eq!(
            r.term(4).unwrap_err(),
            SeqError::ValueNotAttained(BigInt::from(4))
        );
        assert_eq!(
            r.term(1).unwrap_err(),
            SeqError::ValueNotAttained(BigInt::from(1))
        );
        let r = maximal_right_inverse(&primes()).unwrap();
        assert_eq!(
            r.term(1).unwrap_err(),
            SeqError::ValueNotAttained(BigInt::from(1))
        );
    }

    #[test]
    fn geometric_inverse_examples() {
        assert_eq!(
            first(&geometric_inverse(&naturals()).unwrap(), 6),
            ints(&[0, 1, 2, 3, 4, 5])
        );
        assert_eq!(
            first(&geometric_inverse(&primes()).unwrap(), 10),
            ints(&[0, 0, 1, 2, 2, 3, 3, 4, 4, 4])
        );
        assert_eq!(
            first(&geometric_inverse(&fibonacci()).unwrap(), 9),
            ints(&[0, 2, 3, 4, 4, 5, 5, 5, 6])
        );
    }

    #[test]
    fn indicator_examples() {
        assert_eq!(
            first(&indicator(&primes()).unwrap(), 7),
            ints(&[0, 1, 1, 0, 1, 0, 1])
        );
        assert_eq!(
            first(&indicator(&fibonacci()).unwrap(), 8),
            ints(&[2, 1, 1, 0, 1, 0, 0, 1])
        );
        assert_eq!(
            first(&indicator(&naturals()).unwrap(), 5),
            ints(&[1, 1, 1, 1, 1])
        );
    }

    #[test]
    fn bounded_indicator_for_unordered_input() {
        let lit = literal(ints(&[3, 1, 3, 2, 3]));
        assert!(indicator(&lit).is_err());
        assert_eq!(first(&indicator_within(&lit, 5), 4), ints(&[1, 1, 3, 0]));
    }

    #[test]
    fn reverse_indicator_examples() {
        assert_eq!(
            first(&reverse_indicator(&naturals()), 6),
            ints(&[1, 2, 2, 3, 3, 3])
        );
        assert_eq!(
            first(&reverse_indicator(&primes()), 10),
            ints(&[1, 1, 2, 2, 2, 3, 3, 3, 3, 3])
        );
        assert_eq!(
            first(&reverse_indicator(&fibonacci()), 8),
            ints(&[1, 2, 3, 3, 4, 4, 4, 5])
        );
    }

    #[test]
    fn reverse_indicator_errors() {
        let neg = reverse_indicator(&literal(ints(&[1, -1, 2])));
        assert_eq!(neg.term(1).unwrap(), BigInt::from(1));
        assert!(matches!(
            neg.term(2),
            Err(SeqError::NegativeCount { index: 2, .. })
        ));
        let fin = reverse_indicator(&literal(ints(&[0, 2])));
        let (terms, err) = fin.take_partial(5);
        assert_eq!(terms, ints(&[2, 2]));
        assert!(err.unwrap().is_finite_end());
        let zeros = reverse_indicator(&crate::pointwise::elementwise(
            &naturals(),
            FnSpec::Mul(BigInt::zero()),
        ));
        let lim = Limits {
            scan_budget: 50,
            ..Limits::default()
        };
        assert!(lim.scope(|| zeros.term(1)).unwrap_err().is_truncation());
    }

    #[test]
    fn left_inverse_law() {
        for a in [primes(), trimmed_fib(), squares()] {
            let lo = minimal_left_inverse(&a).unwrap();
            let hi = maximal_left_inverse(&a).unwrap();
            for (n, v) in first(&a, 100).iter().enumerate() {
                assert_eq!(lo.term_big(v).unwrap(), BigInt::from(n + 1));
                assert_eq!(hi.term_big(v).unwrap(), BigInt::from(n + 1));
            }
        }
    }

    #[test]
    fn lattice_chain() {
        for a in [primes(), trimmed_fib()] {
            let lo = first(&minimal_left_inverse(&a).unwrap(), 201);
            let hi = first(&maximal_left_inverse(&a).unwrap(), 201);
            let ind = first(&indicator(&a).unwrap(), 200);
            for n in 0..200 {
                let member = ind[n].clone().min(BigInt::one());
                assert_eq!(&lo[n] + 1u32, &hi[n] + &member);
                assert_eq!(&lo[n] + 1u32, hi[n + 1]);
            }
        }
    }

    #[test]
    fn right_of_left_identities() {
        for a in [primes(), squares()] {
            let lo = minimal_left_inverse(&a).unwrap();
            let hi = maximal_left_inverse(&a).unwrap();
            let vals = first(&a, 52);
            let min_lo = first(&minimal_right_inverse(&lo).unwrap(), 51);
            let max_lo = first(&maximal_right_inverse(&lo).unwrap(), 51);
            let min_hi = first(&minimal_right_inverse(&hi).unwrap(), 51);
            let max_hi = first(&maximal_right_inverse(&hi).unwrap(), 51);
            for n in 0..50 {
                assert_eq!(min_lo[n], vals[n]);
                assert_eq!(&max_lo[n] + 1u32, vals[n + 1]);
                assert_eq!(min_hi[n + 1], &vals[n] + 1u32);
                assert_eq!(max_hi[n], vals[n]);
            }
        }
    }

    #[test]
    fn right_inverse_adjacency() {
        for a in [
            reverse_indicator(&naturals()),
            reverse_indicator(&primes()),
            geometric_inverse(&primes()).unwrap(),
        ] {
            // geominv(primes) starts at 0, so values from 1 on are all attained.
            let lo = first(&minimal_right_inverse(&a).unwrap(), 41);
            let hi = first(&maximal_right_inverse(&a).unwrap(), 40);
            for n in 0..40 {
                assert_eq!(hi[n], &lo[n + 1] - 1u32);
            }
        }
    }

    #[test]
    fn geometric_involution() {
        for a in [naturals(), primes(), fibonacci()] {
            let back = geometric_inverse(&geometric_inverse(&a).unwrap()).unwrap();
            assert_eq!(first(&back, 50), first(&a, 50));
        }
    }

    #[test]
    fn geometric_shift_relation() {
        for a in [primes(), squares(), trimmed_fib()] {
            let g = first(&geometric_inverse(&a).unwrap(), 201);
            let l = first(&minimal_left_inverse(&a).unwrap(), 200);
            assert_eq!(&g[1..], &l[..]);
        }
    }

    #[test]
    fn indicator_is_difference_of_geometric_inverse() {
        for a in [naturals(), primes(), fibonacci()] {
            let g = first(&geometric_inverse(&a).unwrap(), 201);
            let ind = first(&indicator(&a).unwrap(), 200);
            for n in 0..200 {
                assert_eq!(ind[n], &g[n + 1] - &g[n]);
            }
        }
    }

    #[test]
    fn oracle_agreement() {
        for a in [
            primes(),
            squares(),
            trimmed_fib(),
            reverse_indicator(&primes()),
        ] {
            let prefix = first(&a, 500);
            // Values below the 500th term are fully decided by the prefix.
            let top = usize::try_from((&prefix[499] - 1u32).min(BigInt::from(2000))).unwrap();
            let geo = first(&geometric_inverse(&a).unwrap(), top);
            let ind = first(&indicator(&a).unwrap(), top);
            for n in 1..=top {
                let v = BigInt::from(n);
                assert_eq!(geo[n - 1], brute_count(&prefix, |t| *t < v));
                assert_eq!(ind[n - 1], brute_count(&prefix, |t| *t == v));
            }
            if a.cert().is_strict() {
                let lo = first(&minimal_left_inverse(&a).unwrap(), top);
                let hi = first(&maximal_left_inverse(&a).unwrap(), top);
                for n in 1..=top {
                    let v = BigInt::from(n);
                    assert_eq!(lo[n - 1], brute_count(&prefix, |t| *t <= v));
                    assert_eq!(hi[n - 1], brute_count(&prefix, |t| *t < v) + 1u32);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn reverse_indicator_round_trip(mut xs in prop::collection::vec(1i64..60, 1..40)) {
            xs.sort_unstable();
            let a = literal(ints(&xs));
            let top = *xs.last().unwrap() as usize;
            // The literal is finite, so bound the indicator by its length.
            let counts = first(&indicator_within(&a, xs.len()), top);
            let back = reverse_indicator(&literal(counts));
            prop_assert_eq!(first(&back, xs.len()), ints(&xs));
        }

        #[test]
        fn reverse_indicator_lists_counts(counts in prop::collection::vec(0i64..5, 1..30)) {
            let r = reverse_indicator(&literal(ints(&counts)));
            let (got, _) = r.take_partial(1000);
            let want: Vec<Term> = counts
                .iter()
                .enumerate()
                .flat_map(|(i, &c)| std::iter::repeat_n(BigInt::from(i + 1), c as usize))
                .collect();
            prop_assert_eq!(got, want);
        }
    }
}
