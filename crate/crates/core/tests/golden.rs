use num_bigint::BigInt;

use seqlab::dsl;

fn run(text: &str, n: usize) -> Vec<i64> {
    let e = dsl::eval(&dsl::parse(text).unwrap(), n).unwrap();
    assert!(e.truncation.is_none(), "`{text}`: {:?}", e.truncation);
    e.terms.iter().map(|t| i64::try_from(t).unwrap()).collect()
}

const LESSER: [i64; 8] = [3, 5, 11, 17, 29, 41, 59, 71];

#[test]
fn lesser_twins_via_gap_indicator() {
    assert_eq!(
        run(
            "primes | diff | shiftl(1) | delta(2) | revind | compose(primes)",
            8
        ),
        LESSER
    );
}

#[test]
fn lesser_twins_via_shifted_intersection() {
    assert_eq!(run("primes | add(-2) | intersect(primes)", 8), LESSER);
}

// Without the shift the gap list is a(n) - a(n-1) with a(0) = 0, so the first
// term is 2 and every twin is recorded by its greater member.
#[test]
fn unshifted_gap_route_lands_on_greater_members() {
    assert_eq!(
        run("primes | diff | delta(2) | revind | compose(primes)", 8),
        [2, 5, 7, 13, 19, 31, 43, 61]
    );
}

#[test]
fn greater_twins_and_union() {
    let lesser = "primes | add(-2) | intersect(primes)";
    assert_eq!(run(&format!("{lesser} | add(2)"), 5), [5, 7, 13, 19, 31]);
    assert_eq!(
        run(&format!("{lesser} | union({lesser} | add(2))"), 7),
        [3, 5, 7, 11, 13, 17, 19]
    );
}

#[test]
fn powers_of_two_by_digit_count() {
    let pow10 = "naturals | diff | bt | bt | bt | bt | bt | bt | bt | bt | bt";
    let log2 = "naturals | diff | bt | minlinv | shiftr(1)";
    let got = run(&format!("{pow10} | compose({log2}) | diff | shiftl(1)"), 21);
    let want: Vec<i64> = (0..21).map(|i| if i % 3 == 0 { 4 } else { 3 }).collect();
    assert_eq!(got, want);
    // Independent count of n-digit powers of two.
    let counts: Vec<i64> = (1..=21u32)
        .map(|d| {
            (0..200u32)
                .filter(|&e| (BigInt::from(1) << e).to_string().len() == d as usize)
                .count() as i64
        })
        .collect();
    assert_eq!(got, counts);
}

#[test]
fn fibonacci_from_naturals() {
    let text = "naturals | convinv | psum | psum | mul(-1) | shiftr(2) | zipsum(naturals | convinv | psum) | convinv";
    assert_eq!(run(text, 11), [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]);
}
