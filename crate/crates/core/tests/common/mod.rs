//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

pub mod checks;
pub mod laws;

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use ordinary_primes::polygon::{rational, SlopeMultiset};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const CASES: u32 = 1000;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Deterministic runner with `CASES` cases.
pub fn runner() -> TestRunner {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub fn slope() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rational(n, d))
}

pub fn multiset() -> impl Strategy<Value = SlopeMultiset> {
    prop::collection::vec(slope(), 0..5).prop_map(SlopeMultiset::new)
}

pub fn nonempty_multiset() -> impl Strategy<Value = SlopeMultiset> {
    prop::collection::vec(slope(), 1..5).prop_map(SlopeMultiset::new)
}

/// Partial sums of the sorted slopes: the polygon at each integer abscissa.
pub fn partial_sums(s: &SlopeMultiset) -> Vec<BigRational> {
    let mut v: Vec<BigRational> = s.slopes().to_vec();
    v.sort();
    let mut acc = BigRational::zero();
    let mut out = vec![acc.clone()];
    for x in v {
        acc += x;
        out.push(acc.clone());
    }
    out
}

/// `S ≤ T` computed directly from the definition.
pub fn leq_oracle(s: &SlopeMultiset, t: &SlopeMultiset) -> bool {
    s.rank() == t.rank() && partial_sums(s).iter().zip(partial_sums(t)).all(|(a, b)| *a <= b)
}

/// A pair `S ≤ S′`: `S′` comes from `S` by transfers from larger to smaller
/// slopes (which keep the endpoint) and, unless `same_end`, by raising some
/// slopes.
pub fn raised_pair(same_end: bool) -> impl Strategy<Value = (SlopeMultiset, SlopeMultiset)> {
    (
        prop::collection::vec(slope(), 1..5),
        prop::collection::vec((0usize..8, 0usize..8, 0i64..=4), 0..4),
        prop::collection::vec((0usize..8, 0i64..=3), 0..3),
    )
        .prop_map(move |(base, moves, raises)| {
            let mut v = base.clone();
            let n = v.len();
            for (a, b, num) in moves {
                let (i, j) = (a % n, b % n);
                if i == j {
                    continue;
                }
                let (lo, hi) = if v[i] <= v[j] { (i, j) } else { (j, i) };
                let delta = (&v[hi] - &v[lo]) * rational(num, 8);
                v[lo] += &delta;
                v[hi] -= &delta;
            }
            if !same_end {
                for (a, up) in raises {
                    v[a % n] += rational(up, 2);
                }
            }
            (SlopeMultiset::new(base), SlopeMultiset::new(v))
        })
}

/// `#E(F_p)` for `y² + y = x³ − x² − 10x − 20`, point at infinity included.
pub fn elliptic_count(p: u64) -> u64 {
    let mut hits = vec![0u64; p as usize];
    for y in 0..p {
        hits[((y * y + y) % p) as usize] += 1;
    }
    let mut count = 1;
    for x in 0..p {
        let x = x as i128;
        let rhs = (x * x * x - x * x - 10 * x - 20).rem_euclid(p as i128);
        count += hits[rhs as usize];
    }
    count
}

pub fn elliptic_ap(p: u64) -> i64 {
    p as i64 + 1 - elliptic_count(p) as i64
}

/// The level-11 form as a record with `a_p` for every prime below `bound`.
pub fn elliptic_record(bound: u64) -> String {
    let ap: Vec<String> = ordinary_primes::util::primes_below(bound)
        .into_iter()
        .map(|p| format!(r#"{{"p": {p}, "split_in_F": true, "a": ["{}"]}}"#, elliptic_ap(p)))
        .collect();
    format!(
        r#"[{{"label": "11.a", "d": 1, "field_poly": [0, 1], "level_norm": 11, "weight": [2],
        "hecke_poly": [0, 1], "cm": false, "ap": [{}]}}]"#,
        ap.join(",")
    )
}

pub fn legendre(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut result = 1u64;
    let mut base = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = (result as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// `k(p)` for `u + v√D` in `Z[√D]` from the norm `u² − D v²`, for odd `p ∤ D`.
pub fn quadratic_k_oracle(u: i64, v: i64, d: i64, p: u64) -> usize {
    let norm = BigInt::from(u) * u - BigInt::from(d) * v * v;
    let pb = BigInt::from(p);
    if !(norm % &pb).is_zero() {
        return 0;
    }
    let both = u.rem_euclid(p as i64) == 0 && v.rem_euclid(p as i64) == 0;
    match legendre(d, p) {
        // inert: the only prime has norm p²
        -1 => 2,
        _ if both => 2,
        _ => 1,
    }
}
