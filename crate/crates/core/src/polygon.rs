//! Slope multisets and their Newton polygons.
//!
//! A [`SlopeMultiset`] is a finite multiset of rationals kept in sorted
//! order. Read left to right, the slopes trace the lower convex Newton
//! polygon emanating from the origin, so the same value serves as both the
//! multiset and the polygon. Sum, product and dual make the collection a
//! commutative semiring with involution; the polygon comparison gives the
//! partial order `leq`.

use std::fmt;
use std::ops::{Add, Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolygonError {
    #[error("invalid rational {0:?}")]
    BadRational(String),
    #[error("P({d};{k},{i}) requires d >= 1, k >= 1 and 0 <= i <= k")]
    Domain { d: i64, k: i64, i: i64 },
}

/// Parse `"3"`, `"-1/2"` or `" 4/6 "` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, PolygonError> {
    let t = s.trim();
    let bad = || PolygonError::BadRational(s.to_string());
    match t.split_once('/') {
        None => t.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// `"n/d"`, or `"n"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A finite multiset of rational slopes, stored sorted with repeats.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SlopeMultiset {
    slopes: Vec<Rational>,
}

/// Breakpoints of the Newton polygon of a multiset, starting at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonVertices {
    pub points: Vec<(Rational, Rational)>,
}

impl SlopeMultiset {
    pub fn new(slopes: impl IntoIterator<Item = Rational>) -> Self {
        let mut slopes: Vec<Rational> = slopes.into_iter().collect();
        slopes.sort();
        SlopeMultiset { slopes }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| int(v)))
    }

    /// The additive neutral element.
    pub fn empty() -> Self {
        SlopeMultiset::default()
    }

    /// `{0}`, the multiplicative identity.
    pub fn unit() -> Self {
        SlopeMultiset { slopes: vec![Rational::zero()] }
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    pub fn rank(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    pub fn integral(&self) -> Rational {
        self.slopes.iter().fold(Rational::zero(), |acc, s| acc + s)
    }

    /// Terminal point `(rank, integral)` of the polygon.
    pub fn endpoint(&self) -> (Rational, Rational) {
        (int(self.rank() as i64), self.integral())
    }

    pub fn oplus(&self, other: &SlopeMultiset) -> SlopeMultiset {
        // merge two sorted runs
        let mut out = Vec::with_capacity(self.rank() + other.rank());
        let (mut a, mut b) = (self.slopes.iter().peekable(), other.slopes.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => {
                    if x <= y {
                        out.push(a.next().unwrap().clone());
                    } else {
                        out.push(b.next().unwrap().clone());
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap().clone()),
                (None, None) => break,
            }
        }
        SlopeMultiset { slopes: out }
    }

    pub fn otimes(&self, other: &SlopeMultiset) -> SlopeMultiset {
        SlopeMultiset::new(
            self.slopes
                .iter()
                .flat_map(|s| other.slopes.iter().map(move |t| s + t)),
        )
    }

    pub fn dual(&self) -> SlopeMultiset {
        SlopeMultiset { slopes: self.slopes.iter().rev().map(|s| -s).collect() }
    }

    /// `S ⊕ ... ⊕ S` (`k` copies); `k = 0` gives the empty multiset.
    pub fn pow_oplus(&self, k: usize) -> SlopeMultiset {
        let mut out = Vec::with_capacity(self.rank() * k);
        for s in &self.slopes {
            for _ in 0..k {
                out.push(s.clone());
            }
        }
        SlopeMultiset { slopes: out }
    }

    /// `S ⊗ ... ⊗ S` (`k` copies); `k = 0` gives `{0}`.
    pub fn pow_otimes(&self, k: usize) -> SlopeMultiset {
        let mut acc = SlopeMultiset::unit();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.otimes(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.otimes(&base);
            }
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> SlopeMultiset {
        SlopeMultiset::new(self.slopes.iter().map(|s| s * c))
    }

    /// Every lattice point `(i, s_1 + ... + s_i)` for `i = 0..=rank`.
    pub fn cumulative_points(&self) -> Vec<(Rational, Rational)> {
        let mut pts = Vec::with_capacity(self.rank() + 1);
        let mut y = Rational::zero();
        pts.push((Rational::zero(), y.clone()));
        for (i, s) in self.slopes.iter().enumerate() {
            y += s;
            pts.push((int(i as i64 + 1), y.clone()));
        }
        pts
    }

    /// Breakpoints of the polygon, with runs of equal slopes merged.
    pub fn vertices(&self) -> PolygonVertices {
        let cum = self.cumulative_points();
        let mut points = vec![cum[0].clone()];
        for i in 1..cum.len() {
            let last = i == cum.len() - 1;
            if last || self.slopes[i] != self.slopes[i - 1] {
                points.push(cum[i].clone());
            }
        }
        PolygonVertices { points }
    }

    fn partial_sums(&self) -> Vec<Rational> {
        self.cumulative_points().into_iter().map(|(_, y)| y).collect()
    }

    /// `self ≤ other`: equal rank, and `other`'s polygon lies on or above
    /// `self`'s at every abscissa.
    pub fn leq(&self, other: &SlopeMultiset) -> bool {
        if self.rank() != other.rank() {
            return false;
        }
        self.partial_sums()
            .iter()
            .zip(other.partial_sums().iter())
            .all(|(a, b)| a <= b)
    }

    /// `self ≤′ other`: `leq` with equal endpoints.
    pub fn leq_strict(&self, other: &SlopeMultiset) -> bool {
        self.leq(other) && self.integral() == other.integral()
    }

    pub fn same_endpoint(&self, other: &SlopeMultiset) -> bool {
        self.endpoint() == other.endpoint()
    }

    pub fn has_integral_breakpoints(&self) -> bool {
        self.vertices().points.iter().all(|(x, y)| x.is_integer() && y.is_integer())
    }
}

impl Add for &SlopeMultiset {
    type Output = SlopeMultiset;
    fn add(self, rhs: &SlopeMultiset) -> SlopeMultiset {
        self.oplus(rhs)
    }
}

impl Mul for &SlopeMultiset {
    type Output = SlopeMultiset;
    fn mul(self, rhs: &SlopeMultiset) -> SlopeMultiset {
        self.otimes(rhs)
    }
}

impl Neg for &SlopeMultiset {
    type Output = SlopeMultiset;
    fn neg(self) -> SlopeMultiset {
        self.dual()
    }
}

impl fmt::Display for SlopeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.slopes.iter().map(format_rational).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for SlopeMultiset {
    type Err = PolygonError;

    /// Comma-separated rationals, e.g. `"0,1/2,1/2,1"`. Blank input is `∅`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if t.is_empty() {
            return Ok(SlopeMultiset::empty());
        }
        t.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>().map(SlopeMultiset::new)
    }
}

impl Serialize for SlopeMultiset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SlopeMultiset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PolygonVertices {
    /// `[["0","0"],["1","0"],...]`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.points
                .iter()
                .map(|(x, y)| serde_json::json!([format_rational(x), format_rational(y)]))
                .collect(),
        )
    }
}

impl fmt::Display for PolygonVertices {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

fn check_family(d: i64, k: i64, i: i64) -> Result<(), PolygonError> {
    if d < 1 || k < 1 || i < 0 || i > k {
        return Err(PolygonError::Domain { d, k, i });
    }
    Ok(())
}

fn family(low: SlopeMultiset, mid: SlopeMultiset, d: i64, k: i64, i: i64) -> SlopeMultiset {
    let low = low.pow_otimes(d as usize).pow_oplus((k - i) as usize);
    let mid = mid.pow_otimes(d as usize).pow_oplus(i as usize);
    low.oplus(&mid)
}

/// `P(d; k, i) = ({0,1}^{⊗d})^{⊕(k−i)} ⊕ ({1/2,1/2}^{⊗d})^{⊕i}`.
pub fn p_family(d: i64, k: i64, i: i64) -> Result<SlopeMultiset, PolygonError> {
    check_family(d, k, i)?;
    let half = rational(1, 2);
    Ok(family(
        SlopeMultiset::from_ints(&[0, 1]),
        SlopeMultiset::new([half.clone(), half]),
        d,
        k,
        i,
    ))
}

/// `P′(d; k, i) = ({0,2}^{⊗d})^{⊕(k−i)} ⊕ ({1,1}^{⊗d})^{⊕i}`, i.e. `P` stretched
/// vertically by two.
pub fn p_prime_family(d: i64, k: i64, i: i64) -> Result<SlopeMultiset, PolygonError> {
    check_family(d, k, i)?;
    Ok(family(
        SlopeMultiset::from_ints(&[0, 2]),
        SlopeMultiset::from_ints(&[1, 1]),
        d,
        k,
        i,
    ))
}

/// Rank `k·2^d` shared by every `P(d; k, ·)`.
pub fn p_family_rank(d: u32, k: u64) -> BigInt {
    BigInt::from(k) << d as usize
}

/// Integral `k·d·2^{d−1}` shared by every `P(d; k, ·)`.
pub fn p_family_integral(d: u32, k: u64) -> Rational {
    Rational::from_integer(BigInt::from(k) * BigInt::from(d)) * Rational::from_integer(BigInt::one() << d as usize)
        / int(2)
}
