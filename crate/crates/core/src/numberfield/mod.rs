//! Prime splitting in `K = Q[x]/(f)` and the ordinariness defect `k(p)`.
//!
//! Primes of `K` over an unramified, non-index `p` correspond to the
//! irreducible factors `g_i` of `f mod p`, with residue degree `deg g_i`.
//! An element `a` lies in the prime for `g_i` exactly when `a(x) mod (p, g_i)`
//! vanishes. `k(p)` is the total residue degree of the primes containing
//! `a_p`.

mod embeddings;
mod poly;

pub use embeddings::{Embeddings, WeilCheck};
pub use poly::{
    distinct_degree_factorization, equal_degree_factorization, factor, squarefree_decomposition,
    IntPolynomial, ModPPolynomial,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polygon::{format_rational, parse_rational, Rational};
use crate::util::is_prime_u64;

/// Seed for the equal-degree splitting stream when none is given.
pub const DEFAULT_FACTOR_SEED: u64 = 0x5eed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumberFieldError {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("polynomial vanishes identically mod {0}")]
    ZeroModP(u64),
    #[error("defining polynomial {0} is not monic")]
    NotMonic(String),
    #[error("field element has a coordinate with denominator divisible by {p}")]
    NonIntegral { p: u64 },
    #[error("field element has {got} coordinates, field degree is {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{p} ramifies in the field (repeated factor mod p)")]
    Ramified { p: u64 },
    #[error("{p} divides the polynomial discriminant; factors need not match primes")]
    IndexDivisor { p: u64 },
    #[error("invalid field element: {0}")]
    Parse(String),
}

fn check_prime(p: u64) -> Result<(), NumberFieldError> {
    if p >= 1 << 32 || !is_prime_u64(p) {
        return Err(NumberFieldError::NotPrime(p));
    }
    Ok(())
}

/// Factor `f mod p` into monic irreducibles with multiplicities, using the
/// given seed for the randomized splitting step. The result is sorted and
/// does not depend on the seed.
pub fn factor_mod_p_seeded(
    f: &IntPolynomial,
    p: u64,
    seed: u64,
) -> Result<Vec<(ModPPolynomial, usize)>, NumberFieldError> {
    check_prime(p)?;
    let fp = f.reduce_mod(p);
    if fp.is_zero() {
        return Err(NumberFieldError::ZeroModP(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(factor(&fp, &mut rng))
}

pub fn factor_mod_p(f: &IntPolynomial, p: u64) -> Result<Vec<(ModPPolynomial, usize)>, NumberFieldError> {
    factor_mod_p_seeded(f, p, DEFAULT_FACTOR_SEED)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFactor {
    pub g: ModPPolynomial,
    pub e: usize,
}

impl PrimeFactor {
    /// Residue degree.
    pub fn f(&self) -> usize {
        self.g.degree().unwrap_or(0)
    }
}

/// How `p` factors in `Z[x]/(f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplitting {
    pub p: u64,
    pub factors: Vec<PrimeFactor>,
    pub ramified: bool,
    /// `p | disc(f)`: the factor/prime correspondence is not guaranteed.
    pub index_warning: bool,
}

impl PrimeSplitting {
    pub fn residue_degrees(&self) -> Vec<usize> {
        self.factors.iter().map(PrimeFactor::f).collect()
    }

    pub fn ramification_indices(&self) -> Vec<usize> {
        self.factors.iter().map(|pf| pf.e).collect()
    }

    /// `Σ e_i f_i`.
    pub fn total_degree(&self) -> usize {
        self.factors.iter().map(|pf| pf.e * pf.f()).sum()
    }

    pub fn splits_completely(&self) -> bool {
        self.factors.iter().all(|pf| pf.e == 1 && pf.f() == 1)
    }

    /// Residue degrees formatted as e.g. `"1^2 2"`.
    pub fn signature(&self) -> String {
        self.factors
            .iter()
            .map(|pf| if pf.e == 1 { pf.f().to_string() } else { format!("{}^{}", pf.f(), pf.e) })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Splitting of a prime in the field defined by a monic `f`.
pub fn splitting_type(f: &IntPolynomial, p: u64) -> Result<PrimeSplitting, NumberFieldError> {
    if !f.is_monic() {
        return Err(NumberFieldError::NotMonic(f.to_string()));
    }
    let factors: Vec<PrimeFactor> =
        factor_mod_p(f, p)?.into_iter().map(|(g, e)| PrimeFactor { g, e }).collect();
    let ramified = factors.iter().any(|pf| pf.e > 1);
    let disc = f.discriminant();
    let index_warning = (disc % BigInt::from(p)).is_zero();
    Ok(PrimeSplitting { p, factors, ramified, index_warning })
}

/// Element of `K = Q[x]/(f)` in the power basis `1, θ, .., θ^{n−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coords: Vec<Rational>,
}

impl FieldElement {
    pub fn new(coords: Vec<Rational>) -> Self {
        FieldElement { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        FieldElement { coords: coords.iter().map(|&c| Rational::from_integer(c.into())).collect() }
    }

    /// Integer `c` embedded in a field of the given degree.
    pub fn constant(c: i64, degree: usize) -> Self {
        let mut coords = vec![Rational::zero(); degree.max(1)];
        coords[0] = Rational::from_integer(c.into());
        FieldElement { coords }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Reduction to `F_p[x]`. Denominators prime to `p` are inverted.
    pub fn reduce_mod(&self, p: u64) -> Result<ModPPolynomial, NumberFieldError> {
        let m = BigInt::from(p);
        let coeffs = self
            .coords
            .iter()
            .map(|c| {
                let den = c.denom().mod_floor(&m);
                if den.is_zero() {
                    return Err(NumberFieldError::NonIntegral { p });
                }
                let num = c.numer().mod_floor(&m).to_u64().unwrap();
                let den = den.to_u64().unwrap();
                Ok(num * poly::pow_mod(den, p - 2, p) % p)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ModPPolynomial::new(p, coeffs))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }

    pub fn parse_strings<S: AsRef<str>>(items: &[S]) -> Result<Self, NumberFieldError> {
        items
            .iter()
            .map(|s| parse_rational(s.as_ref()).map_err(|e| NumberFieldError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(FieldElement::new)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_strings().join(","))
    }
}

impl FromStr for FieldElement {
    type Err = NumberFieldError;

    /// Comma-separated power-basis coordinates, e.g. `"3,1"` for `3 + θ`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().trim_start_matches('[').trim_end_matches(']').split(',').collect();
        FieldElement::parse_strings(&parts)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let items = Vec::<serde_json::Value>::deserialize(d)?;
        let strings = items
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => Ok(s.clone()),
                serde_json::Value::Number(n) => Ok(n.to_string()),
                other => Err(serde::de::Error::custom(format!("bad coordinate {other}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        FieldElement::parse_strings(&strings).map_err(serde::de::Error::custom)
    }
}

/// Whether `a` lies in the prime of `K` over `p` attached to the factor `g`.
pub fn element_in_prime(a: &FieldElement, g: &ModPPolynomial, p: u64) -> Result<bool, NumberFieldError> {
    debug_assert_eq!(g.modulus(), p);
    Ok(a.reduce_mod(p)?.rem(g).is_zero())
}

/// Outcome of the `k(p)` computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KOfP {
    pub k: usize,
    /// `a_p = 0`, which lies in every prime.
    pub zero: bool,
    pub splitting: PrimeSplitting,
    /// Per factor: whether `a_p` lies in that prime.
    pub divides: Vec<bool>,
}

fn check_element(a: &FieldElement, f_k: &IntPolynomial) -> Result<(), NumberFieldError> {
    let n = f_k.degree().unwrap_or(0);
    if a.len() != n {
        return Err(NumberFieldError::LengthMismatch { expected: n, got: a.len() });
    }
    Ok(())
}

/// `k(p)`: total residue degree of the primes over `p` that contain `a_p`.
pub fn k_of_p(a_p: &FieldElement, f_k: &IntPolynomial, p: u64) -> Result<KOfP, NumberFieldError> {
    let splitting = splitting_type(f_k, p)?;
    k_of_p_with(a_p, f_k, &splitting)
}

/// As [`k_of_p`], reusing a splitting already computed for `f_k`.
pub fn k_of_p_with(a_p: &FieldElement, f_k: &IntPolynomial, splitting: &PrimeSplitting) -> Result<KOfP, NumberFieldError> {
    check_element(a_p, f_k)?;
    let p = splitting.p;
    if splitting.ramified {
        return Err(NumberFieldError::Ramified { p });
    }
    if splitting.index_warning {
        return Err(NumberFieldError::IndexDivisor { p });
    }
    let zero = a_p.is_zero();
    let reduced = a_p.reduce_mod(p)?;
    let divides: Vec<bool> = splitting.factors.iter().map(|pf| reduced.rem(&pf.g).is_zero()).collect();
    let k = splitting
        .factors
        .iter()
        .zip(&divides)
        .filter(|(_, &d)| d)
        .map(|(pf, _)| pf.f())
        .sum();
    Ok(KOfP { k, zero, splitting: splitting.clone(), divides })
}

/// `a_p ≠ 0` and `a_p` lies in no prime over `p`.
pub fn is_ordinary(a_p: &FieldElement, f_k: &IntPolynomial, p: u64) -> Result<bool, NumberFieldError> {
    let r = k_of_p(a_p, f_k, p)?;
    Ok(!r.zero && r.k == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MotivicWeight {
    /// Parallel weight 2: `|σ(a_p)| ≤ 2√p`.
    Two,
    /// Parallel weight 3: `|σ(a_p)| ≤ 2p`.
    Three,
}

impl MotivicWeight {
    pub fn from_weight(w: i64) -> Option<Self> {
        match w {
            2 => Some(MotivicWeight::Two),
            3 => Some(MotivicWeight::Three),
            _ => None,
        }
    }

    pub fn bound(self, p: u64) -> f64 {
        match self {
            MotivicWeight::Two => 2.0 * (p as f64).sqrt(),
            MotivicWeight::Three => 2.0 * p as f64,
        }
    }
}

/// Ramanujan–Petersson check `|σ(a_p)| ≤ bound` over every embedding `σ`.
pub fn weil_bound_check(
    a_p: &FieldElement,
    f_k: &IntPolynomial,
    p: u64,
    weight: MotivicWeight,
) -> Result<WeilCheck, NumberFieldError> {
    check_element(a_p, f_k)?;
    Ok(Embeddings::compute(f_k).check(a_p, p, weight))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfBound {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for HalfBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HalfBound::Pass => "pass",
            HalfBound::Fail => "fail",
            HalfBound::NotApplicable => "not_applicable",
        })
    }
}

/// For `p > 2^{2 k_f}` the product formula forces `k(p) ≤ k_f/2`; a failure
/// there means the input data is inconsistent.
pub fn half_bound_check(k_p: usize, k_f: usize, p: u64) -> HalfBound {
    let exp = 2 * k_f as u32;
    if exp >= 64 || p <= 1u64 << exp {
        return HalfBound::NotApplicable;
    }
    if 2 * k_p <= k_f {
        HalfBound::Pass
    } else {
        HalfBound::Fail
    }
}
