//! Archimedean embeddings of `Q[x]/(f)`, for the Ramanujan–Petersson check.
//!
//! Real roots are isolated exactly with a Sturm sequence over the rationals
//! and refined by sign bisection to width below `2^-40`. When `f` is not
//! totally real, all complex roots come from Durand–Kerner iteration and the
//! check uses their moduli.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{FieldElement, IntPolynomial, MotivicWeight};
use crate::polygon::Rational;

const BOUND_SLACK: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Embeddings {
    roots: Vec<Complex64>,
    totally_real: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeilCheck {
    pub passed: bool,
    /// Largest `|σ(a)|` over all embeddings.
    pub max_abs: f64,
    pub bound: f64,
    /// False when complex embeddings were involved.
    pub totally_real: bool,
}

impl Embeddings {
    pub fn compute(f: &IntPolynomial) -> Self {
        let n = f.degree().unwrap_or(0);
        let real = real_roots(f);
        if real.len() == n {
            Embeddings { roots: real.into_iter().map(|r| Complex64::new(r, 0.0)).collect(), totally_real: true }
        } else {
            Embeddings { roots: complex_roots(f), totally_real: false }
        }
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn totally_real(&self) -> bool {
        self.totally_real
    }

    /// `σ(a)` for every embedding `σ`.
    pub fn values(&self, a: &FieldElement) -> Vec<Complex64> {
        let coords: Vec<f64> = a.coords().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        self.roots
            .iter()
            .map(|r| coords.iter().rev().fold(Complex64::zero(), |acc, &c| acc * r + c))
            .collect()
    }

    pub fn check(&self, a: &FieldElement, p: u64, weight: MotivicWeight) -> WeilCheck {
        let bound = weight.bound(p);
        let max_abs = self.values(a).iter().map(|v| v.norm()).fold(0.0, f64::max);
        WeilCheck { passed: max_abs <= bound * (1.0 + BOUND_SLACK), max_abs, bound, totally_real: self.totally_real }
    }
}

type RatPoly = Vec<Rational>;

fn to_rat(f: &IntPolynomial) -> RatPoly {
    f.coeffs().iter().cloned().map(Rational::from_integer).collect()
}

fn eval(f: &[Rational], x: &Rational) -> Rational {
    f.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn sign(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Scale a rational polynomial to a primitive integer one by a positive
/// factor, keeping signs.
fn primitive(f: RatPoly) -> RatPoly {
    let lcm = f.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return f;
    }
    ints.into_iter().map(|c| Rational::from_integer(c / &g)).collect()
}

fn trim(mut f: RatPoly) -> RatPoly {
    while f.last().is_some_and(Zero::is_zero) {
        f.pop();
    }
    f
}

fn rem(a: &[Rational], b: &[Rational]) -> RatPoly {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lc = b.last().unwrap().clone();
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lc;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn sturm_sequence(f: &IntPolynomial) -> Vec<RatPoly> {
    let f0 = to_rat(f);
    let f1 = primitive(to_rat(&f.derivative()));
    let mut seq = vec![f0, f1];
    loop {
        let n = seq.len();
        if seq[n - 1].len() <= 1 {
            break;
        }
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(primitive(r.into_iter().map(|c| -c).collect()));
    }
    seq
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(seq: &[RatPoly], x: &Rational) -> usize {
    variations(seq.iter().map(|g| sign(&eval(g, x))))
}

/// Distinct real roots of `f`, ascending.
pub fn real_roots(f: &IntPolynomial) -> Vec<f64> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Vec::new(),
    };
    let fr = to_rat(f);
    let seq = sturm_sequence(f);
    let lc = fr[n].abs();
    let bound = fr[..n].iter().map(|c| c.abs() / &lc).fold(Rational::zero(), |a, b| a.max(b)) + Rational::one();
    let mut roots = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    let width = Rational::new(BigInt::one(), BigInt::from(1u64) << 40);
    let two = Rational::from_integer(2.into());
    while let Some((a, b)) = stack.pop() {
        let count = variations_at(&seq, &a).saturating_sub(variations_at(&seq, &b));
        match count {
            0 => {}
            1 => roots.push(refine(&fr, &seq, a, b, &width)),
            _ => {
                let m = (&a + &b) / &two;
                stack.push((a, m.clone()));
                stack.push((m, b));
            }
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

/// The single root of `f` in `(a, b]`.
fn refine(f: &[Rational], seq: &[RatPoly], mut a: Rational, mut b: Rational, width: &Rational) -> f64 {
    let two = Rational::from_integer(2.into());
    if eval(f, &b).is_zero() {
        return b.to_f64().unwrap();
    }
    // move a off a root belonging to the neighbouring interval
    let mut nudge = (&b - &a) / Rational::from_integer(1024.into());
    while eval(f, &a).is_zero() {
        let cand = &a + &nudge;
        if variations_at(seq, &cand).saturating_sub(variations_at(seq, &b)) == 1 {
            a = cand;
        } else {
            nudge /= &two;
        }
    }
    let sa = sign(&eval(f, &a));
    while &b - &a > *width {
        let m = (&a + &b) / &two;
        let sm = sign(&eval(f, &m));
        if sm == 0 {
            return m.to_f64().unwrap();
        }
        if sm == sa {
            a = m;
        } else {
            b = m;
        }
    }
    ((a + b) / two).to_f64().unwrap()
}

/// All complex roots by Durand–Kerner iteration.
pub fn complex_roots(f: &IntPolynomial) -> Vec<Complex64> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Vec::new(),
    };
    let lc = f.coeffs()[n].to_f64().unwrap();
    let c: Vec<f64> = f.coeffs().iter().map(|x| x.to_f64().unwrap() / lc).collect();
    let eval_c = |z: Complex64| c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * z + a);
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * (radius / 2.0).max(1.0)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::one();
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = eval_c(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_root_isolation() {
        let r = real_roots(&IntPolynomial::from_i64(&[-2, 0, 1]));
        assert_eq!(r.len(), 2);
        assert!((r[0] + 2f64.sqrt()).abs() < 1e-11 && (r[1] - 2f64.sqrt()).abs() < 1e-11);
        // x^3 + x^2 - 2x - 1: roots 2cos(2πk/7)
        let mut expect: Vec<f64> = (1..=3).map(|k| 2.0 * (2.0 * std::f64::consts::PI * k as f64 / 7.0).cos()).collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let r = real_roots(&IntPolynomial::from_i64(&[-1, -2, 1, 1]));
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-11);
        }
        // exact rational roots, including ones hit by bisection midpoints
        let r = real_roots(&IntPolynomial::from_i64(&[0, -1, 0, 1]));
        assert_eq!(r.len(), 3);
        assert!((r[0] + 1.0).abs() < 1e-11 && r[1].abs() < 1e-11 && (r[2] - 1.0).abs() < 1e-11);
        assert!(real_roots(&IntPolynomial::from_i64(&[1, 0, 1])).is_empty());
    }

    #[test]
    fn complex_fallback() {
        let e = Embeddings::compute(&IntPolynomial::from_i64(&[1, 0, 1]));
        assert!(!e.totally_real());
        let mut ims: Vec<f64> = e.roots().iter().map(|z| z.im).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-10 && (ims[1] - 1.0).abs() < 1e-10);
        // |2 + i| = √5
        let w = e.check(&FieldElement::from_ints(&[2, 1]), 2, MotivicWeight::Two);
        assert!((w.max_abs - 5f64.sqrt()).abs() < 1e-9);
        assert!(w.passed && !w.totally_real);
    }

    #[test]
    fn rational_field_embedding() {
        let e = Embeddings::compute(&IntPolynomial::from_i64(&[0, 1]));
        assert!(e.totally_real());
        assert_eq!(e.values(&FieldElement::from_ints(&[-7]))[0], Complex64::new(-7.0, 0.0));
    }
}
