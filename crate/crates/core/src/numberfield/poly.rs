//! Integer polynomials and polynomials over the prime field `F_p`, with
//! Cantor–Zassenhaus factorization of the latter.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

/// Polynomial with integer coefficients, ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn derivative(&self) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn reduce_mod(&self, p: u64) -> ModPPolynomial {
        let m = BigInt::from(p);
        ModPPolynomial::new(
            p,
            self.coeffs
                .iter()
                .map(|c| c.mod_floor(&m).to_u64().expect("reduced below p"))
                .collect(),
        )
    }

    /// Discriminant `(−1)^{n(n−1)/2} Res(f, f′) / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return BigInt::zero(),
        };
        let res = resultant(self, &self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        sign * res / self.leading().unwrap()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.coeffs.iter().map(|c| c.to_string()).collect())
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: Vec<String>) -> fmt::Result {
    let mut terms = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c == "0" {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c.as_str(), i) {
            (_, 0) => c.clone(),
            ("1", _) => mono,
            ("-1", _) => format!("-{mono}"),
            _ => format!("{c}*{mono}"),
        });
    }
    if terms.is_empty() {
        return f.write_str("0");
    }
    f.write_str(&terms.join(" + ").replace("+ -", "- "))
}

/// Resultant via fraction-free (Bareiss) elimination of the Sylvester matrix.
fn resultant(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
    let (m, n) = match (a.degree(), b.degree()) {
        (Some(m), Some(n)) => (m, n),
        _ => return BigInt::zero(),
    };
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (j, c) in a.coeffs.iter().rev().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in b.coeffs.iter().rev().enumerate() {
            mat[n + row][row + j] = c.clone();
        }
    }
    bareiss_determinant(mat)
}

fn bareiss_determinant(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let n = mat.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[n - 1][n - 1]
}

/// Polynomial over `F_p`, ascending degree, coefficients in `[0, p)`, no
/// trailing zeros. `p` must be below `2^32`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModPPolynomial {
    p: u64,
    coeffs: Vec<u64>,
}

impl PartialOrd for ModPPolynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ModPPolynomial {
    /// By degree, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
            .then(self.p.cmp(&other.p))
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

impl ModPPolynomial {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        debug_assert!((2..(1 << 32)).contains(&p));
        let mut f = ModPPolynomial { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        f.trim();
        f
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn zero(p: u64) -> Self {
        ModPPolynomial { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        ModPPolynomial::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        ModPPolynomial::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn monic(&self) -> ModPPolynomial {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lc) => self.scale(inv_mod(lc, self.p)),
        }
    }

    pub fn scale(&self, c: u64) -> ModPPolynomial {
        ModPPolynomial::new(self.p, self.coeffs.iter().map(|&a| a * (c % self.p) % self.p).collect())
    }

    pub fn add(&self, o: &ModPPolynomial) -> ModPPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        ModPPolynomial::new(
            self.p,
            (0..n).map(|i| (get(&self.coeffs, i) + get(&o.coeffs, i)) % self.p).collect(),
        )
    }

    pub fn sub(&self, o: &ModPPolynomial) -> ModPPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        ModPPolynomial::new(
            self.p,
            (0..n).map(|i| (get(&self.coeffs, i) + self.p - get(&o.coeffs, i)) % self.p).collect(),
        )
    }

    pub fn mul(&self, o: &ModPPolynomial) -> ModPPolynomial {
        if self.is_zero() || o.is_zero() {
            return ModPPolynomial::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % self.p;
            }
        }
        ModPPolynomial::new(self.p, out)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &ModPPolynomial) -> (ModPPolynomial, ModPPolynomial) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let p = self.p;
        let mut rem = self.coeffs.clone();
        let dd = d.deg();
        if rem.len() < d.coeffs.len() {
            return (ModPPolynomial::zero(p), self.clone());
        }
        let inv_lc = inv_mod(*d.coeffs.last().unwrap(), p);
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd] * inv_lc % p;
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in d.coeffs.iter().enumerate() {
                rem[i + j] = (rem[i + j] + p - c * b % p) % p;
            }
        }
        rem.truncate(dd);
        (ModPPolynomial::new(p, quot), ModPPolynomial::new(p, rem))
    }

    pub fn rem(&self, d: &ModPPolynomial) -> ModPPolynomial {
        self.div_rem(d).1
    }

    /// Exact division; debug-asserts a zero remainder.
    pub fn div_exact(&self, d: &ModPPolynomial) -> ModPPolynomial {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero());
        q
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &ModPPolynomial) -> ModPPolynomial {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> ModPPolynomial {
        ModPPolynomial::new(
            self.p,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * (i as u64 % self.p) % self.p).collect(),
        )
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &ModPPolynomial) -> ModPPolynomial {
        let mut base = self.rem(m);
        let mut acc = ModPPolynomial::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Value at `x`.
    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (acc * (x % self.p) + c) % self.p)
    }
}

impl fmt::Display for ModPPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.coeffs.iter().map(|c| c.to_string()).collect())?;
        write!(f, " (mod {})", self.p)
    }
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with `g`
/// squarefree, pairwise coprime, and `f = Π g^e`.
pub fn squarefree_decomposition(f: &ModPPolynomial) -> Vec<(ModPPolynomial, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let c0 = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c0);
    let mut c = c0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        // c is a p-th power: only exponents divisible by p survive
        let root = ModPPolynomial::new(p, c.coeffs.iter().step_by(p as usize).copied().collect());
        for (g, e) in squarefree_decomposition(&root) {
            out.push((g, e * p as usize));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into pairs `(h, d)` where `h` is the
/// product of all its irreducible factors of degree `d`.
pub fn distinct_degree_factorization(f: &ModPPolynomial) -> Vec<(ModPPolynomial, usize)> {
    let p = f.p;
    let x = ModPPolynomial::x(p);
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut h = x.rem(&g);
    let mut d = 0;
    while g.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(p, &g);
        let factor = g.gcd(&h.sub(&x));
        if factor.deg() > 0 {
            g = g.div_exact(&factor);
            h = h.rem(&g);
            out.push((factor, d));
        }
    }
    if g.deg() > 0 {
        let dg = g.deg();
        out.push((g, dg));
    }
    out
}

/// Splits a monic squarefree product of irreducibles of common degree `d`.
pub fn equal_degree_factorization<R: Rng>(f: &ModPPolynomial, d: usize, rng: &mut R) -> Vec<ModPPolynomial> {
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let p = f.p;
    loop {
        let a = ModPPolynomial::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^{2^{d-1}}
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^{(p^d − 1)/2} = (a^{1 + p + ... + p^{d−1}})^{(p−1)/2}
            let mut frob = a.rem(f);
            let mut norm = frob.clone();
            for _ in 1..d {
                frob = frob.pow_mod(p, f);
                norm = norm.mul(&frob).rem(f);
            }
            norm.pow_mod((p - 1) / 2, f).sub(&ModPPolynomial::one(p))
        };
        let g = f.gcd(&b);
        if g.deg() > 0 && g.deg() < n {
            let mut left = equal_degree_factorization(&g, d, rng);
            left.extend(equal_degree_factorization(&f.div_exact(&g), d, rng));
            return left;
        }
    }
}

/// Full factorization of a nonzero polynomial into monic irreducibles with
/// multiplicities, sorted by `(degree, coefficients)`. The leading
/// coefficient is dropped.
pub fn factor<R: Rng>(f: &ModPPolynomial, rng: &mut R) -> Vec<(ModPPolynomial, usize)> {
    let f = f.monic();
    let mut out = Vec::new();
    for (sq, e) in squarefree_decomposition(&f) {
        for (block, d) in distinct_degree_factorization(&sq) {
            for g in equal_degree_factorization(&block, d, rng) {
                out.push((g, e));
            }
        }
    }
    out.sort();
    out
}
