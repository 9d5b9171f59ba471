//! The semicircle measure `dμ(y) = √(4−y²)/(2π) dy` on `[−2, 2]` and the
//! tail constants
//!
//! ```text
//! c(k, t) = μ^{⊗t}{ |y₁|⋯|y_t| < 2^{t−k} },   1 ≤ t < k,
//! ```
//!
//! with the convention `c(k, k) = 1`.
//!
//! Sampling uses rejection from the uniform box `[−2, 2] × [0, 1/π]`; the
//! acceptance rate is `π/4`. Monte Carlo runs are split into fixed-size
//! chunks, each drawn from its own ChaCha8 stream, so results depend only on
//! the seed and the sample count, not on the thread count.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use gauss_quad::GaussLegendre;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_NODES: u64 = 64;
pub const MAX_TABLE_K: u32 = 8;

const CHUNK: u64 = 1 << 16;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SatoTateError {
    #[error("c(k, 1) needs k >= 2, got {0}")]
    KTooSmall(u32),
    #[error("need 1 <= t <= k, got k = {k}, t = {t}")]
    Domain { k: u32, t: u32 },
    #[error("method {method} cannot evaluate c({k}, {t})")]
    Unsupported { method: Method, k: u32, t: u32 },
    #[error("budget must be positive")]
    ZeroBudget,
    #[error("table limited to k <= {MAX_TABLE_K}, got {0}")]
    TableTooLarge(u32),
}

/// How a value was (or should be) obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "closed_form" | "closed" => Ok(Method::ClosedForm),
            "quadrature" | "quad" => Ok(Method::Quadrature),
            "monte_carlo" | "mc" => Ok(Method::MonteCarlo),
            other => Err(format!("unknown method '{other}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CEstimate {
    pub k: u32,
    pub t: u32,
    pub value: f64,
    pub abs_error: f64,
    pub method: Method,
    pub samples_or_nodes: u64,
    pub seed: Option<u64>,
}

impl CEstimate {
    pub fn contains(&self, x: f64) -> bool {
        (self.value - x).abs() <= self.abs_error
    }
}

pub fn st_density(y: f64) -> f64 {
    if y.abs() >= 2.0 {
        0.0
    } else {
        (4.0 - y * y).sqrt() / (2.0 * PI)
    }
}

pub fn st_cdf(y: f64) -> f64 {
    if y <= -2.0 {
        return 0.0;
    }
    if y >= 2.0 {
        return 1.0;
    }
    (0.5 + y * (4.0 - y * y).sqrt() / (4.0 * PI) + (y / 2.0).asin() / PI).clamp(0.0, 1.0)
}

/// One draw from the semicircle measure by rejection.
pub fn st_sample<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let y: f64 = rng.gen_range(-2.0..2.0);
        let u: f64 = rng.gen_range(0.0..1.0 / PI);
        if u <= st_density(y) {
            return y;
        }
    }
}

/// `c(k, 1) = (2/π)(2^{−k}√(1−2^{−2k}) + arcsin 2^{−k})`.
pub fn c_closed_form(k: u32) -> Result<f64, SatoTateError> {
    if k < 2 {
        return Err(SatoTateError::KTooSmall(k));
    }
    let h = 2f64.powi(-(k as i32));
    Ok(2.0 / PI * (h * (1.0 - h * h).sqrt() + h.asin()))
}

fn threshold(k: u32, t: u32) -> f64 {
    2f64.powi(t as i32 - k as i32)
}

/// `c(k, t)` by the requested method. `t = k` is always exactly 1.
///
/// `budget` is the sample count for Monte Carlo and the Gauss–Legendre order
/// per panel for quadrature (which handles `t ≤ 2`). The closed form only
/// covers `t = 1`.
pub fn c_numeric(k: u32, t: u32, method: Method, budget: u64, seed: u64) -> Result<CEstimate, SatoTateError> {
    if t == 0 || t > k {
        return Err(SatoTateError::Domain { k, t });
    }
    if t == k {
        return Ok(CEstimate { k, t, value: 1.0, abs_error: 0.0, method: Method::ClosedForm, samples_or_nodes: 0, seed: None });
    }
    match method {
        Method::ClosedForm if t == 1 => {
            let value = c_closed_form(k)?;
            Ok(CEstimate { k, t, value, abs_error: 1e-15, method, samples_or_nodes: 0, seed: None })
        }
        Method::Quadrature if t <= 2 => {
            if budget == 0 {
                return Err(SatoTateError::ZeroBudget);
            }
            let n = budget as usize;
            let coarse = quad_tail(k, t, n);
            let fine = quad_tail(k, t, 2 * n);
            Ok(CEstimate {
                k,
                t,
                value: fine,
                abs_error: (fine - coarse).abs() + 1e-14,
                method,
                samples_or_nodes: 2 * n as u64,
                seed: None,
            })
        }
        Method::MonteCarlo => {
            if budget == 0 {
                return Err(SatoTateError::ZeroBudget);
            }
            let hits = mc_hits(t, threshold(k, t), budget, seed);
            let n = budget as f64;
            let p = hits as f64 / n;
            let std = if budget > 1 { (p * (1.0 - p) * n / (n - 1.0)).sqrt() } else { 0.0 };
            Ok(CEstimate {
                k,
                t,
                value: p,
                abs_error: 3.0 * std / n.sqrt(),
                method,
                samples_or_nodes: budget,
                seed: Some(seed),
            })
        }
        _ => Err(SatoTateError::Unsupported { method, k, t }),
    }
}

/// Deterministic choice: quadrature when it applies, Monte Carlo otherwise.
pub fn c_auto(k: u32, t: u32, samples: u64, seed: u64) -> Result<CEstimate, SatoTateError> {
    if t <= 2 {
        c_numeric(k, t, Method::Quadrature, DEFAULT_NODES, seed)
    } else {
        c_numeric(k, t, Method::MonteCarlo, samples, seed)
    }
}

/// Rows `k = 1..=max_k`, row `k` holding `t = 1..=k`.
pub fn c_table(max_k: u32) -> Result<Vec<Vec<CEstimate>>, SatoTateError> {
    c_table_with(max_k, DEFAULT_SAMPLES, DEFAULT_SEED)
}

pub fn c_table_with(max_k: u32, samples: u64, seed: u64) -> Result<Vec<Vec<CEstimate>>, SatoTateError> {
    if max_k > MAX_TABLE_K {
        return Err(SatoTateError::TableTooLarge(max_k));
    }
    (1..=max_k).map(|k| (1..=k).map(|t| c_auto(k, t, samples, seed)).collect()).collect()
}

fn mc_hits(t: u32, bound: f64, samples: u64, seed: u64) -> u64 {
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx);
            let len = CHUNK.min(samples - idx * CHUNK);
            let mut hits = 0u64;
            for _ in 0..len {
                let prod: f64 = (0..t).map(|_| st_sample(&mut rng).abs()).product();
                if prod < bound {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

fn gauss(n: usize) -> GaussLegendre {
    GaussLegendre::new(n.max(2).try_into().expect("order is nonzero"))
}

/// `μ(|y| ≥ 2cos φ) = 2(φ − sin φ cos φ)/π` for `φ ∈ [0, π/2]`.
fn outer_mass(phi: f64) -> f64 {
    2.0 * (phi - phi.sin() * phi.cos()) / PI
}

fn quad_tail(k: u32, t: u32, n: usize) -> f64 {
    let rule = gauss(n);
    let a = threshold(k, t);
    // y = 2cos θ turns μ into (2/π) sin²θ dθ on [0, π]
    let weight = |theta: f64| 2.0 / PI * theta.sin().powi(2);
    if t == 1 {
        // μ(|y| < a) = 2 ∫_{arccos(a/2)}^{π/2} (2/π) sin²θ dθ
        return 2.0 * rule.integrate((a / 2.0).acos(), PI / 2.0, weight);
    }
    // t = 2: 2 ∫_0^2 μ(|y₂| < a/y) dμ(y), inner mass is 1 for y ≤ a/2
    let lo = a / 2.0;
    let mid = (lo + 2.0) / 2.0;
    // y ∈ [lo, mid] via a/y = 2cos φ, which keeps the inner mass smooth
    let phi_mid = (a / (2.0 * mid)).acos();
    let near = rule.integrate(0.0, phi_mid, |phi| {
        let (s, c) = phi.sin_cos();
        let y = a / (2.0 * c);
        let dy = a * s / (2.0 * c * c);
        (1.0 - outer_mass(phi)) * st_density(y) * dy
    });
    // y ∈ [mid, 2] via y = 2cos θ, which absorbs the endpoint singularity
    let theta_mid = (mid / 2.0).acos();
    let far = rule.integrate(0.0, theta_mid, |theta| {
        let y = 2.0 * theta.cos();
        (2.0 * st_cdf(a / y) - 1.0) * weight(theta)
    });
    2.0 * ((st_cdf(lo) - 0.5) + near + far)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, whole: f64, depth: u32) -> f64 {
        let m = (a + b) / 2.0;
        let left = (m - a) / 6.0 * (f(a) + 4.0 * f((a + m) / 2.0) + f(m));
        let right = (b - m) / 6.0 * (f(m) + 4.0 * f((m + b) / 2.0) + f(b));
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        simpson(f, a, m, tol / 2.0, left, depth - 1) + simpson(f, m, b, tol / 2.0, right, depth - 1)
    }

    fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        let whole = (b - a) / 6.0 * (f(a) + 4.0 * f((a + b) / 2.0) + f(b));
        simpson(f, a, b, tol, whole, 60)
    }

    #[test]
    fn density_values() {
        assert!((st_density(0.0) - 1.0 / PI).abs() < 1e-15);
        assert_eq!(st_density(2.0), 0.0);
        assert_eq!(st_density(-2.0), 0.0);
        assert_eq!(st_density(3.0), 0.0);
        assert_eq!(st_cdf(2.0), 1.0);
        assert_eq!(st_cdf(-2.0), 0.0);
        assert!((st_cdf(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn density_has_unit_mass() {
        let total = adaptive(&st_density, -2.0, 2.0, 1e-13);
        assert!((total - 1.0).abs() < 1e-10, "{total}");
    }

    #[test]
    fn cdf_differentiates_to_density() {
        let h = 1e-6;
        for i in 1..=100 {
            let y = -2.0 + 4.0 * i as f64 / 101.0;
            let d = (st_cdf(y + h) - st_cdf(y - h)) / (2.0 * h);
            assert!((d - st_density(y)).abs() < 1e-6, "y = {y}");
        }
    }

    #[test]
    fn sampler_matches_cdf() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| st_sample(&mut rng)).collect();
        for y in [-1.5, -0.5, 0.0, 0.7, 1.9] {
            let emp = xs.iter().filter(|&&x| x <= y).count() as f64 / n as f64;
            assert!((emp - st_cdf(y)).abs() < 0.005, "y = {y}");
        }
    }

    #[test]
    fn closed_form_values() {
        assert!((c_closed_form(2).unwrap() - 0.315).abs() < 5e-4);
        assert!((c_closed_form(3).unwrap() - 0.159).abs() < 5e-4);
        let v = c_closed_form(20).unwrap() * PI * 2f64.powi(18);
        assert!((0.999..=1.001).contains(&v));
        assert_eq!(c_closed_form(1), Err(SatoTateError::KTooSmall(1)));
    }

    #[test]
    fn closed_form_is_semicircle_mass() {
        for k in 2..=8 {
            let a = 2f64.powi(1 - k as i32);
            let direct = st_cdf(a) - st_cdf(-a);
            assert!((direct - c_closed_form(k).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for k in 2..=6 {
            let q = c_numeric(k, 1, Method::Quadrature, 32, 0).unwrap();
            assert!(q.contains(c_closed_form(k).unwrap()) || (q.value - c_closed_form(k).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn quadrature_two_fold_converges() {
        let q = c_numeric(4, 2, Method::Quadrature, 64, 0).unwrap();
        assert!(q.abs_error < 1e-10, "{q:?}");
        assert!((q.value - 0.320).abs() < 0.005);
        let q = c_numeric(3, 2, Method::Quadrature, 64, 0).unwrap();
        assert!((q.value - 0.501).abs() < 0.005);
    }

    #[test]
    fn diagonal_is_one() {
        let e = c_numeric(5, 5, Method::MonteCarlo, 10, 1).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.method, Method::ClosedForm);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(c_numeric(3, 0, Method::MonteCarlo, 10, 0), Err(SatoTateError::Domain { k: 3, t: 0 }));
        assert_eq!(c_numeric(3, 4, Method::MonteCarlo, 10, 0), Err(SatoTateError::Domain { k: 3, t: 4 }));
        assert!(matches!(c_numeric(5, 3, Method::Quadrature, 10, 0), Err(SatoTateError::Unsupported { .. })));
        assert!(matches!(c_numeric(5, 2, Method::ClosedForm, 10, 0), Err(SatoTateError::Unsupported { .. })));
        assert_eq!(c_table(9).unwrap_err(), SatoTateError::TableTooLarge(9));
    }

    #[test]
    fn monte_carlo_is_reproducible_and_consistent() {
        let a = c_numeric(5, 1, Method::MonteCarlo, 300_000, 11).unwrap();
        let b = c_numeric(5, 1, Method::MonteCarlo, 300_000, 11).unwrap();
        assert_eq!(a, b);
        let c = c_numeric(5, 1, Method::MonteCarlo, 300_000, 12).unwrap();
        assert!((a.value - c.value).abs() <= a.abs_error + c.abs_error);
        assert!((a.value - c_closed_form(5).unwrap()).abs() <= a.abs_error);
    }

    #[test]
    fn small_table_shape() {
        let t = c_table_with(3, 200_000, 5).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0].len(), 1);
        assert_eq!(t[0][0].value, 1.0);
        assert!((t[1][0].value - 0.315).abs() < 5e-4);
        assert!((t[2][1].value - 0.501).abs() < 0.005);
        assert!(t.iter().all(|row| row.last().unwrap().value == 1.0));
    }

    #[test]
    fn method_parsing() {
        assert_eq!("mc".parse::<Method>().unwrap(), Method::MonteCarlo);
        assert_eq!("closed-form".parse::<Method>().unwrap(), Method::ClosedForm);
        assert!("simpson".parse::<Method>().is_err());
    }
}
