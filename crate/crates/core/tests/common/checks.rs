//! End-to-end checks, each returning a one-line summary or the first failure.

use std::collections::BTreeSet;

use num_traits::Zero;
use ordinary_primes::galois::{Extremum, PermGroupAction};
use ordinary_primes::numberfield::{factor_mod_p_seeded, k_of_p, FieldElement, IntPolynomial, ModPPolynomial};
use ordinary_primes::pipeline::{
    analyze_form, guarantee, load_forms, load_forms_file, Assumption, DensityClass, GuaranteeCase, PrimeStatus,
};
use ordinary_primes::polygon::{p_family, rational, Rational};
use ordinary_primes::util::primes_below;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{elliptic_ap, elliptic_record, fixture, quadratic_k_oracle};

pub type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

pub fn p_family_order() -> Check {
    let mut pairs = 0;
    for d in 1..=4 {
        for k in 1..=6 {
            let fam: Vec<_> = (0..=k).map(|i| p_family(d, k, i).unwrap()).collect();
            for (i, m) in fam.iter().enumerate() {
                ensure!(m.has_integral_breakpoints(), "P({d};{k},{i}) has a non-integral vertex");
            }
            for i in 0..fam.len() {
                for j in i + 1..fam.len() {
                    ensure!(fam[i].leq(&fam[j]), "P({d};{k},{i}) !<= P({d};{k},{j})");
                    ensure!(!fam[j].leq(&fam[i]), "P({d};{k},{j}) <= P({d};{k},{i})");
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} ordered pairs"))
}

fn group(gens: &str, n: usize) -> PermGroupAction {
    PermGroupAction::parse(gens, n).unwrap()
}

pub fn galois_fixtures() -> Check {
    let cases: Vec<(&str, PermGroupAction, Rational, Option<bool>)> = vec![
        ("Klein regular", PermGroupAction::klein_regular(), rational(1, 2), Some(true)),
        ("trivial on 3", PermGroupAction::trivial(3), rational(2, 3), None),
        ("trivial on 4", PermGroupAction::trivial(4), rational(3, 4), Some(false)),
        ("Z/3 on 6", group("(0 2 4)(1 3 5)", 6), rational(1, 2), Some(true)),
        ("D8 on 4", group("(0 1 2 3);(1 3)", 4), rational(0, 1), None),
        ("Klein in D8", group("(0 2)(1 3);(1 3)", 4), rational(1, 2), Some(true)),
    ];
    for (name, g, sigma, bis) in &cases {
        let got = g.slope().map_err(|e| e.to_string())?;
        ensure!(got == *sigma, "{name}: sigma = {got}, expected {sigma}");
        if let Some(b) = bis {
            ensure!(g.has_bisecting().unwrap() == *b, "{name}: bisecting != {b}");
        }
    }
    for n in 2..=6 {
        let s = PermGroupAction::symmetric(n).slope().unwrap();
        ensure!(s.is_zero(), "S_{n}: sigma = {s}");
    }
    let a4 = PermGroupAction::alternating(4).lambda(Extremum::Max).unwrap();
    ensure!(a4 == 3, "A_4: lambda = {a4}");
    Ok(format!("{} fixtures, S_2..S_6, A_4", cases.len()))
}

pub fn rational_field_divisibility() -> Check {
    let f = IntPolynomial::from_i64(&[0, 1]);
    let mut n = 0;
    for p in primes_below(101) {
        for a in -1000i64..=1000 {
            let r = k_of_p(&FieldElement::from_ints(&[a]), &f, p).map_err(|e| e.to_string())?;
            let expect = usize::from(a % p as i64 == 0);
            ensure!(r.k == expect, "a = {a}, p = {p}: k = {}, expected {expect}", r.k);
            n += 1;
        }
    }
    Ok(format!("{n} cases"))
}

pub fn quadratic_norm_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let primes: Vec<u64> = primes_below(400).into_iter().filter(|&p| p > 5).collect();
    let mut by_k = [0usize; 3];
    for _ in 0..500 {
        let d = [2i64, 3, 5][rng.gen_range(0..3)];
        let p = primes[rng.gen_range(0..primes.len())];
        // bias toward elements with small norm so every k occurs
        let (u, v) = if rng.gen_bool(0.5) {
            (rng.gen_range(-50i64..=50), rng.gen_range(-50i64..=50))
        } else {
            let s = p as i64 * rng.gen_range(-3i64..=3);
            (s + rng.gen_range(-1i64..=1), p as i64 * rng.gen_range(-2i64..=2) + rng.gen_range(-1i64..=1))
        };
        let f = IntPolynomial::from_i64(&[-d, 0, 1]);
        let r = k_of_p(&FieldElement::from_ints(&[u, v]), &f, p).map_err(|e| e.to_string())?;
        let expect = quadratic_k_oracle(u, v, d, p);
        ensure!(r.k == expect, "{u}+{v}*sqrt({d}) at p = {p}: k = {}, oracle {expect}", r.k);
        by_k[expect] += 1;
    }
    ensure!(by_k.iter().all(|&c| c > 0), "oracle cases did not cover every k: {by_k:?}");
    Ok(format!("500 cases, k=0/1/2: {}/{}/{}", by_k[0], by_k[1], by_k[2]))
}

pub fn factorization_invariants() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let primes = primes_below(1000);
    let mut done = 0;
    while done < 1000 {
        let deg = rng.gen_range(1..=8);
        let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-30i64..=30)).collect();
        let f = IntPolynomial::from_i64(&coeffs);
        let p = primes[rng.gen_range(0..primes.len())];
        let fp = f.reduce_mod(p);
        if fp.is_zero() {
            continue;
        }
        let factors = factor_mod_p_seeded(&f, p, rng.gen()).map_err(|e| format!("{f} mod {p}: {e}"))?;
        let degree: usize = factors.iter().map(|(g, e)| g.degree().unwrap() * e).sum();
        ensure!(degree == fp.degree().unwrap(), "{f} mod {p}: degrees sum to {degree}");
        let mut prod = ModPPolynomial::one(p);
        for (g, e) in &factors {
            ensure!(g.degree().unwrap() >= 1 && g.coeffs().last() == Some(&1), "{f} mod {p}: factor {g} not monic");
            for _ in 0..*e {
                prod = prod.mul(g);
            }
        }
        ensure!(prod == fp.monic(), "{f} mod {p}: product {prod} != {}", fp.monic());
        done += 1;
    }
    Ok(format!("{done} random (f, p)"))
}

pub fn elliptic_end_to_end(bound: u64) -> Check {
    let rec = load_forms(&elliptic_record(bound)).map_err(|e| e.to_string())?.remove(0);
    let analysis = analyze_form(&rec).map_err(|e| e.to_string())?;
    let oracle: BTreeSet<u64> =
        primes_below(bound).into_iter().filter(|&p| p != 11 && elliptic_ap(p) % p as i64 == 0).collect();
    let found: BTreeSet<u64> = analysis.summary.exceptional_primes.iter().copied().collect();
    ensure!(found == oracle, "non-ordinary {found:?} != oracle {oracle:?}");
    for p in primes_below(bound) {
        let a = elliptic_ap(p);
        ensure!((a * a) as f64 <= 4.0 * p as f64, "Weil bound fails at p = {p}: a_p = {a}");
    }
    let mut analyzed = 0;
    for r in &analysis.reports {
        if r.p == 11 {
            ensure!(r.status == PrimeStatus::SkippedLevel, "p = 11 not skipped");
            continue;
        }
        ensure!(r.status.is_counted(), "p = {} has status {:?}", r.p, r.status);
        ensure!(r.weil_ok == Some(true), "weil_ok false at {}", r.p);
        let (h, n) = (r.hodge.as_ref().unwrap(), r.newton.as_ref().unwrap());
        ensure!(h.leq(n), "Hodge !<= Newton at {}", r.p);
        ensure!(!r.ordinary || h == n, "ordinary but Newton != Hodge at {}", r.p);
        analyzed += 1;
    }
    Ok(format!("{analyzed} analyzed primes, non-ordinary {:?}", oracle.iter().take(6).collect::<Vec<_>>()))
}

type Expected = (GuaranteeCase, Rational, DensityClass, &'static [Assumption]);

pub fn classifier_fixtures() -> Check {
    use DensityClass::*;
    use GuaranteeCase::*;
    let forms = load_forms_file(&fixture("classifier_scenarios.json")).map_err(|e| e.to_string())?;
    let expected: Vec<(&str, Expected)> = vec![
        ("cm_form", (CmOrdinary, rational(0, 1), PrincipallyAbundant, &[])),
        ("klein_quartic_rst", (BisectionRst, rational(0, 1), ConditionalAbundant, &[Assumption::Rst])),
        ("klein_quartic_plain", (HalfBoundOnly, rational(2, 1), PrincipallyAbundant, &[])),
        ("cyclic_cubic_self", (HalfBoundOnly, rational(3, 2), PrincipallyAbundant, &[])),
        ("dihedral_full", (ZeroSlope, rational(0, 1), Abundant, &[])),
        ("dihedral_klein_image_rst", (BisectionRst, rational(0, 1), ConditionalAbundant, &[Assumption::Rst])),
        ("dihedral_klein_image_t1", (RstBound, rational(1, 1), ConditionalAbundant, &[Assumption::Tst(1)])),
    ];
    ensure!(forms.len() == expected.len(), "fixture has {} forms", forms.len());
    for (form, (label, (case, bound, density, cond))) in forms.iter().zip(&expected) {
        ensure!(form.label == *label, "fixture order: {} != {label}", form.label);
        let g = guarantee(form);
        let cond: BTreeSet<Assumption> = cond.iter().copied().collect();
        ensure!(
            g.case == *case && g.bound_on_kp == *bound && g.density_class == *density && g.conditional_on == cond,
            "{label}: got {g}"
        );
    }
    Ok(format!("{} scenarios", forms.len()))
}
