//! Classification of a form into the strongest available bound on `k(p)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::record::{Assumption, FormRecord};
use crate::galois::{interact_rules, InteractFact, InteractMetadata};
use crate::numberfield::MotivicWeight;
use crate::polygon::{rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GuaranteeCase {
    #[serde(rename = "CM_ordinary")]
    CmOrdinary,
    SmallFrobeniusField,
    ZeroSlope,
    SlopeBound,
    #[serde(rename = "RSTBound")]
    RstBound,
    #[serde(rename = "BisectionRST")]
    BisectionRst,
    HalfBoundOnly,
    Weight3Bound,
}

impl fmt::Display for GuaranteeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string tag"))
    }
}

/// Ordered from strongest to weakest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityClass {
    PrincipallyAbundant,
    Abundant,
    ConditionalAbundant,
    None,
}

impl fmt::Display for DensityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DensityClass::PrincipallyAbundant => "principally_abundant",
            DensityClass::Abundant => "abundant",
            DensityClass::ConditionalAbundant => "conditional_abundant",
            DensityClass::None => "none",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guarantee {
    pub case: GuaranteeCase,
    #[serde(with = "rational_str")]
    pub bound_on_kp: Rational,
    pub density_class: DensityClass,
    pub conditional_on: BTreeSet<Assumption>,
    /// Present when `k_f_circ` is unknown: the outcome for each possible
    /// value of it.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<Branch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub k_f_circ: u64,
    pub case: GuaranteeCase,
    #[serde(with = "rational_str")]
    pub bound_on_kp: Rational,
    pub density_class: DensityClass,
    pub conditional_on: BTreeSet<Assumption>,
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} k_p <= {} {}", self.case, crate::polygon::format_rational(&self.bound_on_kp), self.density_class)?;
        if !self.conditional_on.is_empty() {
            let c: Vec<String> = self.conditional_on.iter().map(ToString::to_string).collect();
            write!(f, " given {}", c.join(","))?;
        }
        Ok(())
    }
}

mod rational_str {
    use crate::polygon::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        parse_rational(&String::deserialize(d)?).map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug)]
struct Candidate {
    case: GuaranteeCase,
    bound: Rational,
    density: DensityClass,
    conditional_on: BTreeSet<Assumption>,
}

impl Candidate {
    fn new(case: GuaranteeCase, bound: Rational, density: DensityClass) -> Self {
        Candidate { case, bound, density, conditional_on: BTreeSet::new() }
    }

    fn given(mut self, a: Assumption) -> Self {
        self.conditional_on.insert(a);
        self
    }
}

fn int(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The zero-slope facts that speak about the Galois closure of `F`.
fn zero_slope_over_closure(rec: &FormRecord, meta: &InteractMetadata) -> bool {
    let mut facts = interact_rules(meta);
    // the degree rule, read over the closure when its degree is known
    let closure = meta.deg_f_tilde.or(rec.d_tilde);
    if let Some(dt) = closure {
        let lifted = InteractMetadata { deg_f: dt, ..meta.clone() };
        if interact_rules(&lifted).contains(&InteractFact::SlopeZeroOverF) {
            facts.insert(InteractFact::SlopeZeroOverFTilde);
        }
    }
    facts.contains(&InteractFact::SlopeZeroOverFTilde)
}

/// Assumption granting the `⌊(k°−1)/2⌋` bound, weakest first.
fn restricted_assumption(rec: &FormRecord) -> Option<Assumption> {
    let t = rec.assumptions.iter().filter_map(|a| if let Assumption::Tst(t) = a { Some(*t) } else { None }).min();
    if let Some(t) = t {
        return Some(Assumption::Tst(t));
    }
    [Assumption::Rst, Assumption::Sst].into_iter().find(|&a| rec.assumptions.contains(&a))
}

fn rst_assumption(rec: &FormRecord) -> Option<Assumption> {
    [Assumption::Rst, Assumption::Sst].into_iter().find(|&a| rec.assumptions.contains(&a))
}

fn candidates(rec: &FormRecord, k_f_circ: Option<u64>) -> Vec<Candidate> {
    use DensityClass::*;
    use GuaranteeCase::*;
    let k_f = rec.k_f() as u64;
    let kf = int(k_f);
    let mut out = Vec::new();
    if rec.cm {
        out.push(Candidate::new(CmOrdinary, Rational::zero(), PrincipallyAbundant));
        return out;
    }
    let action = rec.galois_action.as_ref();
    match rec.motivic_weight() {
        MotivicWeight::Two => {
            if k_f_circ.is_some_and(|c| c <= 2) {
                out.push(Candidate::new(SmallFrobeniusField, Rational::zero(), PrincipallyAbundant));
            }
            let half = rational(1, 2);
            if let Some(sigma) = action.and_then(|g| g.slope().ok()) {
                let s = sigma.clone().min(half.clone());
                let case = if sigma.is_zero() { ZeroSlope } else { SlopeBound };
                out.push(Candidate::new(case, &kf * s, Abundant));
            }
            if rec.interact.as_ref().is_some_and(|m| zero_slope_over_closure(rec, m)) {
                out.push(Candidate::new(ZeroSlope, Rational::zero(), Abundant));
            }
            if let (Some(c), Some(a)) = (k_f_circ, restricted_assumption(rec)) {
                let bound = int(k_f / c) * int((c - 1) / 2);
                out.push(Candidate::new(RstBound, bound, ConditionalAbundant).given(a));
            }
            if let (Some(c), Some(a), Some(g)) = (k_f_circ, rst_assumption(rec), action) {
                if c % 2 == 0 && g.degree() as u64 == c && g.has_bisecting().unwrap_or(false) {
                    out.push(Candidate::new(BisectionRst, Rational::zero(), ConditionalAbundant).given(a));
                }
            }
            out.push(Candidate::new(HalfBoundOnly, kf * half, PrincipallyAbundant));
        }
        MotivicWeight::Three => {
            if let Some(c) = k_f_circ {
                out.push(Candidate::new(Weight3Bound, int(k_f - k_f / c), PrincipallyAbundant));
            }
            if let Some(sp) = action.and_then(|g| g.slope_prime().ok()) {
                out.push(Candidate::new(Weight3Bound, &kf * sp, Abundant));
            }
            out.push(Candidate::new(Weight3Bound, kf, None));
        }
    }
    out
}

fn best(cands: Vec<Candidate>) -> Candidate {
    cands
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| {
            a.bound
                .cmp(&b.bound)
                .then(a.density.cmp(&b.density))
                .then(a.conditional_on.len().cmp(&b.conditional_on.len()))
                .then(i.cmp(j))
        })
        .map(|(_, c)| c)
        .expect("a fallback candidate always exists")
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// The strongest guarantee supported by the record's metadata.
pub fn guarantee(rec: &FormRecord) -> Guarantee {
    let main = best(candidates(rec, rec.k_f_circ));
    let branches = if rec.k_f_circ.is_none() && !rec.cm {
        divisors(rec.k_f() as u64)
            .into_iter()
            .map(|c| {
                let b = best(candidates(rec, Some(c)));
                Branch {
                    k_f_circ: c,
                    case: b.case,
                    bound_on_kp: b.bound,
                    density_class: b.density,
                    conditional_on: b.conditional_on,
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    Guarantee {
        case: main.case,
        bound_on_kp: main.bound,
        density_class: main.density,
        conditional_on: main.conditional_on,
        branches,
    }
}
