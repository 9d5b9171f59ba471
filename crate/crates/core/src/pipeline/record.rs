//! Eigenform records: JSON schema, validation and serialization.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::PipelineError;
use crate::galois::{InteractMetadata, PermGroupAction};
use crate::numberfield::{FieldElement, IntPolynomial, MotivicWeight};
use crate::util::{bigint_from_json, is_prime_u64};

/// Equidistribution hypotheses a record may be assumed to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assumption {
    Rst,
    Sst,
    /// `t`-variate equidistribution.
    Tst(u32),
}

impl Assumption {
    /// The full hypothesis implies the restricted and all `t`-variate ones.
    pub fn implies(self, other: Assumption) -> bool {
        self == other || self == Assumption::Sst
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assumption::Rst => f.write_str("RST"),
            Assumption::Sst => f.write_str("SST"),
            Assumption::Tst(t) => write!(f, "tST({t})"),
        }
    }
}

impl FromStr for Assumption {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "RST" => return Ok(Assumption::Rst),
            "SST" => return Ok(Assumption::Sst),
            _ => {}
        }
        let t = s
            .strip_prefix("tST(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|n| n.trim().parse::<u32>().ok())
            .filter(|&t| t >= 1)
            .ok_or_else(|| format!("unknown assumption '{s}' (expected RST, SST or tST(t))"))?;
        Ok(Assumption::Tst(t))
    }
}

impl Serialize for Assumption {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Assumption {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// One Hecke eigenvalue `a_p`, as coordinates in the power basis of `K_f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub p: u64,
    #[serde(rename = "split_in_F")]
    pub split_in_f: bool,
    #[serde(rename = "a")]
    pub a_p: FieldElement,
}

/// A validated eigenform record.
#[derive(Clone, Debug)]
pub struct FormRecord {
    pub label: String,
    pub d: u32,
    pub field_poly: IntPolynomial,
    pub d_tilde: Option<u64>,
    pub level_norm: u64,
    pub weight: Vec<u32>,
    pub hecke_poly: IntPolynomial,
    pub cm: bool,
    pub k_f_circ: Option<u64>,
    pub assumptions: BTreeSet<Assumption>,
    pub galois_gens: Option<String>,
    pub galois_action: Option<PermGroupAction>,
    pub interact: Option<InteractMetadata>,
    pub eigenvalues: Vec<Eigenvalue>,
}

impl FormRecord {
    pub fn k_f(&self) -> usize {
        self.hecke_poly.degree().unwrap_or(0)
    }

    pub fn motivic_weight(&self) -> MotivicWeight {
        MotivicWeight::from_weight(self.weight[0] as i64).expect("validated weight")
    }

    pub fn has(&self, a: Assumption) -> bool {
        self.assumptions.iter().any(|&x| x.implies(a))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(RawForm::from(self)).expect("record serializes")
    }
}

/// The on-disk shape of a record, before validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawForm {
    label: String,
    d: u32,
    field_poly: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d_tilde: Option<u64>,
    level_norm: u64,
    weight: Vec<u32>,
    hecke_poly: Vec<Value>,
    cm: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k_f_circ: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    assumptions: Vec<Assumption>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    galois_gens: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    galois_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    interact: Option<InteractMetadata>,
    ap: Vec<Eigenvalue>,
}

fn poly_to_json(f: &IntPolynomial) -> Vec<Value> {
    f.coeffs()
        .iter()
        .map(|c| match c.to_i64() {
            Some(v) => Value::from(v),
            None => Value::from(c.to_string()),
        })
        .collect()
}

impl From<&FormRecord> for RawForm {
    fn from(r: &FormRecord) -> Self {
        RawForm {
            label: r.label.clone(),
            d: r.d,
            field_poly: poly_to_json(&r.field_poly),
            d_tilde: r.d_tilde,
            level_norm: r.level_norm,
            weight: r.weight.clone(),
            hecke_poly: poly_to_json(&r.hecke_poly),
            cm: r.cm,
            k_f_circ: r.k_f_circ,
            assumptions: r.assumptions.iter().copied().collect(),
            galois_gens: r.galois_gens.as_ref().map(|g| g.split(';').map(|s| s.trim().to_string()).collect()),
            galois_degree: r.galois_action.as_ref().map(PermGroupAction::degree),
            interact: r.interact.clone(),
            ap: r.eigenvalues.clone(),
        }
    }
}

struct Ctx<'a> {
    record: &'a str,
}

impl Ctx<'_> {
    fn err(&self, field: &str, detail: impl Into<String>) -> PipelineError {
        PipelineError::Schema { record: self.record.to_string(), field: field.to_string(), detail: detail.into() }
    }
}

fn parse_poly(ctx: &Ctx, field: &str, coeffs: &[Value]) -> Result<IntPolynomial, PipelineError> {
    let c: Vec<BigInt> = coeffs.iter().map(bigint_from_json).collect::<Result<_, _>>().map_err(|e| ctx.err(field, e))?;
    let f = IntPolynomial::new(c);
    match f.degree() {
        Some(n) if n >= 1 => Ok(f),
        _ => Err(ctx.err(field, "polynomial must have degree >= 1")),
    }
}

impl RawForm {
    fn validate(self, index: usize) -> Result<FormRecord, PipelineError> {
        let name = if self.label.is_empty() { format!("#{index}") } else { self.label.clone() };
        let ctx = Ctx { record: &name };
        if self.d == 0 {
            return Err(ctx.err("d", "must be >= 1"));
        }
        let field_poly = parse_poly(&ctx, "field_poly", &self.field_poly)?;
        if field_poly.degree() != Some(self.d as usize) {
            return Err(ctx.err("field_poly", format!("degree {} but d = {}", field_poly.degree().unwrap_or(0), self.d)));
        }
        if let Some(dt) = self.d_tilde {
            if dt == 0 || dt % self.d as u64 != 0 {
                return Err(ctx.err("d_tilde", format!("{dt} is not a multiple of d = {}", self.d)));
            }
        }
        if self.level_norm == 0 {
            return Err(ctx.err("level_norm", "must be >= 1"));
        }
        if self.weight.len() != self.d as usize {
            return Err(ctx.err("weight", format!("expected {} entries, got {}", self.d, self.weight.len())));
        }
        let w0 = self.weight[0];
        if !(w0 == 2 || w0 == 3) || self.weight.iter().any(|&w| w != w0) {
            return Err(ctx.err("weight", "entries must all equal 2 or all equal 3"));
        }
        let hecke_poly = parse_poly(&ctx, "hecke_poly", &self.hecke_poly)?;
        if !hecke_poly.is_monic() {
            return Err(ctx.err("hecke_poly", "must be monic"));
        }
        let k_f = hecke_poly.degree().unwrap();
        if let Some(c) = self.k_f_circ {
            if c == 0 || !(k_f as u64).is_multiple_of(c) {
                return Err(ctx.err("k_f_circ", format!("{c} does not divide k_f = {k_f}")));
            }
        }
        let (galois_gens, galois_action) = match self.galois_gens {
            None => {
                if self.galois_degree.is_some() {
                    return Err(ctx.err("galois_degree", "given without galois_gens"));
                }
                (None, None)
            }
            Some(gens) => {
                let n = self.galois_degree.unwrap_or(k_f);
                let consistent = n == k_f || self.k_f_circ.map_or(n > 0 && k_f % n == 0, |c| n as u64 == c);
                if !consistent {
                    return Err(ctx.err("galois_degree", format!("{n} matches neither k_f nor k_f_circ")));
                }
                let joined = gens.join(";");
                let g = PermGroupAction::parse(&joined, n).map_err(|e| ctx.err("galois_gens", e.to_string()))?;
                (Some(joined), Some(g))
            }
        };
        if let Some(meta) = &self.interact {
            if meta.deg_k != 0 && meta.deg_k != k_f as u64 {
                return Err(ctx.err("interact.deg_k", format!("{} but k_f = {k_f}", meta.deg_k)));
            }
            if meta.deg_f != 0 && meta.deg_f != self.d as u64 {
                return Err(ctx.err("interact.deg_f", format!("{} but d = {}", meta.deg_f, self.d)));
            }
        }
        let mut seen = HashSet::new();
        for e in &self.ap {
            let field = format!("ap[p={}]", e.p);
            if !is_prime_u64(e.p) || e.p >= 1 << 32 {
                return Err(ctx.err(&field, "p must be a prime below 2^32"));
            }
            if !seen.insert(e.p) {
                return Err(ctx.err(&field, "duplicate prime"));
            }
            if e.a_p.len() != k_f {
                return Err(ctx.err(&field, format!("a has {} coordinates, k_f = {k_f}", e.a_p.len())));
            }
        }
        Ok(FormRecord {
            label: self.label,
            d: self.d,
            field_poly,
            d_tilde: self.d_tilde,
            level_norm: self.level_norm,
            weight: self.weight,
            hecke_poly,
            cm: self.cm,
            k_f_circ: self.k_f_circ,
            assumptions: self.assumptions.into_iter().collect(),
            galois_gens,
            galois_action,
            interact: self.interact,
            eigenvalues: self.ap,
        })
    }
}

/// Parse and validate a JSON array of form records (a single object is also
/// accepted). Order is preserved.
pub fn load_forms(json: &str) -> Result<Vec<FormRecord>, PipelineError> {
    let value: Value = serde_json::from_str(json).map_err(|e| PipelineError::Parse(e.to_string()))?;
    let items = match value {
        Value::Array(items) => items,
        obj @ Value::Object(_) => vec![obj],
        _ => return Err(PipelineError::Parse("expected an array of form objects".into())),
    };
    items
        .into_iter()
        .enumerate()
        .map(|(i, item)| {
            let label = item.get("label").and_then(Value::as_str).map_or_else(|| format!("#{i}"), str::to_string);
            let raw: RawForm = serde_json::from_value(item)
                .map_err(|e| PipelineError::Schema { record: label, field: "-".into(), detail: e.to_string() })?;
            raw.validate(i)
        })
        .collect()
}

pub fn load_forms_file(path: &std::path::Path) -> Result<Vec<FormRecord>, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))?;
    load_forms(&text)
}

pub fn forms_to_json(forms: &[FormRecord]) -> String {
    let arr: Vec<Value> = forms.iter().map(FormRecord::to_json).collect();
    serde_json::to_string_pretty(&arr).expect("records serialize")
}
