//! Per-prime Newton polygon analysis of a form.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::record::{Eigenvalue, FormRecord};
use super::PipelineError;
use crate::numberfield::{
    half_bound_check, k_of_p_with, splitting_type, Embeddings, HalfBound, MotivicWeight, NumberFieldError,
};
use crate::polygon::{p_family, p_prime_family, SlopeMultiset};

pub const DENSITY_NOTE: &str =
    "plain ratio over analyzed primes up to prime_bound; estimates a natural density only as the bound grows";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeStatus {
    Analyzed,
    SkippedRamified,
    SkippedIndex,
    SkippedNonsplit,
    /// `p` divides the level norm.
    SkippedLevel,
    /// `a_p = 0`: every prime over `p` contains it.
    DegenerateApZero,
}

impl PrimeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PrimeStatus::Analyzed => "analyzed",
            PrimeStatus::SkippedRamified => "skipped_ramified",
            PrimeStatus::SkippedIndex => "skipped_index",
            PrimeStatus::SkippedNonsplit => "skipped_nonsplit",
            PrimeStatus::SkippedLevel => "skipped_level",
            PrimeStatus::DegenerateApZero => "degenerate_ap_zero",
        }
    }

    /// Whether the prime enters the summary statistics.
    pub fn is_counted(self) -> bool {
        matches!(self, PrimeStatus::Analyzed | PrimeStatus::DegenerateApZero)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub p: u64,
    pub status: PrimeStatus,
    pub k_p: Option<usize>,
    pub newton: Option<SlopeMultiset>,
    pub hodge: Option<SlopeMultiset>,
    pub ordinary: bool,
    pub weil_ok: Option<bool>,
    pub half_bound: Option<HalfBound>,
}

impl PrimeReport {
    fn skipped(p: u64, status: PrimeStatus) -> Self {
        PrimeReport { p, status, k_p: None, newton: None, hodge: None, ordinary: false, weil_ok: None, half_bound: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n_analyzed: usize,
    pub n_ordinary: usize,
    pub empirical_ordinary_density: Option<f64>,
    /// Analyzed primes that are not ordinary.
    pub exceptional_primes: Vec<u64>,
    pub kp_histogram: BTreeMap<usize, usize>,
    /// Largest analyzed prime.
    pub prime_bound: Option<u64>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormAnalysis {
    pub label: String,
    pub reports: Vec<PrimeReport>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

struct Polygons {
    d: i64,
    k_f: i64,
    weight: MotivicWeight,
    cache: std::sync::Mutex<HashMap<i64, SlopeMultiset>>,
}

impl Polygons {
    fn get(&self, i: i64) -> SlopeMultiset {
        if let Some(m) = self.cache.lock().unwrap().get(&i) {
            return m.clone();
        }
        let m = match self.weight {
            MotivicWeight::Two => p_family(self.d, self.k_f, i),
            MotivicWeight::Three => p_prime_family(self.d, self.k_f, i),
        }
        .expect("k_p lies in [0, k_f]");
        self.cache.lock().unwrap().insert(i, m.clone());
        m
    }
}

fn nf_err(rec: &FormRecord, p: u64, source: NumberFieldError) -> PipelineError {
    PipelineError::NumberField { record: rec.label.clone(), p, source }
}

fn ramified_status(rec: &FormRecord, p: u64) -> PrimeStatus {
    let disc_k = rec.interact.as_ref().and_then(|m| m.disc_k.as_ref());
    match disc_k {
        Some(disc) if disc.is_multiple_of(&BigInt::from(p)) => PrimeStatus::SkippedRamified,
        _ => PrimeStatus::SkippedIndex,
    }
}

/// Whether the `split_in_F` flag agrees with the factorization of the field
/// polynomial; `None` when the polynomial cannot decide (non-monic, or `p`
/// divides its discriminant).
fn split_cross_check(rec: &FormRecord, p: u64) -> Option<bool> {
    if !rec.field_poly.is_monic() {
        return None;
    }
    let s = splitting_type(&rec.field_poly, p).ok()?;
    if s.index_warning {
        return None;
    }
    Some(s.splits_completely())
}

fn analyze_prime(
    rec: &FormRecord,
    ev: &Eigenvalue,
    polys: &Polygons,
    embeddings: &Embeddings,
) -> Result<(PrimeReport, Vec<String>), PipelineError> {
    let p = ev.p;
    let mut warnings = Vec::new();
    if let Some(split) = split_cross_check(rec, p) {
        if split != ev.split_in_f {
            warnings.push(format!("p={p}: split_in_F={} disagrees with field_poly", ev.split_in_f));
        }
    }
    if !ev.split_in_f {
        return Ok((PrimeReport::skipped(p, PrimeStatus::SkippedNonsplit), warnings));
    }
    if rec.level_norm.is_multiple_of(p) {
        return Ok((PrimeReport::skipped(p, PrimeStatus::SkippedLevel), warnings));
    }
    let splitting = splitting_type(&rec.hecke_poly, p).map_err(|e| nf_err(rec, p, e))?;
    if splitting.ramified || splitting.index_warning {
        return Ok((PrimeReport::skipped(p, ramified_status(rec, p)), warnings));
    }
    let kp = k_of_p_with(&ev.a_p, &rec.hecke_poly, &splitting).map_err(|e| nf_err(rec, p, e))?;
    let k_f = rec.k_f();
    let weight = rec.motivic_weight();
    let weil = embeddings.check(&ev.a_p, p, weight);
    if !weil.passed {
        warnings.push(format!("p={p}: |a_p| = {} exceeds the bound {}", weil.max_abs, weil.bound));
    }
    let half_bound = match weight {
        MotivicWeight::Two => half_bound_check(kp.k, k_f, p),
        MotivicWeight::Three => HalfBound::NotApplicable,
    };
    if half_bound == HalfBound::Fail && !kp.zero {
        warnings.push(format!("p={p}: k_p = {} violates k_p <= k_f/2 for p > 2^(2 k_f); inconsistent data", kp.k));
    }
    let status = if kp.zero { PrimeStatus::DegenerateApZero } else { PrimeStatus::Analyzed };
    let report = PrimeReport {
        p,
        status,
        k_p: Some(kp.k),
        newton: Some(polys.get(kp.k as i64)),
        hodge: Some(polys.get(0)),
        ordinary: !kp.zero && kp.k == 0,
        weil_ok: Some(weil.passed),
        half_bound: Some(half_bound),
    };
    Ok((report, warnings))
}

fn summarize(reports: &[PrimeReport]) -> Summary {
    let counted: Vec<&PrimeReport> = reports.iter().filter(|r| r.status.is_counted()).collect();
    let n_analyzed = counted.len();
    let n_ordinary = counted.iter().filter(|r| r.ordinary).count();
    let mut kp_histogram = BTreeMap::new();
    for r in &counted {
        *kp_histogram.entry(r.k_p.unwrap_or(0)).or_insert(0) += 1;
    }
    Summary {
        n_analyzed,
        n_ordinary,
        empirical_ordinary_density: (n_analyzed > 0).then(|| n_ordinary as f64 / n_analyzed as f64),
        exceptional_primes: counted.iter().filter(|r| !r.ordinary).map(|r| r.p).collect(),
        kp_histogram,
        prime_bound: counted.iter().map(|r| r.p).max(),
        note: DENSITY_NOTE.to_string(),
    }
}

/// Analyze every eigenvalue of `rec`; reports come back sorted by `p`.
pub fn analyze_form(rec: &FormRecord) -> Result<FormAnalysis, PipelineError> {
    let polys = Polygons {
        d: rec.d as i64,
        k_f: rec.k_f() as i64,
        weight: rec.motivic_weight(),
        cache: Default::default(),
    };
    let embeddings = Embeddings::compute(&rec.hecke_poly);
    let mut evs: Vec<&Eigenvalue> = rec.eigenvalues.iter().collect();
    evs.sort_by_key(|e| e.p);
    let results: Vec<(PrimeReport, Vec<String>)> = evs
        .par_iter()
        .map(|ev| analyze_prime(rec, ev, &polys, &embeddings))
        .collect::<Result<_, _>>()?;
    let mut reports = Vec::with_capacity(results.len());
    let mut warnings = Vec::new();
    for (r, w) in results {
        reports.push(r);
        warnings.extend(w);
    }
    let summary = summarize(&reports);
    Ok(FormAnalysis { label: rec.label.clone(), reports, summary, warnings })
}

/// Analyze several forms; the output is sorted by label.
pub fn analyze_forms(recs: &[FormRecord]) -> Result<Vec<FormAnalysis>, PipelineError> {
    let mut out: Vec<FormAnalysis> = recs.par_iter().map(analyze_form).collect::<Result<_, _>>()?;
    out.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(out)
}
