//! TSV and JSON serialization of analyses.

use std::fmt::Write as _;
use std::str::FromStr;

use super::analyze::FormAnalysis;
use super::PipelineError;

pub const TSV_HEADER: &str = "label\tp\tstatus\tk_p\tordinary\tnewton_vertices\thalf_bound";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Tsv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "tsv" => Ok(ReportFormat::Tsv),
            other => Err(format!("unknown format '{other}' (expected json or tsv)")),
        }
    }
}

fn sorted(analyses: &[FormAnalysis]) -> Vec<FormAnalysis> {
    let mut out = analyses.to_vec();
    out.sort_by(|a, b| a.label.cmp(&b.label));
    for a in &mut out {
        a.reports.sort_by_key(|r| r.p);
    }
    out
}

pub fn emit_report(analyses: &[FormAnalysis], format: ReportFormat) -> String {
    let analyses = sorted(analyses);
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&analyses).expect("analysis serializes");
            s.push('\n');
            s
        }
        ReportFormat::Tsv => {
            let mut s = String::from(TSV_HEADER);
            s.push('\n');
            for a in &analyses {
                for r in &a.reports {
                    let k_p = r.k_p.map_or("-".to_string(), |k| k.to_string());
                    let newton = r.newton.as_ref().map_or("-".to_string(), |n| n.vertices().to_string());
                    let half = r.half_bound.map_or("-".to_string(), |h| h.to_string());
                    writeln!(s, "{}\t{}\t{}\t{}\t{}\t{}\t{}", a.label, r.p, r.status.as_str(), k_p, r.ordinary, newton, half)
                        .expect("writing to a String");
                }
            }
            s
        }
    }
}

/// Read back a JSON report.
pub fn load_report(json: &str) -> Result<Vec<FormAnalysis>, PipelineError> {
    serde_json::from_str(json).map_err(|e| PipelineError::Parse(e.to_string()))
}
