//! Eigenform ingestion, per-prime analysis and guarantee classification.

mod analyze;
mod guarantee;
mod record;
mod report;

pub use analyze::{analyze_form, analyze_forms, FormAnalysis, PrimeReport, PrimeStatus, Summary, DENSITY_NOTE};
pub use guarantee::{guarantee, Branch, DensityClass, Guarantee, GuaranteeCase};
pub use record::{forms_to_json, load_forms, load_forms_file, Assumption, Eigenvalue, FormRecord};
pub use report::{emit_report, load_report, ReportFormat, TSV_HEADER};

use crate::numberfield::NumberFieldError;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("{0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("record {record}: field {field}: {detail}")]
    Schema { record: String, field: String, detail: String },
    #[error("record {record}: p = {p}: {source}")]
    NumberField { record: String, p: u64, source: NumberFieldError },
}
