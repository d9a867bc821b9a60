use thiserror::Error;

use crate::anti::ConditionReport;
use crate::drazin::Residuals;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch ({left_rows}x{left_cols} vs {right_rows}x{right_cols})")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("{op}: expected a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("{op}: empty matrix")]
    Empty { op: &'static str },

    #[error("matrix has {expected} entries by shape but {actual} were supplied")]
    EntryCount { expected: usize, actual: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid tolerance {name} = {value}: must lie in (0, 1)")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("{op}: decomposition failed: {detail}")]
    Decomposition { op: &'static str, detail: String },

    #[error("{op}: matrix is singular")]
    Singular { op: &'static str },

    #[error("{op}: numerically unstable: {detail}")]
    NumericInstability { op: &'static str, detail: String },

    #[error(
        "{context}: g-Drazin verification failed (|BAB-B| = {:.3e}, |AB-BA| = {:.3e}, |(A-A^2B)^n| = {:.3e})",
        residuals.reflexive,
        residuals.commutator,
        residuals.nilpotent
    )]
    Verification {
        context: &'static str,
        residuals: Residuals,
    },

    #[error("{context}: hypotheses do not hold ({})", describe_reports(reports))]
    ConditionViolation {
        context: &'static str,
        reports: Vec<ConditionReport>,
    },

    #[error("{op}: {detail}")]
    InvalidArgument { op: &'static str, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn describe_reports(reports: &[ConditionReport]) -> String {
    reports
        .iter()
        .map(|r| {
            format!(
                "{}: defect {:.3e} vs threshold {:.3e}",
                r.condition_name, r.defect_norm, r.threshold
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}
