//! On-disk tuple documents.
//!
//! ```json
//! {
//!   "q": 2,
//!   "p": 1,
//!   "matrices": [[0, 1, -1, 0]],
//!   "label": "heisenberg",
//!   "provenance": "nilrym catalog heisenberg"
//! }
//! ```
//!
//! `matrices` holds `p` arrays of `q·q` numbers each, row-major. `label` and
//! `provenance` are optional. Numbers are written in shortest round-trip
//! decimal form, so `parse(serialize(t))` reproduces every entry bit for bit.

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::algebra::{validate, StructureTuple, ValidationReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleDocument {
    pub q: usize,
    pub p: usize,
    pub matrices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl TupleDocument {
    pub fn from_tuple(tuple: &StructureTuple, provenance: Option<String>) -> Self {
        Self {
            q: tuple.q(),
            p: tuple.p(),
            matrices: tuple.to_row_major(),
            label: tuple.label().map(str::to_owned),
            provenance,
        }
    }

    /// Checks the schema and builds the tuple (no skewness check).
    pub fn to_tuple(&self) -> Result<StructureTuple, CliError> {
        if self.q == 0 {
            return Err(CliError::Schema("q must be at least 1".into()));
        }
        if self.p == 0 {
            return Err(CliError::Schema("p must be at least 1".into()));
        }
        if self.matrices.len() != self.p {
            return Err(CliError::Schema(format!(
                "p = {} but {} matrices are given",
                self.p,
                self.matrices.len()
            )));
        }
        for (k, m) in self.matrices.iter().enumerate() {
            if m.len() != self.q * self.q {
                return Err(CliError::Schema(format!(
                    "matrix {k} has {} entries, expected q·q = {}",
                    m.len(),
                    self.q * self.q
                )));
            }
        }
        let mut t = StructureTuple::from_row_major(self.q, &self.matrices)
            .map_err(|e| CliError::Schema(e.to_string()))?;
        t.set_label(self.label.clone());
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }
}

fn parse_error(e: serde_json::Error) -> CliError {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => CliError::Schema(e.to_string()),
        _ => CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
    }
}

/// Parses a document without validating skewness.
pub fn parse_document(text: &str) -> Result<(TupleDocument, StructureTuple), CliError> {
    let doc: TupleDocument = serde_json::from_str(text).map_err(parse_error)?;
    let tuple = doc.to_tuple()?;
    Ok((doc, tuple))
}

/// Parses and validates. A coordinate that is not skew-symmetric within
/// `skew_tol` is an error naming the matrix and entry.
pub fn parse_validated(
    text: &str,
    skew_tol: f64,
    rank_tol: f64,
) -> Result<(StructureTuple, ValidationReport), CliError> {
    let (_, tuple) = parse_document(text)?;
    let report = validate(&tuple, skew_tol, rank_tol);
    if !report.all_skew() {
        let msgs: Vec<&str> = report
            .messages
            .iter()
            .filter(|m| m.contains("not skew"))
            .map(String::as_str)
            .collect();
        return Err(CliError::Validation(msgs.join("; ")));
    }
    Ok((tuple, report))
}

pub fn serialize(tuple: &StructureTuple, provenance: Option<String>) -> String {
    TupleDocument::from_tuple(tuple, provenance).to_json()
}
