//! Reference attribution tables: published attribution values for a
//! framework whose edges are not available. They can be loaded, sorted and
//! queried, never evaluated.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const REFERENCE_KIND: &str = "reference-table";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceRow {
    pub index: String,
    pub aae: f64,
    pub base_score: f64,
    pub strength: f64,
    #[serde(default)]
    pub content: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceTable {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub topic: String,
    pub topic_strength: f64,
    pub rows: Vec<ReferenceRow>,
}

impl ReferenceTable {
    pub fn from_json(text: &str) -> Result<Self> {
        let table: ReferenceTable = serde_json::from_str(text).map_err(|err| Error::Syntax {
            location: format!("line {}, column {}", err.line(), err.column()),
            message: err.to_string(),
        })?;
        if table.kind != REFERENCE_KIND {
            return Err(Error::Syntax {
                location: "kind".into(),
                message: format!("expected `{REFERENCE_KIND}`, found `{}`", table.kind),
            });
        }
        Ok(table)
    }

    pub fn row(&self, index: &str) -> Option<&ReferenceRow> {
        self.rows.iter().find(|r| r.index == index)
    }

    /// Rows by attribution, largest first; equal values keep file order.
    pub fn sorted_by_aae(&self) -> Vec<&ReferenceRow> {
        let mut rows: Vec<&ReferenceRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| b.aae.partial_cmp(&a.aae).unwrap_or(Ordering::Equal));
        rows
    }

    pub fn positive_count(&self) -> usize {
        self.rows.iter().filter(|r| r.aae > 0.0).count()
    }

    pub fn negative_count(&self) -> usize {
        self.rows.iter().filter(|r| r.aae < 0.0).count()
    }
}
