//! JSON framework documents.
//!
//! ```json
//! {
//!   "topic": "A",
//!   "arguments": [ { "id": "A", "content": "...", "base_score": 0.5 } ],
//!   "attacks": [ ["D", "A"] ],
//!   "supports": [ ["B", "A"] ]
//! }
//! ```
//!
//! `description`, `topic`, `content`, `attacks` and `supports` are optional.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{build_qbaf, ArgumentId, ArgumentSpec, Qbaf};
use crate::reference::REFERENCE_KIND;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArgumentEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub content: Option<String>,
    pub base_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QbafDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topic: Option<String>,
    pub arguments: Vec<ArgumentEntry>,
    #[serde(default)]
    pub attacks: Vec<(String, String)>,
    #[serde(default)]
    pub supports: Vec<(String, String)>,
}

fn syntax(err: serde_json::Error) -> Error {
    Error::Syntax {
        location: format!("line {}, column {}", err.line(), err.column()),
        message: err.to_string(),
    }
}

impl QbafDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(syntax)?;
        if value.get("kind").and_then(|k| k.as_str()) == Some(REFERENCE_KIND) {
            return Err(Error::NotEvaluable);
        }
        serde_json::from_str(text).map_err(syntax)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("documents serialize");
        text.push('\n');
        text
    }

    pub fn from_qbaf(q: &Qbaf, topic: Option<&str>) -> Self {
        let arguments = q
            .argument_specs()
            .into_iter()
            .map(|spec| ArgumentEntry {
                id: spec.id,
                content: spec.content,
                base_score: spec.base_score,
            })
            .collect();
        let pairs = |edges: Vec<(&ArgumentId, &ArgumentId)>| {
            edges
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect()
        };
        QbafDocument {
            description: None,
            topic: topic.map(str::to_owned),
            arguments,
            attacks: pairs(q.attacks()),
            supports: pairs(q.supports()),
        }
    }

    /// Builds the framework; validation errors carry the offending field.
    pub fn to_qbaf(&self) -> Result<Qbaf> {
        let specs = self.arguments.iter().map(|a| ArgumentSpec {
            id: a.id.clone(),
            content: a.content.clone(),
            base_score: a.base_score,
        });
        let q = build_qbaf(specs, self.attacks.clone(), self.supports.clone())
            .map_err(|err| self.locate(err))?;
        if let Some(topic) = &self.topic {
            if !q.contains(topic) {
                return Err(Error::Positioned {
                    location: "topic".into(),
                    source: Box::new(Error::UnknownArgument(ArgumentId::new(topic.as_str())?)),
                });
            }
        }
        Ok(q)
    }

    fn argument_position(&self, id: &str, occurrence: usize) -> Option<usize> {
        self.arguments
            .iter()
            .enumerate()
            .filter(|(_, a)| a.id == id)
            .nth(occurrence)
            .map(|(i, _)| i)
    }

    fn edge_position(&self, from: &str, to: &str) -> Option<String> {
        let find = |list: &[(String, String)], name: &str| {
            list.iter()
                .position(|(a, b)| a == from && b == to)
                .map(|i| format!("{name}[{i}]"))
        };
        find(&self.attacks, "attacks").or_else(|| find(&self.supports, "supports"))
    }

    fn locate(&self, err: Error) -> Error {
        let location = match &err {
            Error::InvalidArgumentId(id) => self
                .argument_position(id, 0)
                .map(|i| format!("arguments[{i}].id")),
            Error::DuplicateArgument(id) => self
                .argument_position(id.as_str(), 1)
                .map(|i| format!("arguments[{i}].id")),
            Error::BaseScoreOutOfRange { argument, .. } => self
                .argument_position(argument.as_str(), 0)
                .map(|i| format!("arguments[{i}].base_score")),
            Error::UnknownEndpoint { from, to, .. } => {
                self.edge_position(from.as_str(), to.as_str())
            }
            Error::OverlappingRelations { from, to } => self
                .supports
                .iter()
                .position(|(a, b)| from == a.as_str() && to == b.as_str())
                .map(|i| format!("supports[{i}]")),
            Error::CycleDetected(cycle) => {
                let next = cycle.get(1).unwrap_or(&cycle[0]);
                self.edge_position(cycle[0].as_str(), next.as_str())
            }
            _ => None,
        };
        match location {
            Some(location) => Error::Positioned {
                location,
                source: Box::new(err),
            },
            None => err,
        }
    }
}

/// Parses and validates a framework document.
pub fn parse_qbaf(text: &str) -> Result<Qbaf> {
    QbafDocument::from_json(text)?.to_qbaf()
}

/// Canonical document text for `q`.
pub fn serialize_qbaf(q: &Qbaf, topic: Option<&str>) -> String {
    QbafDocument::from_qbaf(q, topic).to_json()
}
