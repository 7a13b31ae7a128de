//! CSV reports and Graphviz DOT rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{Qbaf, Relation};
use crate::report::AttributionReport;

pub const REPORT_HEADER: [&str; 6] = [
    "Argument",
    "tau",
    "ablated_strength",
    "delta",
    "aae",
    "aae_full",
];

/// One parsed CSV line. `aae_full` carries the unrounded attribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    #[serde(rename = "Argument")]
    pub argument: String,
    pub tau: f64,
    pub ablated_strength: f64,
    pub delta: f64,
    pub aae: f64,
    pub aae_full: f64,
}

/// Five decimals, with negative zero printed as zero.
pub fn fixed5(value: f64) -> String {
    let text = format!("{value:.5}");
    if text.starts_with('-') && text[1..].bytes().all(|b| b == b'0' || b == b'.') {
        text[1..].to_string()
    } else {
        text
    }
}

fn full(value: f64) -> String {
    if value == 0.0 {
        "0".to_string()
    } else {
        value.to_string()
    }
}

fn csv_error(err: csv::Error) -> Error {
    let location = err
        .position()
        .map(|p| format!("line {}", p.line()))
        .unwrap_or_else(|| "report".to_string());
    Error::Syntax {
        location,
        message: err.to_string(),
    }
}

/// Report as CSV, rows in report order. Output bytes depend only on the report.
pub fn serialize_report(report: &AttributionReport) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(REPORT_HEADER).expect("in-memory write");
    for row in &report.rows {
        writer
            .write_record([
                row.argument.to_string(),
                fixed5(row.base_score),
                fixed5(row.ablated_strength),
                fixed5(row.delta),
                fixed5(row.aae),
                full(row.aae),
            ])
            .expect("in-memory write");
    }
    let bytes = writer.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

pub fn parse_report(text: &str) -> Result<Vec<ReportRecord>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(csv_error)?;
    if header.iter().ne(REPORT_HEADER) {
        return Err(Error::Syntax {
            location: "line 1".into(),
            message: format!("expected header `{}`", REPORT_HEADER.join(",")),
        });
    }
    reader
        .deserialize()
        .map(|record| record.map_err(csv_error))
        .collect()
}

fn quoted(text: &str) -> String {
    format!("\"{}\"", text.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering of `q` annotated with the report's attributions.
///
/// Framework edges are solid and labelled `+` or `-`. Each nonzero
/// attribution adds a dashed edge into the topic, blue when positive and red
/// when negative, with pen width scaled linearly from 1 to 5 by magnitude.
pub fn export_dot(q: &Qbaf, report: &AttributionReport) -> Result<String> {
    if !q.contains(report.topic.as_str()) {
        return Err(Error::TopicMismatch(report.topic.clone()));
    }
    let strengths = q.strengths();
    let mut out = String::from("digraph qbaf {\n    rankdir=BT;\n    node [shape=box];\n");
    for (id, node) in strengths.iter() {
        let label = format!("{id} ({})", fixed5(node.sigma));
        let extra = if *id == report.topic {
            ", peripheries=2"
        } else {
            ""
        };
        writeln!(
            out,
            "    {} [label={}{extra}];",
            quoted(id.as_str()),
            quoted(&label)
        )
        .unwrap();
    }
    let mut edges: Vec<_> = q
        .attacks()
        .into_iter()
        .map(|e| (e, Relation::Attack))
        .chain(q.supports().into_iter().map(|e| (e, Relation::Support)))
        .collect();
    edges.sort();
    for ((from, to), relation) in edges {
        writeln!(
            out,
            "    {} -> {} [label=\"{}\"];",
            quoted(from.as_str()),
            quoted(to.as_str()),
            relation.sign()
        )
        .unwrap();
    }
    let max = report.rows.iter().map(|r| r.aae.abs()).fold(0.0, f64::max);
    for row in report.rows.iter().filter(|r| r.aae != 0.0) {
        if !q.contains(row.argument.as_str()) {
            return Err(Error::UnknownArgument(row.argument.clone()));
        }
        let color = if row.aae > 0.0 { "blue" } else { "red" };
        let width = 1.0 + 4.0 * row.aae.abs() / max;
        writeln!(
            out,
            "    {} -> {} [style=dashed, color={color}, penwidth={width:.3}, label={}];",
            quoted(row.argument.as_str()),
            quoted(report.topic.as_str()),
            quoted(&fixed5(row.aae))
        )
        .unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
