//! Ranked attribution reports: every argument's attribution toward a topic
//! next to the topic strength it would have with that argument's base score
//! set to zero.

use std::cmp::Ordering;

use serde::Serialize;

use crate::attribution::{aae_all, classify_influence, tie_points, InfluenceClass};
use crate::error::Result;
use crate::framework::{ArgumentId, Qbaf};
use crate::paths::{classify_indices, ConnectivityClass};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub argument: ArgumentId,
    pub content: Option<String>,
    pub base_score: f64,
    /// Topic strength after setting this argument's base score to zero.
    pub ablated_strength: f64,
    /// `ablated_strength - sigma(topic)`.
    pub delta: f64,
    pub aae: f64,
    pub influence: InfluenceClass,
    pub connectivity: ConnectivityClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttributionReport {
    pub topic: ArgumentId,
    pub topic_strength: f64,
    /// Sorted by `aae` descending (compared at [`RANKING_DECIMALS`]), ties
    /// by argument id.
    pub rows: Vec<ReportRow>,
    /// Arguments whose aggregates are tied, where a one-sided derivative was
    /// used.
    pub tie_points: Vec<ArgumentId>,
}

/// Attributions that agree to this many decimals rank as equal, so that
/// rounding noise between analytically equal values cannot reorder rows.
pub const RANKING_DECIMALS: i32 = 12;

fn ranking_key(aae: f64) -> f64 {
    (aae * 10f64.powi(RANKING_DECIMALS)).round()
}

/// Descending attribution, ascending id on equal values.
pub(crate) fn ranking_order(a: (&ArgumentId, f64), b: (&ArgumentId, f64)) -> Ordering {
    ranking_key(b.1)
        .total_cmp(&ranking_key(a.1))
        .then_with(|| a.0.cmp(b.0))
}

/// Builds the ranked report for `topic`. Each ablated strength comes from
/// a full re-evaluation.
pub fn attribution_report(q: &Qbaf, topic: &str) -> Result<AttributionReport> {
    let t = q.require(topic)?;
    let attributions = aae_all(q, topic)?;
    let topic_strength = q.strengths().sigma_at(t);
    let mut rows = Vec::with_capacity(q.len().saturating_sub(1));
    for i in (0..q.len()).filter(|&i| i != t) {
        let ablated_strength = q.with_base_score_at(i, 0.0)?.strengths().sigma_at(t);
        let aae = attributions.value_at(i);
        rows.push(ReportRow {
            argument: q.id(i).clone(),
            content: q.content_at(i).map(str::to_owned),
            base_score: q.base_scores()[i],
            ablated_strength,
            delta: ablated_strength - topic_strength,
            aae,
            influence: classify_influence(aae),
            connectivity: classify_indices(q, i, t),
        });
    }
    rows.sort_by(|a, b| ranking_order((&a.argument, a.aae), (&b.argument, b.aae)));
    Ok(AttributionReport {
        topic: q.id(t).clone(),
        topic_strength,
        rows,
        tie_points: tie_points(q).into_iter().cloned().collect(),
    })
}
