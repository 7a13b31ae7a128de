//! DF-QuAD gradual semantics.
//!
//! Each argument's strength is computed once, in topological order, from
//! the strengths of its attackers and supporters.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::framework::{ArgumentId, Qbaf};

/// Aggregated attacker strength `v_a`, supporter strength `v_s` and the
/// resulting strength of one argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeEvaluation {
    pub v_a: f64,
    pub v_s: f64,
    pub sigma: f64,
}

impl NodeEvaluation {
    /// `dσ/dτ` of this argument: `1 - |v_a - v_s|`.
    pub fn base_sensitivity(&self) -> f64 {
        base_sensitivity(self)
    }
}

/// Result of evaluating every argument of one framework.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthAssignment {
    nodes: Vec<NodeEvaluation>,
    order: Vec<usize>,
    ids: Vec<ArgumentId>,
}

impl StrengthAssignment {
    pub fn get(&self, id: &str) -> Option<&NodeEvaluation> {
        self.ids
            .binary_search_by(|probe| probe.as_str().cmp(id))
            .ok()
            .map(|i| &self.nodes[i])
    }

    pub fn sigma(&self, id: &str) -> Option<f64> {
        self.get(id).map(|n| n.sigma)
    }

    pub(crate) fn at(&self, index: usize) -> &NodeEvaluation {
        &self.nodes[index]
    }

    pub(crate) fn sigma_at(&self, index: usize) -> f64 {
        self.nodes[index].sigma
    }

    /// Evaluations indexed like [`Qbaf::ids`].
    pub fn nodes(&self) -> &[NodeEvaluation] {
        &self.nodes
    }

    /// The topological order the evaluation followed.
    pub fn order(&self) -> impl Iterator<Item = &ArgumentId> + '_ {
        self.order.iter().map(|&i| &self.ids[i])
    }

    /// `(id, evaluation)` pairs in id order.
    pub fn iter(&self) -> impl Iterator<Item = (&ArgumentId, &NodeEvaluation)> + '_ {
        self.ids.iter().zip(self.nodes.iter())
    }
}

/// `1 - ∏(1 - s)` over the given strengths; `0` for no strengths.
pub fn aggregate(parent_strengths: &[f64]) -> Result<f64> {
    for &s in parent_strengths {
        check_unit(s)?;
    }
    Ok(aggregate_unchecked(parent_strengths.iter().copied()))
}

pub(crate) fn aggregate_unchecked(strengths: impl Iterator<Item = f64>) -> f64 {
    1.0 - strengths.fold(1.0, |acc, s| acc * (1.0 - s))
}

/// The DF-QuAD combination of a base score with aggregated attack and
/// support. Balanced aggregates (`v_a == v_s`) take the attack branch; both
/// branches evaluate to `tau` there.
pub fn influence(tau: f64, v_a: f64, v_s: f64) -> Result<f64> {
    check_unit(tau)?;
    check_unit(v_a)?;
    check_unit(v_s)?;
    Ok(influence_unchecked(tau, v_a, v_s))
}

pub(crate) fn influence_unchecked(tau: f64, v_a: f64, v_s: f64) -> f64 {
    if v_a >= v_s {
        tau - tau * (v_a - v_s)
    } else {
        tau + (1.0 - tau) * (v_s - v_a)
    }
}

pub fn base_sensitivity(eval: &NodeEvaluation) -> f64 {
    1.0 - (eval.v_a - eval.v_s).abs()
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InputOutOfRange(x))
    }
}

/// Recomputes one argument from the stored strengths of its parents.
pub(crate) fn evaluate_node(q: &Qbaf, sigma: &[f64], index: usize) -> NodeEvaluation {
    let v_a = aggregate_unchecked(q.attackers_of(index).iter().map(|&p| sigma[p]));
    let v_s = aggregate_unchecked(q.supporters_of(index).iter().map(|&p| sigma[p]));
    let sigma = influence_unchecked(q.base_scores()[index], v_a, v_s);
    NodeEvaluation { v_a, v_s, sigma }
}

/// Evaluates every argument. Prefer [`Qbaf::strengths`], which caches.
pub fn evaluate_strengths(q: &Qbaf) -> StrengthAssignment {
    let n = q.len();
    let mut sigma = vec![0.0; n];
    let mut nodes = vec![
        NodeEvaluation {
            v_a: 0.0,
            v_s: 0.0,
            sigma: 0.0
        };
        n
    ];
    for &i in q.order_indices() {
        let node = evaluate_node(q, &sigma, i);
        sigma[i] = node.sigma;
        nodes[i] = node;
    }
    StrengthAssignment {
        nodes,
        order: q.order_indices().to_vec(),
        ids: q.ids().to_vec(),
    }
}
