//! Path enumeration and connectivity classes between two arguments.
//!
//! Enumeration is an exhaustive depth-first search pruned to nodes that can
//! still reach the target. The number of paths in a DAG can grow
//! exponentially with its size; frameworks of the size seen in practice
//! have few.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::framework::{ArgumentId, Qbaf, Relation};

/// A directed path of at least two arguments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Path {
    pub nodes: Vec<ArgumentId>,
    /// Number of arguments strictly between the endpoints.
    pub middle_count: usize,
    /// Number of consecutive pairs that are attacks.
    pub attack_count: usize,
}

impl Path {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathSet {
    pub source: ArgumentId,
    pub target: ArgumentId,
    pub paths: Vec<Path>,
}

impl PathSet {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConnectivityClass {
    Disconnected,
    Direct,
    Indirect,
    Multifold,
}

impl ConnectivityClass {
    /// Direct and indirect connectivity carry the closed-form guarantees.
    pub fn is_single_path(self) -> bool {
        matches!(
            self,
            ConnectivityClass::Direct | ConnectivityClass::Indirect
        )
    }
}

impl fmt::Display for ConnectivityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ConnectivityClass::Disconnected => "disconnected",
            ConnectivityClass::Direct => "direct",
            ConnectivityClass::Indirect => "indirect",
            ConnectivityClass::Multifold => "multifold",
        };
        f.write_str(name)
    }
}

/// `reach[i]` is true iff `i` equals `target` or has a path to it.
pub(crate) fn reaches(q: &Qbaf, target: usize) -> Vec<bool> {
    let mut reach = vec![false; q.len()];
    reach[target] = true;
    for &node in q.order_indices().iter().rev() {
        if !reach[node] && q.children_of(node).iter().any(|&(c, _)| reach[c]) {
            reach[node] = true;
        }
    }
    reach
}

pub(crate) fn enumerate_index_paths(q: &Qbaf, from: usize, to: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if from == to {
        return out;
    }
    let reach = reaches(q, to);
    if !reach[from] {
        return out;
    }
    // Explicit stack of (node, next child position).
    let mut stack: Vec<(usize, usize)> = vec![(from, 0)];
    let mut current = vec![from];
    while let Some(&mut (node, ref mut pos)) = stack.last_mut() {
        let children = q.children_of(node);
        if *pos >= children.len() {
            stack.pop();
            current.pop();
            continue;
        }
        let (child, _) = children[*pos];
        *pos += 1;
        if !reach[child] {
            continue;
        }
        if child == to {
            let mut path = current.clone();
            path.push(child);
            out.push(path);
        } else {
            stack.push((child, 0));
            current.push(child);
        }
    }
    out
}

/// Counts paths from `from` to `to`, saturating at `cap`.
pub(crate) fn count_paths(q: &Qbaf, from: usize, to: usize, cap: u64) -> u64 {
    if from == to {
        return 0;
    }
    let mut count = vec![0u64; q.len()];
    count[to] = 1;
    for &node in q.order_indices().iter().rev() {
        if node == to {
            continue;
        }
        let total = q
            .children_of(node)
            .iter()
            .fold(0u64, |acc, &(c, _)| acc.saturating_add(count[c]));
        count[node] = total.min(cap);
    }
    count[from]
}

/// All paths from `from` to `to`, ordered by depth-first traversal with
/// children visited in id order.
pub fn enumerate_paths(q: &Qbaf, from: &str, to: &str) -> Result<PathSet> {
    let (f, t) = (q.require(from)?, q.require(to)?);
    let paths = enumerate_index_paths(q, f, t)
        .into_iter()
        .map(|nodes| {
            let attack_count = nodes
                .windows(2)
                .filter(|w| q.relation_at(w[0], w[1]) == Some(Relation::Attack))
                .count();
            Path {
                middle_count: nodes.len() - 2,
                attack_count,
                nodes: nodes.into_iter().map(|i| q.id(i).clone()).collect(),
            }
        })
        .collect();
    Ok(PathSet {
        source: q.id(f).clone(),
        target: q.id(t).clone(),
        paths,
    })
}

pub(crate) fn classify_indices(q: &Qbaf, from: usize, to: usize) -> ConnectivityClass {
    match count_paths(q, from, to, 2) {
        0 => ConnectivityClass::Disconnected,
        1 => {
            if q.relation_at(from, to).is_some() {
                ConnectivityClass::Direct
            } else {
                ConnectivityClass::Indirect
            }
        }
        _ => ConnectivityClass::Multifold,
    }
}

/// Connectivity of `from` towards `to`. Counting is done by dynamic
/// programming, so this never enumerates paths.
pub fn classify_connectivity(q: &Qbaf, from: &str, to: &str) -> Result<ConnectivityClass> {
    let (f, t) = (q.require(from)?, q.require(to)?);
    Ok(classify_indices(q, f, t))
}
