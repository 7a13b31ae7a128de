//! Framework representation: arguments, base scores and the two disjoint
//! edge relations, validated once at construction.
//!
//! Arguments are stored in lexicographic order of their ids, so the dense
//! index of an argument doubles as its tie-break rank everywhere.

use std::borrow::Borrow;
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semantics::{evaluate_strengths, StrengthAssignment};

/// Identifier of an argument. A non-empty token without whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ArgumentId(String);

impl ArgumentId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() || id.chars().any(|c| c.is_whitespace() || c.is_control()) {
            return Err(Error::InvalidArgumentId(id));
        }
        Ok(ArgumentId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for ArgumentId {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        ArgumentId::new(value)
    }
}

impl TryFrom<&str> for ArgumentId {
    type Error = Error;

    fn try_from(value: &str) -> Result<Self> {
        ArgumentId::new(value)
    }
}

impl From<ArgumentId> for String {
    fn from(id: ArgumentId) -> String {
        id.0
    }
}

impl Borrow<str> for ArgumentId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for ArgumentId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl PartialEq<str> for ArgumentId {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for ArgumentId {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Attack,
    Support,
}

impl Relation {
    /// `-` for attacks, `+` for supports.
    pub fn sign(self) -> char {
        match self {
            Relation::Attack => '-',
            Relation::Support => '+',
        }
    }
}

/// Raw argument declaration handed to [`build_qbaf`].
#[derive(Debug, Clone, PartialEq)]
pub struct ArgumentSpec {
    pub id: String,
    pub content: Option<String>,
    pub base_score: f64,
}

impl ArgumentSpec {
    pub fn new(id: impl Into<String>, base_score: f64) -> Self {
        ArgumentSpec {
            id: id.into(),
            content: None,
            base_score,
        }
    }

    pub fn with_content(mut self, content: impl Into<String>) -> Self {
        self.content = Some(content.into());
        self
    }
}

#[derive(Debug, Clone)]
struct Structure {
    ids: Vec<ArgumentId>,
    index: HashMap<ArgumentId, usize>,
    content: Vec<Option<String>>,
    attackers: Vec<Vec<usize>>,
    supporters: Vec<Vec<usize>>,
    children: Vec<Vec<(usize, Relation)>>,
    order: Vec<usize>,
}

/// A validated, immutable, acyclic QBAF.
///
/// The structure (ids, edges, topological order) is shared between a
/// framework and every framework derived from it by changing base scores.
#[derive(Debug, Clone)]
pub struct Qbaf {
    structure: Arc<Structure>,
    base: Vec<f64>,
    strengths: OnceLock<StrengthAssignment>,
}

/// Validates the inputs and builds a framework.
///
/// Duplicate pairs inside one relation collapse (relations are sets).
pub fn build_qbaf<A, R>(arguments: A, attacks: R, supports: R) -> Result<Qbaf>
where
    A: IntoIterator<Item = ArgumentSpec>,
    R: IntoIterator<Item = (String, String)>,
{
    let mut specs: Vec<(ArgumentId, Option<String>, f64)> = Vec::new();
    for spec in arguments {
        specs.push((ArgumentId::new(spec.id)?, spec.content, spec.base_score));
    }
    specs.sort_by(|a, b| a.0.cmp(&b.0));
    if let Some(w) = specs.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::DuplicateArgument(w[0].0.clone()));
    }
    for (id, _, score) in &specs {
        if !(0.0..=1.0).contains(score) {
            return Err(Error::BaseScoreOutOfRange {
                argument: id.clone(),
                value: *score,
            });
        }
    }

    let n = specs.len();
    let mut ids = Vec::with_capacity(n);
    let mut content = Vec::with_capacity(n);
    let mut base = Vec::with_capacity(n);
    for (id, text, score) in specs {
        ids.push(id);
        content.push(text);
        base.push(score);
    }
    let index: HashMap<ArgumentId, usize> = ids
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, id)| (id, i))
        .collect();

    let resolve = |from: String, to: String| -> Result<(usize, usize)> {
        let lookup = |name: &str| -> Result<usize> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownEndpoint {
                    from: ArgumentId(from.clone()),
                    to: ArgumentId(to.clone()),
                    missing: ArgumentId(name.to_string()),
                })
        };
        Ok((lookup(&from)?, lookup(&to)?))
    };
    let mut attack_set = BTreeSet::new();
    for (from, to) in attacks {
        attack_set.insert(resolve(from, to)?);
    }
    let mut support_set = BTreeSet::new();
    for (from, to) in supports {
        support_set.insert(resolve(from, to)?);
    }
    if let Some(&(from, to)) = attack_set.intersection(&support_set).next() {
        return Err(Error::OverlappingRelations {
            from: ids[from].clone(),
            to: ids[to].clone(),
        });
    }

    let mut attackers = vec![Vec::new(); n];
    let mut supporters = vec![Vec::new(); n];
    let mut children = vec![Vec::new(); n];
    for &(from, to) in &attack_set {
        attackers[to].push(from);
        children[from].push((to, Relation::Attack));
    }
    for &(from, to) in &support_set {
        supporters[to].push(from);
        children[from].push((to, Relation::Support));
    }
    for list in attackers.iter_mut().chain(supporters.iter_mut()) {
        list.sort_unstable();
    }
    for list in children.iter_mut() {
        list.sort_unstable();
    }

    let order = kahn_order(&attackers, &supporters, &children);
    if order.len() < n {
        let cycle = find_cycle(&order, &attackers, &supporters, n);
        return Err(Error::CycleDetected(
            cycle.into_iter().map(|i| ids[i].clone()).collect(),
        ));
    }

    Ok(Qbaf {
        structure: Arc::new(Structure {
            ids,
            index,
            content,
            attackers,
            supporters,
            children,
            order,
        }),
        base,
        strengths: OnceLock::new(),
    })
}

fn kahn_order(
    attackers: &[Vec<usize>],
    supporters: &[Vec<usize>],
    children: &[Vec<(usize, Relation)>],
) -> Vec<usize> {
    let n = attackers.len();
    let mut indegree: Vec<usize> = (0..n)
        .map(|i| attackers[i].len() + supporters[i].len())
        .collect();
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(node)) = ready.pop() {
        order.push(node);
        for &(child, _) in &children[node] {
            indegree[child] -= 1;
            if indegree[child] == 0 {
                ready.push(Reverse(child));
            }
        }
    }
    order
}

/// Every node left over by Kahn's algorithm has a left-over parent, so
/// walking parents from any of them must revisit a node.
fn find_cycle(
    ordered: &[usize],
    attackers: &[Vec<usize>],
    supporters: &[Vec<usize>],
    n: usize,
) -> Vec<usize> {
    let mut done = vec![false; n];
    for &i in ordered {
        done[i] = true;
    }
    let start = (0..n)
        .find(|&i| !done[i])
        .expect("cyclic remainder is non-empty");
    let mut seen_at: HashMap<usize, usize> = HashMap::new();
    let mut walk = Vec::new();
    let mut node = start;
    while !seen_at.contains_key(&node) {
        seen_at.insert(node, walk.len());
        walk.push(node);
        node = attackers[node]
            .iter()
            .chain(supporters[node].iter())
            .copied()
            .filter(|&p| !done[p])
            .min()
            .expect("left-over node keeps a left-over parent");
    }
    // The walk follows edges backwards; reverse to get edge direction.
    let mut cycle: Vec<usize> = walk[seen_at[&node]..].to_vec();
    cycle.reverse();
    let pivot = cycle
        .iter()
        .enumerate()
        .min_by_key(|(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    cycle.rotate_left(pivot);
    cycle
}

impl Qbaf {
    pub fn builder() -> QbafBuilder {
        QbafBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.structure.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structure.ids.is_empty()
    }

    /// Argument ids in lexicographic order.
    pub fn ids(&self) -> &[ArgumentId] {
        &self.structure.ids
    }

    pub fn contains(&self, id: &str) -> bool {
        self.structure.index.contains_key(id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.structure.index.get(id).copied()
    }

    pub(crate) fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::UnknownArgument(ArgumentId(id.to_string())))
    }

    pub fn id(&self, index: usize) -> &ArgumentId {
        &self.structure.ids[index]
    }

    pub fn base_score(&self, id: &str) -> Option<f64> {
        self.index_of(id).map(|i| self.base[i])
    }

    pub fn base_scores(&self) -> &[f64] {
        &self.base
    }

    pub fn content(&self, id: &str) -> Option<&str> {
        self.index_of(id)
            .and_then(|i| self.structure.content[i].as_deref())
    }

    pub(crate) fn content_at(&self, index: usize) -> Option<&str> {
        self.structure.content[index].as_deref()
    }

    pub(crate) fn attackers_of(&self, index: usize) -> &[usize] {
        &self.structure.attackers[index]
    }

    pub(crate) fn supporters_of(&self, index: usize) -> &[usize] {
        &self.structure.supporters[index]
    }

    pub(crate) fn parents_of(&self, index: usize, relation: Relation) -> &[usize] {
        match relation {
            Relation::Attack => self.attackers_of(index),
            Relation::Support => self.supporters_of(index),
        }
    }

    pub(crate) fn has_parents(&self, index: usize) -> bool {
        !self.structure.attackers[index].is_empty() || !self.structure.supporters[index].is_empty()
    }

    /// Outgoing edges of `index`, sorted by target.
    pub(crate) fn children_of(&self, index: usize) -> &[(usize, Relation)] {
        &self.structure.children[index]
    }

    pub(crate) fn order_indices(&self) -> &[usize] {
        &self.structure.order
    }

    /// The relation carried by the edge `(from, to)`, if any.
    pub fn relation(&self, from: &str, to: &str) -> Option<Relation> {
        let (from, to) = (self.index_of(from)?, self.index_of(to)?);
        self.relation_at(from, to)
    }

    pub(crate) fn relation_at(&self, from: usize, to: usize) -> Option<Relation> {
        self.structure.children[from]
            .binary_search_by_key(&to, |&(child, _)| child)
            .ok()
            .map(|pos| self.structure.children[from][pos].1)
    }

    /// Attack pairs sorted by (source, target).
    pub fn attacks(&self) -> Vec<(&ArgumentId, &ArgumentId)> {
        self.edges(Relation::Attack)
    }

    /// Support pairs sorted by (source, target).
    pub fn supports(&self) -> Vec<(&ArgumentId, &ArgumentId)> {
        self.edges(Relation::Support)
    }

    fn edges(&self, relation: Relation) -> Vec<(&ArgumentId, &ArgumentId)> {
        let ids = &self.structure.ids;
        self.structure
            .children
            .iter()
            .enumerate()
            .flat_map(|(from, list)| {
                list.iter()
                    .filter(move |(_, r)| *r == relation)
                    .map(move |&(to, _)| (&ids[from], &ids[to]))
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.structure.children.iter().map(Vec::len).sum()
    }

    /// Arguments in topological order; ties go to the lexicographically
    /// smaller id.
    pub fn topological_order(&self) -> Vec<&ArgumentId> {
        self.structure
            .order
            .iter()
            .map(|&i| &self.structure.ids[i])
            .collect()
    }

    /// DF-QuAD strengths, computed on first use and cached.
    pub fn strengths(&self) -> &StrengthAssignment {
        self.strengths.get_or_init(|| evaluate_strengths(self))
    }

    /// Copy of this framework with one base score replaced.
    pub fn with_base_score(&self, id: &str, value: f64) -> Result<Qbaf> {
        let index = self.require(id)?;
        self.with_base_score_at(index, value)
    }

    pub(crate) fn with_base_score_at(&self, index: usize, value: f64) -> Result<Qbaf> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::BaseScoreOutOfRange {
                argument: self.structure.ids[index].clone(),
                value,
            });
        }
        let mut base = self.base.clone();
        base[index] = value;
        Ok(Qbaf {
            structure: Arc::clone(&self.structure),
            base,
            strengths: OnceLock::new(),
        })
    }

    /// Declarations that rebuild this framework through [`build_qbaf`].
    pub fn argument_specs(&self) -> Vec<ArgumentSpec> {
        self.structure
            .ids
            .iter()
            .enumerate()
            .map(|(i, id)| ArgumentSpec {
                id: id.to_string(),
                content: self.structure.content[i].clone(),
                base_score: self.base[i],
            })
            .collect()
    }
}

impl PartialEq for Qbaf {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&*self.structure, &*other.structure);
        self.base == other.base
            && a.ids == b.ids
            && a.content == b.content
            && a.children == b.children
    }
}

/// Incremental construction helper; validation happens in [`QbafBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct QbafBuilder {
    arguments: Vec<ArgumentSpec>,
    attacks: Vec<(String, String)>,
    supports: Vec<(String, String)>,
}

impl QbafBuilder {
    pub fn argument(mut self, id: impl Into<String>, base_score: f64) -> Self {
        self.arguments.push(ArgumentSpec::new(id, base_score));
        self
    }

    pub fn argument_with_content(
        mut self,
        id: impl Into<String>,
        base_score: f64,
        content: impl Into<String>,
    ) -> Self {
        self.arguments
            .push(ArgumentSpec::new(id, base_score).with_content(content));
        self
    }

    pub fn attack(mut self, from: impl Into<String>, to: impl Into<String>) -> Self {
        self.attacks.push((from.into(), to.into()));
        self
    }

    pub fn support(mut self, from: impl Into<String>, to: impl Into<String>) -> Self {
        self.supports.push((from.into(), to.into()));
        self
    }

    pub fn build(self) -> Result<Qbaf> {
        build_qbaf(self.arguments, self.attacks, self.supports)
    }
}
