//! Argument attribution: the derivative of a topic argument's strength with
//! respect to another argument's base score.
//!
//! Three routes compute the same quantity:
//!
//! * [`aae_direct`] / [`aae_indirect`]: closed forms for single-path
//!   connectivity, a product of per-edge partials;
//! * [`aae_all`]: one reverse sweep over the topological order, covering
//!   every argument (including multifold ones) in `O(|A| + |R|)`;
//! * [`aae_finite_difference`]: re-evaluation under a perturbed base score,
//!   used as an oracle.
//!
//! DF-QuAD is not differentiable where `v_a == v_s` and `tau != 0.5`. At such
//! points attack edges use the `v_a >= v_s` partial and support edges the
//! `v_a <= v_s` partial.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::framework::{ArgumentId, Qbaf, Relation};
use crate::paths::{classify_indices, enumerate_index_paths, ConnectivityClass};
use crate::semantics::{base_sensitivity, NodeEvaluation, StrengthAssignment};

/// Default finite-difference step.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Nodes with `|v_a - v_s|` at or below this are reported as tie points.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Attribution of `source` toward `topic`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aae {
    pub source: ArgumentId,
    pub topic: ArgumentId,
    pub value: f64,
}

impl Aae {
    pub fn influence(&self) -> InfluenceClass {
        classify_influence(self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum InfluenceClass {
    Positive,
    Negative,
    Neutral,
}

impl fmt::Display for InfluenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfluenceClass::Positive => "positive",
            InfluenceClass::Negative => "negative",
            InfluenceClass::Neutral => "neutral",
        })
    }
}

pub fn classify_influence(value: f64) -> InfluenceClass {
    if value > 0.0 {
        InfluenceClass::Positive
    } else if value < 0.0 {
        InfluenceClass::Negative
    } else {
        InfluenceClass::Neutral
    }
}

/// Sign guaranteed by the structure alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignPrediction {
    NonNegative,
    NonPositive,
    Zero,
    Indeterminate,
}

impl SignPrediction {
    pub fn admits(self, class: InfluenceClass) -> bool {
        match self {
            SignPrediction::NonNegative => class != InfluenceClass::Negative,
            SignPrediction::NonPositive => class != InfluenceClass::Positive,
            SignPrediction::Zero => class == InfluenceClass::Neutral,
            SignPrediction::Indeterminate => true,
        }
    }
}

impl fmt::Display for SignPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignPrediction::NonNegative => "non-negative",
            SignPrediction::NonPositive => "non-positive",
            SignPrediction::Zero => "zero",
            SignPrediction::Indeterminate => "indeterminate",
        })
    }
}

/// `∂σ(child)/∂v` scaled to the parent's relation: the case factor of the
/// child's influence function.
fn case_factor(tau: f64, child: &NodeEvaluation, relation: Relation) -> f64 {
    match relation {
        Relation::Attack if child.v_a >= child.v_s => -tau,
        Relation::Attack => tau - 1.0,
        Relation::Support if child.v_a > child.v_s => tau,
        Relation::Support => 1.0 - tau,
    }
}

/// Fills `out[i]` with the product of all `factors` except the i-th,
/// without division.
fn exclusive_products(factors: &[f64], out: &mut Vec<f64>) {
    out.clear();
    out.resize(factors.len(), 1.0);
    let mut prefix = 1.0;
    for (slot, &f) in out.iter_mut().zip(factors) {
        *slot = prefix;
        prefix *= f;
    }
    let mut suffix = 1.0;
    for (slot, &f) in out.iter_mut().zip(factors).rev() {
        *slot *= suffix;
        suffix *= f;
    }
}

/// Scratch buffers reused across nodes of one sweep.
#[derive(Default)]
struct Scratch {
    complements: Vec<f64>,
    others: Vec<f64>,
}

impl Scratch {
    /// Edge partials `∂σ(child)/∂σ(parent)` for every parent of `child` in
    /// `relation`, in parent order.
    fn partials(
        &mut self,
        q: &Qbaf,
        sa: &StrengthAssignment,
        child: usize,
        relation: Relation,
    ) -> impl Iterator<Item = f64> + '_ {
        let parents = q.parents_of(child, relation);
        self.complements.clear();
        self.complements
            .extend(parents.iter().map(|&p| 1.0 - sa.sigma_at(p)));
        exclusive_products(&self.complements, &mut self.others);
        let xi = case_factor(q.base_scores()[child], sa.at(child), relation);
        self.others.iter().map(move |&o| xi * o)
    }
}

pub(crate) fn edge_partial_at(
    q: &Qbaf,
    sa: &StrengthAssignment,
    parent: usize,
    child: usize,
) -> Option<f64> {
    let relation = q.relation_at(parent, child)?;
    let position = q
        .parents_of(child, relation)
        .binary_search(&parent)
        .expect("edge is indexed on both ends");
    let mut scratch = Scratch::default();
    let partial = scratch.partials(q, sa, child, relation).nth(position);
    partial
}

/// `∂σ(child)/∂σ(parent)` for the edge `(parent, child)`.
pub fn edge_partial(q: &Qbaf, sa: &StrengthAssignment, parent: &str, child: &str) -> Result<f64> {
    let (p, c) = (q.require(parent)?, q.require(child)?);
    edge_partial_at(q, sa, p, c).ok_or_else(|| Error::NotAnEdge {
        parent: q.id(p).clone(),
        child: q.id(c).clone(),
    })
}

fn expect_class(q: &Qbaf, source: usize, topic: usize, expected: ConnectivityClass) -> Result<()> {
    let found = classify_indices(q, source, topic);
    if found != expected {
        return Err(Error::WrongConnectivity {
            source_arg: q.id(source).clone(),
            topic: q.id(topic).clone(),
            expected,
            found,
        });
    }
    Ok(())
}

/// Product of edge partials along `path`, folded from the topic end.
fn path_product(q: &Qbaf, sa: &StrengthAssignment, path: &[usize]) -> f64 {
    path.windows(2).rev().fold(1.0, |acc, w| {
        edge_partial_at(q, sa, w[0], w[1]).expect("path follows edges") * acc
    })
}

fn make_aae(q: &Qbaf, source: usize, topic: usize, value: f64) -> Aae {
    Aae {
        source: q.id(source).clone(),
        topic: q.id(topic).clone(),
        value,
    }
}

/// Closed form for a source that directly attacks or supports the topic.
pub fn aae_direct(q: &Qbaf, sa: &StrengthAssignment, source: &str, topic: &str) -> Result<Aae> {
    let (s, t) = (q.require(source)?, q.require(topic)?);
    expect_class(q, s, t, ConnectivityClass::Direct)?;
    let value = base_sensitivity(sa.at(s)) * path_product(q, sa, &[s, t]);
    Ok(make_aae(q, s, t, value))
}

/// Chain rule along the single path from source to topic. Written as a
/// product of edge partials, so saturated middle arguments need no division.
pub fn aae_indirect(q: &Qbaf, sa: &StrengthAssignment, source: &str, topic: &str) -> Result<Aae> {
    let (s, t) = (q.require(source)?, q.require(topic)?);
    expect_class(q, s, t, ConnectivityClass::Indirect)?;
    let path = enumerate_index_paths(q, s, t)
        .pop()
        .expect("indirect connectivity has one path");
    let value = base_sensitivity(sa.at(s)) * path_product(q, sa, &path);
    Ok(make_aae(q, s, t, value))
}

/// Sum over every path of the product of edge partials, times the source's
/// base sensitivity. Exponential in the worst case; meant for small
/// frameworks and multifold cross-checks.
pub fn aae_by_paths(q: &Qbaf, sa: &StrengthAssignment, source: &str, topic: &str) -> Result<Aae> {
    let (s, t) = (q.require(source)?, q.require(topic)?);
    let sum: f64 = enumerate_index_paths(q, s, t)
        .iter()
        .map(|path| path_product(q, sa, path))
        .sum();
    Ok(make_aae(q, s, t, base_sensitivity(sa.at(s)) * sum))
}

/// Attributions of every argument toward one topic.
#[derive(Debug, Clone)]
pub struct Attributions<'q> {
    q: &'q Qbaf,
    topic: usize,
    values: Vec<f64>,
}

impl<'q> Attributions<'q> {
    pub fn topic(&self) -> &'q ArgumentId {
        self.q.id(self.topic)
    }

    /// Attribution of `source`; `None` for the topic itself and for unknown
    /// ids.
    pub fn get(&self, source: &str) -> Option<f64> {
        let index = self.q.index_of(source)?;
        (index != self.topic).then(|| self.values[index])
    }

    pub fn aae(&self, source: &str) -> Option<Aae> {
        self.get(source).map(|value| Aae {
            source: ArgumentId::new(source).expect("known id"),
            topic: self.topic().clone(),
            value,
        })
    }

    pub(crate) fn value_at(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// `(source, value)` in id order, topic excluded.
    pub fn iter(&self) -> impl Iterator<Item = (&'q ArgumentId, f64)> + '_ {
        let q = self.q;
        self.values
            .iter()
            .enumerate()
            .filter(move |&(i, _)| i != self.topic)
            .map(move |(i, &v)| (q.id(i), v))
    }

    pub fn len(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub(crate) fn reverse_sweep(q: &Qbaf, sa: &StrengthAssignment, topic: usize) -> Vec<f64> {
    let mut adjoint = vec![0.0; q.len()];
    adjoint[topic] = 1.0;
    let mut scratch = Scratch::default();
    for &child in q.order_indices().iter().rev() {
        let upstream = adjoint[child];
        if upstream == 0.0 {
            continue;
        }
        for relation in [Relation::Attack, Relation::Support] {
            let parents = q.parents_of(child, relation);
            if parents.is_empty() {
                continue;
            }
            for (&parent, partial) in parents.iter().zip(scratch.partials(q, sa, child, relation)) {
                adjoint[parent] += partial * upstream;
            }
        }
    }
    for (i, slot) in adjoint.iter_mut().enumerate() {
        *slot *= base_sensitivity(sa.at(i));
    }
    adjoint
}

/// Attributions of all arguments toward `topic` by one reverse sweep.
/// Disconnected arguments get exactly zero.
pub fn aae_all<'q>(q: &'q Qbaf, topic: &str) -> Result<Attributions<'q>> {
    let t = q.require(topic)?;
    Ok(Attributions {
        q,
        topic: t,
        values: reverse_sweep(q, q.strengths(), t),
    })
}

/// Finite-difference estimate of the attribution of `source` toward `topic`.
///
/// Uses a central stencil when both `tau ± epsilon` stay in `[0, 1]`,
/// otherwise a one-sided stencil toward the feasible side.
pub fn aae_finite_difference(q: &Qbaf, topic: &str, source: &str, epsilon: f64) -> Result<f64> {
    let (t, s) = (q.require(topic)?, q.require(source)?);
    finite_difference_at(q, t, s, epsilon)
}

pub(crate) fn finite_difference_at(
    q: &Qbaf,
    topic: usize,
    source: usize,
    epsilon: f64,
) -> Result<f64> {
    let tau = q.base_scores()[source];
    let degenerate = || Error::DegenerateStencil {
        base_score: tau,
        epsilon,
    };
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(degenerate());
    }
    let strength_at = |value: f64| -> Result<f64> {
        Ok(q.with_base_score_at(source, value)?
            .strengths()
            .sigma_at(topic))
    };
    let (up, down) = (tau + epsilon, tau - epsilon);
    match (up <= 1.0, down >= 0.0) {
        (true, true) => Ok((strength_at(up)? - strength_at(down)?) / (up - down)),
        (true, false) => Ok((strength_at(up)? - q.strengths().sigma_at(topic)) / (up - tau)),
        (false, true) => Ok((q.strengths().sigma_at(topic) - strength_at(down)?) / (tau - down)),
        (false, false) => Err(degenerate()),
    }
}

/// Sign implied by connectivity and attack parity.
pub fn predict_sign_parity(q: &Qbaf, source: &str, topic: &str) -> Result<SignPrediction> {
    let (s, t) = (q.require(source)?, q.require(topic)?);
    Ok(predict_sign_at(q, s, t))
}

pub(crate) fn predict_sign_at(q: &Qbaf, source: usize, topic: usize) -> SignPrediction {
    match classify_indices(q, source, topic) {
        ConnectivityClass::Disconnected => SignPrediction::Zero,
        ConnectivityClass::Multifold => SignPrediction::Indeterminate,
        ConnectivityClass::Direct | ConnectivityClass::Indirect => {
            let path = enumerate_index_paths(q, source, topic)
                .pop()
                .expect("single-path connectivity");
            let attacks = path
                .windows(2)
                .filter(|w| q.relation_at(w[0], w[1]) == Some(Relation::Attack))
                .count();
            if attacks % 2 == 1 {
                SignPrediction::NonPositive
            } else {
                SignPrediction::NonNegative
            }
        }
    }
}

/// Ids of arguments with parents whose aggregates are (numerically) tied,
/// where a one-sided derivative convention applies.
pub fn tie_points(q: &Qbaf) -> Vec<&ArgumentId> {
    let sa = q.strengths();
    (0..q.len())
        .filter(|&i| q.has_parents(i) && (sa.at(i).v_a - sa.at(i).v_s).abs() <= TIE_TOLERANCE)
        .map(|i| q.id(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn edge_partial_examples() {
        let fake = fixtures::fake_news();
        assert_eq!(
            edge_partial(&fake, fake.strengths(), "C", "A").unwrap(),
            0.375
        );
        let running = fixtures::running();
        assert_eq!(
            edge_partial(&running, running.strengths(), "D", "A").unwrap(),
            -0.5
        );
        let movie = fixtures::movie();
        let w = edge_partial(&movie, movie.strengths(), "f_W", "m").unwrap();
        assert!((w + 0.21).abs() < 1e-12, "{w}");
        let err = edge_partial(&running, running.strengths(), "A", "D").unwrap_err();
        assert!(matches!(err, Error::NotAnEdge { .. }));
    }

    #[test]
    fn exclusive_products_skip_own_factor() {
        let mut out = Vec::new();
        exclusive_products(&[0.5, 0.0, 0.25], &mut out);
        assert_eq!(out, vec![0.0, 0.125, 0.0]);
        exclusive_products(&[0.3], &mut out);
        assert_eq!(out, vec![1.0]);
        exclusive_products(&[], &mut out);
        assert!(out.is_empty());
    }

    #[test]
    fn direct_examples() {
        let running = fixtures::running();
        let d = aae_direct(&running, running.strengths(), "D", "A").unwrap();
        assert_eq!(d.value, -0.375);
        let fake = fixtures::fake_news();
        assert_eq!(
            aae_direct(&fake, fake.strengths(), "C", "A").unwrap().value,
            0.375
        );
        let movie = fixtures::movie();
        let v = aae_direct(&movie, movie.strengths(), "f_D", "m")
            .unwrap()
            .value;
        assert!((v - 0.21 * (1.0 - 0.25786)).abs() < 1e-12);
        assert!((v - 0.15584).abs() < 5e-5);
        let err = aae_direct(&running, running.strengths(), "C", "A").unwrap_err();
        assert!(matches!(
            err,
            Error::WrongConnectivity {
                found: ConnectivityClass::Indirect,
                ..
            }
        ));
    }

    #[test]
    fn indirect_examples() {
        let running = fixtures::running();
        let c = aae_indirect(&running, running.strengths(), "C", "A").unwrap();
        assert_eq!(c.value, 0.125);
        let movie = fixtures::movie();
        let a1 = aae_indirect(&movie, movie.strengths(), "f_A1", "m")
            .unwrap()
            .value;
        assert!((a1 - 0.15585).abs() < 5e-5);
        let fake = fixtures::fake_news();
        assert_eq!(
            aae_indirect(&fake, fake.strengths(), "F", "A")
                .unwrap()
                .value,
            0.0625
        );
        assert!(aae_indirect(&running, running.strengths(), "B", "A").is_err());
    }

    #[test]
    fn reverse_sweep_fake_news() {
        let fake = fixtures::fake_news();
        let all = aae_all(&fake, "A").unwrap();
        let expected = [
            ("C", 0.375),
            ("B", 0.125),
            ("F", 0.0625),
            ("G", -0.0625),
            ("H", -0.0625),
            ("E", -0.125),
            ("D", -0.4375),
        ];
        for (id, v) in expected {
            assert_eq!(all.get(id), Some(v), "{id}");
        }
        assert_eq!(all.get("A"), None);
        assert_eq!(all.len(), 7);
    }

    #[test]
    fn reverse_sweep_running_example() {
        let q = fixtures::running();
        let all = aae_all(&q, "A").unwrap();
        for (id, v) in [
            ("B", -0.25),
            ("C", 0.125),
            ("D", -0.375),
            ("F", -0.125),
            ("G", 0.125),
        ] {
            assert_eq!(all.get(id), Some(v), "{id}");
        }
        let by_paths = aae_by_paths(&q, q.strengths(), "B", "A").unwrap();
        assert_eq!(by_paths.value, -0.25);
    }

    #[test]
    fn reverse_sweep_cx_complete() {
        let q = fixtures::cx_complete();
        assert_eq!(aae_all(&q, "A").unwrap().get("D"), Some(0.125));
    }

    #[test]
    fn finite_difference_examples() {
        let fake = fixtures::fake_news();
        let fd = aae_finite_difference(&fake, "A", "D", 1e-6).unwrap();
        assert!((fd + 0.4375).abs() < 1e-5, "{fd}");
        let running = fixtures::running();
        assert_eq!(
            aae_finite_difference(&running, "F", "C", 1e-6).unwrap(),
            0.0
        );
        let invar = fixtures::cx_invar();
        let fd = aae_finite_difference(&invar, "A", "E", 1e-6).unwrap();
        assert!((fd + 0.18).abs() < 1e-5, "{fd}");
    }

    #[test]
    fn finite_difference_one_sided_at_bounds() {
        let q = Qbaf::builder()
            .argument("A", 0.5)
            .argument("B", 0.0)
            .argument("C", 1.0)
            .attack("B", "A")
            .support("C", "A")
            .build()
            .unwrap();
        let all = aae_all(&q, "A").unwrap();
        for id in ["B", "C"] {
            let fd = aae_finite_difference(&q, "A", id, 1e-6).unwrap();
            assert!((fd - all.get(id).unwrap()).abs() < 1e-6, "{id}: {fd}");
        }
        assert!(aae_finite_difference(&q, "A", "B", 0.0).is_err());
        assert!(aae_finite_difference(&q, "A", "B", 2.0).is_err());
    }

    #[test]
    fn influence_classes() {
        assert_eq!(classify_influence(0.375), InfluenceClass::Positive);
        assert_eq!(classify_influence(0.0), InfluenceClass::Neutral);
        assert_eq!(classify_influence(-0.0), InfluenceClass::Neutral);
        assert_eq!(classify_influence(-0.4375), InfluenceClass::Negative);
    }

    #[test]
    fn sign_parity_examples() {
        let running = fixtures::running();
        assert_eq!(
            predict_sign_parity(&running, "C", "A").unwrap(),
            SignPrediction::NonNegative
        );
        assert_eq!(
            predict_sign_parity(&running, "B", "A").unwrap(),
            SignPrediction::Indeterminate
        );
        assert_eq!(
            predict_sign_parity(&running, "C", "F").unwrap(),
            SignPrediction::Zero
        );
        let fake = fixtures::fake_news();
        assert_eq!(
            predict_sign_parity(&fake, "E", "A").unwrap(),
            SignPrediction::NonPositive
        );
    }

    #[test]
    fn tie_points_skip_leaves() {
        let q = fixtures::running();
        assert!(tie_points(&q).is_empty());
        let tied = Qbaf::builder()
            .argument("A", 0.3)
            .argument("B", 0.5)
            .argument("C", 0.5)
            .attack("B", "A")
            .support("C", "A")
            .build()
            .unwrap();
        let ties: Vec<&str> = tie_points(&tied).iter().map(|id| id.as_str()).collect();
        assert_eq!(ties, ["A"]);
    }
}
