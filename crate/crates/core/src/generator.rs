//! Seeded random frameworks for property testing and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::framework::{build_qbaf, ArgumentSpec, Qbaf};

/// Attempts before [`random_qbaf`] gives up on tie avoidance.
pub const MAX_TIE_RETRIES: usize = 1000;

/// Nodes with parents and `|v_a - v_s|` at or below this count as tied.
pub const TIE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseScoreDistribution {
    Uniform,
    Constant(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub node_count: usize,
    pub edge_probability: f64,
    pub attack_fraction: f64,
    pub base_scores: BaseScoreDistribution,
    pub seed: u64,
    pub tie_avoidance: bool,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            node_count: 8,
            edge_probability: 0.3,
            attack_fraction: 0.5,
            base_scores: BaseScoreDistribution::Uniform,
            seed: 0,
            tie_avoidance: false,
        }
    }
}

impl GeneratorConfig {
    fn validate(&self) -> Result<()> {
        if self.node_count == 0 {
            return Err(Error::InvalidConfig("node_count must be at least 1".into()));
        }
        let unit = 0.0..=1.0;
        if !unit.contains(&self.edge_probability) {
            return Err(Error::InvalidConfig(format!(
                "edge_probability {} lies outside [0, 1]",
                self.edge_probability
            )));
        }
        if !unit.contains(&self.attack_fraction) {
            return Err(Error::InvalidConfig(format!(
                "attack_fraction {} lies outside [0, 1]",
                self.attack_fraction
            )));
        }
        if let BaseScoreDistribution::Constant(v) = self.base_scores {
            if !unit.contains(&v) {
                return Err(Error::InvalidConfig(format!(
                    "constant base score {v} lies outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Zero-padded ids so that lexicographic order matches numeric order.
fn node_id(i: usize, n: usize) -> String {
    let width = n.saturating_sub(1).to_string().len();
    format!("n{i:0width$}")
}

fn sample(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Result<Qbaf> {
    let n = cfg.node_count;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let arguments: Vec<ArgumentSpec> = (0..n)
        .map(|i| {
            let tau = match cfg.base_scores {
                BaseScoreDistribution::Uniform => rng.gen::<f64>(),
                BaseScoreDistribution::Constant(v) => v,
            };
            ArgumentSpec::new(node_id(i, n), tau)
        })
        .collect();
    let mut attacks = Vec::new();
    let mut supports = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(cfg.edge_probability) {
                let edge = (node_id(order[a], n), node_id(order[b], n));
                if rng.gen_bool(cfg.attack_fraction) {
                    attacks.push(edge);
                } else {
                    supports.push(edge);
                }
            }
        }
    }
    build_qbaf(arguments, attacks, supports)
}

fn has_tie(q: &Qbaf) -> bool {
    (0..q.len()).any(|i| {
        let node = q.strengths().at(i);
        q.has_parents(i) && (node.v_a - node.v_s).abs() <= TIE_THRESHOLD
    })
}

/// Samples an acyclic framework: a random node order, each forward edge
/// present with `edge_probability`, each present edge an attack with
/// `attack_fraction`. Identical configurations give identical frameworks.
pub fn random_qbaf(cfg: &GeneratorConfig) -> Result<Qbaf> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if !cfg.tie_avoidance {
        return sample(cfg, &mut rng);
    }
    for _ in 0..MAX_TIE_RETRIES {
        let q = sample(cfg, &mut rng)?;
        if !has_tie(&q) {
            return Ok(q);
        }
    }
    Err(Error::TieAvoidanceExhausted(MAX_TIE_RETRIES))
}

/// A chain `n0 -> n1 -> ... -> n{len-1}` with uniform base scores and
/// random edge relations. The last argument is the natural topic.
pub fn random_chain(len: usize, seed: u64) -> Result<Qbaf> {
    if len == 0 {
        return Err(Error::InvalidConfig(
            "chain length must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arguments: Vec<ArgumentSpec> = (0..len)
        .map(|i| ArgumentSpec::new(node_id(i, len), rng.gen::<f64>()))
        .collect();
    let mut attacks = Vec::new();
    let mut supports = Vec::new();
    for i in 1..len {
        let edge = (node_id(i - 1, len), node_id(i, len));
        if rng.gen_bool(0.5) {
            attacks.push(edge);
        } else {
            supports.push(edge);
        }
    }
    build_qbaf(arguments, attacks, supports)
}
