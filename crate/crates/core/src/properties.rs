//! Executable checks for the explanation properties of attributions.
//!
//! Every check compares attribution values against ablations (base score
//! set to zero) or against re-evaluations at other base scores. Multifold
//! sources are expected to fail some of them; the suite records those
//! failures instead of treating them as errors.

use std::fmt;

use serde::Serialize;

use crate::attribution::reverse_sweep;
use crate::error::{Error, Result};
use crate::framework::{ArgumentId, Qbaf};
use crate::paths::{classify_indices, ConnectivityClass};

/// Tolerance for identities that are exact in real arithmetic.
pub const ANALYTIC_TOLERANCE: f64 = 1e-9;

/// Antecedent gaps in `(ANALYTIC_TOLERANCE, BORDERLINE_GAP]` are too close
/// to call; monotonicity reports them as skipped.
pub const BORDERLINE_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PropertyName {
    Missingness,
    Completeness,
    Counterfactuality,
    Agreement,
    Monotonicity,
    QualitativeInvariability,
    QuantitativeInvariability,
}

impl fmt::Display for PropertyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropertyName::Missingness => "missingness",
            PropertyName::Completeness => "completeness",
            PropertyName::Counterfactuality => "counterfactuality",
            PropertyName::Agreement => "agreement",
            PropertyName::Monotonicity => "monotonicity",
            PropertyName::QualitativeInvariability => "qualitative-invariability",
            PropertyName::QuantitativeInvariability => "quantitative-invariability",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    Satisfied,
    Violated,
    /// The property's antecedent does not apply.
    Vacuous,
    /// The antecedent is too close to its threshold to decide.
    Skipped,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Satisfied => "holds",
            Outcome::Violated => "FAILS",
            Outcome::Vacuous => "vacuous",
            Outcome::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyVerdict {
    pub property: PropertyName,
    pub topic: ArgumentId,
    /// One source, or two for agreement and monotonicity.
    pub sources: Vec<ArgumentId>,
    /// For pairs, the weaker of the two connectivities (multifold dominates).
    pub connectivity: ConnectivityClass,
    pub outcome: Outcome,
    pub witness: Vec<(&'static str, f64)>,
    /// Set when the verdict quantifies over a finite grid of base scores.
    pub sampled: bool,
}

impl PropertyVerdict {
    pub fn holds(&self) -> bool {
        self.outcome != Outcome::Violated
    }

    /// Whether the property is guaranteed for this connectivity, i.e. a
    /// failure would be a defect rather than expected behaviour.
    pub fn is_guaranteed(&self) -> bool {
        self.connectivity != ConnectivityClass::Multifold
    }

    pub fn witness_value(&self, name: &str) -> Option<f64> {
        self.witness
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, v)| v)
    }
}

impl fmt::Display for PropertyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sources: Vec<&str> = self.sources.iter().map(ArgumentId::as_str).collect();
        write!(
            f,
            "{:<27} {:<9} topic={} sources={} [{}]",
            self.property.to_string(),
            self.outcome.to_string(),
            self.topic,
            sources.join(","),
            self.connectivity
        )?;
        for (name, value) in &self.witness {
            write!(f, " {name}={value:.6}")?;
        }
        if self.sampled {
            f.write_str(" (sampled)")?;
        }
        Ok(())
    }
}

/// Copy of `q` with the base score of `x` set to zero.
pub fn ablate(q: &Qbaf, x: &str) -> Result<Qbaf> {
    q.with_base_score(x, 0.0)
}

/// Per-topic quantities shared by the checks.
struct Probe<'q> {
    q: &'q Qbaf,
    topic: usize,
    sigma: f64,
    aae: Vec<f64>,
    ablated: Vec<f64>,
}

impl<'q> Probe<'q> {
    fn new(q: &'q Qbaf, topic: &str) -> Result<Self> {
        let t = q.require(topic)?;
        let ablated = (0..q.len())
            .map(|i| {
                q.with_base_score_at(i, 0.0)
                    .expect("zero is a valid base score")
                    .strengths()
                    .sigma_at(t)
            })
            .collect();
        Ok(Probe {
            q,
            topic: t,
            sigma: q.strengths().sigma_at(t),
            aae: reverse_sweep(q, q.strengths(), t),
            ablated,
        })
    }

    fn source(&self, id: &str) -> Result<usize> {
        let s = self.q.require(id)?;
        if s == self.topic {
            return Err(Error::SameArgument(self.q.id(s).clone()));
        }
        Ok(s)
    }

    fn tau(&self, s: usize) -> f64 {
        self.q.base_scores()[s]
    }

    fn ablated(&self, s: usize) -> f64 {
        self.ablated[s]
    }

    fn class(&self, s: usize) -> ConnectivityClass {
        classify_indices(self.q, s, self.topic)
    }

    fn verdict(
        &self,
        property: PropertyName,
        sources: &[usize],
        connectivity: ConnectivityClass,
        outcome: Outcome,
        witness: Vec<(&'static str, f64)>,
    ) -> PropertyVerdict {
        PropertyVerdict {
            property,
            topic: self.q.id(self.topic).clone(),
            sources: sources.iter().map(|&s| self.q.id(s).clone()).collect(),
            connectivity,
            outcome,
            witness,
            sampled: false,
        }
    }

    fn completeness(&self, s: usize) -> PropertyVerdict {
        let lhs = -self.tau(s) * self.aae[s];
        let rhs = self.ablated(s) - self.sigma;
        let outcome = decide((lhs - rhs).abs() <= ANALYTIC_TOLERANCE);
        self.verdict(
            PropertyName::Completeness,
            &[s],
            self.class(s),
            outcome,
            vec![("-tau*aae", lhs), ("ablated-sigma", rhs)],
        )
    }

    fn counterfactuality(&self, s: usize) -> PropertyVerdict {
        let aae = self.aae[s];
        let ablated = self.ablated(s);
        let holds = (aae > 0.0 || ablated >= self.sigma - ANALYTIC_TOLERANCE)
            && (aae < 0.0 || ablated <= self.sigma + ANALYTIC_TOLERANCE);
        self.verdict(
            PropertyName::Counterfactuality,
            &[s],
            self.class(s),
            decide(holds),
            vec![("aae", aae), ("ablated", ablated), ("sigma", self.sigma)],
        )
    }

    fn missingness(&self, s: usize) -> PropertyVerdict {
        let class = self.class(s);
        let aae = self.aae[s];
        let outcome = if class == ConnectivityClass::Disconnected {
            decide(aae == 0.0)
        } else {
            Outcome::Vacuous
        };
        self.verdict(
            PropertyName::Missingness,
            &[s],
            class,
            outcome,
            vec![("aae", aae)],
        )
    }

    fn pairwise(&self, b: usize, c: usize) -> (PropertyVerdict, PropertyVerdict) {
        let contribution_b = (self.tau(b) * self.aae[b]).abs();
        let contribution_c = (self.tau(c) * self.aae[c]).abs();
        let effect_b = (self.ablated(b) - self.sigma).abs();
        let effect_c = (self.ablated(c) - self.sigma).abs();
        let connectivity = self.class(b).max(self.class(c));
        let witness = vec![
            ("|tau*aae|_b", contribution_b),
            ("|tau*aae|_c", contribution_c),
            ("|delta|_b", effect_b),
            ("|delta|_c", effect_c),
        ];

        let gap = contribution_c - contribution_b;
        let agreement = if gap.abs() <= ANALYTIC_TOLERANCE {
            decide((effect_b - effect_c).abs() <= ANALYTIC_TOLERANCE)
        } else {
            Outcome::Vacuous
        };
        let monotonicity = if gap <= ANALYTIC_TOLERANCE {
            Outcome::Vacuous
        } else if gap <= BORDERLINE_GAP {
            Outcome::Skipped
        } else {
            decide(effect_b < effect_c)
        };
        (
            self.verdict(
                PropertyName::Agreement,
                &[b, c],
                connectivity,
                agreement,
                witness.clone(),
            ),
            self.verdict(
                PropertyName::Monotonicity,
                &[b, c],
                connectivity,
                monotonicity,
                witness,
            ),
        )
    }

    fn invariability(&self, s: usize, grid: &[f64]) -> Result<(PropertyVerdict, PropertyVerdict)> {
        if let Some(&bad) = grid.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::GridOutOfRange(bad));
        }
        let original = self.aae[s];
        let mut points: Vec<f64> = grid.to_vec();
        points.extend([0.0, 1.0, self.tau(s)]);
        points.sort_by(f64::total_cmp);
        points.dedup();

        let mut lowest = f64::INFINITY;
        let mut highest = f64::NEG_INFINITY;
        for &delta in &points {
            let moved = self.q.with_base_score_at(s, delta)?;
            let value = reverse_sweep(&moved, moved.strengths(), self.topic)[s];
            lowest = lowest.min(value);
            highest = highest.max(value);
        }
        let qualitative = if original.abs() <= ANALYTIC_TOLERANCE {
            lowest >= -ANALYTIC_TOLERANCE && highest <= ANALYTIC_TOLERANCE
        } else if original < 0.0 {
            highest <= ANALYTIC_TOLERANCE
        } else {
            lowest >= -ANALYTIC_TOLERANCE
        };
        let quantitative = highest - lowest <= ANALYTIC_TOLERANCE;
        let class = self.class(s);
        let witness = vec![
            ("aae", original),
            ("min_aae", lowest),
            ("max_aae", highest),
            ("grid_points", points.len() as f64),
        ];
        let mut qual = self.verdict(
            PropertyName::QualitativeInvariability,
            &[s],
            class,
            decide(qualitative),
            witness.clone(),
        );
        let mut quan = self.verdict(
            PropertyName::QuantitativeInvariability,
            &[s],
            class,
            decide(quantitative),
            witness,
        );
        qual.sampled = true;
        quan.sampled = true;
        Ok((qual, quan))
    }
}

fn decide(holds: bool) -> Outcome {
    if holds {
        Outcome::Satisfied
    } else {
        Outcome::Violated
    }
}

/// Eleven evenly spaced base scores, 0 to 1.
pub fn default_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// `-tau(source) * aae == ablated(topic) - sigma(topic)`.
pub fn check_completeness(q: &Qbaf, topic: &str, source: &str) -> Result<PropertyVerdict> {
    let probe = Probe::new(q, topic)?;
    Ok(probe.completeness(probe.source(source)?))
}

/// Ablating a positively attributed source must not raise the topic, and
/// ablating a negatively attributed one must not lower it.
pub fn check_counterfactuality(q: &Qbaf, topic: &str, source: &str) -> Result<PropertyVerdict> {
    let probe = Probe::new(q, topic)?;
    Ok(probe.counterfactuality(probe.source(source)?))
}

/// Disconnected sources have exactly zero attribution; other sources are
/// reported as vacuous.
pub fn check_missingness(q: &Qbaf, topic: &str, source: &str) -> Result<PropertyVerdict> {
    let probe = Probe::new(q, topic)?;
    Ok(probe.missingness(probe.source(source)?))
}

/// Agreement and monotonicity for the ordered pair `(b, c)`.
pub fn check_pairwise(
    q: &Qbaf,
    topic: &str,
    b: &str,
    c: &str,
) -> Result<(PropertyVerdict, PropertyVerdict)> {
    let probe = Probe::new(q, topic)?;
    let (b, c) = (probe.source(b)?, probe.source(c)?);
    if b == c {
        return Err(Error::SameArgument(q.id(b).clone()));
    }
    Ok(probe.pairwise(b, c))
}

/// Qualitative and quantitative invariability of the source's attribution
/// over `grid`, which is extended with 0, 1 and the current base score.
pub fn check_invariability(
    q: &Qbaf,
    topic: &str,
    source: &str,
    grid: &[f64],
) -> Result<(PropertyVerdict, PropertyVerdict)> {
    let probe = Probe::new(q, topic)?;
    probe.invariability(probe.source(source)?, grid)
}

/// Every check for every non-topic argument and every ordered pair of them.
/// Agreement is symmetric and reported once per unordered pair.
pub fn run_suite(q: &Qbaf, topic: &str) -> Result<Vec<PropertyVerdict>> {
    let probe = Probe::new(q, topic)?;
    let sources: Vec<usize> = (0..q.len()).filter(|&i| i != probe.topic).collect();
    let grid = default_grid();
    let mut verdicts = Vec::new();
    for &s in &sources {
        verdicts.push(probe.missingness(s));
        verdicts.push(probe.completeness(s));
        verdicts.push(probe.counterfactuality(s));
        let (qual, quan) = probe.invariability(s, &grid)?;
        verdicts.push(qual);
        verdicts.push(quan);
    }
    for &b in &sources {
        for &c in &sources {
            if b == c {
                continue;
            }
            let (agreement, monotonicity) = probe.pairwise(b, c);
            if b < c {
                verdicts.push(agreement);
            }
            verdicts.push(monotonicity);
        }
    }
    Ok(verdicts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn ablation_examples() {
        let fake = fixtures::fake_news();
        let ablated = ablate(&fake, "C").unwrap();
        assert_eq!(ablated.strengths().sigma("A"), Some(0.40625));
        assert_eq!(fake.base_score("C"), Some(0.5));
        let cx = fixtures::cx_complete();
        assert_eq!(
            ablate(&cx, "D").unwrap().strengths().sigma("A"),
            Some(0.875)
        );
        let zero = Qbaf::builder()
            .argument("A", 0.5)
            .argument("B", 0.0)
            .attack("B", "A")
            .build()
            .unwrap();
        assert_eq!(ablate(&zero, "B").unwrap().strengths(), zero.strengths());
    }

    #[test]
    fn completeness_examples() {
        let fake = fixtures::fake_news();
        let v = check_completeness(&fake, "A", "C").unwrap();
        assert!(v.holds());
        assert_eq!(v.witness_value("-tau*aae"), Some(-0.1875));
        let cx = fixtures::cx_complete();
        let v = check_completeness(&cx, "A", "D").unwrap();
        assert_eq!(v.outcome, Outcome::Violated);
        assert_eq!(v.connectivity, ConnectivityClass::Multifold);
        assert_eq!(v.witness_value("-tau*aae"), Some(-0.0625));
        assert_eq!(v.witness_value("ablated-sigma"), Some(-0.09375));
        let running = fixtures::running();
        let v = check_completeness(&running, "F", "C").unwrap();
        assert!(v.holds());
        assert_eq!(v.connectivity, ConnectivityClass::Disconnected);
    }

    #[test]
    fn counterfactuality_examples() {
        let fake = fixtures::fake_news();
        let v = check_counterfactuality(&fake, "A", "D").unwrap();
        assert!(v.holds());
        assert_eq!(v.witness_value("ablated"), Some(0.8125));
        let invar = fixtures::cx_invar();
        let v = check_counterfactuality(&invar, "A", "E").unwrap();
        assert_eq!(v.outcome, Outcome::Violated);
        assert!((v.witness_value("aae").unwrap() + 0.18).abs() < 1e-12);
        assert!((v.witness_value("ablated").unwrap() - 0.1).abs() < 1e-12);
        let isolated = Qbaf::builder()
            .argument("A", 0.3)
            .argument("B", 0.6)
            .build()
            .unwrap();
        assert!(check_counterfactuality(&isolated, "A", "B")
            .unwrap()
            .holds());
    }

    #[test]
    fn pairwise_examples() {
        let fake = fixtures::fake_news();
        let (agreement, monotonicity) = check_pairwise(&fake, "A", "G", "H").unwrap();
        assert_eq!(agreement.outcome, Outcome::Satisfied);
        assert_eq!(monotonicity.outcome, Outcome::Vacuous);
        assert_eq!(agreement.witness_value("|tau*aae|_b"), Some(0.03125));
        let (agreement, monotonicity) = check_pairwise(&fake, "A", "B", "C").unwrap();
        assert_eq!(agreement.outcome, Outcome::Vacuous);
        assert_eq!(monotonicity.outcome, Outcome::Satisfied);
        assert_eq!(monotonicity.witness_value("|delta|_b"), Some(0.0625));
        assert_eq!(monotonicity.witness_value("|delta|_c"), Some(0.1875));
        // Reverse order: antecedent false.
        let (_, monotonicity) = check_pairwise(&fake, "A", "C", "B").unwrap();
        assert_eq!(monotonicity.outcome, Outcome::Vacuous);

        let cx = fixtures::cx_agree();
        let (agreement, _) = check_pairwise(&cx, "A", "D", "E").unwrap();
        assert_eq!(agreement.outcome, Outcome::Violated);
        assert_eq!(agreement.connectivity, ConnectivityClass::Multifold);
        assert_eq!(agreement.witness_value("|delta|_b"), Some(0.09375));
        assert_eq!(agreement.witness_value("|delta|_c"), Some(0.0625));

        assert!(matches!(
            check_pairwise(&fake, "A", "B", "B"),
            Err(Error::SameArgument(_))
        ));
    }

    #[test]
    fn invariability_examples() {
        let fake = fixtures::fake_news();
        let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
        let (qual, quan) = check_invariability(&fake, "A", "B", &grid).unwrap();
        assert!(qual.holds() && quan.holds());
        assert_eq!(quan.witness_value("min_aae"), Some(0.125));
        assert_eq!(quan.witness_value("max_aae"), Some(0.125));

        let invar = fixtures::cx_invar();
        let (qual, quan) = check_invariability(&invar, "A", "E", &[0.4, 0.6]).unwrap();
        assert_eq!(qual.outcome, Outcome::Violated);
        assert_eq!(quan.outcome, Outcome::Violated);

        let running = fixtures::running();
        let (qual, quan) = check_invariability(&running, "F", "C", &default_grid()).unwrap();
        assert!(qual.holds() && quan.holds());
        assert_eq!(quan.witness_value("max_aae"), Some(0.0));

        assert!(matches!(
            check_invariability(&fake, "A", "B", &[1.5]),
            Err(Error::GridOutOfRange(_))
        ));
    }

    #[test]
    fn missingness_examples() {
        let running = fixtures::running();
        let v = check_missingness(&running, "F", "C").unwrap();
        assert_eq!(v.outcome, Outcome::Satisfied);
        let fake = fixtures::fake_news();
        assert_eq!(
            check_missingness(&fake, "C", "E").unwrap().outcome,
            Outcome::Satisfied
        );
        assert_eq!(
            check_missingness(&fake, "A", "C").unwrap().outcome,
            Outcome::Vacuous
        );
    }

    #[test]
    fn suite_on_fixtures() {
        let fake = fixtures::fake_news();
        let verdicts = run_suite(&fake, "A").unwrap();
        assert!(verdicts.iter().all(PropertyVerdict::holds));
        // 7 sources x 5 single checks + 21 agreement + 42 monotonicity.
        assert_eq!(verdicts.len(), 35 + 21 + 42);

        let cx = fixtures::cx_complete();
        let verdicts = run_suite(&cx, "A").unwrap();
        let failed = verdicts
            .iter()
            .find(|v| v.property == PropertyName::Completeness && v.sources[0] == "D")
            .unwrap();
        assert_eq!(failed.outcome, Outcome::Violated);
        assert_eq!(failed.connectivity, ConnectivityClass::Multifold);
        assert!(verdicts
            .iter()
            .filter(|v| !v.holds())
            .all(|v| !v.is_guaranteed()));

        let single = Qbaf::builder().argument("A", 0.5).build().unwrap();
        assert!(run_suite(&single, "A").unwrap().is_empty());
    }
}
