//! DF-QuAD evaluation of acyclic quantitative bipolar argumentation
//! frameworks, with gradient-based attribution of a topic argument's
//! strength to every argument's base score.
//!
//! ```
//! use qbaf::{aae_all, Qbaf};
//!
//! let q = Qbaf::builder()
//!     .argument("A", 0.5)
//!     .argument("B", 0.5)
//!     .attack("B", "A")
//!     .build()?;
//! assert_eq!(q.strengths().sigma("A"), Some(0.25));
//! assert_eq!(aae_all(&q, "A")?.get("B"), Some(-0.5));
//! # Ok::<(), qbaf::Error>(())
//! ```

pub mod attribution;
pub mod cli;
pub mod document;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod framework;
pub mod generator;
pub mod paths;
pub mod properties;
pub mod reference;
pub mod report;
pub mod semantics;

pub use attribution::{
    aae_all, aae_by_paths, aae_direct, aae_finite_difference, aae_indirect, classify_influence,
    edge_partial, predict_sign_parity, tie_points, Aae, Attributions, InfluenceClass,
    SignPrediction, DEFAULT_EPSILON,
};
pub use document::{parse_qbaf, serialize_qbaf, QbafDocument};
pub use error::{Error, Result};
pub use export::{export_dot, parse_report, serialize_report, ReportRecord};
pub use framework::{build_qbaf, ArgumentId, ArgumentSpec, Qbaf, QbafBuilder, Relation};
pub use generator::{random_chain, random_qbaf, BaseScoreDistribution, GeneratorConfig};
pub use paths::{classify_connectivity, enumerate_paths, ConnectivityClass, Path, PathSet};
pub use properties::{
    ablate, check_completeness, check_counterfactuality, check_invariability, check_missingness,
    check_pairwise, run_suite, Outcome, PropertyName, PropertyVerdict,
};
pub use reference::{ReferenceRow, ReferenceTable};
pub use report::{attribution_report, AttributionReport, ReportRow};
pub use semantics::{
    aggregate, base_sensitivity, evaluate_strengths, influence, NodeEvaluation, StrengthAssignment,
};
