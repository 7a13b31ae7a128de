//! Bundled example frameworks.
//!
//! | name              | contents                                               |
//! |-------------------|--------------------------------------------------------|
//! | `running`         | six arguments, B multifold-connected to A              |
//! | `fakenews`        | rumour-detection reply thread, topic A                 |
//! | `movie`           | movie review aggregation, topic m                      |
//! | `cx-complete`     | completeness fails for a multifold source              |
//! | `cx-agree`        | agreement (and, with E at 0.15, monotonicity) fails    |
//! | `cx-invar`        | counterfactuality and both invariabilities fail        |
//! | `fraud-reference` | attribution table only, no edges                       |
//!
//! The counterexample structures are reconstructions that reproduce every
//! reported value; see each file's `description`.

use crate::document::parse_qbaf;
use crate::error::{Error, Result};
use crate::framework::Qbaf;
use crate::reference::ReferenceTable;

const FIXTURES: &[(&str, &str)] = &[
    ("running", include_str!("../fixtures/running.json")),
    ("fakenews", include_str!("../fixtures/fakenews.json")),
    ("movie", include_str!("../fixtures/movie.json")),
    ("cx-complete", include_str!("../fixtures/cx-complete.json")),
    ("cx-agree", include_str!("../fixtures/cx-agree.json")),
    ("cx-invar", include_str!("../fixtures/cx-invar.json")),
    (
        "fraud-reference",
        include_str!("../fixtures/fraud-reference.json"),
    ),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(name, _)| *name)
}

pub fn text(name: &str) -> Option<&'static str> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

/// Parses a bundled framework. `fraud-reference` is not a framework.
pub fn load(name: &str) -> Result<Qbaf> {
    parse_qbaf(text(name).ok_or_else(|| Error::UnknownFixture(name.to_string()))?)
}

fn bundled(name: &str) -> Qbaf {
    load(name).expect("bundled fixtures are valid")
}

pub fn running() -> Qbaf {
    bundled("running")
}

pub fn fake_news() -> Qbaf {
    bundled("fakenews")
}

pub fn movie() -> Qbaf {
    bundled("movie")
}

pub fn cx_complete() -> Qbaf {
    bundled("cx-complete")
}

pub fn cx_agree() -> Qbaf {
    bundled("cx-agree")
}

pub fn cx_invar() -> Qbaf {
    bundled("cx-invar")
}

pub fn fraud_reference() -> ReferenceTable {
    ReferenceTable::from_json(text("fraud-reference").expect("bundled"))
        .expect("bundled reference table is valid")
}
