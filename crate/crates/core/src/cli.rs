//! Command-line front end. [`run`] is the whole program minus process exit.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use crate::attribution::{
    aae_all, aae_by_paths, aae_direct, aae_finite_difference, aae_indirect, DEFAULT_EPSILON,
};
use crate::document::QbafDocument;
use crate::error::{Error, Result};
use crate::export::{export_dot, fixed5, serialize_report};
use crate::fixtures;
use crate::framework::{ArgumentId, Qbaf};
use crate::paths::{classify_connectivity, ConnectivityClass};
use crate::properties::{run_suite, Outcome};
use crate::reference::ReferenceTable;
use crate::report::{attribution_report, ranking_order};

#[derive(Debug, Parser)]
#[command(
    name = "qbaf",
    version,
    about = "Evaluate and explain quantitative bipolar argumentation frameworks"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a framework file is well formed
    Validate { file: String },
    /// Print every argument's strength and aggregates in topological order
    Eval { file: String },
    /// Print every argument's attribution toward the topic
    Attribute {
        file: String,
        #[arg(long)]
        topic: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Reverse)]
        method: Method,
        /// Finite-difference step, only with `--method fd`
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Ranked attribution report as CSV
    Rank {
        file: String,
        #[arg(long)]
        topic: Option<String>,
        /// Write the CSV here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every property check; fails only on failures that should not happen
    Check {
        file: String,
        #[arg(long)]
        topic: Option<String>,
    },
    /// Graphviz rendering annotated with attributions
    ExportDot {
        file: String,
        #[arg(long)]
        topic: Option<String>,
    },
    /// List or print the bundled example files
    #[command(group(ArgGroup::new("action").required(true).args(["list", "emit"])))]
    Fixtures {
        #[arg(long)]
        list: bool,
        #[arg(long, value_name = "NAME")]
        emit: Option<String>,
    },
    /// Print a reference attribution table sorted by attribution
    Reference { file: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Reverse,
    Analytic,
    Fd,
}

/// Usage problems detected after argument parsing.
struct Usage(String);

enum Failure {
    Domain(Error),
    Usage(Usage),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::MissingTopic => Failure::Usage(Usage(err.to_string())),
            other => Failure::Domain(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Domain(Error::Io(err.to_string()))
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

/// Runs the program. Returns the exit code: 0 on success, 1 on a domain
/// error, 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(Failure::Usage(Usage(message))) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

/// File contents, or a bundled fixture when no such file exists.
fn read_source(file: &str) -> Result<String> {
    let path = Path::new(file);
    if path.exists() {
        return fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read `{file}`: {e}")));
    }
    fixtures::text(file).map(str::to_owned).ok_or_else(|| {
        Error::Io(format!(
            "`{file}` is neither a readable file nor a bundled fixture"
        ))
    })
}

fn load(file: &str) -> Result<(Qbaf, Option<String>)> {
    let document = QbafDocument::from_json(&read_source(file)?)?;
    let q = document.to_qbaf()?;
    Ok((q, document.topic))
}

fn load_with_topic(file: &str, topic: Option<String>) -> Result<(Qbaf, String)> {
    let (q, default) = load(file)?;
    let topic = topic.or(default).ok_or(Error::MissingTopic)?;
    q.require(&topic)?;
    Ok((q, topic))
}

fn id_width<'a>(ids: impl Iterator<Item = &'a ArgumentId>) -> usize {
    ids.map(|id| id.as_str().len()).max().unwrap_or(0).max(8)
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Validate { file } => {
            let (q, _) = load(&file)?;
            writeln!(
                out,
                "ok: {} arguments, {} attacks, {} supports",
                q.len(),
                q.attacks().len(),
                q.supports().len()
            )?;
        }
        Command::Eval { file } => {
            let (q, _) = load(&file)?;
            let width = id_width(q.ids().iter());
            writeln!(
                out,
                "{:<width$}  {:>7}  {:>7}  {:>7}",
                "argument", "sigma", "v_a", "v_s"
            )?;
            let strengths = q.strengths();
            for id in q.topological_order() {
                let node = strengths
                    .get(id.as_str())
                    .expect("every argument is evaluated");
                writeln!(
                    out,
                    "{:<width$}  {:>7}  {:>7}  {:>7}",
                    id.as_str(),
                    fixed5(node.sigma),
                    fixed5(node.v_a),
                    fixed5(node.v_s)
                )?;
            }
        }
        Command::Attribute {
            file,
            topic,
            method,
            epsilon,
        } => {
            if epsilon.is_some() && method != Method::Fd {
                return Err(Failure::Usage(Usage(
                    "--epsilon requires --method fd".into(),
                )));
            }
            let (q, topic) = load_with_topic(&file, topic)?;
            let rows = attributions(&q, &topic, method, epsilon.unwrap_or(DEFAULT_EPSILON))?;
            let width = id_width(rows.iter().map(|(id, _, _)| id));
            for (id, value, class) in rows {
                writeln!(
                    out,
                    "{:<width$}  {:>8}  {class}",
                    id.as_str(),
                    fixed5(value)
                )?;
            }
        }
        Command::Rank {
            file,
            topic,
            out: path,
        } => {
            let (q, topic) = load_with_topic(&file, topic)?;
            let report = attribution_report(&q, &topic)?;
            let text = serialize_report(&report);
            match path {
                Some(path) => {
                    fs::write(&path, &text).map_err(|e| {
                        Error::Io(format!("cannot write `{}`: {e}", path.display()))
                    })?;
                    writeln!(
                        out,
                        "wrote {} rows to {}",
                        report.rows.len(),
                        path.display()
                    )?;
                }
                None => out.write_all(text.as_bytes())?,
            }
            if !report.tie_points.is_empty() {
                let ids: Vec<&str> = report.tie_points.iter().map(ArgumentId::as_str).collect();
                writeln!(
                    err,
                    "note: tied aggregates at {}; attributions through them are one-sided",
                    ids.join(", ")
                )?;
            }
        }
        Command::Check { file, topic } => {
            let (q, topic) = load_with_topic(&file, topic)?;
            return check(&q, &topic, out);
        }
        Command::ExportDot { file, topic } => {
            let (q, topic) = load_with_topic(&file, topic)?;
            let report = attribution_report(&q, &topic)?;
            out.write_all(export_dot(&q, &report)?.as_bytes())?;
        }
        Command::Fixtures { list, emit } => {
            if list {
                for name in fixtures::names() {
                    writeln!(out, "{name}")?;
                }
            } else if let Some(name) = emit {
                let text = fixtures::text(&name).ok_or(Error::UnknownFixture(name))?;
                out.write_all(text.as_bytes())?;
            }
        }
        Command::Reference { file } => {
            let table = ReferenceTable::from_json(&read_source(&file)?)?;
            writeln!(
                out,
                "topic {} strength {}",
                table.topic,
                fixed5(table.topic_strength)
            )?;
            writeln!(
                out,
                "{:>6}  {:>10}  {:>5}  {:>8}  content",
                "index", "aae", "tau", "strength"
            )?;
            for row in table.sorted_by_aae() {
                writeln!(
                    out,
                    "{:>6}  {:>10.2E}  {:>5}  {:>8}  {}",
                    row.index,
                    row.aae,
                    row.base_score,
                    fixed5(row.strength),
                    row.content
                )?;
            }
        }
    }
    Ok(0)
}

fn attributions(
    q: &Qbaf,
    topic: &str,
    method: Method,
    epsilon: f64,
) -> Result<Vec<(ArgumentId, f64, ConnectivityClass)>> {
    let mut rows = Vec::with_capacity(q.len());
    let reverse = aae_all(q, topic)?;
    for (id, reverse_value) in reverse.iter() {
        let class = classify_connectivity(q, id.as_str(), topic)?;
        let value = match method {
            Method::Reverse => reverse_value,
            Method::Fd => aae_finite_difference(q, topic, id.as_str(), epsilon)?,
            Method::Analytic => {
                let sa = q.strengths();
                match class {
                    ConnectivityClass::Disconnected => 0.0,
                    ConnectivityClass::Direct => aae_direct(q, sa, id.as_str(), topic)?.value,
                    ConnectivityClass::Indirect => aae_indirect(q, sa, id.as_str(), topic)?.value,
                    ConnectivityClass::Multifold => aae_by_paths(q, sa, id.as_str(), topic)?.value,
                }
            }
        };
        rows.push((id.clone(), value, class));
    }
    rows.sort_by(|a, b| ranking_order((&a.0, a.1), (&b.0, b.1)));
    Ok(rows)
}

fn check(q: &Qbaf, topic: &str, out: &mut dyn Write) -> CliResult<i32> {
    let verdicts = run_suite(q, topic)?;
    let mut unexpected = 0;
    let mut expected = 0;
    for verdict in &verdicts {
        writeln!(out, "{verdict}")?;
        if verdict.outcome == Outcome::Violated {
            if verdict.is_guaranteed() {
                unexpected += 1;
            } else {
                expected += 1;
            }
        }
    }
    let count = |o: Outcome| verdicts.iter().filter(|v| v.outcome == o).count();
    writeln!(
        out,
        "{} verdicts: {} hold, {} vacuous, {} skipped, {} fail under multifold connectivity, {} fail under direct or indirect connectivity",
        verdicts.len(),
        count(Outcome::Satisfied),
        count(Outcome::Vacuous),
        count(Outcome::Skipped),
        expected,
        unexpected
    )?;
    Ok(if unexpected > 0 { 1 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn invoke(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("qbaf").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn attribute_fake_news_matches_table() {
        let (code, out, _) = invoke(&["attribute", "fakenews", "--topic", "A"]);
        assert_eq!(code, 0);
        let values: Vec<(&str, &str)> = out
            .lines()
            .map(|l| {
                let mut parts = l.split_whitespace();
                (parts.next().unwrap(), parts.next().unwrap())
            })
            .collect();
        assert_eq!(
            values,
            [
                ("C", "0.37500"),
                ("B", "0.12500"),
                ("F", "0.06250"),
                ("G", "-0.06250"),
                ("H", "-0.06250"),
                ("E", "-0.12500"),
                ("D", "-0.43750"),
            ]
        );
    }

    #[test]
    fn methods_agree_on_fake_news() {
        let (_, reverse, _) = invoke(&["attribute", "fakenews", "--method", "reverse"]);
        let (_, analytic, _) = invoke(&["attribute", "fakenews", "--method", "analytic"]);
        let (_, fd, _) = invoke(&[
            "attribute",
            "fakenews",
            "--method",
            "fd",
            "--epsilon",
            "1e-6",
        ]);
        assert_eq!(reverse, analytic);
        assert_eq!(reverse, fd);
    }

    #[test]
    fn epsilon_without_fd_is_usage_error() {
        let (code, _, err) = invoke(&["attribute", "fakenews", "--epsilon", "0.1"]);
        assert_eq!(code, 2);
        assert!(err.contains("--method fd"));
    }

    #[test]
    fn topic_falls_back_to_document() {
        let (code, _, err) = invoke(&["attribute", "running"]);
        assert_eq!(code, 0, "{err}");
        let text = r#"{"arguments": [{"id": "A", "base_score": 0.5}]}"#;
        let file = std::env::temp_dir().join(format!("qbaf-no-topic-{}.json", std::process::id()));
        fs::write(&file, text).unwrap();
        let (code, _, err) = invoke(&["attribute", file.to_str().unwrap()]);
        fs::remove_file(&file).unwrap();
        assert_eq!(code, 2);
        assert!(err.contains("topic"));
    }

    #[test]
    fn help_and_version_succeed() {
        assert_eq!(invoke(&["--help"]).0, 0);
        assert_eq!(invoke(&["--version"]).0, 0);
        assert_eq!(invoke(&[]).0, 2);
        assert_eq!(invoke(&["fixtures"]).0, 2);
    }

    #[test]
    fn check_exit_codes() {
        let (code, out, _) = invoke(&["check", "fakenews", "--topic", "A"]);
        assert_eq!(code, 0);
        assert!(!out.contains("FAILS"));
        let (code, out, _) = invoke(&["check", "cx-complete", "--topic", "A"]);
        assert_eq!(code, 0, "multifold failures are informational");
        assert!(out.contains("FAILS"));
    }

    #[test]
    fn reference_table_lists_rows() {
        let (code, out, _) = invoke(&["reference", "fraud-reference"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 2 + 47);
        assert!(out.lines().nth(2).unwrap().trim_start().starts_with("2 "));
        let (code, _, err) = invoke(&["eval", "fraud-reference"]);
        assert_eq!(code, 1);
        assert!(err.contains("reference table"));
    }
}
