//! Built-in example configs with their expected verdicts.

use std::path::Path;

use orbhull::fixtures::torus_fixtures;
use serde::{Deserialize, Serialize};

use crate::commands::Command;
use crate::config::{self, ConfigError, Experiment};
use crate::envelope::ReportEnvelope;
use crate::Overrides;

#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: String,
    pub command: Command,
    pub config: String,
    pub expected: String,
    /// Carried into the self-test result when the expectation rests on
    /// something this tool does not check.
    pub note: Option<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GalleryResult {
    pub name: String,
    pub command: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    pub detail: Option<String>,
}

fn entry(name: &str, command: Command, config: String, expected: &str) -> GalleryEntry {
    GalleryEntry {
        name: name.to_string(),
        command,
        config,
        expected: expected.to_string(),
        note: None,
    }
}

const ADJOINT_NOTE: &str = "antisymmetry of this orbit is externally asserted; only non-multiplicativity and v outside the nilcone are checked";

const SPHERE: &str = r#"# U(2) acting on C^2: the orbit of (1, 0) is the unit sphere.
[group]
kind = "unitary"
n = 2

[vector]
v = [[1, 0], [0, 0]]

[estimation]
degree_bound = 3
"#;

const ADJOINT: &str = r#"# SU(2) on sl(2, C) by conjugation, v = i*h + e.
[group]
kind = "special_unitary"
n = 2
representation = "adjoint"

[vector]
# row-major entries of [[i, 1], [0, -i]]
v = [[0, 1], [1, 0], [0, 0], [0, -1]]

[estimation]
degree_bound = 2

[[invariant]]
label = "tr(z^2)"
trace_of_square = 2
"#;

fn torus_config(weights: &[Vec<i64>], v: &[i64], note: &str) -> String {
    let rows: Vec<String> = weights
        .iter()
        .map(|w| format!("[{}]", w.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    let coords: Vec<String> = v.iter().map(|x| format!("[{x}, 0]")).collect();
    format!(
        "# {note}\n[action]\nweights = [{}]\n\n[vector]\nv = [{}]\n",
        rows.join(", "),
        coords.join(", ")
    )
}

/// Every gallery entry. Each torus fixture is run through the exact analysis,
/// the measure estimate and the flow, whose verdicts must agree.
pub fn entries() -> Vec<GalleryEntry> {
    let mut out = Vec::new();
    for f in torus_fixtures() {
        let weights: Vec<Vec<i64>> = f.action.weights().iter().map(|w| w.0.clone()).collect();
        let v: Vec<i64> = f
            .v
            .to_complex()
            .iter()
            .map(|z| z.re.round() as i64)
            .collect();
        let text = torus_config(&weights, &v, &format!("torus fixture {}", f.name));
        let exact = if f.antisymmetric { "antisymmetric" } else { "not-antisymmetric" };
        let measure = if f.antisymmetric { "antisymmetric-consistent" } else { "refuted" };
        out.push(entry(&format!("torus-{}", f.name), Command::TorusAnalyze, text.clone(), exact));
        out.push(entry(&format!("torus-{}-defect", f.name), Command::OrbitDefect, text.clone(), measure));
        let flow = if f.nilpotent { "in-nilcone" } else { "not-in-nilcone" };
        out.push(entry(&format!("torus-{}-flow", f.name), Command::OrbitFlow, text, flow));
    }
    out.push(entry("u2-sphere", Command::OrbitDefect, SPHERE.to_string(), "antisymmetric-consistent"));
    out.push(entry("u2-sphere-flow", Command::OrbitFlow, SPHERE.to_string(), "in-nilcone"));
    for (name, command, expected) in [
        ("su2-adjoint", Command::OrbitDefect, "refuted"),
        ("su2-adjoint-flow", Command::OrbitFlow, "not-in-nilcone"),
    ] {
        let mut e = entry(name, command, ADJOINT.to_string(), expected);
        e.note = Some(ADJOINT_NOTE);
        out.push(e);
    }
    for (name, preset, expected) in [
        ("so3-so2", "preset = \"so3_so2\"", "condition-f-holds"),
        ("su2-su2", "preset = \"su2_su2\"", "condition-f-holds"),
        ("torus2-trivial", "preset = \"torus_trivial\"\nn = 2", "condition-f-fails"),
    ] {
        out.push(entry(name, Command::GroupCheckF, format!("[lie_pair]\n{preset}\n"), expected));
    }
    out.push(entry(
        "gelfand-so3-so2",
        Command::GroupGelfand,
        "[gelfand]\nfamily = \"so3\"\nmax_label = 4\n".to_string(),
        "multiplicity-free",
    ));
    out.push(entry(
        "gelfand-su2-center",
        Command::GroupGelfand,
        "[gelfand]\nfamily = \"su2\"\nmax_label = 2\n".to_string(),
        "not-multiplicity-free",
    ));
    out
}

pub fn parse_entry(e: &GalleryEntry) -> Result<Experiment, ConfigError> {
    config::parse(&format!("<fixture {}>", e.name), &e.config, Path::new("."))
}

/// Writes each entry as `<name>.toml` into `dir`.
pub fn emit(dir: &Path) -> std::io::Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    for e in entries() {
        let file = format!("{}.toml", e.name);
        let body = format!("# orbhull {}, expected verdict: {}\n{}", e.command.name(), e.expected, e.config);
        std::fs::write(dir.join(&file), body)?;
        names.push(file);
    }
    Ok(names)
}

/// Runs every entry (or those whose name contains `only`), returning the
/// envelope and the per-entry results.
pub fn self_test(overrides: &Overrides, only: Option<&str>) -> (ReportEnvelope, Vec<GalleryResult>) {
    let mut base = config::ExperimentConfig::default();
    overrides.apply_to(&mut base);
    let mut env = ReportEnvelope::new("fixtures", base);
    let mut results = Vec::new();
    for e in entries().into_iter().filter(|e| only.is_none_or(|o| e.name.contains(o))) {
        let run = parse_entry(&e).map_err(|err| err.to_string()).and_then(|mut exp| {
            overrides.apply(&mut exp);
            e.command.run(&exp).map_err(|err| err.to_string())
        });
        let result = match run {
            Ok(outcome) => {
                for w in &outcome.envelope.warnings {
                    env.warn(format!("{}: {w}", e.name));
                }
                GalleryResult {
                    name: e.name.clone(),
                    command: e.command.name().to_string(),
                    pass: outcome.verdict == e.expected,
                    expected: e.expected.clone(),
                    observed: outcome.verdict,
                    detail: e.note.map(str::to_string),
                }
            }
            Err(msg) => GalleryResult {
                name: e.name.clone(),
                command: e.command.name().to_string(),
                expected: e.expected.clone(),
                observed: "error".to_string(),
                pass: false,
                detail: Some(msg),
            },
        };
        results.push(result);
    }
    let all_pass = results.iter().all(|r| r.pass);
    let verdict = if all_pass { "pass" } else { "fail" };
    env.insert("fixtures", serde_json::json!({ "verdict": verdict, "all_pass": all_pass, "results": results }));
    (env, results)
}
