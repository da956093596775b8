//! Command implementations behind the `conjoint` binary.
//!
//! Each command returns a [`CommandOutcome`]: rendered output for
//! standard output, diagnostics for standard error, and an exit code.
//! Codes: 0 success, 1 scenario validation failure, 2 usage error,
//! 3 internal numerical failure. Divergence between the two physical
//! descriptions is a result, never an error.

pub mod render;

use conjoint::{
    assemble_complete_state, divergence_report, joint_distribution, parse_scenario_with,
    sample_joint, tv_distance, Direction, EngineError, OracleError, ScenarioDocument, Severity,
    Tolerance,
};
use std::path::Path;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// What a command produced: stdout content, stderr content, exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub rendered: String,
    pub diagnostics: String,
}

impl CommandOutcome {
    fn ok(rendered: String, diagnostics: String) -> Self {
        CommandOutcome {
            exit_code: EXIT_OK,
            rendered,
            diagnostics,
        }
    }

    fn fail(exit_code: i32, diagnostics: String) -> Self {
        CommandOutcome {
            exit_code,
            rendered: String::new(),
            diagnostics,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
}

fn tolerance(eps: f64) -> Result<Tolerance, CommandOutcome> {
    Tolerance::new(eps)
        .map_err(|e| CommandOutcome::fail(EXIT_USAGE, format!("error: --eps: {e}\n")))
}

/// Reads and parses a scenario file; on success also carries any
/// warnings, already rendered one per line.
fn load(path: &Path, tol: Tolerance) -> Result<(ScenarioDocument, String), CommandOutcome> {
    let bytes = std::fs::read(path).map_err(|e| {
        CommandOutcome::fail(
            EXIT_USAGE,
            format!("error: cannot read {}: {e}\n", path.display()),
        )
    })?;
    let outcome = parse_scenario_with(&bytes, tol);
    let mut lines = String::new();
    for d in &outcome.diagnostics {
        lines.push_str(&d.to_string());
        lines.push('\n');
    }
    match outcome.document {
        Some(doc) => Ok((doc, lines)),
        None => Err(CommandOutcome::fail(EXIT_INVALID, lines)),
    }
}

fn engine_failure(e: EngineError) -> CommandOutcome {
    let code = match e {
        EngineError::InvalidScenario { .. }
        | EngineError::JointEvolutionNotExpressible
        | EngineError::MissingDeclaredEvolution
        | EngineError::Model(_) => EXIT_INVALID,
        _ => EXIT_NUMERICAL,
    };
    CommandOutcome::fail(code, format!("error: {e}\n"))
}

/// `validate`: parse and check a scenario, reporting every diagnostic.
/// The diagnostics are the product here, so they go to standard output.
pub fn cmd_validate(path: &Path, eps: f64) -> CommandOutcome {
    let tol = match tolerance(eps) {
        Ok(t) => t,
        Err(out) => return out,
    };
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => {
            return CommandOutcome::fail(
                EXIT_USAGE,
                format!("error: cannot read {}: {e}\n", path.display()),
            )
        }
    };
    let outcome = parse_scenario_with(&bytes, tol);
    let mut rendered = String::new();
    for d in &outcome.diagnostics {
        rendered.push_str(&d.to_string());
        rendered.push('\n');
    }
    let has_errors = outcome
        .diagnostics
        .iter()
        .any(|d| d.severity == Severity::Error);
    if has_errors {
        CommandOutcome {
            exit_code: EXIT_INVALID,
            rendered,
            diagnostics: String::new(),
        }
    } else {
        rendered.push_str("OK\n");
        CommandOutcome::ok(rendered, String::new())
    }
}

fn computed_joint(
    doc: &ScenarioDocument,
    tol: Tolerance,
) -> Result<conjoint::JointTable, CommandOutcome> {
    let scenario = doc.scenario();
    let state = assemble_complete_state(scenario.preparation())
        .map_err(|e| engine_failure(EngineError::Model(e)))?;
    joint_distribution(
        &state,
        scenario.evolution(),
        scenario.basis_a(),
        scenario.basis_b(),
        tol,
    )
    .map_err(engine_failure)
}

/// `joint`: the outcome distribution of the complete description.
pub fn cmd_joint(path: &Path, format: OutputFormat, eps: f64) -> CommandOutcome {
    let tol = match tolerance(eps) {
        Ok(t) => t,
        Err(out) => return out,
    };
    let (doc, warnings) = match load(path, tol) {
        Ok(x) => x,
        Err(out) => return out,
    };
    match computed_joint(&doc, tol) {
        Ok(jt) => {
            let rendered = match format {
                OutputFormat::Text => render::joint_text(&jt),
                OutputFormat::Csv => render::joint_csv(&jt),
            };
            CommandOutcome::ok(rendered, warnings)
        }
        Err(out) => out,
    }
}

fn cmd_conditional(
    path: &Path,
    direction: Direction,
    format: OutputFormat,
    eps: f64,
) -> CommandOutcome {
    let tol = match tolerance(eps) {
        Ok(t) => t,
        Err(out) => return out,
    };
    let (doc, warnings) = match load(path, tol) {
        Ok(x) => x,
        Err(out) => return out,
    };
    match computed_joint(&doc, tol) {
        Ok(jt) => {
            let ct = jt.conditional(direction);
            let rendered = match format {
                OutputFormat::Text => render::conditional_text(&ct),
                OutputFormat::Csv => render::conditional_csv(&ct),
            };
            CommandOutcome::ok(rendered, warnings)
        }
        Err(out) => out,
    }
}

/// `predict`: p(b|a) from the complete joint distribution.
pub fn cmd_predict(path: &Path, format: OutputFormat, eps: f64) -> CommandOutcome {
    cmd_conditional(path, Direction::Predictive, format, eps)
}

/// `retrodict`: p(a|b) from the complete joint distribution.
pub fn cmd_retrodict(path: &Path, format: OutputFormat, eps: f64) -> CommandOutcome {
    cmd_conditional(path, Direction::Retrodictive, format, eps)
}

/// `compare`: conventional vs complete joint tables with the total
/// variation distance between them.
pub fn cmd_compare(path: &Path, format: OutputFormat, eps: f64) -> CommandOutcome {
    let tol = match tolerance(eps) {
        Ok(t) => t,
        Err(out) => return out,
    };
    let (doc, warnings) = match load(path, tol) {
        Ok(x) => x,
        Err(out) => return out,
    };
    match divergence_report(doc.scenario(), tol) {
        Ok(report) => {
            let rendered = match format {
                OutputFormat::Text => render::compare_text(&report),
                OutputFormat::Csv => render::compare_csv(&report),
            };
            CommandOutcome::ok(rendered, warnings)
        }
        Err(e) => engine_failure(e),
    }
}

/// `sample`: draw n outcomes with a seeded generator and report the
/// distance to the exact table.
pub fn cmd_sample(path: &Path, n: u64, seed: u64, eps: f64) -> CommandOutcome {
    let tol = match tolerance(eps) {
        Ok(t) => t,
        Err(out) => return out,
    };
    if n == 0 {
        return CommandOutcome::fail(EXIT_USAGE, "error: --n must be at least 1\n".to_string());
    }
    let (doc, warnings) = match load(path, tol) {
        Ok(x) => x,
        Err(out) => return out,
    };
    let scenario = doc.scenario();
    let run = match sample_joint(scenario, n, seed, tol) {
        Ok(r) => r,
        Err(OracleError::Engine(e)) => return engine_failure(e),
        Err(e) => return CommandOutcome::fail(EXIT_USAGE, format!("error: {e}\n")),
    };
    let exact = match computed_joint(&doc, tol) {
        Ok(jt) => jt,
        Err(out) => return out,
    };
    let tv = match tv_distance(&run.empirical(), &exact) {
        Ok(x) => x,
        Err(e) => return CommandOutcome::fail(EXIT_NUMERICAL, format!("error: {e}\n")),
    };
    CommandOutcome::ok(render::sample_text(&run, tv), warnings)
}
