//! Command implementations shared by the binary and the test suite.
//!
//! Exit codes: `0` success (bound outcome for `analyze`), `2` input error,
//! `3` numerical failure, `10` a splitting was found.

use std::fs;
use std::path::Path;

use coxsplit_core::pipeline::{self, AnalyzeOptions, Outcome, PipelineError};
use coxsplit_core::Tolerances;

use crate::formats::{parse_representation_document, parse_system, DocError};
use crate::report::{splittings_document, tree_dump, ConstantsDocument, ReportDocument};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_SPLITTING: u8 = 10;

/// Outcome of one command: exit code, stdout payload, stderr diagnostics.
pub struct CommandResult {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> CommandResult {
        CommandResult { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: u8, message: String) -> CommandResult {
        CommandResult { code, stdout: String::new(), stderr: message }
    }
}

fn read(path: &Path) -> Result<String, DocError> {
    fs::read_to_string(path).map_err(|e| DocError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("document serialises");
    out.push('\n');
    out
}

/// Whether a pipeline failure reflects bad input (exit 2) rather than a
/// numerical breakdown (exit 3).
fn is_input_error(err: &PipelineError) -> bool {
    matches!(
        err,
        PipelineError::WrongMatrixCount { .. }
            | PipelineError::NotLorentz { .. }
            | PipelineError::NotInvolution { .. }
            | PipelineError::RelatorViolated { .. }
            | PipelineError::NonPositiveMargulis
    )
}

/// `splittings`: enumerate all nontrivial special splittings with smallness
/// verdicts per core.
pub fn cmd_splittings(system_file: &Path) -> CommandResult {
    let system = match read(system_file).and_then(|text| parse_system(&text)) {
        Ok(system) => system,
        Err(e) => return CommandResult::fail(EXIT_INPUT, format!("error: {e}\n")),
    };
    CommandResult::ok(pretty(&splittings_document(&system)))
}

/// `constants`: evaluate `c`, `δ`, `R`, `Λ_n`, `C` for the given rank,
/// site count and Margulis constant.
pub fn cmd_constants(k: usize, size_x: Option<usize>, mu: f64) -> CommandResult {
    if k < 1 {
        return CommandResult::fail(EXIT_INPUT, "error: k must be at least 1\n".into());
    }
    let size_x = size_x.unwrap_or_else(|| (k * k.saturating_sub(1) / 2).max(1));
    if size_x < 1 {
        return CommandResult::fail(EXIT_INPUT, "error: sizeX must be at least 1\n".into());
    }
    match pipeline::constants_for(k, size_x, mu) {
        Ok(c) => CommandResult::ok(pretty(&ConstantsDocument::from_constants(&c))),
        Err(e) => CommandResult::fail(EXIT_INPUT, format!("error: {e}\n")),
    }
}

pub struct AnalyzeFlags {
    pub margulis: f64,
    pub tol_point: Option<f64>,
    pub tol_fix: Option<f64>,
    pub budget: u32,
    pub dump_tree: bool,
}

/// `analyze`: the full pipeline, emitting a report document.
pub fn cmd_analyze(system_file: &Path, rep_file: &Path, flags: &AnalyzeFlags) -> CommandResult {
    let inputs = (|| -> Result<_, DocError> {
        let system = parse_system(&read(system_file)?)?;
        let rep_doc = parse_representation_document(&read(rep_file)?)?;
        Ok((system, rep_doc))
    })();
    let (system, rep_doc) = match inputs {
        Ok(pair) => pair,
        Err(e) => return CommandResult::fail(EXIT_INPUT, format!("error: {e}\n")),
    };
    // Document overrides apply to the defaults; explicit flags win.
    let mut tol = rep_doc.tolerances.unwrap_or_default().apply(Tolerances::default());
    if let Some(p) = flags.tol_point {
        tol.point = p;
    }
    if let Some(f) = flags.tol_fix {
        tol.fix = f;
    }
    let rep = match rep_doc.to_representation_with(&system, tol) {
        Ok(rep) => rep,
        Err(DocError::Representation(e)) if !is_input_error(&e) => {
            return CommandResult::fail(EXIT_NUMERICAL, format!("numerical failure: {e}\n"))
        }
        Err(e) => return CommandResult::fail(EXIT_INPUT, format!("error: {e}\n")),
    };
    let options = AnalyzeOptions { budget: flags.budget };
    let report = match pipeline::analyze(&system, &rep, flags.margulis, &options) {
        Ok(report) => report,
        Err(e) if is_input_error(&e) => {
            return CommandResult::fail(EXIT_INPUT, format!("error: {e}\n"))
        }
        Err(e) => return CommandResult::fail(EXIT_NUMERICAL, format!("numerical failure: {e}\n")),
    };
    let mut doc = ReportDocument::from_report(&report, &system);
    if flags.dump_tree {
        match pipeline::build_artifacts(&system, &rep) {
            Ok(Some(artifacts)) => {
                doc.tree = Some(tree_dump(
                    &artifacts.atree,
                    &artifacts.labelling,
                    &artifacts.useful.edges,
                    &system,
                ));
            }
            Ok(None) => {}
            Err(e) => {
                return CommandResult::fail(EXIT_NUMERICAL, format!("numerical failure: {e}\n"))
            }
        }
    }
    let code = match report.outcome {
        Outcome::Splitting(_) => EXIT_SPLITTING,
        Outcome::Bound(_) => EXIT_OK,
    };
    CommandResult { code, stdout: doc.to_pretty_json(), stderr: String::new() }
}

/// `check`: validate documents without running the analysis.
pub fn cmd_check(system_file: &Path, rep_file: Option<&Path>) -> CommandResult {
    let system = match read(system_file).and_then(|text| parse_system(&text)) {
        Ok(system) => system,
        Err(e) => return CommandResult::fail(EXIT_INPUT, format!("error: {e}\n")),
    };
    let mut out = format!("system: ok ({} generators)\n", system.rank());
    if let Some(rep_file) = rep_file {
        let loaded = read(rep_file)
            .and_then(|text| parse_representation_document(&text))
            .and_then(|doc| doc.to_representation(&system, Tolerances::default()));
        match loaded {
            Ok(rep) => out.push_str(&format!("representation: ok (dimension {})\n", rep.dim())),
            Err(e) => return CommandResult::fail(EXIT_INPUT, format!("error: {e}\n")),
        }
    }
    CommandResult::ok(out)
}
