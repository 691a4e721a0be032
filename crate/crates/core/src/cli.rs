//! Command-line driver. `run` takes the argument list and output sinks and
//! returns the process exit code.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::NewformConfig;
use crate::engine::{ConductorReport, EngineError, Status};
use crate::fixtures::{bundled, check_fixture, names, outcomes_text, run_all_fixtures};
use crate::levels::level_table;
use crate::report;
use crate::schema::parse_config;
use crate::twists::orbit_decomposition;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_ENGINE: i32 = 3;
pub const EXIT_FIXTURE: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "blockcond",
    version,
    about = "Conductor of the building block of a modular abelian variety, from inner-twist data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Config file (JSON).
    #[arg(required_unless_present = "fixture", conflicts_with = "fixture")]
    path: Option<PathBuf>,
    /// Use a bundled fixture instead of a file.
    #[arg(long)]
    fixture: Option<String>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Norm exponents, splitting, ideal factorization and integrality of N_L(B).
    Analyze(Input),
    /// Orbits of the twist action and the restriction-of-scalars decomposition.
    Decompose(Input),
    /// The table of v_q(N_chi) with the rule behind each entry.
    Levels(Input),
    /// Case classification, closed-form residual, good reduction.
    Check(Input),
    /// Compare fixtures against their expected values (bundled ones by default).
    Fixtures {
        /// Fixture files to run instead of the bundled set.
        files: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
        /// Only list bundled fixture names.
        #[arg(long)]
        list: bool,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl ToString) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

fn load(input: &Input) -> Result<NewformConfig, Failure> {
    let text = match (&input.path, &input.fixture) {
        (_, Some(name)) => bundled(name)
            .ok_or_else(|| {
                fail(
                    EXIT_USAGE,
                    format!(
                        "unknown fixture {name:?}; bundled: {}",
                        names().collect::<Vec<_>>().join(", ")
                    ),
                )
            })?
            .to_string(),
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?,
        (None, None) => return Err(fail(EXIT_USAGE, "no input given")),
    };
    parse_config(&text).map_err(|e| fail(EXIT_VALIDATION, e))
}

fn engine_code(e: &EngineError) -> i32 {
    match e {
        EngineError::Level(_) => EXIT_VALIDATION,
        _ => EXIT_ENGINE,
    }
}

fn emit(out: &mut dyn Write, json: bool, text: String, value: serde_json::Value) {
    let body = if json {
        serde_json::to_string_pretty(&value).expect("serializable") + "\n"
    } else {
        text
    };
    let _ = out.write_all(body.as_bytes());
}

fn compute(config: &NewformConfig) -> Result<ConductorReport, Failure> {
    ConductorReport::compute(config).map_err(|e| fail(engine_code(&e), e))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Analyze(input) => {
            let config = load(&input)?;
            let r = compute(&config)?;
            emit(
                out,
                input.json,
                report::analysis_text(&r),
                report::analysis_json(&r),
            );
            if let Status::Indeterminate { q, range, needed } = r.status {
                return Err(fail(
                    EXIT_ENGINE,
                    EngineError::Indeterminate {
                        q,
                        range,
                        degree: r.degree,
                        needed,
                    },
                ));
            }
            Ok(EXIT_OK)
        }
        Command::Decompose(input) => {
            let config = load(&input)?;
            let d = orbit_decomposition(
                config.group(),
                config.twists(),
                config.deg_f(),
                config.schur_index(),
            )
            .map_err(|e| fail(EXIT_ENGINE, e))?;
            emit(
                out,
                input.json,
                report::decomposition_text(&config, &d),
                report::decomposition_json(&config, &d),
            );
            Ok(EXIT_OK)
        }
        Command::Levels(input) => {
            let config = load(&input)?;
            let t = level_table(&config).map_err(|e| fail(EXIT_VALIDATION, e))?;
            emit(
                out,
                input.json,
                report::levels_text(&config, &t),
                report::levels_json(&config, &t),
            );
            Ok(EXIT_OK)
        }
        Command::Check(input) => {
            let config = load(&input)?;
            let r = compute(&config)?;
            emit(
                out,
                input.json,
                report::check_text(&config, &r),
                report::check_json(&config, &r),
            );
            match r.closed_form_holds() {
                Some(false) => Err(fail(
                    EXIT_ENGINE,
                    format!(
                        "closed form for case {} does not hold",
                        r.classification.case
                    ),
                )),
                _ => Ok(EXIT_OK),
            }
        }
        Command::Fixtures { files, json, list } => {
            if list {
                for n in names() {
                    let _ = writeln!(out, "{n}");
                }
                return Ok(EXIT_OK);
            }
            let outcomes = if files.is_empty() {
                run_all_fixtures()
            } else {
                let mut v = Vec::new();
                for f in &files {
                    let text = std::fs::read_to_string(f)
                        .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", f.display())))?;
                    let name = f.file_stem().map_or("?".into(), |s| s.to_string_lossy());
                    v.push(check_fixture(&name, &text));
                }
                v
            };
            let value = serde_json::json!({
                "schema_version": report::SCHEMA_VERSION,
                "fixtures": outcomes,
                "passed": outcomes.iter().filter(|o| o.passed).count(),
                "total": outcomes.len(),
            });
            emit(out, json, outcomes_text(&outcomes), value);
            Ok(if outcomes.iter().all(|o| o.passed) {
                EXIT_OK
            } else {
                EXIT_FIXTURE
            })
        }
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
