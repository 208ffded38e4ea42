//! `diarep`: run workspace commands and report as JSON.
//!
//! Exit codes: 0 when every command passes, 1 on a mathematical failure,
//! 2 on an input error. The JSON report goes to stdout, a summary to stderr.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use diarep::fincat::Convention;
use diarep::linalg::Field;
use diarep_cli::commands::{self, Options, Status};
use diarep_cli::workspace::{Command, Workspace};
use diarep_cli::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "diarep", version, about = "Representations over diagrams of module categories")]
struct Cli {
    /// Workspace file; its `[run]` block runs when no command is given.
    #[arg(long)]
    workspace: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Field for generation and for workspaces without `[field]`: `Fp:N` or `Q`.
    #[arg(long)]
    field: Option<Field>,
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Index category of the φ/ψ (co)limits.
    #[arg(long, default_value = "comma")]
    convention: Convention,
    /// One command to run instead of the `[run]` block.
    command: Option<String>,
    /// Arguments as `key=value`; values are TOML literals or bare strings.
    args: Vec<String>,
}

#[derive(Serialize)]
struct CommandReport {
    op: String,
    args: Value,
    status: Status,
    result: Value,
    millis: f64,
}

#[derive(Serialize)]
struct Report {
    tool: &'static str,
    version: &'static str,
    rustc: &'static str,
    seed: u64,
    field: String,
    convention: Convention,
    max_dim: usize,
    workspace: Option<String>,
    commands: Vec<CommandReport>,
    passed: bool,
}

const DEFAULT_FIELD: Field = Field::Prime(3);

fn parse_arg(raw: &str) -> CliResult<(String, toml::Value)> {
    let (k, v) = raw.split_once('=').ok_or_else(|| CliError::Input(format!("argument `{raw}` is not key=value")))?;
    let value = format!("v = {v}").parse::<toml::Table>().ok().and_then(|mut t| t.remove("v")).unwrap_or_else(|| toml::Value::String(v.to_string()));
    Ok((k.trim().to_string(), value))
}

fn execute(cli: &Cli) -> CliResult<Report> {
    let default_field = cli.field.unwrap_or(DEFAULT_FIELD);
    let mut ws = match &cli.workspace {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Workspace::parse(&text, default_field)?
        }
        None => Workspace::empty(default_field),
    };
    let commands: Vec<Command> = match &cli.command {
        Some(op) => {
            let args = cli.args.iter().map(|a| parse_arg(a)).collect::<CliResult<toml::Table>>()?;
            vec![Command::new(op, args)?]
        }
        None => ws.commands.clone(),
    };
    if commands.is_empty() {
        return Err(CliError::Input("nothing to run: give a command or a workspace with a [run] block".into()));
    }
    ws.check_referenced(&commands)?;
    let opts = Options { seed: cli.seed, field: cli.field.unwrap_or(ws.field), max_dim: cli.max_dim, convention: cli.convention };
    let mut reports = Vec::new();
    for (k, cmd) in commands.iter().enumerate() {
        let start = Instant::now();
        let outcome = commands::run(&mut ws, cmd, k, &opts)?;
        let millis = start.elapsed().as_secs_f64() * 1e3;
        eprintln!("{:<15} {}", cmd.op, if outcome.status == Status::Pass { "pass" } else { "FAIL" });
        reports.push(CommandReport {
            op: cmd.op.clone(),
            args: serde_json::to_value(&cmd.args).unwrap_or(Value::Null),
            status: outcome.status,
            result: outcome.result,
            millis,
        });
    }
    let passed = reports.iter().all(|r| r.status == Status::Pass);
    Ok(Report {
        tool: "diarep",
        version: env!("CARGO_PKG_VERSION"),
        rustc: env!("DIAREP_RUSTC_VERSION"),
        seed: cli.seed,
        field: opts.field.to_string(),
        convention: cli.convention,
        max_dim: cli.max_dim,
        workspace: cli.workspace.as_ref().map(|p| p.display().to_string()),
        commands: reports,
        passed,
    })
}

fn emit(cli: &Cli, value: &Value) -> ExitCode {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    // A closed pipe on stdout is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if let Some(path) = &cli.json_out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(report) => {
            let code = if report.passed { 0 } else { 1 };
            let value = serde_json::to_value(&report).expect("report serializes");
            if emit(&cli, &value) != ExitCode::SUCCESS {
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let mut err = json!({ "kind": e.kind(), "message": e.to_string() });
            match &e {
                CliError::Parse { line, column, .. } => {
                    err["line"] = json!(line);
                    err["column"] = json!(column);
                }
                CliError::ValidationFailure { report, .. } => err["report"] = serde_json::to_value(report).unwrap_or(Value::Null),
                _ => {}
            }
            let _ = emit(&cli, &json!({ "tool": "diarep", "version": env!("CARGO_PKG_VERSION"), "error": err, "passed": false }));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
