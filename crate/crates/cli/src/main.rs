mod args;
mod commands;

use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;

use bottomk::report::{to_json, write_file, RunManifest};
use bottomk::Error;
use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Parse(_) | Error::Unreachable(_) => EXIT_USAGE,
        Error::Capacity(_) => EXIT_CAPACITY,
        Error::Numeric { .. } => EXIT_NUMERIC,
        Error::Io { .. } | Error::Json(_) => EXIT_FAILURE,
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

fn params_of(cmd: &Command) -> bottomk::Result<BTreeMap<String, Value>> {
    match serde_json::to_value(cmd)?.get("params") {
        Some(Value::Object(m)) => Ok(m.clone().into_iter().collect()),
        _ => Ok(BTreeMap::new()),
    }
}

fn command_of(m: &RunManifest) -> bottomk::Result<Command> {
    Ok(serde_json::from_value(json!({"subcommand": m.subcommand, "params": m.params}))?)
}

/// Runs `cmd`, writes its outputs and manifest under `out`, and returns the manifest.
fn execute(cmd: &Command, out: &Path) -> bottomk::Result<RunManifest> {
    let started = now();
    let output = commands::run(cmd)?;
    let mut manifest = RunManifest {
        subcommand: cmd.name().to_string(),
        params: params_of(cmd)?,
        seed: cmd.seed(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        started,
        finished: String::new(),
        outputs: BTreeMap::new(),
    };
    for (name, contents) in &output.files {
        write_file(&out.join(name), contents)?;
        manifest.record(name, contents);
    }
    manifest.finished = now();
    write_file(&out.join("manifest.json"), &to_json(&manifest)?)?;
    if let Some((_, main)) = output.files.first() {
        print!("{main}");
    }
    Ok(manifest)
}

/// Re-executes a manifest; differing digests are reported and fail the run.
fn replay(path: &Path, out: &Path) -> bottomk::Result<bool> {
    let stored = RunManifest::load(path)?;
    let fresh = execute(&command_of(&stored)?, out)?;
    let mut same = true;
    for (name, digest) in &stored.outputs {
        match fresh.outputs.get(name) {
            Some(d) if d == digest => {}
            other => {
                same = false;
                eprintln!("{name}: stored {digest}, replay {}", other.map_or("missing", String::as_str));
            }
        }
    }
    Ok(same)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match (&cli.manifest, &cli.command) {
        (Some(_), Some(_)) => {
            eprintln!("--manifest cannot be combined with a subcommand");
            return ExitCode::from(EXIT_USAGE);
        }
        (Some(path), None) => replay(path, &cli.out),
        (None, Some(cmd)) => execute(cmd, &cli.out).map(|_| true),
        (None, None) => {
            eprintln!("a subcommand or --manifest is required; see --help");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILURE),
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Numeric { trace, .. } = &e {
                for (i, (re, im)) in trace.iter().enumerate() {
                    eprintln!("  iterate {i}: {re} {im:+}i");
                }
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
