//! Command-line front end for scatterlab.
//!
//! Every JSON report is wrapped in the envelope
//! `{"tool","version","command","config","result","elapsed_ms"}`. Exit codes:
//! 0 scattered (or success), 1 not scattered (or a failed verification),
//! 2 error.

pub mod commands;
pub mod config;
pub mod parse;
pub mod report;

use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::json;

pub use commands::{dispatch, Output, EXIT_ERROR, EXIT_NOT_SCATTERED, EXIT_SCATTERED};
pub use config::{Format, RunConfig};
use report::Envelope;

/// Environment variable overriding the field-size bound.
pub const MAX_FIELD_ENV: &str = "SCATTERLAB_MAX_FIELD";

/// Rendered report text and exit code.
#[derive(Debug)]
pub struct Rendered {
    pub text: String,
    pub exit: i32,
}

fn apply_env() -> Result<()> {
    if let Ok(v) = std::env::var(MAX_FIELD_ENV) {
        let bound: u64 = v.trim().parse().with_context(|| format!("{MAX_FIELD_ENV}={v} is not an integer"))?;
        if bound < 2 {
            bail!("{MAX_FIELD_ENV} must be at least 2");
        }
        scatterlab::field::set_max_field_size(bound);
    }
    Ok(())
}

fn render(config: &RunConfig, out: &Output, elapsed_ms: u64) -> Result<String> {
    match config.global.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Envelope::new(config, &out.result, elapsed_ms))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => match &out.table {
            Some(t) => t.to_csv(),
            None => bail!("`{}` has no CSV form; use --format json", config.command.name()),
        },
    }
}

/// Runs the command on a pool of `--jobs` workers and renders the report.
pub fn execute(config: &RunConfig) -> Result<Rendered> {
    apply_env()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.global.jobs.unwrap_or(0)).build()?;
    let start = Instant::now();
    let out = pool.install(|| dispatch(config))?;
    let elapsed = if config.global.reproducible { 0 } else { start.elapsed().as_millis() as u64 };
    Ok(Rendered { text: render(config, &out, elapsed)?, exit: out.exit })
}

fn emit(config: &RunConfig, text: &str) -> Result<()> {
    match &config.global.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

/// Full run: execute, write the report, and map failures to exit code 2 with
/// a diagnostic on standard error and an error envelope on the output.
pub fn run(config: &RunConfig) -> i32 {
    let result = execute(config).and_then(|r| emit(config, &r.text).map(|_| r.exit));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if config.global.format == Format::Json {
                let body = json!({"error": format!("{e:#}")});
                if let Ok(mut s) = serde_json::to_string_pretty(&Envelope::new(config, &body, 0)) {
                    s.push('\n');
                    let _ = emit(config, &s);
                }
            }
            EXIT_ERROR
        }
    }
}
