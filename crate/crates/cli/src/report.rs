//! Report envelope and emission.
//!
//! Every JSON report is wrapped in an envelope carrying `tool_version`,
//! `basis_convention`, the subcommand that produced it, and the coefficient
//! ring.  Serialization is `serde_json` pretty-printing of structs with
//! fixed field order and sorted maps, so a given payload always renders to
//! the same bytes.

use std::io::Write;
use std::path::Path;

use grouplaw::coeff::Ring;
use serde::Serialize;

use crate::input::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Output flags shared by every subcommand.
#[derive(Debug, Clone, clap::Args)]
pub struct OutputFlags {
    /// Report format.
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool_version: &'static str,
    basis_convention: &'static str,
    command: &'a str,
    ring: Ring,
    report: &'a T,
}

/// A report rendered in both formats, plus its pass/fail verdict.
pub struct Rendered {
    pub json: String,
    pub text: String,
    pub pass: bool,
}

impl Rendered {
    pub fn new<T: Serialize>(
        command: &str,
        ring: Ring,
        payload: &T,
        text: String,
        pass: bool,
    ) -> Rendered {
        let envelope = Envelope {
            tool_version: env!("CARGO_PKG_VERSION"),
            basis_convention: "lyndon",
            command,
            ring,
            report: payload,
        };
        let mut json =
            serde_json::to_string_pretty(&envelope).expect("reports serialize infallibly");
        json.push('\n');
        Rendered { json, text, pass }
    }

    /// Emit to stdout or `--output`; the verdict is returned for the exit
    /// code (reports are emitted even on verification failure).
    pub fn emit(&self, out: &OutputFlags) -> Result<bool, CliError> {
        let body = match out.format {
            Format::Json => &self.json,
            Format::Text => &self.text,
        };
        match &out.output {
            Some(path) => write_file(path, body)?,
            None => {
                let stdout = std::io::stdout();
                let mut handle = stdout.lock();
                handle
                    .write_all(body.as_bytes())
                    .map_err(|e| CliError::new(format!("cannot write to stdout: {e}")))?;
            }
        }
        Ok(self.pass)
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body)
        .map_err(|e| CliError::new(format!("--output: cannot write {}: {e}", path.display())))
}
