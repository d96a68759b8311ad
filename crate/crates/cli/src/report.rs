//! Report and error envelopes shared by every subcommand.

use serde::Serialize;

/// Top-level report: inputs echo, results with certification flags, and
/// provenance. `wall_time_ms` is the only field excluded from the
/// byte-determinism contract.
#[derive(Serialize)]
pub struct Report {
    pub subcommand: String,
    pub inputs: serde_json::Value,
    pub results: serde_json::Value,
    pub provenance: Provenance,
    pub wall_time_ms: u128,
}

#[derive(Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub threads: usize,
    pub tolerances: Tolerances,
}

/// Pinned numeric tolerances, echoed for reproducibility.
#[derive(Serialize)]
pub struct Tolerances {
    pub mass_sum: f64,
    pub witness: f64,
    pub certificate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { mass_sum: 1e-12, witness: 1e-9, certificate: 1e-9 }
    }
}

/// CLI error with its exit code: 2 validation, 64 unknown subcommand,
/// 65 malformed JSON.
#[derive(Debug)]
pub struct CliError {
    pub exit: u8,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn unknown_subcommand(name: &str) -> Self {
        Self {
            exit: 64,
            kind: "unknown-subcommand".into(),
            message: format!("unknown subcommand `{name}`; see `vmlab --help`"),
        }
    }

    pub fn validation(kind: &str, message: impl Into<String>) -> Self {
        Self { exit: 2, kind: kind.into(), message: message.into() }
    }

    pub fn io(err: std::io::Error) -> Self {
        Self { exit: 2, kind: "io".into(), message: err.to_string() }
    }
}

impl From<vmlab_core::Error> for CliError {
    fn from(err: vmlab_core::Error) -> Self {
        Self { exit: 2, kind: err.kind().into(), message: err.to_string() }
    }
}

/// Read and parse a JSON instance file. JSON syntax problems exit 65;
/// schema/validation problems exit 2.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, CliError> {
    let raw = std::fs::read_to_string(path).map_err(CliError::io)?;
    serde_json::from_str(&raw).map_err(|err| match err.classify() {
        serde_json::error::Category::Syntax | serde_json::error::Category::Eof => CliError {
            exit: 65,
            kind: "malformed-json".into(),
            message: format!("{path}: {err}"),
        },
        _ => CliError {
            exit: 2,
            kind: "invalid-instance".into(),
            message: format!("{path}: {err}"),
        },
    })
}
