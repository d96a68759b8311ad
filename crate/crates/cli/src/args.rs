//! Minimal flag parser: `--name value` pairs (repeatable) plus positionals.
//! Hand-rolled to keep full control of the exit-code contract.

use crate::report::CliError;
use std::collections::BTreeMap;

pub struct Args {
    flags: BTreeMap<String, Vec<String>>,
    positionals: Vec<String>,
}

impl Args {
    pub fn parse(tokens: &[String]) -> Result<Self, CliError> {
        let mut flags: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut positionals = Vec::new();
        let mut it = tokens.iter().peekable();
        while let Some(token) = it.next() {
            if let Some(name) = token.strip_prefix("--") {
                if name.is_empty() {
                    return Err(CliError::validation("bad-flag", "empty flag name"));
                }
                let value = it.next().ok_or_else(|| {
                    CliError::validation("missing-value", format!("flag --{name} needs a value"))
                })?;
                flags.entry(name.to_string()).or_default().push(value.clone());
            } else {
                positionals.push(token.clone());
            }
        }
        Ok(Self { flags, positionals })
    }

    pub fn positional(&self, index: usize) -> Option<&str> {
        self.positionals.get(index).map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.flags.get(name).and_then(|v| v.first()).map(String::as_str)
    }

    pub fn get_all(&self, name: &str) -> &[String] {
        self.flags.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn require(&self, name: &str) -> Result<&str, CliError> {
        self.get(name)
            .ok_or_else(|| CliError::validation("missing-flag", format!("flag --{name} is required")))
    }

    pub fn f64_flag(&self, name: &str) -> Result<f64, CliError> {
        let raw = self.require(name)?;
        raw.parse::<f64>().map_err(|_| {
            CliError::validation("bad-number", format!("flag --{name}: `{raw}` is not a number"))
        })
    }

    pub fn f64_flag_or(&self, name: &str, default: f64) -> Result<f64, CliError> {
        match self.get(name) {
            Some(raw) => raw.parse::<f64>().map_err(|_| {
                CliError::validation("bad-number", format!("flag --{name}: `{raw}` is not a number"))
            }),
            None => Ok(default),
        }
    }

    pub fn usize_flag_or(&self, name: &str, default: usize) -> Result<usize, CliError> {
        match self.get(name) {
            Some(raw) => raw.parse::<usize>().map_err(|_| {
                CliError::validation("bad-number", format!("flag --{name}: `{raw}` is not an integer"))
            }),
            None => Ok(default),
        }
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        match self.get("seed") {
            Some(raw) => raw.parse::<u64>().map_err(|_| {
                CliError::validation("bad-number", format!("flag --seed: `{raw}` is not an integer"))
            }),
            None => Ok(0),
        }
    }
}
