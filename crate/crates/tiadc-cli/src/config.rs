//! Optional JSON config files mirroring the command-line flags.
//!
//! A config file is a flat JSON object whose keys are the long option names
//! of the subcommand (`{"n": 16, "target": -80, "yield": 0.99}`). Values
//! given on the command line take precedence.

use crate::error::CliError;
use std::path::Path;

pub struct ConfigFile {
    values: serde_json::Map<String, serde_json::Value>,
}

impl ConfigFile {
    pub fn empty() -> Self {
        Self {
            values: serde_json::Map::new(),
        }
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::empty());
        };
        let text = std::fs::read_to_string(path)?;
        let parsed: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
            CliError::Validation(format!("{}: not valid JSON: {e}", path.display()))
        })?;
        match parsed {
            serde_json::Value::Object(values) => Ok(Self { values }),
            _ => Err(CliError::Validation(format!(
                "{}: config must be a JSON object of flag values",
                path.display()
            ))),
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| bad(key, "a number")),
        }
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(|u| Some(u as usize)).ok_or_else(|| bad(key, "an integer")),
        }
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => match (v.as_u64(), v.as_f64()) {
                (Some(u), _) => Ok(Some(u)),
                // Allow {"trials": 1e7}.
                (None, Some(f)) if f >= 1.0 && f.fract() == 0.0 => Ok(Some(f as u64)),
                _ => Err(bad(key, "a count")),
            },
        }
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.as_bool().map(Some).ok_or_else(|| bad(key, "a boolean")),
        }
    }

    pub fn string(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(|s| Some(s.to_string()))
                .ok_or_else(|| bad(key, "a string")),
        }
    }

    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(serde_json::Value::Array(items)) => items
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| bad(key, "an array of numbers")))
                .collect::<Result<Vec<f64>, _>>()
                .map(Some),
            Some(_) => Err(bad(key, "an array of numbers")),
        }
    }

    pub fn string_list(&self, key: &str) -> Result<Option<Vec<String>>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(serde_json::Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(String::from)
                        .ok_or_else(|| bad(key, "an array of strings"))
                })
                .collect::<Result<Vec<String>, _>>()
                .map(Some),
            Some(serde_json::Value::String(s)) => Ok(Some(vec![s.clone()])),
            Some(_) => Err(bad(key, "an array of strings")),
        }
    }
}

fn bad(key: &str, wanted: &str) -> CliError {
    CliError::Validation(format!("config key '{key}' must be {wanted}"))
}
