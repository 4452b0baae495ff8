//! Model configuration files.
//!
//! ```json
//! {"q": 2, "transition": [[0.85, 0.15], [0.28, 0.72]], "epsilon": [0.01],
//!  "n_terms": 100, "log_base": "2"}
//! ```
//!
//! `n_terms` and `log_base` are optional. Unknown keys are rejected.
//! Probabilistic validity is left to `entrate_core::validate_model`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use entrate_core::{validate_model, LogBase, ValidatedModel};
use serde::Deserialize;
use thiserror::Error;

pub const DEFAULT_N_TERMS: usize = 100;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("cannot read {}: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error in `{field}`: {message}")]
    Schema { field: String, message: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    q: Option<usize>,
    transition: Option<Vec<Vec<f64>>>,
    epsilon: Option<Vec<f64>>,
    n_terms: Option<usize>,
    log_base: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub q: usize,
    pub transition: Vec<Vec<f64>>,
    pub epsilon: Vec<f64>,
    pub n_terms: usize,
    pub log_base: LogBase,
}

impl ModelConfig {
    pub fn validate(&self) -> entrate_core::Result<ValidatedModel> {
        validate_model(&self.transition, &self.epsilon)
    }
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Schema {
        field: field.into(),
        message: message.into(),
    }
}

/// Pulls the field name out of serde's "unknown field `x`" style messages.
fn field_from_message(msg: &str) -> String {
    msg.split('`').nth(1).unwrap_or("<root>").to_string()
}

pub fn parse_str(text: &str) -> Result<ModelConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => {
                let msg = e.to_string();
                schema(field_from_message(&msg), msg)
            }
            _ => ConfigError::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            },
        }
    })?;

    let q = raw.q.ok_or_else(|| schema("q", "missing"))?;
    if q < 2 {
        return Err(schema("q", format!("need at least 2 symbols, got {q}")));
    }
    let transition = raw.transition.ok_or_else(|| schema("transition", "missing"))?;
    if transition.len() != q {
        return Err(schema(
            "transition",
            format!("{} rows, expected q = {q}", transition.len()),
        ));
    }
    for (i, row) in transition.iter().enumerate() {
        if row.len() != q {
            return Err(schema(
                format!("transition[{i}]"),
                format!("{} entries, expected q = {q}", row.len()),
            ));
        }
    }
    let epsilon = raw.epsilon.ok_or_else(|| schema("epsilon", "missing"))?;
    if epsilon.len() != q - 1 {
        return Err(schema(
            "epsilon",
            format!("{} entries, expected q - 1 = {}", epsilon.len(), q - 1),
        ));
    }
    let log_base = match raw.log_base.as_deref() {
        None => LogBase::default(),
        Some(s) => s
            .parse()
            .map_err(|e| schema("log_base", format!("{e}, got {s:?}")))?,
    };

    Ok(ModelConfig {
        q,
        transition,
        epsilon,
        n_terms: raw.n_terms.unwrap_or(DEFAULT_N_TERMS),
        log_base,
    })
}

pub fn parse_config(path: &Path) -> Result<ModelConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| match source.kind() {
        io::ErrorKind::NotFound => ConfigError::FileNotFound(path.to_path_buf()),
        _ => ConfigError::Io {
            path: path.to_path_buf(),
            source,
        },
    })?;
    parse_str(&text)
}
