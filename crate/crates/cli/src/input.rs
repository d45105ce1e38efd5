use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::{Config, Invalid};

pub fn read_value(path: &Path) -> Result<Value, Invalid> {
    let text = std::fs::read_to_string(path).map_err(|e| Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Invalid(format!("{}: {e}", path.display())))
}

pub fn parse<T: DeserializeOwned>(value: Value, what: &str) -> Result<T, Invalid> {
    serde_json::from_value(value).map_err(|e| Invalid(format!("expected {what}: {e}")))
}

/// The `--input` file decoded as `T`, if given.
pub fn optional<T: DeserializeOwned>(cfg: &Config, what: &str) -> Result<Option<T>, Invalid> {
    match &cfg.input {
        Some(path) => Ok(Some(parse(read_value(path)?, what)?)),
        None => Ok(None),
    }
}

pub fn required(cfg: &Config) -> Result<Value, Invalid> {
    let path = cfg.input.as_ref().ok_or_else(|| Invalid("this command needs --input".into()))?;
    read_value(path)
}
