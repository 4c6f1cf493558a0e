//! Shared JSON helpers.

use serde::de::DeserializeOwned;
use thiserror::Error;

/// Schema or syntax error in a JSON document, located by a JSON-pointer-like
/// path (`.` for the root).
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid JSON at `{path}`: {message}")]
pub struct JsonError {
    pub path: String,
    pub message: String,
}

pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T, JsonError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| JsonError {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn from_json_value<T: DeserializeOwned>(value: serde_json::Value) -> Result<T, JsonError> {
    serde_path_to_error::deserialize(value).map_err(|e| JsonError {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}
