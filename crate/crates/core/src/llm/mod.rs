//! Chat-completion providers and extraction of the SQL statement from a
//! model reply.

mod extract;
mod http;
mod mock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use extract::{extract_query, ExtractionMethod, GeneratedQuery};
pub use http::HttpProvider;
pub use mock::{MockProvider, MockRule, MockRuleSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LlmError {
    #[error("request timed out")]
    Timeout,
    #[error("endpoint returned HTTP {status}: {body}")]
    HttpError { status: u16, body: String },
    #[error("transport error: {0}")]
    Transport(String),
    #[error("malformed response: {0}")]
    BadResponse(String),
    #[error("model returned an empty completion")]
    EmptyCompletion,
    #[error("no SELECT statement found in completion")]
    NoQueryFound { raw_completion: String },
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Anything that can turn a prompt into completion text.
pub trait CompletionProvider: Send + Sync {
    fn complete(&self, prompt: &str) -> Result<String, LlmError>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LlmConfig {
    pub base_url: String,
    pub model_name: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub timeout_secs: f64,
    #[serde(skip_serializing)]
    pub api_key: Option<String>,
}

impl Default for LlmConfig {
    fn default() -> Self {
        Self {
            base_url: "http://localhost:1234/v1".into(),
            model_name: "local-model".into(),
            temperature: 0.0,
            max_tokens: 512,
            timeout_secs: 60.0,
            api_key: None,
        }
    }
}

pub const ENV_BASE_URL: &str = "RT_LLM_BASE_URL";
pub const ENV_MODEL: &str = "RT_LLM_MODEL";
pub const ENV_API_KEY: &str = "RT_LLM_API_KEY";

impl LlmConfig {
    pub fn validate(&self) -> Result<(), LlmError> {
        let url = reqwest::Url::parse(&self.base_url)
            .map_err(|e| LlmError::Config(format!("base_url: {e}")))?;
        if !matches!(url.scheme(), "http" | "https") {
            return Err(LlmError::Config("base_url must be http(s)".into()));
        }
        if !(self.timeout_secs > 0.0 && self.timeout_secs.is_finite()) {
            return Err(LlmError::Config("timeout must be positive".into()));
        }
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return Err(LlmError::Config("temperature must be >= 0".into()));
        }
        if self.max_tokens == 0 {
            return Err(LlmError::Config("max_tokens must be positive".into()));
        }
        Ok(())
    }

    /// Applies `RT_LLM_*` overrides from the given lookup (normally
    /// `std::env::var`).
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) {
        if let Some(v) = lookup(ENV_BASE_URL) {
            self.base_url = v;
        }
        if let Some(v) = lookup(ENV_MODEL) {
            self.model_name = v;
        }
        if let Some(v) = lookup(ENV_API_KEY) {
            self.api_key = Some(v);
        }
    }
}

/// Sends the prompt and extracts the database query from the reply.
pub fn generate_db_query(
    prompt: &str,
    provider: &dyn CompletionProvider,
) -> Result<GeneratedQuery, LlmError> {
    let raw = provider.complete(prompt)?;
    extract_query(&raw).ok_or(LlmError::NoQueryFound {
        raw_completion: raw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(LlmConfig::default().validate().is_ok());
        let bad = LlmConfig {
            base_url: "not a url".into(),
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = LlmConfig {
            timeout_secs: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn env_overrides() {
        let mut cfg = LlmConfig::default();
        cfg.apply_env(|k| match k {
            ENV_BASE_URL => Some("http://example:9/v1".into()),
            ENV_API_KEY => Some("secret".into()),
            _ => None,
        });
        assert_eq!(cfg.base_url, "http://example:9/v1");
        assert_eq!(cfg.model_name, "local-model");
        assert_eq!(cfg.api_key.as_deref(), Some("secret"));
    }

    #[test]
    fn prose_only_reply_has_no_query() {
        let mock = MockProvider::with_default("I cannot answer.");
        match generate_db_query("anything", &mock) {
            Err(LlmError::NoQueryFound { raw_completion }) => {
                assert_eq!(raw_completion, "I cannot answer.")
            }
            other => panic!("{other:?}"),
        }
    }
}
