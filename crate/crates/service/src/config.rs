//! TOML configuration with environment overrides.
//!
//! ```toml
//! provider = "mock"            # or "http"
//! mock_rules = "rules.json"    # optional, replaces the bundled rules
//! request_timeout_secs = 60
//!
//! [server]
//! port = 8080
//! data_dir = "data"
//! static_dir = "console/dist"
//!
//! [llm]
//! base_url = "http://localhost:1234/v1"
//! model_name = "local-model"
//! temperature = 0.0
//! max_tokens = 512
//! timeout_secs = 60
//! ```
//!
//! `RT_LLM_BASE_URL`, `RT_LLM_MODEL` and `RT_LLM_API_KEY` override the
//! `[llm]` table; `RT_PROVIDER` overrides `provider`.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use roundtable_core::llm::{CompletionProvider, HttpProvider, LlmConfig, MockProvider};
use serde::{Deserialize, Serialize};

pub const ENV_PROVIDER: &str = "RT_PROVIDER";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderKind {
    #[default]
    Mock,
    Http,
}

impl FromStr for ProviderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mock" => Ok(ProviderKind::Mock),
            "http" => Ok(ProviderKind::Http),
            other => Err(format!("unknown provider {other:?} (expected mock or http)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerConfig {
    pub port: u16,
    pub data_dir: Option<PathBuf>,
    pub static_dir: Option<PathBuf>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            port: 8080,
            data_dir: None,
            static_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub provider: ProviderKind,
    pub mock_rules: Option<PathBuf>,
    pub request_timeout_secs: f64,
    pub server: ServerConfig,
    pub llm: LlmConfig,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            provider: ProviderKind::Mock,
            mock_rules: None,
            request_timeout_secs: 60.0,
            server: ServerConfig::default(),
            llm: LlmConfig::default(),
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> anyhow::Result<Config> {
        let config: Config = toml::from_str(text)?;
        if !(config.request_timeout_secs > 0.0 && config.request_timeout_secs.is_finite()) {
            bail!("request_timeout_secs must be positive");
        }
        Ok(config)
    }

    /// Reads `path` when given, otherwise starts from defaults; then applies
    /// environment overrides.
    pub fn load(path: Option<&Path>) -> anyhow::Result<Config> {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Config::parse(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => Config::default(),
        };
        config.apply_env(|k| std::env::var(k).ok())?;
        Ok(config)
    }

    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> anyhow::Result<()> {
        if let Some(p) = lookup(ENV_PROVIDER) {
            self.provider = p.parse().map_err(anyhow::Error::msg)?;
        }
        self.llm.apply_env(lookup);
        Ok(())
    }

    pub fn build_provider(&self) -> anyhow::Result<Box<dyn CompletionProvider>> {
        Ok(match self.provider {
            ProviderKind::Http => Box::new(HttpProvider::new(self.llm.clone())?),
            ProviderKind::Mock => match &self.mock_rules {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    Box::new(MockProvider::from_json(&text).with_context(|| format!("parsing {}", path.display()))?)
                }
                None => Box::new(MockProvider::builtin()),
            },
        })
    }
}
