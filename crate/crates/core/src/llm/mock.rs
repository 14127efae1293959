use serde::{Deserialize, Serialize};

use super::{CompletionProvider, LlmError};

/// Returns `completion` when every string in `when_all` occurs in the prompt
/// (case-sensitive).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MockRule {
    pub name: String,
    pub when_all: Vec<String>,
    pub completion: String,
}

impl MockRule {
    pub fn new(name: &str, when_all: Vec<String>, completion: &str) -> Self {
        Self {
            name: name.into(),
            when_all,
            completion: completion.into(),
        }
    }

    fn matches(&self, prompt: &str) -> bool {
        self.when_all.iter().all(|needle| prompt.contains(needle.as_str()))
    }
}

/// On-disk form of a mock rule table.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MockRuleSet {
    #[serde(default)]
    pub default: Option<String>,
    pub rules: Vec<MockRule>,
}

/// Deterministic stand-in for a chat model: first matching rule wins.
#[derive(Debug, Clone, Default)]
pub struct MockProvider {
    rules: Vec<MockRule>,
    default: Option<String>,
}

impl MockProvider {
    pub fn new(rules: Vec<MockRule>) -> Self {
        Self {
            rules,
            default: None,
        }
    }

    pub fn with_default(default: &str) -> Self {
        Self {
            rules: Vec::new(),
            default: Some(default.into()),
        }
    }

    pub fn from_rule_set(set: MockRuleSet) -> Self {
        Self {
            rules: set.rules,
            default: set.default,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str::<MockRuleSet>(text).map(Self::from_rule_set)
    }

    /// Rules for the bundled B2B sales example table.
    pub fn builtin() -> Self {
        Self::from_json(include_str!("../../data/mock_rules.json")).expect("bundled mock rules parse")
    }

    pub fn push(&mut self, rule: MockRule) {
        self.rules.push(rule);
    }

    /// Name of the rule that would answer `prompt`.
    pub fn matching_rule(&self, prompt: &str) -> Option<&str> {
        self.rules
            .iter()
            .find(|r| r.matches(prompt))
            .map(|r| r.name.as_str())
    }
}

impl CompletionProvider for MockProvider {
    fn complete(&self, prompt: &str) -> Result<String, LlmError> {
        let reply = self
            .rules
            .iter()
            .find(|r| r.matches(prompt))
            .map(|r| r.completion.clone())
            .or_else(|| self.default.clone())
            .unwrap_or_default();
        if reply.trim().is_empty() {
            return Err(LlmError::EmptyCompletion);
        }
        Ok(reply)
    }
}
