use std::collections::{BTreeMap, HashSet};

use crate::llm::CompletionProvider;
use crate::table::normalize_identifier;
use crate::text::normalize_phrase;

use super::{SynonymEntry, SynonymSource, VocabError};

/// Source of business synonyms for attribute names.
pub trait SynonymProvider {
    fn source(&self) -> SynonymSource;

    /// Raw synonym strings for one normalized attribute name.
    fn synonyms_for(&self, attribute: &str) -> Result<Vec<String>, VocabError>;
}

/// Provider that never returns anything.
pub struct NoSynonyms;

impl SynonymProvider for NoSynonyms {
    fn source(&self) -> SynonymSource {
        SynonymSource::Builtin
    }

    fn synonyms_for(&self, _attribute: &str) -> Result<Vec<String>, VocabError> {
        Ok(Vec::new())
    }
}

/// Static dictionary read from `attribute_name: syn1, syn2` lines.
#[derive(Debug, Clone, Default)]
pub struct SynonymDictionary {
    entries: BTreeMap<String, Vec<String>>,
    source: Option<SynonymSource>,
}

impl SynonymDictionary {
    /// The dictionary bundled with the crate.
    pub fn builtin() -> Self {
        Self::parse(include_str!("../../data/synonyms.txt")).expect("bundled synonyms parse")
    }

    /// Parses dictionary text. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut entries: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, syns) = line
                .split_once(':')
                .ok_or_else(|| format!("line {}: expected `attribute: synonyms`", n + 1))?;
            let key = normalize_identifier(key)
                .ok_or_else(|| format!("line {}: empty attribute name", n + 1))?;
            entries.entry(key).or_default().extend(
                syns.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from),
            );
        }
        Ok(Self {
            entries,
            source: None,
        })
    }

    /// Marks the dictionary as user supplied rather than bundled.
    pub fn user(mut self) -> Self {
        self.source = Some(SynonymSource::User);
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl SynonymProvider for SynonymDictionary {
    fn source(&self) -> SynonymSource {
        self.source.unwrap_or(SynonymSource::Builtin)
    }

    fn synonyms_for(&self, attribute: &str) -> Result<Vec<String>, VocabError> {
        let key = normalize_identifier(attribute).unwrap_or_default();
        Ok(self.entries.get(&key).cloned().unwrap_or_default())
    }
}

/// Asks a chat model for synonyms, one per line.
pub struct LlmSynonymProvider<'a> {
    provider: &'a dyn CompletionProvider,
}

impl<'a> LlmSynonymProvider<'a> {
    pub fn new(provider: &'a dyn CompletionProvider) -> Self {
        Self { provider }
    }

    pub fn prompt(attribute: &str) -> String {
        format!(
            "You are helping business users search a data table.\n\
             List alternative words or short phrases a business user might use \
             to refer to the column named \"{}\".\n\
             Reply with one synonym per line and nothing else.",
            attribute.replace('_', " ")
        )
    }
}

impl SynonymProvider for LlmSynonymProvider<'_> {
    fn source(&self) -> SynonymSource {
        SynonymSource::Llm
    }

    fn synonyms_for(&self, attribute: &str) -> Result<Vec<String>, VocabError> {
        let reply = self
            .provider
            .complete(&Self::prompt(attribute))
            .map_err(|e| VocabError::ProviderUnavailable(e.to_string()))?;
        Ok(reply.lines().filter_map(clean_line).collect())
    }
}

/// Strips list markers, numbering and quotes from one reply line.
fn clean_line(line: &str) -> Option<String> {
    let mut s = line.trim();
    s = s.trim_start_matches(['-', '*', '\u{2022}']).trim_start();
    let digits = s.chars().take_while(char::is_ascii_digit).count();
    if digits > 0 && s[digits..].starts_with(['.', ')']) {
        s = s[digits + 1..].trim_start();
    }
    let s = s.trim_matches(['"', '\'', '`']).trim();
    (!s.is_empty()).then(|| s.to_string())
}

/// Synonyms for every attribute, normalized and de-duplicated. Synonyms equal
/// to any attribute's own name are dropped.
pub fn generate_synonyms(
    attribute_names: &[&str],
    provider: &dyn SynonymProvider,
) -> Result<Vec<SynonymEntry>, VocabError> {
    let own_names: HashSet<String> = attribute_names.iter().map(|n| normalize_phrase(n)).collect();
    let mut out = Vec::new();
    for (attribute_id, name) in attribute_names.iter().enumerate() {
        let mut seen = HashSet::new();
        for raw in provider.synonyms_for(name)? {
            let norm = normalize_phrase(&raw);
            if norm.is_empty() || own_names.contains(&norm) || !seen.insert(norm.clone()) {
                continue;
            }
            out.push(SynonymEntry {
                attribute_id,
                synonym_text: norm,
                source: provider.source(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::{LlmError, MockProvider, MockRule};

    #[test]
    fn dictionary_lookup() {
        let dict = SynonymDictionary::parse("profit: earnings, margin\n").unwrap();
        let got = generate_synonyms(&["profit"], &dict).unwrap();
        let texts: Vec<_> = got.iter().map(|s| s.synonym_text.as_str()).collect();
        assert_eq!(texts, vec!["earnings", "margin"]);
        assert!(got.iter().all(|s| s.source == SynonymSource::Builtin));
    }

    #[test]
    fn no_dictionary_hit() {
        let dict = SynonymDictionary::parse("profit: earnings\n").unwrap();
        assert!(generate_synonyms(&["zzz_code"], &dict).unwrap().is_empty());
    }

    #[test]
    fn normalizes_and_dedupes() {
        let dict = SynonymDictionary::parse(
            "# comment\nUnit Price: Price per Unit, price-per-unit, unit price, , cost\n",
        )
        .unwrap()
        .user();
        let got = generate_synonyms(&["unit_price"], &dict).unwrap();
        let texts: Vec<_> = got.iter().map(|s| s.synonym_text.as_str()).collect();
        assert_eq!(texts, vec!["price per unit", "cost"]);
        assert_eq!(got[0].source, SynonymSource::User);
    }

    #[test]
    fn malformed_dictionary_line() {
        assert!(SynonymDictionary::parse("profit earnings").is_err());
    }

    #[test]
    fn bundled_dictionary_loads() {
        let dict = SynonymDictionary::builtin();
        assert!(!dict.is_empty());
        assert!(dict.synonyms_for("sales").unwrap().contains(&"revenue".to_string()));
    }

    #[test]
    fn llm_provider_parses_lines() {
        let mock = MockProvider::new(vec![MockRule::new(
            "sales",
            vec!["column named \"sales\"".into()],
            "revenue\nturnover\n",
        )]);
        let provider = LlmSynonymProvider::new(&mock);
        let got = generate_synonyms(&["sales"], &provider).unwrap();
        let texts: Vec<_> = got.iter().map(|s| s.synonym_text.as_str()).collect();
        assert_eq!(texts, vec!["revenue", "turnover"]);
        assert!(got.iter().all(|s| s.source == SynonymSource::Llm));
    }

    #[test]
    fn llm_list_markers_are_stripped() {
        assert_eq!(clean_line("1. Revenue").as_deref(), Some("Revenue"));
        assert_eq!(clean_line("- \"gross sales\"").as_deref(), Some("gross sales"));
        assert_eq!(clean_line("   "), None);
    }

    struct Down;
    impl CompletionProvider for Down {
        fn complete(&self, _prompt: &str) -> Result<String, LlmError> {
            Err(LlmError::Transport("connection refused".into()))
        }
    }

    #[test]
    fn llm_provider_unavailable() {
        let provider = LlmSynonymProvider::new(&Down);
        assert!(matches!(
            generate_synonyms(&["sales"], &provider),
            Err(VocabError::ProviderUnavailable(_))
        ));
    }
}
