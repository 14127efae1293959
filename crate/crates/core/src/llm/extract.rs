use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtractionMethod {
    FencedBlock,
    FirstSelect,
    WholeText,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedQuery {
    pub raw_completion: String,
    pub sql_text: String,
    pub extraction_method: ExtractionMethod,
}

static FENCE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?s)```[A-Za-z0-9_+-]*[ \t]*\r?\n?(.*?)```").unwrap());
static SELECT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\bselect\b").unwrap());

/// End offset of the statement starting at `start`: the first `;` outside a
/// string literal, a blank line, a code fence, or the end of `text`.
fn statement_end(text: &str, start: usize) -> usize {
    let bytes = text.as_bytes();
    let mut in_string: Option<u8> = None;
    let mut i = start;
    while i < bytes.len() {
        let b = bytes[i];
        match in_string {
            Some(q) if b == q => in_string = None,
            Some(_) => {}
            None => match b {
                b'\'' | b'"' => in_string = Some(b),
                b';' => return i,
                b'\n' => {
                    let next_line = text[i + 1..].split('\n').next().unwrap_or("").trim();
                    if next_line.is_empty() || next_line.starts_with("```") {
                        return i;
                    }
                }
                b'`' if text[i..].starts_with("```") => return i,
                _ => {}
            },
        }
        i += 1;
    }
    bytes.len()
}

fn statement_at(text: &str, start: usize) -> &str {
    text[start..statement_end(text, start)].trim()
}

/// Pulls the SQL statement out of a completion: fenced block first, then the
/// first `SELECT` in free text. `None` when no `SELECT` appears.
pub fn extract_query(raw: &str) -> Option<GeneratedQuery> {
    let found = |sql: &str, method| GeneratedQuery {
        raw_completion: raw.to_string(),
        sql_text: sql.to_string(),
        extraction_method: method,
    };

    for block in FENCE.captures_iter(raw) {
        let body = block.get(1).unwrap();
        if let Some(m) = SELECT.find(body.as_str()) {
            let sql = statement_at(raw, body.start() + m.start());
            if !sql.is_empty() {
                return Some(found(sql, ExtractionMethod::FencedBlock));
            }
        }
    }

    let m = SELECT.find(raw)?;
    let sql = statement_at(raw, m.start());
    let trimmed = raw.trim();
    let rest = trimmed
        .strip_prefix(sql)
        .map(|r| r.trim_start_matches(';').trim());
    let method = if trimmed.as_ptr() == sql.as_ptr() && rest == Some("") {
        ExtractionMethod::WholeText
    } else {
        ExtractionMethod::FirstSelect
    };
    Some(found(sql, method))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sql(raw: &str) -> Option<(String, ExtractionMethod)> {
        extract_query(raw).map(|q| (q.sql_text, q.extraction_method))
    }

    #[test]
    fn fenced_block() {
        let q = "SELECT AVG(profit) FROM sales WHERE product = 'OneView' AND customer = 'Allianz' AND subregion = 'ANZ'";
        let raw = format!("```sql\n{q}\n```");
        assert_eq!(sql(&raw), Some((q.to_string(), ExtractionMethod::FencedBlock)));
    }

    #[test]
    fn fenced_block_with_semicolon_and_prose() {
        let raw = "Here you go:\n```sql\n-- average\nSELECT 1 FROM t;\n```\nThis computes it.";
        assert_eq!(
            sql(raw),
            Some(("SELECT 1 FROM t".to_string(), ExtractionMethod::FencedBlock))
        );
    }

    #[test]
    fn first_select_in_prose() {
        assert_eq!(
            sql("Sure! SELECT COUNT(*) FROM t"),
            Some(("SELECT COUNT(*) FROM t".to_string(), ExtractionMethod::FirstSelect))
        );
        assert_eq!(
            sql("Answer:\nselect a from t;\nThat is all."),
            Some(("select a from t".to_string(), ExtractionMethod::FirstSelect))
        );
    }

    #[test]
    fn trailing_prose_after_blank_line() {
        assert_eq!(
            sql("SELECT a\nFROM t\n\nThis query returns a."),
            Some(("SELECT a\nFROM t".to_string(), ExtractionMethod::FirstSelect))
        );
    }

    #[test]
    fn semicolon_inside_literal_does_not_end_statement() {
        assert_eq!(
            sql("SELECT a FROM t WHERE b = 'x;y'; done"),
            Some((
                "SELECT a FROM t WHERE b = 'x;y'".to_string(),
                ExtractionMethod::FirstSelect
            ))
        );
    }

    #[test]
    fn whole_text() {
        assert_eq!(
            sql("  SELECT a FROM t;\n"),
            Some(("SELECT a FROM t".to_string(), ExtractionMethod::WholeText))
        );
    }

    #[test]
    fn no_select() {
        assert_eq!(sql("I cannot answer."), None);
        assert_eq!(sql("```\nno query here\n```"), None);
        assert_eq!(sql("The selected rows"), None);
    }

    #[test]
    fn sql_is_substring_of_raw() {
        for raw in ["x ```sql\nSELECT 1\n```", "Sure! SELECT 2 FROM t", "SELECT 3"] {
            let q = extract_query(raw).unwrap();
            assert!(q.raw_completion.contains(&q.sql_text));
        }
    }

    #[test]
    fn idempotent() {
        for raw in [
            "```sql\nSELECT a FROM t WHERE x = 'a;b'\n```",
            "Well SELECT COUNT(*) FROM t; ok",
            "SELECT a\nFROM t\n\nbye",
        ] {
            let once = extract_query(raw).unwrap().sql_text;
            let twice = extract_query(&once).unwrap();
            assert_eq!(twice.sql_text, once);
            assert_eq!(twice.extraction_method, ExtractionMethod::WholeText);
        }
    }
}
