//! Immutable typed columnar tables loaded from CSV.
//!
//! Column types are inferred over every non-null cell in the column, trying
//! `Integer`, `Float`, `Boolean` and `Date` in that order before falling back
//! to `Text`. Empty cells and `NA` / `N/A` are nulls and never influence the
//! inferred type.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TableError {
    #[error("malformed CSV at row {row}: {reason}")]
    MalformedCsv { row: usize, reason: String },
    #[error("table has no data rows")]
    EmptyTable,
    #[error("input is not valid UTF-8")]
    InvalidUtf8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DataType {
    Text,
    Integer,
    Float,
    Boolean,
    Date,
}

impl DataType {
    pub fn name(self) -> &'static str {
        match self {
            DataType::Text => "Text",
            DataType::Integer => "Integer",
            DataType::Float => "Float",
            DataType::Boolean => "Boolean",
            DataType::Date => "Date",
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, DataType::Integer | DataType::Float)
    }
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single typed value, or null.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Null,
    Integer(i64),
    Float(f64),
    Boolean(bool),
    Date(NaiveDate),
    Text(String),
}

impl Cell {
    pub fn is_null(&self) -> bool {
        matches!(self, Cell::Null)
    }

    pub fn data_type(&self) -> Option<DataType> {
        match self {
            Cell::Null => None,
            Cell::Integer(_) => Some(DataType::Integer),
            Cell::Float(_) => Some(DataType::Float),
            Cell::Boolean(_) => Some(DataType::Boolean),
            Cell::Date(_) => Some(DataType::Date),
            Cell::Text(_) => Some(DataType::Text),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Integer(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    /// Text form used when writing CSV. Floats keep a fractional part so the
    /// column re-infers as `Float`.
    pub fn render(&self) -> String {
        match self {
            Cell::Null => String::new(),
            Cell::Integer(v) => v.to_string(),
            Cell::Float(v) => format!("{v:?}"),
            Cell::Boolean(v) => v.to_string(),
            Cell::Date(d) => d.format("%Y-%m-%d").to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Null => f.write_str("NULL"),
            other => f.write_str(&other.render()),
        }
    }
}

impl Eq for Cell {}

impl Hash for Cell {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Cell::Null => {}
            Cell::Integer(v) => v.hash(state),
            Cell::Float(v) => v.to_bits().hash(state),
            Cell::Boolean(v) => v.hash(state),
            Cell::Date(d) => d.hash(state),
            Cell::Text(s) => s.hash(state),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub normalized_name: String,
    pub dtype: DataType,
    pub values: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    columns: Vec<Column>,
    row_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeProfile {
    pub attribute_id: usize,
    pub name: String,
    pub normalized_name: String,
    pub dtype: DataType,
    pub distinct_count: usize,
    pub null_count: usize,
    pub row_count: usize,
    pub is_categorical: bool,
}

/// Rule deciding which attributes get their values indexed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CategoricalPolicy {
    pub max_distinct: usize,
    pub min_distinct_floor: usize,
    pub max_distinct_ratio: f64,
}

impl Default for CategoricalPolicy {
    fn default() -> Self {
        Self {
            max_distinct: 10_000,
            min_distinct_floor: 50,
            max_distinct_ratio: 0.5,
        }
    }
}

impl CategoricalPolicy {
    /// Largest distinct count a column with `rows` rows may have.
    pub fn distinct_bound(&self, rows: usize) -> usize {
        let by_ratio = (self.max_distinct_ratio * rows as f64).floor() as usize;
        self.max_distinct.min(self.min_distinct_floor.max(by_ratio))
    }

    pub fn is_categorical(&self, dtype: DataType, distinct: usize, non_null: usize) -> bool {
        match dtype {
            DataType::Boolean => true,
            DataType::Text => {
                // A text column whose every cell is unique is an identifier, not a category.
                let all_unique = non_null > 1 && distinct == non_null;
                distinct > 0 && !all_unique && distinct <= self.distinct_bound(non_null)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub has_header: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: true,
        }
    }
}

impl Table {
    /// Builds a table from already-typed columns. Column names are normalized
    /// and de-duplicated the same way as CSV headers.
    pub fn new(name: &str, columns: Vec<Column>) -> Result<Table, TableError> {
        let row_count = columns.first().map(|c| c.values.len()).unwrap_or(0);
        if let Some((i, _)) = columns
            .iter()
            .enumerate()
            .find(|(_, c)| c.values.len() != row_count)
        {
            return Err(TableError::MalformedCsv {
                row: 0,
                reason: format!("column {i} length differs from row count {row_count}"),
            });
        }
        if row_count == 0 {
            return Err(TableError::EmptyTable);
        }
        let mut columns = columns;
        let names = unique_names(columns.iter().map(|c| c.name.as_str()));
        for (col, (name, normalized)) in columns.iter_mut().zip(names) {
            col.name = name;
            col.normalized_name = normalized;
        }
        Ok(Table {
            name: normalize_identifier(name).unwrap_or_else(|| "table".to_string()),
            columns,
            row_count,
        })
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, id: usize) -> &Column {
        &self.columns[id]
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    /// Finds a column by original or normalized name, case-insensitively.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        let wanted = normalize_identifier(name)?;
        self.columns
            .iter()
            .position(|c| c.normalized_name == wanted)
    }

    pub fn row(&self, r: usize) -> Vec<&Cell> {
        self.columns.iter().map(|c| &c.values[r]).collect()
    }

    /// One entry per column, in column order.
    pub fn attribute_profiles(&self, policy: &CategoricalPolicy) -> Vec<AttributeProfile> {
        (0..self.columns.len())
            .map(|id| self.attribute_profile(id, policy))
            .collect()
    }

    pub fn attribute_profile(&self, id: usize, policy: &CategoricalPolicy) -> AttributeProfile {
        let col = &self.columns[id];
        let null_count = col.values.iter().filter(|c| c.is_null()).count();
        let distinct_count = col
            .values
            .iter()
            .filter(|c| !c.is_null())
            .collect::<HashSet<_>>()
            .len();
        let non_null = self.row_count - null_count;
        AttributeProfile {
            attribute_id: id,
            name: col.name.clone(),
            normalized_name: col.normalized_name.clone(),
            dtype: col.dtype,
            distinct_count,
            null_count,
            row_count: self.row_count,
            is_categorical: policy.is_categorical(col.dtype, distinct_count, non_null),
        }
    }

    /// Writes the table back out as RFC-4180 CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.columns.iter().map(|c| quote_field(&c.name)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for r in 0..self.row_count {
            let row: Vec<String> = self
                .columns
                .iter()
                .map(|c| quote_field(&c.values[r].render()))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Lists `(name, type, profile)` for every column in order.
pub fn get_attribute_names_and_types(
    table: &Table,
    policy: &CategoricalPolicy,
) -> Vec<(String, DataType, AttributeProfile)> {
    table
        .attribute_profiles(policy)
        .into_iter()
        .map(|p| (p.name.clone(), p.dtype, p))
        .collect()
}

fn quote_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) || s.trim() != s || is_null_token(s) && !s.is_empty() {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Lowercases, trims and collapses runs of whitespace/punctuation to `_`.
/// Returns `None` when nothing alphanumeric remains.
pub fn normalize_identifier(raw: &str) -> Option<String> {
    let mut out = String::with_capacity(raw.len());
    let mut pending_sep = false;
    for ch in raw.trim().chars() {
        if ch.is_alphanumeric() {
            if pending_sep && !out.is_empty() {
                out.push('_');
            }
            pending_sep = false;
            out.extend(ch.to_lowercase());
        } else {
            pending_sep = true;
        }
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

/// Pairs of (display name, normalized name), suffixing `_2`, `_3`, ... onto
/// later duplicates.
fn unique_names<'a>(raw: impl Iterator<Item = &'a str>) -> Vec<(String, String)> {
    let mut taken: HashSet<String> = HashSet::new();
    let mut out = Vec::new();
    for (i, name) in raw.enumerate() {
        let base_norm = normalize_identifier(name).unwrap_or_else(|| format!("column_{}", i + 1));
        let base_display = if name.trim().is_empty() {
            base_norm.clone()
        } else {
            name.trim().to_string()
        };
        let (mut display, mut norm) = (base_display.clone(), base_norm.clone());
        let mut n = 2;
        while taken.contains(&norm) {
            display = format!("{base_display}_{n}");
            norm = format!("{base_norm}_{n}");
            n += 1;
        }
        taken.insert(norm.clone());
        out.push((display, norm));
    }
    out
}

fn is_null_token(s: &str) -> bool {
    let t = s.trim();
    t.is_empty() || t.eq_ignore_ascii_case("na") || t.eq_ignore_ascii_case("n/a")
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" => Some(true),
        "false" | "no" => Some(false),
        _ => None,
    }
}

fn parse_date(s: &str) -> Option<NaiveDate> {
    if s.len() != 10 {
        return None;
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d").ok()
}

fn parse_float(s: &str) -> Option<f64> {
    // Rust accepts "inf"/"nan" spellings; those are text in a CSV.
    if !s.bytes().any(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn infer_type(raw: &[&str]) -> DataType {
    let present: Vec<&str> = raw
        .iter()
        .filter(|s| !is_null_token(s))
        .map(|s| s.trim())
        .collect();
    if present.is_empty() {
        return DataType::Text;
    }
    if present.iter().all(|s| s.parse::<i64>().is_ok()) {
        DataType::Integer
    } else if present.iter().all(|s| parse_float(s).is_some()) {
        DataType::Float
    } else if present.iter().all(|s| parse_bool(s).is_some()) {
        DataType::Boolean
    } else if present.iter().all(|s| parse_date(s).is_some()) {
        DataType::Date
    } else {
        DataType::Text
    }
}

fn convert(raw: &str, dtype: DataType) -> Cell {
    if is_null_token(raw) {
        return Cell::Null;
    }
    let t = raw.trim();
    // infer_type guarantees every non-null cell parses under the chosen type
    match dtype {
        DataType::Integer => Cell::Integer(t.parse().expect("inferred integer")),
        DataType::Float => Cell::Float(parse_float(t).expect("inferred float")),
        DataType::Boolean => Cell::Boolean(parse_bool(t).expect("inferred boolean")),
        DataType::Date => Cell::Date(parse_date(t).expect("inferred date")),
        DataType::Text => Cell::Text(raw.to_string()),
    }
}

/// Loads CSV bytes into a typed table named `name`.
pub fn load_table(name: &str, source: &[u8], options: &CsvOptions) -> Result<Table, TableError> {
    let text = std::str::from_utf8(source).map_err(|_| TableError::InvalidUtf8)?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut records = parse_csv(text, options.delimiter as char)?;

    let header: Vec<String> = if options.has_header {
        if records.is_empty() {
            return Err(TableError::EmptyTable);
        }
        records.remove(0)
    } else {
        let width = records.first().map(Vec::len).unwrap_or(0);
        (1..=width).map(|i| format!("column_{i}")).collect()
    };
    if records.is_empty() {
        return Err(TableError::EmptyTable);
    }
    let width = header.len();
    let first_data_row = if options.has_header { 2 } else { 1 };
    for (i, rec) in records.iter().enumerate() {
        if rec.len() != width {
            return Err(TableError::MalformedCsv {
                row: i + first_data_row,
                reason: format!("expected {width} fields, found {}", rec.len()),
            });
        }
    }

    let columns = header
        .iter()
        .enumerate()
        .map(|(c, head)| {
            let raw: Vec<&str> = records.iter().map(|r| r[c].as_str()).collect();
            let dtype = infer_type(&raw);
            Column {
                name: head.clone(),
                normalized_name: String::new(),
                dtype,
                values: raw.iter().map(|s| convert(s, dtype)).collect(),
            }
        })
        .collect();
    Table::new(name, columns)
}

/// Strict RFC-4180 record splitter. Rows are numbered from 1 in errors.
fn parse_csv(text: &str, delimiter: char) -> Result<Vec<Vec<String>>, TableError> {
    let mut records = Vec::new();
    let mut record: Vec<String> = Vec::new();
    let mut field = String::new();
    let mut chars = text.chars().peekable();
    let mut row = 1;
    // true once the current record has any content (a field or delimiter)
    let mut started = false;

    while let Some(ch) = chars.next() {
        match ch {
            '"' if field.is_empty() => {
                started = true;
                let open_row = row;
                loop {
                    match chars.next() {
                        Some('"') if chars.peek() == Some(&'"') => {
                            chars.next();
                            field.push('"');
                        }
                        Some('"') => break,
                        Some(c) => {
                            if c == '\n' {
                                row += 1;
                            }
                            field.push(c);
                        }
                        None => {
                            return Err(TableError::MalformedCsv {
                                row: open_row,
                                reason: "unterminated quoted field".into(),
                            })
                        }
                    }
                }
                match chars.peek() {
                    None | Some('\n') | Some('\r') => {}
                    Some(&c) if c == delimiter => {}
                    Some(_) => {
                        return Err(TableError::MalformedCsv {
                            row,
                            reason: "unexpected character after closing quote".into(),
                        })
                    }
                }
                // an empty quoted field must survive as a field
                if field.is_empty() {
                    field.push('\0');
                }
            }
            '"' => {
                return Err(TableError::MalformedCsv {
                    row,
                    reason: "quote inside unquoted field".into(),
                })
            }
            c if c == delimiter => {
                started = true;
                record.push(take_field(&mut field));
            }
            '\r' if chars.peek() == Some(&'\n') => {}
            '\n' | '\r' => {
                if started || !field.is_empty() {
                    record.push(take_field(&mut field));
                    records.push(std::mem::take(&mut record));
                }
                started = false;
                row += 1;
            }
            c => {
                started = true;
                field.push(c);
            }
        }
    }
    if started || !field.is_empty() {
        record.push(take_field(&mut field));
        records.push(record);
    }
    Ok(records)
}

fn take_field(field: &mut String) -> String {
    let f = std::mem::take(field);
    if f == "\0" {
        String::new()
    } else {
        f
    }
}
