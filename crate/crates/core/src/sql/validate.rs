use serde::{Deserialize, Serialize};

use super::ast::{AggFunc, BinaryOp, Expr, Literal, Query, SelectItem};
use crate::table::{normalize_identifier, DataType, Table};
use crate::vocab::{LookupMode, PostingKind, VocabIndex};

/// A text literal compared against a categorical column that holds no such
/// value. `suggestion` is the closest canonical value, when one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnseenValue {
    pub attribute: String,
    pub literal: String,
    pub suggestion: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub unknown_columns: Vec<String>,
    pub unseen_values: Vec<UnseenValue>,
    pub subset_violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.unknown_columns.is_empty()
            && self.unseen_values.is_empty()
            && self.subset_violations.is_empty()
    }

    /// Unseen values are warnings; everything else blocks execution.
    pub fn passed(&self) -> bool {
        self.unknown_columns.is_empty() && self.subset_violations.is_empty()
    }
}

struct Checker<'a> {
    table: &'a Table,
    index: &'a VocabIndex,
    aliases: Vec<String>,
    report: ValidationReport,
}

fn push_unique<T: PartialEq>(list: &mut Vec<T>, item: T) {
    if !list.contains(&item) {
        list.push(item);
    }
}

fn literal_type(l: &Literal) -> Option<DataType> {
    match l {
        Literal::Integer(_) => Some(DataType::Integer),
        Literal::Float(_) => Some(DataType::Float),
        Literal::String(_) => Some(DataType::Text),
        Literal::Boolean(_) => Some(DataType::Boolean),
        Literal::Null => None,
    }
}

fn compatible(col: DataType, lit: &Literal) -> bool {
    match (col, lit) {
        (_, Literal::Null) => true,
        (DataType::Date, Literal::String(s)) => {
            chrono::NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d").is_ok()
        }
        (c, l) => {
            let l = literal_type(l).unwrap();
            c == l || (c.is_numeric() && l.is_numeric())
        }
    }
}

impl Checker<'_> {
    fn column(&mut self, name: &str, allow_alias: bool) -> Option<usize> {
        if let Some(c) = self.table.column_index(name) {
            return Some(c);
        }
        let is_alias = allow_alias
            && self
                .aliases
                .iter()
                .any(|a| normalize_identifier(a) == normalize_identifier(name));
        if !is_alias {
            push_unique(&mut self.report.unknown_columns, name.to_string());
        }
        None
    }

    fn column_type(&self, e: &Expr) -> Option<(usize, DataType)> {
        match e {
            Expr::Column(name) => self
                .table
                .column_index(name)
                .map(|c| (c, self.table.column(c).dtype)),
            _ => None,
        }
    }

    fn expr(&mut self, e: &Expr, allow_alias: bool) {
        let mut columns = Vec::new();
        e.walk(&mut |sub| {
            if let Expr::Column(c) = sub {
                columns.push(c.clone());
            }
        });
        for c in columns {
            self.column(&c, allow_alias);
        }
        let mut nodes = Vec::new();
        e.walk(&mut |sub| nodes.push(sub.clone()));
        for node in &nodes {
            self.node(node);
        }
    }

    fn node(&mut self, e: &Expr) {
        match e {
            Expr::Aggregate {
                func: func @ (AggFunc::Sum | AggFunc::Avg | AggFunc::Stddev),
                arg: Some(arg),
            } => {
                if let Some((c, t)) = self.column_type(arg) {
                    if !t.is_numeric() {
                        push_unique(
                            &mut self.report.subset_violations,
                            format!(
                                "{} over non-numeric column {} ({t})",
                                func.name(),
                                self.table.column(c).normalized_name
                            ),
                        );
                    }
                }
            }
            Expr::Like { expr, .. } => {
                if let Some((c, t)) = self.column_type(expr) {
                    if t != DataType::Text {
                        push_unique(
                            &mut self.report.subset_violations,
                            format!(
                                "LIKE on non-text column {} ({t})",
                                self.table.column(c).normalized_name
                            ),
                        );
                    }
                }
            }
            Expr::Binary { op, left, right } if op.is_comparison() => {
                for (col, other) in [(left, right), (right, left)] {
                    if let (Some((c, t)), Expr::Literal(lit)) = (self.column_type(col), &**other) {
                        self.literal_against(c, t, lit, *op == BinaryOp::Eq);
                    }
                }
            }
            Expr::InList {
                expr, list, ..
            } => {
                if let Some((c, t)) = self.column_type(expr) {
                    for item in list {
                        if let Expr::Literal(lit) = item {
                            self.literal_against(c, t, lit, true);
                        }
                    }
                }
            }
            Expr::Between {
                expr, low, high, ..
            } => {
                if let Some((c, t)) = self.column_type(expr) {
                    for bound in [low, high] {
                        if let Expr::Literal(lit) = &**bound {
                            self.literal_against(c, t, lit, false);
                        }
                    }
                }
            }
            _ => {}
        }
    }

    fn literal_against(&mut self, column: usize, dtype: DataType, lit: &Literal, equality: bool) {
        let name = self.table.column(column).normalized_name.clone();
        if !compatible(dtype, lit) {
            push_unique(
                &mut self.report.subset_violations,
                format!("{name} ({dtype}) compared with {lit}"),
            );
            return;
        }
        let Literal::String(text) = lit else { return };
        if !equality || dtype != DataType::Text || !self.index.is_indexed_attribute(column) {
            return;
        }
        let present = self
            .table
            .column(column)
            .values
            .iter()
            .any(|v| v.as_text() == Some(text.as_str()));
        if present {
            return;
        }
        let suggestion = [LookupMode::Exact, LookupMode::Fuzzy]
            .into_iter()
            .flat_map(|mode| self.index.lookup(text, mode))
            .find(|h| h.posting.kind == PostingKind::Value && h.posting.attribute_id == column)
            .map(|h| self.index.display_text(&h.posting).to_string());
        push_unique(
            &mut self.report.unseen_values,
            UnseenValue {
                attribute: name,
                literal: text.clone(),
                suggestion,
            },
        );
    }
}

/// Static checks of a parsed query against the table and its index. Never
/// modifies the query.
pub fn validate(query: &Query, table: &Table, index: &VocabIndex) -> ValidationReport {
    let aliases = query
        .select
        .iter()
        .filter_map(|s| match s {
            SelectItem::Expr { alias: Some(a), .. } => Some(a.clone()),
            _ => None,
        })
        .collect();
    let mut checker = Checker {
        table,
        index,
        aliases,
        report: ValidationReport::default(),
    };
    if normalize_identifier(&query.from) != normalize_identifier(&table.name) {
        checker.report.subset_violations.push(format!(
            "unknown table {} (expected {})",
            query.from, table.name
        ));
    }
    for item in &query.select {
        if let SelectItem::Expr { expr, .. } = item {
            checker.expr(expr, false);
        }
    }
    if let Some(w) = &query.where_clause {
        checker.expr(w, false);
    }
    for g in &query.group_by {
        checker.column(g, false);
    }
    for o in &query.order_by {
        checker.expr(&o.expr, true);
    }
    checker.report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sql::parse_sql;
    use crate::vocab::tests::{sales_index, sales_table};

    fn check(sql: &str) -> ValidationReport {
        validate(&parse_sql(sql).unwrap(), &sales_table(), &sales_index())
    }

    #[test]
    fn misspelled_literal_is_unseen_with_suggestion() {
        let r = check("SELECT AVG(profit) FROM sales WHERE customer = 'Alianz'");
        assert_eq!(
            r.unseen_values,
            vec![UnseenValue {
                attribute: "customer".into(),
                literal: "Alianz".into(),
                suggestion: Some("Allianz".into()),
            }]
        );
        assert!(r.passed());
        assert!(!r.is_clean());
    }

    #[test]
    fn clean_query() {
        let r = check(
            "SELECT AVG(profit) FROM sales WHERE product = 'OneView' AND customer = 'Allianz' AND subregion = 'ANZ'",
        );
        assert!(r.is_clean(), "{r:?}");
    }

    #[test]
    fn unknown_column() {
        let r = check("SELECT foo FROM sales");
        assert_eq!(r.unknown_columns, vec!["foo".to_string()]);
        assert!(!r.passed());
    }

    #[test]
    fn subset_violations() {
        assert!(!check("SELECT SUM(product) FROM sales").passed());
        assert!(!check("SELECT * FROM sales WHERE sales LIKE '1%'").passed());
        assert!(!check("SELECT * FROM sales WHERE sales = 'many'").passed());
        assert!(!check("SELECT * FROM orders").passed());
        assert!(check("SELECT product, SUM(sales) AS t FROM sales GROUP BY product ORDER BY t").is_clean());
    }

    #[test]
    fn in_list_literals_checked() {
        let r = check("SELECT * FROM sales WHERE subregion IN ('ANZ', 'APJ')");
        assert_eq!(r.unseen_values.len(), 1);
        assert_eq!(r.unseen_values[0].literal, "APJ");
    }
}
