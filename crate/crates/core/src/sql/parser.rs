//! Recursive-descent parser for the single-table SELECT subset.
//!
//! ```text
//! query     := SELECT items FROM ident [WHERE expr] [GROUP BY ident {, ident}]
//!              [ORDER BY expr [ASC|DESC] {, ...}] [LIMIT int] [;]
//! expr      := and {OR and}
//! and       := not {AND not}
//! not       := NOT not | predicate
//! predicate := additive [cmp additive | [NOT] LIKE additive | [NOT] IN (expr {, expr})
//!              | [NOT] BETWEEN additive AND additive | IS [NOT] NULL]
//! additive  := term {(+|-) term}
//! term      := unary {(*|/) unary}
//! unary     := - unary | primary
//! primary   := literal | agg ( * | expr ) | ident | ( expr )
//! ```

use super::ast::{
    is_reserved, AggFunc, BinaryOp, Expr, Literal, OrderItem, Query, SelectItem, UnaryOp,
};
use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    QuotedIdent(String),
    Number(String),
    Str(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => w.clone(),
            Tok::QuotedIdent(w) => format!("\"{w}\""),
            Tok::Number(n) => n.clone(),
            Tok::Str(s) => format!("'{s}'"),
            Tok::Sym(s) => s.to_string(),
            Tok::Eof => "end of input".into(),
        }
    }
}

const SYMBOLS: &[&str] = &[
    "<>", "!=", "<=", ">=", "==", ",", "(", ")", "*", "+", "-", "/", "=", "<", ">", ";", ".", "%",
];

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |i: usize| chars.get(i).map(|&(_, c)| c);
    let pos_of = |i: usize| chars.get(i).map(|&(p, _)| p).unwrap_or(text.len());
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '-' && at(i + 1) == Some('-') {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
        } else if c == '\'' || c == '"' || c == '`' {
            let close = if c == '`' { '`' } else { c };
            let mut s = String::new();
            i += 1;
            loop {
                match at(i) {
                    Some(ch) if ch == close && at(i + 1) == Some(close) => {
                        s.push(close);
                        i += 2;
                    }
                    Some(ch) if ch == close => {
                        i += 1;
                        break;
                    }
                    Some(ch) => {
                        s.push(ch);
                        i += 1;
                    }
                    None => {
                        return Err(ParseError::Syntax {
                            position: pos,
                            expected: format!("closing {close}"),
                            found: "end of input".into(),
                        })
                    }
                }
            }
            out.push(Token {
                tok: if c == '\'' {
                    Tok::Str(s)
                } else {
                    Tok::QuotedIdent(s)
                },
                pos,
            });
        } else if c.is_ascii_digit() || (c == '.' && at(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            while at(i).is_some_and(|d| d.is_ascii_digit()) {
                i += 1;
            }
            if at(i) == Some('.') {
                i += 1;
                while at(i).is_some_and(|d| d.is_ascii_digit()) {
                    i += 1;
                }
            }
            if matches!(at(i), Some('e' | 'E')) {
                let mut j = i + 1;
                if matches!(at(j), Some('+' | '-')) {
                    j += 1;
                }
                if at(j).is_some_and(|d| d.is_ascii_digit()) {
                    i = j;
                    while at(i).is_some_and(|d| d.is_ascii_digit()) {
                        i += 1;
                    }
                }
            }
            out.push(Token {
                tok: Tok::Number(text[pos..pos_of(i)].to_string()),
                pos,
            });
        } else if c.is_alphabetic() || c == '_' {
            while at(i).is_some_and(|d| d.is_alphanumeric() || d == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Word(text[pos..pos_of(i)].to_string()),
                pos,
            });
        } else if let Some(sym) = SYMBOLS.iter().find(|s| text[pos..].starts_with(**s)) {
            out.push(Token {
                tok: Tok::Sym(sym),
                pos,
            });
            i += sym.chars().count();
        } else {
            return Err(ParseError::Syntax {
                position: pos,
                expected: "token".into(),
                found: c.to_string(),
            });
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: text.len(),
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

fn unsupported(feature: &str) -> ParseError {
    ParseError::UnsupportedFeature(feature.to_string())
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let t = &self.tokens[self.pos];
        ParseError::Syntax {
            position: t.pos,
            expected: expected.to_string(),
            found: t.tok.describe(),
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w.eq_ignore_ascii_case(kw))
    }

    fn is_kw_at(&self, n: usize, kw: &str) -> bool {
        matches!(self.peek_at(n), Tok::Word(w) if w.eq_ignore_ascii_case(kw))
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.error(kw))
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(&format!("'{s}'")))
        }
    }

    fn identifier(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::QuotedIdent(s) => {
                self.advance();
                Ok(s)
            }
            Tok::Word(w) if !is_reserved(&w) => {
                self.advance();
                Ok(w)
            }
            _ => Err(self.error(what)),
        }
    }

    /// Column reference, dropping an optional `table.` qualifier.
    fn column_ref(&mut self) -> Result<String, ParseError> {
        let first = self.identifier("column name")?;
        if self.eat_sym(".") {
            if self.is_sym("*") {
                return Err(unsupported("qualified wildcard"));
            }
            return self.identifier("column name");
        }
        Ok(first)
    }

    fn query(&mut self) -> Result<Query, ParseError> {
        if let Tok::Word(w) = self.peek() {
            let w = w.to_ascii_uppercase();
            match w.as_str() {
                "SELECT" => {}
                "INSERT" | "UPDATE" | "DELETE" | "CREATE" | "DROP" | "ALTER" | "TRUNCATE"
                | "REPLACE" | "MERGE" | "GRANT" | "PRAGMA" | "ATTACH" => {
                    return Err(ParseError::UnsupportedFeature(w.to_ascii_lowercase()))
                }
                "WITH" => return Err(unsupported("common table expression")),
                _ => return Err(self.error("SELECT")),
            }
        }
        self.expect_kw("SELECT")?;
        if self.is_kw("DISTINCT") {
            return Err(unsupported("distinct"));
        }
        if self.is_kw("TOP") && matches!(self.peek_at(1), Tok::Number(_)) {
            return Err(unsupported("top"));
        }
        let mut select = vec![self.select_item()?];
        while self.eat_sym(",") {
            select.push(self.select_item()?);
        }
        self.expect_kw("FROM")?;
        if self.is_sym("(") {
            return Err(unsupported("subquery"));
        }
        let from = self.identifier("table name")?;
        if self.eat_sym(".") {
            // schema-qualified table name
            self.identifier("table name")?;
        }
        if self.is_kw("AS") || matches!(self.peek(), Tok::Word(w) if !is_reserved(w)) {
            return Err(unsupported("table alias"));
        }
        if self.is_sym(",")
            || ["JOIN", "INNER", "LEFT", "RIGHT", "FULL", "CROSS", "NATURAL", "OUTER"]
                .iter()
                .any(|k| self.is_kw(k))
        {
            return Err(unsupported("join"));
        }

        let where_clause = if self.eat_kw("WHERE") {
            Some(self.expr()?)
        } else {
            None
        };
        let mut group_by = Vec::new();
        if self.eat_kw("GROUP") {
            self.expect_kw("BY")?;
            group_by.push(self.column_ref()?);
            while self.eat_sym(",") {
                group_by.push(self.column_ref()?);
            }
        }
        if self.is_kw("HAVING") {
            return Err(unsupported("having"));
        }
        let mut order_by = Vec::new();
        if self.eat_kw("ORDER") {
            self.expect_kw("BY")?;
            loop {
                let expr = self.expr()?;
                let descending = if self.eat_kw("DESC") {
                    true
                } else {
                    self.eat_kw("ASC");
                    false
                };
                if self.is_kw("NULLS") {
                    return Err(unsupported("nulls ordering"));
                }
                order_by.push(OrderItem { expr, descending });
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        let limit = if self.eat_kw("LIMIT") {
            match self.advance() {
                Tok::Number(n) => Some(n.parse::<u64>().map_err(|_| {
                    ParseError::Syntax {
                        position: self.tokens[self.pos - 1].pos,
                        expected: "non-negative integer".into(),
                        found: n.clone(),
                    }
                })?),
                _ => {
                    self.pos -= 1;
                    return Err(self.error("non-negative integer"));
                }
            }
        } else {
            None
        };
        if self.is_kw("OFFSET") || (limit.is_some() && self.is_sym(",")) {
            return Err(unsupported("offset"));
        }
        if ["UNION", "INTERSECT", "EXCEPT"].iter().any(|k| self.is_kw(k)) {
            return Err(unsupported("set operation"));
        }
        self.eat_sym(";");
        if *self.peek() != Tok::Eof {
            if self.is_kw("SELECT") {
                return Err(unsupported("multiple statements"));
            }
            return Err(self.error("end of statement"));
        }
        let query = Query {
            select,
            from,
            where_clause,
            group_by,
            order_by,
            limit,
        };
        check_semantics(&query)?;
        Ok(query)
    }

    fn select_item(&mut self) -> Result<SelectItem, ParseError> {
        if self.is_sym("*") {
            self.advance();
            return Ok(SelectItem::Wildcard);
        }
        let expr = self.expr()?;
        let alias = if self.eat_kw("AS")
            || matches!(self.peek(), Tok::QuotedIdent(_))
            || matches!(self.peek(), Tok::Word(w) if !is_reserved(w))
        {
            Some(self.identifier("alias")?)
        } else {
            None
        };
        Ok(SelectItem::Expr { expr, alias })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.and_expr()?;
        while self.eat_kw("OR") {
            let right = self.and_expr()?;
            left = Expr::binary(BinaryOp::Or, left, right);
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.not_expr()?;
        while self.eat_kw("AND") {
            let right = self.not_expr()?;
            left = Expr::binary(BinaryOp::And, left, right);
        }
        Ok(left)
    }

    fn not_expr(&mut self) -> Result<Expr, ParseError> {
        if self.eat_kw("NOT") {
            let inner = self.not_expr()?;
            return Ok(Expr::Unary {
                op: UnaryOp::Not,
                expr: Box::new(inner),
            });
        }
        self.predicate()
    }

    fn predicate(&mut self) -> Result<Expr, ParseError> {
        let left = self.additive()?;
        let op = match self.peek() {
            Tok::Sym("=") | Tok::Sym("==") => Some(BinaryOp::Eq),
            Tok::Sym("!=") | Tok::Sym("<>") => Some(BinaryOp::NotEq),
            Tok::Sym("<") => Some(BinaryOp::Lt),
            Tok::Sym("<=") => Some(BinaryOp::LtEq),
            Tok::Sym(">") => Some(BinaryOp::Gt),
            Tok::Sym(">=") => Some(BinaryOp::GtEq),
            _ => None,
        };
        if let Some(op) = op {
            self.advance();
            if self.is_kw("ANY") || self.is_kw("ALL") || self.is_kw("SOME") {
                return Err(unsupported("subquery"));
            }
            let right = self.additive()?;
            return Ok(Expr::binary(op, left, right));
        }

        let negated = self.is_kw("NOT")
            && (self.is_kw_at(1, "LIKE") || self.is_kw_at(1, "IN") || self.is_kw_at(1, "BETWEEN"));
        if negated {
            self.advance();
        }
        if self.eat_kw("LIKE") {
            let pattern = self.additive()?;
            if self.is_kw("ESCAPE") {
                return Err(unsupported("like escape"));
            }
            return Ok(Expr::Like {
                expr: Box::new(left),
                pattern: Box::new(pattern),
                negated,
            });
        }
        if self.is_kw("ILIKE") {
            return Err(unsupported("ilike"));
        }
        if self.eat_kw("IN") {
            self.expect_sym("(")?;
            if self.is_kw("SELECT") {
                return Err(unsupported("subquery"));
            }
            let mut list = vec![self.expr()?];
            while self.eat_sym(",") {
                list.push(self.expr()?);
            }
            self.expect_sym(")")?;
            return Ok(Expr::InList {
                expr: Box::new(left),
                list,
                negated,
            });
        }
        if self.eat_kw("BETWEEN") {
            let low = self.additive()?;
            self.expect_kw("AND")?;
            let high = self.additive()?;
            return Ok(Expr::Between {
                expr: Box::new(left),
                low: Box::new(low),
                high: Box::new(high),
                negated,
            });
        }
        if self.eat_kw("IS") {
            let negated = self.eat_kw("NOT");
            self.expect_kw("NULL")?;
            return Ok(Expr::IsNull {
                expr: Box::new(left),
                negated,
            });
        }
        Ok(left)
    }

    fn additive(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.term()?;
        loop {
            let op = if self.eat_sym("+") {
                BinaryOp::Add
            } else if self.eat_sym("-") {
                BinaryOp::Sub
            } else {
                break;
            };
            let right = self.term()?;
            left = Expr::binary(op, left, right);
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.unary()?;
        loop {
            let op = if self.eat_sym("*") {
                BinaryOp::Mul
            } else if self.eat_sym("/") {
                BinaryOp::Div
            } else if self.is_sym("%") {
                return Err(unsupported("modulo"));
            } else {
                break;
            };
            let right = self.unary()?;
            left = Expr::binary(op, left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.is_sym("-") {
            self.advance();
            if let Tok::Number(n) = self.peek().clone() {
                self.advance();
                return self.number(&format!("-{n}"));
            }
            let inner = self.unary()?;
            return Ok(Expr::Unary {
                op: UnaryOp::Neg,
                expr: Box::new(inner),
            });
        }
        if self.eat_sym("+") {
            return self.unary();
        }
        self.primary()
    }

    fn number(&self, text: &str) -> Result<Expr, ParseError> {
        let is_int = !text.contains(['.', 'e', 'E']);
        if is_int {
            if let Ok(v) = text.parse::<i64>() {
                return Ok(Expr::Literal(Literal::Integer(v)));
            }
        }
        text.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(|v| Expr::Literal(Literal::Float(v)))
            .ok_or_else(|| ParseError::Syntax {
                position: self.tokens[self.pos.saturating_sub(1)].pos,
                expected: "number".into(),
                found: text.to_string(),
            })
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Number(n) => {
                self.advance();
                self.number(&n)
            }
            Tok::Str(s) => {
                self.advance();
                Ok(Expr::Literal(Literal::String(s)))
            }
            Tok::Sym("(") => {
                self.advance();
                if self.is_kw("SELECT") {
                    return Err(unsupported("subquery"));
                }
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::QuotedIdent(_) => Ok(Expr::Column(self.column_ref()?)),
            Tok::Word(w) => {
                let upper = w.to_ascii_uppercase();
                match upper.as_str() {
                    "NULL" => {
                        self.advance();
                        return Ok(Expr::Literal(Literal::Null));
                    }
                    "TRUE" | "FALSE" => {
                        self.advance();
                        return Ok(Expr::Literal(Literal::Boolean(upper == "TRUE")));
                    }
                    "CASE" => return Err(unsupported("case expression")),
                    "EXISTS" => return Err(unsupported("subquery")),
                    "DATE" if matches!(self.peek_at(1), Tok::Str(_)) => {
                        self.advance();
                        if let Tok::Str(s) = self.advance() {
                            return Ok(Expr::Literal(Literal::String(s)));
                        }
                        unreachable!()
                    }
                    _ => {}
                }
                if *self.peek_at(1) == Tok::Sym("(") {
                    return self.call(&w);
                }
                if is_reserved(&w) {
                    return Err(self.error("expression"));
                }
                Ok(Expr::Column(self.column_ref()?))
            }
            _ => Err(self.error("expression")),
        }
    }

    fn call(&mut self, name: &str) -> Result<Expr, ParseError> {
        let Some(func) = AggFunc::from_name(name) else {
            return Err(ParseError::UnsupportedFeature(format!(
                "function {}",
                name.to_ascii_uppercase()
            )));
        };
        self.advance();
        self.expect_sym("(")?;
        if self.is_kw("DISTINCT") {
            return Err(unsupported("distinct"));
        }
        let arg = if func == AggFunc::Count && self.is_sym("*") {
            self.advance();
            None
        } else {
            let e = self.expr()?;
            if e.contains_aggregate() {
                return Err(unsupported("nested aggregate"));
            }
            Some(Box::new(e))
        };
        self.expect_sym(")")?;
        if self.is_kw("OVER") {
            return Err(unsupported("window function"));
        }
        Ok(Expr::Aggregate { func, arg })
    }
}

fn same_ident(a: &str, b: &str) -> bool {
    crate::table::normalize_identifier(a) == crate::table::normalize_identifier(b)
}

/// Grouping rules that do not need the table.
fn check_semantics(q: &Query) -> Result<(), ParseError> {
    if let Some(w) = &q.where_clause {
        if w.contains_aggregate() {
            return Err(unsupported("aggregate in WHERE"));
        }
    }
    let aggregated = !q.group_by.is_empty()
        || q.select.iter().any(|s| match s {
            SelectItem::Expr { expr, .. } => expr.contains_aggregate(),
            SelectItem::Wildcard => false,
        });
    if !aggregated {
        return Ok(());
    }
    let aliases: Vec<&str> = q
        .select
        .iter()
        .filter_map(|s| match s {
            SelectItem::Expr { alias: Some(a), .. } => Some(a.as_str()),
            _ => None,
        })
        .collect();
    let grouped = |c: &str| q.group_by.iter().any(|g| same_ident(g, c));
    for item in &q.select {
        match item {
            SelectItem::Wildcard => {
                return Err(ParseError::Invalid(
                    "SELECT * cannot be combined with aggregation".into(),
                ))
            }
            SelectItem::Expr { expr, .. } => {
                if let Some(c) = expr.bare_columns().into_iter().find(|c| !grouped(c)) {
                    return Err(ParseError::Invalid(format!(
                        "column {c} must appear in GROUP BY or inside an aggregate"
                    )));
                }
            }
        }
    }
    for o in &q.order_by {
        if let Some(c) = o
            .expr
            .bare_columns()
            .into_iter()
            .find(|c| !grouped(c) && !aliases.iter().any(|a| same_ident(a, c)))
        {
            return Err(ParseError::Invalid(format!(
                "ORDER BY column {c} must appear in GROUP BY or inside an aggregate"
            )));
        }
    }
    Ok(())
}

pub fn parse_sql(text: &str) -> Result<Query, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Syntax {
            position: 0,
            expected: "SELECT".into(),
            found: "end of input".into(),
        });
    }
    let tokens = lex(text)?;
    Parser { tokens, pos: 0 }.query()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unsupported_name(sql: &str) -> String {
        match parse_sql(sql) {
            Err(ParseError::UnsupportedFeature(f)) => f,
            other => panic!("{sql}: {other:?}"),
        }
    }

    #[test]
    fn example_query() {
        let q = parse_sql("SELECT AVG(profit) FROM sales WHERE subregion = 'ANZ'").unwrap();
        assert_eq!(q.from, "sales");
        assert_eq!(
            q.select,
            vec![SelectItem::Expr {
                expr: Expr::Aggregate {
                    func: AggFunc::Avg,
                    arg: Some(Box::new(Expr::column("profit"))),
                },
                alias: None,
            }]
        );
        assert_eq!(
            q.where_clause,
            Some(Expr::binary(
                BinaryOp::Eq,
                Expr::column("subregion"),
                Expr::Literal(Literal::String("ANZ".into()))
            ))
        );
    }

    #[test]
    fn select_from_is_syntax_error_at_from() {
        match parse_sql("SELECT FROM") {
            Err(ParseError::Syntax { position, found, .. }) => {
                assert_eq!(position, 7);
                assert_eq!(found, "FROM");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unsupported_features() {
        assert_eq!(unsupported_name("SELECT * FROM a JOIN b"), "join");
        assert_eq!(unsupported_name("SELECT * FROM a, b"), "join");
        assert_eq!(unsupported_name("SELECT * FROM (SELECT 1 FROM t)"), "subquery");
        assert_eq!(unsupported_name("SELECT a FROM t WHERE a IN (SELECT b FROM u)"), "subquery");
        assert_eq!(unsupported_name("DELETE FROM t"), "delete");
        assert_eq!(unsupported_name("SELECT DISTINCT a FROM t"), "distinct");
        assert_eq!(unsupported_name("SELECT a FROM t GROUP BY a HAVING COUNT(*) > 1"), "having");
        assert_eq!(unsupported_name("SELECT UPPER(a) FROM t"), "function UPPER");
        assert_eq!(unsupported_name("SELECT SUM(MAX(a)) FROM t"), "nested aggregate");
        assert_eq!(unsupported_name("SELECT a FROM t WHERE SUM(a) > 1"), "aggregate in WHERE");
        assert_eq!(unsupported_name("SELECT a FROM t UNION SELECT a FROM u"), "set operation");
    }

    #[test]
    fn grouping_rules() {
        assert!(matches!(
            parse_sql("SELECT a, COUNT(*) FROM t"),
            Err(ParseError::Invalid(_))
        ));
        assert!(parse_sql("SELECT a, COUNT(*) FROM t GROUP BY a ORDER BY 2 DESC").is_ok());
    }

    #[test]
    fn keywords_case_insensitive_and_escapes() {
        let q = parse_sql("select a from t where b = 'O''Brien' limit 3;").unwrap();
        assert_eq!(q.limit, Some(3));
        assert_eq!(
            q.to_string(),
            "SELECT a FROM t WHERE b = 'O''Brien' LIMIT 3"
        );
    }

    #[test]
    fn print_parse_round_trip() {
        for sql in [
            "SELECT a, -(b + 1) AS neg, c * -2.5 FROM t WHERE NOT (a LIKE 'x%') AND b NOT BETWEEN 1 AND 3",
            "SELECT COUNT(*), STDDEV(x) FROM \"my table\" WHERE d IS NOT NULL OR e IN ('a', 'b')",
            "SELECT \"select\", \"count\" FROM t ORDER BY 1 DESC, \"select\" ASC LIMIT 0",
            "SELECT -9223372036854775808, 1e300, 1.5e-7 FROM t",
        ] {
            let q = parse_sql(sql).unwrap();
            assert_eq!(parse_sql(&q.to_string()).unwrap(), q, "{sql}");
        }
    }
}
