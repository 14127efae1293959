use std::cmp::Ordering;
use std::collections::HashMap;

use chrono::NaiveDate;

use super::ast::{AggFunc, BinaryOp, Expr, Literal, Query, SelectItem, UnaryOp};
use super::{ExecError, ResultTable};
use crate::table::{normalize_identifier, Cell, Table};

const DIV_ZERO: &str = "division by zero produced NULL";
const OVERFLOW: &str = "integer overflow promoted to Float";

fn mismatch(what: String) -> ExecError {
    ExecError::TypeMismatch(what)
}

fn type_name(c: &Cell) -> &'static str {
    c.data_type().map(|t| t.name()).unwrap_or("Null")
}

fn parse_date(s: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d").ok()
}

/// SQL comparison of two non-null cells. Integers and floats compare
/// numerically; a text operand compared with a date is read as a date.
pub fn compare_cells(a: &Cell, b: &Cell) -> Result<Ordering, ExecError> {
    let incomparable = || {
        mismatch(format!(
            "cannot compare {} with {}",
            type_name(a),
            type_name(b)
        ))
    };
    Ok(match (a, b) {
        (Cell::Integer(x), Cell::Integer(y)) => x.cmp(y),
        (Cell::Integer(_) | Cell::Float(_), Cell::Integer(_) | Cell::Float(_)) => {
            let (x, y) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            x.partial_cmp(&y).ok_or_else(incomparable)?
        }
        (Cell::Text(x), Cell::Text(y)) => x.cmp(y),
        (Cell::Boolean(x), Cell::Boolean(y)) => x.cmp(y),
        (Cell::Date(x), Cell::Date(y)) => x.cmp(y),
        (Cell::Date(x), Cell::Text(s)) => x.cmp(&parse_date(s).ok_or_else(incomparable)?),
        (Cell::Text(s), Cell::Date(y)) => parse_date(s).ok_or_else(incomparable)?.cmp(y),
        _ => return Err(incomparable()),
    })
}

/// Total order used for sorting: nulls first, then by value.
fn sort_order(a: &Cell, b: &Cell) -> Ordering {
    match (a.is_null(), b.is_null()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => compare_cells(a, b).unwrap_or_else(|_| type_name(a).cmp(type_name(b))),
    }
}

/// Case-sensitive `LIKE` with `%` and `_` wildcards.
pub fn like_match(text: &str, pattern: &str) -> bool {
    let t: Vec<char> = text.chars().collect();
    let p: Vec<char> = pattern.chars().collect();
    let (mut ti, mut pi) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while ti < t.len() {
        if pi < p.len() && (p[pi] == '_' || (p[pi] != '%' && p[pi] == t[ti])) {
            ti += 1;
            pi += 1;
        } else if pi < p.len() && p[pi] == '%' {
            star = Some((pi, ti));
            pi += 1;
        } else if let Some((sp, st)) = star {
            pi = sp + 1;
            ti = st + 1;
            star = Some((sp, st + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == '%')
}

fn truth(c: &Cell, context: &str) -> Result<Option<bool>, ExecError> {
    match c {
        Cell::Null => Ok(None),
        Cell::Boolean(b) => Ok(Some(*b)),
        other => Err(mismatch(format!(
            "{context} expects Boolean, got {}",
            type_name(other)
        ))),
    }
}

fn bool_cell(b: Option<bool>) -> Cell {
    b.map(Cell::Boolean).unwrap_or(Cell::Null)
}

enum Scope<'a> {
    Row(usize),
    Group(&'a [usize]),
}

struct Evaluator<'t> {
    table: &'t Table,
    warnings: Vec<String>,
}

impl<'t> Evaluator<'t> {
    fn warn(&mut self, w: &str) {
        if !self.warnings.iter().any(|x| x == w) {
            self.warnings.push(w.to_string());
        }
    }

    fn column(&self, name: &str) -> Result<usize, ExecError> {
        self.table
            .column_index(name)
            .ok_or_else(|| ExecError::UnknownColumn(name.to_string()))
    }

    fn eval(&mut self, e: &Expr, scope: &Scope) -> Result<Cell, ExecError> {
        match e {
            Expr::Column(name) => {
                let c = self.column(name)?;
                let row = match scope {
                    Scope::Row(r) => *r,
                    Scope::Group(rows) => match rows.first() {
                        Some(r) => *r,
                        None => return Ok(Cell::Null),
                    },
                };
                Ok(self.table.column(c).values[row].clone())
            }
            Expr::Literal(l) => Ok(match l {
                Literal::Integer(v) => Cell::Integer(*v),
                Literal::Float(v) => Cell::Float(*v),
                Literal::String(s) => Cell::Text(s.clone()),
                Literal::Boolean(b) => Cell::Boolean(*b),
                Literal::Null => Cell::Null,
            }),
            Expr::Unary { op, expr } => {
                let v = self.eval(expr, scope)?;
                match (op, v) {
                    (_, Cell::Null) => Ok(Cell::Null),
                    (UnaryOp::Neg, Cell::Integer(i)) => Ok(match i.checked_neg() {
                        Some(n) => Cell::Integer(n),
                        None => {
                            self.warn(OVERFLOW);
                            Cell::Float(-(i as f64))
                        }
                    }),
                    (UnaryOp::Neg, Cell::Float(f)) => Ok(Cell::Float(-f)),
                    (UnaryOp::Not, Cell::Boolean(b)) => Ok(Cell::Boolean(!b)),
                    (op, v) => Err(mismatch(format!(
                        "{} applied to {}",
                        if *op == UnaryOp::Neg { "-" } else { "NOT" },
                        type_name(&v)
                    ))),
                }
            }
            Expr::Binary { op, left, right } => {
                let l = self.eval(left, scope)?;
                let r = self.eval(right, scope)?;
                self.binary(*op, l, r)
            }
            Expr::Like {
                expr,
                pattern,
                negated,
            } => {
                let v = self.eval(expr, scope)?;
                let p = self.eval(pattern, scope)?;
                let out = match (&v, &p) {
                    (Cell::Null, _) | (_, Cell::Null) => None,
                    (Cell::Text(t), Cell::Text(p)) => Some(like_match(t, p) != *negated),
                    _ => {
                        return Err(mismatch(format!(
                            "LIKE needs Text operands, got {} and {}",
                            type_name(&v),
                            type_name(&p)
                        )))
                    }
                };
                Ok(bool_cell(out))
            }
            Expr::InList {
                expr,
                list,
                negated,
            } => {
                let v = self.eval(expr, scope)?;
                let mut found = Some(false);
                for item in list {
                    let x = self.eval(item, scope)?;
                    let eq = self.binary(BinaryOp::Eq, v.clone(), x)?;
                    found = or3(found, truth(&eq, "IN")?);
                }
                Ok(bool_cell(if *negated { found.map(|b| !b) } else { found }))
            }
            Expr::Between {
                expr,
                low,
                high,
                negated,
            } => {
                let v = self.eval(expr, scope)?;
                let lo = self.eval(low, scope)?;
                let hi = self.eval(high, scope)?;
                let a = self.binary(BinaryOp::GtEq, v.clone(), lo)?;
                let b = self.binary(BinaryOp::LtEq, v, hi)?;
                let inside = and3(truth(&a, "BETWEEN")?, truth(&b, "BETWEEN")?);
                Ok(bool_cell(if *negated { inside.map(|b| !b) } else { inside }))
            }
            Expr::IsNull { expr, negated } => {
                let v = self.eval(expr, scope)?;
                Ok(Cell::Boolean(v.is_null() != *negated))
            }
            Expr::Aggregate { func, arg } => {
                let Scope::Group(rows) = scope else {
                    return Err(ExecError::Invalid(format!(
                        "aggregate {} outside an aggregate query",
                        func.name()
                    )));
                };
                self.aggregate(*func, arg.as_deref(), rows)
            }
        }
    }

    fn binary(&mut self, op: BinaryOp, l: Cell, r: Cell) -> Result<Cell, ExecError> {
        match op {
            BinaryOp::And | BinaryOp::Or => {
                let a = truth(&l, op.symbol())?;
                let b = truth(&r, op.symbol())?;
                Ok(bool_cell(if op == BinaryOp::And {
                    and3(a, b)
                } else {
                    or3(a, b)
                }))
            }
            _ if op.is_comparison() => {
                if l.is_null() || r.is_null() {
                    return Ok(Cell::Null);
                }
                let ord = compare_cells(&l, &r)?;
                Ok(Cell::Boolean(match op {
                    BinaryOp::Eq => ord == Ordering::Equal,
                    BinaryOp::NotEq => ord != Ordering::Equal,
                    BinaryOp::Lt => ord == Ordering::Less,
                    BinaryOp::LtEq => ord != Ordering::Greater,
                    BinaryOp::Gt => ord == Ordering::Greater,
                    _ => ord != Ordering::Less,
                }))
            }
            _ => self.arithmetic(op, l, r),
        }
    }

    fn arithmetic(&mut self, op: BinaryOp, l: Cell, r: Cell) -> Result<Cell, ExecError> {
        let numeric = |c: &Cell| matches!(c, Cell::Null | Cell::Integer(_) | Cell::Float(_));
        if !numeric(&l) || !numeric(&r) {
            return Err(mismatch(format!(
                "arithmetic {} on {} and {}",
                op.symbol(),
                type_name(&l),
                type_name(&r)
            )));
        }
        if l.is_null() || r.is_null() {
            return Ok(Cell::Null);
        }
        if op == BinaryOp::Div {
            let d = r.as_f64().unwrap();
            if d == 0.0 {
                self.warn(DIV_ZERO);
                return Ok(Cell::Null);
            }
            return Ok(Cell::Float(l.as_f64().unwrap() / d));
        }
        if let (Cell::Integer(a), Cell::Integer(b)) = (&l, &r) {
            let exact = match op {
                BinaryOp::Add => a.checked_add(*b),
                BinaryOp::Sub => a.checked_sub(*b),
                _ => a.checked_mul(*b),
            };
            if let Some(v) = exact {
                return Ok(Cell::Integer(v));
            }
            self.warn(OVERFLOW);
        }
        let (a, b) = (l.as_f64().unwrap(), r.as_f64().unwrap());
        Ok(Cell::Float(match op {
            BinaryOp::Add => a + b,
            BinaryOp::Sub => a - b,
            _ => a * b,
        }))
    }

    fn aggregate(
        &mut self,
        func: AggFunc,
        arg: Option<&Expr>,
        rows: &[usize],
    ) -> Result<Cell, ExecError> {
        let Some(arg) = arg else {
            return Ok(Cell::Integer(rows.len() as i64));
        };
        let mut vals = Vec::new();
        for &r in rows {
            let v = self.eval(arg, &Scope::Row(r))?;
            if !v.is_null() {
                vals.push(v);
            }
        }
        if func == AggFunc::Count {
            return Ok(Cell::Integer(vals.len() as i64));
        }
        if matches!(func, AggFunc::Min | AggFunc::Max) {
            let mut best: Option<Cell> = None;
            for v in vals {
                best = Some(match best {
                    None => v,
                    Some(b) => {
                        let ord = compare_cells(&v, &b)?;
                        let better = if func == AggFunc::Min {
                            ord == Ordering::Less
                        } else {
                            ord == Ordering::Greater
                        };
                        if better {
                            v
                        } else {
                            b
                        }
                    }
                });
            }
            return Ok(best.unwrap_or(Cell::Null));
        }
        if let Some(bad) = vals.iter().find(|v| v.as_f64().is_none()) {
            return Err(mismatch(format!(
                "{} over {}",
                func.name(),
                type_name(bad)
            )));
        }
        let nums: Vec<f64> = vals.iter().map(|v| v.as_f64().unwrap()).collect();
        let n = nums.len();
        Ok(match func {
            AggFunc::Sum if n == 0 => Cell::Null,
            AggFunc::Sum => {
                let ints: Option<Vec<i64>> = vals
                    .iter()
                    .map(|v| match v {
                        Cell::Integer(i) => Some(*i),
                        _ => None,
                    })
                    .collect();
                match ints.and_then(|is| is.iter().try_fold(0i64, |acc, x| acc.checked_add(*x))) {
                    Some(total) => Cell::Integer(total),
                    None => {
                        if vals.iter().all(|v| matches!(v, Cell::Integer(_))) {
                            self.warn(OVERFLOW);
                        }
                        Cell::Float(nums.iter().sum())
                    }
                }
            }
            AggFunc::Avg if n == 0 => Cell::Null,
            AggFunc::Avg => Cell::Float(nums.iter().sum::<f64>() / n as f64),
            AggFunc::Stddev if n < 2 => Cell::Null,
            AggFunc::Stddev => {
                let mean = nums.iter().sum::<f64>() / n as f64;
                let ss: f64 = nums.iter().map(|x| (x - mean) * (x - mean)).sum();
                Cell::Float((ss / (n - 1) as f64).sqrt())
            }
            _ => unreachable!(),
        })
    }
}

fn and3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

fn or3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(true), _) | (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    }
}

fn is_aggregate_query(q: &Query) -> bool {
    !q.group_by.is_empty()
        || q.select.iter().any(|s| match s {
            SelectItem::Expr { expr, .. } => expr.contains_aggregate(),
            SelectItem::Wildcard => false,
        })
}

fn same_ident(a: &str, b: &str) -> bool {
    normalize_identifier(a) == normalize_identifier(b)
}

/// Evaluates `query` against `table`. Never touches anything but `table`.
pub fn execute(query: &Query, table: &Table) -> Result<ResultTable, ExecError> {
    if !same_ident(&query.from, &table.name) {
        return Err(ExecError::UnknownTable(query.from.clone()));
    }
    let mut ev = Evaluator {
        table,
        warnings: Vec::new(),
    };

    let mut rows = Vec::new();
    for r in 0..table.row_count() {
        let keep = match &query.where_clause {
            Some(w) => {
                let v = ev.eval(w, &Scope::Row(r))?;
                truth(&v, "WHERE")? == Some(true)
            }
            None => true,
        };
        if keep {
            rows.push(r);
        }
    }

    // Output columns and, per output row, the scope it was produced from.
    let mut columns = Vec::new();
    let mut items: Vec<(&Expr, bool)> = Vec::new();
    let all_columns: Vec<Expr> = table
        .columns()
        .iter()
        .map(|c| Expr::Column(c.name.clone()))
        .collect();
    for item in &query.select {
        match item {
            SelectItem::Wildcard => {
                for (c, e) in table.columns().iter().zip(&all_columns) {
                    columns.push(c.name.clone());
                    items.push((e, false));
                }
            }
            SelectItem::Expr { expr, alias } => {
                if let Expr::Column(name) = expr {
                    ev.column(name)?;
                }
                columns.push(match (alias, expr) {
                    (Some(a), _) => a.clone(),
                    (None, Expr::Column(name)) => name.clone(),
                    (None, e) => e.to_string(),
                });
                items.push((expr, true));
            }
        }
    }

    let groups: Vec<Vec<usize>> = if is_aggregate_query(query) {
        let key_cols = query
            .group_by
            .iter()
            .map(|g| ev.column(g))
            .collect::<Result<Vec<_>, _>>()?;
        if key_cols.is_empty() {
            vec![rows]
        } else {
            let mut order: Vec<Vec<usize>> = Vec::new();
            let mut seen: HashMap<Vec<&Cell>, usize> = HashMap::new();
            for r in rows {
                let key: Vec<&Cell> = key_cols.iter().map(|&c| &table.column(c).values[r]).collect();
                let slot = *seen.entry(key).or_insert_with(|| {
                    order.push(Vec::new());
                    order.len() - 1
                });
                order[slot].push(r);
            }
            order
        }
    } else {
        rows.into_iter().map(|r| vec![r]).collect()
    };
    let aggregated = is_aggregate_query(query);

    let mut out: Vec<(Vec<Cell>, Vec<Cell>)> = Vec::with_capacity(groups.len());
    for g in &groups {
        let scope = if aggregated {
            Scope::Group(g)
        } else {
            Scope::Row(g[0])
        };
        let mut row = Vec::with_capacity(items.len());
        for (e, _) in &items {
            row.push(ev.eval(e, &scope)?);
        }
        let mut keys = Vec::with_capacity(query.order_by.len());
        for o in &query.order_by {
            keys.push(order_key(&mut ev, &o.expr, query, &columns, &row, &scope)?);
        }
        out.push((row, keys));
    }

    if !query.order_by.is_empty() {
        out.sort_by(|(_, a), (_, b)| {
            for (i, o) in query.order_by.iter().enumerate() {
                let ord = sort_order(&a[i], &b[i]);
                let ord = if o.descending { ord.reverse() } else { ord };
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        });
    }
    let mut rows: Vec<Vec<Cell>> = out.into_iter().map(|(r, _)| r).collect();
    if let Some(n) = query.limit {
        rows.truncate(n.min(usize::MAX as u64) as usize);
    }
    Ok(ResultTable {
        columns,
        rows,
        warnings: ev.warnings,
    })
}

/// ORDER BY key: an integer literal is an output ordinal, a bare name that
/// matches a select alias refers to that output column, anything else is
/// evaluated in the row's scope.
fn order_key(
    ev: &mut Evaluator,
    expr: &Expr,
    query: &Query,
    columns: &[String],
    row: &[Cell],
    scope: &Scope,
) -> Result<Cell, ExecError> {
    match expr {
        Expr::Literal(Literal::Integer(n)) => {
            let n = *n;
            if n < 1 || n as usize > columns.len() {
                return Err(ExecError::Invalid(format!(
                    "ORDER BY position {n} is out of range"
                )));
            }
            Ok(row[n as usize - 1].clone())
        }
        Expr::Column(name) => {
            let mut pos = 0;
            for item in &query.select {
                match item {
                    SelectItem::Wildcard => pos += ev.table.columns().len(),
                    SelectItem::Expr { alias, .. } => {
                        if alias.as_deref().is_some_and(|a| same_ident(a, name)) {
                            return Ok(row[pos].clone());
                        }
                        pos += 1;
                    }
                }
            }
            ev.eval(expr, scope)
        }
        _ => ev.eval(expr, scope),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sql::parse_sql;
    use crate::table::{load_table, CsvOptions};

    fn sales() -> Table {
        load_table(
            "sales",
            b"product,customer,subregion,sales,profit\n\
              OneView,Allianz,ANZ,100,10.0\n\
              OneView,Allianz,ANZ,200,20.0\n\
              Data Smasher,Costco,EMEA,50,5.0\n",
            &CsvOptions::default(),
        )
        .unwrap()
    }

    fn run(sql: &str) -> Result<ResultTable, ExecError> {
        execute(&parse_sql(sql).unwrap(), &sales())
    }

    fn cells(sql: &str) -> Vec<Vec<Cell>> {
        run(sql).unwrap().rows
    }

    #[test]
    fn example_question() {
        let rows = cells(
            "SELECT AVG(profit) FROM sales WHERE product = 'OneView' AND customer = 'Allianz' AND subregion = 'ANZ'",
        );
        assert_eq!(rows, vec![vec![Cell::Float(15.0)]]);
    }

    #[test]
    fn count_star() {
        assert_eq!(cells("SELECT COUNT(*) FROM sales"), vec![vec![Cell::Integer(3)]]);
    }

    #[test]
    fn stddev_of_one_row_is_null() {
        assert_eq!(
            cells("SELECT STDDEV(profit) FROM sales WHERE customer = 'Costco'"),
            vec![vec![Cell::Null]]
        );
        let r = cells("SELECT STDDEV(sales) FROM sales");
        let Cell::Float(v) = r[0][0] else { panic!() };
        assert!((v - 76.37626158259734).abs() < 1e-9);
    }

    #[test]
    fn aggregate_over_no_rows() {
        assert_eq!(
            cells("SELECT COUNT(*), SUM(sales), AVG(profit) FROM sales WHERE product = 'x'"),
            vec![vec![Cell::Integer(0), Cell::Null, Cell::Null]]
        );
        assert!(cells("SELECT product, COUNT(*) FROM sales WHERE product = 'x' GROUP BY product").is_empty());
    }

    #[test]
    fn group_by_first_occurrence_and_order() {
        assert_eq!(
            cells("SELECT product, SUM(sales) FROM sales GROUP BY product"),
            vec![
                vec![Cell::Text("OneView".into()), Cell::Integer(300)],
                vec![Cell::Text("Data Smasher".into()), Cell::Integer(50)],
            ]
        );
        assert_eq!(
            cells("SELECT product, SUM(sales) AS total FROM sales GROUP BY product ORDER BY total"),
            vec![
                vec![Cell::Text("Data Smasher".into()), Cell::Integer(50)],
                vec![Cell::Text("OneView".into()), Cell::Integer(300)],
            ]
        );
        assert_eq!(
            cells("SELECT product FROM sales ORDER BY 1 DESC LIMIT 1"),
            vec![vec![Cell::Text("OneView".into())]]
        );
    }

    #[test]
    fn three_valued_logic() {
        let t = load_table("t", b"a,b\n1,\n2,5\n,7\n", &CsvOptions::default()).unwrap();
        let q = |s: &str| execute(&parse_sql(s).unwrap(), &t).unwrap().rows.len();
        assert_eq!(q("SELECT a FROM t WHERE b > 1"), 2);
        assert_eq!(q("SELECT a FROM t WHERE NOT (b > 1)"), 0);
        assert_eq!(q("SELECT a FROM t WHERE b > 1 OR a = 1"), 3);
        assert_eq!(q("SELECT a FROM t WHERE b IS NULL"), 1);
        assert_eq!(q("SELECT a FROM t WHERE a NOT IN (1, NULL)"), 0);
        assert_eq!(q("SELECT a FROM t WHERE a IN (1, NULL)"), 1);
    }

    #[test]
    fn division_by_zero_warns() {
        let r = run("SELECT sales / (profit - profit) FROM sales").unwrap();
        assert!(r.rows.iter().all(|row| row[0].is_null()));
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(cells("SELECT 7 / 2 FROM sales LIMIT 1"), vec![vec![Cell::Float(3.5)]]);
    }

    #[test]
    fn type_mismatch() {
        assert!(matches!(
            run("SELECT * FROM sales WHERE product < 3"),
            Err(ExecError::TypeMismatch(_))
        ));
        assert!(matches!(
            run("SELECT SUM(product) FROM sales"),
            Err(ExecError::TypeMismatch(_))
        ));
    }

    #[test]
    fn like_is_case_sensitive() {
        assert_eq!(cells("SELECT * FROM sales WHERE product LIKE 'One%'").len(), 2);
        assert_eq!(cells("SELECT * FROM sales WHERE product LIKE 'one%'").len(), 0);
        assert_eq!(cells("SELECT * FROM sales WHERE subregion LIKE 'A_Z'").len(), 2);
        assert!(like_match("abc", "%"));
        assert!(like_match("", "%%"));
        assert!(!like_match("abc", "a_"));
        assert!(like_match("a%c", "a%c"));
    }

    #[test]
    fn dates_compare_with_text_literals() {
        let t = load_table("t", b"d,v\n2023-01-05,1\n2024-02-01,2\n", &CsvOptions::default()).unwrap();
        let r = execute(&parse_sql("SELECT v FROM t WHERE d >= '2024-01-01'").unwrap(), &t).unwrap();
        assert_eq!(r.rows, vec![vec![Cell::Integer(2)]]);
    }

    #[test]
    fn overflow_promotes_to_float() {
        let t = load_table("t", b"a\n9223372036854775807\n1\n", &CsvOptions::default()).unwrap();
        let r = execute(&parse_sql("SELECT SUM(a) FROM t").unwrap(), &t).unwrap();
        assert!(matches!(r.rows[0][0], Cell::Float(_)));
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn unknown_names() {
        assert_eq!(run("SELECT foo FROM sales"), Err(ExecError::UnknownColumn("foo".into())));
        assert_eq!(run("SELECT * FROM other"), Err(ExecError::UnknownTable("other".into())));
    }
}
