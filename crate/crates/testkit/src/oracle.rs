//! Naive reference interpreter for the query AST. Slow and direct on purpose:
//! row-at-a-time, linear group lookup, no shared code with the engine.

use std::cmp::Ordering;

use roundtable_core::sql::{AggFunc, BinaryOp, Expr, Literal, Query, SelectItem, UnaryOp};
use roundtable_core::table::{Cell, Table};

#[derive(Debug, Clone, PartialEq)]
pub enum V {
    Null,
    I(i64),
    F(f64),
    B(bool),
    S(String),
    /// ISO `YYYY-MM-DD`, which sorts correctly as a string.
    D(String),
}

impl V {
    pub fn from_cell(c: &Cell) -> V {
        match c {
            Cell::Null => V::Null,
            Cell::Integer(v) => V::I(*v),
            Cell::Float(v) => V::F(*v),
            Cell::Boolean(v) => V::B(*v),
            Cell::Date(d) => V::D(d.format("%Y-%m-%d").to_string()),
            Cell::Text(s) => V::S(s.clone()),
        }
    }

    fn num(&self) -> Option<f64> {
        match self {
            V::I(v) => Some(*v as f64),
            V::F(v) => Some(*v),
            _ => None,
        }
    }
}

fn valid_date(s: &str) -> Option<String> {
    let b = s.trim().as_bytes();
    if b.len() != 10 || b[4] != b'-' || b[7] != b'-' {
        return None;
    }
    let digits = |r: std::ops::Range<usize>| -> Option<u32> {
        std::str::from_utf8(&b[r]).ok()?.parse().ok()
    };
    let (y, m, d) = (digits(0..4)?, digits(5..7)?, digits(8..10)?);
    let leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    let days = [31, if leap { 29 } else { 28 }, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];
    (1..=12).contains(&m).then_some(())?;
    (1..=days[m as usize - 1]).contains(&d).then_some(())?;
    Some(s.trim().to_string())
}

fn cmp(a: &V, b: &V) -> Result<Ordering, String> {
    match (a, b) {
        (V::I(x), V::I(y)) => Ok(x.cmp(y)),
        (V::S(x), V::S(y)) => Ok(x.cmp(y)),
        (V::B(x), V::B(y)) => Ok(x.cmp(y)),
        (V::D(x), V::D(y)) => Ok(x.cmp(y)),
        (V::D(x), V::S(y)) => Ok(x.cmp(&valid_date(y).ok_or("bad date")?)),
        (V::S(x), V::D(y)) => Ok(valid_date(x).ok_or("bad date")?.cmp(y)),
        _ => match (a.num(), b.num()) {
            (Some(x), Some(y)) => x.partial_cmp(&y).ok_or_else(|| "nan".to_string()),
            _ => Err(format!("incomparable {a:?} {b:?}")),
        },
    }
}

fn like(t: &[char], p: &[char]) -> bool {
    match p.first() {
        None => t.is_empty(),
        Some('%') => (0..=t.len()).any(|i| like(&t[i..], &p[1..])),
        Some('_') => !t.is_empty() && like(&t[1..], &p[1..]),
        Some(c) => t.first() == Some(c) && like(&t[1..], &p[1..]),
    }
}

fn tri(v: &V) -> Result<Option<bool>, String> {
    match v {
        V::Null => Ok(None),
        V::B(b) => Ok(Some(*b)),
        other => Err(format!("not boolean: {other:?}")),
    }
}

fn from_tri(t: Option<bool>) -> V {
    match t {
        None => V::Null,
        Some(b) => V::B(b),
    }
}

fn and(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    if a == Some(false) || b == Some(false) {
        Some(false)
    } else if a.is_none() || b.is_none() {
        None
    } else {
        Some(true)
    }
}

fn or(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    if a == Some(true) || b == Some(true) {
        Some(true)
    } else if a.is_none() || b.is_none() {
        None
    } else {
        Some(false)
    }
}

fn apply(op: BinaryOp, l: V, r: V) -> Result<V, String> {
    use BinaryOp::*;
    match op {
        And => Ok(from_tri(and(tri(&l)?, tri(&r)?))),
        Or => Ok(from_tri(or(tri(&l)?, tri(&r)?))),
        Eq | NotEq | Lt | LtEq | Gt | GtEq => {
            if l == V::Null || r == V::Null {
                return Ok(V::Null);
            }
            let o = cmp(&l, &r)?;
            Ok(V::B(match op {
                Eq => o.is_eq(),
                NotEq => o.is_ne(),
                Lt => o.is_lt(),
                LtEq => o.is_le(),
                Gt => o.is_gt(),
                _ => o.is_ge(),
            }))
        }
        Add | Sub | Mul | Div => {
            let ok = |v: &V| matches!(v, V::Null | V::I(_) | V::F(_));
            if !ok(&l) || !ok(&r) {
                return Err("arithmetic on non-number".into());
            }
            if l == V::Null || r == V::Null {
                return Ok(V::Null);
            }
            let (x, y) = (l.num().unwrap(), r.num().unwrap());
            if op == Div {
                return Ok(if y == 0.0 { V::Null } else { V::F(x / y) });
            }
            if let (V::I(a), V::I(b)) = (&l, &r) {
                let exact = match op {
                    Add => a.checked_add(*b),
                    Sub => a.checked_sub(*b),
                    _ => a.checked_mul(*b),
                };
                if let Some(v) = exact {
                    return Ok(V::I(v));
                }
            }
            Ok(V::F(match op {
                Add => x + y,
                Sub => x - y,
                _ => x * y,
            }))
        }
    }
}

struct Ctx {
    names: Vec<String>,
    rows: Vec<Vec<V>>,
}

impl Ctx {
    fn col(&self, name: &str) -> Result<usize, String> {
        let n = name.to_lowercase();
        self.names
            .iter()
            .position(|c| *c == n)
            .ok_or_else(|| format!("no column {name}"))
    }

    /// `group` holds row numbers; `None` means plain row scope on `row`.
    fn eval(&self, e: &Expr, row: Option<usize>, group: Option<&[usize]>) -> Result<V, String> {
        match e {
            Expr::Column(name) => {
                let c = self.col(name)?;
                let r = match (row, group) {
                    (Some(r), _) => r,
                    (None, Some(g)) => match g.first() {
                        Some(r) => *r,
                        None => return Ok(V::Null),
                    },
                    _ => unreachable!(),
                };
                Ok(self.rows[r][c].clone())
            }
            Expr::Literal(l) => Ok(match l {
                Literal::Integer(v) => V::I(*v),
                Literal::Float(v) => V::F(*v),
                Literal::String(s) => V::S(s.clone()),
                Literal::Boolean(b) => V::B(*b),
                Literal::Null => V::Null,
            }),
            Expr::Unary { op, expr } => match (op, self.eval(expr, row, group)?) {
                (_, V::Null) => Ok(V::Null),
                (UnaryOp::Neg, V::I(i)) => Ok(i.checked_neg().map(V::I).unwrap_or(V::F(-(i as f64)))),
                (UnaryOp::Neg, V::F(f)) => Ok(V::F(-f)),
                (UnaryOp::Not, V::B(b)) => Ok(V::B(!b)),
                _ => Err("bad unary operand".into()),
            },
            Expr::Binary { op, left, right } => {
                apply(*op, self.eval(left, row, group)?, self.eval(right, row, group)?)
            }
            Expr::Like { expr, pattern, negated } => {
                match (self.eval(expr, row, group)?, self.eval(pattern, row, group)?) {
                    (V::Null, _) | (_, V::Null) => Ok(V::Null),
                    (V::S(t), V::S(p)) => {
                        let t: Vec<char> = t.chars().collect();
                        let p: Vec<char> = p.chars().collect();
                        Ok(V::B(like(&t, &p) ^ negated))
                    }
                    _ => Err("LIKE on non-text".into()),
                }
            }
            Expr::InList { expr, list, negated } => {
                let v = self.eval(expr, row, group)?;
                let mut acc = Some(false);
                for item in list {
                    let eq = apply(BinaryOp::Eq, v.clone(), self.eval(item, row, group)?)?;
                    acc = or(acc, tri(&eq)?);
                }
                Ok(from_tri(if *negated { acc.map(|b| !b) } else { acc }))
            }
            Expr::Between { expr, low, high, negated } => {
                let v = self.eval(expr, row, group)?;
                let lo = apply(BinaryOp::GtEq, v.clone(), self.eval(low, row, group)?)?;
                let hi = apply(BinaryOp::LtEq, v, self.eval(high, row, group)?)?;
                let inside = and(tri(&lo)?, tri(&hi)?);
                Ok(from_tri(if *negated { inside.map(|b| !b) } else { inside }))
            }
            Expr::IsNull { expr, negated } => {
                let v = self.eval(expr, row, group)?;
                Ok(V::B((v == V::Null) != *negated))
            }
            Expr::Aggregate { func, arg } => {
                let g = group.ok_or("aggregate in row scope")?;
                self.aggregate(*func, arg.as_deref(), g)
            }
        }
    }

    fn aggregate(&self, func: AggFunc, arg: Option<&Expr>, g: &[usize]) -> Result<V, String> {
        let Some(arg) = arg else {
            return Ok(V::I(g.len() as i64));
        };
        let mut vals = Vec::new();
        for &r in g {
            match self.eval(arg, Some(r), None)? {
                V::Null => {}
                v => vals.push(v),
            }
        }
        match func {
            AggFunc::Count => Ok(V::I(vals.len() as i64)),
            AggFunc::Min | AggFunc::Max => {
                let mut best: Option<V> = None;
                for v in vals {
                    let replace = match &best {
                        None => true,
                        Some(b) => {
                            let o = cmp(&v, b)?;
                            if func == AggFunc::Min {
                                o.is_lt()
                            } else {
                                o.is_gt()
                            }
                        }
                    };
                    if replace {
                        best = Some(v);
                    }
                }
                Ok(best.unwrap_or(V::Null))
            }
            _ => {
                let mut xs = Vec::new();
                for v in &vals {
                    xs.push(v.num().ok_or("numeric aggregate over non-number")?);
                }
                let n = xs.len();
                let mut total = 0.0;
                for x in &xs {
                    total += x;
                }
                match func {
                    AggFunc::Sum if n == 0 => Ok(V::Null),
                    AggFunc::Sum => {
                        let mut acc: Option<i64> = Some(0);
                        for v in &vals {
                            acc = match (acc, v) {
                                (Some(a), V::I(i)) => a.checked_add(*i),
                                _ => None,
                            };
                        }
                        Ok(acc.map(V::I).unwrap_or(V::F(total)))
                    }
                    AggFunc::Avg if n == 0 => Ok(V::Null),
                    AggFunc::Avg => Ok(V::F(total / n as f64)),
                    AggFunc::Stddev if n < 2 => Ok(V::Null),
                    _ => {
                        let mean = total / n as f64;
                        let mut ss = 0.0;
                        for x in &xs {
                            ss += (x - mean) * (x - mean);
                        }
                        Ok(V::F((ss / (n - 1) as f64).sqrt()))
                    }
                }
            }
        }
    }
}

fn null_first(a: &V, b: &V) -> Ordering {
    match (a, b) {
        (V::Null, V::Null) => Ordering::Equal,
        (V::Null, _) => Ordering::Less,
        (_, V::Null) => Ordering::Greater,
        _ => cmp(a, b).unwrap_or(Ordering::Equal),
    }
}

/// Runs `q` over `table`. Any error comes back as a message; callers only
/// compare whether both sides failed.
pub fn run(q: &Query, table: &Table) -> Result<Vec<Vec<V>>, String> {
    if q.from.to_lowercase() != table.name.to_lowercase() {
        return Err("unknown table".into());
    }
    let names: Vec<String> = table.columns().iter().map(|c| c.normalized_name.clone()).collect();
    let rows: Vec<Vec<V>> = (0..table.row_count())
        .map(|r| table.columns().iter().map(|c| V::from_cell(&c.values[r])).collect())
        .collect();
    let ctx = Ctx { names, rows };

    let mut kept = Vec::new();
    for r in 0..ctx.rows.len() {
        let pass = match &q.where_clause {
            None => true,
            Some(w) => tri(&ctx.eval(w, Some(r), None)?)? == Some(true),
        };
        if pass {
            kept.push(r);
        }
    }

    let mut exprs: Vec<(Expr, Option<String>)> = Vec::new();
    for item in &q.select {
        match item {
            SelectItem::Wildcard => {
                for n in &ctx.names {
                    exprs.push((Expr::Column(n.clone()), None));
                }
            }
            SelectItem::Expr { expr, alias } => exprs.push((expr.clone(), alias.clone())),
        }
    }
    let has_agg = exprs.iter().any(|(e, _)| has_aggregate(e));
    let aggregated = has_agg || !q.group_by.is_empty();

    let groups: Vec<Vec<usize>> = if !aggregated {
        kept.iter().map(|&r| vec![r]).collect()
    } else if q.group_by.is_empty() {
        vec![kept]
    } else {
        let keys: Vec<usize> = q.group_by.iter().map(|g| ctx.col(g)).collect::<Result<_, _>>()?;
        let mut out: Vec<(Vec<V>, Vec<usize>)> = Vec::new();
        for r in kept {
            let k: Vec<V> = keys.iter().map(|&c| ctx.rows[r][c].clone()).collect();
            match out.iter_mut().find(|(ek, _)| *ek == k) {
                Some((_, g)) => g.push(r),
                None => out.push((k, vec![r])),
            }
        }
        out.into_iter().map(|(_, g)| g).collect()
    };

    let mut produced: Vec<(Vec<V>, Vec<V>)> = Vec::new();
    for g in &groups {
        let (row, group) = if aggregated {
            (None, Some(g.as_slice()))
        } else {
            (Some(g[0]), None)
        };
        let mut vals = Vec::new();
        for (e, _) in &exprs {
            vals.push(ctx.eval(e, row, group)?);
        }
        let mut keys = Vec::new();
        for o in &q.order_by {
            let k = match &o.expr {
                Expr::Literal(Literal::Integer(n)) => {
                    let i = usize::try_from(*n).ok().filter(|&i| i >= 1 && i <= vals.len());
                    vals[i.ok_or("ordinal out of range")? - 1].clone()
                }
                Expr::Column(name)
                    if exprs
                        .iter()
                        .any(|(_, a)| a.as_deref().map(str::to_lowercase) == Some(name.to_lowercase())) =>
                {
                    let i = exprs
                        .iter()
                        .position(|(_, a)| a.as_deref().map(str::to_lowercase) == Some(name.to_lowercase()))
                        .unwrap();
                    vals[i].clone()
                }
                other => ctx.eval(other, row, group)?,
            };
            keys.push(k);
        }
        produced.push((vals, keys));
    }

    // insertion sort: stable and obviously so
    let mut sorted: Vec<(Vec<V>, Vec<V>)> = Vec::new();
    for item in produced {
        let mut at = sorted.len();
        while at > 0 && before(&item.1, &sorted[at - 1].1, q) {
            at -= 1;
        }
        sorted.insert(at, item);
    }
    let mut out: Vec<Vec<V>> = sorted.into_iter().map(|(v, _)| v).collect();
    if let Some(n) = q.limit {
        out.truncate(n as usize);
    }
    Ok(out)
}

fn before(a: &[V], b: &[V], q: &Query) -> bool {
    for (i, o) in q.order_by.iter().enumerate() {
        let mut ord = null_first(&a[i], &b[i]);
        if o.descending {
            ord = ord.reverse();
        }
        match ord {
            Ordering::Less => return true,
            Ordering::Greater => return false,
            Ordering::Equal => {}
        }
    }
    false
}

fn has_aggregate(e: &Expr) -> bool {
    match e {
        Expr::Aggregate { .. } => true,
        Expr::Column(_) | Expr::Literal(_) => false,
        Expr::Unary { expr, .. } | Expr::IsNull { expr, .. } => has_aggregate(expr),
        Expr::Binary { left, right, .. } => has_aggregate(left) || has_aggregate(right),
        Expr::Like { expr, pattern, .. } => has_aggregate(expr) || has_aggregate(pattern),
        Expr::InList { expr, list, .. } => has_aggregate(expr) || list.iter().any(has_aggregate),
        Expr::Between { expr, low, high, .. } => {
            has_aggregate(expr) || has_aggregate(low) || has_aggregate(high)
        }
    }
}

/// Cell-by-cell comparison with a relative tolerance on floats. Types must
/// agree exactly.
pub fn rows_match(oracle: &[Vec<V>], engine: &[Vec<Cell>]) -> Result<(), String> {
    if oracle.len() != engine.len() {
        return Err(format!("row count {} vs {}", oracle.len(), engine.len()));
    }
    for (i, (a, b)) in oracle.iter().zip(engine).enumerate() {
        if a.len() != b.len() {
            return Err(format!("row {i}: width {} vs {}", a.len(), b.len()));
        }
        for (j, (x, y)) in a.iter().zip(b).enumerate() {
            let y = V::from_cell(y);
            let same = match (x, &y) {
                (V::F(p), V::F(q)) => (p - q).abs() <= 1e-9 * p.abs().max(q.abs()).max(1.0),
                _ => *x == y,
            };
            if !same {
                return Err(format!("row {i} col {j}: oracle {x:?} vs engine {y:?}"));
            }
        }
    }
    Ok(())
}
