//! Random CSV tables and random in-grammar queries over them.

use rand::seq::SliceRandom;
use rand::Rng;
use roundtable_core::sql::{AggFunc, BinaryOp, Expr, Literal, OrderItem, Query, SelectItem, UnaryOp};
use roundtable_core::table::{Cell, DataType, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Category,
    Identifier,
    Integer,
    Float,
    Boolean,
    Date,
}

const COLUMN_NAMES: &[&str] = &[
    "region", "product", "amount", "units", "flag", "opened", "code", "tier", "score", "label",
    "city", "price", "rating", "status", "segment", "owner", "weight", "channel", "grade", "batch",
];

const SYLLABLES: &[&str] = &[
    "ka", "lo", "mi", "ner", "to", "va", "zu", "pe", "ri", "sol", "tan", "bex", "qui", "dor", "mar",
    "fen", "gil", "hup", "jor", "wex",
];

pub fn word(rng: &mut impl Rng) -> String {
    let n = rng.gen_range(1..=3);
    (0..n).map(|_| *SYLLABLES.choose(rng).unwrap()).collect()
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
        None => String::new(),
    }
}

/// A display value of one to three words.
pub fn phrase(rng: &mut impl Rng) -> String {
    let n = *[1, 1, 1, 2, 2, 3].choose(rng).unwrap();
    let mut words: Vec<String> = (0..n).map(|_| capitalize(&word(rng))).collect();
    if rng.gen_bool(0.05) {
        words.last_mut().unwrap().push_str("'s");
    }
    words.join(" ")
}

pub struct GenTable {
    pub name: String,
    pub csv: String,
    pub kinds: Vec<Kind>,
}

/// A table with `1..=max_cols` columns and `1..=max_rows` rows.
pub fn random_table(rng: &mut impl Rng, max_rows: usize, max_cols: usize) -> GenTable {
    let ncols = rng.gen_range(1..=max_cols);
    let rows = rng.gen_range(1..=max_rows.max(1));
    let mut names: Vec<&str> = COLUMN_NAMES.to_vec();
    names.shuffle(rng);
    let kinds: Vec<Kind> = (0..ncols)
        .map(|_| {
            *[
                Kind::Category,
                Kind::Category,
                Kind::Identifier,
                Kind::Integer,
                Kind::Float,
                Kind::Boolean,
                Kind::Date,
            ]
            .choose(rng)
            .unwrap()
        })
        .collect();
    let mut columns: Vec<Vec<String>> = Vec::new();
    for &kind in &kinds {
        let null_rate = if rng.gen_bool(0.3) { 0.1 } else { 0.0 };
        let pool: Vec<String> = {
            let n = rng.gen_range(1..=12);
            let mut p: Vec<String> = (0..n).map(|_| phrase(rng)).collect();
            if rng.gen_bool(0.3) {
                // same value in another case
                let v = p[0].to_uppercase();
                p.push(v);
            }
            p
        };
        let col: Vec<String> = (0..rows)
            .map(|r| {
                if rng.gen_bool(null_rate) {
                    return String::new();
                }
                match kind {
                    Kind::Category => pool.choose(rng).unwrap().clone(),
                    Kind::Identifier => format!("ID-{r:05}-{}", word(rng)),
                    Kind::Integer => rng.gen_range(-50..500).to_string(),
                    Kind::Float => format!("{:.2}", rng.gen_range(-100.0..1000.0)),
                    Kind::Boolean => rng.gen_bool(0.5).to_string(),
                    Kind::Date => format!("2023-{:02}-{:02}", rng.gen_range(1..=12), rng.gen_range(1..=28)),
                }
            })
            .collect();
        columns.push(col);
    }
    let mut csv = names[..ncols].join(",");
    csv.push('\n');
    for r in 0..rows {
        let line: Vec<&str> = columns.iter().map(|c| c[r].as_str()).collect();
        csv.push_str(&line.join(","));
        csv.push('\n');
    }
    GenTable {
        name: format!("t{}", rng.gen_range(0..1000)),
        csv,
        kinds,
    }
}

struct Col {
    name: String,
    dtype: DataType,
    samples: Vec<Cell>,
}

pub struct QueryGen<'a, R: Rng> {
    rng: &'a mut R,
    table_name: String,
    cols: Vec<Col>,
}

fn lit(l: Literal) -> Expr {
    Expr::Literal(l)
}

fn bin(op: BinaryOp, l: Expr, r: Expr) -> Expr {
    Expr::binary(op, l, r)
}

impl<'a, R: Rng> QueryGen<'a, R> {
    pub fn new(rng: &'a mut R, table: &Table) -> Self {
        let cols = table
            .columns()
            .iter()
            .map(|c| Col {
                name: c.normalized_name.clone(),
                dtype: c.dtype,
                samples: c.values.iter().filter(|v| !v.is_null()).take(50).cloned().collect(),
            })
            .collect();
        Self {
            rng,
            table_name: table.name.clone(),
            cols,
        }
    }

    fn of_type(&self, f: impl Fn(DataType) -> bool) -> Vec<usize> {
        (0..self.cols.len()).filter(|&i| f(self.cols[i].dtype)).collect()
    }

    fn pick(&mut self, ids: &[usize]) -> Option<usize> {
        ids.choose(self.rng).copied()
    }

    fn col(&self, i: usize) -> Expr {
        Expr::column(&self.cols[i].name)
    }

    fn num_literal(&mut self) -> Expr {
        if self.rng.gen_bool(0.5) {
            lit(Literal::Integer(self.rng.gen_range(-20..300)))
        } else {
            lit(Literal::Float((self.rng.gen_range(-2000..20000) as f64) / 20.0))
        }
    }

    fn sample(&mut self, i: usize) -> Option<Cell> {
        self.cols[i].samples.choose(self.rng).cloned()
    }

    fn text_literal(&mut self, i: usize) -> Expr {
        match self.sample(i) {
            Some(Cell::Text(s)) if self.rng.gen_bool(0.8) => lit(Literal::String(s)),
            _ => lit(Literal::String(phrase(self.rng))),
        }
    }

    fn date_literal(&mut self) -> Expr {
        lit(Literal::String(format!(
            "2023-{:02}-{:02}",
            self.rng.gen_range(1..=12),
            self.rng.gen_range(1..=28)
        )))
    }

    fn num_expr(&mut self, depth: u32) -> Expr {
        let nums = self.of_type(DataType::is_numeric);
        if depth == 0 || nums.is_empty() || self.rng.gen_bool(0.6) {
            return match self.pick(&nums) {
                Some(i) if self.rng.gen_bool(0.85) => self.col(i),
                _ => self.num_literal(),
            };
        }
        let op = *[BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div]
            .choose(self.rng)
            .unwrap();
        let l = self.num_expr(depth - 1);
        let r = if op == BinaryOp::Mul {
            lit(Literal::Integer(self.rng.gen_range(-3..4)))
        } else {
            self.num_expr(depth - 1)
        };
        let e = bin(op, l, r);
        if self.rng.gen_bool(0.1) {
            Expr::Unary {
                op: UnaryOp::Neg,
                expr: Box::new(e),
            }
        } else {
            e
        }
    }

    fn cmp_op(&mut self) -> BinaryOp {
        *[
            BinaryOp::Eq,
            BinaryOp::NotEq,
            BinaryOp::Lt,
            BinaryOp::LtEq,
            BinaryOp::Gt,
            BinaryOp::GtEq,
        ]
        .choose(self.rng)
        .unwrap()
    }

    fn like_pattern(&mut self, i: usize) -> String {
        let base = match self.sample(i) {
            Some(Cell::Text(s)) => s,
            _ => word(self.rng),
        };
        let chars: Vec<char> = base.chars().collect();
        let cut = self.rng.gen_range(0..=chars.len());
        match self.rng.gen_range(0..4) {
            0 => chars[..cut].iter().collect::<String>() + "%",
            1 => "%".to_string() + &chars[cut..].iter().collect::<String>(),
            2 => {
                let mut c = chars.clone();
                if !c.is_empty() {
                    let k = self.rng.gen_range(0..c.len());
                    c[k] = '_';
                }
                c.into_iter().collect()
            }
            _ => format!("%{}%", chars[cut / 2..cut].iter().collect::<String>()),
        }
    }

    fn predicate(&mut self, depth: u32) -> Expr {
        if depth > 0 && self.rng.gen_bool(0.35) {
            return match self.rng.gen_range(0..5) {
                0 => Expr::Unary {
                    op: UnaryOp::Not,
                    expr: Box::new(self.predicate(depth - 1)),
                },
                1 | 2 => bin(BinaryOp::And, self.predicate(depth - 1), self.predicate(depth - 1)),
                _ => bin(BinaryOp::Or, self.predicate(depth - 1), self.predicate(depth - 1)),
            };
        }
        let i = self.rng.gen_range(0..self.cols.len());
        let c = self.col(i);
        let negated = self.rng.gen_bool(0.25);
        if self.rng.gen_bool(0.1) {
            return Expr::IsNull {
                expr: Box::new(c),
                negated,
            };
        }
        match self.cols[i].dtype {
            DataType::Integer | DataType::Float => match self.rng.gen_range(0..4) {
                0 => {
                    let (a, b) = (self.num_literal(), self.num_literal());
                    Expr::Between {
                        expr: Box::new(c),
                        low: Box::new(a),
                        high: Box::new(b),
                        negated,
                    }
                }
                1 => {
                    let list = (0..self.rng.gen_range(1..4))
                        .map(|_| match self.sample(i) {
                            Some(Cell::Integer(v)) => lit(Literal::Integer(v)),
                            Some(Cell::Float(v)) => lit(Literal::Float(v)),
                            _ => self.num_literal(),
                        })
                        .collect();
                    Expr::InList {
                        expr: Box::new(c),
                        list,
                        negated,
                    }
                }
                _ => {
                    let op = self.cmp_op();
                    let l = self.num_expr(1);
                    let r = self.num_literal();
                    bin(op, l, r)
                }
            },
            DataType::Text => match self.rng.gen_range(0..4) {
                0 => {
                    let p = self.like_pattern(i);
                    Expr::Like {
                        expr: Box::new(c),
                        pattern: Box::new(lit(Literal::String(p))),
                        negated,
                    }
                }
                1 => {
                    let list = (0..self.rng.gen_range(1..4)).map(|_| self.text_literal(i)).collect();
                    Expr::InList {
                        expr: Box::new(c),
                        list,
                        negated,
                    }
                }
                _ => {
                    let op = self.cmp_op();
                    let r = self.text_literal(i);
                    bin(op, c, r)
                }
            },
            DataType::Boolean => {
                if self.rng.gen_bool(0.3) {
                    c
                } else {
                    let op = if self.rng.gen_bool(0.7) { BinaryOp::Eq } else { BinaryOp::NotEq };
                    bin(op, c, lit(Literal::Boolean(self.rng.gen_bool(0.5))))
                }
            }
            DataType::Date => {
                if self.rng.gen_bool(0.3) {
                    let (a, b) = (self.date_literal(), self.date_literal());
                    Expr::Between {
                        expr: Box::new(c),
                        low: Box::new(a),
                        high: Box::new(b),
                        negated,
                    }
                } else {
                    let op = self.cmp_op();
                    let r = self.date_literal();
                    bin(op, c, r)
                }
            }
        }
    }

    fn aggregate(&mut self) -> Expr {
        let nums = self.of_type(DataType::is_numeric);
        let comparable = self.of_type(|t| t != DataType::Boolean);
        let roll = self.rng.gen_range(0..10);
        if roll < 2 {
            return Expr::Aggregate {
                func: AggFunc::Count,
                arg: None,
            };
        }
        if roll < 3 || nums.is_empty() {
            let i = match self.pick(&comparable) {
                Some(i) if roll >= 3 => i,
                _ => self.rng.gen_range(0..self.cols.len()),
            };
            let func = if self.cols[i].dtype == DataType::Boolean || self.rng.gen_bool(0.4) {
                AggFunc::Count
            } else if self.rng.gen_bool(0.5) {
                AggFunc::Min
            } else {
                AggFunc::Max
            };
            return Expr::Aggregate {
                func,
                arg: Some(Box::new(self.col(i))),
            };
        }
        let func = *[
            AggFunc::Sum,
            AggFunc::Avg,
            AggFunc::Min,
            AggFunc::Max,
            AggFunc::Stddev,
            AggFunc::Count,
        ]
        .choose(self.rng)
        .unwrap();
        let arg = self.num_expr(1);
        let agg = Expr::Aggregate {
            func,
            arg: Some(Box::new(arg)),
        };
        if self.rng.gen_bool(0.15) {
            bin(
                BinaryOp::Div,
                agg,
                Expr::Aggregate {
                    func: AggFunc::Count,
                    arg: None,
                },
            )
        } else {
            agg
        }
    }

    pub fn query(&mut self) -> Query {
        let where_clause = self.rng.gen_bool(0.7).then(|| self.predicate(2));
        let aggregated = self.rng.gen_bool(0.5);
        let mut select = Vec::new();
        let mut group_by = Vec::new();
        let mut order_by = Vec::new();
        let mut aliases = Vec::new();
        let alias = |rng: &mut R, aliases: &mut Vec<String>| {
            rng.gen_bool(0.3).then(|| {
                let a = format!("out_{}", aliases.len());
                aliases.push(a.clone());
                a
            })
        };
        let mut width = 0usize;
        if aggregated {
            let groupable = self.of_type(|t| t != DataType::Float);
            let n = self.rng.gen_range(0..=2.min(groupable.len()));
            let mut keys: Vec<usize> = groupable.choose_multiple(self.rng, n).copied().collect();
            keys.sort();
            for &k in &keys {
                group_by.push(self.cols[k].name.clone());
                if self.rng.gen_bool(0.8) {
                    let a = alias(self.rng, &mut aliases);
                    select.push(SelectItem::Expr { expr: self.col(k), alias: a });
                    width += 1;
                }
            }
            for _ in 0..self.rng.gen_range(1..=3) {
                let e = self.aggregate();
                let a = alias(self.rng, &mut aliases);
                select.push(SelectItem::Expr { expr: e, alias: a });
                width += 1;
            }
            for _ in 0..self.rng.gen_range(0..=2) {
                let key = match self.rng.gen_range(0..4) {
                    0 => lit(Literal::Integer(self.rng.gen_range(1..=width as i64))),
                    1 if !aliases.is_empty() => Expr::Column(aliases.choose(self.rng).unwrap().clone()),
                    2 if !keys.is_empty() => {
                        let k = *keys.choose(self.rng).unwrap();
                        self.col(k)
                    }
                    _ => self.aggregate(),
                };
                order_by.push(OrderItem {
                    expr: key,
                    descending: self.rng.gen_bool(0.5),
                });
            }
        } else {
            if self.rng.gen_bool(0.15) {
                select.push(SelectItem::Wildcard);
                width += self.cols.len();
            } else {
                for _ in 0..self.rng.gen_range(1..=3) {
                    let e = if self.rng.gen_bool(0.6) {
                        let i = self.rng.gen_range(0..self.cols.len());
                        self.col(i)
                    } else {
                        self.num_expr(2)
                    };
                    let a = alias(self.rng, &mut aliases);
                    select.push(SelectItem::Expr { expr: e, alias: a });
                    width += 1;
                }
            }
            for _ in 0..self.rng.gen_range(0..=2) {
                let key = match self.rng.gen_range(0..4) {
                    0 => lit(Literal::Integer(self.rng.gen_range(1..=width as i64))),
                    1 if !aliases.is_empty() => Expr::Column(aliases.choose(self.rng).unwrap().clone()),
                    2 => self.num_expr(1),
                    _ => {
                        let i = self.rng.gen_range(0..self.cols.len());
                        self.col(i)
                    }
                };
                order_by.push(OrderItem {
                    expr: key,
                    descending: self.rng.gen_bool(0.5),
                });
            }
        }
        let limit = self.rng.gen_bool(0.3).then(|| self.rng.gen_range(0..20));
        Query {
            select,
            from: self.table_name.clone(),
            where_clause,
            group_by,
            order_by,
            limit,
        }
    }
}

/// Prints `q` as SQL text, fully parenthesized. Written independently of the
/// engine's own printer.
pub fn to_sql(q: &Query) -> String {
    let mut s = String::from("SELECT ");
    let items: Vec<String> = q
        .select
        .iter()
        .map(|item| match item {
            SelectItem::Wildcard => "*".to_string(),
            SelectItem::Expr { expr, alias } => match alias {
                Some(a) => format!("{} AS {a}", expr_sql(expr)),
                None => expr_sql(expr),
            },
        })
        .collect();
    s.push_str(&items.join(", "));
    s.push_str(&format!(" FROM {}", q.from));
    if let Some(w) = &q.where_clause {
        s.push_str(&format!(" WHERE {}", expr_sql(w)));
    }
    if !q.group_by.is_empty() {
        s.push_str(&format!(" GROUP BY {}", q.group_by.join(", ")));
    }
    if !q.order_by.is_empty() {
        let keys: Vec<String> = q
            .order_by
            .iter()
            .map(|o| format!("{}{}", expr_sql(&o.expr), if o.descending { " DESC" } else { "" }))
            .collect();
        s.push_str(&format!(" ORDER BY {}", keys.join(", ")));
    }
    if let Some(n) = q.limit {
        s.push_str(&format!(" LIMIT {n}"));
    }
    s
}

fn literal_sql(l: &Literal) -> String {
    match l {
        Literal::Integer(v) => v.to_string(),
        Literal::Float(v) => {
            let t = format!("{v}");
            if t.contains('.') || t.contains('e') {
                t
            } else {
                format!("{t}.0")
            }
        }
        Literal::String(v) => format!("'{}'", v.replace('\'', "''")),
        Literal::Boolean(true) => "TRUE".into(),
        Literal::Boolean(false) => "FALSE".into(),
        Literal::Null => "NULL".into(),
    }
}

pub fn expr_sql(e: &Expr) -> String {
    match e {
        Expr::Column(c) => c.clone(),
        Expr::Literal(l) => literal_sql(l),
        Expr::Unary { op: UnaryOp::Neg, expr } => format!("(-{})", expr_sql(expr)),
        Expr::Unary { op: UnaryOp::Not, expr } => format!("(NOT {})", expr_sql(expr)),
        Expr::Binary { op, left, right } => {
            let sym = match op {
                BinaryOp::Add => "+",
                BinaryOp::Sub => "-",
                BinaryOp::Mul => "*",
                BinaryOp::Div => "/",
                BinaryOp::Eq => "=",
                BinaryOp::NotEq => "<>",
                BinaryOp::Lt => "<",
                BinaryOp::LtEq => "<=",
                BinaryOp::Gt => ">",
                BinaryOp::GtEq => ">=",
                BinaryOp::And => "AND",
                BinaryOp::Or => "OR",
            };
            format!("({} {sym} {})", expr_sql(left), expr_sql(right))
        }
        Expr::Like { expr, pattern, negated } => format!(
            "({} {}LIKE {})",
            expr_sql(expr),
            if *negated { "NOT " } else { "" },
            expr_sql(pattern)
        ),
        Expr::InList { expr, list, negated } => format!(
            "({} {}IN ({}))",
            expr_sql(expr),
            if *negated { "NOT " } else { "" },
            list.iter().map(expr_sql).collect::<Vec<_>>().join(", ")
        ),
        Expr::Between { expr, low, high, negated } => format!(
            "({} {}BETWEEN {} AND {})",
            expr_sql(expr),
            if *negated { "NOT " } else { "" },
            expr_sql(low),
            expr_sql(high)
        ),
        Expr::IsNull { expr, negated } => format!(
            "({} IS {}NULL)",
            expr_sql(expr),
            if *negated { "NOT " } else { "" }
        ),
        Expr::Aggregate { func, arg } => {
            let name = match func {
                AggFunc::Count => "count",
                AggFunc::Sum => "sum",
                AggFunc::Avg => "avg",
                AggFunc::Min => "min",
                AggFunc::Max => "max",
                AggFunc::Stddev => "stddev",
            };
            match arg {
                Some(a) => format!("{name}({})", expr_sql(a)),
                None => format!("{name}(*)"),
            }
        }
    }
}
