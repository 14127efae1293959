use serde::{Deserialize, Serialize};

use crate::table::Cell;

const REL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ResultTable {
    pub fn to_csv(&self) -> String {
        let line = |fields: Vec<String>| {
            fields
                .into_iter()
                .map(|f| {
                    if f.contains([',', '"', '\n', '\r']) {
                        format!("\"{}\"", f.replace('"', "\"\""))
                    } else {
                        f
                    }
                })
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = line(self.columns.clone());
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row.iter().map(Cell::render).collect()));
            out.push('\n');
        }
        out
    }

    /// The single cell of a one-by-one result.
    pub fn scalar(&self) -> Option<&Cell> {
        match (self.columns.len(), self.rows.as_slice()) {
            (1, [row]) => row.first(),
            _ => None,
        }
    }
}

/// Cell equality with a relative tolerance on numbers. Integers and floats
/// compare by value.
pub fn cells_close(a: &Cell, b: &Cell) -> bool {
    match (a.as_f64(), b.as_f64()) {
        (Some(x), Some(y)) => {
            x == y || (x - y).abs() <= REL_TOLERANCE * x.abs().max(y.abs()).max(1.0)
        }
        _ => a == b,
    }
}

fn rows_close(a: &[Cell], b: &[Cell]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| cells_close(x, y))
}

/// Order-insensitive row multiset comparison. Column names are ignored.
pub fn results_equivalent(a: &ResultTable, b: &ResultTable) -> bool {
    if a.rows.len() != b.rows.len() || a.columns.len() != b.columns.len() {
        return false;
    }
    let mut used = vec![false; b.rows.len()];
    'rows: for row in &a.rows {
        for (j, other) in b.rows.iter().enumerate() {
            if !used[j] && rows_close(row, other) {
                used[j] = true;
                continue 'rows;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: Vec<Vec<Cell>>) -> ResultTable {
        ResultTable {
            columns: vec!["a".into(); rows.first().map_or(1, Vec::len)],
            rows,
            warnings: vec![],
        }
    }

    #[test]
    fn equivalence_ignores_order_and_tolerates_rounding() {
        let a = table(vec![
            vec![Cell::Text("x".into()), Cell::Float(0.1 + 0.2)],
            vec![Cell::Text("y".into()), Cell::Integer(2)],
        ]);
        let b = table(vec![
            vec![Cell::Text("y".into()), Cell::Float(2.0)],
            vec![Cell::Text("x".into()), Cell::Float(0.3)],
        ]);
        assert!(results_equivalent(&a, &b));
        assert!(results_equivalent(&b, &a));
        assert!(results_equivalent(&a, &a));
    }

    #[test]
    fn multiplicity_matters() {
        let a = table(vec![vec![Cell::Integer(1)], vec![Cell::Integer(1)]]);
        let b = table(vec![vec![Cell::Integer(1)], vec![Cell::Integer(2)]]);
        assert!(!results_equivalent(&a, &b));
        assert!(!cells_close(&Cell::Text("1".into()), &Cell::Integer(1)));
        assert!(!cells_close(&Cell::Float(1.0), &Cell::Float(1.001)));
    }

    #[test]
    fn csv_and_json() {
        let t = ResultTable {
            columns: vec!["name".into(), "AVG(profit)".into()],
            rows: vec![vec![Cell::Text("a,b".into()), Cell::Float(15.0)], vec![Cell::Null, Cell::Integer(3)]],
            warnings: vec![],
        };
        assert_eq!(t.to_csv(), "name,AVG(profit)\n\"a,b\",15.0\n,3\n");
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"columns":["name","AVG(profit)"],"rows":[["a,b",15.0],[null,3]]}"#);
    }
}
