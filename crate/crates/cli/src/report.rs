use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::Value;

/// One table of checks. `pass` holds iff every row passes and no
/// report-level condition failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub kind: String,
    pub backend: String,
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub rows: Vec<Value>,
    pub pass: bool,
}

impl Report {
    pub fn new(kind: &str, backend: impl ToString, id: impl ToString) -> Self {
        Report {
            kind: kind.to_string(),
            backend: backend.to_string(),
            id: id.to_string(),
            params: BTreeMap::new(),
            rows: Vec::new(),
            pass: true,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }

    /// Appends a row. Rows must carry a boolean `pass` field.
    pub fn push<T: Serialize>(&mut self, row: &T) {
        let value = serde_json::to_value(row).expect("rows serialize");
        let ok = value.get("pass").and_then(Value::as_bool).unwrap_or(false);
        self.pass &= ok;
        self.rows.push(value);
    }

    pub fn require(&mut self, condition: bool) {
        self.pass &= condition;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunDocument {
    pub command: String,
    pub seed: u64,
    pub pass: bool,
    pub reports: Vec<Report>,
}

impl RunDocument {
    pub fn new(command: &str, seed: u64, reports: Vec<Report>) -> Self {
        RunDocument {
            command: command.to_string(),
            seed,
            pass: reports.iter().all(|r| r.pass),
            reports,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    /// One CSV line per row, with the report's kind, backend and id in
    /// front and the union of row fields as further columns.
    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut columns = BTreeSet::new();
        for r in &self.reports {
            for row in &r.rows {
                if let Value::Object(m) = row {
                    columns.extend(m.keys().cloned());
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["kind".to_string(), "backend".into(), "id".into()];
        header.extend(columns.iter().cloned());
        w.write_record(&header)?;
        for r in &self.reports {
            for row in &r.rows {
                let mut record = vec![r.kind.clone(), r.backend.clone(), r.id.clone()];
                for c in &columns {
                    record.push(match row.get(c) {
                        None | Some(Value::Null) => String::new(),
                        Some(Value::String(s)) => s.clone(),
                        Some(v) => v.to_string(),
                    });
                }
                w.write_record(&record)?;
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_flattens_rows() {
        let mut r = Report::new("claim2", "p=2", "xi");
        r.push(&json!({"alpha": 0, "valuation_lhs": "0", "pass": true}));
        r.push(&json!({"alpha": 1, "note": "a,b", "pass": true}));
        let doc = RunDocument::new("test", 0, vec![r]);
        assert!(doc.pass);
        let csv = doc.to_csv().unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "kind,backend,id,alpha,note,pass,valuation_lhs");
        assert_eq!(lines[1], "claim2,p=2,xi,0,,true,0");
        assert_eq!(lines[2], "claim2,p=2,xi,1,\"a,b\",true,");
    }

    #[test]
    fn failing_row_fails_the_document() {
        let mut r = Report::new("k", "hahn", "x");
        r.push(&json!({"pass": false}));
        assert!(!RunDocument::new("test", 1, vec![r]).pass);
    }
}
