//! Report assembly and fixed-width number formatting.

use std::str::FromStr;

use serde_json::{json, Map, Number, Value};
use suther_lax::model::{CouplingParams, PhasePoint};

pub const SCHEMA: &str = "suther-lax-report/1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ABORT: i32 = 3;

/// 17 significant digits, so the value round-trips exactly.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// JSON number with the digits of [`fmt_f64`]; `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&fmt_f64(x)).expect("formatted float is valid JSON"))
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn couplings(c: &CouplingParams) -> Value {
    json!({
        "mu": num(c.mu),
        "nu": num(c.nu),
        "kappa": num(c.kappa),
        "g2": num(c.g2),
        "g1_sq": num(c.g1sq),
        "g2_sq": num(c.g2sq),
    })
}

pub fn point(x: &PhasePoint) -> Value {
    json!({ "q": nums(x.q()), "p": nums(x.p()) })
}

/// Report skeleton with the schema tag and command name first.
pub fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), Value::from(SCHEMA));
    m.insert("command".into(), Value::from(command));
    m
}

/// Header plus rows, rendered as CSV.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit: i32,
    pub report: Value,
    pub table: Option<Table>,
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
        }
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(
            serde_json::to_string(&num(0.5)).unwrap(),
            "5.0000000000000000e-1"
        );
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["t", "x"]);
        t.push(vec![fmt_f64(0.0), fmt_f64(1.5)]);
        assert_eq!(
            t.to_csv().unwrap(),
            "t,x\n0.0000000000000000e0,1.5000000000000000e0\n"
        );
    }
}
