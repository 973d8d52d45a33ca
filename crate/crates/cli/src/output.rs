use std::io::Write;

use serde_json::{json, Value};

use crate::sweep::{Cell, SweepResult};

/// Shortest round-trip decimal; exponent form outside [1e-4, 1e15).
pub fn format_num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Num(x) => format_num(*x),
        Cell::Bool(b) => b.to_string(),
        Cell::Empty => String::new(),
    }
}

pub fn write_csv<W: Write>(res: &SweepResult, out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(&res.columns)?;
    for r in &res.rows {
        let mut rec: Vec<String> = r.values.iter().map(cell_text).collect();
        rec.push(r.status.as_str().into());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(res: &SweepResult) -> String {
    let mut buf = Vec::new();
    write_csv(res, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is ASCII")
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Num(x) if x.is_finite() => json!(x),
        Cell::Num(x) => json!(format_num(*x)),
        Cell::Bool(b) => json!(b),
        Cell::Empty => Value::Null,
    }
}

/// `{"columns": [...], "rows": [[...], ...]}` with the same cells as the CSV.
pub fn to_json(res: &SweepResult) -> Value {
    let rows: Vec<Value> = res
        .rows
        .iter()
        .map(|r| {
            let mut v: Vec<Value> = r.values.iter().map(cell_json).collect();
            v.push(json!(r.status.as_str()));
            Value::Array(v)
        })
        .collect();
    json!({ "columns": res.columns, "rows": rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{SweepRow, Status};

    #[test]
    fn number_format() {
        assert_eq!(format_num(0.25), "0.25");
        assert_eq!(format_num(1e-6), "1e-6");
        assert_eq!(format_num(-3.5e-9), "-3.5e-9");
        assert_eq!(format_num(0.0), "0");
        assert_eq!(format_num(1000.0), "1000");
    }

    #[test]
    fn csv_layout() {
        let res = SweepResult {
            columns: vec!["index".into(), "omega0".into(), "n_ss".into(), "status".into()],
            rows: vec![
                SweepRow { index: 0, coords: vec![0.5], delta: 0.0, values: vec![Cell::Num(0.0), Cell::Num(0.5), Cell::Num(0.125)], status: Status::Ok },
                SweepRow { index: 1, coords: vec![0.6], delta: 0.0, values: vec![Cell::Num(1.0), Cell::Num(0.6), Cell::Empty], status: Status::Unstable },
            ],
        };
        assert_eq!(csv_string(&res), "index,omega0,n_ss,status\n0,0.5,0.125,ok\n1,0.6,,unstable\n");
        let j = to_json(&res);
        assert_eq!(j["rows"][1][2], Value::Null);
        assert_eq!(j["rows"][0][3], "ok");
    }
}
