//! CSV result rows.
//!
//! Column order is fixed; inapplicable cells are empty. Booleans are `0`/`1`
//! and floats use Rust's shortest round-trip formatting, which never depends
//! on the locale.

use std::io::Write;

pub const COLUMNS: [&str; 14] = [
    "run_id",
    "seed",
    "algorithm",
    "n",
    "p",
    "delta",
    "k",
    "fvs_size",
    "bound_value",
    "acyclic_ok",
    "exact_match",
    "oracle_calls",
    "cycles_found",
    "runtime_ms",
];

/// Contents of the `exact_match` column: a per-run flag, or a fraction on
/// aggregate rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatchCell {
    Flag(bool),
    Fraction(f64),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultRow {
    pub run_id: String,
    pub seed: Option<u64>,
    pub algorithm: String,
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub delta: Option<f64>,
    pub k: Option<usize>,
    pub fvs_size: Option<usize>,
    pub bound_value: Option<f64>,
    pub acyclic_ok: Option<bool>,
    pub exact_match: Option<MatchCell>,
    pub oracle_calls: Option<usize>,
    pub cycles_found: Option<usize>,
    pub runtime_ms: Option<u128>,
}

fn cell<T: ToString>(value: Option<T>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

fn flag(value: bool) -> String {
    u8::from(value).to_string()
}

impl ResultRow {
    pub fn new(run_id: impl Into<String>, algorithm: impl Into<String>) -> Self {
        ResultRow {
            run_id: run_id.into(),
            algorithm: algorithm.into(),
            ..ResultRow::default()
        }
    }

    pub fn record(&self) -> [String; 14] {
        [
            self.run_id.clone(),
            cell(self.seed),
            self.algorithm.clone(),
            cell(self.n),
            cell(self.p),
            cell(self.delta),
            cell(self.k),
            cell(self.fvs_size),
            cell(self.bound_value),
            self.acyclic_ok.map(flag).unwrap_or_default(),
            match self.exact_match {
                Some(MatchCell::Flag(b)) => flag(b),
                Some(MatchCell::Fraction(f)) => f.to_string(),
                None => String::new(),
            },
            cell(self.oracle_calls),
            cell(self.cycles_found),
            cell(self.runtime_ms),
        ]
    }

    /// The same row with the timing column cleared, for reproducibility
    /// comparisons.
    pub fn without_runtime(&self) -> ResultRow {
        ResultRow {
            runtime_ms: None,
            ..self.clone()
        }
    }
}

/// Writes the header and `rows`.
pub fn write_csv<W: Write>(out: W, rows: &[ResultRow]) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(COLUMNS)?;
    for row in rows {
        writer.write_record(row.record())?;
    }
    writer.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only() {
        assert_eq!(
            to_csv_string(&[]),
            "run_id,seed,algorithm,n,p,delta,k,fvs_size,bound_value,acyclic_ok,exact_match,oracle_calls,cycles_found,runtime_ms\n"
        );
    }

    #[test]
    fn cells_render() {
        let row = ResultRow {
            seed: Some(3),
            n: Some(20),
            p: Some(0.005),
            fvs_size: Some(7),
            bound_value: Some(19171.5),
            acyclic_ok: Some(true),
            exact_match: Some(MatchCell::Flag(false)),
            runtime_ms: Some(12),
            ..ResultRow::new("r1", "grow-induced-bfs")
        };
        let text = to_csv_string(std::slice::from_ref(&row));
        assert!(text.ends_with("r1,3,grow-induced-bfs,20,0.005,,,7,19171.5,1,0,,,12\n"));
        assert!(to_csv_string(&[row.without_runtime()]).ends_with(",,,\n"));
        let agg = ResultRow {
            exact_match: Some(MatchCell::Fraction(0.9)),
            ..ResultRow::new("aggregate", "x, y")
        };
        assert!(to_csv_string(&[agg]).ends_with("aggregate,,\"x, y\",,,,,,,,0.9,,,\n"));
    }
}
