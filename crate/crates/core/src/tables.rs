//! Energy tables for the 1s, 2s and 3s states as functions of β, with the
//! checked-in reference values alongside, plus CSV and JSON output.
//!
//! CSV uses a header row, `.` decimals and empty cells for absent values.
//! [`Precision::Fixed7`] prints energies with 7 decimals; [`Precision::Full`]
//! prints the shortest representation that parses back to the same f64.

use std::io;
use std::sync::OnceLock;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::closed_form::{total_energy, TruncationOrder};
use crate::coulomb::QuantumNumbers;
use crate::error::{Error, Result};
use crate::numerov::{solve_eigenvalue, SolverConfig};
use crate::potential::PotentialParams;

const TABLE1_DATA: &str = include_str!("../data/table1.csv");
const TABLE2_DATA: &str = include_str!("../data/table2.csv");

pub const STATES: [QuantumNumbers; 3] =
    [QuantumNumbers::new(0, 0), QuantumNumbers::new(1, 0), QuantumNumbers::new(2, 0)];

/// The β values of the first table.
pub const TABLE1_BETAS: [f64; 19] = [
    0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9,
    1.0,
];

pub const TABLE2_ORDERS: [TruncationOrder; 5] = TruncationOrder::ALL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Precision {
    #[default]
    Fixed7,
    Full,
}

impl Precision {
    fn energy(self, v: f64) -> String {
        match self {
            Self::Fixed7 => format!("{v:.7}"),
            Self::Full => format!("{v}"),
        }
    }

    fn optional(self, v: Option<f64>) -> String {
        v.map(|v| self.energy(v)).unwrap_or_default()
    }
}

/// One reference row of the first table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Reference {
    pub beta: f64,
    pub state: String,
    pub series: Option<f64>,
    pub order4_literature: Option<f64>,
    pub numerical: Option<f64>,
    pub note: String,
}

/// One reference row of the second table; `orders` follows [`TABLE2_ORDERS`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Reference {
    pub beta: f64,
    pub state: String,
    pub orders: [Option<f64>; 5],
    pub note: String,
}

fn reader(data: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(data.as_bytes())
}

fn cell(record: &csv::StringRecord, i: usize) -> Result<Option<f64>> {
    match record.get(i).map(str::trim) {
        None | Some("") => Ok(None),
        Some(s) => s
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidParameter(format!("bad numeric cell {s:?}"))),
    }
}

fn required(record: &csv::StringRecord, i: usize) -> Result<f64> {
    cell(record, i)?.ok_or_else(|| Error::InvalidParameter(format!("missing cell {i} in {record:?}")))
}

fn text(record: &csv::StringRecord, i: usize) -> String {
    record.get(i).unwrap_or_default().to_string()
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidParameter(format!("csv: {e}"))
}

pub fn table1_reference() -> &'static [Table1Reference] {
    static ROWS: OnceLock<Vec<Table1Reference>> = OnceLock::new();
    ROWS.get_or_init(|| {
        reader(TABLE1_DATA)
            .records()
            .map(|rec| {
                let rec = rec.map_err(csv_error)?;
                Ok(Table1Reference {
                    beta: required(&rec, 0)?,
                    state: text(&rec, 1),
                    series: cell(&rec, 2)?,
                    order4_literature: cell(&rec, 3)?,
                    numerical: cell(&rec, 4)?,
                    note: text(&rec, 5),
                })
            })
            .collect::<Result<_>>()
            .expect("embedded table data is well formed")
    })
}

pub fn table2_reference() -> &'static [Table2Reference] {
    static ROWS: OnceLock<Vec<Table2Reference>> = OnceLock::new();
    ROWS.get_or_init(|| {
        reader(TABLE2_DATA)
            .records()
            .map(|rec| {
                let rec = rec.map_err(csv_error)?;
                Ok(Table2Reference {
                    beta: required(&rec, 0)?,
                    state: text(&rec, 1),
                    orders: [cell(&rec, 2)?, cell(&rec, 3)?, cell(&rec, 4)?, cell(&rec, 5)?, cell(&rec, 6)?],
                    note: text(&rec, 7),
                })
            })
            .collect::<Result<_>>()
            .expect("embedded table data is well formed")
    })
}

fn same_beta(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9
}

fn find_table1(beta: f64, state: &str) -> Option<&'static Table1Reference> {
    table1_reference().iter().find(|r| r.state == state && same_beta(r.beta, beta))
}

fn find_table2(beta: f64, state: &str) -> Option<&'static Table2Reference> {
    table2_reference().iter().find(|r| r.state == state && same_beta(r.beta, beta))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub beta: f64,
    pub state_label: String,
    /// E/a² from the β⁶ series.
    pub series_energy: f64,
    pub numerov_energy: Option<f64>,
    /// Reference series value.
    pub reference_energy: Option<f64>,
    /// |series - reference|.
    pub abs_delta: Option<f64>,
    /// Reference numerical eigenvalue.
    pub numerov_reference: Option<f64>,
    /// |numerov - numerov_reference|.
    pub numerov_abs_delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub beta: f64,
    pub state_label: String,
    pub order: u32,
    pub energy: f64,
    pub reference: Option<f64>,
    pub abs_delta: Option<f64>,
}

fn delta(x: Option<f64>, y: Option<f64>) -> Option<f64> {
    Some((x? - y?).abs())
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("beta must be in (0, 1], got {beta}")))
    }
}

fn parallel_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("table worker panicked")).collect()
    })
}

/// Rows ordered by state, then β. With `include_numerov`, excited-state
/// rows without a reference value are dropped when the solver finds no
/// bound state; other solver failures leave the cell empty.
pub fn table1(betas: &[f64], a: f64, include_numerov: bool) -> Result<Vec<TableRow>> {
    betas.iter().try_for_each(|&b| check_beta(b))?;
    PotentialParams::new(a, 0.0)?;
    let jobs: Vec<(QuantumNumbers, f64)> =
        STATES.iter().flat_map(|&qn| betas.iter().map(move |&b| (qn, b))).collect();
    let rows = parallel_map(&jobs, |&(qn, beta)| -> Result<Option<TableRow>> {
        let params = PotentialParams::from_beta(a, beta)?;
        let a2 = a * a;
        let label = qn.label();
        let series_energy = total_energy(&params, qn, TruncationOrder::Six)? / a2;
        let reference = find_table1(beta, &label);
        let reference_energy = reference.and_then(|r| r.series);
        let numerov_reference = reference.and_then(|r| r.numerical);
        let numerov_energy = if include_numerov {
            match solve_eigenvalue(&params, qn, &SolverConfig::default()) {
                Ok(e) => Some(e / a2),
                Err(Error::NoBoundState { .. }) if qn.n > 0 && reference_energy.is_none() => return Ok(None),
                Err(_) => None,
            }
        } else {
            None
        };
        Ok(Some(TableRow {
            beta,
            state_label: label,
            series_energy,
            numerov_energy,
            reference_energy,
            abs_delta: delta(Some(series_energy), reference_energy),
            numerov_reference,
            numerov_abs_delta: delta(numerov_energy, numerov_reference),
        }))
    });
    Ok(rows.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

/// Every truncation order for every state at the given β values.
pub fn table2(betas: &[f64]) -> Result<Vec<Table2Row>> {
    betas.iter().try_for_each(|&b| check_beta(b))?;
    let mut rows = Vec::new();
    for qn in STATES {
        for &beta in betas {
            rows.extend(table2_cells(qn, beta)?);
        }
    }
    Ok(rows)
}

/// The second table at its own β values, which differ per state.
pub fn table2_published() -> Result<Vec<Table2Row>> {
    let mut rows = Vec::new();
    for qn in STATES {
        let label = qn.label();
        for r in table2_reference().iter().filter(|r| r.state == label) {
            rows.extend(table2_cells(qn, r.beta)?);
        }
    }
    Ok(rows)
}

fn table2_cells(qn: QuantumNumbers, beta: f64) -> Result<Vec<Table2Row>> {
    let params = PotentialParams::from_beta(1.0, beta)?;
    let label = qn.label();
    let reference = find_table2(beta, &label);
    TABLE2_ORDERS
        .iter()
        .enumerate()
        .map(|(i, &order)| {
            let energy = total_energy(&params, qn, order)?;
            let reference = reference.and_then(|r| r.orders[i]);
            Ok(Table2Row {
                beta,
                state_label: label.clone(),
                order: order.power(),
                energy,
                reference,
                abs_delta: delta(Some(energy), reference),
            })
        })
        .collect()
}

/// A row type with a fixed CSV schema.
pub trait CsvRow: Sized {
    const HEADER: &'static [&'static str];
    fn fields(&self, precision: Precision) -> Vec<String>;
    fn from_record(record: &csv::StringRecord) -> Result<Self>;
}

impl CsvRow for TableRow {
    const HEADER: &'static [&'static str] = &[
        "beta",
        "state",
        "series_energy",
        "numerov_energy",
        "reference_energy",
        "abs_delta",
        "numerov_reference",
        "numerov_abs_delta",
    ];

    fn fields(&self, p: Precision) -> Vec<String> {
        vec![
            format!("{}", self.beta),
            self.state_label.clone(),
            p.energy(self.series_energy),
            p.optional(self.numerov_energy),
            p.optional(self.reference_energy),
            p.optional(self.abs_delta),
            p.optional(self.numerov_reference),
            p.optional(self.numerov_abs_delta),
        ]
    }

    fn from_record(rec: &csv::StringRecord) -> Result<Self> {
        Ok(Self {
            beta: required(rec, 0)?,
            state_label: text(rec, 1),
            series_energy: required(rec, 2)?,
            numerov_energy: cell(rec, 3)?,
            reference_energy: cell(rec, 4)?,
            abs_delta: cell(rec, 5)?,
            numerov_reference: cell(rec, 6)?,
            numerov_abs_delta: cell(rec, 7)?,
        })
    }
}

impl CsvRow for Table2Row {
    const HEADER: &'static [&'static str] = &["beta", "state", "order", "energy", "reference", "abs_delta"];

    fn fields(&self, p: Precision) -> Vec<String> {
        vec![
            format!("{}", self.beta),
            self.state_label.clone(),
            self.order.to_string(),
            p.energy(self.energy),
            p.optional(self.reference),
            p.optional(self.abs_delta),
        ]
    }

    fn from_record(rec: &csv::StringRecord) -> Result<Self> {
        let order = text(rec, 2);
        Ok(Self {
            beta: required(rec, 0)?,
            state_label: text(rec, 1),
            order: order.parse().map_err(|_| Error::InvalidParameter(format!("bad order {order:?}")))?,
            energy: required(rec, 3)?,
            reference: cell(rec, 4)?,
            abs_delta: cell(rec, 5)?,
        })
    }
}

pub fn write_csv<R: CsvRow>(rows: &[R], precision: Precision, out: impl io::Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::HEADER).map_err(csv_error)?;
    for row in rows {
        w.write_record(row.fields(precision)).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::NumericalFailure(format!("write failed: {e}")))?;
    Ok(())
}

pub fn to_csv<R: CsvRow>(rows: &[R], precision: Precision) -> String {
    let mut buf = Vec::new();
    write_csv(rows, precision, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn parse_csv<R: CsvRow>(input: &str) -> Result<Vec<R>> {
    let mut r = csv::Reader::from_reader(input.as_bytes());
    let header = r.headers().map_err(csv_error)?;
    if header.iter().ne(R::HEADER.iter().copied()) {
        return Err(Error::InvalidParameter(format!("unexpected csv header {header:?}")));
    }
    r.records().map(|rec| R::from_record(&rec.map_err(csv_error)?)).collect()
}

pub fn to_json<T: Serialize>(rows: &T) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialise to json")
}

/// Parses "0.1,0.2" or "start:stop:step" (inclusive). Values are rounded to
/// 12 decimals so ranges print cleanly.
pub fn parse_betas(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("cannot parse beta list {spec:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let round = |x: f64| (x * 1e12).round() / 1e12;
    let parts: Vec<&str> = spec.split(':').collect();
    let betas = match parts.as_slice() {
        [single] => single.split(',').map(num).collect::<Result<Vec<_>>>()?,
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(step > 0.0) || stop < start {
                return Err(bad());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            (0..=count).map(|i| round(start + i as f64 * step)).collect()
        }
        _ => return Err(bad()),
    };
    if betas.is_empty() {
        return Err(bad());
    }
    betas.iter().try_for_each(|&b| check_beta(b))?;
    Ok(betas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_data_loads() {
        assert_eq!(table1_reference().len(), 37);
        assert_eq!(table2_reference().len(), 19);
        let r = find_table1(0.04, "2s").unwrap();
        assert_eq!(r.numerical, Some(-0.46033));
        let r = find_table1(0.3, "2s").unwrap();
        assert_eq!(r.order4_literature, None);
        assert!(find_table1(0.2, "3s").is_none());
    }

    #[test]
    fn table1_examples() {
        let rows = table1(&[0.1, 1.0], 1.0, false).unwrap();
        let get = |b: f64, s: &str| rows.iter().find(|r| r.beta == b && r.state_label == s).unwrap();
        assert!((get(0.1, "1s").series_energy - -1.9004377).abs() < 5e-8);
        assert!((get(0.1, "2s").series_energy - -0.4043555).abs() < 5e-8);
        assert!((get(0.1, "3s").series_energy - -0.1334655).abs() < 5e-8);
        assert!((get(1.0, "1s").series_energy - -1.0989583).abs() < 5e-8);
        let row = get(0.1, "1s");
        assert_eq!(row.abs_delta, Some((row.series_energy - row.reference_energy.unwrap()).abs()));
        assert_eq!(get(1.0, "3s").abs_delta, None);
        let limit = table1(&[1e-9], 1.0, false).unwrap();
        for (row, want) in limit.iter().zip([-2.0, -0.5, -2.0 / 9.0]) {
            assert!((row.series_energy - want).abs() < 1e-8);
        }
        assert!(table1(&[0.0], 1.0, false).is_err());
        assert!(table1(&[1.5], 1.0, false).is_err());
    }

    #[test]
    fn table1_is_independent_of_a() {
        let one = table1(&[0.05, 0.3], 1.0, false).unwrap();
        let three = table1(&[0.05, 0.3], 3.0, false).unwrap();
        for (x, y) in one.iter().zip(&three) {
            assert!((x.series_energy - y.series_energy).abs() <= 1e-12 * x.series_energy.abs());
        }
    }

    #[test]
    fn table2_examples() {
        let rows = table2(&[0.5, 0.3, 0.02]).unwrap();
        let get = |s: &str, b: f64, k: u32| {
            rows.iter().find(|r| r.state_label == s && r.beta == b && r.order == k).unwrap().energy
        };
        let want = [-2.0, -1.50, -1.5625, -1.5234375, -1.5269368];
        for (k, w) in [0, 1, 3, 4, 6].into_iter().zip(want) {
            assert!((get("1s", 0.5, k) - w).abs() < 5e-8);
        }
        assert!((get("2s", 0.3, 3) - -0.389).abs() < 1e-12);
        assert!((get("3s", 0.02, 6) - -0.2024526).abs() < 5e-7);
    }

    #[test]
    fn published_table2_has_every_cell() {
        let rows = table2_published().unwrap();
        assert_eq!(rows.len(), 19 * 5);
        assert!(rows.iter().all(|r| r.reference.is_some()));
    }

    #[test]
    fn csv_output_format() {
        let rows = table1(&[0.02], 1.0, false).unwrap();
        let text = to_csv(&rows, Precision::Fixed7);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "beta,state,series_energy,numerov_energy,reference_energy,abs_delta,numerov_reference,numerov_abs_delta"
        );
        let first = lines.next().unwrap();
        assert!(first.starts_with("0.02,1s,-1.9800039,,-1.9800039,0.0000000,-1.9800000,"), "{first}");
        assert_eq!(to_csv(&rows, Precision::Fixed7), text);
    }

    #[test]
    fn full_precision_round_trip() {
        let rows = table1(&[0.01, 0.3], 1.0, false).unwrap();
        let back: Vec<TableRow> = parse_csv(&to_csv(&rows, Precision::Full)).unwrap();
        assert_eq!(back, rows);
        let rows = table2_published().unwrap();
        let back: Vec<Table2Row> = parse_csv(&to_csv(&rows, Precision::Full)).unwrap();
        assert_eq!(back, rows);
        assert!(parse_csv::<Table2Row>("beta,state\n0.1,1s\n").is_err());
    }

    #[test]
    fn json_keeps_full_precision() {
        let rows = table1(&[0.07], 1.0, false).unwrap();
        let back: Vec<TableRow> = serde_json::from_str(&to_json(&rows)).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn beta_lists() {
        assert_eq!(parse_betas("0.1,0.2").unwrap(), vec![0.1, 0.2]);
        assert_eq!(parse_betas("0.1:0.5:0.1").unwrap(), vec![0.1, 0.2, 0.3, 0.4, 0.5]);
        assert_eq!(parse_betas("0.01:0.1:0.01").unwrap().len(), 10);
        assert!(parse_betas("0.5:0.1:0.1").is_err());
        assert!(parse_betas("abc").is_err());
        assert!(parse_betas("0.1:1.2:0.5").is_err());
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), -3.0..0.0f64]
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_exact(
            rows in prop::collection::vec(
                (finite(), "[a-z0-9,\" ]{0,6}", finite(), prop::option::of(finite()), prop::option::of(finite()),
                 prop::option::of(finite()), prop::option::of(finite()), prop::option::of(finite())),
                0..8,
            )
        ) {
            let rows: Vec<TableRow> = rows
                .into_iter()
                .map(|(beta, state_label, s, n, r, d, nr, nd)| TableRow {
                    beta,
                    state_label,
                    series_energy: s,
                    numerov_energy: n,
                    reference_energy: r,
                    abs_delta: d,
                    numerov_reference: nr,
                    numerov_abs_delta: nd,
                })
                .collect();
            let back: Vec<TableRow> = parse_csv(&to_csv(&rows, Precision::Full)).unwrap();
            prop_assert_eq!(back, rows);
        }
    }
}
