//! Per-country plastic-waste dataset: CSV loading, exact-name lookup and
//! descriptive statistics over either metric.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::csv_lines::Source;

/// Header every dataset file must start with.
pub const DATASET_HEADER: [&str; 3] = ["country", "mismanaged_share_pct", "waste_per_capita_tonnes"];

/// Message shown when a lookup misses. Matching is case-sensitive, hence the hint.
pub const COUNTRY_NOT_FOUND_MESSAGE: &str = "Country not found. Remember to type with first letter capital.";

/// The dataset bundled with the crate: the published excerpt plus the
/// countries used in the lookup walkthrough.
pub const BUNDLED_DATASET: &str = include_str!("../data/countries.csv");

/// The 26-row published excerpt, without any additions.
pub const DATASET_EXCERPT: &str = include_str!("../data/countries_excerpt.csv");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountryRecord {
    pub name: String,
    /// Share of plastic waste inadequately managed, in percent (0..=100).
    pub mismanaged_share_pct: f64,
    /// Tonnes of plastic waste generated per person per year.
    pub waste_per_capita: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatasetError {
    #[error("line {line}: expected header `{expected}`", expected = DATASET_HEADER.join(","))]
    BadHeader { line: u64 },
    #[error("line {line}: malformed row: {detail}")]
    MalformedRow { line: u64, detail: String },
    #[error("line {line}: value out of range: {detail}")]
    OutOfRange { line: u64, detail: String },
    #[error("line {line}: duplicate country `{name}`")]
    DuplicateCountry { line: u64, name: String },
    #[error("{}", COUNTRY_NOT_FOUND_MESSAGE)]
    CountryNotFound,
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("unknown metric `{0}` (expected mismanaged_share_pct or waste_per_capita)")]
    UnknownMetric(String),
    #[error("io error: {0}")]
    Io(String),
}

impl DatasetError {
    pub fn code(&self) -> &'static str {
        match self {
            DatasetError::BadHeader { .. } => "BadHeader",
            DatasetError::MalformedRow { .. } => "MalformedRow",
            DatasetError::OutOfRange { .. } => "OutOfRange",
            DatasetError::DuplicateCountry { .. } => "DuplicateCountry",
            DatasetError::CountryNotFound => "CountryNotFound",
            DatasetError::EmptyDataset => "EmptyDataset",
            DatasetError::UnknownMetric(_) => "UnknownMetric",
            DatasetError::Io(_) => "Io",
        }
    }
}

/// Loads a dataset from CSV text. Lines starting with `#` are comments.
///
/// Every error names the 1-based line it was raised on; the header is line 1.
pub fn load_dataset<R: Read>(source: R) -> Result<Vec<CountryRecord>, DatasetError> {
    let src = Source::read(source).map_err(|e| DatasetError::Io(e.to_string()))?;
    let mut reader = src.reader();

    let header = reader.headers().map_err(|e| csv_error(&src, e))?.clone();
    if header.iter().ne(DATASET_HEADER.iter().copied()) {
        return Err(DatasetError::BadHeader { line: 1 });
    }

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(&src, e))?;
        let line = src.record_line(&row);
        if row.len() != 3 {
            return Err(DatasetError::MalformedRow {
                line,
                detail: format!("expected 3 columns, found {}", row.len()),
            });
        }
        let name = row[0].to_string();
        if name.is_empty() {
            return Err(DatasetError::MalformedRow { line, detail: "empty country name".into() });
        }
        let pct = parse_number(&row[1], line, "mismanaged_share_pct")?;
        let per_capita = parse_number(&row[2], line, "waste_per_capita_tonnes")?;
        if !(0.0..=100.0).contains(&pct) {
            return Err(DatasetError::OutOfRange {
                line,
                detail: format!("mismanaged_share_pct {pct} outside [0, 100]"),
            });
        }
        if per_capita < 0.0 {
            return Err(DatasetError::OutOfRange {
                line,
                detail: format!("waste_per_capita_tonnes {per_capita} is negative"),
            });
        }
        if !seen.insert(name.clone()) {
            return Err(DatasetError::DuplicateCountry { line, name });
        }
        records.push(CountryRecord { name, mismanaged_share_pct: pct, waste_per_capita: per_capita });
    }
    Ok(records)
}

fn parse_number(field: &str, line: u64, column: &str) -> Result<f64, DatasetError> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(DatasetError::MalformedRow { line, detail: format!("{column} `{field}` is not a number") }),
    }
}

fn csv_error(src: &Source, err: csv::Error) -> DatasetError {
    match err.kind() {
        csv::ErrorKind::Io(e) => DatasetError::Io(e.to_string()),
        _ => DatasetError::MalformedRow { line: src.error_line(&err), detail: err.to_string() },
    }
}

/// Writes records in the canonical dataset format.
pub fn write_dataset<W: Write>(records: &[CountryRecord], sink: W) -> Result<(), DatasetError> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    let io = |e: csv::Error| DatasetError::Io(e.to_string());
    writer.write_record(DATASET_HEADER).map_err(io)?;
    for r in records {
        writer
            .write_record([r.name.clone(), r.mismanaged_share_pct.to_string(), r.waste_per_capita.to_string()])
            .map_err(io)?;
    }
    writer.flush().map_err(|e| DatasetError::Io(e.to_string()))
}

/// Byte-exact, case-sensitive lookup.
pub fn lookup_country<'a>(dataset: &'a [CountryRecord], name: &str) -> Result<&'a CountryRecord, DatasetError> {
    dataset.iter().find(|r| r.name == name).ok_or(DatasetError::CountryNotFound)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    MismanagedSharePct,
    WastePerCapita,
}

impl Metric {
    pub fn value(self, record: &CountryRecord) -> f64 {
        match self {
            Metric::MismanagedSharePct => record.mismanaged_share_pct,
            Metric::WastePerCapita => record.waste_per_capita,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::MismanagedSharePct => "mismanaged_share_pct",
            Metric::WastePerCapita => "waste_per_capita",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mismanaged_share_pct" => Ok(Metric::MismanagedSharePct),
            "waste_per_capita" | "waste_per_capita_tonnes" => Ok(Metric::WastePerCapita),
            other => Err(DatasetError::UnknownMetric(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub count: usize,
    pub mean: f64,
    pub minimum: f64,
    pub median: f64,
    pub maximum: f64,
    /// Sample (n - 1) standard deviation; `None` for a single value.
    pub sample_stdev: Option<f64>,
}

pub fn summarize(dataset: &[CountryRecord], metric: Metric) -> Result<DatasetSummary, DatasetError> {
    let values: Vec<f64> = dataset.iter().map(|r| metric.value(r)).collect();
    summarize_values(&values)
}

pub fn summarize_values(values: &[f64]) -> Result<DatasetSummary, DatasetError> {
    if values.is_empty() {
        return Err(DatasetError::EmptyDataset);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();

    let minimum = sorted[0];
    let maximum = sorted[n - 1];
    // Summing in sorted order keeps the mean independent of input order. The
    // clamp absorbs rounding that would otherwise land outside [min, max].
    let mean = (sorted.iter().sum::<f64>() / n as f64).clamp(minimum, maximum);
    let median = if n % 2 == 1 { sorted[n / 2] } else { (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0 };
    let sample_stdev = (n >= 2).then(|| {
        let ss: f64 = sorted.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    });

    Ok(DatasetSummary { count: n, mean, minimum, median, maximum, sample_stdev })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<Vec<CountryRecord>, DatasetError> {
        load_dataset(text.as_bytes())
    }

    const HEADER: &str = "country,mismanaged_share_pct,waste_per_capita_tonnes\n";

    #[test]
    fn loads_albania_row() {
        let rows = load(&format!("{HEADER}Albania,43,0.069\n")).unwrap();
        assert_eq!(
            rows,
            vec![CountryRecord { name: "Albania".into(), mismanaged_share_pct: 43.0, waste_per_capita: 0.069 }]
        );
    }

    #[test]
    fn header_only_is_empty() {
        assert!(load(HEADER).unwrap().is_empty());
    }

    #[test]
    fn out_of_range_names_line() {
        let err = load(&format!("{HEADER}Albania,143,0.069\n")).unwrap_err();
        assert!(matches!(err, DatasetError::OutOfRange { line: 2, .. }), "{err:?}");

        let err = load(&format!("{HEADER}Albania,43,0.069\nAlgeria,58,-0.1\n")).unwrap_err();
        assert!(matches!(err, DatasetError::OutOfRange { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn malformed_rows() {
        let err = load(&format!("{HEADER}Albania,43\n")).unwrap_err();
        assert!(matches!(err, DatasetError::MalformedRow { line: 2, .. }), "{err:?}");
        let err = load(&format!("{HEADER}Albania,lots,0.069\n")).unwrap_err();
        assert!(matches!(err, DatasetError::MalformedRow { line: 2, .. }), "{err:?}");
        let err = load(&format!("{HEADER}Albania,NaN,0.069\n")).unwrap_err();
        assert!(matches!(err, DatasetError::MalformedRow { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn duplicate_country() {
        let err = load(&format!("{HEADER}Albania,43,0.069\nAlbania,44,0.07\n")).unwrap_err();
        assert_eq!(err, DatasetError::DuplicateCountry { line: 3, name: "Albania".into() });
    }

    #[test]
    fn comment_lines_do_not_shift_line_numbers() {
        let err = load(&format!("{HEADER}# note\nAlbania,143,0.069\n")).unwrap_err();
        assert!(matches!(err, DatasetError::OutOfRange { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn wrong_header() {
        let err = load("name,pct,per_capita\nAlbania,43,0.069\n").unwrap_err();
        assert_eq!(err, DatasetError::BadHeader { line: 1 });
    }

    #[test]
    fn lookup_is_case_sensitive() {
        let data = load(BUNDLED_DATASET).unwrap();
        assert_eq!(lookup_country(&data, "Mexico").unwrap().mismanaged_share_pct, 12.0);
        for miss in ["mexico", "bunny", "MEXICO", " Mexico", ""] {
            let err = lookup_country(&data, miss).unwrap_err();
            assert_eq!(err.to_string(), COUNTRY_NOT_FOUND_MESSAGE);
        }
    }

    #[test]
    fn single_value_summary() {
        let s = summarize_values(&[43.0]).unwrap();
        assert_eq!((s.mean, s.minimum, s.median, s.maximum), (43.0, 43.0, 43.0, 43.0));
        assert_eq!(s.sample_stdev, None);
    }

    #[test]
    fn even_count_median_is_mean_of_middles() {
        let s = summarize_values(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.median, 2.5);
    }

    #[test]
    fn empty_summary_fails() {
        assert_eq!(summarize(&[], Metric::WastePerCapita), Err(DatasetError::EmptyDataset));
    }

    #[test]
    fn metric_names() {
        assert_eq!("mismanaged_share_pct".parse::<Metric>().unwrap(), Metric::MismanagedSharePct);
        assert_eq!("waste_per_capita".parse::<Metric>().unwrap(), Metric::WastePerCapita);
        assert!("pct".parse::<Metric>().is_err());
    }
}
