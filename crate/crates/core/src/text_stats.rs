//! Keyword counting over corpora and the chi-squared test of independence.

use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::csv_lines::Source;
use crate::gamma::chi_squared_sf;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("keyword is empty")]
    EmptyWord,
    #[error("keyword `{0}` must be a single lowercase alphanumeric token")]
    InvalidWord(String),
    #[error("keyword group `{0}` has no keywords")]
    EmptyGroup(String),
    #[error("invalid keyword groups: {0}")]
    BadGroups(String),
    #[error("contingency table must be at least 2x2 and rectangular: {0}")]
    InvalidTable(String),
    #[error("degenerate table: {0} has a zero total")]
    DegenerateTable(String),
    #[error("line {line}: malformed row: {detail}")]
    MalformedRow { line: u64, detail: String },
    #[error("io error: {0}")]
    Io(String),
}

impl StatsError {
    pub fn code(&self) -> &'static str {
        match self {
            StatsError::EmptyWord => "EmptyWord",
            StatsError::InvalidWord(_) => "InvalidWord",
            StatsError::EmptyGroup(_) => "EmptyGroup",
            StatsError::BadGroups(_) => "BadGroups",
            StatsError::InvalidTable(_) => "InvalidTable",
            StatsError::DegenerateTable(_) => "DegenerateTable",
            StatsError::MalformedRow { .. } => "MalformedRow",
            StatsError::Io(_) => "Io",
        }
    }
}

/// Maximal runs of alphanumeric characters; everything else separates.
pub fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty())
}

fn check_keyword(word: &str) -> Result<(), StatsError> {
    if word.is_empty() {
        return Err(StatsError::EmptyWord);
    }
    if !word.chars().all(char::is_alphanumeric) || word.to_lowercase() != word {
        return Err(StatsError::InvalidWord(word.to_string()));
    }
    Ok(())
}

fn capitalized(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Occurrences of `word` as written plus with its first letter uppercased.
/// Other casings (e.g. all caps) do not count.
pub fn count_word_merged(text: &str, word: &str) -> Result<usize, StatsError> {
    check_keyword(word)?;
    let upper = capitalized(word);
    Ok(tokens(text).filter(|t| *t == word || *t == upper).count())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordGroup {
    label: String,
    keywords: Vec<String>,
}

impl KeywordGroup {
    pub fn new(label: impl Into<String>, keywords: Vec<String>) -> Result<Self, StatsError> {
        let label = label.into();
        if keywords.is_empty() {
            return Err(StatsError::EmptyGroup(label));
        }
        for k in &keywords {
            check_keyword(k)?;
        }
        Ok(KeywordGroup { label, keywords })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn keywords(&self) -> &[String] {
        &self.keywords
    }
}

pub fn count_group(text: &str, group: &KeywordGroup) -> usize {
    group.keywords.iter().map(|k| count_word_merged(text, k).expect("group keywords are validated")).sum()
}

#[derive(Deserialize)]
struct GroupsDoc {
    #[serde(default)]
    group: Vec<RawGroup>,
}

#[derive(Deserialize)]
struct RawGroup {
    label: String,
    keywords: Vec<String>,
}

/// Parses keyword groups from TOML:
///
/// ```toml
/// [[group]]
/// label = "Apathetic"
/// keywords = ["pointless", "irrelevant"]
/// ```
pub fn parse_keyword_groups(text: &str) -> Result<Vec<KeywordGroup>, StatsError> {
    let doc: GroupsDoc = toml::from_str(text).map_err(|e| StatsError::BadGroups(e.to_string()))?;
    doc.group.into_iter().map(|g| KeywordGroup::new(g.label, g.keywords)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    observed: Vec<Vec<u64>>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl ContingencyTable {
    /// Builds a table with generated `r1.. / c1..` labels.
    pub fn new(observed: Vec<Vec<u64>>) -> Result<Self, StatsError> {
        let rows = observed.len();
        let cols = observed.first().map_or(0, Vec::len);
        let row_labels = (1..=rows).map(|i| format!("r{i}")).collect();
        let col_labels = (1..=cols).map(|j| format!("c{j}")).collect();
        Self::with_labels(observed, row_labels, col_labels)
    }

    pub fn with_labels(
        observed: Vec<Vec<u64>>,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
    ) -> Result<Self, StatsError> {
        let rows = observed.len();
        let cols = observed.first().map_or(0, Vec::len);
        if rows < 2 || cols < 2 {
            return Err(StatsError::InvalidTable(format!("{rows}x{cols}")));
        }
        if observed.iter().any(|r| r.len() != cols) {
            return Err(StatsError::InvalidTable("rows differ in length".into()));
        }
        if row_labels.len() != rows || col_labels.len() != cols {
            return Err(StatsError::InvalidTable("label count does not match the counts".into()));
        }
        let table = ContingencyTable { observed, row_labels, col_labels };
        if let Some(i) = table.row_totals().iter().position(|&t| t == 0) {
            return Err(StatsError::DegenerateTable(format!("row `{}`", table.row_labels[i])));
        }
        if let Some(j) = table.col_totals().iter().position(|&t| t == 0) {
            return Err(StatsError::DegenerateTable(format!("column `{}`", table.col_labels[j])));
        }
        Ok(table)
    }

    pub fn observed(&self) -> &[Vec<u64>] {
        &self.observed
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn rows(&self) -> usize {
        self.observed.len()
    }

    pub fn cols(&self) -> usize {
        self.observed[0].len()
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.observed.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        (0..self.observed[0].len()).map(|j| self.observed.iter().map(|r| r[j]).sum()).collect()
    }

    pub fn grand_total(&self) -> u64 {
        self.row_totals().iter().sum()
    }

    pub fn transposed(&self) -> Self {
        let observed = (0..self.cols()).map(|j| self.observed.iter().map(|r| r[j]).collect()).collect();
        ContingencyTable { observed, row_labels: self.col_labels.clone(), col_labels: self.row_labels.clone() }
    }
}

/// Reads a table from CSV: the header holds the column labels after a
/// leading label cell, and each row starts with its row label.
pub fn load_contingency_csv<R: Read>(source: R) -> Result<ContingencyTable, StatsError> {
    let src = Source::read(source).map_err(|e| StatsError::Io(e.to_string()))?;
    let mut reader = src.reader();
    let malformed = |e: csv::Error| match e.kind() {
        csv::ErrorKind::Io(io) => StatsError::Io(io.to_string()),
        _ => StatsError::MalformedRow { line: src.error_line(&e), detail: e.to_string() },
    };
    let header = reader.headers().map_err(malformed)?.clone();
    let col_labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();

    let mut row_labels = Vec::new();
    let mut observed = Vec::new();
    for row in reader.records() {
        let row = row.map_err(malformed)?;
        let line = src.record_line(&row);
        if row.len() != header.len() {
            return Err(StatsError::MalformedRow {
                line,
                detail: format!("expected {} columns, found {}", header.len(), row.len()),
            });
        }
        row_labels.push(row[0].to_string());
        let counts = row
            .iter()
            .skip(1)
            .map(|cell| {
                cell.trim().parse::<u64>().map_err(|_| StatsError::MalformedRow {
                    line,
                    detail: format!("`{cell}` is not a non-negative integer count"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        observed.push(counts);
    }
    ContingencyTable::with_labels(observed, row_labels, col_labels)
}

/// E[i][j] = row_total[i] * col_total[j] / grand_total.
pub fn expected_counts(table: &ContingencyTable) -> Vec<Vec<f64>> {
    let rows = table.row_totals();
    let cols = table.col_totals();
    let grand = table.grand_total() as f64;
    rows.iter().map(|&r| cols.iter().map(|&c| r as f64 * c as f64 / grand).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: u64,
    pub p_value: f64,
    pub expected: Vec<Vec<f64>>,
    pub components: Vec<Vec<f64>>,
    pub significant_at_5pct: bool,
}

impl ChiSquareResult {
    /// `p < .00001` below that bound, otherwise six significant digits.
    pub fn p_display(&self) -> String {
        if self.p_value < 1e-5 {
            "p < .00001".to_string()
        } else {
            format!("p = {}", six_significant(self.p_value))
        }
    }
}

pub fn six_significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

// (O - E)^2 / E with E = r*c/g is (O*g - r*c)^2 / (g*r*c); the numerator is
// exact in integers, so a cell contributes exactly zero iff O equals E.
fn component(observed: u64, row: u64, col: u64, grand: u64) -> f64 {
    let exact = (observed as i128)
        .checked_mul(grand as i128)
        .and_then(|og| og.checked_sub((row as i128).checked_mul(col as i128)?))
        .and_then(|d| d.checked_mul(d))
        .zip((grand as i128).checked_mul(row as i128).and_then(|gr| gr.checked_mul(col as i128)));
    match exact {
        Some((num, den)) => num as f64 / den as f64,
        None => {
            let e = row as f64 * col as f64 / grand as f64;
            (observed as f64 - e).powi(2) / e
        }
    }
}

/// Pearson chi-squared test of independence, without continuity correction.
pub fn chi_square(table: &ContingencyTable) -> ChiSquareResult {
    let rows = table.row_totals();
    let cols = table.col_totals();
    let grand = table.grand_total();
    let components: Vec<Vec<f64>> = table
        .observed()
        .iter()
        .zip(&rows)
        .map(|(obs_row, &r)| obs_row.iter().zip(&cols).map(|(&o, &c)| component(o, r, c, grand)).collect())
        .collect();

    // Summing in sorted order makes the statistic independent of row/column order.
    let mut flat: Vec<f64> = components.iter().flatten().copied().collect();
    flat.sort_by(f64::total_cmp);
    let statistic: f64 = flat.iter().sum();

    let df = (table.rows() as u64 - 1) * (table.cols() as u64 - 1);
    let p_value = chi_squared_sf(statistic, df);
    ChiSquareResult {
        statistic,
        df,
        p_value,
        expected: expected_counts(table),
        components,
        significant_at_5pct: p_value < 0.05,
    }
}
