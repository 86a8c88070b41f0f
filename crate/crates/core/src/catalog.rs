//! Recommendation catalog keyed by standing pool and difficulty.

use std::collections::HashSet;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::csv_lines::Source;
use crate::standing::Standing;

pub const CATALOG_HEADER: [&str; 3] = ["standing", "difficulty", "text"];

/// Seeded catalog shipped with the crate.
pub const BUNDLED_CATALOG: &str = include_str!("../data/catalog.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Difficulty {
    Hard,
    Medium,
    Easy,
}

impl Difficulty {
    pub const ALL: [Difficulty; 3] = [Difficulty::Hard, Difficulty::Medium, Difficulty::Easy];

    /// Points awarded for completing a task of this difficulty.
    pub fn points(self) -> u64 {
        match self {
            Difficulty::Hard => 10,
            Difficulty::Medium => 5,
            Difficulty::Easy => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Difficulty::Hard => "HARD",
            Difficulty::Medium => "MEDIUM",
            Difficulty::Easy => "EASY",
        }
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown difficulty `{0}`")]
pub struct UnknownDifficulty(pub String);

/// Exact, uppercase tokens only.
impl FromStr for Difficulty {
    type Err = UnknownDifficulty;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "HARD" => Ok(Difficulty::Hard),
            "MEDIUM" => Ok(Difficulty::Medium),
            "EASY" => Ok(Difficulty::Easy),
            other => Err(UnknownDifficulty(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recommendation {
    pub standing_pool: Standing,
    pub difficulty: Difficulty,
    pub text: String,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("line {line}: expected header `standing,difficulty,text`")]
    BadHeader { line: u64 },
    #[error("line {line}: malformed row: {detail}")]
    MalformedRow { line: u64, detail: String },
    #[error("line {line}: unknown standing pool `{value}` (expected FIRST or THIRD)")]
    UnknownStanding { line: u64, value: String },
    #[error("line {line}: unknown difficulty `{value}` (expected HARD, MEDIUM or EASY)")]
    UnknownDifficulty { line: u64, value: String },
    #[error("line {line}: duplicate entry `{text}`")]
    DuplicateEntry { line: u64, text: String },
    #[error("io error: {0}")]
    Io(String),
}

impl CatalogError {
    pub fn code(&self) -> &'static str {
        match self {
            CatalogError::BadHeader { .. } => "BadHeader",
            CatalogError::MalformedRow { .. } => "MalformedRow",
            CatalogError::UnknownStanding { .. } => "UnknownStanding",
            CatalogError::UnknownDifficulty { .. } => "UnknownDifficulty",
            CatalogError::DuplicateEntry { .. } => "DuplicateEntry",
            CatalogError::Io(_) => "Io",
        }
    }
}

/// Ordered catalog; file order is preserved through selection.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    entries: Vec<Recommendation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Selection {
    pub recommendations: Vec<Recommendation>,
    pub count: usize,
}

impl Catalog {
    /// Builds a catalog from entries, checking the same invariants as the loader.
    pub fn from_entries(entries: Vec<Recommendation>) -> Result<Self, CatalogError> {
        let mut seen = HashSet::new();
        for (i, entry) in entries.iter().enumerate() {
            let line = i as u64 + 2;
            validate(entry, line)?;
            if !seen.insert((entry.standing_pool, entry.difficulty, entry.text.as_str())) {
                return Err(CatalogError::DuplicateEntry { line, text: entry.text.clone() });
            }
        }
        Ok(Catalog { entries })
    }

    pub fn entries(&self) -> &[Recommendation] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries for a standing and difficulty in catalog order. The average
    /// range draws from both pools.
    pub fn select(&self, standing: Standing, difficulty: Difficulty) -> Selection {
        let recommendations: Vec<Recommendation> = self
            .entries
            .iter()
            .filter(|r| r.difficulty == difficulty)
            .filter(|r| match standing {
                Standing::Average => matches!(r.standing_pool, Standing::First | Standing::Third),
                pool => r.standing_pool == pool,
            })
            .cloned()
            .collect();
        let count = recommendations.len();
        Selection { recommendations, count }
    }
}

fn validate(entry: &Recommendation, line: u64) -> Result<(), CatalogError> {
    if entry.standing_pool == Standing::Average {
        return Err(CatalogError::UnknownStanding { line, value: "AVERAGE".into() });
    }
    if entry.text.trim().is_empty() {
        return Err(CatalogError::MalformedRow { line, detail: "empty text".into() });
    }
    Ok(())
}

/// Loads a catalog CSV. Lines starting with `#` are comments; the text column
/// may be quoted to contain commas.
pub fn load_catalog<R: Read>(source: R) -> Result<Catalog, CatalogError> {
    let src = Source::read(source).map_err(|e| CatalogError::Io(e.to_string()))?;
    let mut reader = src.reader();

    let header = reader.headers().map_err(|e| csv_error(&src, e))?.clone();
    if header.iter().ne(CATALOG_HEADER.iter().copied()) {
        return Err(CatalogError::BadHeader { line: 1 });
    }

    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(&src, e))?;
        let line = src.record_line(&row);
        if row.len() != 3 {
            return Err(CatalogError::MalformedRow {
                line,
                detail: format!("expected 3 columns, found {}", row.len()),
            });
        }
        let standing_pool = match &row[0] {
            "FIRST" => Standing::First,
            "THIRD" => Standing::Third,
            other => return Err(CatalogError::UnknownStanding { line, value: other.into() }),
        };
        let difficulty =
            row[1].parse::<Difficulty>().map_err(|e| CatalogError::UnknownDifficulty { line, value: e.0 })?;
        let entry = Recommendation { standing_pool, difficulty, text: row[2].to_string() };
        validate(&entry, line)?;
        if !seen.insert((standing_pool, difficulty, entry.text.clone())) {
            return Err(CatalogError::DuplicateEntry { line, text: entry.text });
        }
        entries.push(entry);
    }
    Ok(Catalog { entries })
}

fn csv_error(src: &Source, err: csv::Error) -> CatalogError {
    match err.kind() {
        csv::ErrorKind::Io(e) => CatalogError::Io(e.to_string()),
        _ => CatalogError::MalformedRow { line: src.error_line(&err), detail: err.to_string() },
    }
}

pub fn bundled_catalog() -> Catalog {
    load_catalog(BUNDLED_CATALOG.as_bytes()).expect("bundled catalog is valid")
}
