//! Country plastic-waste standing, standing- and difficulty-matched zero-waste
//! recommendations, a points-tracking dialogue session with file persistence,
//! and the keyword-count / chi-squared statistics behind the recommendation
//! pools.

pub mod catalog;
pub mod country_data;
mod csv_lines;
pub mod gamma;
pub mod session;
pub mod standing;
pub mod store;
pub mod text_stats;

pub use catalog::{bundled_catalog, load_catalog, Catalog, CatalogError, Difficulty, Recommendation, Selection};
pub use country_data::{load_dataset, lookup_country, summarize, CountryRecord, DatasetError, DatasetSummary, Metric};
pub use session::{Mark, MarkOutcome, Session, SessionError, SessionId, SessionState, TaskEntry};
pub use standing::{classify, Standing, StandingResult};
pub use store::{FileStore, HubError, MemoryStore, SessionHub, SessionStore, StoreError};
pub use text_stats::{
    chi_square, count_group, count_word_merged, expected_counts, ChiSquareResult, ContingencyTable, KeywordGroup,
    StatsError,
};

/// Bundled dataset, parsed.
pub fn bundled_dataset() -> Vec<CountryRecord> {
    load_dataset(country_data::BUNDLED_DATASET.as_bytes()).expect("bundled dataset is valid")
}
