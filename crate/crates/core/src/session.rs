//! The dialogue state machine and its point tracker.
//!
//! A session walks `AwaitingCountry -> AwaitingYesNo -> AwaitingDifficulty ->
//! TasksIssued`, or ends in `Terminated` when the user declines
//! recommendations. Every operation either performs one legal transition or
//! returns an error and leaves the session untouched, so any input is safe to
//! feed in.
//!
//! Points live on two levels. Each issued task awards 10/5/1 points for
//! HARD/MEDIUM/EASY once it is marked `O`; `lifetime_points` carries the sum of
//! everything earned in earlier runs plus the current task list. Picking a new
//! difficulty from `TasksIssued` starts a new run: the current list is replaced
//! and whatever it earned stays banked.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{Catalog, Difficulty};
use crate::country_data::{lookup_country, CountryRecord, COUNTRY_NOT_FOUND_MESSAGE};
use crate::standing::{classify, StandingResult};

pub const RECOMMENDATION_PROMPT: &str =
    "Would you like recommendations to help solve plastic pollution? Please reply with YES or NO";
pub const DIFFICULTY_PROMPT: &str = "How difficult would you like your recommendations to be?";
pub const THANK_YOU_MESSAGE: &str = "Thank you for using our app! Come again soon :)";
pub const YES_OR_NO_MESSAGE: &str = "Please reply with either YES or NO";
pub const NO_RECOMMENDATIONS_MESSAGE: &str = "Will not give any recommendations";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SessionState {
    AwaitingCountry,
    AwaitingYesNo,
    AwaitingDifficulty,
    TasksIssued,
    Terminated,
}

impl SessionState {
    pub fn as_str(self) -> &'static str {
        match self {
            SessionState::AwaitingCountry => "AwaitingCountry",
            SessionState::AwaitingYesNo => "AwaitingYesNo",
            SessionState::AwaitingDifficulty => "AwaitingDifficulty",
            SessionState::TasksIssued => "TasksIssued",
            SessionState::Terminated => "Terminated",
        }
    }
}

impl fmt::Display for SessionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Completion mark: `O` done, `X` not done.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Mark {
    O,
    #[default]
    X,
}

impl FromStr for Mark {
    type Err = SessionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "O" => Ok(Mark::O),
            "X" => Ok(Mark::X),
            other => Err(SessionError::InvalidMark(other.to_string())),
        }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mark::O => "O",
            Mark::X => "X",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskEntry {
    pub text: String,
    pub difficulty: Difficulty,
    pub completed: Mark,
}

impl TaskEntry {
    pub fn awarded(&self) -> u64 {
        award(self.difficulty, self.completed)
    }
}

/// Points for one tracker row.
pub fn award(difficulty: Difficulty, mark: Mark) -> u64 {
    match mark {
        Mark::O => difficulty.points(),
        Mark::X => 0,
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SessionError {
    #[error("operation needs state {expected}, session is {actual}")]
    WrongState { expected: &'static str, actual: SessionState },
    #[error("{}", COUNTRY_NOT_FOUND_MESSAGE)]
    CountryNotFound,
    #[error("{0}")]
    InvalidCountryData(String),
    #[error("{}", YES_OR_NO_MESSAGE)]
    InvalidReply,
    #[error("{}", NO_RECOMMENDATIONS_MESSAGE)]
    InvalidDifficulty,
    #[error("mark `{0}` is not O or X")]
    InvalidMark(String),
    #[error("task index {index} out of range ({count} tasks)")]
    IndexOutOfRange { index: usize, count: usize },
}

impl SessionError {
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::WrongState { .. } => "WrongState",
            SessionError::CountryNotFound => "CountryNotFound",
            SessionError::InvalidCountryData(_) => "OutOfRange",
            SessionError::InvalidReply => "InvalidReply",
            SessionError::InvalidDifficulty => "InvalidDifficulty",
            SessionError::InvalidMark(_) => "InvalidMark",
            SessionError::IndexOutOfRange { .. } => "IndexOutOfRange",
        }
    }
}

/// Opaque session identifier, restricted to `[A-Za-z0-9_-]` so it can name a file.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SessionId(String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid session id `{0}`")]
pub struct InvalidSessionId(pub String);

impl SessionId {
    pub fn generate() -> Self {
        SessionId(uuid::Uuid::new_v4().simple().to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for SessionId {
    type Error = InvalidSessionId;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        let ok = !value.is_empty()
            && value.len() <= 128
            && value.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_');
        if ok {
            Ok(SessionId(value))
        } else {
            Err(InvalidSessionId(value))
        }
    }
}

impl FromStr for SessionId {
    type Err = InvalidSessionId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SessionId::try_from(s.to_string())
    }
}

impl From<SessionId> for String {
    fn from(id: SessionId) -> String {
        id.0
    }
}

impl fmt::Display for SessionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MarkOutcome {
    /// Points the entry is now worth.
    pub awarded: u64,
    /// Change applied to the totals by this mark.
    pub delta: i64,
    pub lifetime_points: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: SessionId,
    pub state: SessionState,
    pub country: Option<CountryRecord>,
    pub standing: Option<StandingResult>,
    pub difficulty: Option<Difficulty>,
    pub tasks: Vec<TaskEntry>,
    pub lifetime_points: u64,
}

impl Session {
    pub fn new(id: SessionId) -> Self {
        Session {
            id,
            state: SessionState::AwaitingCountry,
            country: None,
            standing: None,
            difficulty: None,
            tasks: Vec::new(),
            lifetime_points: 0,
        }
    }

    fn expect_state(&self, expected: SessionState) -> Result<(), SessionError> {
        if self.state == expected {
            Ok(())
        } else {
            Err(SessionError::WrongState { expected: expected.as_str(), actual: self.state })
        }
    }

    /// Looks the country up and classifies it. A miss leaves the session
    /// waiting for another country name.
    pub fn submit_country(&mut self, dataset: &[CountryRecord], name: &str) -> Result<&StandingResult, SessionError> {
        self.expect_state(SessionState::AwaitingCountry)?;
        let record = lookup_country(dataset, name).map_err(|_| SessionError::CountryNotFound)?;
        let standing =
            classify(record.mismanaged_share_pct).map_err(|e| SessionError::InvalidCountryData(e.to_string()))?;
        self.country = Some(record.clone());
        self.state = SessionState::AwaitingYesNo;
        Ok(self.standing.insert(standing))
    }

    /// Only the exact tokens `YES` and `NO` are accepted.
    pub fn answer_recommendations(&mut self, reply: &str) -> Result<&'static str, SessionError> {
        self.expect_state(SessionState::AwaitingYesNo)?;
        match reply {
            "YES" => {
                self.state = SessionState::AwaitingDifficulty;
                Ok(DIFFICULTY_PROMPT)
            }
            "NO" => {
                self.state = SessionState::Terminated;
                Ok(THANK_YOU_MESSAGE)
            }
            _ => Err(SessionError::InvalidReply),
        }
    }

    /// Issues the tasks for the session's standing at the chosen difficulty
    /// and returns how many were issued. Also accepted from `TasksIssued`,
    /// where it starts a new run.
    pub fn choose_difficulty(&mut self, reply: &str, catalog: &Catalog) -> Result<usize, SessionError> {
        if self.state != SessionState::TasksIssued {
            self.expect_state(SessionState::AwaitingDifficulty)?;
        }
        let difficulty: Difficulty = reply.parse().map_err(|_| SessionError::InvalidDifficulty)?;
        let standing = self.standing.as_ref().expect("standing is set once a country was accepted").standing;
        let selection = catalog.select(standing, difficulty);
        self.tasks = selection
            .recommendations
            .into_iter()
            .map(|r| TaskEntry { text: r.text, difficulty: r.difficulty, completed: Mark::X })
            .collect();
        self.difficulty = Some(difficulty);
        self.state = SessionState::TasksIssued;
        Ok(selection.count)
    }

    pub fn mark_task(&mut self, index: usize, mark: Mark) -> Result<MarkOutcome, SessionError> {
        self.expect_state(SessionState::TasksIssued)?;
        let count = self.tasks.len();
        let entry = self.tasks.get_mut(index).ok_or(SessionError::IndexOutOfRange { index, count })?;
        let before = entry.awarded();
        entry.completed = mark;
        let after = entry.awarded();
        // lifetime_points always contains the current run, so it cannot underflow.
        self.lifetime_points = self.lifetime_points - before + after;
        Ok(MarkOutcome { awarded: after, delta: after as i64 - before as i64, lifetime_points: self.lifetime_points })
    }

    /// Points earned by the current task list.
    pub fn run_points(&self) -> u64 {
        self.tasks.iter().map(TaskEntry::awarded).sum()
    }

    /// Current run plus everything banked from earlier runs.
    pub fn total_points(&self) -> u64 {
        self.lifetime_points
    }

    /// Checks the structural invariants a well-formed session satisfies.
    pub fn check_invariants(&self) -> Result<(), String> {
        let past_country = self.state != SessionState::AwaitingCountry;
        let chose_difficulty = self.state == SessionState::TasksIssued;
        if self.country.is_some() != past_country || self.standing.is_some() != past_country {
            return Err(format!("country/standing presence does not match state {}", self.state));
        }
        if self.difficulty.is_some() != chose_difficulty {
            return Err(format!("difficulty presence does not match state {}", self.state));
        }
        if !self.tasks.is_empty() && !chose_difficulty {
            return Err(format!("tasks present in state {}", self.state));
        }
        if let Some(d) = self.difficulty {
            if self.tasks.iter().any(|t| t.difficulty != d) {
                return Err("task difficulty differs from the chosen difficulty".into());
            }
        }
        if self.run_points() > self.lifetime_points {
            return Err("lifetime points below the current run".into());
        }
        Ok(())
    }
}
