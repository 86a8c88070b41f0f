//! Response envelope and payload schemas shared by the HTTP service and the
//! CLI's `--json` output.

use ecorec_core::country_data::DatasetError;
use ecorec_core::text_stats::StatsError;
use ecorec_core::{
    ChiSquareResult, ContingencyTable, CountryRecord, DatasetSummary, Difficulty, HubError, Mark, Metric, Session,
    SessionError, SessionState, StandingResult, StoreError, TaskEntry,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiEnvelope {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Machine error code; only on errors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<Value>,
}

impl ApiEnvelope {
    pub fn ok<T: Serialize>(payload: &T) -> Self {
        ApiEnvelope {
            status: Status::Ok,
            message: None,
            code: None,
            payload: Some(serde_json::to_value(payload).expect("payloads serialize")),
        }
    }

    pub fn with_message(mut self, message: impl Into<String>) -> Self {
        self.message = Some(message.into());
        self
    }

    pub fn error(err: &ApiError) -> Self {
        ApiEnvelope {
            status: Status::Error,
            message: Some(err.message.clone()),
            code: Some(err.code.to_string()),
            payload: None,
        }
    }
}

/// A domain error reduced to what crosses the wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub http_status: u16,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    pub fn new(http_status: u16, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { http_status, code, message: message.into() }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(400, "BadRequest", message)
    }

    pub fn unknown_session(id: &str) -> Self {
        ApiError::from(StoreError::UnknownSession(id.to_string()))
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let status = match e {
            SessionError::WrongState { .. } => 409,
            SessionError::CountryNotFound => 404,
            SessionError::IndexOutOfRange { .. } => 404,
            _ => 422,
        };
        ApiError::new(status, e.code(), e.to_string())
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let status = match e {
            StoreError::UnknownSession(_) => 404,
            StoreError::StoreUnavailable(_) | StoreError::Corrupt { .. } => 503,
        };
        ApiError::new(status, e.code(), e.to_string())
    }
}

impl From<HubError> for ApiError {
    fn from(e: HubError) -> Self {
        match e {
            HubError::Session(e) => e.into(),
            HubError::Store(e) => e.into(),
        }
    }
}

impl From<DatasetError> for ApiError {
    fn from(e: DatasetError) -> Self {
        let status = match e {
            DatasetError::CountryNotFound => 404,
            DatasetError::Io(_) => 500,
            _ => 400,
        };
        ApiError::new(status, e.code(), e.to_string())
    }
}

impl From<StatsError> for ApiError {
    fn from(e: StatsError) -> Self {
        let status = if matches!(e, StatsError::Io(_)) { 500 } else { 400 };
        ApiError::new(status, e.code(), e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskView {
    pub index: usize,
    pub text: String,
    pub difficulty: Difficulty,
    pub completed: Mark,
    pub awarded: u64,
}

impl TaskView {
    pub fn list(tasks: &[TaskEntry]) -> Vec<TaskView> {
        tasks
            .iter()
            .enumerate()
            .map(|(index, t)| TaskView {
                index,
                text: t.text.clone(),
                difficulty: t.difficulty,
                completed: t.completed,
                awarded: t.awarded(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub state: SessionState,
    pub country: Option<CountryRecord>,
    pub standing: Option<StandingResult>,
    pub difficulty: Option<Difficulty>,
    pub tasks: Vec<TaskView>,
    pub run_points: u64,
    pub total_points: u64,
}

impl From<&Session> for SessionView {
    fn from(s: &Session) -> Self {
        SessionView {
            id: s.id.to_string(),
            state: s.state,
            country: s.country.clone(),
            standing: s.standing.clone(),
            difficulty: s.difficulty,
            tasks: TaskView::list(&s.tasks),
            run_points: s.run_points(),
            total_points: s.total_points(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountryPayload {
    pub state: SessionState,
    pub country: CountryRecord,
    pub standing: StandingResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatePayload {
    pub state: SessionState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TasksPayload {
    pub state: SessionState,
    pub difficulty: Option<Difficulty>,
    pub count: usize,
    pub tasks: Vec<TaskView>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkPayload {
    pub index: usize,
    pub awarded: u64,
    pub delta: i64,
    pub run_points: u64,
    pub total_points: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointsPayload {
    pub run_points: u64,
    pub total_points: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryPayload {
    pub metric: Metric,
    #[serde(flatten)]
    pub summary: DatasetSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquarePayload {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub observed: Vec<Vec<u64>>,
    #[serde(flatten)]
    pub result: ChiSquareResult,
    pub p_display: String,
}

impl ChiSquarePayload {
    pub fn new(table: &ContingencyTable, result: ChiSquareResult) -> Self {
        ChiSquarePayload {
            row_labels: table.row_labels().to_vec(),
            col_labels: table.col_labels().to_vec(),
            observed: table.observed().to_vec(),
            p_display: result.p_display(),
            result,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordCount {
    pub word: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCount {
    pub label: String,
    pub keywords: Vec<String>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordCountPayload {
    pub words: Vec<WordCount>,
    pub groups: Vec<GroupCount>,
}
