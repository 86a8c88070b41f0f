//! Session persistence and the per-session serialization domain.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, MutexGuard};

use thiserror::Error;

use crate::session::{Session, SessionError, SessionId};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("session store unavailable: {0}")]
    StoreUnavailable(String),
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("stored session `{id}` is corrupt: {detail}")]
    Corrupt { id: String, detail: String },
}

impl StoreError {
    pub fn code(&self) -> &'static str {
        match self {
            StoreError::StoreUnavailable(_) => "StoreUnavailable",
            StoreError::UnknownSession(_) => "UnknownSession",
            StoreError::Corrupt { .. } => "StoreCorrupt",
        }
    }
}

pub trait SessionStore: Send + Sync {
    fn persist(&self, session: &Session) -> Result<(), StoreError>;
    fn restore(&self, id: &SessionId) -> Result<Session, StoreError>;
}

/// One pretty-printed JSON document per session, replaced atomically on write.
#[derive(Debug, Clone)]
pub struct FileStore {
    dir: PathBuf,
}

impl FileStore {
    /// Opens (creating if needed) a store rooted at `dir`.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| StoreError::StoreUnavailable(format!("{}: {e}", dir.display())))?;
        Ok(FileStore { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, id: &SessionId) -> PathBuf {
        self.dir.join(format!("{id}.json"))
    }
}

impl SessionStore for FileStore {
    fn persist(&self, session: &Session) -> Result<(), StoreError> {
        let unavailable = |e: io::Error| StoreError::StoreUnavailable(format!("{}: {e}", self.dir.display()));
        let mut doc = serde_json::to_vec_pretty(session).map_err(|e| StoreError::StoreUnavailable(e.to_string()))?;
        doc.push(b'\n');
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(unavailable)?;
        tmp.write_all(&doc).map_err(unavailable)?;
        tmp.as_file().sync_all().map_err(unavailable)?;
        tmp.persist(self.path_for(&session.id)).map_err(|e| unavailable(e.error))?;
        Ok(())
    }

    fn restore(&self, id: &SessionId) -> Result<Session, StoreError> {
        let bytes = match fs::read(self.path_for(id)) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(StoreError::UnknownSession(id.to_string())),
            Err(e) => return Err(StoreError::StoreUnavailable(e.to_string())),
        };
        let corrupt = |detail: String| StoreError::Corrupt { id: id.to_string(), detail };
        let session: Session = serde_json::from_slice(&bytes).map_err(|e| corrupt(e.to_string()))?;
        if &session.id != id {
            return Err(corrupt(format!("document holds session `{}`", session.id)));
        }
        session.check_invariants().map_err(corrupt)?;
        Ok(session)
    }
}

/// In-process store, for tests and the non-persistent CLI session.
#[derive(Debug, Default)]
pub struct MemoryStore {
    docs: Mutex<HashMap<SessionId, String>>,
}

impl SessionStore for MemoryStore {
    fn persist(&self, session: &Session) -> Result<(), StoreError> {
        let doc = serde_json::to_string(session).map_err(|e| StoreError::StoreUnavailable(e.to_string()))?;
        lock(&self.docs).insert(session.id.clone(), doc);
        Ok(())
    }

    fn restore(&self, id: &SessionId) -> Result<Session, StoreError> {
        let docs = lock(&self.docs);
        let doc = docs.get(id).ok_or_else(|| StoreError::UnknownSession(id.to_string()))?;
        serde_json::from_str(doc).map_err(|e| StoreError::Corrupt { id: id.to_string(), detail: e.to_string() })
    }
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

#[derive(Debug, Error)]
pub enum HubError {
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Store(#[from] StoreError),
}

impl HubError {
    pub fn code(&self) -> &'static str {
        match self {
            HubError::Session(e) => e.code(),
            HubError::Store(e) => e.code(),
        }
    }
}

/// Routes every mutation of a session through that session's lock, and
/// persists the result before handing it back. A failed operation or a
/// failed write leaves both the cached and the stored session unchanged.
pub struct SessionHub<S> {
    store: S,
    live: Mutex<HashMap<SessionId, Arc<Mutex<Option<Session>>>>>,
}

impl<S: SessionStore> SessionHub<S> {
    pub fn new(store: S) -> Self {
        SessionHub { store, live: Mutex::new(HashMap::new()) }
    }

    pub fn store(&self) -> &S {
        &self.store
    }

    fn slot(&self, id: &SessionId) -> Arc<Mutex<Option<Session>>> {
        lock(&self.live).entry(id.clone()).or_default().clone()
    }

    pub fn create(&self) -> Result<Session, StoreError> {
        let session = Session::new(SessionId::generate());
        let slot = self.slot(&session.id);
        let mut guard = lock(&slot);
        self.store.persist(&session)?;
        *guard = Some(session.clone());
        Ok(session)
    }

    fn load<'a>(&self, id: &SessionId, guard: &'a mut Option<Session>) -> Result<&'a mut Session, StoreError> {
        if guard.is_none() {
            *guard = Some(self.store.restore(id)?);
        }
        Ok(guard.as_mut().expect("filled above"))
    }

    /// Snapshot of a session.
    pub fn get(&self, id: &SessionId) -> Result<Session, StoreError> {
        let slot = self.slot(id);
        let mut guard = lock(&slot);
        let session = self.load(id, &mut guard)?;
        Ok(session.clone())
    }

    /// Applies `op` to a working copy of the session; on success the copy is
    /// persisted and becomes current.
    pub fn apply<T, F>(&self, id: &SessionId, op: F) -> Result<(T, Session), HubError>
    where
        F: FnOnce(&mut Session) -> Result<T, SessionError>,
    {
        let slot = self.slot(id);
        let mut guard = lock(&slot);
        let current = self.load(id, &mut guard)?;
        let mut working = current.clone();
        let out = op(&mut working)?;
        if working != *current {
            self.store.persist(&working)?;
            *current = working.clone();
        }
        Ok((out, working))
    }
}
