//! Interactive terminal walk through the session state machine.

use std::io::{self, BufRead, Write};

use ecorec_core::session::{DIFFICULTY_PROMPT, RECOMMENDATION_PROMPT, THANK_YOU_MESSAGE};
use ecorec_core::{Catalog, CountryRecord, HubError, Mark, Session, SessionHub, SessionId, SessionState, SessionStore};

use crate::api::TaskView;
use crate::commands::render_standing;

pub const COUNTRY_PROMPT: &str = "Which country do you live in?";
pub const STANDING_PREAMBLE: &str = "The country that you searched for would be considered: ";
pub const TRACKER_HELP: &str =
    "Mark a task with `<index> O` once done (`<index> X` to undo), enter HARD, MEDIUM or EASY for a new list, or DONE to finish.";

#[derive(Debug)]
pub enum DialogueError {
    Io(io::Error),
    Hub(HubError),
}

impl std::fmt::Display for DialogueError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DialogueError::Io(e) => write!(f, "{e}"),
            DialogueError::Hub(e) => write!(f, "{e}"),
        }
    }
}

impl From<io::Error> for DialogueError {
    fn from(e: io::Error) -> Self {
        DialogueError::Io(e)
    }
}

impl From<HubError> for DialogueError {
    fn from(e: HubError) -> Self {
        DialogueError::Hub(e)
    }
}

impl From<ecorec_core::StoreError> for DialogueError {
    fn from(e: ecorec_core::StoreError) -> Self {
        DialogueError::Hub(e.into())
    }
}

pub struct Dialogue<'a, S, R, W> {
    pub dataset: &'a [CountryRecord],
    pub catalog: &'a Catalog,
    pub hub: &'a SessionHub<S>,
    pub input: R,
    pub output: W,
}

impl<S: SessionStore, R: BufRead, W: Write> Dialogue<'_, S, R, W> {
    /// Reads one line without its terminator; `None` at end of input.
    fn read_line(&mut self) -> io::Result<Option<String>> {
        let mut line = String::new();
        if self.input.read_line(&mut line)? == 0 {
            return Ok(None);
        }
        if line.ends_with('\n') {
            line.pop();
            if line.ends_with('\r') {
                line.pop();
            }
        }
        Ok(Some(line))
    }

    fn say(&mut self, text: &str) -> io::Result<()> {
        writeln!(self.output, "{text}")?;
        self.output.flush()
    }

    /// Runs a new session, or resumes `resume`, until the user finishes or
    /// input ends. Returns the session id.
    pub fn run(&mut self, resume: Option<SessionId>) -> Result<SessionId, DialogueError> {
        let session = match resume {
            Some(id) => {
                let s = self.hub.get(&id)?;
                self.say(&format!("Resuming session {id} with {} points.", s.total_points()))?;
                s
            }
            None => self.hub.create()?,
        };
        let id = session.id.clone();
        let mut state = session.state;
        loop {
            let next = match state {
                SessionState::AwaitingCountry => self.ask_country(&id)?,
                SessionState::AwaitingYesNo => self.ask_yes_no(&id)?,
                SessionState::AwaitingDifficulty => self.ask_difficulty(&id)?,
                SessionState::TasksIssued => self.track(&id)?,
                SessionState::Terminated => {
                    self.say(THANK_YOU_MESSAGE)?;
                    None
                }
            };
            match next {
                Some(s) => state = s,
                None => break,
            }
        }
        Ok(id)
    }

    fn ask_country(&mut self, id: &SessionId) -> Result<Option<SessionState>, DialogueError> {
        loop {
            self.say(COUNTRY_PROMPT)?;
            let Some(name) = self.read_line()? else { return Ok(None) };
            match self.hub.apply(id, |s| s.submit_country(self.dataset, &name).cloned()) {
                Ok((standing, s)) => {
                    self.say(STANDING_PREAMBLE)?;
                    self.say(&render_standing(&standing))?;
                    return Ok(Some(s.state));
                }
                Err(HubError::Session(e)) => self.say(&e.to_string())?,
                Err(e) => return Err(e.into()),
            }
        }
    }

    fn ask_yes_no(&mut self, id: &SessionId) -> Result<Option<SessionState>, DialogueError> {
        self.say(RECOMMENDATION_PROMPT)?;
        loop {
            let Some(reply) = self.read_line()? else { return Ok(None) };
            match self.hub.apply(id, |s| s.answer_recommendations(&reply)) {
                Ok((message, s)) => {
                    // The difficulty prompt is printed by the next step.
                    if s.state == SessionState::Terminated {
                        self.say(message)?;
                        return Ok(None);
                    }
                    return Ok(Some(s.state));
                }
                Err(HubError::Session(e)) => self.say(&e.to_string())?,
                Err(e) => return Err(e.into()),
            }
        }
    }

    fn ask_difficulty(&mut self, id: &SessionId) -> Result<Option<SessionState>, DialogueError> {
        loop {
            self.say(DIFFICULTY_PROMPT)?;
            self.say("(HARD, MEDIUM or EASY)")?;
            let Some(reply) = self.read_line()? else { return Ok(None) };
            match self.hub.apply(id, |s| s.choose_difficulty(&reply, self.catalog)) {
                Ok((_, s)) => {
                    self.show_tasks(&s)?;
                    return Ok(Some(s.state));
                }
                Err(HubError::Session(e)) => self.say(&e.to_string())?,
                Err(e) => return Err(e.into()),
            }
        }
    }

    fn show_tasks(&mut self, s: &Session) -> io::Result<()> {
        self.say("Recommendations:")?;
        for t in TaskView::list(&s.tasks) {
            self.say(&format!("[{}] {} ({}, {})", t.index, t.text, t.difficulty, t.completed))?;
        }
        self.say(&format!("{} recommendations issued.", s.tasks.len()))?;
        self.say(TRACKER_HELP)
    }

    fn track(&mut self, id: &SessionId) -> Result<Option<SessionState>, DialogueError> {
        while let Some(line) = self.read_line()? {
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["DONE"] => break,
                [level] if ["HARD", "MEDIUM", "EASY"].contains(level) => {
                    let (_, s) = match self.hub.apply(id, |s| s.choose_difficulty(level, self.catalog)) {
                        Ok(r) => r,
                        Err(HubError::Session(e)) => {
                            self.say(&e.to_string())?;
                            continue;
                        }
                        Err(e) => return Err(e.into()),
                    };
                    self.show_tasks(&s)?;
                }
                [index, mark] => {
                    let parsed = index
                        .parse::<usize>()
                        .map_err(|_| format!("`{index}` is not a task index"))
                        .and_then(|i| mark.parse::<Mark>().map(|m| (i, m)).map_err(|e| e.to_string()));
                    let (i, m) = match parsed {
                        Ok(p) => p,
                        Err(msg) => {
                            self.say(&msg)?;
                            continue;
                        }
                    };
                    match self.hub.apply(id, |s| s.mark_task(i, m)) {
                        Ok((outcome, s)) => self.say(&format!(
                            "Task {i}: {} points. This run: {}, total: {}.",
                            outcome.awarded,
                            s.run_points(),
                            s.total_points()
                        ))?,
                        Err(HubError::Session(e)) => self.say(&e.to_string())?,
                        Err(e) => return Err(e.into()),
                    }
                }
                _ => self.say(TRACKER_HELP)?,
            }
        }
        let s = self.hub.get(id)?;
        self.say(&format!(
            "Great job helping to reduce plastic pollution! You earned {} points this run and have {} points in total.",
            s.run_points(),
            s.total_points()
        ))?;
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ecorec_core::session::{NO_RECOMMENDATIONS_MESSAGE, YES_OR_NO_MESSAGE};
    use ecorec_core::{bundled_catalog, bundled_dataset, MemoryStore};

    fn run(script: &str) -> (String, Session) {
        let dataset = bundled_dataset();
        let catalog = bundled_catalog();
        let hub = SessionHub::new(MemoryStore::default());
        let mut out = Vec::new();
        let id =
            Dialogue { dataset: &dataset, catalog: &catalog, hub: &hub, input: script.as_bytes(), output: &mut out }
                .run(None)
                .unwrap();
        (String::from_utf8(out).unwrap(), hub.get(&id).unwrap())
    }

    #[test]
    fn full_walk() {
        let (out, s) = run("bunny\nMexico\nno\nYES\nyeet\nEASY\n0 O\n1 O\n2 O\n3 O\nDONE\n");
        assert!(out.contains("Country not found. Remember to type with first letter capital."));
        assert!(out.contains("Reason: Percent of inadequately managed plastic is 12% which is lower than 25%."));
        assert!(out.contains(YES_OR_NO_MESSAGE));
        assert!(out.contains(DIFFICULTY_PROMPT));
        assert!(out.contains(NO_RECOMMENDATIONS_MESSAGE));
        assert!(out.contains("4 recommendations issued."));
        assert!(out.contains("4 points in total"));
        assert_eq!(s.total_points(), 4);
    }

    #[test]
    fn no_terminates() {
        let (out, s) = run("Congo\nNO\n");
        assert!(out.contains("THIRD\nThird World/Developing Country"));
        assert!(out.trim_end().ends_with(THANK_YOU_MESSAGE));
        assert_eq!(s.state, SessionState::Terminated);
    }

    #[test]
    fn eof_mid_dialogue_is_clean() {
        let (_, s) = run("Bulgaria\n");
        assert_eq!(s.state, SessionState::AwaitingYesNo);
    }
}
