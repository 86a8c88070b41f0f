//! Front ends for the recommendation engine: the HTTP service, the one-shot
//! CLI commands and the interactive terminal dialogue.

pub mod api;
pub mod commands;
pub mod data;
pub mod dialogue;
pub mod server;
