use thiserror::Error;

use crate::dsl::Pos;

fn hint(suggestions: &[String]) -> String {
    if suggestions.is_empty() {
        String::new()
    } else {
        format!(" (did you mean {}?)", suggestions.iter().map(|s| format!("`{s}`")).collect::<Vec<_>>().join(", "))
    }
}

fn at(pos: &Option<Pos>) -> String {
    pos.map(|p| format!("{p}: ")).unwrap_or_default()
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: duplicate {kind} `{name}` (first declared at {first})")]
    Duplicate { kind: String, name: String, pos: Pos, first: Pos },
    #[error("{}unknown {kind} `{name}`{}", at(pos), hint(suggestions))]
    Unresolved { kind: String, name: String, pos: Option<Pos>, suggestions: Vec<String> },
    #[error("{pos}: {msg}")]
    Invalid { pos: Pos, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hofib::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    InFile { path: String, source: Box<CliError> },
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
