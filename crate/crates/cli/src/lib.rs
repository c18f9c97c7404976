//! Declaration language, command runner and reports for `hofib`.

pub mod dsl;
pub mod error;
pub mod report;
pub mod resolve;
pub mod run;

pub use dsl::{parse, Document, Pos};
pub use error::{CliError, Result};
pub use report::{emit, Check, Format, HomologyRow, Report, Verdict};
pub use resolve::Env;
pub use run::{parse_coefficients, run, Command, Flags};

/// Parses and merges several files into one environment.
pub fn load(paths: &[std::path::PathBuf]) -> Result<Env> {
    let mut doc = Document::default();
    for p in paths {
        let path = p.display().to_string();
        let text = std::fs::read_to_string(p).map_err(|source| CliError::Io { path: path.clone(), source })?;
        let wrap = |e: CliError| CliError::InFile { path: path.clone(), source: Box::new(e) };
        doc.merge(parse(&text).map_err(wrap)?).map_err(|e| CliError::InFile { path: path.clone(), source: Box::new(e) })?;
    }
    Ok(Env::new(doc))
}
