//! CSV/JSON emission.
//!
//! CSV files open with a `# {json}` metadata line (command, parameters,
//! seed) so a result file is self-describing. Content is fully assembled in
//! memory before anything touches the filesystem, so a failing command
//! never leaves a partial output file. Nothing time-dependent is written;
//! re-running a command reproduces files byte for byte.

use crate::error::CliError;
use std::io::Write;
use std::path::Path;

/// Assemble a CSV document: metadata line, header, rows.
pub fn csv_document(metadata: &serde_json::Value, header: &str, rows: &[String]) -> String {
    let mut doc = String::with_capacity(rows.len() * 32 + 256);
    doc.push_str("# ");
    doc.push_str(&metadata.to_string());
    doc.push('\n');
    doc.push_str(header);
    doc.push('\n');
    for row in rows {
        doc.push_str(row);
        doc.push('\n');
    }
    doc
}

/// Write to `path`, or stdout when no path is given.
pub fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

pub fn emit_json(path: Option<&Path>, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Validation(format!("serializing result: {e}")))?;
    text.push('\n');
    emit(path, &text)
}
