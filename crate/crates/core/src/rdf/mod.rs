//! Minimal RDF 1.1 dataset model with a streaming N-Quads reader and
//! writer and a streaming reader for a TriG subset.

mod model;
pub mod nquads;
pub mod trig;

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use thiserror::Error;

pub use model::*;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ParseError {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

/// A streaming source of quads in document order.
pub type QuadReader<'a> = Box<dyn Iterator<Item = Result<Quad, ParseError>> + 'a>;

/// Opens a streaming reader of the given format over `input`.
pub fn quad_reader<'a, R: BufRead + 'a>(input: R, format: RdfFormat) -> QuadReader<'a> {
    match format {
        RdfFormat::NQuads => Box::new(nquads::NQuadsReader::new(input)),
        RdfFormat::TriG => Box::new(trig::TriGReader::new(input)),
    }
}

/// Parses a whole document.
pub fn parse<R: Read>(input: R, format: RdfFormat) -> Result<QuadDocument, ParseError> {
    let quads = quad_reader(BufReader::new(input), format).collect::<Result<Vec<_>, _>>()?;
    Ok(QuadDocument::new(quads, format))
}

/// Format implied by the last extension of `path`, if any.
pub fn format_for_path(path: &Path) -> Option<RdfFormat> {
    path.extension()
        .and_then(|e| e.to_str())
        .and_then(RdfFormat::from_extension)
}

/// Parses a file; `format` overrides extension-based detection, which in
/// turn falls back to N-Quads.
pub fn parse_file(path: &Path, format: Option<RdfFormat>) -> Result<QuadDocument, ParseError> {
    let format = format
        .or_else(|| format_for_path(path))
        .unwrap_or(RdfFormat::NQuads);
    parse(File::open(path)?, format)
}

/// Characters not allowed in an IRI reference.
pub(crate) fn is_forbidden_iri_char(c: char) -> bool {
    matches!(c, '\u{0}'..='\u{20}' | '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
}
