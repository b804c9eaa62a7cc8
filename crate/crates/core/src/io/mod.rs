//! File formats: the JSON taxonomy document, the edge-list exchange format
//! and plain-text label-set files.

use thiserror::Error;

use crate::graph::ValidationIssue;

mod document;
mod edges;
mod labelset;

pub use document::{read_document, write_document, DocCluster, DocEdge, DocLabel, TaxonomyDocument};
pub use edges::{export_edges, import_edges, EDGE_LIST_HEADER};
pub use labelset::parse_label_set;

/// Current version written by every serializer.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown format version {0:?}")]
    UnknownFormatVersion(String),
    #[error("graph fails validation with {} error(s)", .0.len())]
    InvalidGraph(Vec<ValidationIssue>),
    #[error("malformed document: {0}")]
    Document(String),
}

impl FormatError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        FormatError::Parse {
            line,
            message: message.into(),
        }
    }
}

/// Reads either format, picking JSON when the text starts with `{`.
pub fn read_graph(text: &str) -> Result<crate::graph::TaxonomyGraph, FormatError> {
    if text.trim_start().starts_with('{') {
        read_document(text).map(|(g, _)| g)
    } else {
        import_edges(text)
    }
}
