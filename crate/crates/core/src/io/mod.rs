//! Text formats: native ontology documents, match files, diff files and a
//! small OBO subset.

mod diff_format;
mod match_file;
mod native;
mod obo;

pub use diff_format::{parse_diff, serialize_diff};
pub use match_file::{parse_match, serialize_match};
pub use native::{parse_ontology, parse_ontology_unchecked, serialize_ontology};
pub use obo::{parse_obo, DanglingPolicy, OboOptions, OboReport};

/// Splits a document into `(line number, content)` pairs, skipping blank
/// lines and `#` comments and stripping a trailing carriage return.
pub(crate) fn content_lines(doc: &str) -> impl Iterator<Item = (usize, &str)> {
    doc.lines().enumerate().filter_map(|(i, line)| {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}
