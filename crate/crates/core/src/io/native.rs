use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::content_lines;
use crate::error::ParseError;
use crate::ontology::{validate, Attribute, ConceptId, Ontology, Relationship};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Concepts,
    Relationships,
    Attributes,
}

fn concept(line: usize, s: &str) -> Result<ConceptId, ParseError> {
    ConceptId::new(s).map_err(|e| ParseError::at(line, e.to_string()))
}

fn three_fields(line: usize, text: &str) -> Result<[&str; 3], ParseError> {
    let fields: Vec<&str> = text.split('\t').collect();
    match fields.as_slice() {
        [a, b, c] => Ok([a, b, c]),
        _ => Err(ParseError::at(line, format!("expected 3 tab-separated fields, found {}", fields.len()))),
    }
}

/// Parses a native document without validating the DAG invariants.
/// Referential integrity and duplicates are still checked line by line.
pub fn parse_ontology_unchecked(doc: &str) -> Result<Ontology, ParseError> {
    let mut section: Option<Section> = None;
    let mut concepts = BTreeSet::new();
    let mut attributes = BTreeSet::new();
    let mut relationships = BTreeSet::new();

    for (line, text) in content_lines(doc) {
        let header = match text.trim_end() {
            "[concepts]" => Some(Section::Concepts),
            "[relationships]" => Some(Section::Relationships),
            "[attributes]" => Some(Section::Attributes),
            _ => None,
        };
        if let Some(next) = header {
            if section.is_some_and(|cur| cur >= next) {
                return Err(ParseError::at(line, format!("section {} out of order", text.trim_end())));
            }
            section = Some(next);
            continue;
        }
        match section {
            None => return Err(ParseError::at(line, "content before the first section header")),
            Some(Section::Concepts) => {
                let c = concept(line, text)?;
                if !concepts.insert(c) {
                    return Err(ParseError::at(line, format!("duplicate concept {text:?}")));
                }
            }
            Some(Section::Relationships) => {
                let [s, t, p] = three_fields(line, text)?;
                let (s, p) = (concept(line, s)?, concept(line, p)?);
                for end in [&s, &p] {
                    if !concepts.contains(end) {
                        return Err(ParseError::at(line, format!("undeclared concept {:?}", end.as_str())));
                    }
                }
                if !relationships.insert(Relationship::new(s, t, p)) {
                    return Err(ParseError::at(line, "duplicate relationship"));
                }
            }
            Some(Section::Attributes) => {
                let [c, n, v] = three_fields(line, text)?;
                let c = concept(line, c)?;
                if !concepts.contains(&c) {
                    return Err(ParseError::at(line, format!("undeclared concept {:?}", c.as_str())));
                }
                if !attributes.insert(Attribute::new(c, n, v)) {
                    return Err(ParseError::at(line, "duplicate attribute"));
                }
            }
        }
    }
    Ok(Ontology::from_parts("", concepts, attributes, relationships))
}

/// Parses and validates a native ontology document.
///
/// The version label is left empty; callers name versions (the CLI uses the
/// file stem).
pub fn parse_ontology(doc: &str) -> Result<Ontology, ParseError> {
    let o = parse_ontology_unchecked(doc)?;
    let report = validate(&o);
    if !report.is_ok() {
        return Err(ParseError::Invalid(report.to_string()));
    }
    Ok(o)
}

/// Canonical document: all three headers, each section sorted by code point.
pub fn serialize_ontology(o: &Ontology) -> String {
    let mut out = String::from("[concepts]\n");
    for c in o.concepts() {
        out.push_str(c.as_str());
        out.push('\n');
    }
    out.push_str("[relationships]\n");
    // Sets are ordered field-wise; sort by the rendered line for code-point order.
    let mut lines: Vec<String> =
        o.relationships().iter().map(|r| format!("{}\t{}\t{}", r.source, r.rel_type, r.target)).collect();
    lines.sort();
    for l in lines {
        let _ = writeln!(out, "{l}");
    }
    out.push_str("[attributes]\n");
    let mut lines: Vec<String> =
        o.attributes().iter().map(|a| format!("{}\t{}\t{}", a.concept, a.name, a.value)).collect();
    lines.sort();
    for l in lines {
        let _ = writeln!(out, "{l}");
    }
    out
}
