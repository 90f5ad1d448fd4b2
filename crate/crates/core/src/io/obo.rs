//! Reader for the structural subset of OBO flat files: `[Term]` stanzas with
//! ids, names, definitions, obsolete flags, `is_a` and `relationship` links.

use std::collections::BTreeSet;

use crate::error::ParseError;
use crate::ontology::{Attribute, ConceptId, Ontology, Relationship};

/// What to do with an `is_a`/`relationship` whose target has no stanza.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DanglingPolicy {
    #[default]
    Error,
    Drop,
}

#[derive(Debug, Clone, Default)]
pub struct OboOptions {
    pub dangling: DanglingPolicy,
}

/// Everything the reader skipped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OboReport {
    /// Tags inside `[Term]` stanzas that are not mapped.
    pub ignored_tags: usize,
    /// Non-`[Term]` stanzas (e.g. `[Typedef]`).
    pub ignored_stanzas: usize,
    /// Dangling links removed under [`DanglingPolicy::Drop`].
    pub dropped: Vec<Relationship>,
}

struct Term {
    line: usize,
    id: Option<ConceptId>,
    attributes: Vec<(String, String)>,
    links: Vec<(usize, String, String)>,
}

fn strip_comment(value: &str) -> &str {
    let bytes = value.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'!' && (i == 0 || bytes[i - 1] != b'\\') {
            return value[..i].trim_end();
        }
    }
    value.trim_end()
}

/// The quoted text of a `def:` value, unescaping `\"`.
fn quoted(value: &str) -> Option<String> {
    let rest = value.strip_prefix('"')?;
    let mut out = String::new();
    let mut chars = rest.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => out.push(chars.next()?),
            '"' => return Some(out),
            c => out.push(c),
        }
    }
    None
}

fn clean(value: &str) -> String {
    value.replace(['\t', '\r', '\n'], " ")
}

/// Parses an OBO document. Does not validate the result: a file without
/// `[Term]` stanzas yields an empty ontology.
pub fn parse_obo(doc: &str, options: &OboOptions) -> Result<(Ontology, OboReport), ParseError> {
    let mut report = OboReport::default();
    let mut terms: Vec<Term> = Vec::new();
    let mut in_term = false;

    for (i, raw) in doc.lines().enumerate() {
        let line = i + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('!') {
            continue;
        }
        if text.starts_with('[') {
            in_term = text == "[Term]";
            if in_term {
                terms.push(Term { line, id: None, attributes: Vec::new(), links: Vec::new() });
            } else {
                report.ignored_stanzas += 1;
            }
            continue;
        }
        if !in_term {
            continue;
        }
        let term = terms.last_mut().expect("inside a term stanza");
        let Some((tag, value)) = text.split_once(':') else {
            return Err(ParseError::at(line, "expected 'tag: value'"));
        };
        let value = value.trim();
        match tag.trim() {
            "id" => {
                let id = ConceptId::new(strip_comment(value)).map_err(|e| ParseError::at(line, e.to_string()))?;
                term.id = Some(id);
            }
            "name" => term.attributes.push(("name".into(), clean(strip_comment(value)))),
            "def" => {
                let text = quoted(value).ok_or_else(|| ParseError::at(line, "def: expects a quoted string"))?;
                term.attributes.push(("definition".into(), clean(&text)));
            }
            "is_obsolete" => term.attributes.push(("obsolete".into(), strip_comment(value).to_string())),
            "is_a" => term.links.push((line, "is_a".into(), strip_comment(value).to_string())),
            "relationship" => {
                let v = strip_comment(value);
                let (rel, target) = v
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| ParseError::at(line, "relationship: expects '<type> <target>'"))?;
                term.links.push((line, rel.to_string(), target.trim().to_string()));
            }
            _ => report.ignored_tags += 1,
        }
    }

    let mut concepts = BTreeSet::new();
    for t in &terms {
        match &t.id {
            Some(id) => {
                concepts.insert(id.clone());
            }
            None => return Err(ParseError::at(t.line, "[Term] stanza without id")),
        }
    }
    let mut attributes = BTreeSet::new();
    let mut relationships = BTreeSet::new();
    for t in terms {
        let id = t.id.expect("checked above");
        for (name, value) in t.attributes {
            attributes.insert(Attribute::new(id.clone(), name, value));
        }
        for (line, rel, target) in t.links {
            let target = ConceptId::new(target).map_err(|e| ParseError::at(line, e.to_string()))?;
            let r = Relationship::new(id.clone(), rel, target);
            if concepts.contains(&r.target) {
                relationships.insert(r);
            } else if options.dangling == DanglingPolicy::Drop {
                report.dropped.push(r);
            } else {
                return Err(ParseError::at(line, format!("dangling target {:?}", r.target.as_str())));
            }
        }
    }
    Ok((Ontology::from_parts("", concepts, attributes, relationships), report))
}
