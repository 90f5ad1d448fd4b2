use super::content_lines;
use crate::error::MatchError;
use crate::matching::MatchMapping;
use crate::ontology::{ConceptId, Ontology};

/// Parses `old<TAB>new` lines, checking every id against its version.
/// Duplicate lines collapse.
pub fn parse_match(doc: &str, old: &Ontology, new: &Ontology) -> Result<MatchMapping, MatchError> {
    let mut m = MatchMapping::new();
    for (line, text) in content_lines(doc) {
        let Some((a, b)) = text.split_once('\t').filter(|(_, b)| !b.contains('\t')) else {
            return Err(MatchError::Syntax { line, message: "expected 2 tab-separated fields".into() });
        };
        let a = ConceptId::new(a).map_err(|e| MatchError::Syntax { line, message: e.to_string() })?;
        let b = ConceptId::new(b).map_err(|e| MatchError::Syntax { line, message: e.to_string() })?;
        if !old.concepts().contains(&a) {
            return Err(MatchError::UnknownOld { line, id: a.to_string() });
        }
        if !new.concepts().contains(&b) {
            return Err(MatchError::UnknownNew { line, id: b.to_string() });
        }
        m.insert(a, b);
    }
    Ok(m)
}

pub fn serialize_match(m: &MatchMapping) -> String {
    let mut lines: Vec<String> = m.pairs().map(|(a, b)| format!("{a}\t{b}\n")).collect();
    lines.sort();
    lines.concat()
}
