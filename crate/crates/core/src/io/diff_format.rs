use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::change::{ChangeOp, ConceptSet, DiffKind, DiffMapping, OpId, OpKind, Phase};
use crate::error::ParseError;
use crate::ontology::{Attribute, ConceptId, Relationship};

const MAGIC: &str = "#evomap-diff v1 kind=";

/// Writes the canonical diff document.
///
/// Ops are numbered by `(phase, canonical form)`. Id, phase and lineage
/// annotations are only emitted when the mapping carries history, so a
/// plain basic diff is one op per line.
pub fn serialize_diff(d: &DiffMapping) -> String {
    let d = d.canonicalized();
    let mut out = format!("{MAGIC}{}\n", d.kind().name());
    if !d.old_label().is_empty() || !d.new_label().is_empty() {
        let _ = writeln!(out, "#versions\t{}\t{}", d.old_label(), d.new_label());
    }
    let phases = d.records().iter().any(|r| r.phase != Phase::Basic);
    let ids = d.has_history();
    let mut current = None;
    for (i, rec) in d.records().iter().enumerate() {
        if phases && current != Some(rec.phase) {
            let _ = writeln!(out, "#phase {}", rec.phase);
            current = Some(rec.phase);
        }
        out.push_str(rec.canonical());
        if ids {
            let _ = write!(out, "\t@{i}");
        }
        if let Some(by) = &rec.created_by {
            let _ = write!(out, "\tby={by}");
        }
        if let Some(by) = &rec.eliminated_by {
            let _ = write!(out, "\telim={by}");
        }
        if !rec.consumed.is_empty() {
            out.push_str("\tfrom=");
            for (j, c) in rec.consumed.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{c}");
            }
        }
        out.push('\n');
    }
    out
}

type RawRecord = (ChangeOp, Phase, Option<String>, Option<String>, Vec<u32>);

/// Parses a diff document (see [`serialize_diff`] for the layout).
pub fn parse_diff(doc: &str) -> Result<DiffMapping, ParseError> {
    let mut lines = doc.lines().enumerate().map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)));
    let kind = loop {
        let Some((line, text)) = lines.next() else {
            return Err(ParseError::at(1, "missing diff header"));
        };
        if text.trim().is_empty() {
            continue;
        }
        let Some(kind) = text.strip_prefix(MAGIC) else {
            return Err(ParseError::at(line, format!("expected header {MAGIC:?}<kind>")));
        };
        break DiffKind::from_name(kind.trim_end())
            .ok_or_else(|| ParseError::at(line, format!("unknown diff kind {kind:?}")))?;
    };

    let (mut old_label, mut new_label) = (String::new(), String::new());
    let mut phase = Phase::Basic;
    let mut raw: Vec<(usize, Option<u32>, RawRecord)> = Vec::new();
    for (line, text) in lines {
        if text.trim().is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix("#versions\t") {
            let (o, n) = rest.split_once('\t').ok_or_else(|| ParseError::at(line, "malformed #versions line"))?;
            (old_label, new_label) = (o.to_string(), n.to_string());
            continue;
        }
        if let Some(rest) = text.strip_prefix("#phase ") {
            phase = Phase::from_name(rest.trim()).ok_or_else(|| ParseError::at(line, "unknown phase"))?;
            continue;
        }
        if text.starts_with('#') {
            continue;
        }
        let mut fields = text.split('\t');
        let op = parse_op(fields.next().unwrap_or_default()).map_err(|m| ParseError::at(line, m))?;
        let (mut id, mut by, mut elim, mut from) = (None, None, None, Vec::new());
        for f in fields {
            if let Some(n) = f.strip_prefix('@') {
                id = Some(n.parse::<u32>().map_err(|_| ParseError::at(line, format!("bad op id {f:?}")))?);
            } else if let Some(r) = f.strip_prefix("by=") {
                by = Some(r.to_string());
            } else if let Some(r) = f.strip_prefix("elim=") {
                elim = Some(r.to_string());
            } else if let Some(list) = f.strip_prefix("from=") {
                for item in list.split(',') {
                    let n = item
                        .strip_prefix('@')
                        .and_then(|n| n.parse::<u32>().ok())
                        .ok_or_else(|| ParseError::at(line, format!("bad lineage reference {item:?}")))?;
                    from.push(n);
                }
            } else {
                return Err(ParseError::at(line, format!("unknown annotation {f:?}")));
            }
        }
        raw.push((line, id, (op, phase, by, elim, from)));
    }

    // Map file ids to positions.
    let with_ids = raw.iter().filter(|(_, id, _)| id.is_some()).count();
    if with_ids != 0 && with_ids != raw.len() {
        let line = raw.iter().find(|(_, id, _)| id.is_none()).map_or(1, |r| r.0);
        return Err(ParseError::at(line, "op ids must be given on every line or on none"));
    }
    let mut position: HashMap<u32, u32> = HashMap::new();
    for (pos, (line, id, _)) in raw.iter().enumerate() {
        if let Some(id) = id {
            if position.insert(*id, pos as u32).is_some() {
                return Err(ParseError::at(*line, format!("duplicate op id @{id}")));
            }
        }
    }
    let mut records = Vec::with_capacity(raw.len());
    for (line, _, (op, phase, by, elim, from)) in raw {
        let consumed = from
            .into_iter()
            .map(|n| position.get(&n).map(|&p| OpId(p)).ok_or_else(|| ParseError::at(line, format!("unknown op id @{n}"))))
            .collect::<Result<Vec<_>, _>>()?;
        records.push((op, phase, by, elim, consumed));
    }
    DiffMapping::from_records(kind, old_label, new_label, records).map_err(ParseError::Inconsistent)
}

enum Arg {
    Id(String),
    Set(BTreeSet<String>),
    Triple([String; 3]),
}

impl Arg {
    fn describe(&self) -> &'static str {
        match self {
            Arg::Id(_) => "id",
            Arg::Set(_) => "set",
            Arg::Triple(_) => "triple",
        }
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn expect(&mut self, want: char) -> Result<(), String> {
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(format!("expected {want:?} at column {}, found {c:?}", self.pos)),
            None => Err(format!("expected {want:?}, found end of line")),
        }
    }

    fn id(&mut self) -> Result<String, String> {
        if self.peek() == Some('"') {
            self.bump();
            let mut out = String::new();
            loop {
                match self.bump() {
                    None => return Err("unterminated quoted id".into()),
                    Some('"') if self.peek() == Some('"') => {
                        self.bump();
                        out.push('"');
                    }
                    Some('"') => return Ok(out),
                    Some(c) => out.push(c),
                }
            }
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if matches!(c, '(' | ')' | '{' | '}' | ',' | '"') || c.is_whitespace() {
                break;
            }
            self.bump();
        }
        if start == self.pos {
            return Err(format!("expected an id at column {}", start + 1));
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn arg(&mut self) -> Result<Arg, String> {
        match self.peek() {
            Some('{') => {
                self.bump();
                let mut set = BTreeSet::new();
                loop {
                    set.insert(self.id().map_err(|e| format!("malformed set literal: {e}"))?);
                    match self.bump() {
                        Some(',') => continue,
                        Some('}') => return Ok(Arg::Set(set)),
                        _ => return Err("malformed set literal".into()),
                    }
                }
            }
            Some('(') => {
                self.bump();
                let a = self.id()?;
                self.expect(',')?;
                let b = self.id()?;
                self.expect(',')?;
                let c = self.id()?;
                self.expect(')')?;
                Ok(Arg::Triple([a, b, c]))
            }
            _ => self.id().map(Arg::Id),
        }
    }
}

fn concept(s: String) -> Result<ConceptId, String> {
    ConceptId::new(s).map_err(|e| e.to_string())
}

fn concept_set(set: BTreeSet<String>) -> Result<ConceptSet, String> {
    set.into_iter().map(concept).collect()
}

fn relationship([s, t, p]: [String; 3]) -> Result<Relationship, String> {
    Ok(Relationship::new(concept(s)?, t, concept(p)?))
}

fn attribute([c, n, v]: [String; 3]) -> Result<Attribute, String> {
    Ok(Attribute::new(concept(c)?, n, v))
}

/// Parses one canonical op, e.g. `merge({CD-RW,DVD-ROM,Other},Other)`.
pub(crate) fn parse_op(text: &str) -> Result<ChangeOp, String> {
    let open = text.find('(').ok_or("missing '('")?;
    let name = &text[..open];
    let kind = OpKind::from_name(name).ok_or_else(|| format!("unknown op name {name:?}"))?;
    let mut cur = Cursor { text, pos: open + 1 };
    let mut args = vec![cur.arg()?];
    loop {
        match cur.bump() {
            Some(',') => args.push(cur.arg()?),
            Some(')') => break,
            Some(c) => return Err(format!("unexpected {c:?} at column {}", cur.pos)),
            None => return Err("missing ')'".into()),
        }
    }
    if cur.pos != text.len() {
        return Err(format!("trailing text after op: {:?}", &text[cur.pos..]));
    }

    let shape: Vec<&str> = args.iter().map(Arg::describe).collect();
    let mismatch = || format!("{name} does not take ({})", shape.join(","));
    let mut it = args.into_iter();
    let op = match (kind, it.next(), it.next(), it.next(), it.next()) {
        (OpKind::AddC, Some(Arg::Id(c)), None, None, None) => ChangeOp::AddC(concept(c)?),
        (OpKind::DelC, Some(Arg::Id(c)), None, None, None) => ChangeOp::DelC(concept(c)?),
        (OpKind::ToObsolete, Some(Arg::Id(c)), None, None, None) => ChangeOp::ToObsolete(concept(c)?),
        (OpKind::RevokeObsolete, Some(Arg::Id(c)), None, None, None) => ChangeOp::RevokeObsolete(concept(c)?),
        (OpKind::MapC, Some(Arg::Id(a)), Some(Arg::Id(b)), None, None) => ChangeOp::MapC(concept(a)?, concept(b)?),
        (OpKind::Substitute, Some(Arg::Id(a)), Some(Arg::Id(b)), None, None) => {
            ChangeOp::Substitute(concept(a)?, concept(b)?)
        }
        (OpKind::AddR, Some(Arg::Triple(r)), None, None, None) => ChangeOp::AddR(relationship(r)?),
        (OpKind::DelR, Some(Arg::Triple(r)), None, None, None) => ChangeOp::DelR(relationship(r)?),
        (OpKind::MapR, Some(Arg::Triple(r)), Some(Arg::Triple(s)), None, None) => {
            ChangeOp::MapR(relationship(r)?, relationship(s)?)
        }
        (OpKind::AddA, Some(Arg::Triple(a)), None, None, None) => ChangeOp::AddA(attribute(a)?),
        (OpKind::DelA, Some(Arg::Triple(a)), None, None, None) => ChangeOp::DelA(attribute(a)?),
        (OpKind::MapA, Some(Arg::Triple(p)), Some(Arg::Triple(q)), None, None) => {
            ChangeOp::MapA(attribute(p)?, attribute(q)?)
        }
        (OpKind::Move, Some(Arg::Id(c)), Some(Arg::Id(f)), Some(Arg::Id(t)), None) => {
            ChangeOp::Move { concept: concept(c)?, from: concept(f)?, to: concept(t)? }
        }
        (OpKind::AddLeaf, Some(Arg::Id(c)), Some(Arg::Set(s)), None, None) => {
            ChangeOp::AddLeaf(concept(c)?, concept_set(s)?)
        }
        (OpKind::DelLeaf, Some(Arg::Id(c)), Some(Arg::Set(s)), None, None) => {
            ChangeOp::DelLeaf(concept(c)?, concept_set(s)?)
        }
        (OpKind::Split, Some(Arg::Id(c)), Some(Arg::Set(s)), None, None) => ChangeOp::Split(concept(c)?, concept_set(s)?),
        (OpKind::AddSubGraph, Some(Arg::Id(c)), Some(Arg::Set(s)), None, None) => {
            ChangeOp::AddSubGraph(concept(c)?, concept_set(s)?)
        }
        (OpKind::DelSubGraph, Some(Arg::Id(c)), Some(Arg::Set(s)), None, None) => {
            ChangeOp::DelSubGraph(concept(c)?, concept_set(s)?)
        }
        (OpKind::Merge, Some(Arg::Set(s)), Some(Arg::Id(c)), None, None) => ChangeOp::Merge(concept_set(s)?, concept(c)?),
        _ => return Err(mismatch()),
    };
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_running_example_lines() {
        let op = parse_op("merge({CD-RW,DVD-ROM,Other},Other)").unwrap();
        match &op {
            ChangeOp::Merge(s, t) => {
                assert_eq!(s.len(), 3);
                assert_eq!(t.as_str(), "Other");
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_op("addC(Blu-ray)").unwrap(), ChangeOp::AddC(ConceptId::new("Blu-ray").unwrap()));
        let r = parse_op("addR((\"Solid State Disks\",subCatOf,\"Drives & Storage\"))").unwrap();
        assert_eq!(r.to_string(), "addR((\"Solid State Disks\",subCatOf,\"Drives & Storage\"))");
    }

    #[test]
    fn rejects_bad_ops() {
        assert!(parse_op("frob(x)").unwrap_err().contains("unknown op name"));
        assert!(parse_op("addC(a,b)").unwrap_err().contains("does not take"));
        assert!(parse_op("merge({a,},c)").unwrap_err().contains("malformed set literal"));
        assert!(parse_op("merge({},c)").is_err());
        assert!(parse_op("addC(a)x").is_err());
        assert!(parse_op("addC(\"a)").is_err());
    }

    #[test]
    fn document_roundtrip() {
        let doc = "#evomap-diff v1 kind=basic\n#versions\told\tnew\naddC(x)\tby=b1\ndelC(y)\tby=b2\n";
        let d = parse_diff(doc).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.old_label(), "old");
        assert_eq!(serialize_diff(&d), doc);
        assert!(parse_diff("addC(x)\n").is_err());
        assert!(parse_diff("#evomap-diff v1 kind=basic\naddC(x)\naddC(x)\n").is_err());
    }

    #[test]
    fn lineage_survives() {
        let doc = "#evomap-diff v1 kind=compact\n#phase basic\naddC(x)\t@0\tby=b1\telim=c5\n\
                   addR((x,is_a,r))\t@1\tby=b6\telim=c5\n#phase complex\naddLeaf(x,{r})\t@2\tby=c5\tfrom=@0,@1\n";
        let d = parse_diff(doc).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.expand_to_basic().unwrap().len(), 2);
        assert_eq!(serialize_diff(&d), doc);
        let cyclic = "#evomap-diff v1 kind=compact\naddLeaf(x,{r})\t@0\tfrom=@1\naddLeaf(y,{r})\t@1\tfrom=@0\n";
        assert!(parse_diff(cyclic).is_err());
    }
}
