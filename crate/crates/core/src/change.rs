//! Change operations, their inverses, and the working set of operations
//! produced by a diff run together with its lineage.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use crate::error::LineageError;
use crate::ontology::{Attribute, ConceptId, Relationship};

/// Non-empty, code-point-ordered set of concepts used as an op argument.
pub type ConceptSet = BTreeSet<ConceptId>;

/// The 19 operation kinds, basic kinds first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    AddC,
    DelC,
    MapC,
    AddR,
    DelR,
    MapR,
    AddA,
    DelA,
    MapA,
    Substitute,
    Move,
    ToObsolete,
    RevokeObsolete,
    AddLeaf,
    DelLeaf,
    Merge,
    Split,
    AddSubGraph,
    DelSubGraph,
}

impl OpKind {
    pub const ALL: [OpKind; 19] = [
        OpKind::AddC,
        OpKind::DelC,
        OpKind::MapC,
        OpKind::AddR,
        OpKind::DelR,
        OpKind::MapR,
        OpKind::AddA,
        OpKind::DelA,
        OpKind::MapA,
        OpKind::Substitute,
        OpKind::Move,
        OpKind::ToObsolete,
        OpKind::RevokeObsolete,
        OpKind::AddLeaf,
        OpKind::DelLeaf,
        OpKind::Merge,
        OpKind::Split,
        OpKind::AddSubGraph,
        OpKind::DelSubGraph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::AddC => "addC",
            OpKind::DelC => "delC",
            OpKind::MapC => "mapC",
            OpKind::AddR => "addR",
            OpKind::DelR => "delR",
            OpKind::MapR => "mapR",
            OpKind::AddA => "addA",
            OpKind::DelA => "delA",
            OpKind::MapA => "mapA",
            OpKind::Substitute => "substitute",
            OpKind::Move => "move",
            OpKind::ToObsolete => "toObsolete",
            OpKind::RevokeObsolete => "revokeObsolete",
            OpKind::AddLeaf => "addLeaf",
            OpKind::DelLeaf => "delLeaf",
            OpKind::Merge => "merge",
            OpKind::Split => "split",
            OpKind::AddSubGraph => "addSubGraph",
            OpKind::DelSubGraph => "delSubGraph",
        }
    }

    pub fn from_name(name: &str) -> Option<OpKind> {
        OpKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn is_basic(self) -> bool {
        (self as usize) < 9
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A basic or complex change operation.
///
/// Derived equality coincides with equality of the canonical text form
/// produced by `Display`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChangeOp {
    AddC(ConceptId),
    DelC(ConceptId),
    MapC(ConceptId, ConceptId),
    AddR(Relationship),
    DelR(Relationship),
    MapR(Relationship, Relationship),
    AddA(Attribute),
    DelA(Attribute),
    MapA(Attribute, Attribute),
    Substitute(ConceptId, ConceptId),
    Move { concept: ConceptId, from: ConceptId, to: ConceptId },
    ToObsolete(ConceptId),
    RevokeObsolete(ConceptId),
    AddLeaf(ConceptId, ConceptSet),
    DelLeaf(ConceptId, ConceptSet),
    Merge(ConceptSet, ConceptId),
    Split(ConceptId, ConceptSet),
    AddSubGraph(ConceptId, ConceptSet),
    DelSubGraph(ConceptId, ConceptSet),
}

impl ChangeOp {
    pub fn kind(&self) -> OpKind {
        match self {
            ChangeOp::AddC(_) => OpKind::AddC,
            ChangeOp::DelC(_) => OpKind::DelC,
            ChangeOp::MapC(..) => OpKind::MapC,
            ChangeOp::AddR(_) => OpKind::AddR,
            ChangeOp::DelR(_) => OpKind::DelR,
            ChangeOp::MapR(..) => OpKind::MapR,
            ChangeOp::AddA(_) => OpKind::AddA,
            ChangeOp::DelA(_) => OpKind::DelA,
            ChangeOp::MapA(..) => OpKind::MapA,
            ChangeOp::Substitute(..) => OpKind::Substitute,
            ChangeOp::Move { .. } => OpKind::Move,
            ChangeOp::ToObsolete(_) => OpKind::ToObsolete,
            ChangeOp::RevokeObsolete(_) => OpKind::RevokeObsolete,
            ChangeOp::AddLeaf(..) => OpKind::AddLeaf,
            ChangeOp::DelLeaf(..) => OpKind::DelLeaf,
            ChangeOp::Merge(..) => OpKind::Merge,
            ChangeOp::Split(..) => OpKind::Split,
            ChangeOp::AddSubGraph(..) => OpKind::AddSubGraph,
            ChangeOp::DelSubGraph(..) => OpKind::DelSubGraph,
        }
    }

    pub fn is_basic(&self) -> bool {
        self.kind().is_basic()
    }

    /// Canonical text form; two ops are equal iff these strings are equal.
    pub fn canonical(&self) -> String {
        self.to_string()
    }

    /// The inverse operation.
    pub fn invert(&self) -> ChangeOp {
        match self.clone() {
            ChangeOp::AddC(c) => ChangeOp::DelC(c),
            ChangeOp::DelC(c) => ChangeOp::AddC(c),
            ChangeOp::MapC(a, b) => ChangeOp::MapC(b, a),
            ChangeOp::AddR(r) => ChangeOp::DelR(r),
            ChangeOp::DelR(r) => ChangeOp::AddR(r),
            ChangeOp::MapR(r, s) => ChangeOp::MapR(s, r),
            ChangeOp::AddA(a) => ChangeOp::DelA(a),
            ChangeOp::DelA(a) => ChangeOp::AddA(a),
            ChangeOp::MapA(p, q) => ChangeOp::MapA(q, p),
            ChangeOp::Substitute(a, b) => ChangeOp::Substitute(b, a),
            ChangeOp::Move { concept, from, to } => ChangeOp::Move { concept, from: to, to: from },
            ChangeOp::ToObsolete(c) => ChangeOp::RevokeObsolete(c),
            ChangeOp::RevokeObsolete(c) => ChangeOp::ToObsolete(c),
            ChangeOp::AddLeaf(c, p) => ChangeOp::DelLeaf(c, p),
            ChangeOp::DelLeaf(c, p) => ChangeOp::AddLeaf(c, p),
            ChangeOp::Merge(sources, target) => ChangeOp::Split(target, sources),
            ChangeOp::Split(source, targets) => ChangeOp::Merge(targets, source),
            ChangeOp::AddSubGraph(root, sub) => ChangeOp::DelSubGraph(root, sub),
            ChangeOp::DelSubGraph(root, sub) => ChangeOp::AddSubGraph(root, sub),
        }
    }
}

/// Free-function form of [`ChangeOp::invert`].
pub fn invert_op(op: &ChangeOp) -> ChangeOp {
    op.invert()
}

/// Characters that force an argument to be double-quoted.
fn needs_quotes(s: &str) -> bool {
    s.is_empty() || s.chars().any(|c| matches!(c, '(' | ')' | '{' | '}' | ',' | '"') || c.is_whitespace())
}

pub(crate) fn write_arg(out: &mut impl fmt::Write, s: &str) -> fmt::Result {
    if needs_quotes(s) {
        out.write_char('"')?;
        for c in s.chars() {
            if c == '"' {
                out.write_str("\"\"")?;
            } else {
                out.write_char(c)?;
            }
        }
        out.write_char('"')
    } else {
        out.write_str(s)
    }
}

fn write_set(out: &mut impl fmt::Write, set: &ConceptSet) -> fmt::Result {
    out.write_char('{')?;
    for (i, c) in set.iter().enumerate() {
        if i > 0 {
            out.write_char(',')?;
        }
        write_arg(out, c.as_str())?;
    }
    out.write_char('}')
}

fn write_rel(out: &mut impl fmt::Write, r: &Relationship) -> fmt::Result {
    out.write_char('(')?;
    write_arg(out, r.source.as_str())?;
    out.write_char(',')?;
    write_arg(out, &r.rel_type)?;
    out.write_char(',')?;
    write_arg(out, r.target.as_str())?;
    out.write_char(')')
}

fn write_attr(out: &mut impl fmt::Write, a: &Attribute) -> fmt::Result {
    out.write_char('(')?;
    write_arg(out, a.concept.as_str())?;
    out.write_char(',')?;
    write_arg(out, &a.name)?;
    out.write_char(',')?;
    write_arg(out, &a.value)?;
    out.write_char(')')
}

impl fmt::Display for ChangeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().name())?;
        f.write_char('(')?;
        match self {
            ChangeOp::AddC(c) | ChangeOp::DelC(c) | ChangeOp::ToObsolete(c) | ChangeOp::RevokeObsolete(c) => {
                write_arg(f, c.as_str())?
            }
            ChangeOp::MapC(a, b) | ChangeOp::Substitute(a, b) => {
                write_arg(f, a.as_str())?;
                f.write_char(',')?;
                write_arg(f, b.as_str())?;
            }
            ChangeOp::AddR(r) | ChangeOp::DelR(r) => write_rel(f, r)?,
            ChangeOp::MapR(r, s) => {
                write_rel(f, r)?;
                f.write_char(',')?;
                write_rel(f, s)?;
            }
            ChangeOp::AddA(a) | ChangeOp::DelA(a) => write_attr(f, a)?,
            ChangeOp::MapA(p, q) => {
                write_attr(f, p)?;
                f.write_char(',')?;
                write_attr(f, q)?;
            }
            ChangeOp::Move { concept, from, to } => {
                write_arg(f, concept.as_str())?;
                f.write_char(',')?;
                write_arg(f, from.as_str())?;
                f.write_char(',')?;
                write_arg(f, to.as_str())?;
            }
            ChangeOp::AddLeaf(c, set)
            | ChangeOp::DelLeaf(c, set)
            | ChangeOp::Split(c, set)
            | ChangeOp::AddSubGraph(c, set)
            | ChangeOp::DelSubGraph(c, set) => {
                write_arg(f, c.as_str())?;
                f.write_char(',')?;
                write_set(f, set)?;
            }
            ChangeOp::Merge(set, c) => {
                write_set(f, set)?;
                f.write_char(',')?;
                write_arg(f, c.as_str())?;
            }
        }
        f.write_char(')')
    }
}

/// Identifier of an operation within one [`DiffMapping`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpId(pub u32);

impl fmt::Display for OpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

/// Rule phase; also records in which phase an operation was created.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Basic,
    Complex,
    Aggregation,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Basic => "basic",
            Phase::Complex => "complex",
            Phase::Aggregation => "aggregation",
        }
    }

    pub fn from_name(s: &str) -> Option<Phase> {
        [Phase::Basic, Phase::Complex, Phase::Aggregation].into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiffKind {
    Basic,
    Working,
    Compact,
}

impl DiffKind {
    pub fn name(self) -> &'static str {
        match self {
            DiffKind::Basic => "basic",
            DiffKind::Working => "working",
            DiffKind::Compact => "compact",
        }
    }

    pub fn from_name(s: &str) -> Option<DiffKind> {
        [DiffKind::Basic, DiffKind::Working, DiffKind::Compact].into_iter().find(|k| k.name() == s)
    }
}

/// One operation in a [`DiffMapping`] together with its ledger entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpRecord {
    pub op: ChangeOp,
    pub phase: Phase,
    pub created_by: Option<String>,
    /// `Some(rule)` once the op has been eliminated.
    pub eliminated_by: Option<String>,
    /// Lineage: ops this one replaced.
    pub consumed: Vec<OpId>,
    canonical: String,
}

impl OpRecord {
    pub fn is_live(&self) -> bool {
        self.eliminated_by.is_none()
    }

    pub fn canonical(&self) -> &str {
        &self.canonical
    }
}

/// A parsed record: op, phase, creating rule, eliminating rule, consumed ops.
pub(crate) type RawRecord = (ChangeOp, Phase, Option<String>, Option<String>, Vec<OpId>);

/// A set of change operations with unique ids, liveness and lineage.
///
/// Live operations are pairwise distinct. Eliminated operations stay in the
/// mapping so that complex operations can be flattened back to basic ones.
#[derive(Debug, Clone)]
pub struct DiffMapping {
    kind: DiffKind,
    old_label: String,
    new_label: String,
    records: Vec<OpRecord>,
    live: HashMap<ChangeOp, OpId>,
    live_by_kind: Vec<BTreeSet<(String, OpId)>>,
}

impl PartialEq for DiffMapping {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.old_label == other.old_label
            && self.new_label == other.new_label
            && self.records == other.records
    }
}

impl Eq for DiffMapping {}

impl DiffMapping {
    pub fn new(kind: DiffKind, old_label: impl Into<String>, new_label: impl Into<String>) -> Self {
        Self {
            kind,
            old_label: old_label.into(),
            new_label: new_label.into(),
            records: Vec::new(),
            live: HashMap::new(),
            live_by_kind: vec![BTreeSet::new(); OpKind::ALL.len()],
        }
    }

    /// A mapping holding `ops` as live, lineage-free operations.
    pub fn from_ops(kind: DiffKind, ops: impl IntoIterator<Item = ChangeOp>) -> Self {
        let mut d = Self::new(kind, "", "");
        for op in ops {
            d.create(op, Phase::Basic, None, Vec::new());
        }
        d
    }

    pub fn kind(&self) -> DiffKind {
        self.kind
    }

    pub fn set_kind(&mut self, kind: DiffKind) {
        self.kind = kind;
    }

    pub fn old_label(&self) -> &str {
        &self.old_label
    }

    pub fn new_label(&self) -> &str {
        &self.new_label
    }

    pub fn set_labels(&mut self, old: impl Into<String>, new: impl Into<String>) {
        self.old_label = old.into();
        self.new_label = new.into();
    }

    pub fn records(&self) -> &[OpRecord] {
        &self.records
    }

    pub fn record(&self, id: OpId) -> Option<&OpRecord> {
        self.records.get(id.0 as usize)
    }

    pub fn ids(&self) -> impl Iterator<Item = OpId> + '_ {
        (0..self.records.len() as u32).map(OpId)
    }

    /// Number of live operations.
    pub fn len(&self) -> usize {
        self.live.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    pub fn live_id(&self, op: &ChangeOp) -> Option<OpId> {
        self.live.get(op).copied()
    }

    pub fn contains(&self, op: &ChangeOp) -> bool {
        self.live.contains_key(op)
    }

    /// Live operations with their ids, in canonical order per kind
    /// (kinds in [`OpKind::ALL`] order).
    pub fn live(&self) -> impl Iterator<Item = (OpId, &ChangeOp)> + '_ {
        self.live_by_kind.iter().flatten().map(|(_, id)| (*id, &self.records[id.0 as usize].op))
    }

    /// Live operations of one kind in canonical order.
    pub fn live_of(&self, kind: OpKind) -> impl Iterator<Item = (OpId, &ChangeOp)> + '_ {
        self.live_by_kind[kind.index()].iter().map(|(_, id)| (*id, &self.records[id.0 as usize].op))
    }

    pub fn live_count(&self, kind: OpKind) -> usize {
        self.live_by_kind[kind.index()].len()
    }

    /// The live operations as a set, sorted by canonical form.
    pub fn live_set(&self) -> BTreeSet<String> {
        self.live_by_kind.iter().flatten().map(|(c, _)| c.clone()).collect()
    }

    pub fn live_ops(&self) -> BTreeSet<ChangeOp> {
        self.live().map(|(_, op)| op.clone()).collect()
    }

    /// Adds a live operation. If an equal op is already live, no new record
    /// is made; the lineage is merged into the existing one and its id returned.
    pub fn create(
        &mut self,
        op: ChangeOp,
        phase: Phase,
        created_by: Option<&str>,
        consumed: Vec<OpId>,
    ) -> (OpId, bool) {
        if let Some(&id) = self.live.get(&op) {
            let rec = &mut self.records[id.0 as usize];
            for c in consumed {
                if c != id && !rec.consumed.contains(&c) {
                    rec.consumed.push(c);
                }
            }
            return (id, false);
        }
        let id = OpId(self.records.len() as u32);
        let canonical = op.canonical();
        self.live_by_kind[op.kind().index()].insert((canonical.clone(), id));
        self.live.insert(op.clone(), id);
        self.records.push(OpRecord {
            op,
            phase,
            created_by: created_by.map(str::to_string),
            eliminated_by: None,
            consumed,
            canonical,
        });
        (id, true)
    }

    /// Marks a live operation as eliminated. Returns false if it was not live.
    pub fn eliminate(&mut self, id: OpId, by: &str) -> bool {
        let Some(rec) = self.records.get_mut(id.0 as usize) else {
            return false;
        };
        if rec.eliminated_by.is_some() {
            return false;
        }
        rec.eliminated_by = Some(by.to_string());
        self.live.remove(&rec.op);
        self.live_by_kind[rec.op.kind().index()].remove(&(rec.canonical.clone(), id));
        true
    }

    /// Lineage edges `(created, consumed)`.
    pub fn lineage_edges(&self) -> impl Iterator<Item = (OpId, OpId)> + '_ {
        self.records
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.consumed.iter().map(move |c| (OpId(i as u32), *c)))
    }

    pub fn has_history(&self) -> bool {
        self.records.iter().any(|r| !r.consumed.is_empty() || !r.is_live())
    }

    /// Basic operations underlying `id`.
    ///
    /// Basic ops are leaves; complex ops are followed through their lineage.
    pub fn lineage_leaves(&self, id: OpId) -> Result<BTreeSet<ChangeOp>, LineageError> {
        let mut out = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(cur) = stack.pop() {
            if !seen.insert(cur) {
                continue;
            }
            let rec = self.record(cur).ok_or(LineageError::UnknownOp(cur))?;
            if rec.op.is_basic() {
                out.insert(rec.op.clone());
            } else if rec.consumed.is_empty() {
                return Err(LineageError::MissingLineage(rec.canonical.clone()));
            } else {
                stack.extend(rec.consumed.iter().copied());
            }
        }
        Ok(out)
    }

    /// Flattens every live operation to its basic lineage leaves.
    pub fn expand_to_basic(&self) -> Result<DiffMapping, LineageError> {
        let mut ops = BTreeSet::new();
        for (id, _) in self.live() {
            ops.extend(self.lineage_leaves(id)?);
        }
        let mut out = DiffMapping::from_ops(DiffKind::Basic, ops);
        out.set_labels(self.old_label.clone(), self.new_label.clone());
        Ok(out)
    }

    /// Replaces every operation by its inverse and swaps the version labels.
    /// Ids, lineage and liveness are preserved.
    pub fn invert(&self) -> DiffMapping {
        let mut out = DiffMapping::new(self.kind, self.new_label.clone(), self.old_label.clone());
        for rec in &self.records {
            let op = rec.op.invert();
            let canonical = op.canonical();
            let id = OpId(out.records.len() as u32);
            if rec.is_live() {
                out.live_by_kind[op.kind().index()].insert((canonical.clone(), id));
                out.live.insert(op.clone(), id);
            }
            out.records.push(OpRecord {
                op,
                phase: rec.phase,
                created_by: rec.created_by.clone(),
                eliminated_by: rec.eliminated_by.clone(),
                consumed: rec.consumed.clone(),
                canonical,
            });
        }
        out
    }

    /// Renumbers ops by `(phase, canonical form, old id)`, the order used for
    /// serialization. Lineage lists are sorted by the new ids.
    pub fn canonicalized(&self) -> DiffMapping {
        let mut order: Vec<usize> = (0..self.records.len()).collect();
        order.sort_by(|&a, &b| {
            let (ra, rb) = (&self.records[a], &self.records[b]);
            (ra.phase, &ra.canonical, a).cmp(&(rb.phase, &rb.canonical, b))
        });
        let mut new_id = vec![OpId(0); self.records.len()];
        for (pos, &old) in order.iter().enumerate() {
            new_id[old] = OpId(pos as u32);
        }
        let mut out = DiffMapping::new(self.kind, self.old_label.clone(), self.new_label.clone());
        for &old in &order {
            let rec = &self.records[old];
            let id = OpId(out.records.len() as u32);
            if rec.is_live() {
                out.live_by_kind[rec.op.kind().index()].insert((rec.canonical.clone(), id));
                out.live.insert(rec.op.clone(), id);
            }
            let mut consumed: Vec<OpId> = rec.consumed.iter().map(|c| new_id[c.0 as usize]).collect();
            consumed.sort();
            out.records.push(OpRecord { consumed, ..rec.clone() });
        }
        out
    }

    /// Builds a mapping from fully specified records (used by the parser).
    /// Fails if two live records are equal or lineage is cyclic/out of range.
    pub(crate) fn from_records(
        kind: DiffKind,
        old_label: String,
        new_label: String,
        records: Vec<RawRecord>,
    ) -> Result<DiffMapping, String> {
        let mut out = DiffMapping::new(kind, old_label, new_label);
        let n = records.len();
        for (op, phase, created_by, eliminated_by, consumed) in records {
            if let Some(bad) = consumed.iter().find(|c| c.0 as usize >= n) {
                return Err(format!("lineage reference {bad} out of range"));
            }
            let canonical = op.canonical();
            let id = OpId(out.records.len() as u32);
            if eliminated_by.is_none() {
                if out.live.contains_key(&op) {
                    return Err(format!("duplicate live op {canonical}"));
                }
                out.live_by_kind[op.kind().index()].insert((canonical.clone(), id));
                out.live.insert(op.clone(), id);
            }
            out.records.push(OpRecord { op, phase, created_by, eliminated_by, consumed, canonical });
        }
        if out.lineage_has_cycle() {
            return Err("lineage graph has a cycle".to_string());
        }
        Ok(out)
    }

    fn lineage_has_cycle(&self) -> bool {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.records.len()];
        for start in 0..self.records.len() {
            if state[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            state[start] = 1;
            while let Some((node, idx)) = stack.pop() {
                let consumed = &self.records[node].consumed;
                if idx < consumed.len() {
                    stack.push((node, idx + 1));
                    let next = consumed[idx].0 as usize;
                    match state[next] {
                        0 => {
                            state[next] = 1;
                            stack.push((next, 0));
                        }
                        1 => return true,
                        _ => {}
                    }
                } else {
                    state[node] = 2;
                }
            }
        }
        false
    }

    /// Per-rule ledger: `(created_by, canonical op, eliminated_by)`.
    pub fn trace(&self) -> Vec<(Option<&str>, &str, Option<&str>)> {
        self.records
            .iter()
            .map(|r| (r.created_by.as_deref(), r.canonical.as_str(), r.eliminated_by.as_deref()))
            .collect()
    }

    /// Counts of live operations per kind.
    pub fn kind_counts(&self) -> BTreeMap<OpKind, usize> {
        OpKind::ALL.into_iter().map(|k| (k, self.live_count(k))).collect()
    }
}

/// Free-function form of [`DiffMapping::invert`].
pub fn invert_diff(d: &DiffMapping) -> DiffMapping {
    d.invert()
}

/// Free-function form of [`DiffMapping::expand_to_basic`].
pub fn expand_to_basic(d: &DiffMapping) -> Result<DiffMapping, LineageError> {
    d.expand_to_basic()
}
