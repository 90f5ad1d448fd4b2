//! Applying basic diffs to ontology versions, and the forward/backward
//! roundtrip check.

use std::collections::BTreeSet;

use crate::change::{ChangeOp, DiffMapping, OpKind};
use crate::engine::{diff_basic_gen, EngineOptions};
use crate::error::MigrationError;
use crate::matching::MatchMapping;
use crate::ontology::{validate, Attribute, ConceptId, Ontology, Relationship};
use crate::rules::Catalog;

/// Kinds in the order they are executed.
pub const PERFORM_ORDER: [OpKind; 9] = [
    OpKind::DelA,
    OpKind::DelR,
    OpKind::DelC,
    OpKind::MapC,
    OpKind::MapA,
    OpKind::MapR,
    OpKind::AddC,
    OpKind::AddA,
    OpKind::AddR,
];

#[derive(Debug, Clone, Copy, Default)]
pub struct MigrateOptions {
    /// Downgrade "already absent" deletions and "already present" additions
    /// to warnings.
    pub lenient: bool,
}

#[derive(Debug, Clone)]
pub struct Migration {
    pub ontology: Ontology,
    pub warnings: Vec<String>,
}

struct State {
    concepts: BTreeSet<ConceptId>,
    attributes: BTreeSet<Attribute>,
    relationships: BTreeSet<Relationship>,
    lenient: bool,
    warnings: Vec<String>,
}

impl State {
    fn problem(&mut self, op: &ChangeOp, what: &str) -> Result<(), MigrationError> {
        let message = format!("{op}: {what}");
        if self.lenient {
            self.warnings.push(message);
            Ok(())
        } else {
            Err(MigrationError::Inconsistent(message))
        }
    }
}

fn remove<T: Ord>(set: &mut BTreeSet<T>, item: &T) -> bool {
    set.remove(item)
}

/// Applies a basic diff to `o`, grouped by kind in [`PERFORM_ORDER`].
///
/// Maps of concepts run in two sub-passes: every domain concept is removed,
/// then every range concept inserted. The result must validate.
pub fn ont_version_mig(o: &Ontology, d: &DiffMapping, options: MigrateOptions) -> Result<Migration, MigrationError> {
    if let Some((_, op)) = d.live().find(|(_, op)| !op.is_basic()) {
        return Err(MigrationError::NotBasic(op.to_string()));
    }
    let (label, concepts, attributes, relationships) = o.clone().into_parts();
    let mut st = State { concepts, attributes, relationships, lenient: options.lenient, warnings: Vec::new() };

    for kind in PERFORM_ORDER {
        if kind == OpKind::MapC {
            let ops: Vec<&ChangeOp> = d.live_of(kind).map(|(_, op)| op).collect();
            let domains: BTreeSet<&ConceptId> =
                ops.iter().filter_map(|op| if let ChangeOp::MapC(a, _) = op { Some(a) } else { None }).collect();
            for a in domains {
                if !st.concepts.remove(a) {
                    let op = ops.iter().find(|op| matches!(op, ChangeOp::MapC(x, _) if x == a)).expect("domain op");
                    st.problem(op, "domain concept absent")?;
                }
            }
            let mut inserted = BTreeSet::new();
            for op in ops {
                let ChangeOp::MapC(_, b) = op else { unreachable!() };
                if inserted.insert(b) && !st.concepts.insert(b.clone()) {
                    st.problem(op, "range concept already present")?;
                }
            }
            continue;
        }
        for (_, op) in d.live_of(kind) {
            match op {
                ChangeOp::DelA(p) => {
                    if !remove(&mut st.attributes, p) {
                        st.problem(op, "attribute absent")?;
                    }
                }
                ChangeOp::DelR(r) => {
                    if !remove(&mut st.relationships, r) {
                        st.problem(op, "relationship absent")?;
                    }
                }
                ChangeOp::DelC(c) => {
                    if !remove(&mut st.concepts, c) {
                        st.problem(op, "concept absent")?;
                    }
                }
                ChangeOp::MapA(p, q) => {
                    if !remove(&mut st.attributes, p) {
                        st.problem(op, "attribute absent")?;
                    }
                    if !st.attributes.insert(q.clone()) {
                        st.problem(op, "attribute already present")?;
                    }
                }
                ChangeOp::MapR(r, s) => {
                    if !remove(&mut st.relationships, r) {
                        st.problem(op, "relationship absent")?;
                    }
                    if !st.relationships.insert(s.clone()) {
                        st.problem(op, "relationship already present")?;
                    }
                }
                ChangeOp::AddC(c) => {
                    if !st.concepts.insert(c.clone()) {
                        st.problem(op, "concept already present")?;
                    }
                }
                ChangeOp::AddA(p) => {
                    if !st.attributes.insert(p.clone()) {
                        st.problem(op, "attribute already present")?;
                    }
                }
                ChangeOp::AddR(r) => {
                    if !st.relationships.insert(r.clone()) {
                        st.problem(op, "relationship already present")?;
                    }
                }
                _ => unreachable!("basic kinds only"),
            }
        }
    }

    let label = if d.new_label().is_empty() { label } else { d.new_label().to_string() };
    let ontology = Ontology::from_parts(label, st.concepts, st.attributes, st.relationships);
    let report = validate(&ontology);
    if !report.is_ok() {
        return Err(MigrationError::InvalidResult(report.to_string()));
    }
    Ok(Migration { ontology, warnings: st.warnings })
}

/// Migrates with any diff: compact diffs are flattened through their lineage first.
pub fn migrate(o: &Ontology, d: &DiffMapping, options: MigrateOptions) -> Result<Migration, MigrationError> {
    if d.live().all(|(_, op)| op.is_basic()) {
        ont_version_mig(o, d, options)
    } else {
        ont_version_mig(o, &d.expand_to_basic()?, options)
    }
}

/// Outcome of [`roundtrip`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripReport {
    /// Size of the basic diff used.
    pub diff_len: usize,
    /// `o1'` element-equals `o2`.
    pub forward_ok: bool,
    /// `o1''` element-equals `o1`.
    pub backward_ok: bool,
    /// `|elements(o1) ∩ elements(o1'')|`.
    pub intersection: usize,
    /// `|elements(o1) ∪ elements(o1'')|`.
    pub union: usize,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.forward_ok && self.backward_ok && self.intersection == self.union
    }

    /// `o1∩o1''=N o1∪o1''=M`
    pub fn summary_line(&self) -> String {
        format!("o1\u{2229}o1''={} o1\u{222a}o1''={}", self.intersection, self.union)
    }
}

/// Migrates `o1` forward with its basic diff to `o2`, then back with the
/// inverse, and compares element sets.
pub fn roundtrip(
    o1: &Ontology,
    o2: &Ontology,
    m: &MatchMapping,
    catalog: &Catalog,
    options: MigrateOptions,
) -> Result<RoundtripReport, MigrationError> {
    let d = diff_basic_gen(o1, o2, m, catalog, &EngineOptions::default())?;
    let forward = ont_version_mig(o1, &d, options)?.ontology;
    let back = ont_version_mig(&forward, &d.invert(), options)?.ontology;
    let (e1, e2) = (o1.elements(), back.elements());
    Ok(RoundtripReport {
        diff_len: d.len(),
        forward_ok: forward.same_elements(o2),
        backward_ok: back.same_elements(o1),
        intersection: e1.intersection(&e2).count(),
        union: e1.union(&e2).count(),
    })
}
