//! Ontology versions: concepts, attributes and relationships forming a DAG.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::ModelError;

/// Identifier of a concept, unique within one ontology version.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptId(String);

impl ConceptId {
    /// Builds an identifier. Rejects empty text, tabs, line breaks and a
    /// leading `#` (which the line-oriented file formats reserve for comments).
    pub fn new(value: impl Into<String>) -> Result<Self, ModelError> {
        let value = value.into();
        if value.is_empty() {
            return Err(ModelError::InvalidConceptId(value, "empty"));
        }
        if value.contains(['\t', '\n', '\r']) {
            return Err(ModelError::InvalidConceptId(value, "contains a tab or line break"));
        }
        if value.starts_with('#') {
            return Err(ModelError::InvalidConceptId(value, "starts with '#'"));
        }
        Ok(Self(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for ConceptId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::borrow::Borrow<str> for ConceptId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// A directed, typed edge from a child (`source`) to a parent (`target`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relationship {
    pub source: ConceptId,
    pub rel_type: String,
    pub target: ConceptId,
}

impl Relationship {
    pub fn new(source: ConceptId, rel_type: impl Into<String>, target: ConceptId) -> Self {
        Self { source, rel_type: rel_type.into(), target }
    }
}

/// A `(concept, name, value)` triple describing a concept.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attribute {
    pub concept: ConceptId,
    pub name: String,
    pub value: String,
}

impl Attribute {
    pub fn new(concept: ConceptId, name: impl Into<String>, value: impl Into<String>) -> Self {
        Self { concept, name: name.into(), value: value.into() }
    }
}

/// One member of the disjoint union `C ⊎ A ⊎ R` used for set comparisons.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Concept(ConceptId),
    Attribute(Attribute),
    Relationship(Relationship),
}

/// An immutable snapshot of an ontology.
///
/// Construction does not enforce the structural invariants; call
/// [`validate`] (or use one of the parsers, which do) before relying on them.
#[derive(Debug, Clone)]
pub struct Ontology {
    version_label: String,
    concepts: BTreeSet<ConceptId>,
    attributes: BTreeSet<Attribute>,
    relationships: BTreeSet<Relationship>,
    children: BTreeMap<ConceptId, BTreeSet<ConceptId>>,
}

impl PartialEq for Ontology {
    fn eq(&self, other: &Self) -> bool {
        self.version_label == other.version_label
            && self.concepts == other.concepts
            && self.attributes == other.attributes
            && self.relationships == other.relationships
    }
}

impl Eq for Ontology {}

impl Ontology {
    pub fn from_parts(
        version_label: impl Into<String>,
        concepts: BTreeSet<ConceptId>,
        attributes: BTreeSet<Attribute>,
        relationships: BTreeSet<Relationship>,
    ) -> Self {
        let mut children: BTreeMap<ConceptId, BTreeSet<ConceptId>> = BTreeMap::new();
        for r in &relationships {
            children.entry(r.target.clone()).or_default().insert(r.source.clone());
        }
        Self { version_label: version_label.into(), concepts, attributes, relationships, children }
    }

    pub fn empty(version_label: impl Into<String>) -> Self {
        Self::from_parts(version_label, BTreeSet::new(), BTreeSet::new(), BTreeSet::new())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.version_label = label.into();
        self
    }

    pub fn version_label(&self) -> &str {
        &self.version_label
    }

    pub fn concepts(&self) -> &BTreeSet<ConceptId> {
        &self.concepts
    }

    pub fn attributes(&self) -> &BTreeSet<Attribute> {
        &self.attributes
    }

    pub fn relationships(&self) -> &BTreeSet<Relationship> {
        &self.relationships
    }

    pub fn contains(&self, c: &str) -> bool {
        self.concepts.contains(c)
    }

    /// Decomposes the ontology back into its three element sets.
    pub fn into_parts(self) -> (String, BTreeSet<ConceptId>, BTreeSet<Attribute>, BTreeSet<Relationship>) {
        (self.version_label, self.concepts, self.attributes, self.relationships)
    }

    /// Outgoing relationships of `c` (edges where `c` is the child end).
    pub fn relationships_from<'a>(&'a self, c: &'a ConceptId) -> impl Iterator<Item = &'a Relationship> + 'a {
        self.relationships.range(from_bound(c)..).take_while(move |r| &r.source == c)
    }

    /// Parents and children of `c`.
    pub fn neighbors(&self, c: &str) -> Result<Neighbors, ModelError> {
        let Some(c) = self.concepts.get(c) else {
            return Err(ModelError::UnknownConcept(c.to_string()));
        };
        let parents = self.relationships_from(c).map(|r| r.target.clone()).collect();
        let children = self.children.get(c).cloned().unwrap_or_default();
        Ok(Neighbors { parents, children })
    }

    /// Concepts that are no relationship's source.
    pub fn roots(&self) -> Vec<&ConceptId> {
        self.concepts.iter().filter(|c| self.relationships_from(c).next().is_none()).collect()
    }

    pub fn is_leaf(&self, c: &str) -> bool {
        self.children.get(c).is_none_or(BTreeSet::is_empty)
    }

    /// All elements as one tagged set.
    pub fn elements(&self) -> BTreeSet<Element> {
        self.concepts
            .iter()
            .cloned()
            .map(Element::Concept)
            .chain(self.attributes.iter().cloned().map(Element::Attribute))
            .chain(self.relationships.iter().cloned().map(Element::Relationship))
            .collect()
    }

    pub fn element_count(&self) -> usize {
        self.concepts.len() + self.attributes.len() + self.relationships.len()
    }

    /// Element-set equality, ignoring the version label.
    pub fn same_elements(&self, other: &Ontology) -> bool {
        self.concepts == other.concepts
            && self.attributes == other.attributes
            && self.relationships == other.relationships
    }

    /// Concepts in topological order (children before parents), or `None`
    /// when the relationship graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<ConceptId>> {
        let (graph, _) = self.graph();
        petgraph::algo::toposort(&graph, None)
            .ok()
            .map(|order| order.into_iter().map(|n| graph[n].clone()).collect())
    }

    fn graph(&self) -> (DiGraph<ConceptId, ()>, BTreeMap<&ConceptId, NodeIndex>) {
        let mut graph = DiGraph::with_capacity(self.concepts.len(), self.relationships.len());
        let mut index = BTreeMap::new();
        for c in &self.concepts {
            index.insert(c, graph.add_node(c.clone()));
        }
        for r in &self.relationships {
            if let (Some(&s), Some(&t)) = (index.get(&r.source), index.get(&r.target)) {
                graph.add_edge(s, t, ());
            }
        }
        (graph, index)
    }
}

fn from_bound(c: &ConceptId) -> Relationship {
    Relationship { source: c.clone(), rel_type: String::new(), target: ConceptId(String::new()) }
}

/// Result of [`Ontology::neighbors`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Neighbors {
    pub parents: BTreeSet<ConceptId>,
    pub children: BTreeSet<ConceptId>,
}

/// A broken ontology invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoRoot,
    /// Members of one strongly connected component, sorted.
    Cycle(Vec<ConceptId>),
    SelfLoop(Relationship),
    DanglingRelationship { relationship: Relationship, missing: ConceptId },
    DanglingAttribute(Attribute),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoRoot => f.write_str("no root"),
            Violation::Cycle(members) => {
                f.write_str("cycle: ")?;
                for (i, c) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            Violation::SelfLoop(r) => write!(f, "self-loop: {}\t{}\t{}", r.source, r.rel_type, r.target),
            Violation::DanglingRelationship { relationship: r, missing } => write!(
                f,
                "relationship {}\t{}\t{} references undeclared concept {missing}",
                r.source, r.rel_type, r.target
            ),
            Violation::DanglingAttribute(a) => {
                write!(f, "attribute {}\t{} references undeclared concept {}", a.concept, a.name, a.concept)
            }
        }
    }
}

/// Non-fatal observations made during validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    MultipleRoots(Vec<ConceptId>),
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::MultipleRoots(roots) => write!(f, "{} roots", roots.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            f.write_str("ok")?;
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        for w in &self.warnings {
            write!(f, " (warning: {w})")?;
        }
        Ok(())
    }
}

/// Checks every ontology invariant. Violations are reported, never raised.
pub fn validate(o: &Ontology) -> ValidationReport {
    let mut report = ValidationReport::default();

    for r in &o.relationships {
        if r.source == r.target {
            report.violations.push(Violation::SelfLoop(r.clone()));
        }
        for end in [&r.source, &r.target] {
            if !o.concepts.contains(end) {
                report.violations.push(Violation::DanglingRelationship {
                    relationship: r.clone(),
                    missing: end.clone(),
                });
            }
        }
    }
    for a in &o.attributes {
        if !o.concepts.contains(&a.concept) {
            report.violations.push(Violation::DanglingAttribute(a.clone()));
        }
    }

    let (graph, _) = o.graph();
    let mut cycles: Vec<Vec<ConceptId>> = tarjan_scc(&graph)
        .into_iter()
        .filter(|scc| scc.len() > 1)
        .map(|scc| {
            let mut members: Vec<ConceptId> = scc.into_iter().map(|n| graph[n].clone()).collect();
            members.sort();
            members
        })
        .collect();
    cycles.sort();
    report.violations.extend(cycles.into_iter().map(Violation::Cycle));

    let roots = o.roots();
    match roots.len() {
        0 => report.violations.push(Violation::NoRoot),
        1 => {}
        _ => report.warnings.push(Warning::MultipleRoots(roots.into_iter().cloned().collect())),
    }
    report
}

/// Tagged element set of `o`; see [`Ontology::elements`].
pub fn elements(o: &Ontology) -> BTreeSet<Element> {
    o.elements()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn cid(s: &str) -> ConceptId {
        ConceptId::new(s).unwrap()
    }

    fn onto(concepts: &[&str], edges: &[(&str, &str)]) -> Ontology {
        Ontology::from_parts(
            "t",
            concepts.iter().map(|c| cid(c)).collect(),
            BTreeSet::new(),
            edges.iter().map(|(s, t)| Relationship::new(cid(s), "is_a", cid(t))).collect(),
        )
    }

    #[test]
    fn concept_id_rules() {
        assert!(ConceptId::new("").is_err());
        assert!(ConceptId::new("a\tb").is_err());
        assert!(ConceptId::new("a\nb").is_err());
        assert!(ConceptId::new("Drives & Storage").is_ok());
    }

    #[test]
    fn empty_ontology_has_no_root() {
        let report = validate(&Ontology::empty("e"));
        assert_eq!(report.violations, vec![Violation::NoRoot]);
        assert_eq!(report.to_string(), "no root");
    }

    #[test]
    fn two_cycle_is_reported() {
        let o = onto(&["a", "b"], &[("a", "b"), ("b", "a")]);
        let report = validate(&o);
        assert!(report.violations.contains(&Violation::Cycle(vec![cid("a"), cid("b")])));
        assert!(report.violations.iter().any(|v| v.to_string() == "cycle: a,b"));
        assert!(o.topological_order().is_none());
    }

    #[test]
    fn dangling_and_self_loop() {
        let o = onto(&["a"], &[("a", "x"), ("a", "a")]);
        let report = validate(&o);
        assert!(report.violations.iter().any(|v| matches!(v, Violation::SelfLoop(_))));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DanglingRelationship { missing, .. } if missing.as_str() == "x")));
    }

    #[test]
    fn multiple_roots_warn_only() {
        let report = validate(&onto(&["a", "b"], &[]));
        assert!(report.is_ok());
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn neighbors_follow_edge_direction() {
        let o = onto(&["r", "x", "y"], &[("x", "r"), ("y", "x")]);
        let n = o.neighbors("x").unwrap();
        assert_eq!(n.parents, [cid("r")].into());
        assert_eq!(n.children, [cid("y")].into());
        assert!(o.neighbors("r").unwrap().parents.is_empty());
        assert!(matches!(o.neighbors("zz"), Err(ModelError::UnknownConcept(_))));
        assert_eq!(o.topological_order().unwrap().first().unwrap().as_str(), "y");
    }

    #[test]
    fn elements_identity() {
        let o = onto(&["r", "x"], &[("x", "r")]);
        let e = elements(&o);
        assert_eq!(e.len(), 3);
        assert_eq!(e.intersection(&elements(&o)).count(), e.len());
        assert!(elements(&Ontology::empty("e")).is_empty());
    }
}
