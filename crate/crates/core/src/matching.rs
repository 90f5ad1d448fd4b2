//! Match mappings between two versions: id-based, label/root-path based, or
//! loaded from a file, plus referential-integrity validation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::ontology::{ConceptId, Ontology};

/// A set of `(old, new)` concept correspondences. A concept may take part
/// in several pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchMapping {
    pairs: BTreeSet<(ConceptId, ConceptId)>,
    targets: BTreeMap<ConceptId, BTreeSet<ConceptId>>,
    sources: BTreeMap<ConceptId, BTreeSet<ConceptId>>,
}

impl MatchMapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (ConceptId, ConceptId)>) -> Self {
        let mut m = Self::new();
        for (a, b) in pairs {
            m.insert(a, b);
        }
        m
    }

    pub fn insert(&mut self, old: ConceptId, new: ConceptId) -> bool {
        if !self.pairs.insert((old.clone(), new.clone())) {
            return false;
        }
        self.targets.entry(old.clone()).or_default().insert(new.clone());
        self.sources.entry(new).or_default().insert(old);
        true
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, old: &str, new: &str) -> bool {
        self.targets.get(old).is_some_and(|t| t.contains(new))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&ConceptId, &ConceptId)> + '_ {
        self.pairs.iter().map(|(a, b)| (a, b))
    }

    /// New concepts matched from `old`.
    pub fn targets_of(&self, old: &str) -> Option<&BTreeSet<ConceptId>> {
        self.targets.get(old)
    }

    /// Old concepts matched to `new`.
    pub fn sources_of(&self, new: &str) -> Option<&BTreeSet<ConceptId>> {
        self.sources.get(new)
    }

    /// `(old, targets)` in old-id order.
    pub fn targets(&self) -> impl Iterator<Item = (&ConceptId, &BTreeSet<ConceptId>)> + '_ {
        self.targets.iter()
    }

    /// `(new, sources)` in new-id order.
    pub fn sources(&self) -> impl Iterator<Item = (&ConceptId, &BTreeSet<ConceptId>)> + '_ {
        self.sources.iter()
    }

    /// The mapping with every pair reversed.
    pub fn inverted(&self) -> MatchMapping {
        MatchMapping::from_pairs(self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())))
    }
}

/// Pairs every concept id present in both versions with itself.
pub fn match_by_id(o1: &Ontology, o2: &Ontology) -> MatchMapping {
    MatchMapping::from_pairs(o1.concepts().intersection(o2.concepts()).map(|c| (c.clone(), c.clone())))
}

/// Concepts with more root paths than this get no signature and never pair.
pub const MAX_ROOT_PATHS: usize = 256;

fn normalize(label: &str) -> String {
    label.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Sorted list of every root path (root first) as normalized labels, or
/// `None` when the path count exceeds [`MAX_ROOT_PATHS`] or the graph is cyclic.
fn root_path_signatures(o: &Ontology, label_attr: &str) -> HashMap<ConceptId, Option<Vec<Vec<String>>>> {
    let mut labels: HashMap<&ConceptId, String> = HashMap::new();
    for a in o.attributes() {
        if a.name == label_attr {
            // Deterministic choice when a concept has several labels.
            let n = normalize(&a.value);
            labels.entry(&a.concept).and_modify(|cur| if n < *cur { *cur = n.clone() }).or_insert(n);
        }
    }
    let label = |c: &ConceptId| labels.get(c).cloned().unwrap_or_else(|| normalize(c.as_str()));

    let mut out: HashMap<ConceptId, Option<Vec<Vec<String>>>> = HashMap::new();
    let Some(mut order) = o.topological_order() else {
        return o.concepts().iter().map(|c| (c.clone(), None)).collect();
    };
    order.reverse(); // parents first
    for c in order {
        let own = label(&c);
        let parents: Vec<&ConceptId> = o.relationships_from(&c).map(|r| &r.target).collect();
        let sig = if parents.is_empty() {
            Some(vec![vec![own]])
        } else {
            let mut paths = Vec::new();
            let mut overflow = false;
            for p in parents.into_iter().collect::<BTreeSet<_>>() {
                match out.get(p).and_then(Option::as_ref) {
                    Some(ps) if paths.len() + ps.len() <= MAX_ROOT_PATHS => {
                        paths.extend(ps.iter().map(|path| {
                            let mut path = path.clone();
                            path.push(own.clone());
                            path
                        }));
                    }
                    _ => {
                        overflow = true;
                        break;
                    }
                }
            }
            (!overflow).then(|| {
                paths.sort();
                paths
            })
        };
        out.insert(c, sig);
    }
    out
}

/// Pairs concepts whose full multisets of root-path label sequences agree.
///
/// Labels come from attribute `label_attr`, falling back to the id.
/// Identical signatures on several concepts yield multi-matches.
pub fn match_by_label_path(o1: &Ontology, o2: &Ontology, label_attr: &str) -> MatchMapping {
    let sig1 = root_path_signatures(o1, label_attr);
    let sig2 = root_path_signatures(o2, label_attr);
    let mut by_sig: HashMap<&Vec<Vec<String>>, Vec<&ConceptId>> = HashMap::new();
    for (c, sig) in &sig2 {
        if let Some(sig) = sig {
            by_sig.entry(sig).or_default().push(c);
        }
    }
    let mut m = MatchMapping::new();
    for (a, sig) in &sig1 {
        let Some(sig) = sig else { continue };
        for b in by_sig.get(sig).into_iter().flatten() {
            m.insert(a.clone(), (*b).clone());
        }
    }
    m
}

/// Outcome of [`validate_match`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchReport {
    /// Referential-integrity failures.
    pub violations: Vec<String>,
    /// Informational notes (multi-matches, empty mapping).
    pub notes: Vec<String>,
}

impl MatchReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for MatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_ok() { "ok" } else { "invalid" })?;
        for v in &self.violations {
            write!(f, "\nviolation: {v}")?;
        }
        for n in &self.notes {
            write!(f, "\nnote: {n}")?;
        }
        Ok(())
    }
}

/// Sorted `keys` missing from sorted `set`, by a single merge pass.
pub(crate) fn missing_sorted<'a>(
    keys: impl Iterator<Item = &'a ConceptId>,
    set: &'a BTreeSet<ConceptId>,
) -> Vec<&'a ConceptId> {
    let mut it = set.iter().peekable();
    let mut out = Vec::new();
    for k in keys {
        while it.next_if(|c| *c < k).is_some() {}
        if it.peek() != Some(&k) {
            out.push(k);
        }
    }
    out
}

/// Checks that every pair resolves in its version and notes multi-matches.
pub fn validate_match(m: &MatchMapping, o1: &Ontology, o2: &Ontology) -> MatchReport {
    let mut report = MatchReport::default();
    for a in missing_sorted(m.targets.keys(), o1.concepts()) {
        for _ in &m.targets[a] {
            report.violations.push(format!("unknown old id {:?}", a.as_str()));
        }
    }
    for b in missing_sorted(m.sources.keys(), o2.concepts()) {
        for _ in &m.sources[b] {
            report.violations.push(format!("unknown new id {:?}", b.as_str()));
        }
    }
    for (a, targets) in &m.targets {
        if targets.len() > 1 {
            report.notes.push(format!("multi-match: {a} ({} outgoing)", targets.len()));
        }
    }
    for (b, sources) in &m.sources {
        if sources.len() > 1 {
            report.notes.push(format!("multi-match: {b} ({} incoming)", sources.len()));
        }
    }
    if m.is_empty() && !(o1.concepts().is_empty() && o2.concepts().is_empty()) {
        report.notes.push("0 matched".to_string());
    }
    report
}
