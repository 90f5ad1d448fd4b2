//! Seeded synthetic ontologies and edit scripts.
//!
//! `synthesize` builds a random DAG, applies a random script of primitive
//! edits and returns both versions with the ground-truth match. The same
//! step semantics back [`apply_script`], so a generated pair can always be
//! reproduced from the old version and the script.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::change::ChangeOp;
use crate::error::SynthError;
use crate::matching::MatchMapping;
use crate::ontology::{Attribute, ConceptId, Ontology, Relationship};

pub const NAME_ATTR: &str = "name";
pub const OBSOLETE_ATTR: &str = "obsolete";
const IS_A: &str = "is_a";
const PART_OF: &str = "part_of";

/// Kinds of primitive edits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepKind {
    InsertLeaf,
    DeleteLeaf,
    InsertSubtree,
    DeleteSubtree,
    Retype,
    Reparent,
    SetObsolete,
    UnsetObsolete,
    Rename,
    Merge,
    Split,
}

impl StepKind {
    pub const ALL: [StepKind; 11] = [
        StepKind::InsertLeaf,
        StepKind::DeleteLeaf,
        StepKind::InsertSubtree,
        StepKind::DeleteSubtree,
        StepKind::Retype,
        StepKind::Reparent,
        StepKind::SetObsolete,
        StepKind::UnsetObsolete,
        StepKind::Rename,
        StepKind::Merge,
        StepKind::Split,
    ];

    fn weight(self) -> u32 {
        match self {
            StepKind::InsertLeaf => 20,
            StepKind::DeleteLeaf => 12,
            StepKind::InsertSubtree => 8,
            StepKind::DeleteSubtree => 6,
            StepKind::Retype => 6,
            StepKind::Reparent => 14,
            StepKind::SetObsolete => 6,
            StepKind::UnsetObsolete => 4,
            StepKind::Rename => 10,
            StepKind::Merge => 7,
            StepKind::Split => 7,
        }
    }
}

/// One new concept: id, parent, edge type and name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewNode {
    pub id: ConceptId,
    pub parent: ConceptId,
    pub rel_type: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditStep {
    InsertLeaf(NewNode),
    DeleteLeaf { id: ConceptId },
    /// The first node hangs under an existing concept; each later node under
    /// an earlier one.
    InsertSubtree { nodes: Vec<NewNode> },
    /// Removes `root` and its descendants, which must have no parent outside
    /// the subtree.
    DeleteSubtree { root: ConceptId, members: BTreeSet<ConceptId> },
    Retype { source: ConceptId, target: ConceptId, from: String, to: String },
    Reparent { concept: ConceptId, rel_type: String, from: ConceptId, to: ConceptId },
    SetObsolete { concept: ConceptId },
    UnsetObsolete { concept: ConceptId },
    Rename { concept: ConceptId, from: String, to: String },
    /// Removes `sources`; their children move to `target`.
    Merge { sources: BTreeSet<ConceptId>, target: ConceptId },
    /// Adds concepts next to `source`, under the same parents.
    Split { source: ConceptId, parts: Vec<(ConceptId, String)> },
}

impl EditStep {
    pub fn kind(&self) -> StepKind {
        match self {
            EditStep::InsertLeaf(_) => StepKind::InsertLeaf,
            EditStep::DeleteLeaf { .. } => StepKind::DeleteLeaf,
            EditStep::InsertSubtree { .. } => StepKind::InsertSubtree,
            EditStep::DeleteSubtree { .. } => StepKind::DeleteSubtree,
            EditStep::Retype { .. } => StepKind::Retype,
            EditStep::Reparent { .. } => StepKind::Reparent,
            EditStep::SetObsolete { .. } => StepKind::SetObsolete,
            EditStep::UnsetObsolete { .. } => StepKind::UnsetObsolete,
            EditStep::Rename { .. } => StepKind::Rename,
            EditStep::Merge { .. } => StepKind::Merge,
            EditStep::Split { .. } => StepKind::Split,
        }
    }

    /// The complex operation a clean script should surface for this step,
    /// where there is one.
    pub fn expected_complex_op(&self) -> Option<ChangeOp> {
        match self {
            EditStep::InsertLeaf(n) => Some(ChangeOp::AddLeaf(n.id.clone(), BTreeSet::from([n.parent.clone()]))),
            EditStep::InsertSubtree { nodes } => {
                let root = nodes[0].id.clone();
                Some(ChangeOp::AddSubGraph(root, nodes[1..].iter().map(|n| n.id.clone()).collect()))
            }
            EditStep::DeleteSubtree { root, members } => Some(ChangeOp::DelSubGraph(root.clone(), members.clone())),
            EditStep::Reparent { concept, from, to, .. } => {
                Some(ChangeOp::Move { concept: concept.clone(), from: from.clone(), to: to.clone() })
            }
            EditStep::SetObsolete { concept } => Some(ChangeOp::ToObsolete(concept.clone())),
            EditStep::UnsetObsolete { concept } => Some(ChangeOp::RevokeObsolete(concept.clone())),
            EditStep::Merge { sources, target } => {
                let mut all = sources.clone();
                all.insert(target.clone());
                Some(ChangeOp::Merge(all, target.clone()))
            }
            EditStep::Split { source, parts } => {
                let mut all: BTreeSet<ConceptId> = parts.iter().map(|(id, _)| id.clone()).collect();
                all.insert(source.clone());
                Some(ChangeOp::Split(source.clone(), all))
            }
            EditStep::DeleteLeaf { .. } | EditStep::Retype { .. } | EditStep::Rename { .. } => None,
        }
    }
}

fn join(ids: impl IntoIterator<Item = impl fmt::Display>) -> String {
    ids.into_iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for EditStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let node = |n: &NewNode| format!("{}<{}:{}>", n.id, n.rel_type, n.parent);
        match self {
            EditStep::InsertLeaf(n) => write!(f, "insert-leaf\t{}", node(n)),
            EditStep::DeleteLeaf { id } => write!(f, "delete-leaf\t{id}"),
            EditStep::InsertSubtree { nodes } => write!(f, "insert-subtree\t{}", join(nodes.iter().map(node))),
            EditStep::DeleteSubtree { root, members } => write!(f, "delete-subtree\t{root}\t{}", join(members)),
            EditStep::Retype { source, target, from, to } => write!(f, "retype\t{source}\t{target}\t{from}->{to}"),
            EditStep::Reparent { concept, rel_type, from, to } => {
                write!(f, "reparent\t{concept}\t{rel_type}\t{from}->{to}")
            }
            EditStep::SetObsolete { concept } => write!(f, "set-obsolete\t{concept}"),
            EditStep::UnsetObsolete { concept } => write!(f, "unset-obsolete\t{concept}"),
            EditStep::Rename { concept, from, to } => write!(f, "rename\t{concept}\t{from}->{to}"),
            EditStep::Merge { sources, target } => write!(f, "merge\t{}->{target}", join(sources)),
            EditStep::Split { source, parts } => {
                write!(f, "split\t{source}->{}", join(parts.iter().map(|(id, _)| id)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditScript {
    pub seed: u64,
    pub steps: Vec<EditStep>,
}

impl fmt::Display for EditScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# seed {}", self.seed)?;
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SynthOptions {
    /// Keep steps from touching the same concepts (or their neighbours), so
    /// every step's complex operation is recoverable.
    pub clean: bool,
    /// Restrict the generated step kinds.
    pub kinds: Vec<StepKind>,
}

impl Default for SynthOptions {
    fn default() -> Self {
        Self { clean: true, kinds: StepKind::ALL.to_vec() }
    }
}

#[derive(Debug, Clone)]
pub struct Synthesized {
    pub old: Ontology,
    pub new: Ontology,
    pub matching: MatchMapping,
    pub script: EditScript,
}

/// Vector-backed set supporting O(1) random choice and removal.
#[derive(Clone, Default)]
struct Pool {
    items: Vec<ConceptId>,
    index: HashMap<ConceptId, usize>,
}

impl Pool {
    fn insert(&mut self, c: ConceptId) -> bool {
        if self.index.contains_key(&c) {
            return false;
        }
        self.index.insert(c.clone(), self.items.len());
        self.items.push(c);
        true
    }

    fn remove(&mut self, c: &ConceptId) -> bool {
        let Some(i) = self.index.remove(c) else { return false };
        self.items.swap_remove(i);
        if i < self.items.len() {
            self.index.insert(self.items[i].clone(), i);
        }
        true
    }

    fn contains(&self, c: &ConceptId) -> bool {
        self.index.contains_key(c)
    }

    fn choose(&self, rng: &mut ChaCha8Rng) -> Option<&ConceptId> {
        self.items.choose(rng)
    }
}

/// Mutable working copy of an ontology.
#[derive(Clone, Default)]
struct State {
    concepts: Pool,
    parents: HashMap<ConceptId, BTreeSet<(ConceptId, String)>>,
    children: HashMap<ConceptId, BTreeMap<ConceptId, usize>>,
    attrs: HashMap<ConceptId, BTreeSet<(String, String)>>,
    /// Old concepts each current concept derives from.
    origin: HashMap<ConceptId, BTreeSet<ConceptId>>,
}

type StepResult = Result<(), String>;

impl State {
    fn from_ontology(o: &Ontology) -> Self {
        let mut s = State::default();
        for c in o.concepts() {
            s.concepts.insert(c.clone());
            s.origin.insert(c.clone(), BTreeSet::from([c.clone()]));
        }
        for r in o.relationships() {
            s.add_edge(&r.source, &r.rel_type, &r.target);
        }
        for a in o.attributes() {
            s.attrs.entry(a.concept.clone()).or_default().insert((a.name.clone(), a.value.clone()));
        }
        s
    }

    fn to_ontology(&self, label: &str) -> Ontology {
        let concepts: BTreeSet<ConceptId> = self.concepts.items.iter().cloned().collect();
        let relationships = self
            .parents
            .iter()
            .flat_map(|(c, ps)| ps.iter().map(move |(p, t)| Relationship::new(c.clone(), t.clone(), p.clone())))
            .collect();
        let attributes = self
            .attrs
            .iter()
            .flat_map(|(c, set)| set.iter().map(move |(n, v)| Attribute::new(c.clone(), n.clone(), v.clone())))
            .collect();
        Ontology::from_parts(label, concepts, attributes, relationships)
    }

    fn add_edge(&mut self, c: &ConceptId, t: &str, p: &ConceptId) -> bool {
        if !self.parents.entry(c.clone()).or_default().insert((p.clone(), t.to_string())) {
            return false;
        }
        *self.children.entry(p.clone()).or_default().entry(c.clone()).or_default() += 1;
        true
    }

    fn remove_edge(&mut self, c: &ConceptId, t: &str, p: &ConceptId) -> bool {
        let Some(ps) = self.parents.get_mut(c) else { return false };
        if !ps.remove(&(p.clone(), t.to_string())) {
            return false;
        }
        if ps.is_empty() {
            self.parents.remove(c);
        }
        let kids = self.children.get_mut(p).expect("child index in sync");
        let n = kids.get_mut(c).expect("child index in sync");
        *n -= 1;
        if *n == 0 {
            kids.remove(c);
            if kids.is_empty() {
                self.children.remove(p);
            }
        }
        true
    }

    fn parent_edges(&self, c: &ConceptId) -> Vec<(ConceptId, String)> {
        self.parents.get(c).map(|s| s.iter().cloned().collect()).unwrap_or_default()
    }

    fn child_ids(&self, c: &ConceptId) -> Vec<ConceptId> {
        self.children.get(c).map(|m| m.keys().cloned().collect()).unwrap_or_default()
    }

    fn has_parents(&self, c: &ConceptId) -> bool {
        self.parents.contains_key(c)
    }

    fn has_children(&self, c: &ConceptId) -> bool {
        self.children.contains_key(c)
    }

    fn attr(&self, c: &ConceptId, name: &str) -> Option<&str> {
        self.attrs.get(c)?.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_str())
    }

    fn set_attr(&mut self, c: &ConceptId, name: &str, from: &str, to: &str) -> StepResult {
        let set = self.attrs.entry(c.clone()).or_default();
        if !set.remove(&(name.to_string(), from.to_string())) {
            return Err(format!("{c} has no {name}={from}"));
        }
        if !set.insert((name.to_string(), to.to_string())) {
            return Err(format!("{c} already has {name}={to}"));
        }
        Ok(())
    }

    /// Whether `anc` is reachable upward from `c` (or equal to it).
    fn is_ancestor_or_self(&self, anc: &ConceptId, c: &ConceptId) -> bool {
        let mut stack = vec![c.clone()];
        let mut seen = HashSet::new();
        while let Some(x) = stack.pop() {
            if &x == anc {
                return true;
            }
            if seen.insert(x.clone()) {
                stack.extend(self.parent_edges(&x).into_iter().map(|(p, _)| p));
            }
        }
        false
    }

    fn related(&self, a: &ConceptId, b: &ConceptId) -> bool {
        self.is_ancestor_or_self(a, b) || self.is_ancestor_or_self(b, a)
    }

    /// `root` and its descendants, if every descendant's parents lie inside
    /// and there are at most `limit` of them.
    fn closed_subtree(&self, root: &ConceptId, limit: usize) -> Option<BTreeSet<ConceptId>> {
        let mut members = BTreeSet::new();
        let mut stack = self.child_ids(root);
        while let Some(c) = stack.pop() {
            if members.insert(c.clone()) {
                if members.len() > limit {
                    return None;
                }
                stack.extend(self.child_ids(&c));
            }
        }
        let inside = |p: &ConceptId| p == root || members.contains(p);
        members.iter().all(|m| self.parent_edges(m).iter().all(|(p, _)| inside(p))).then_some(members)
    }

    fn insert_node(&mut self, n: &NewNode) -> StepResult {
        if self.concepts.contains(&n.id) {
            return Err(format!("{} already exists", n.id));
        }
        if !self.concepts.contains(&n.parent) {
            return Err(format!("parent {} missing", n.parent));
        }
        self.concepts.insert(n.id.clone());
        self.add_edge(&n.id, &n.rel_type, &n.parent);
        self.attrs.entry(n.id.clone()).or_default().insert((NAME_ATTR.to_string(), n.name.clone()));
        Ok(())
    }

    fn remove_concept(&mut self, c: &ConceptId) {
        for (p, t) in self.parent_edges(c) {
            self.remove_edge(c, &t, &p);
        }
        self.attrs.remove(c);
        self.origin.remove(c);
        self.concepts.remove(c);
    }

    fn need(&self, c: &ConceptId) -> StepResult {
        if self.concepts.contains(c) {
            Ok(())
        } else {
            Err(format!("{c} missing"))
        }
    }

    fn apply(&mut self, step: &EditStep) -> StepResult {
        match step {
            EditStep::InsertLeaf(n) => self.insert_node(n),
            EditStep::InsertSubtree { nodes } => {
                if nodes.len() < 2 {
                    return Err("subtree needs at least two nodes".into());
                }
                nodes.iter().try_for_each(|n| self.insert_node(n))
            }
            EditStep::DeleteLeaf { id } => {
                self.need(id)?;
                if self.has_children(id) {
                    return Err(format!("{id} is not a leaf"));
                }
                self.remove_concept(id);
                Ok(())
            }
            EditStep::DeleteSubtree { root, members } => {
                self.need(root)?;
                match self.closed_subtree(root, usize::MAX) {
                    Some(m) if &m == members => {}
                    _ => return Err(format!("subtree of {root} does not match")),
                }
                for m in members.iter().chain([root]) {
                    self.remove_concept(m);
                }
                Ok(())
            }
            EditStep::Retype { source, target, from, to } => {
                if !self.remove_edge(source, from, target) {
                    return Err(format!("no edge {source} {from} {target}"));
                }
                if !self.add_edge(source, to, target) {
                    return Err(format!("edge {source} {to} {target} exists"));
                }
                Ok(())
            }
            EditStep::Reparent { concept, rel_type, from, to } => {
                self.need(to)?;
                if self.is_ancestor_or_self(concept, to) {
                    return Err(format!("moving {concept} under {to} makes a cycle"));
                }
                if !self.remove_edge(concept, rel_type, from) {
                    return Err(format!("no edge {concept} {rel_type} {from}"));
                }
                if !self.add_edge(concept, rel_type, to) {
                    return Err(format!("edge {concept} {rel_type} {to} exists"));
                }
                Ok(())
            }
            EditStep::SetObsolete { concept } => self.set_attr(concept, OBSOLETE_ATTR, "false", "true"),
            EditStep::UnsetObsolete { concept } => self.set_attr(concept, OBSOLETE_ATTR, "true", "false"),
            EditStep::Rename { concept, from, to } => self.set_attr(concept, NAME_ATTR, from, to),
            EditStep::Merge { sources, target } => {
                self.need(target)?;
                if sources.is_empty() || sources.contains(target) {
                    return Err("merge needs sources other than the target".into());
                }
                for s in sources {
                    self.need(s)?;
                    if self.related(s, target) {
                        return Err(format!("{s} and {target} are related"));
                    }
                }
                let mut derived = self.origin.get(target).cloned().unwrap_or_default();
                for s in sources {
                    derived.extend(self.origin.get(s).cloned().unwrap_or_default());
                    for child in self.child_ids(s) {
                        for (p, t) in self.parent_edges(&child) {
                            if &p == s {
                                self.remove_edge(&child, &t, s);
                                self.add_edge(&child, &t, target);
                            }
                        }
                    }
                    self.remove_concept(s);
                }
                self.origin.insert(target.clone(), derived);
                Ok(())
            }
            EditStep::Split { source, parts } => {
                self.need(source)?;
                let edges = self.parent_edges(source);
                if edges.is_empty() {
                    return Err(format!("{source} is a root"));
                }
                let derived = self.origin.get(source).cloned().unwrap_or_default();
                for (id, name) in parts {
                    if self.concepts.contains(id) {
                        return Err(format!("{id} already exists"));
                    }
                    self.concepts.insert(id.clone());
                    for (p, t) in &edges {
                        self.add_edge(id, t, p);
                    }
                    self.attrs.entry(id.clone()).or_default().insert((NAME_ATTR.to_string(), name.clone()));
                    self.origin.insert(id.clone(), derived.clone());
                }
                Ok(())
            }
        }
    }

    fn matching(&self) -> MatchMapping {
        MatchMapping::from_pairs(
            self.origin.iter().flat_map(|(c, olds)| olds.iter().map(move |o| (o.clone(), c.clone()))),
        )
    }
}

/// Applies `script` to `o` step by step.
pub fn apply_script(o: &Ontology, script: &EditScript) -> Result<Ontology, SynthError> {
    let mut st = State::from_ontology(o);
    for (i, step) in script.steps.iter().enumerate() {
        st.apply(step).map_err(|message| SynthError::Inapplicable { step: i, message })?;
    }
    Ok(st.to_ontology(o.version_label()))
}

/// The ground-truth match a script induces between `o` and its result.
pub fn script_match(o: &Ontology, script: &EditScript) -> Result<MatchMapping, SynthError> {
    let mut st = State::from_ontology(o);
    for (i, step) in script.steps.iter().enumerate() {
        st.apply(step).map_err(|message| SynthError::Inapplicable { step: i, message })?;
    }
    Ok(st.matching())
}

fn cid(s: String) -> ConceptId {
    ConceptId::new(s).expect("generated ids are valid")
}

fn rel_type(rng: &mut ChaCha8Rng) -> String {
    if rng.gen_bool(0.85) { IS_A } else { PART_OF }.to_string()
}

fn random_dag(rng: &mut ChaCha8Rng, size: usize) -> Ontology {
    let ids: Vec<ConceptId> = (0..size).map(|i| cid(format!("C{i}"))).collect();
    let mut relationships = BTreeSet::new();
    let mut attributes = BTreeSet::new();
    for (i, c) in ids.iter().enumerate() {
        attributes.insert(Attribute::new(c.clone(), NAME_ATTR, format!("concept {i}")));
        if rng.gen_bool(0.5) {
            let v = if rng.gen_bool(0.7) { "false" } else { "true" };
            attributes.insert(Attribute::new(c.clone(), OBSOLETE_ATTR, v));
        }
        if i == 0 {
            continue;
        }
        let p = rng.gen_range(0..i);
        relationships.insert(Relationship::new(c.clone(), rel_type(rng), ids[p].clone()));
        if i > 1 && rng.gen_bool(0.1) {
            let q = rng.gen_range(0..i);
            if q != p {
                relationships.insert(Relationship::new(c.clone(), rel_type(rng), ids[q].clone()));
            }
        }
    }
    Ontology::from_parts("v1", ids.into_iter().collect(), attributes, relationships)
}

struct Generator {
    rng: ChaCha8Rng,
    st: State,
    clean: bool,
    touched: HashSet<ConceptId>,
    next_id: usize,
}

const TRIES: usize = 64;

impl Generator {
    fn free(&self, c: &ConceptId) -> bool {
        !self.clean || !self.touched.contains(c)
    }

    fn all_free<'a>(&self, cs: impl IntoIterator<Item = &'a ConceptId>) -> bool {
        cs.into_iter().all(|c| self.free(c))
    }

    fn fresh(&mut self) -> ConceptId {
        let id = cid(format!("N{}", self.next_id));
        self.next_id += 1;
        id
    }

    fn pick(&mut self) -> Option<ConceptId> {
        self.st.concepts.choose(&mut self.rng).cloned()
    }

    /// A random free concept satisfying `ok`.
    fn pick_where(&mut self, ok: impl Fn(&Self, &ConceptId) -> bool) -> Option<ConceptId> {
        for _ in 0..TRIES {
            let c = self.pick()?;
            if self.free(&c) && ok(self, &c) {
                return Some(c);
            }
        }
        None
    }

    fn parents_of(&self, c: &ConceptId) -> Vec<ConceptId> {
        self.st.parent_edges(c).into_iter().map(|(p, _)| p).collect()
    }

    /// Proposes a step of `kind` plus the concepts it touches.
    fn propose(&mut self, kind: StepKind) -> Option<(EditStep, Vec<ConceptId>)> {
        match kind {
            StepKind::InsertLeaf => {
                let parent = self.pick_where(|_, _| true)?;
                let id = self.fresh();
                let node = NewNode { name: format!("new concept {id}"), id: id.clone(), rel_type: rel_type(&mut self.rng), parent: parent.clone() };
                Some((EditStep::InsertLeaf(node), vec![id, parent]))
            }
            StepKind::DeleteLeaf => {
                let id = self.pick_where(|g, c| {
                    g.st.has_parents(c) && !g.st.has_children(c) && g.all_free(&g.parents_of(c))
                })?;
                let mut touched = self.parents_of(&id);
                touched.push(id.clone());
                Some((EditStep::DeleteLeaf { id }, touched))
            }
            StepKind::InsertSubtree => {
                let parent = self.pick_where(|_, _| true)?;
                let k = self.rng.gen_range(2..=5);
                let mut nodes: Vec<NewNode> = Vec::with_capacity(k);
                for i in 0..k {
                    let id = self.fresh();
                    let parent = if i == 0 { parent.clone() } else { nodes[self.rng.gen_range(0..i)].id.clone() };
                    nodes.push(NewNode { name: format!("new concept {id}"), id, parent, rel_type: rel_type(&mut self.rng) });
                }
                let mut touched: Vec<ConceptId> = nodes.iter().map(|n| n.id.clone()).collect();
                touched.push(parent);
                Some((EditStep::InsertSubtree { nodes }, touched))
            }
            StepKind::DeleteSubtree => {
                for _ in 0..TRIES {
                    let root = self.pick_where(|g, c| g.st.has_parents(c) && g.st.has_children(c))?;
                    let Some(members) = self.st.closed_subtree(&root, 10) else { continue };
                    let parents = self.parents_of(&root);
                    if self.all_free(members.iter().chain(&parents)) {
                        let mut touched: Vec<ConceptId> = members.iter().cloned().chain(parents).collect();
                        touched.push(root.clone());
                        return Some((EditStep::DeleteSubtree { root, members }, touched));
                    }
                }
                None
            }
            StepKind::Retype => {
                let source = self.pick_where(|g, c| g.st.has_parents(c))?;
                let (target, from) = self.st.parent_edges(&source).choose(&mut self.rng).cloned()?;
                let to = if from == IS_A { PART_OF } else { IS_A }.to_string();
                let taken = self.st.parent_edges(&source).iter().any(|(p, t)| *p == target && *t == to);
                if taken || !self.free(&target) {
                    return None;
                }
                Some((EditStep::Retype { source: source.clone(), target: target.clone(), from, to }, vec![source, target]))
            }
            StepKind::Reparent => {
                let concept = self.pick_where(|g, c| g.st.has_parents(c))?;
                let (from, rel_type) = self.st.parent_edges(&concept).choose(&mut self.rng).cloned()?;
                let parents = self.parents_of(&concept);
                let to = self.pick_where(|g, t| !parents.contains(t) && !g.st.is_ancestor_or_self(&concept, t))?;
                if !self.free(&from) {
                    return None;
                }
                let touched = vec![concept.clone(), from.clone(), to.clone()];
                Some((EditStep::Reparent { concept, rel_type, from, to }, touched))
            }
            StepKind::SetObsolete => {
                let concept = self.pick_where(|g, c| g.st.attr(c, OBSOLETE_ATTR) == Some("false"))?;
                Some((EditStep::SetObsolete { concept: concept.clone() }, vec![concept]))
            }
            StepKind::UnsetObsolete => {
                let concept = self.pick_where(|g, c| g.st.attr(c, OBSOLETE_ATTR) == Some("true"))?;
                Some((EditStep::UnsetObsolete { concept: concept.clone() }, vec![concept]))
            }
            StepKind::Rename => {
                let concept = self.pick_where(|g, c| g.st.attr(c, NAME_ATTR).is_some())?;
                let from = self.st.attr(&concept, NAME_ATTR)?.to_string();
                let to = format!("{from} (r{})", self.rng.gen_range(0..1000));
                Some((EditStep::Rename { concept: concept.clone(), from, to }, vec![concept]))
            }
            StepKind::Merge => {
                let target = self.pick_where(|_, _| true)?;
                let k = self.rng.gen_range(1..=3);
                let mut sources: BTreeSet<ConceptId> = BTreeSet::new();
                for _ in 0..TRIES {
                    if sources.len() == k {
                        break;
                    }
                    let Some(s) = self.pick_where(|g, s| {
                        g.st.has_parents(s)
                            && !g.st.related(s, &target)
                            && g.all_free(&g.parents_of(s))
                            && g.all_free(&g.st.child_ids(s))
                    }) else {
                        continue;
                    };
                    if !sources.contains(&s) && sources.iter().all(|o| !self.st.related(o, &s)) {
                        sources.insert(s);
                    }
                }
                if sources.is_empty() {
                    return None;
                }
                let mut touched = vec![target.clone()];
                for s in &sources {
                    touched.push(s.clone());
                    touched.extend(self.parents_of(s));
                    touched.extend(self.st.child_ids(s));
                }
                Some((EditStep::Merge { sources, target }, touched))
            }
            StepKind::Split => {
                let source = self.pick_where(|g, c| g.st.has_parents(c) && g.all_free(&g.parents_of(c)))?;
                let k = self.rng.gen_range(1..=3);
                let parts: Vec<(ConceptId, String)> = (0..k)
                    .map(|_| {
                        let id = self.fresh();
                        (id.clone(), format!("split part {id}"))
                    })
                    .collect();
                let mut touched = self.parents_of(&source);
                touched.push(source.clone());
                touched.extend(parts.iter().map(|(id, _)| id.clone()));
                Some((EditStep::Split { source, parts }, touched))
            }
        }
    }
}

/// Generates `(o1, o2, match, script)` deterministically from `seed`.
pub fn synthesize(seed: u64, size: usize, edits: usize, options: &SynthOptions) -> Result<Synthesized, SynthError> {
    if size == 0 {
        return Err(SynthError::Infeasible("size must be at least 1".into()));
    }
    if options.clean && edits > size {
        return Err(SynthError::Infeasible(format!("{edits} non-overlapping edits do not fit {size} concepts")));
    }
    if edits > 0 && options.kinds.is_empty() {
        return Err(SynthError::Infeasible("no step kinds allowed".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let old = random_dag(&mut rng, size);
    let mut g = Generator { rng, st: State::from_ontology(&old), clean: options.clean, touched: HashSet::new(), next_id: 0 };

    let kinds = &options.kinds;
    let total: u32 = kinds.iter().map(|k| k.weight()).sum();
    let mut steps = Vec::with_capacity(edits);
    let mut failures = 0;
    while steps.len() < edits {
        let mut roll = g.rng.gen_range(0..total);
        let kind = *kinds
            .iter()
            .find(|k| {
                if roll < k.weight() {
                    true
                } else {
                    roll -= k.weight();
                    false
                }
            })
            .expect("roll within total weight");
        let Some((step, touched)) = g.propose(kind) else {
            failures += 1;
            if failures > 200 + 20 * edits {
                return Err(SynthError::Infeasible(format!("placed only {} of {edits} edits", steps.len())));
            }
            continue;
        };
        if g.clean && !touched.iter().all(|c| !g.touched.contains(c)) {
            failures += 1;
            continue;
        }
        g.st.apply(&step).map_err(|message| SynthError::Inapplicable { step: steps.len(), message })?;
        g.touched.extend(touched);
        steps.push(step);
    }

    let new = g.st.to_ontology("v2");
    let matching = g.st.matching();
    Ok(Synthesized { old, new, matching, script: EditScript { seed, steps } })
}
