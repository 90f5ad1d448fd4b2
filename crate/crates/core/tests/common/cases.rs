//! Constructed fan-in cases: k-way merges and splits, multi-parent leaves
//! and wide added subgraphs.

use evomap::io::parse_ontology;
use evomap::matching::match_by_id;
use evomap::{ChangeOp, ConceptId, MatchMapping, Ontology};

pub fn id(s: impl Into<String>) -> ConceptId {
    ConceptId::new(s).unwrap()
}

pub fn doc(concepts: &[String], edges: &[(String, String)]) -> Ontology {
    let mut text = String::from("[concepts]\n");
    for c in concepts {
        text += &format!("{c}\n");
    }
    text += "[relationships]\n";
    for (c, p) in edges {
        text += &format!("{c}\tis_a\t{p}\n");
    }
    parse_ontology(&text).unwrap()
}

pub fn names(prefix: &str, k: usize) -> Vec<String> {
    (0..k).map(|i| format!("{prefix}{i}")).collect()
}

/// k concepts under `r` merged into a new concept `t`.
pub fn k_way_merge(k: usize) -> (Ontology, Ontology, MatchMapping, ChangeOp) {
    let sources = names("s", k);
    let mut c1 = vec!["r".to_string()];
    c1.extend(sources.iter().cloned());
    let o1 = doc(&c1, &sources.iter().map(|s| (s.clone(), "r".to_string())).collect::<Vec<_>>());
    let o2 = doc(&["r".into(), "t".into()], &[("t".into(), "r".into())]);
    let mut m = match_by_id(&o1, &o2);
    for s in &sources {
        m.insert(id(s.as_str()), id("t"));
    }
    let op = ChangeOp::Merge(sources.iter().map(|s| id(s.as_str())).collect(), id("t"));
    (o1, o2, m, op)
}

/// One concept split into k new concepts.
pub fn k_way_split(k: usize) -> (Ontology, Ontology, MatchMapping, ChangeOp) {
    let (o1, o2, m, _) = k_way_merge(k);
    let op = ChangeOp::Split(id("t"), (0..k).map(|i| id(format!("s{i}"))).collect());
    (o2, o1, m.inverted(), op)
}

/// A new concept placed under k existing parents.
pub fn k_parent_leaf(k: usize) -> (Ontology, Ontology, MatchMapping, ChangeOp) {
    let parents = names("p", k);
    let mut c1 = vec!["r".to_string()];
    c1.extend(parents.iter().cloned());
    let e1: Vec<_> = parents.iter().map(|p| (p.clone(), "r".to_string())).collect();
    let o1 = doc(&c1, &e1);
    let mut c2 = c1.clone();
    c2.push("x".into());
    let mut e2 = e1.clone();
    e2.extend(parents.iter().map(|p| ("x".to_string(), p.clone())));
    let o2 = doc(&c2, &e2);
    let m = match_by_id(&o1, &o2);
    let op = ChangeOp::AddLeaf(id("x"), parents.iter().map(|p| id(p.as_str())).collect());
    (o1, o2, m, op)
}

/// A new concept with k new leaf children.
pub fn wide_subgraph(k: usize) -> (Ontology, Ontology, MatchMapping, ChangeOp) {
    let leaves = names("l", k);
    let o1 = doc(&["r".into()], &[]);
    let mut c2 = vec!["r".to_string(), "n".to_string()];
    c2.extend(leaves.iter().cloned());
    let mut e2 = vec![("n".to_string(), "r".to_string())];
    e2.extend(leaves.iter().map(|l| (l.clone(), "n".to_string())));
    let o2 = doc(&c2, &e2);
    let m = match_by_id(&o1, &o2);
    let op = ChangeOp::AddSubGraph(id("n"), leaves.iter().map(|l| id(l.as_str())).collect());
    (o1, o2, m, op)
}

pub type Case = fn(usize) -> (Ontology, Ontology, MatchMapping, ChangeOp);
pub const CASES: [(&str, Case); 4] =
    [("merge", k_way_merge), ("split", k_way_split), ("addLeaf", k_parent_leaf), ("addSubGraph", wide_subgraph)];
