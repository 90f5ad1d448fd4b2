//! Independent completeness oracle for basic diffs, computed by plain set
//! arithmetic over the two versions and the match.

use std::collections::{BTreeMap, BTreeSet};

use evomap::{ChangeOp, DiffMapping, MatchMapping, Ontology};

/// Every way the basic diff `d` of `o1 -> o2` under `m` fails to record each
/// version-exclusive element exactly once, or touches an unchanged one.
pub fn completeness_violations(o1: &Ontology, o2: &Ontology, m: &MatchMapping, d: &DiffMapping) -> Vec<String> {
    let mut out = Vec::new();
    let ops: Vec<&ChangeOp> = d.live().map(|(_, op)| op).collect();

    // Per-element coverage counts.
    let mut removed_r: BTreeMap<_, usize> = BTreeMap::new();
    let mut added_r: BTreeMap<_, usize> = BTreeMap::new();
    let mut removed_a: BTreeMap<_, usize> = BTreeMap::new();
    let mut added_a: BTreeMap<_, usize> = BTreeMap::new();
    let mut del_c: BTreeMap<_, usize> = BTreeMap::new();
    let mut add_c: BTreeMap<_, usize> = BTreeMap::new();
    let mut maps: BTreeSet<(_, _)> = BTreeSet::new();
    for op in &ops {
        match op {
            ChangeOp::AddR(r) => *added_r.entry(r).or_default() += 1,
            ChangeOp::DelR(r) => *removed_r.entry(r).or_default() += 1,
            ChangeOp::MapR(r, s) => {
                *removed_r.entry(r).or_default() += 1;
                *added_r.entry(s).or_default() += 1;
            }
            ChangeOp::AddA(a) => *added_a.entry(a).or_default() += 1,
            ChangeOp::DelA(a) => *removed_a.entry(a).or_default() += 1,
            ChangeOp::MapA(a, b) => {
                *removed_a.entry(a).or_default() += 1;
                *added_a.entry(b).or_default() += 1;
            }
            ChangeOp::AddC(c) => *add_c.entry(c).or_default() += 1,
            ChangeOp::DelC(c) => *del_c.entry(c).or_default() += 1,
            ChangeOp::MapC(a, b) => {
                if !maps.insert((a, b)) {
                    out.push(format!("duplicate {op}"));
                }
            }
            other => out.push(format!("non-basic op {other}")),
        }
    }

    let exactly_once = |out: &mut Vec<String>, what: &str, n: Option<&usize>| {
        if n.copied().unwrap_or(0) != 1 {
            out.push(format!("{what} covered {} times", n.copied().unwrap_or(0)));
        }
    };
    for r in o1.relationships().difference(o2.relationships()) {
        exactly_once(&mut out, &format!("removed {r:?}"), removed_r.get(r));
    }
    for r in o2.relationships().difference(o1.relationships()) {
        exactly_once(&mut out, &format!("added {r:?}"), added_r.get(r));
    }
    for a in o1.attributes().difference(o2.attributes()) {
        exactly_once(&mut out, &format!("removed {a:?}"), removed_a.get(a));
    }
    for a in o2.attributes().difference(o1.attributes()) {
        exactly_once(&mut out, &format!("added {a:?}"), added_a.get(a));
    }
    let stray_r = removed_r.keys().chain(added_r.keys()).filter(|r| {
        o1.relationships().contains(**r) && o2.relationships().contains(**r)
    });
    for r in stray_r {
        out.push(format!("shared {r:?} has an op"));
    }
    let stray_a = removed_a.keys().chain(added_a.keys()).filter(|a| {
        o1.attributes().contains(**a) && o2.attributes().contains(**a)
    });
    for a in stray_a {
        out.push(format!("shared {a:?} has an op"));
    }

    // Concepts: unmatched ones are added/deleted once, matched ones are
    // carried by maps of every non-identity pair and of identity pairs
    // involved in a multi-match.
    for c in o1.concepts() {
        let matched = m.targets_of(c.as_str()).is_some_and(|t| !t.is_empty());
        let want = usize::from(!matched);
        if del_c.get(c).copied().unwrap_or(0) != want {
            out.push(format!("delC({c}) count != {want}"));
        }
    }
    for c in o2.concepts() {
        let matched = m.sources_of(c.as_str()).is_some_and(|s| !s.is_empty());
        let want = usize::from(!matched);
        if add_c.get(c).copied().unwrap_or(0) != want {
            out.push(format!("addC({c}) count != {want}"));
        }
    }
    let mut expected_maps = BTreeSet::new();
    for (a, b) in m.pairs() {
        let multi = m.targets_of(a.as_str()).map_or(0, |t| t.len()) > 1
            || m.sources_of(b.as_str()).map_or(0, |s| s.len()) > 1;
        if a != b || multi {
            expected_maps.insert((a, b));
        }
    }
    if maps != expected_maps {
        out.push(format!("maps {} != expected {}", maps.len(), expected_maps.len()));
    }
    for c in o1.concepts().intersection(o2.concepts()) {
        let only_self = m.targets_of(c.as_str()).is_some_and(|t| t.len() == 1 && t.contains(c))
            && m.sources_of(c.as_str()).is_some_and(|s| s.len() == 1 && s.contains(c));
        if only_self && (del_c.contains_key(c) || add_c.contains_key(c) || maps.iter().any(|(a, b)| *a == c || *b == c))
        {
            out.push(format!("unchanged {c} has a concept op"));
        }
    }
    out
}
