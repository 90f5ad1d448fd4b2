//! Basic rules: additions, deletions and maps of concepts, relationships
//! and attributes, read straight off the two versions and the match.

use std::collections::{BTreeMap, BTreeSet};

use super::{Binding, FnRule, RuleContext};
use crate::change::{ChangeOp, OpId, OpKind, Phase};
use crate::ontology::ConceptId;

pub(super) fn rules() -> Vec<FnRule> {
    let rule = |id, order, summary, bind| FnRule { id, phase: Phase::Basic, order, summary, bind };
    vec![
        rule("b1", 1, "addC for new concepts without an incoming match", add_concepts),
        rule("b2", 2, "delC for old concepts without an outgoing match", del_concepts),
        rule("b3", 3, "mapC(a,b) for every match a->b with a != b", map_concepts),
        rule("b4", 4, "mapC(a,a) when a matches itself and another new concept", self_map_outgoing),
        rule("b5", 5, "mapC(a,a) when a matches itself and another old concept matches a", self_map_incoming),
        rule("b6", 6, "addR for relationships only in the new version", add_relationships),
        rule("b7", 7, "delR for relationships only in the old version", del_relationships),
        rule("b8", 8, "mapR for a lone delR/addR pair with equal endpoints", map_relationships),
        rule("b9", 9, "addA for attributes only in the new version", add_attributes),
        rule("b10", 10, "delA for attributes only in the old version", del_attributes),
        rule("b11", 11, "mapA for a lone delA/addA pair on the same concept and name", map_attributes),
    ]
}

/// Sorted concepts absent from the sorted key sequence.
fn unmatched<'a>(
    concepts: &'a BTreeSet<ConceptId>,
    keys: impl Iterator<Item = &'a ConceptId>,
) -> impl Iterator<Item = &'a ConceptId> {
    let mut keys = keys.peekable();
    concepts.iter().filter(move |c| {
        while keys.next_if(|k| k < c).is_some() {}
        keys.peek() != Some(c)
    })
}

fn add_concepts(ctx: &RuleContext<'_>) -> Vec<Binding> {
    unmatched(ctx.new.concepts(), ctx.matching.sources().map(|(b, _)| b))
        .map(|c| Binding::create(ChangeOp::AddC(c.clone())))
        .collect()
}

fn del_concepts(ctx: &RuleContext<'_>) -> Vec<Binding> {
    unmatched(ctx.old.concepts(), ctx.matching.targets().map(|(a, _)| a))
        .map(|c| Binding::create(ChangeOp::DelC(c.clone())))
        .collect()
}

fn map_concepts(ctx: &RuleContext<'_>) -> Vec<Binding> {
    ctx.matching
        .pairs()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| Binding::create(ChangeOp::MapC(a.clone(), b.clone())))
        .collect()
}

fn self_map_outgoing(ctx: &RuleContext<'_>) -> Vec<Binding> {
    ctx.matching
        .targets()
        .filter(|(a, t)| t.len() > 1 && t.contains(*a))
        .map(|(a, _)| Binding::create(ChangeOp::MapC(a.clone(), a.clone())))
        .collect()
}

fn self_map_incoming(ctx: &RuleContext<'_>) -> Vec<Binding> {
    ctx.matching
        .sources()
        .filter(|(b, s)| s.len() > 1 && s.contains(*b))
        .map(|(b, _)| Binding::create(ChangeOp::MapC(b.clone(), b.clone())))
        .collect()
}

fn add_relationships(ctx: &RuleContext<'_>) -> Vec<Binding> {
    ctx.new
        .relationships()
        .difference(ctx.old.relationships())
        .map(|r| Binding::create(ChangeOp::AddR(r.clone())))
        .collect()
}

fn del_relationships(ctx: &RuleContext<'_>) -> Vec<Binding> {
    ctx.old
        .relationships()
        .difference(ctx.new.relationships())
        .map(|r| Binding::create(ChangeOp::DelR(r.clone())))
        .collect()
}

/// Pairs a deletion with an addition sharing `key` when exactly one of each
/// exists; ambiguous groups are left alone.
fn lone_pairs<'a, K: Ord>(
    dels: impl Iterator<Item = (OpId, &'a ChangeOp)>,
    adds: impl Iterator<Item = (OpId, &'a ChangeOp)>,
    key: impl Fn(&'a ChangeOp) -> K,
    make: impl Fn(&ChangeOp, &ChangeOp) -> ChangeOp,
) -> Vec<Binding> {
    type Group<'a> = (Vec<(OpId, &'a ChangeOp)>, Vec<(OpId, &'a ChangeOp)>);
    let mut groups: BTreeMap<K, Group<'a>> = BTreeMap::new();
    for (id, op) in dels {
        groups.entry(key(op)).or_default().0.push((id, op));
    }
    for (id, op) in adds {
        groups.entry(key(op)).or_default().1.push((id, op));
    }
    groups
        .into_values()
        .filter_map(|(d, a)| match (d.as_slice(), a.as_slice()) {
            ([(di, dop)], [(ai, aop)]) => Some(Binding::replace(make(dop, aop), vec![*di, *ai])),
            _ => None,
        })
        .collect()
}

fn map_relationships(ctx: &RuleContext<'_>) -> Vec<Binding> {
    let endpoints = |op: &ChangeOp| match op {
        ChangeOp::DelR(r) | ChangeOp::AddR(r) => (r.source.clone(), r.target.clone()),
        _ => unreachable!("grouped relationship ops only"),
    };
    lone_pairs(ctx.live.live_of(OpKind::DelR), ctx.live.live_of(OpKind::AddR), endpoints, |d, a| match (d, a) {
        (ChangeOp::DelR(r), ChangeOp::AddR(s)) => ChangeOp::MapR(r.clone(), s.clone()),
        _ => unreachable!(),
    })
}

fn add_attributes(ctx: &RuleContext<'_>) -> Vec<Binding> {
    ctx.new
        .attributes()
        .difference(ctx.old.attributes())
        .map(|a| Binding::create(ChangeOp::AddA(a.clone())))
        .collect()
}

fn del_attributes(ctx: &RuleContext<'_>) -> Vec<Binding> {
    ctx.old
        .attributes()
        .difference(ctx.new.attributes())
        .map(|a| Binding::create(ChangeOp::DelA(a.clone())))
        .collect()
}

fn map_attributes(ctx: &RuleContext<'_>) -> Vec<Binding> {
    let key = |op: &ChangeOp| match op {
        ChangeOp::DelA(a) | ChangeOp::AddA(a) => (a.concept.clone(), a.name.clone()),
        _ => unreachable!("grouped attribute ops only"),
    };
    lone_pairs(ctx.live.live_of(OpKind::DelA), ctx.live.live_of(OpKind::AddA), key, |d, a| match (d, a) {
        (ChangeOp::DelA(p), ChangeOp::AddA(q)) => ChangeOp::MapA(p.clone(), q.clone()),
        _ => unreachable!(),
    })
}
