//! Complex rules: one pass each, replacing groups of basic operations with
//! element-level complex operations.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::{Binding, FnRule, RuleContext};
use crate::change::{ChangeOp, OpId, OpKind, Phase};
use crate::ontology::ConceptId;

pub(super) fn rules() -> Vec<FnRule> {
    let rule = |id, order, summary, bind| FnRule { id, phase: Phase::Complex, order, summary, bind };
    vec![
        rule("c1", 1, "substitute(a,b) for a mapC(a,b) that is the only map from a and into b", substitute),
        rule("c2", 2, "move(c,from,to) for delR/addR pairs with the same source and type", moves),
        rule("c3", 3, "toObsolete(c) for mapA of the obsolete flag false -> true", to_obsolete),
        rule("c4", 4, "revokeObsolete(c) for mapA of the obsolete flag true -> false", revoke_obsolete),
        rule("c5", 5, "addLeaf(a,{p}) for an added concept with an added parent edge and no added child edge", add_leaf),
        rule("c6", 6, "delLeaf(a,{p}) for a deleted concept with a deleted parent edge and no deleted child edge", del_leaf),
        rule("c7", 7, "merge({a},c) for each of >= 2 concepts mapped only into c", merge_by_range),
        rule("c8", 8, "split(c,{a}) for each of >= 2 concepts mapped only from c", split),
        rule("c9", 9, "addSubGraph(a,{b}) for an added concept a and addLeaf(b,B) with a in B", add_subgraph),
        rule("c10", 10, "delSubGraph(a,{b}) for a deleted concept a and delLeaf(b,B) with a in B", del_subgraph),
    ]
}

/// The merge detector with negative preconditions over the maps *into* each
/// source rather than the maps *from* it. Not part of the default catalog.
pub(super) fn merge_variant() -> FnRule {
    FnRule {
        id: "c7",
        phase: Phase::Complex,
        order: 7,
        summary: "merge({a},c) for each of >= 2 concepts a with no map into a from outside c",
        bind: merge_by_domain,
    }
}

fn single(c: &ConceptId) -> BTreeSet<ConceptId> {
    BTreeSet::from([c.clone()])
}

/// `(domain -> ranges, range -> domains)` over every known mapC.
type MapIndex<'a> = (HashMap<&'a ConceptId, HashSet<&'a ConceptId>>, HashMap<&'a ConceptId, HashSet<&'a ConceptId>>);

fn map_index<'a>(ctx: &'a RuleContext<'_>) -> MapIndex<'a> {
    let (mut ranges, mut domains): MapIndex<'a> = Default::default();
    for op in ctx.known_ops(OpKind::MapC) {
        if let ChangeOp::MapC(a, b) = op {
            ranges.entry(a).or_default().insert(b);
            domains.entry(b).or_default().insert(a);
        }
    }
    (ranges, domains)
}

fn only(set: Option<&HashSet<&ConceptId>>, c: &ConceptId) -> bool {
    set.is_some_and(|s| s.len() == 1 && s.contains(c))
}

fn substitute(ctx: &RuleContext<'_>) -> Vec<Binding> {
    let (ranges, domains) = map_index(ctx);
    ctx.live
        .live_of(OpKind::MapC)
        .filter_map(|(id, op)| match op {
            ChangeOp::MapC(a, b) if a != b && only(ranges.get(a), b) && only(domains.get(b), a) => {
                Some(Binding::replace(ChangeOp::Substitute(a.clone(), b.clone()), vec![id]))
            }
            _ => None,
        })
        .collect()
}

fn moves(ctx: &RuleContext<'_>) -> Vec<Binding> {
    let mut adds: HashMap<(&ConceptId, &str), Vec<(OpId, &ConceptId)>> = HashMap::new();
    for (id, op) in ctx.live.live_of(OpKind::AddR) {
        if let ChangeOp::AddR(s) = op {
            adds.entry((&s.source, s.rel_type.as_str())).or_default().push((id, &s.target));
        }
    }
    let mut out = Vec::new();
    for (del, op) in ctx.live.live_of(OpKind::DelR) {
        let ChangeOp::DelR(r) = op else { continue };
        for (add, to) in adds.get(&(&r.source, r.rel_type.as_str())).into_iter().flatten() {
            if **to != r.target {
                let mv = ChangeOp::Move { concept: r.source.clone(), from: r.target.clone(), to: (*to).clone() };
                out.push(Binding::replace(mv, vec![del, *add]));
            }
        }
    }
    out
}

fn obsolete_flip(ctx: &RuleContext<'_>, from: &str, to: &str, make: fn(ConceptId) -> ChangeOp) -> Vec<Binding> {
    ctx.live
        .live_of(OpKind::MapA)
        .filter_map(|(id, op)| match op {
            ChangeOp::MapA(p, q)
                if p.concept == q.concept
                    && p.name == ctx.obsolete_attr
                    && q.name == ctx.obsolete_attr
                    && p.value == from
                    && q.value == to =>
            {
                Some(Binding::replace(make(p.concept.clone()), vec![id]))
            }
            _ => None,
        })
        .collect()
}

fn to_obsolete(ctx: &RuleContext<'_>) -> Vec<Binding> {
    obsolete_flip(ctx, "false", "true", ChangeOp::ToObsolete)
}

fn revoke_obsolete(ctx: &RuleContext<'_>) -> Vec<Binding> {
    obsolete_flip(ctx, "true", "false", ChangeOp::RevokeObsolete)
}

/// Shared shape of the leaf rules: concept op `concept_kind(a)`, no known
/// `edge_kind` into `a`, and live `edge_kind` edges out of `a`.
fn leaf(
    ctx: &RuleContext<'_>,
    concept_kind: OpKind,
    edge_kind: OpKind,
    make: fn(ConceptId, BTreeSet<ConceptId>) -> ChangeOp,
) -> Vec<Binding> {
    let edge = |op: &ChangeOp| match op {
        ChangeOp::AddR(r) | ChangeOp::DelR(r) => r.clone(),
        _ => unreachable!("edge ops only"),
    };
    let has_child: HashSet<ConceptId> = ctx.known_ops(edge_kind).map(|op| edge(op).target).collect();
    let mut out_edges: HashMap<ConceptId, Vec<(OpId, ConceptId)>> = HashMap::new();
    for (id, op) in ctx.live.live_of(edge_kind) {
        let r = edge(op);
        out_edges.entry(r.source).or_default().push((id, r.target));
    }
    let mut out = Vec::new();
    for (cid, op) in ctx.live.live_of(concept_kind) {
        let (ChangeOp::AddC(a) | ChangeOp::DelC(a)) = op else { continue };
        if has_child.contains(a) {
            continue;
        }
        for (eid, parent) in out_edges.get(a).into_iter().flatten() {
            out.push(Binding::replace(make(a.clone(), single(parent)), vec![cid, *eid]));
        }
    }
    out
}

fn add_leaf(ctx: &RuleContext<'_>) -> Vec<Binding> {
    leaf(ctx, OpKind::AddC, OpKind::AddR, ChangeOp::AddLeaf)
}

fn del_leaf(ctx: &RuleContext<'_>) -> Vec<Binding> {
    leaf(ctx, OpKind::DelC, OpKind::DelR, ChangeOp::DelLeaf)
}

/// Live mapC ops grouped by `pivot` (the range for merges, the domain for
/// splits); within each group, the `other` ends that pass `eligible`.
/// Groups with at least two eligible members each yield one binding per member.
fn element_level(
    ctx: &RuleContext<'_>,
    pivot_is_range: bool,
    eligible: impl Fn(&ConceptId, &ConceptId) -> bool,
    make: impl Fn(&ConceptId, &ConceptId) -> ChangeOp,
) -> Vec<Binding> {
    let mut groups: BTreeMap<&ConceptId, Vec<(OpId, &ConceptId)>> = BTreeMap::new();
    for (id, op) in ctx.live.live_of(OpKind::MapC) {
        let ChangeOp::MapC(a, b) = op else { continue };
        let (pivot, other) = if pivot_is_range { (b, a) } else { (a, b) };
        if eligible(other, pivot) {
            groups.entry(pivot).or_default().push((id, other));
        }
    }
    groups
        .into_iter()
        .filter(|(_, members)| members.len() >= 2)
        .flat_map(|(pivot, members)| {
            members.into_iter().map(|(id, other)| Binding::replace(make(other, pivot), vec![id])).collect::<Vec<_>>()
        })
        .collect()
}

fn merge_by_range(ctx: &RuleContext<'_>) -> Vec<Binding> {
    let (ranges, _) = map_index(ctx);
    element_level(ctx, true, |a, c| only(ranges.get(a), c), |a, c| ChangeOp::Merge(single(a), c.clone()))
}

fn merge_by_domain(ctx: &RuleContext<'_>) -> Vec<Binding> {
    let (_, domains) = map_index(ctx);
    let no_foreign_incoming = |a: &ConceptId, c: &ConceptId| domains.get(a).is_none_or(|d| d.iter().all(|d| *d == c));
    element_level(ctx, true, no_foreign_incoming, |a, c| ChangeOp::Merge(single(a), c.clone()))
}

fn split(ctx: &RuleContext<'_>) -> Vec<Binding> {
    let (_, domains) = map_index(ctx);
    element_level(ctx, false, |a, c| only(domains.get(a), c), |a, c| ChangeOp::Split(c.clone(), single(a)))
}

fn subgraph(
    ctx: &RuleContext<'_>,
    concept_kind: OpKind,
    leaf_kind: OpKind,
    make: fn(ConceptId, BTreeSet<ConceptId>) -> ChangeOp,
) -> Vec<Binding> {
    let mut leaves_under: HashMap<&ConceptId, Vec<(OpId, &ConceptId)>> = HashMap::new();
    for (id, op) in ctx.live.live_of(leaf_kind) {
        let (ChangeOp::AddLeaf(b, parents) | ChangeOp::DelLeaf(b, parents)) = op else { continue };
        for p in parents {
            leaves_under.entry(p).or_default().push((id, b));
        }
    }
    let mut out = Vec::new();
    for (cid, op) in ctx.live.live_of(concept_kind) {
        let (ChangeOp::AddC(a) | ChangeOp::DelC(a)) = op else { continue };
        for (lid, b) in leaves_under.get(a).into_iter().flatten() {
            out.push(Binding::replace(make(a.clone(), single(b)), vec![cid, *lid]));
        }
    }
    out
}

fn add_subgraph(ctx: &RuleContext<'_>) -> Vec<Binding> {
    subgraph(ctx, OpKind::AddC, OpKind::AddLeaf, ChangeOp::AddSubGraph)
}

fn del_subgraph(ctx: &RuleContext<'_>) -> Vec<Binding> {
    subgraph(ctx, OpKind::DelC, OpKind::DelLeaf, ChangeOp::DelSubGraph)
}
