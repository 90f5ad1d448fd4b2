//! Aggregation rules: applied repeatedly until nothing changes, fusing
//! element-level operations into set-valued ones.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{AggMode, Binding, FnRule, RuleContext};
use crate::change::{ChangeOp, OpId, OpKind, Phase};
use crate::ontology::ConceptId;

pub(super) fn rules() -> Vec<FnRule> {
    let rule = |id, order, summary, bind| FnRule { id, phase: Phase::Aggregation, order, summary, bind };
    vec![
        rule("a1", 1, "fuse addLeaf parent sets of the same concept", fuse_add_leaf),
        rule("a2", 2, "fuse delLeaf parent sets of the same concept", fuse_del_leaf),
        rule("a3", 3, "fuse merge source sets with the same target", fuse_merge),
        rule("a4", 4, "fuse split target sets with the same source", fuse_split),
        rule("a5", 5, "grow addSubGraph(a,A) to an added parent b over addR(a,b)", lift_add),
        rule("a6", 6, "fuse addSubGraph member sets with the same root", fuse_add_subgraph),
        rule("a7", 7, "splice addSubGraph(a,A) into addSubGraph(b,B) over addR(a,b or B)", splice_add),
        rule("a8", 8, "grow delSubGraph(a,A) to a deleted parent b over delR(a,b)", lift_del),
        rule("a9", 9, "fuse delSubGraph member sets with the same root", fuse_del_subgraph),
        rule("a10", 10, "splice delSubGraph(a,A) into delSubGraph(b,B) over delR(a,b or B)", splice_del),
    ]
}

type Parts<'a> = (&'a ConceptId, &'a BTreeSet<ConceptId>);

/// Fuses live ops of `kind` that share a pivot concept. Literal mode pairs
/// neighbours in canonical order; fused mode takes each group whole.
fn fuse(
    ctx: &RuleContext<'_>,
    kind: OpKind,
    parts: impl for<'a> Fn(&'a ChangeOp) -> Parts<'a>,
    make: impl Fn(&ConceptId, BTreeSet<ConceptId>) -> ChangeOp,
) -> Vec<Binding> {
    let mut groups: BTreeMap<&ConceptId, Vec<(OpId, &BTreeSet<ConceptId>)>> = BTreeMap::new();
    for (id, op) in ctx.live.live_of(kind) {
        let (pivot, set) = parts(op);
        groups.entry(pivot).or_default().push((id, set));
    }
    let chunk = match ctx.mode {
        AggMode::Literal => 2,
        AggMode::Fused => usize::MAX,
    };
    let mut out = Vec::new();
    for (pivot, members) in groups {
        for chunk in members.chunks(chunk).filter(|c| c.len() >= 2) {
            let union: BTreeSet<ConceptId> = chunk.iter().flat_map(|(_, s)| s.iter().cloned()).collect();
            let ids: Vec<OpId> = chunk.iter().map(|(id, _)| *id).collect();
            out.push(Binding::replace(make(pivot, union), ids.clone()).claiming(ids));
        }
    }
    out
}

fn leaf_parts(op: &ChangeOp) -> Parts<'_> {
    match op {
        ChangeOp::AddLeaf(c, p) | ChangeOp::DelLeaf(c, p) => (c, p),
        _ => unreachable!(),
    }
}

fn fuse_add_leaf(ctx: &RuleContext<'_>) -> Vec<Binding> {
    fuse(ctx, OpKind::AddLeaf, leaf_parts, |c, p| ChangeOp::AddLeaf(c.clone(), p))
}

fn fuse_del_leaf(ctx: &RuleContext<'_>) -> Vec<Binding> {
    fuse(ctx, OpKind::DelLeaf, leaf_parts, |c, p| ChangeOp::DelLeaf(c.clone(), p))
}

/// Merges pivot on the target, splits on the source.
fn merge_split_parts(op: &ChangeOp) -> Parts<'_> {
    match op {
        ChangeOp::Merge(s, t) => (t, s),
        ChangeOp::Split(s, t) => (s, t),
        _ => unreachable!(),
    }
}

fn fuse_merge(ctx: &RuleContext<'_>) -> Vec<Binding> {
    fuse(ctx, OpKind::Merge, merge_split_parts, |t, s| ChangeOp::Merge(s, t.clone()))
}

fn fuse_split(ctx: &RuleContext<'_>) -> Vec<Binding> {
    fuse(ctx, OpKind::Split, merge_split_parts, |s, t| ChangeOp::Split(s.clone(), t))
}

fn subgraph_parts(op: &ChangeOp) -> Parts<'_> {
    match op {
        ChangeOp::AddSubGraph(r, m) | ChangeOp::DelSubGraph(r, m) => (r, m),
        _ => unreachable!(),
    }
}

fn fuse_add_subgraph(ctx: &RuleContext<'_>) -> Vec<Binding> {
    fuse(ctx, OpKind::AddSubGraph, subgraph_parts, |r, m| ChangeOp::AddSubGraph(r.clone(), m))
}

fn fuse_del_subgraph(ctx: &RuleContext<'_>) -> Vec<Binding> {
    fuse(ctx, OpKind::DelSubGraph, subgraph_parts, |r, m| ChangeOp::DelSubGraph(r.clone(), m))
}

fn edges_by_source<'a>(ctx: &'a RuleContext<'_>, kind: OpKind) -> HashMap<&'a ConceptId, Vec<(OpId, &'a ConceptId)>> {
    let mut out: HashMap<&ConceptId, Vec<(OpId, &ConceptId)>> = HashMap::new();
    for (id, op) in ctx.live.live_of(kind) {
        if let ChangeOp::AddR(r) | ChangeOp::DelR(r) = op {
            out.entry(&r.source).or_default().push((id, &r.target));
        }
    }
    out
}

/// Grows a subgraph one level up through a parent whose concept op is live.
/// The parent's concept op may feed several bindings of one invocation.
fn lift(
    ctx: &RuleContext<'_>,
    subgraph_kind: OpKind,
    concept_kind: OpKind,
    edge_kind: OpKind,
    make: fn(ConceptId, BTreeSet<ConceptId>) -> ChangeOp,
) -> Vec<Binding> {
    let concepts: HashMap<&ConceptId, OpId> = ctx
        .live
        .live_of(concept_kind)
        .filter_map(|(id, op)| match op {
            ChangeOp::AddC(c) | ChangeOp::DelC(c) => Some((c, id)),
            _ => None,
        })
        .collect();
    let edges = edges_by_source(ctx, edge_kind);
    let mut out = Vec::new();
    for (sid, op) in ctx.live.live_of(subgraph_kind) {
        let (root, members) = subgraph_parts(op);
        for (eid, parent) in edges.get(root).into_iter().flatten() {
            if let Some(&cid) = concepts.get(parent) {
                let mut set = members.clone();
                set.insert(root.clone());
                out.push(Binding::replace(make((*parent).clone(), set), vec![sid, cid, *eid]));
            }
        }
    }
    out
}

fn lift_add(ctx: &RuleContext<'_>) -> Vec<Binding> {
    lift(ctx, OpKind::AddSubGraph, OpKind::AddC, OpKind::AddR, ChangeOp::AddSubGraph)
}

fn lift_del(ctx: &RuleContext<'_>) -> Vec<Binding> {
    lift(ctx, OpKind::DelSubGraph, OpKind::DelC, OpKind::DelR, ChangeOp::DelSubGraph)
}

/// Joins subgraph `(a,A)` into `(b,B)` when an edge runs from `a` to `b` or
/// into `B`. Only roots with a single live fragment take part, so partially
/// fused groups wait for their fusion rule.
fn splice(
    ctx: &RuleContext<'_>,
    subgraph_kind: OpKind,
    edge_kind: OpKind,
    make: fn(ConceptId, BTreeSet<ConceptId>) -> ChangeOp,
) -> Vec<Binding> {
    let fragments: Vec<(OpId, Parts<'_>)> =
        ctx.live.live_of(subgraph_kind).map(|(id, op)| (id, subgraph_parts(op))).collect();
    let mut per_root: HashMap<&ConceptId, usize> = HashMap::new();
    for (_, (root, _)) in &fragments {
        *per_root.entry(root).or_default() += 1;
    }
    let settled = |root: &ConceptId| per_root.get(root) == Some(&1);
    let mut containing: HashMap<&ConceptId, Vec<usize>> = HashMap::new();
    for (i, (_, (root, members))) in fragments.iter().enumerate() {
        if settled(root) {
            for c in std::iter::once(*root).chain(members.iter()) {
                containing.entry(c).or_default().push(i);
            }
        }
    }
    let edges = edges_by_source(ctx, edge_kind);
    let mut out = Vec::new();
    for (i, (aid, (a, members_a))) in fragments.iter().enumerate() {
        if !settled(a) {
            continue;
        }
        for (eid, target) in edges.get(a).into_iter().flatten() {
            for &j in containing.get(target).into_iter().flatten() {
                if j == i {
                    continue;
                }
                let (bid, (b, members_b)) = &fragments[j];
                let mut set: BTreeSet<ConceptId> = members_a.union(members_b).cloned().collect();
                set.insert((*a).clone());
                out.push(Binding::replace(make((*b).clone(), set), vec![*aid, *bid, *eid]).claiming([*aid, *bid]));
            }
        }
    }
    out
}

fn splice_add(ctx: &RuleContext<'_>) -> Vec<Binding> {
    splice(ctx, OpKind::AddSubGraph, OpKind::AddR, ChangeOp::AddSubGraph)
}

fn splice_del(ctx: &RuleContext<'_>) -> Vec<Binding> {
    splice(ctx, OpKind::DelSubGraph, OpKind::DelR, ChangeOp::DelSubGraph)
}
