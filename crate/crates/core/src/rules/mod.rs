//! Change-operation generating rules: the rule interface, the evaluation
//! context, and the ordered catalog of built-in and user rules.

mod aggregation;
mod basic;
mod complex;

use std::fmt;

use crate::change::{ChangeOp, DiffMapping, OpId, OpKind, Phase};
use crate::error::RuleError;
use crate::matching::MatchMapping;
use crate::ontology::Ontology;

/// How fusion rules (leaf parents, merge sources, split targets, subgraphs
/// with a shared root) combine their operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AggMode {
    /// Each invocation fuses disjoint pairs in canonical order; the fixpoint
    /// loop does the rest.
    Literal,
    /// Each invocation fuses every group in one step.
    #[default]
    Fused,
}

impl AggMode {
    pub fn name(self) -> &'static str {
        match self {
            AggMode::Literal => "literal",
            AggMode::Fused => "fused",
        }
    }
}

/// Read-only view a rule binds against.
pub struct RuleContext<'a> {
    pub old: &'a Ontology,
    pub new: &'a Ontology,
    pub matching: &'a MatchMapping,
    /// The frozen basic diff; `None` while basic rules run.
    pub basic: Option<&'a DiffMapping>,
    /// The working set as of this invocation's start.
    pub live: &'a DiffMapping,
    pub mode: AggMode,
    /// Attribute name toggled by toObsolete/revokeObsolete.
    pub obsolete_attr: &'a str,
}

impl RuleContext<'_> {
    /// Ops of `kind` in the frozen basic diff or in the live set. This is
    /// the view negative preconditions consult; an op may appear twice.
    pub fn known_ops(&self, kind: OpKind) -> impl Iterator<Item = &ChangeOp> + '_ {
        self.basic
            .into_iter()
            .flat_map(move |b| b.live_of(kind).map(|(_, op)| op))
            .chain(self.live.live_of(kind).map(|(_, op)| op))
    }
}

/// One created op and the ops it replaces (its lineage).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub create: ChangeOp,
    pub consumes: Vec<OpId>,
}

/// A satisfied precondition set and the resulting actions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Binding {
    pub actions: Vec<Action>,
    pub eliminates: Vec<OpId>,
    /// Ops this binding needs exclusively within one invocation; a later
    /// binding claiming any of them is skipped.
    pub claims: Vec<OpId>,
}

impl Binding {
    /// Creates `op` with no lineage and eliminates nothing.
    pub fn create(op: ChangeOp) -> Self {
        Binding { actions: vec![Action { create: op, consumes: Vec::new() }], ..Default::default() }
    }

    /// Creates `op` in place of `consumed`, which are eliminated.
    pub fn replace(op: ChangeOp, consumed: Vec<OpId>) -> Self {
        Binding {
            actions: vec![Action { create: op, consumes: consumed.clone() }],
            eliminates: consumed,
            claims: Vec::new(),
        }
    }

    pub fn claiming(mut self, ids: impl IntoIterator<Item = OpId>) -> Self {
        self.claims.extend(ids);
        self
    }
}

/// A change-operation generating rule.
pub trait Rule: Send + Sync {
    fn id(&self) -> &str;
    fn phase(&self) -> Phase;
    /// Position within the phase; unique per phase.
    fn order(&self) -> u32;
    fn summary(&self) -> &str {
        ""
    }
    /// Whether the rule may consume its own output; only aggregation rules may.
    fn recursive(&self) -> bool {
        self.phase() == Phase::Aggregation
    }
    /// Enumerates all bindings in canonical order.
    fn bind(&self, ctx: &RuleContext<'_>) -> Vec<Binding>;
}

/// A built-in rule backed by a plain function.
pub(crate) struct FnRule {
    pub id: &'static str,
    pub phase: Phase,
    pub order: u32,
    pub summary: &'static str,
    pub bind: fn(&RuleContext<'_>) -> Vec<Binding>,
}

impl Rule for FnRule {
    fn id(&self) -> &str {
        self.id
    }
    fn phase(&self) -> Phase {
        self.phase
    }
    fn order(&self) -> u32 {
        self.order
    }
    fn summary(&self) -> &str {
        self.summary
    }
    fn bind(&self, ctx: &RuleContext<'_>) -> Vec<Binding> {
        (self.bind)(ctx)
    }
}

/// Ordered rule set, sorted by phase and then order.
#[derive(Default)]
pub struct Catalog {
    rules: Vec<Box<dyn Rule>>,
}

impl fmt::Debug for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rules.iter().map(|r| r.id())).finish()
    }
}

fn valid_rule_id(id: &str) -> bool {
    !id.is_empty() && !id.contains(|c: char| c.is_whitespace() || c == '=' || c == ',' || c == '#')
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// The 11 basic, 10 complex and 10 aggregation built-ins.
    pub fn builtin() -> Self {
        let mut c = Catalog::new();
        for r in basic::rules().into_iter().chain(complex::rules()).chain(aggregation::rules()) {
            c.register(Box::new(r)).expect("built-in rules are consistent");
        }
        c
    }

    /// Built-ins with the merge detector replaced by the variant that reads
    /// its negative preconditions over the *incoming* maps of each source.
    pub fn builtin_with_merge_variant() -> Self {
        let mut c = Catalog::new();
        for r in basic::rules().into_iter().chain(complex::rules()).chain(aggregation::rules()) {
            let r = if r.id == "c7" { complex::merge_variant() } else { r };
            c.register(Box::new(r)).expect("built-in rules are consistent");
        }
        c
    }

    /// Adds a rule at its order position.
    pub fn register(&mut self, rule: Box<dyn Rule>) -> Result<(), RuleError> {
        if !valid_rule_id(rule.id()) {
            return Err(RuleError::InvalidId(rule.id().to_string()));
        }
        if self.rules.iter().any(|r| r.id() == rule.id()) {
            return Err(RuleError::DuplicateId(rule.id().to_string()));
        }
        if rule.recursive() && rule.phase() != Phase::Aggregation {
            return Err(RuleError::RecursionOutsideAggregation(rule.id().to_string()));
        }
        if let Some(other) = self.rules.iter().find(|r| r.phase() == rule.phase() && r.order() == rule.order()) {
            return Err(RuleError::OrderCollision {
                id: rule.id().to_string(),
                other: other.id().to_string(),
                order: rule.order(),
                phase: rule.phase().name(),
            });
        }
        let pos = self.rules.partition_point(|r| (r.phase(), r.order()) < (rule.phase(), rule.order()));
        self.rules.insert(pos, rule);
        Ok(())
    }

    pub fn rules(&self) -> impl Iterator<Item = &dyn Rule> + '_ {
        self.rules.iter().map(|r| r.as_ref())
    }

    pub fn phase(&self, phase: Phase) -> impl Iterator<Item = &dyn Rule> + '_ {
        self.rules().filter(move |r| r.phase() == phase)
    }

    pub fn get(&self, id: &str) -> Option<&dyn Rule> {
        self.rules().find(|r| r.id() == id)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// Functional form of [`Catalog::register`].
pub fn register_rule(mut catalog: Catalog, rule: Box<dyn Rule>) -> Result<Catalog, RuleError> {
    catalog.register(rule)?;
    Ok(catalog)
}
