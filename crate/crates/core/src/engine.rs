//! Diff generation: the basic phase, one ordered pass of complex rules, and
//! the aggregation fixpoint.

use std::collections::HashSet;

use crate::change::{DiffKind, DiffMapping, OpId, Phase};
use crate::error::EngineError;
use crate::matching::{validate_match, MatchMapping};
use crate::ontology::Ontology;
use crate::rules::{AggMode, Catalog, Rule, RuleContext};

#[derive(Debug, Clone)]
pub struct EngineOptions {
    pub agg_mode: AggMode,
    /// Attribute whose `false`/`true` flips are reported as obsolescence.
    pub obsolete_attr: String,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self { agg_mode: AggMode::default(), obsolete_attr: "obsolete".to_string() }
    }
}

/// The fixed inputs of one diff run.
#[derive(Clone, Copy)]
pub struct Inputs<'a> {
    pub old: &'a Ontology,
    pub new: &'a Ontology,
    pub matching: &'a MatchMapping,
    /// Frozen basic diff, once it exists.
    pub basic: Option<&'a DiffMapping>,
    pub options: &'a EngineOptions,
}

impl<'a> Inputs<'a> {
    fn context(&self, live: &'a DiffMapping) -> RuleContext<'a> {
        RuleContext {
            old: self.old,
            new: self.new,
            matching: self.matching,
            basic: self.basic,
            live,
            mode: self.options.agg_mode,
            obsolete_attr: &self.options.obsolete_attr,
        }
    }
}

/// Result of [`diff_evol_map_gen`].
#[derive(Debug, Clone)]
pub struct DiffRun {
    pub basic: DiffMapping,
    /// Live ops form the compact diff; eliminated ones carry its lineage.
    pub compact: DiffMapping,
    /// Aggregation passes, including the final one that changed nothing.
    pub agg_iterations: usize,
}

fn check_phase(rule: &dyn Rule, expected: &[Phase]) -> Result<(), EngineError> {
    if expected.contains(&rule.phase()) {
        Ok(())
    } else {
        Err(EngineError::WrongPhase { rule: rule.id().to_string(), expected: expected[0].name(), found: rule.phase().name() })
    }
}

/// Binds `rule` against a snapshot of `d`, then applies every accepted
/// binding: all creates first (deduplicated against live ops), then all
/// eliminates. Returns whether `d` changed.
fn apply(inputs: &Inputs<'_>, rule: &dyn Rule, d: &mut DiffMapping) -> bool {
    let bindings = rule.bind(&inputs.context(d));
    if bindings.is_empty() {
        return false;
    }
    let mut claimed: HashSet<OpId> = HashSet::new();
    let accepted: Vec<_> = bindings
        .into_iter()
        .filter(|b| {
            if b.claims.iter().any(|id| claimed.contains(id)) {
                return false;
            }
            claimed.extend(b.claims.iter().copied());
            true
        })
        .collect();

    let mut changed = false;
    // An op that is re-created while live survives this invocation's eliminates.
    let mut protected: HashSet<OpId> = HashSet::new();
    for b in &accepted {
        for action in &b.actions {
            let (id, fresh) = d.create(action.create.clone(), rule.phase(), Some(rule.id()), action.consumes.clone());
            if fresh {
                changed = true;
            } else {
                protected.insert(id);
            }
        }
    }
    for b in &accepted {
        for id in &b.eliminates {
            if !protected.contains(id) && d.eliminate(*id, rule.id()) {
                changed = true;
            }
        }
    }
    changed
}

/// Applies one basic rule to the growing basic diff.
pub fn apply_basic_rule(inputs: &Inputs<'_>, rule: &dyn Rule, d: &mut DiffMapping) -> Result<bool, EngineError> {
    check_phase(rule, &[Phase::Basic])?;
    Ok(apply(inputs, rule, d))
}

/// Applies one complex or aggregation rule to the working set.
pub fn apply_rule(inputs: &Inputs<'_>, rule: &dyn Rule, d: &mut DiffMapping) -> Result<bool, EngineError> {
    check_phase(rule, &[Phase::Complex, Phase::Aggregation])?;
    Ok(apply(inputs, rule, d))
}

/// Runs the aggregation rules in order until a full pass changes nothing.
/// Returns the number of passes, including that last one.
///
/// A rule invocation that changes the set without shrinking it would break
/// termination and is reported as an error.
pub fn apply_agg_rules<'r>(
    inputs: &Inputs<'_>,
    rules: impl IntoIterator<Item = &'r dyn Rule> + Clone,
    d: &mut DiffMapping,
) -> Result<usize, EngineError> {
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut changed = false;
        for rule in rules.clone() {
            check_phase(rule, &[Phase::Aggregation])?;
            let before = d.len();
            if apply(inputs, rule, d) {
                if d.len() >= before {
                    return Err(EngineError::NonReducingRule(rule.id().to_string()));
                }
                changed = true;
            }
        }
        if !changed {
            return Ok(iterations);
        }
    }
}

fn check_match(o1: &Ontology, o2: &Ontology, m: &MatchMapping) -> Result<(), EngineError> {
    let report = validate_match(m, o1, o2);
    if report.is_ok() {
        Ok(())
    } else {
        Err(EngineError::InvalidMatch(report.violations.join("; ")))
    }
}

/// The basic diff: every basic rule once, in order.
pub fn diff_basic_gen(
    o1: &Ontology,
    o2: &Ontology,
    m: &MatchMapping,
    catalog: &Catalog,
    options: &EngineOptions,
) -> Result<DiffMapping, EngineError> {
    check_match(o1, o2, m)?;
    let inputs = Inputs { old: o1, new: o2, matching: m, basic: None, options };
    let mut d = DiffMapping::new(DiffKind::Basic, o1.version_label(), o2.version_label());
    for rule in catalog.phase(Phase::Basic) {
        apply_basic_rule(&inputs, rule, &mut d)?;
    }
    Ok(d)
}

/// Complex pass and aggregation fixpoint over a copy of `basic`.
pub fn compact(
    o1: &Ontology,
    o2: &Ontology,
    m: &MatchMapping,
    basic: &DiffMapping,
    start: &DiffMapping,
    catalog: &Catalog,
    options: &EngineOptions,
) -> Result<(DiffMapping, usize), EngineError> {
    let inputs = Inputs { old: o1, new: o2, matching: m, basic: Some(basic), options };
    let mut d = start.clone();
    d.set_kind(DiffKind::Working);
    for rule in catalog.phase(Phase::Complex) {
        apply_rule(&inputs, rule, &mut d)?;
    }
    let agg: Vec<&dyn Rule> = catalog.phase(Phase::Aggregation).collect();
    let iterations = apply_agg_rules(&inputs, agg.iter().copied(), &mut d)?;
    d.set_kind(DiffKind::Compact);
    Ok((d, iterations))
}

/// Computes both the basic and the compact diff of `o1 -> o2`.
pub fn diff_evol_map_gen(
    o1: &Ontology,
    o2: &Ontology,
    m: &MatchMapping,
    catalog: &Catalog,
    options: &EngineOptions,
) -> Result<DiffRun, EngineError> {
    let basic = diff_basic_gen(o1, o2, m, catalog, options)?;
    let (compact, agg_iterations) = compact(o1, o2, m, &basic, &basic, catalog, options)?;
    Ok(DiffRun { basic, compact, agg_iterations })
}

/// Re-runs the complex and aggregation phases on a finished compact diff.
/// Returns true when nothing changed (the diff is a rule fixpoint).
pub fn is_fixpoint(
    o1: &Ontology,
    o2: &Ontology,
    m: &MatchMapping,
    run: &DiffRun,
    catalog: &Catalog,
    options: &EngineOptions,
) -> Result<bool, EngineError> {
    let (again, _) = compact(o1, o2, m, &run.basic, &run.compact, catalog, options)?;
    Ok(again.records().len() == run.compact.records().len() && again.live_set() == run.compact.live_set())
}
