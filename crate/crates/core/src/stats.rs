//! Per-kind counts of a diff and the basic-versus-compact comparison.

use std::fmt::Write as _;

use crate::change::{DiffMapping, OpKind};

/// Row labels and kinds, in report order: the concept-level kinds first,
/// then `split` and the relationship- and attribute-level basic kinds.
pub const KIND_ROWS: [(&str, OpKind); 19] = [
    ("add", OpKind::AddC),
    ("del", OpKind::DelC),
    ("map", OpKind::MapC),
    ("addLeaf", OpKind::AddLeaf),
    ("delLeaf", OpKind::DelLeaf),
    ("merge", OpKind::Merge),
    ("move", OpKind::Move),
    ("substitute", OpKind::Substitute),
    ("toObsolete", OpKind::ToObsolete),
    ("revokeObsolete", OpKind::RevokeObsolete),
    ("addSubGraph", OpKind::AddSubGraph),
    ("delSubGraph", OpKind::DelSubGraph),
    ("split", OpKind::Split),
    ("addR", OpKind::AddR),
    ("delR", OpKind::DelR),
    ("mapR", OpKind::MapR),
    ("addA", OpKind::AddA),
    ("delA", OpKind::DelA),
    ("mapA", OpKind::MapA),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KindCounts {
    pub rows: Vec<(&'static str, usize)>,
    pub total: usize,
}

pub fn kind_counts(d: &DiffMapping) -> KindCounts {
    let rows: Vec<(&'static str, usize)> = KIND_ROWS.iter().map(|(label, k)| (*label, d.live_count(*k))).collect();
    KindCounts { total: rows.iter().map(|(_, n)| n).sum(), rows }
}

/// Basic-versus-compact sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub basic_len: usize,
    pub compact_len: usize,
    /// Basic-kind ops left in the compact diff.
    pub compact_basic: usize,
    /// Complex ops in the compact diff.
    pub compact_complex: usize,
}

impl Comparison {
    pub fn new(basic: &DiffMapping, compact: &DiffMapping) -> Self {
        let compact_basic = compact.live().filter(|(_, op)| op.is_basic()).count();
        Comparison {
            basic_len: basic.len(),
            compact_len: compact.len(),
            compact_basic,
            compact_complex: compact.len() - compact_basic,
        }
    }

    /// `|compact| / |basic|` in percent with one decimal, or `None` for an empty basic diff.
    pub fn ratio_percent(&self) -> Option<String> {
        (self.basic_len > 0).then(|| format!("{:.1}", self.compact_len as f64 * 100.0 / self.basic_len as f64))
    }
}

/// Renders the per-kind table, one `label<TAB>count` row per kind and a `Σ` row.
pub fn render_kind_table(counts: &KindCounts) -> String {
    let mut out = String::from("kind\tcount\n");
    for (label, n) in &counts.rows {
        let _ = writeln!(out, "{label}\t{n}");
    }
    let _ = writeln!(out, "\u{3a3}\t{}", counts.total);
    out
}

pub fn render_comparison(c: &Comparison) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "|diff_basic|\t{}", c.basic_len);
    let _ = writeln!(out, "|diff_compact|\t{}", c.compact_len);
    let _ = writeln!(out, "#basic\t{}", c.compact_basic);
    let _ = writeln!(out, "#complex\t{}", c.compact_complex);
    let _ = writeln!(out, "ratio %\t{}", c.ratio_percent().as_deref().unwrap_or("n/a"));
    out
}
