//! Rule-based diff evolution mappings between ontology versions.
//!
//! Two versions of an ontology plus a concept match mapping go in; a basic
//! diff (concept, relationship and attribute additions, deletions and maps)
//! and a compact diff (moves, merges, splits, leaf and subgraph additions, …)
//! come out. Compact diffs keep the lineage of every replaced operation, so
//! they can always be flattened back to basic ones, inverted, and used to
//! migrate a version forward or backward.
//!
//! ```
//! use evomap::{engine, io, matching, rules::Catalog};
//!
//! let old = io::parse_ontology("[concepts]\nroot\n").unwrap();
//! let new = io::parse_ontology("[concepts]\nroot\nx\n[relationships]\nx\tis_a\troot\n").unwrap();
//! let m = matching::match_by_id(&old, &new);
//! let run = engine::diff_evol_map_gen(&old, &new, &m, &Catalog::builtin(), &Default::default()).unwrap();
//! assert_eq!(run.basic.len(), 2);
//! assert_eq!(run.compact.live_set().into_iter().collect::<Vec<_>>(), ["addLeaf(x,{root})"]);
//! ```

pub mod change;
pub mod engine;
pub mod error;
pub mod io;
pub mod matching;
pub mod migration;
pub mod ontology;
pub mod rules;
pub mod stats;
pub mod synth;

pub use change::{ChangeOp, DiffKind, DiffMapping, OpId, OpKind, Phase};
pub use matching::MatchMapping;
pub use ontology::{validate, Attribute, ConceptId, Element, Ontology, Relationship};
