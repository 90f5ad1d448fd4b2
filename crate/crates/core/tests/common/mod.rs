//! Shared loaders for the storage-catalog fixture.

#![allow(dead_code)]

pub mod cases;
pub mod expected;
pub mod oracle;

use std::path::PathBuf;

use evomap::engine::{diff_evol_map_gen, DiffRun, EngineOptions};
use evomap::io::{parse_match, parse_ontology};
use evomap::rules::Catalog;
use evomap::{MatchMapping, Ontology};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub struct Catalog3 {
    pub old: Ontology,
    pub new: Ontology,
    pub matching: MatchMapping,
}

pub fn catalog() -> Catalog3 {
    let old = parse_ontology(&read("catalog_old.ont")).unwrap().with_label("v1");
    let new = parse_ontology(&read("catalog_new.ont")).unwrap().with_label("v2");
    let matching = parse_match(&read("catalog.match"), &old, &new).unwrap();
    Catalog3 { old, new, matching }
}

pub fn run(c: &Catalog3, options: &EngineOptions) -> DiffRun {
    diff_evol_map_gen(&c.old, &c.new, &c.matching, &Catalog::builtin(), options).unwrap()
}
