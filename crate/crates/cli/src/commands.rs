//! Command implementations.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use evomap::engine::{diff_evol_map_gen, EngineOptions};
use evomap::io::{
    parse_diff, parse_match, parse_obo, parse_ontology, serialize_diff, serialize_match, serialize_ontology, OboOptions,
};
use evomap::matching::{match_by_id, match_by_label_path, validate_match};
use evomap::migration::{migrate as migrate_version, roundtrip as roundtrip_versions, MigrateOptions};
use evomap::rules::{AggMode, Catalog};
use evomap::stats::{kind_counts, render_comparison, render_kind_table, Comparison};
use evomap::synth::{synthesize, SynthOptions};
use evomap::{DiffMapping, MatchMapping, Ontology};

use crate::repo::{ArtifactKind, Repository};
use crate::{Agg, EngineArgs, Format, Matcher, RepoCommand, RoundtripMismatch, VersionPair};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn label_of(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn load_ontology(path: &Path, format: Format) -> Result<Ontology> {
    let text = read(path)?;
    let o = match format {
        Format::Native => parse_ontology(&text),
        Format::Obo => parse_obo(&text, &OboOptions::default()).map(|(o, report)| {
            if report.ignored_tags + report.ignored_stanzas > 0 {
                eprintln!(
                    "note: {}: ignored {} tags and {} stanzas",
                    path.display(),
                    report.ignored_tags,
                    report.ignored_stanzas
                );
            }
            o
        }),
    }
    .with_context(|| format!("parsing {}", path.display()))?;
    Ok(o.with_label(label_of(path)))
}

fn load_diff(path: &Path) -> Result<DiffMapping> {
    parse_diff(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_pair(pair: &VersionPair) -> Result<(Ontology, Ontology, MatchMapping)> {
    let old = load_ontology(&pair.old, pair.format)?;
    let new = load_ontology(&pair.new, pair.format)?;
    let m = match &pair.match_file {
        Some(p) => parse_match(&read(p)?, &old, &new).with_context(|| format!("parsing {}", p.display()))?,
        None => match pair.matcher {
            Matcher::Id => match_by_id(&old, &new),
            Matcher::Label => match_by_label_path(&old, &new, &pair.label_attr),
        },
    };
    Ok((old, new, m))
}

fn engine_options(args: &EngineArgs) -> EngineOptions {
    let agg_mode = match args.agg {
        Agg::Literal => AggMode::Literal,
        Agg::Fused => AggMode::Fused,
    };
    EngineOptions { agg_mode, obsolete_attr: args.obsolete_attr.clone() }
}

pub fn diff(pair: &VersionPair, engine: &EngineArgs, out: Option<&Path>, basic_out: Option<&Path>) -> Result<()> {
    let (old, new, m) = load_pair(pair)?;
    let run = diff_evol_map_gen(&old, &new, &m, &Catalog::builtin(), &engine_options(engine))?;
    if let Some(p) = basic_out {
        write_out(Some(p), &serialize_diff(&run.basic))?;
    }
    write_out(out, &serialize_diff(&run.compact))?;
    let summary = format!(
        "diff_basic: {} ops, diff_compact: {} ops, aggregation passes: {}",
        run.basic.len(),
        run.compact.len(),
        run.agg_iterations
    );
    // Keep stdout clean when it carries the diff itself.
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

pub fn migrate(old: &Path, format: Format, diff: &Path, out: Option<&Path>, lenient: bool) -> Result<()> {
    let o = load_ontology(old, format)?;
    let d = load_diff(diff)?;
    let result = migrate_version(&o, &d, MigrateOptions { lenient })
        .with_context(|| format!("migrating {} with {}", old.display(), diff.display()))?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    write_out(out, &serialize_ontology(&result.ontology))
}

pub fn invert(diff: &Path, out: Option<&Path>) -> Result<()> {
    write_out(out, &serialize_diff(&load_diff(diff)?.invert()))
}

pub fn roundtrip(pair: &VersionPair) -> Result<()> {
    let (old, new, m) = load_pair(pair)?;
    let report = roundtrip_versions(&old, &new, &m, &Catalog::builtin(), MigrateOptions::default())?;
    println!("{}", report.summary_line());
    if report.passed() {
        Ok(())
    } else {
        Err(RoundtripMismatch(format!(
            "forward {}, backward {}",
            if report.forward_ok { "ok" } else { "differs" },
            if report.backward_ok { "ok" } else { "differs" }
        ))
        .into())
    }
}

pub fn stats(diff: &Path, basic: Option<&Path>) -> Result<()> {
    let d = load_diff(diff)?;
    let mut out = render_kind_table(&kind_counts(&d));
    if let Some(b) = basic {
        out.push('\n');
        out.push_str(&render_comparison(&Comparison::new(&load_diff(b)?, &d)));
    }
    write_out(None, &out)
}

pub fn match_versions(pair: &VersionPair, out: Option<&Path>) -> Result<()> {
    let (old, new, m) = load_pair(pair)?;
    let report = validate_match(&m, &old, &new);
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    if !report.is_ok() {
        anyhow::bail!(evomap::error::EngineError::InvalidMatch(report.violations.join("; ")));
    }
    eprintln!("{} pairs", m.len());
    write_out(out, &serialize_match(&m))
}

pub fn synth(seed: u64, size: usize, edits: usize, out_dir: &Path, dirty: bool) -> Result<()> {
    let s = synthesize(seed, size, edits, &SynthOptions { clean: !dirty, ..Default::default() })?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let files = [
        ("old.ont", serialize_ontology(&s.old)),
        ("new.ont", serialize_ontology(&s.new)),
        ("match.tsv", serialize_match(&s.matching)),
        ("script.txt", s.script.to_string()),
    ];
    for (name, text) in files {
        write_out(Some(&out_dir.join(name)), &text)?;
    }
    println!("{} concepts -> {} concepts, {} steps", s.old.concepts().len(), s.new.concepts().len(), s.script.steps.len());
    Ok(())
}

pub fn rules_list() -> Result<()> {
    let mut out = String::from("id\tphase\torder\tsummary\n");
    for r in Catalog::builtin().rules() {
        out += &format!("{}\t{}\t{}\t{}\n", r.id(), r.phase().name(), r.order(), r.summary());
    }
    write_out(None, &out)
}

pub fn repo(root: &Path, command: RepoCommand) -> Result<()> {
    match command {
        RepoCommand::Init => {
            Repository::init(root)?;
            println!("initialized {}", root.display());
        }
        RepoCommand::Put { file, name, kind, force_new_entry } => {
            let repo = Repository::open(root)?;
            let content = fs::read(&file).with_context(|| format!("reading {}", file.display()))?;
            let kind = match kind.as_deref() {
                Some("version") => ArtifactKind::Version,
                Some("match") => ArtifactKind::Match,
                Some("diff") => ArtifactKind::Diff,
                _ => ArtifactKind::sniff(&content),
            };
            let e = repo.put(&name, kind, &content, force_new_entry)?;
            println!("{}\t{}\t{}\t{}", e.name, e.kind, e.hash, e.size);
        }
        RepoCommand::Get { name, out } => {
            let (_, content) = Repository::open(root)?.get(&name)?;
            match out {
                Some(p) => fs::write(&p, content).with_context(|| format!("writing {}", p.display()))?,
                None => std::io::stdout().write_all(&content)?,
            }
        }
        RepoCommand::List => {
            for e in Repository::open(root)?.list()? {
                println!("{}\t{}\t{}\t{}", e.name, e.kind, e.hash, e.size);
            }
        }
    }
    Ok(())
}
