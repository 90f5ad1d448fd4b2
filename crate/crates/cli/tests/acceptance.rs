//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p evomap-cli --test acceptance`.

#[path = "../../core/tests/common/cases.rs"]
#[allow(dead_code)]
mod cases;
#[path = "../../core/tests/common/expected.rs"]
mod expected;
#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use evomap::engine::{diff_basic_gen, diff_evol_map_gen, is_fixpoint, DiffRun, EngineOptions};
use evomap::io::{parse_match, parse_ontology};
use evomap::migration::{ont_version_mig, roundtrip, MigrateOptions};
use evomap::rules::{AggMode, Catalog};
use evomap::synth::{synthesize, SynthOptions};
use evomap::{DiffMapping, MatchMapping, Ontology};

const CORPUS: usize = 200;

type Outcome = Result<String, String>;

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn literal() -> EngineOptions {
    EngineOptions { agg_mode: AggMode::Literal, ..Default::default() }
}

struct Pair {
    name: String,
    old: Ontology,
    new: Ontology,
    matching: MatchMapping,
    fused: DiffRun,
    literal: DiffRun,
}

impl Pair {
    fn new(name: String, old: Ontology, new: Ontology, matching: MatchMapping) -> Self {
        let cat = Catalog::builtin();
        let fused = diff_evol_map_gen(&old, &new, &matching, &cat, &EngineOptions::default()).unwrap();
        let literal = diff_evol_map_gen(&old, &new, &matching, &cat, &literal()).unwrap();
        Pair { name, old, new, matching, fused, literal }
    }
}

fn running_example() -> Pair {
    let read = |f: &str| std::fs::read_to_string(fixture_path(f)).unwrap();
    let old = parse_ontology(&read("catalog_old.ont")).unwrap().with_label("v1");
    let new = parse_ontology(&read("catalog_new.ont")).unwrap().with_label("v2");
    let matching = parse_match(&read("catalog.match"), &old, &new).unwrap();
    Pair::new("running example".into(), old, new, matching)
}

/// Sizes spread evenly over 10..=2000; even seeds keep edits disjoint, odd
/// seeds let them overlap.
fn corpus() -> Vec<Pair> {
    (0..CORPUS)
        .map(|i| {
            let size = 10 + i * 1990 / (CORPUS - 1);
            let clean = i % 2 == 0;
            let s = synthesize(i as u64, size, (size / 10).max(1), &SynthOptions { clean, ..Default::default() })
                .unwrap_or_else(|e| panic!("synth seed {i} size {size}: {e}"));
            Pair::new(format!("seed {i} size {size}"), s.old, s.new, s.matching)
        })
        .collect()
}

fn live_set(d: &DiffMapping) -> BTreeSet<String> {
    d.live_set()
}

fn expect_set(got: BTreeSet<String>, want: &[&str], what: &str) -> Result<(), String> {
    let want: BTreeSet<String> = want.iter().map(|s| s.to_string()).collect();
    if got == want {
        return Ok(());
    }
    let missing: Vec<_> = want.difference(&got).collect();
    let extra: Vec<_> = got.difference(&want).collect();
    Err(format!("{what}: missing {missing:?}, extra {extra:?}"))
}

fn c1_exact_diffs() -> Outcome {
    let start = Instant::now();
    let ex = running_example();
    for run in [&ex.fused, &ex.literal] {
        expect_set(live_set(&run.basic), &expected::BASIC, "diff_basic")?;
        expect_set(live_set(&run.compact), &expected::COMPACT, "diff_compact")?;
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(1) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{} basic, {} compact ops in {took:.1?}", ex.fused.basic.len(), ex.fused.compact.len()))
}

fn c2_ledger() -> Outcome {
    let start = Instant::now();
    let ex = running_example();
    let got: BTreeSet<(String, String, String)> = ex
        .literal
        .compact
        .trace()
        .into_iter()
        .map(|(by, op, elim)| (by.unwrap_or("").to_string(), op.to_string(), elim.unwrap_or("").to_string()))
        .collect();
    let want: BTreeSet<(String, String, String)> =
        expected::LEDGER.iter().map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())).collect();
    if got != want {
        let missing: Vec<_> = want.difference(&got).collect();
        let extra: Vec<_> = got.difference(&want).collect();
        return Err(format!("missing rows {missing:?}, extra rows {extra:?}"));
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(1) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{} rows match in {took:.1?}", want.len()))
}

fn c3_completeness(corpus: &[Pair]) -> Outcome {
    let mut violations = 0;
    let mut first = None;
    for p in corpus {
        let v = oracle::completeness_violations(&p.old, &p.new, &p.matching, &p.fused.basic);
        if !v.is_empty() && first.is_none() {
            first = Some(format!("{}: {}", p.name, v[0]));
        }
        violations += v.len();
    }
    match first {
        None => Ok(format!("{} pairs, 0 violations", corpus.len())),
        Some(f) => Err(format!("{violations} violations; first {f}")),
    }
}

fn c4_roundtrip(corpus: &[Pair], example: &Pair) -> Outcome {
    let cat = Catalog::builtin();
    for p in corpus.iter().chain([example]) {
        let forward = ont_version_mig(&p.old, &p.fused.basic, MigrateOptions::default())
            .map_err(|e| format!("{}: {e}", p.name))?
            .ontology;
        if !forward.same_elements(&p.new) {
            return Err(format!("{}: migrated version differs from the new one", p.name));
        }
        let report =
            roundtrip(&p.old, &p.new, &p.matching, &cat, MigrateOptions::default()).map_err(|e| format!("{}: {e}", p.name))?;
        if !report.passed() {
            return Err(format!("{}: {}", p.name, report.summary_line()));
        }
    }
    let report = roundtrip(&example.old, &example.new, &example.matching, &cat, MigrateOptions::default()).unwrap();
    Ok(format!("{} pairs; running example {}", corpus.len() + 1, report.summary_line()))
}

fn c5_inverse(corpus: &[Pair], example: &Pair) -> Outcome {
    let cat = Catalog::builtin();
    let opts = EngineOptions::default();
    for p in corpus.iter().chain([example]) {
        let backward = diff_basic_gen(&p.new, &p.old, &p.matching.inverted(), &cat, &opts).unwrap();
        if live_set(&p.fused.basic.invert()) != live_set(&backward) {
            return Err(format!("{}: inverse differs from the reverse diff", p.name));
        }
    }
    Ok(format!("{} pairs, 0 mismatches", corpus.len() + 1))
}

fn c6_lineage(corpus: &[Pair], example: &Pair) -> Outcome {
    let mut runs = 0;
    for p in corpus.iter().chain([example]) {
        for run in [&p.fused, &p.literal] {
            let flat = run.compact.expand_to_basic().map_err(|e| format!("{}: {e}", p.name))?;
            if live_set(&flat) != live_set(&run.basic) {
                return Err(format!("{}: flattened compact diff differs from the basic diff", p.name));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} runs, 0 mismatches"))
}

fn c7_fixpoint_and_bound(corpus: &[Pair], example: &Pair) -> Outcome {
    let cat = Catalog::builtin();
    for p in corpus.iter().chain([example]) {
        for (run, opts) in [(&p.fused, EngineOptions::default()), (&p.literal, literal())] {
            if !is_fixpoint(&p.old, &p.new, &p.matching, run, &cat, &opts).unwrap() {
                return Err(format!("{}: {:?} compact diff is not a fixpoint", p.name, opts.agg_mode));
            }
        }
    }
    let mut passes = Vec::new();
    for (name, case) in cases::CASES {
        for k in [2usize, 4, 8, 16] {
            let (o1, o2, m, op) = case(k);
            let run = diff_evol_map_gen(&o1, &o2, &m, &cat, &literal()).unwrap();
            let bound = k.next_power_of_two().trailing_zeros() as usize + 1;
            if !run.compact.contains(&op) {
                return Err(format!("{name} k={k}: {op} not found"));
            }
            if run.agg_iterations > bound {
                return Err(format!("{name} k={k}: {} passes > {bound}", run.agg_iterations));
            }
            if !is_fixpoint(&o1, &o2, &m, &run, &cat, &literal()).unwrap() {
                return Err(format!("{name} k={k}: not a fixpoint"));
            }
            if name == "merge" {
                passes.push(format!("k={k}:{}", run.agg_iterations));
            }
        }
    }
    Ok(format!("{} fixpoints; literal merge passes {}", 2 * (corpus.len() + 1), passes.join(" ")))
}

fn c8_mode_equivalence(corpus: &[Pair], example: &Pair) -> Outcome {
    for p in corpus.iter().chain([example]) {
        if live_set(&p.fused.compact) != live_set(&p.literal.compact) {
            return Err(format!("{}: literal and fused compact diffs differ", p.name));
        }
    }
    let cat = Catalog::builtin();
    let mut cases = 0;
    for (name, case) in cases::CASES {
        for k in 2..=16 {
            let (o1, o2, m, _) = case(k);
            let f = diff_evol_map_gen(&o1, &o2, &m, &cat, &EngineOptions::default()).unwrap();
            let l = diff_evol_map_gen(&o1, &o2, &m, &cat, &literal()).unwrap();
            if live_set(&f.compact) != live_set(&l.compact) {
                return Err(format!("{name} k={k}: modes differ"));
            }
            cases += 1;
        }
    }
    Ok(format!("{} pairs and {cases} k-way cases agree", corpus.len() + 1))
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

fn c9_scaling() -> Outcome {
    let start = Instant::now();
    let cat = Catalog::builtin();
    let opts = EngineOptions::default();
    let pairs: Vec<_> = [10_000usize, 100_000]
        .into_iter()
        .map(|n| synthesize(42, n, n / 10, &SynthOptions::default()).unwrap())
        .collect();
    let time = |i: usize| {
        let s = &pairs[i];
        let t = Instant::now();
        let run = diff_evol_map_gen(&s.old, &s.new, &s.matching, &cat, &opts).unwrap();
        std::hint::black_box(run);
        t.elapsed()
    };
    // Warm up, then interleave so drift affects both sizes alike.
    time(0);
    time(1);
    let (mut small, mut large) = (Vec::new(), Vec::new());
    for _ in 0..5 {
        small.push(time(0));
        large.push(time(1));
    }
    let (s, l) = (median(small), median(large));
    let ratio = l.as_secs_f64() / s.as_secs_f64();
    let total = start.elapsed();
    let detail = format!("median {s:.1?} at 10k, {l:.1?} at 100k, ratio {ratio:.1} (limit 15), total {total:.1?}");
    if ratio <= 15.0 && total < Duration::from_secs(60) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c10_stats_cli() -> Outcome {
    let dir = std::env::temp_dir().join(format!("evomap-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let (basic, compact) = (dir.join("basic.diff"), dir.join("compact.diff"));
    let bin = env!("CARGO_BIN_EXE_evomap");
    let run = |args: &[&Path]| {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(String::from_utf8_lossy(&out.stderr).into_owned());
        }
        Ok(out.stdout)
    };
    let p = Path::new;
    let result = (|| {
        run(&[
            p("diff"),
            p("--old"),
            &fixture_path("catalog_old.ont"),
            p("--new"),
            &fixture_path("catalog_new.ont"),
            p("--match"),
            &fixture_path("catalog.match"),
            p("--out"),
            &compact,
            p("--basic-out"),
            &basic,
        ])?;
        let stats = [p("stats"), p("--diff"), &compact, p("--basic"), &basic];
        let (a, b) = (run(&stats)?, run(&stats)?);
        if a != b {
            return Err("output differs between runs".to_string());
        }
        let text = String::from_utf8(a).map_err(|e| e.to_string())?;
        let kinds: Vec<&str> =
            text.lines().skip(1).take_while(|l| !l.is_empty()).map(|l| l.split('\t').next().unwrap()).collect();
        let order = [
            "add", "del", "map", "addLeaf", "delLeaf", "merge", "move", "substitute", "toObsolete", "revokeObsolete",
            "addSubGraph", "delSubGraph",
        ];
        if kinds.get(..order.len()) != Some(&order[..]) {
            return Err(format!("kind order {kinds:?}"));
        }
        if !text.contains("ratio %\t44.0\n") {
            return Err(format!("ratio missing in\n{text}"));
        }
        Ok(format!("{} kind rows, ratio 44.0%, byte-stable", kinds.len()))
    })();
    let _ = std::fs::remove_dir_all(&dir);
    result
}

fn guarded<T>(f: impl FnOnce() -> T) -> Result<T, String> {
    panic::catch_unwind(AssertUnwindSafe(f)).map_err(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        format!("panicked: {}", msg.unwrap_or_default())
    })
}

fn check(f: impl FnOnce() -> Outcome) -> Outcome {
    guarded(f).and_then(|r| r)
}

fn main() -> ExitCode {
    // Failures are reported on the criterion line, not as panic dumps.
    panic::set_hook(Box::new(|_| {}));

    let mut results: Vec<(usize, Outcome)> = vec![(1, check(c1_exact_diffs)), (2, check(c2_ledger))];
    match guarded(|| (running_example(), corpus())) {
        Ok((example, corpus)) => {
            let (c, ex) = (corpus.as_slice(), &example);
            results.push((3, check(|| c3_completeness(c))));
            results.push((4, check(|| c4_roundtrip(c, ex))));
            results.push((5, check(|| c5_inverse(c, ex))));
            results.push((6, check(|| c6_lineage(c, ex))));
            results.push((7, check(|| c7_fixpoint_and_bound(c, ex))));
            results.push((8, check(|| c8_mode_equivalence(c, ex))));
        }
        Err(e) => {
            for n in 3..=8 {
                results.push((n, Err(format!("building the corpus {e}"))));
            }
        }
    }
    results.push((9, check(c9_scaling)));
    results.push((10, check(c10_stats_cli)));

    let mut failed = 0;
    for (n, r) in &results {
        match r {
            Ok(detail) => println!("criterion {n}: PASS - {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n}: FAIL - {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
