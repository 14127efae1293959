//! Acceptance criteria, one line each. Runs as a plain binary so the verdicts
//! are printed even when every check passes.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roundtable_core::autocomplete::suggest;
use roundtable_core::schema::{dynamic_schema_for, Stopwords, UserQuery};
use roundtable_core::sql::{execute, parse_sql};
use roundtable_core::table::{load_table, CategoricalPolicy, Cell, Column, CsvOptions, DataType, Table};
use roundtable_core::vocab::{
    create_index, load_index, persist_index, LookupMode, NoSynonyms, SynonymDictionary, VocabIndex,
};
use roundtable_testkit::edit::{allowed_edits, corrupt, osa_distance};
use roundtable_testkit::gen::{phrase, random_table, to_sql, QueryGen};
use roundtable_testkit::{oracle, scan};
use serde_json::Value;

type Verdict = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn fixture_table(file: &str) -> Table {
    let bytes = std::fs::read(fixture(file)).unwrap();
    let name = file.trim_end_matches(".csv");
    load_table(name, &bytes, &CsvOptions::default()).unwrap()
}

fn fixture_index(table: &Table) -> VocabIndex {
    create_index(table, &CategoricalPolicy::default(), &SynonymDictionary::builtin()).unwrap()
}

const FIXTURES: [&str; 2] = ["b2b_sales.csv", "sales.csv"];

fn index_completeness() -> Verdict {
    let start = Instant::now();
    let mut pairs = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..10 {
        let g = random_table(&mut rng, 1000, 8);
        let table = load_table(&g.name, g.csv.as_bytes(), &CsvOptions::default()).unwrap();
        let index = create_index(&table, &CategoricalPolicy::default(), &NoSynonyms).unwrap();
        pairs += scan::check_index(&table, &index).map_err(|e| format!("table {i}: {e}"))?;
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(10) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("10 tables, {pairs} value/token probes, 0 misses, {took:.2?}"))
}

fn example_resolution() -> Verdict {
    let table = fixture_table("b2b_sales.csv");
    let index = fixture_index(&table);
    let q = UserQuery::new("What would be the average profit from selling OneView to Allianz in ANZ").unwrap();
    let schema = dynamic_schema_for(&q, &Stopwords::builtin(), &index).schema;
    for (attr, value) in [("product", "OneView"), ("customer", "Allianz"), ("subregion", "ANZ")] {
        if !schema.binds(attr, value) {
            return Err(format!("{value} not bound to {attr}"));
        }
    }
    Ok("OneView->product, Allianz->customer, ANZ->subregion".into())
}

fn misspelling_tolerance() -> Verdict {
    let stopwords = Stopwords::builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases: Vec<(usize, String, String)> = Vec::new();
    let mut indexes = Vec::new();
    for f in FIXTURES {
        let table = fixture_table(f);
        indexes.push(fixture_index(&table));
    }
    for (n, index) in indexes.iter().enumerate() {
        for v in index.values() {
            if v.canonical_text.chars().count() >= 4 {
                let attr = index.profile(v.attribute_id).normalized_name.clone();
                cases.push((n, attr, v.canonical_text.clone()));
            }
        }
    }
    if cases.is_empty() {
        return Err("no eligible values".into());
    }
    let (mut tried, mut skipped, mut fuzzy_checked) = (0, 0, 0);
    let mut covered = BTreeSet::new();
    let mut i = 0;
    while tried < 1000 {
        let (n, attr, value) = &cases[i % cases.len()];
        let index = &indexes[*n];
        i += 1;
        let Some((typo, _)) = corrupt(&mut rng, value) else { continue };
        // a typo that spells another indexed word or a stopword is no longer a typo
        let original: BTreeSet<String> = scan::words(value).into_iter().collect();
        let changed: Vec<String> = scan::words(&typo).into_iter().filter(|w| !original.contains(w)).collect();
        if changed.iter().any(|w| index.token_map().contains_key(w) || stopwords.contains(w)) {
            skipped += 1;
            continue;
        }
        tried += 1;
        covered.insert(value.clone());
        let q = UserQuery::new(&format!("What is the total for {typo}")).unwrap();
        let outcome = dynamic_schema_for(&q, &stopwords, index);
        if !outcome.schema.binds(attr, value) {
            return Err(format!("{typo:?} did not resolve to {value:?} ({attr})"));
        }
        for kw in &outcome.keywords.keywords {
            if !index.lookup(&kw.text, LookupMode::Exact).is_empty() {
                continue;
            }
            scan::check_fuzzy(index, &kw.text)?;
            for hit in index.lookup(&kw.text, LookupMode::Fuzzy) {
                let d = osa_distance(&kw.text, &hit.matched);
                if d != hit.distance || d > allowed_edits(hit.matched.chars().count()) {
                    return Err(format!("fuzzy hit {kw:?} -> {:?} claims {}, oracle {d}", hit.matched, hit.distance));
                }
            }
            fuzzy_checked += 1;
        }
    }
    Ok(format!(
        "{tried} corruptions over {} values resolved, {fuzzy_checked} fuzzy lookups cross-checked, {skipped} real-word typos skipped",
        covered.len()
    ))
}

fn sql_oracle() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut ran, mut errors) = (0, 0);
    while ran < 500 {
        let g = random_table(&mut rng, 200, 8);
        let table = load_table(&g.name, g.csv.as_bytes(), &CsvOptions::default()).unwrap();
        let mut qrng = ChaCha8Rng::seed_from_u64(rng.gen());
        let mut gen = QueryGen::new(&mut qrng, &table);
        for _ in 0..10 {
            let q = gen.query();
            let text = to_sql(&q);
            let parsed = parse_sql(&text).map_err(|e| format!("{text}: {e}"))?;
            if parsed != q {
                return Err(format!("{text} parsed to a different query"));
            }
            match (execute(&parsed, &table), oracle::run(&q, &table)) {
                (Ok(got), Ok(want)) => oracle::rows_match(&want, &got.rows).map_err(|e| format!("{text}: {e}"))?,
                (Err(_), Err(_)) => errors += 1,
                (got, want) => return Err(format!("{text}: engine {got:?}, oracle {want:?}")),
            }
            ran += 1;
        }
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(60) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{ran} queries, all equal ({errors} rejected by both), {took:.2?}"))
}

fn bench_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let run = |n: usize| -> Result<(Vec<u8>, Vec<u8>), String> {
        let report = dir.path().join(format!("report{n}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_rt"))
            .args(["bench", fixture("b2b_questions.jsonl").to_str().unwrap()])
            .args(["--table", fixture("b2b_sales.csv").to_str().unwrap()])
            .args(["--mode", "both", "--seed", "42", "--report", report.to_str().unwrap()])
            .env_remove("RT_PROVIDER")
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(String::from_utf8_lossy(&out.stderr).into_owned());
        }
        Ok((out.stdout, std::fs::read(report).map_err(|e| e.to_string())?))
    };
    let first = run(1)?;
    let second = run(2)?;
    if first != second {
        return Err("reports differ between runs".into());
    }
    let json: Value = serde_json::from_slice(&first.1).map_err(|e| e.to_string())?;
    let total = json["reports"][0]["overall"]["total"].as_u64().unwrap_or(0);
    let row = json["gain"]["rows"]
        .as_array()
        .and_then(|rows| rows.iter().find(|r| r["category"] == "value_based"))
        .ok_or("no value_based gain row")?;
    let (with, without, delta) = (
        row["with_accuracy"].as_f64().unwrap(),
        row["without_accuracy"].as_f64().unwrap(),
        row["delta"].as_f64().unwrap(),
    );
    if !(with >= without && delta > 0.0) {
        return Err(format!("value_based with {with}, without {without}, gain {delta}"));
    }
    Ok(format!(
        "{total} questions, identical reports, value_based {with:.4} vs {without:.4} (+{delta:.2} pp)"
    ))
}

fn persistence() -> Verdict {
    let mut probes = 0;
    for f in FIXTURES {
        let index = fixture_index(&fixture_table(f));
        let mut bytes = Vec::new();
        persist_index(&index, &mut bytes).map_err(|e| e.to_string())?;
        let loaded = load_index(&mut bytes.as_slice()).map_err(|e| e.to_string())?;
        for term in index.token_map().keys().chain(index.phrase_map().keys()) {
            for mode in [LookupMode::Exact, LookupMode::Prefix, LookupMode::Fuzzy] {
                if loaded.lookup(term, mode) != index.lookup(term, mode) {
                    return Err(format!("{f}: {term:?} {mode:?} differs after reload"));
                }
                probes += 1;
            }
        }
    }
    Ok(format!("{} fixture indexes, {probes} lookups identical", FIXTURES.len()))
}

fn latency_index() -> (VocabIndex, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = BTreeSet::new();
    let mut values = Vec::with_capacity(100_000);
    while values.len() < 100_000 {
        let v = phrase(&mut rng);
        if seen.insert(v.to_lowercase()) {
            values.push(v);
        }
    }
    // ten columns of 10,000 values, each value occurring twice
    let columns = values
        .chunks(10_000)
        .enumerate()
        .map(|(i, chunk)| Column {
            name: format!("attr_{i}"),
            normalized_name: format!("attr_{i}"),
            dtype: DataType::Text,
            values: chunk.iter().chain(chunk).map(|v| Cell::Text(v.clone())).collect(),
        })
        .collect();
    let table = Table::new("big", columns).unwrap();
    let index = create_index(&table, &CategoricalPolicy::default(), &NoSynonyms).unwrap();
    assert_eq!(index.values().len(), 100_000);
    (index, values)
}

fn autocomplete_latency() -> Verdict {
    let (index, values) = latency_index();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let leads = ["", "total sales for ", "how many orders from ", "average profit of attr_3 in "];
    let mut times = Vec::with_capacity(10_000);
    for _ in 0..10_000 {
        let v = values.choose(&mut rng).unwrap();
        let chars: Vec<char> = v.chars().collect();
        let cut = rng.gen_range(1..=chars.len());
        let mut text = leads.choose(&mut rng).unwrap().to_string();
        text.extend(&chars[..cut]);
        let cursor = text.chars().count();
        let t = Instant::now();
        let s = suggest(&index, &text, cursor, 10);
        times.push(t.elapsed());
        std::hint::black_box(s);
    }
    times.sort();
    let median = times[times.len() / 2];
    let p99 = times[times.len() * 99 / 100];
    if median >= Duration::from_millis(20) || p99 >= Duration::from_millis(100) {
        return Err(format!("median {median:?}, p99 {p99:?}"));
    }
    Ok(format!("100000 values, 10000 prefixes: median {median:.2?}, p99 {p99:.2?}"))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 7] = [
        ("index completeness", index_completeness),
        ("example question resolution", example_resolution),
        ("misspelling tolerance", misspelling_tolerance),
        ("sql oracle equivalence", sql_oracle),
        ("end-to-end determinism and direction", bench_determinism),
        ("persistence round trip", persistence),
        ("autocomplete latency", autocomplete_latency),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| {
                Err(p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panicked".into()))
            });
        match verdict {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
