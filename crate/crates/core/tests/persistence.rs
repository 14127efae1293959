use roundtable_core::table::{load_table, CategoricalPolicy, CsvOptions};
use roundtable_core::vocab::{
    create_index, load_index, persist_index, LookupMode, SynonymDictionary, VocabError, VocabIndex,
};

const FIXTURES: &[(&str, &[u8])] = &[
    ("b2b_sales", include_bytes!("../../../fixtures/b2b_sales.csv")),
    ("sales", include_bytes!("../../../fixtures/sales.csv")),
];

fn build(name: &str, csv: &[u8]) -> VocabIndex {
    let table = load_table(name, csv, &CsvOptions::default()).unwrap();
    create_index(&table, &CategoricalPolicy::default(), &SynonymDictionary::builtin()).unwrap()
}

fn round_trip(index: &VocabIndex) -> VocabIndex {
    let mut bytes = Vec::new();
    persist_index(index, &mut bytes).unwrap();
    load_index(&mut bytes.as_slice()).unwrap()
}

#[test]
fn lookups_survive_a_round_trip() {
    for (name, csv) in FIXTURES {
        let index = build(name, csv);
        let loaded = round_trip(&index);
        assert_eq!(loaded.table_name(), index.table_name());
        assert_eq!(loaded.values(), index.values());
        assert_eq!(loaded.token_map(), index.token_map());
        assert_eq!(loaded.phrase_map(), index.phrase_map());
        for term in index.token_map().keys().chain(index.phrase_map().keys()) {
            for mode in [LookupMode::Exact, LookupMode::Prefix, LookupMode::Fuzzy] {
                assert_eq!(loaded.lookup(term, mode), index.lookup(term, mode), "{term} {mode:?}");
            }
        }
    }
}

#[test]
fn persisted_bytes_are_stable() {
    let (name, csv) = FIXTURES[0];
    let mut a = Vec::new();
    let mut b = Vec::new();
    persist_index(&build(name, csv), &mut a).unwrap();
    persist_index(&round_trip(&build(name, csv)), &mut b).unwrap();
    assert_eq!(a, b);
}

#[test]
fn damaged_files_are_rejected() {
    let (name, csv) = FIXTURES[1];
    let mut bytes = Vec::new();
    persist_index(&build(name, csv), &mut bytes).unwrap();
    let mut bad = bytes.clone();
    bad[5] ^= 0x40;
    assert!(matches!(load_index(&mut bad.as_slice()), Err(VocabError::UnsupportedVersion(_))));
    for pos in [0, 9, bytes.len() / 2, bytes.len() - 1] {
        let mut bad = bytes.clone();
        bad[pos] ^= 0x40;
        assert!(matches!(load_index(&mut bad.as_slice()), Err(VocabError::CorruptIndex(_))), "byte {pos}");
    }
    let short = &bytes[..bytes.len() - 10];
    assert!(load_index(&mut &short[..]).is_err());
}
