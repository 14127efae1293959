//! Tables and their indexes, keyed by table id, with optional on-disk
//! copies (`<id>.csv` + `<id>.idx`) reloaded at startup.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use roundtable_core::table::{load_table, normalize_identifier, CategoricalPolicy, CsvOptions, Table};
use roundtable_core::vocab::{create_index, load_index, persist_index, SynonymProvider, VocabIndex};

#[derive(Clone)]
pub struct Entry {
    pub table: Arc<Table>,
    pub index: Arc<VocabIndex>,
    /// Seconds since the Unix epoch.
    pub built_at: u64,
}

pub struct Registry {
    entries: RwLock<BTreeMap<String, Entry>>,
    data_dir: Option<PathBuf>,
    policy: CategoricalPolicy,
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl Registry {
    pub fn new(data_dir: Option<PathBuf>) -> Self {
        Self {
            entries: RwLock::new(BTreeMap::new()),
            data_dir,
            policy: CategoricalPolicy::default(),
        }
    }

    pub fn policy(&self) -> &CategoricalPolicy {
        &self.policy
    }

    /// Loads every `<id>.csv` in the data directory. A missing or unreadable
    /// index file is rebuilt from the CSV.
    pub fn load_data_dir(&self, synonyms: &dyn SynonymProvider) -> anyhow::Result<usize> {
        let Some(dir) = &self.data_dir else { return Ok(0) };
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .collect();
        paths.sort();
        let mut loaded = 0;
        for csv in paths {
            let id = csv.file_stem().unwrap().to_string_lossy().into_owned();
            let bytes = fs::read(&csv)?;
            let table = load_table(&id, &bytes, &CsvOptions::default())
                .with_context(|| format!("loading {}", csv.display()))?;
            let idx_path = csv.with_extension("idx");
            let index = match fs::File::open(&idx_path).map(std::io::BufReader::new) {
                Ok(mut f) => match load_index(&mut f) {
                    Ok(ix) if ix.table_name() == table.name => Some(ix),
                    Ok(_) => None,
                    Err(e) => {
                        log::warn!("{}: {e}; rebuilding", idx_path.display());
                        None
                    }
                },
                Err(_) => None,
            };
            let index = match index {
                Some(ix) => ix,
                None => {
                    let ix = create_index(&table, &self.policy, synonyms)?;
                    write_index(&idx_path, &ix)?;
                    ix
                }
            };
            self.entries.write().unwrap().insert(
                id,
                Entry {
                    table: Arc::new(table),
                    index: Arc::new(index),
                    built_at: now(),
                },
            );
            loaded += 1;
        }
        Ok(loaded)
    }

    pub fn get(&self, id: &str) -> Option<Entry> {
        self.entries.read().unwrap().get(id).cloned()
    }

    pub fn ids(&self) -> Vec<String> {
        self.entries.read().unwrap().keys().cloned().collect()
    }

    /// Parses and indexes `csv` outside the lock, then inserts it under a
    /// fresh id derived from `name`. The id doubles as the SQL table name.
    pub fn insert_csv(&self, name: &str, csv: &[u8], synonyms: &dyn SynonymProvider) -> anyhow::Result<(String, Entry)> {
        let base = normalize_identifier(name).unwrap_or_else(|| "table".into());
        let mut table = load_table(&base, csv, &CsvOptions::default())?;
        loop {
            let id = self.free_id(&base);
            table.name = id.clone();
            let index = create_index(&table, &self.policy, synonyms)?;
            let mut entries = self.entries.write().unwrap();
            if entries.contains_key(&id) {
                // lost a race for the id; pick again
                continue;
            }
            let entry = Entry {
                table: Arc::new(table),
                index: Arc::new(index),
                built_at: now(),
            };
            if let Some(dir) = &self.data_dir {
                fs::write(dir.join(format!("{id}.csv")), csv)?;
                write_index(&dir.join(format!("{id}.idx")), &entry.index)?;
            }
            entries.insert(id.clone(), entry.clone());
            return Ok((id, entry));
        }
    }

    fn free_id(&self, base: &str) -> String {
        let entries = self.entries.read().unwrap();
        let mut id = base.to_string();
        let mut n = 2;
        while entries.contains_key(&id) {
            id = format!("{base}_{n}");
            n += 1;
        }
        id
    }

    /// Replaces the index of `id`. Returns `None` for an unknown id.
    pub fn replace_index(&self, id: &str, index: VocabIndex) -> anyhow::Result<Option<Entry>> {
        let mut entries = self.entries.write().unwrap();
        let Some(entry) = entries.get_mut(id) else { return Ok(None) };
        entry.index = Arc::new(index);
        entry.built_at = now();
        if let Some(dir) = &self.data_dir {
            write_index(&dir.join(format!("{id}.idx")), &entry.index)?;
        }
        Ok(Some(entry.clone()))
    }
}

fn write_index(path: &Path, index: &VocabIndex) -> anyhow::Result<()> {
    let mut buf = Vec::new();
    persist_index(index, &mut buf)?;
    fs::write(path, buf).with_context(|| format!("writing {}", path.display()))
}
