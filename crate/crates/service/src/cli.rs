//! `rt` subcommands.

use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use roundtable_core::autocomplete::{suggest, SuggestionKind};
use roundtable_core::bench::{augment_question, compare_reports, read_question_set, run_eval, BenchError, Technique};
use roundtable_core::pipeline::{Mode, Pipeline};
use roundtable_core::schema::{PromptTemplate, Stopwords};
use roundtable_core::table::{load_table, normalize_identifier, CategoricalPolicy, CsvOptions, Table};
use roundtable_core::vocab::{create_index, load_index, persist_index, NoSynonyms, SynonymDictionary, SynonymProvider, VocabIndex};
use serde_json::json;

use crate::api::{router, AppState};
use crate::config::{Config, ProviderKind};
use crate::registry::Registry;

#[derive(Parser, Debug)]
#[command(name = "rt", version, about = "Vocabulary-indexed question answering over CSV tables")]
pub struct Cli {
    /// TOML config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a vocabulary index for a CSV file.
    Index {
        csv: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Autocomplete a partial question against an index file.
    Suggest {
        index: PathBuf,
        partial: String,
        #[arg(short, default_value_t = 10)]
        k: usize,
        /// Character offset of the cursor; defaults to the end of the text.
        #[arg(long)]
        cursor: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Answer one question about a CSV file.
    Ask {
        csv: PathBuf,
        question: String,
        #[arg(long)]
        execute: bool,
        #[arg(long, default_value = "with")]
        mode: Mode,
        #[arg(long)]
        provider: Option<ProviderKind>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        data_dir: Option<PathBuf>,
        /// Directory served under `/` (the browser console).
        #[arg(long)]
        static_dir: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
    /// Score a question set with and/or without the framework.
    Bench {
        questions: PathBuf,
        #[arg(long)]
        table: PathBuf,
        #[arg(long, value_enum, default_value_t = BenchMode::Both)]
        mode: BenchMode,
        /// Seed for augmentation.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Add augmented variants (comma-separated techniques).
        #[arg(long, value_delimiter = ',')]
        augment: Vec<Technique>,
        #[arg(long)]
        provider: Option<ProviderKind>,
        /// Also write the reports as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// SQL table name; defaults to the CSV file stem.
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct TableArgs {
    /// SQL table name; defaults to the CSV file stem.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, default_value = ",")]
    pub delimiter: char,
    #[arg(long)]
    pub no_header: bool,
    #[arg(long, value_enum, default_value_t = Synonyms::Dictionary)]
    pub synonyms: Synonyms,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Synonyms {
    None,
    Dictionary,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMode {
    With,
    Without,
    Both,
}

fn table_name(csv: &Path, name: Option<&str>) -> String {
    let raw = name.map(str::to_string).unwrap_or_else(|| {
        csv.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    normalize_identifier(&raw).unwrap_or_else(|| "table".into())
}

fn read_table(csv: &Path, args: &TableArgs) -> anyhow::Result<Table> {
    if !args.delimiter.is_ascii() {
        bail!("delimiter must be a single ASCII character");
    }
    let bytes = fs::read(csv).with_context(|| format!("reading {}", csv.display()))?;
    let options = CsvOptions {
        delimiter: args.delimiter as u8,
        has_header: !args.no_header,
    };
    let name = table_name(csv, args.name.as_deref());
    load_table(&name, &bytes, &options).with_context(|| format!("loading {}", csv.display()))
}

fn build_index(table: &Table, synonyms: Synonyms) -> anyhow::Result<VocabIndex> {
    let dictionary = SynonymDictionary::builtin();
    let provider: &dyn SynonymProvider = match synonyms {
        Synonyms::None => &NoSynonyms,
        Synonyms::Dictionary => &dictionary,
    };
    Ok(create_index(table, &CategoricalPolicy::default(), provider)?)
}

fn default_table_args(name: Option<String>) -> TableArgs {
    TableArgs {
        name,
        delimiter: ',',
        no_header: false,
        synonyms: Synonyms::Dictionary,
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    let mut config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Index { csv, output, table } => {
            let t = read_table(&csv, &table)?;
            let index = build_index(&t, table.synonyms)?;
            let mut buf = Vec::new();
            persist_index(&index, &mut buf)?;
            fs::write(&output, buf).with_context(|| format!("writing {}", output.display()))?;
            let indexed = index.profiles().iter().filter(|p| index.is_indexed_attribute(p.attribute_id)).count();
            writeln!(
                out,
                "indexed {} ({} rows, {} columns, {} categorical) -> {}: {} values, {} tokens, {} synonyms",
                t.name,
                t.row_count(),
                t.columns().len(),
                indexed,
                output.display(),
                index.values().len(),
                index.token_map().len(),
                index.synonyms().len()
            )?;
        }
        Command::Suggest {
            index,
            partial,
            k,
            cursor,
            json,
        } => {
            let mut f = std::io::BufReader::new(
                fs::File::open(&index).with_context(|| format!("opening {}", index.display()))?,
            );
            let idx = load_index(&mut f).with_context(|| format!("loading {}", index.display()))?;
            let cursor = cursor.unwrap_or_else(|| partial.chars().count());
            let suggestions = suggest(&idx, &partial, cursor, k);
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&suggestions)?)?;
            } else {
                for s in &suggestions {
                    let kind = match s.kind {
                        SuggestionKind::Attribute => "attribute".to_string(),
                        SuggestionKind::Value => format!("value of {}", s.attribute_name),
                    };
                    writeln!(
                        out,
                        "{:.4}  {}  ({kind})  [{}..{}]",
                        s.score, s.display_text, s.replace_span.0, s.replace_span.1
                    )?;
                }
            }
        }
        Command::Ask {
            csv,
            question,
            execute,
            mode,
            provider,
            json,
            table,
        } => {
            if let Some(p) = provider {
                config.provider = p;
            }
            let t = read_table(&csv, &table)?;
            let index = build_index(&t, table.synonyms)?;
            let provider = config.build_provider()?;
            let (stopwords, template) = (Stopwords::builtin(), PromptTemplate::builtin());
            let pipeline = Pipeline {
                table: &t,
                index: &index,
                stopwords: &stopwords,
                template: &template,
                provider: provider.as_ref(),
            };
            let resp = pipeline.ask(&question, execute, mode)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&resp)?)?;
            } else {
                writeln!(out, "{}", resp.schema_block.trim_end())?;
                writeln!(out)?;
                if let Some(sql) = &resp.canonical_sql {
                    writeln!(out, "SQL: {sql}")?;
                } else if let Some(g) = &resp.generated_query {
                    writeln!(out, "SQL: {}", g.sql_text)?;
                }
                if let Some(v) = &resp.validation {
                    for u in &v.unseen_values {
                        let hint = u.suggestion.as_deref().map(|s| format!(" (did you mean '{s}'?)")).unwrap_or_default();
                        writeln!(out, "warning: '{}' does not occur in {}{hint}", u.literal, u.attribute)?;
                    }
                }
                if let Some(answer) = &resp.answer {
                    writeln!(out, "{}", answer.to_csv().trim_end())?;
                    for w in &answer.warnings {
                        writeln!(out, "warning: {w}")?;
                    }
                }
                if let Some(e) = &resp.error {
                    writeln!(out, "error at {:?} stage ({}): {}", e.stage, e.kind, e.message)?;
                }
            }
            if resp.error.is_some() {
                bail!("question could not be answered");
            }
        }
        Command::Serve {
            port,
            data_dir,
            static_dir,
            host,
        } => {
            if let Some(p) = port {
                config.server.port = p;
            }
            if data_dir.is_some() {
                config.server.data_dir = data_dir;
            }
            if static_dir.is_some() {
                config.server.static_dir = static_dir;
            }
            serve(config, &host)?;
        }
        Command::Bench {
            questions,
            table,
            mode,
            seed,
            augment,
            provider,
            report,
            name,
        } => {
            if let Some(p) = provider {
                config.provider = p;
            }
            let text = bench(&config, &questions, &table, name, mode, seed, &augment, report.as_deref())?;
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench(
    config: &Config,
    questions: &Path,
    csv: &Path,
    name: Option<String>,
    mode: BenchMode,
    seed: u64,
    augment: &[Technique],
    report: Option<&Path>,
) -> anyhow::Result<String> {
    let args = default_table_args(name);
    let table = read_table(csv, &args)?;
    let index = build_index(&table, args.synonyms)?;
    let mut records = read_question_set(questions)?;
    let mut skipped = 0;
    let originals = records.clone();
    for technique in augment {
        for r in &originals {
            match augment_question(r, *technique, seed, &index) {
                Ok(v) => records.push(v),
                Err(BenchError::NotApplicable(_)) => skipped += 1,
                Err(e) => return Err(e.into()),
            }
        }
    }
    let provider = config.build_provider()?;
    let (stopwords, template) = (Stopwords::builtin(), PromptTemplate::builtin());
    let pipeline = Pipeline {
        table: &table,
        index: &index,
        stopwords: &stopwords,
        template: &template,
        provider: provider.as_ref(),
    };
    let modes: &[Mode] = match mode {
        BenchMode::With => &[Mode::WithFramework],
        BenchMode::Without => &[Mode::WithoutFramework],
        BenchMode::Both => &[Mode::WithFramework, Mode::WithoutFramework],
    };
    let reports: Vec<_> = modes.iter().map(|&m| run_eval(&records, &pipeline, m)).collect();

    let mut text = String::new();
    text.push_str(&format!(
        "questions: {} ({} augmented, {} augmentations not applicable), seed {seed}\n\n",
        records.len(),
        records.len() - originals.len(),
        skipped
    ));
    for r in &reports {
        text.push_str(&r.render_text());
        text.push('\n');
    }
    let gain = if reports.len() == 2 {
        let g = compare_reports(&reports[0], &reports[1])?;
        text.push_str("gain (with - without, percentage points)\n");
        text.push_str(&g.render_text());
        Some(g)
    } else {
        None
    };
    if let Some(path) = report {
        let body = json!({"seed": seed, "reports": reports, "gain": gain});
        fs::write(path, serde_json::to_string_pretty(&body)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(text)
}

fn serve(config: Config, host: &str) -> anyhow::Result<()> {
    // built before the runtime: the blocking HTTP client must not be created
    // inside async context
    let provider: Arc<dyn roundtable_core::llm::CompletionProvider> = Arc::from(config.build_provider()?);
    let registry = Registry::new(config.server.data_dir.clone());
    let loaded = registry.load_data_dir(&SynonymDictionary::builtin())?;
    if loaded > 0 {
        log::info!("loaded {loaded} tables from the data directory");
    }
    let state = Arc::new(AppState {
        registry,
        provider,
        stopwords: Stopwords::builtin(),
        template: PromptTemplate::builtin(),
        request_timeout: Duration::from_secs_f64(config.request_timeout_secs),
    });
    let mut app = router(state);
    if let Some(dir) = &config.server.static_dir {
        app = app.fallback_service(tower_http::services::ServeDir::new(dir));
    }
    let addr: SocketAddr = format!("{host}:{}", config.server.port)
        .parse()
        .with_context(|| format!("bad listen address {host}"))?;
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        log::info!("listening on http://{}", listener.local_addr()?);
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok::<_, anyhow::Error>(())
    })
}
