use std::io::Read;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use kgatlas_core::cypher::{self, Params};
use kgatlas_core::graph::{GraphStore, PropertyValue, RawSnapshot, SharedStore};
use kgatlas_core::ingest::mock::{MockEmbedder, MockLanguageModel, MockSearchEngine};
use kgatlas_core::ingest::providers::{Embedder, LanguageModel, SearchEngine};
use kgatlas_core::ingest::{self, PipelineConfig, ProductQuery, Providers};
use kgatlas_core::schema;
use thiserror::Error;

use crate::api::{self, AppState};
use crate::config::{Config, ConfigError, ProviderMode};
use crate::live;

#[derive(Debug, Parser)]
#[command(
    name = "kgatlas",
    version,
    about = "Product knowledge graph server and tools"
)]
pub struct Cli {
    /// JSON config file; defaults to $KGATLAS_CONFIG.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Serve the REST API and the UI bundle.
    Serve {
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Validate a snapshot file and install it as the working store.
    Load { snapshot: PathBuf },
    /// Run the ingestion pipeline for one product query.
    Ingest(IngestArgs),
    /// Run a query against the store; `-` reads it from stdin.
    Query {
        text: String,
        /// `name=value`; numbers and true/false are typed, quote to force text.
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
    /// Print label and relationship counts.
    Stats {
        /// Also check the schema and fail on violations.
        #[arg(long)]
        validate: bool,
    },
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Product name, e.g. "computing server".
    #[arg(long)]
    pub query: String,
    /// Specification parameter `key=value`; repeatable.
    #[arg(long = "spec", value_name = "KEY=VALUE")]
    pub spec: Vec<String>,
    #[arg(long, value_parser = clap::value_parser!(ProviderMode))]
    pub providers: Option<ProviderMode>,
    /// Page corpus for the mock search engine.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub page_target: usize,
    /// Write the run report as JSON here.
    #[arg(long)]
    pub out_report: Option<PathBuf>,
}

impl clap::ValueEnum for ProviderMode {
    fn value_variants<'a>() -> &'a [Self] {
        &[ProviderMode::Mock, ProviderMode::Live]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            ProviderMode::Mock => "mock",
            ProviderMode::Live => "live",
        }))
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Snapshot(#[from] kgatlas_core::graph::SnapshotError),
    #[error("snapshot violates the schema:\n{0}")]
    Schema(String),
    #[error(transparent)]
    Query(#[from] cypher::QueryError),
    #[error(transparent)]
    Ingest(#[from] ingest::IngestError),
    #[error("provider setup failed: {0}")]
    Provider(String),
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

/// Parses `name=value`: quoted values are text, then number, then
/// true/false, else text.
pub fn parse_param(s: &str) -> Result<(String, PropertyValue), CliError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("parameter `{s}` is not name=value")))?;
    let k = k.trim().trim_start_matches('$');
    if k.is_empty() {
        return Err(CliError::Usage(format!("parameter `{s}` has no name")));
    }
    let quoted = v.len() >= 2
        && ((v.starts_with('\'') && v.ends_with('\'')) || (v.starts_with('"') && v.ends_with('"')));
    let value = if quoted {
        PropertyValue::text(&v[1..v.len() - 1])
    } else if let Some(n) = v.parse::<f64>().ok().filter(|n| n.is_finite()) {
        PropertyValue::Number(n)
    } else if v == "true" || v == "false" {
        PropertyValue::Flag(v == "true")
    } else {
        PropertyValue::text(v)
    };
    Ok((k.to_string(), value))
}

fn parse_spec(s: &str) -> Result<(String, String), CliError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("spec `{s}` is not key=value")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// The working store; a missing file is an empty store.
pub fn open_store(path: &Path) -> Result<GraphStore, CliError> {
    if path.exists() {
        Ok(GraphStore::load(path)?)
    } else {
        Ok(GraphStore::new())
    }
}

fn env_var(k: &str) -> Option<String> {
    std::env::var(k).ok()
}

pub fn language_model(config: &Config) -> Result<Arc<dyn LanguageModel>, CliError> {
    match config.providers.mode {
        ProviderMode::Mock => Ok(Arc::new(MockLanguageModel::default())),
        ProviderMode::Live => Ok(Arc::new(
            live::ChatModel::from_env(env_var, timeout(config))
                .map_err(|e| CliError::Provider(e.0))?,
        )),
    }
}

fn timeout(config: &Config) -> Duration {
    Duration::from_millis(config.providers.timeout_ms)
}

/// Runs one command and returns what it prints on success.
pub fn run(cli: Cli) -> Result<String, CliError> {
    let config = Config::resolve(cli.config.as_deref(), env_var)?;
    match cli.command {
        Command::Serve { port, snapshot } => {
            let mut config = config;
            if let Some(p) = port {
                config.port = p;
            }
            if let Some(s) = snapshot {
                config.snapshot_path = s;
            }
            serve(&config)?;
            Ok(String::new())
        }
        Command::Load { snapshot } => load(&config, &snapshot),
        Command::Ingest(args) => run_ingest(&config, args),
        Command::Query { text, params } => run_query(&config, &text, &params),
        Command::Stats { validate } => stats(&config, validate),
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

fn load(config: &Config, source: &Path) -> Result<String, CliError> {
    let text =
        std::fs::read_to_string(source).map_err(io(format!("cannot read {}", source.display())))?;
    let raw = RawSnapshot::parse(&text)?;
    let violations = schema::validate_snapshot(&raw);
    if !violations.is_empty() {
        let lines: Vec<String> = violations
            .iter()
            .map(|v| format!("  {}", v.message))
            .collect();
        return Err(CliError::Schema(lines.join("\n")));
    }
    let store = GraphStore::try_from(raw)?;
    store.snapshot(&config.snapshot_path)?;
    Ok(pretty(&store.stats()))
}

fn stats(config: &Config, validate: bool) -> Result<String, CliError> {
    let store = open_store(&config.snapshot_path)?;
    if validate {
        let violations = schema::validate(&store);
        if !violations.is_empty() {
            return Err(CliError::Schema(pretty(&violations)));
        }
    }
    Ok(pretty(&store.stats()))
}

fn run_query(config: &Config, text: &str, raw_params: &[String]) -> Result<String, CliError> {
    let text = if text == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(io("cannot read stdin"))?;
        s
    } else {
        text.to_string()
    };
    let params: Params = raw_params
        .iter()
        .map(|p| parse_param(p))
        .collect::<Result<_, _>>()?;
    let query = cypher::parse(&text)?;
    let table = if query.is_read_only() {
        cypher::execute_read(&query, &params, &open_store(&config.snapshot_path)?)?
    } else {
        let mut store = open_store(&config.snapshot_path)?;
        let t = cypher::execute(&query, &params, &mut store)?;
        store.snapshot(&config.snapshot_path)?;
        t
    };
    Ok(pretty(&table.to_json_rows()))
}

fn run_ingest(config: &Config, args: IngestArgs) -> Result<String, CliError> {
    let query = ProductQuery {
        name: args.query,
        spec_params: args
            .spec
            .iter()
            .map(|s| parse_spec(s))
            .collect::<Result<_, _>>()?,
    };
    let mode = args.providers.unwrap_or(config.providers.mode);
    let lm: Box<dyn LanguageModel>;
    let search: Box<dyn SearchEngine>;
    let embedder: Box<dyn Embedder>;
    match mode {
        ProviderMode::Mock => {
            let dir = args.corpus.unwrap_or_else(|| config.corpus_dir());
            lm = Box::new(MockLanguageModel::default());
            search = Box::new(
                MockSearchEngine::from_dir(&dir)
                    .map_err(io(format!("cannot load corpus {}", dir.display())))?,
            );
            embedder = Box::new(MockEmbedder::default());
        }
        ProviderMode::Live => {
            let t = timeout(config);
            let setup =
                |e: kgatlas_core::ingest::providers::ProviderFailure| CliError::Provider(e.0);
            lm = Box::new(live::ChatModel::from_env(env_var, t).map_err(setup)?);
            search = Box::new(live::HttpSearch::from_env(env_var, t).map_err(setup)?);
            embedder = Box::new(live::HttpEmbedder::from_env(env_var, t).map_err(setup)?);
        }
    }

    let mut store = open_store(&config.snapshot_path)?;
    let out = ingest::run_pipeline(
        &query,
        Providers {
            lm: lm.as_ref(),
            search: search.as_ref(),
            embedder: embedder.as_ref(),
        },
        &mut store,
        &PipelineConfig {
            page_target: args.page_target,
            ..PipelineConfig::default()
        },
    )?;
    store.snapshot(&config.snapshot_path)?;
    if let Some(path) = &args.out_report {
        std::fs::write(path, pretty(&out.report) + "\n")
            .map_err(io(format!("cannot write {}", path.display())))?;
    }
    let mut lines = vec![format!(
        "pages {} | extracted {} | complete {} | persisted {}",
        out.report.pages_found,
        out.report.extracted,
        out.report.candidates_complete,
        out.report.persisted.len()
    )];
    for r in &out.results {
        lines.push(format!(
            "{:.4}  {}",
            r.similarity,
            r.product.name.as_deref().unwrap_or_default()
        ));
    }
    Ok(lines.join("\n"))
}

fn serve(config: &Config) -> Result<(), CliError> {
    let store = open_store(&config.snapshot_path)?;
    let state = AppState {
        store: SharedStore::new(store),
        lm: language_model(config)?,
        timeout: timeout(config),
        max_limit: config.providers.max_limit,
    };
    let app = api::router(state, config.ui_dir.as_deref());
    let addr = format!("{}:{}", config.host, config.port);
    let rt = tokio::runtime::Runtime::new().map_err(io("cannot start runtime"))?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(&addr)
            .await
            .map_err(io(format!("cannot bind {addr}")))?;
        let local: SocketAddr = listener.local_addr().map_err(io("no local address"))?;
        eprintln!("listening on http://{local}");
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(io("server failed"))
    })
}
