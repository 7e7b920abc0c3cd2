use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const ENV_CONFIG: &str = "KGATLAS_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderMode {
    Mock,
    Live,
}

impl std::str::FromStr for ProviderMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mock" => Ok(ProviderMode::Mock),
            "live" => Ok(ProviderMode::Live),
            other => Err(format!(
                "unknown provider mode `{other}`, expected mock or live"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProvidersConfig {
    pub mode: ProviderMode,
    /// Page corpus for the mock search engine.
    pub corpus_dir: Option<PathBuf>,
    pub timeout_ms: u64,
    pub max_limit: usize,
}

impl Default for ProvidersConfig {
    fn default() -> Self {
        ProvidersConfig {
            mode: ProviderMode::Mock,
            corpus_dir: None,
            timeout_ms: 30_000,
            max_limit: kgatlas_core::explore::DEFAULT_MAX_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub host: String,
    pub port: u16,
    pub snapshot_path: PathBuf,
    /// Static UI bundle served at `/` when the directory exists.
    pub ui_dir: Option<PathBuf>,
    pub providers: ProvidersConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            host: "127.0.0.1".into(),
            port: 8080,
            snapshot_path: PathBuf::from("kgatlas.snapshot.json"),
            ui_dir: None,
            providers: ProvidersConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid value for {var}: {message}")]
    Env { var: &'static str, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl Config {
    /// Reads `path` (or `$KGATLAS_CONFIG`, or nothing), then applies
    /// environment overrides from `env`.
    pub fn resolve(
        path: Option<&Path>,
        env: impl Fn(&str) -> Option<String>,
    ) -> Result<Config, ConfigError> {
        let path = path
            .map(Path::to_path_buf)
            .or_else(|| env(ENV_CONFIG).map(PathBuf::from));
        let mut config = match path {
            Some(p) => Self::from_file(&p)?,
            None => Config::default(),
        };
        config.apply_env(env)?;
        config.check()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.into(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.into(),
            source,
        })
    }

    fn apply_env(&mut self, env: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        fn parsed<T: std::str::FromStr>(var: &'static str, v: String) -> Result<T, ConfigError>
        where
            T::Err: std::fmt::Display,
        {
            v.parse().map_err(|e: T::Err| ConfigError::Env {
                var,
                message: e.to_string(),
            })
        }
        if let Some(v) = env("KGATLAS_HOST") {
            self.host = v;
        }
        if let Some(v) = env("KGATLAS_PORT") {
            self.port = parsed("KGATLAS_PORT", v)?;
        }
        if let Some(v) = env("KGATLAS_SNAPSHOT") {
            self.snapshot_path = v.into();
        }
        if let Some(v) = env("KGATLAS_UI_DIR") {
            self.ui_dir = Some(v.into());
        }
        if let Some(v) = env("KGATLAS_PROVIDERS") {
            self.providers.mode = parsed("KGATLAS_PROVIDERS", v)?;
        }
        if let Some(v) = env("KGATLAS_CORPUS_DIR") {
            self.providers.corpus_dir = Some(v.into());
        }
        if let Some(v) = env("KGATLAS_TIMEOUT_MS") {
            self.providers.timeout_ms = parsed("KGATLAS_TIMEOUT_MS", v)?;
        }
        if let Some(v) = env("KGATLAS_MAX_LIMIT") {
            self.providers.max_limit = parsed("KGATLAS_MAX_LIMIT", v)?;
        }
        Ok(())
    }

    fn check(&self) -> Result<(), ConfigError> {
        if self.host.is_empty() {
            return Err(ConfigError::Invalid("host is empty".into()));
        }
        if self.providers.max_limit == 0 {
            return Err(ConfigError::Invalid(
                "providers.max_limit must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn corpus_dir(&self) -> PathBuf {
        self.providers
            .corpus_dir
            .clone()
            .unwrap_or_else(kgatlas_core::fixture::corpus_dir)
    }
}
