//! Deterministic stand-ins for the language model, search engine and
//! embedder. Every output is a pure function of the input.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::providers::{Embedder, LanguageModel, ProviderFailure, SearchEngine};
use super::{ProductQuery, WebPage};

/// Parameter keys the mock treats as core.
pub const DEFAULT_CORE_KEYS: [&str; 7] = [
    "cpu",
    "ram",
    "storage",
    "ports",
    "resolution",
    "power",
    "capacity",
];

/// Appended when the name and spec values yield fewer than five terms.
const FILLER_KEYWORDS: [&str; 5] = ["specifications", "price", "brand", "model", "datasheet"];

/// What the mock emits for a page it cannot structure.
pub const NO_PRODUCT: &str = "NO_PRODUCT_FOUND";

#[derive(Clone, Debug)]
pub struct MockLanguageModel {
    core_keys: BTreeSet<String>,
}

impl Default for MockLanguageModel {
    fn default() -> Self {
        Self::with_core_keys(DEFAULT_CORE_KEYS)
    }
}

impl MockLanguageModel {
    pub fn with_core_keys<I, S>(keys: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        MockLanguageModel {
            core_keys: keys
                .into_iter()
                .map(|k| k.as_ref().to_lowercase())
                .collect(),
        }
    }
}

/// Lowercased alphanumeric runs of `s`.
pub fn word_tokens(s: &str) -> impl Iterator<Item = String> + '_ {
    s.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
}

fn field_for(key: &str) -> Option<&'static str> {
    Some(match key {
        "name" | "product name" | "product" => "name",
        "type" | "product type" | "category" => "product_type",
        "brand" | "manufacturer" => "brand",
        "model" | "model number" => "model",
        "price" => "price",
        "description" | "summary" => "description",
        _ => return None,
    })
}

/// Splits `key: value` lines, tolerating list markers.
fn key_value_lines(content: &str) -> Vec<(String, String)> {
    content
        .lines()
        .filter_map(|line| {
            let line = line.trim().trim_start_matches(['-', '*']).trim();
            let (k, v) = line.split_once(':')?;
            let (k, v) = (k.trim(), v.trim());
            let simple_key = !k.is_empty()
                && k.len() <= 32
                && k.chars()
                    .all(|c| c.is_alphanumeric() || c == ' ' || c == '_');
            (simple_key && !v.is_empty()).then(|| (k.to_lowercase(), v.to_string()))
        })
        .collect()
}

impl LanguageModel for MockLanguageModel {
    fn model_id(&self) -> String {
        "mock-analyst-1".into()
    }

    fn extract_keywords(&self, query: &ProductQuery) -> Result<Vec<String>, ProviderFailure> {
        fn push(out: &mut Vec<String>, w: String) {
            if out.len() < 7 && !out.contains(&w) {
                out.push(w);
            }
        }
        let mut out: Vec<String> = Vec::new();
        for w in word_tokens(&query.name) {
            push(&mut out, w);
        }
        for w in query.spec_params.values().flat_map(|v| word_tokens(v)) {
            push(&mut out, w);
        }
        if out.len() < 5 {
            for w in query.spec_params.keys().flat_map(|k| word_tokens(k)) {
                push(&mut out, w);
            }
        }
        for f in FILLER_KEYWORDS {
            if out.len() >= 5 {
                break;
            }
            push(&mut out, f.to_string());
        }
        Ok(out)
    }

    fn extract_product(&self, page: &WebPage) -> Result<String, ProviderFailure> {
        let pairs = key_value_lines(&page.content);
        if pairs.is_empty() {
            return Ok(NO_PRODUCT.to_string());
        }
        let mut obj = serde_json::Map::new();
        let mut specs = serde_json::Map::new();
        for (k, v) in pairs {
            match field_for(&k) {
                Some(field) => {
                    obj.entry(field).or_insert(v.into());
                }
                None => {
                    specs.entry(k).or_insert(v.into());
                }
            }
        }
        obj.insert("spec_params".into(), specs.into());
        Ok(serde_json::Value::Object(obj).to_string())
    }

    fn classify_params(
        &self,
        params: &BTreeMap<String, String>,
    ) -> Result<BTreeMap<String, String>, ProviderFailure> {
        Ok(params
            .iter()
            .filter(|(k, _)| self.core_keys.contains(&k.to_lowercase()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect())
    }

    fn introduce(&self, prompt: &str) -> Result<String, ProviderFailure> {
        let field = |label: &str| {
            prompt
                .lines()
                .find_map(|l| l.strip_prefix(label))
                .map(str::trim)
                .unwrap_or("Unknown")
                .to_string()
        };
        let (name, brand, model) = (field("Product Name:"), field("Brand:"), field("Model:"));
        Ok(mock_report(&name, &brand, &model))
    }
}

/// The Markdown document the mock model returns for an analysis prompt.
pub fn mock_report(name: &str, brand: &str, model: &str) -> String {
    format!(
        "# {name}\n\
         \n\
         ## Overview\n\
         {name} is a product from {brand}, sold as model {model}.\n\
         \n\
         ## Technical Specifications\n\
         - Brand: {brand}\n\
         - Model: {model}\n\
         \n\
         ## Application Scenarios\n\
         - Workloads that call for {name}.\n\
         \n\
         ## Competitors\n\
         - Comparable products from brands other than {brand}.\n"
    )
}

/// Searches an in-memory corpus: a page matches when its title or content
/// contains every keyword (case-insensitive). Matches come back in url order.
#[derive(Clone, Debug)]
pub struct MockSearchEngine {
    pages: Vec<WebPage>,
    max_results: usize,
}

impl MockSearchEngine {
    pub const DEFAULT_MAX_RESULTS: usize = 25;

    pub fn new(mut pages: Vec<WebPage>) -> Self {
        pages.sort_by(|a, b| a.url.cmp(&b.url));
        MockSearchEngine {
            pages,
            max_results: Self::DEFAULT_MAX_RESULTS,
        }
    }

    pub fn with_max_results(mut self, n: usize) -> Self {
        self.max_results = n;
        self
    }

    /// Loads every `*.json` page file in `dir`.
    pub fn from_dir(dir: impl AsRef<Path>) -> std::io::Result<Self> {
        let mut pages = Vec::new();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                let text = std::fs::read_to_string(&path)?;
                let page: WebPage = serde_json::from_str(&text).map_err(|e| {
                    std::io::Error::new(
                        std::io::ErrorKind::InvalidData,
                        format!("{}: {e}", path.display()),
                    )
                })?;
                pages.push(page);
            }
        }
        Ok(Self::new(pages))
    }

    pub fn pages(&self) -> &[WebPage] {
        &self.pages
    }
}

impl SearchEngine for MockSearchEngine {
    fn search(&self, keywords: &[String]) -> Result<Vec<WebPage>, ProviderFailure> {
        let terms: Vec<String> = keywords.iter().map(|k| k.to_lowercase()).collect();
        Ok(self
            .pages
            .iter()
            .filter(|p| {
                let hay = format!("{}\n{}", p.title, p.content).to_lowercase();
                terms.iter().all(|t| hay.contains(t.as_str()))
            })
            .take(self.max_results)
            .cloned()
            .collect())
    }
}

/// Signed feature hashing of character trigrams into a fixed-size vector.
#[derive(Clone, Debug)]
pub struct MockEmbedder {
    dimension: usize,
    seed: u64,
}

impl Default for MockEmbedder {
    fn default() -> Self {
        MockEmbedder {
            dimension: 64,
            seed: 0x5eed_cafe,
        }
    }
}

impl MockEmbedder {
    pub fn new(dimension: usize, seed: u64) -> Self {
        assert!(dimension > 0, "embedding dimension must be positive");
        MockEmbedder { dimension, seed }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }
}

fn fnv1a(seed: u64, bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325 ^ seed;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl Embedder for MockEmbedder {
    fn embed(&self, text: &str) -> Result<Vec<f64>, ProviderFailure> {
        let padded: Vec<char> = format!("  {}  ", text.to_lowercase()).chars().collect();
        let mut v = vec![0.0; self.dimension];
        let mut buf = String::new();
        for w in padded.windows(3) {
            buf.clear();
            buf.extend(w);
            let h = fnv1a(self.seed, buf.as_bytes());
            let bucket = (h % self.dimension as u64) as usize;
            v[bucket] += if h >> 63 == 0 { 1.0 } else { -1.0 };
        }
        Ok(v)
    }
}
