//! The data-preparation agent: keyword extraction, iterative web search,
//! per-page structured extraction, embedding similarity against the user's
//! core parameters, filtering and ranking, and persistence into the graph.
//!
//! Every external capability sits behind a provider trait in
//! [`providers`]; [`mock`] holds deterministic implementations.

pub mod mock;
mod pipeline;
mod price;
pub mod providers;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, GraphStore, Label, Properties, PropertyValue, RelType};
pub use pipeline::{
    rank_products, run_pipeline, DropRecord, PipelineConfig, PipelineOutput, Providers, RunReport,
};
pub use price::{parse_price, ParsedPrice};
use providers::{Embedder, LanguageModel, SearchEngine};

pub const MIN_KEYWORDS: usize = 5;
pub const MAX_KEYWORDS: usize = 7;
pub const TOP_K: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductQuery {
    pub name: String,
    #[serde(default)]
    pub spec_params: BTreeMap<String, String>,
}

impl ProductQuery {
    pub fn validate(&self) -> Result<(), IngestError> {
        if self.name.trim().is_empty() {
            return Err(IngestError::InvalidQuery("product name is empty".into()));
        }
        if self.spec_params.is_empty() {
            return Err(IngestError::InvalidQuery(
                "at least one specification parameter is required".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WebPage {
    pub url: String,
    #[serde(default)]
    pub title: String,
    pub content: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractedProduct {
    pub name: Option<String>,
    pub product_type: Option<String>,
    pub brand: Option<String>,
    pub model: Option<String>,
    pub price: Option<String>,
    pub description: Option<String>,
    pub spec_params: BTreeMap<String, String>,
    pub source_url: String,
}

impl ExtractedProduct {
    /// Key attributes that are absent, in a fixed order.
    pub fn missing_key_fields(&self) -> Vec<&'static str> {
        let mut missing = Vec::new();
        for (field, value) in [
            ("name", &self.name),
            ("brand", &self.brand),
            ("model", &self.model),
            ("price", &self.price),
        ] {
            if value.is_none() {
                missing.push(field);
            }
        }
        if self.spec_params.is_empty() {
            missing.push("spec_params");
        }
        missing
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredProduct {
    pub product: ExtractedProduct,
    pub similarity: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    KeywordExtraction,
    Search,
    Extraction,
    Classification,
    Embedding,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stage::KeywordExtraction => "keyword-extraction",
            Stage::Search => "search",
            Stage::Extraction => "extraction",
            Stage::Classification => "classification",
            Stage::Embedding => "embedding",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IngestError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("provider error ({stage}): {message}")]
    Provider { stage: Stage, message: String },
    #[error("could not structure {url}: {message}")]
    ExtractionFormat { url: String, message: String },
    #[error("product is missing {}", missing.join(", "))]
    IncompleteProduct { missing: Vec<&'static str> },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn provider(stage: Stage) -> impl Fn(providers::ProviderFailure) -> IngestError {
    move |e| IngestError::Provider {
        stage,
        message: e.0,
    }
}

/// Asks the model for 5 to 7 distinct search terms.
pub fn extract_keywords(
    query: &ProductQuery,
    lm: &dyn LanguageModel,
) -> Result<Vec<String>, IngestError> {
    query.validate()?;
    let raw = lm
        .extract_keywords(query)
        .map_err(provider(Stage::KeywordExtraction))?;
    let mut out: Vec<String> = Vec::new();
    for k in raw {
        let k = k.trim().to_string();
        if !k.is_empty() && !out.contains(&k) && out.len() < MAX_KEYWORDS {
            out.push(k);
        }
    }
    if out.len() < MIN_KEYWORDS {
        return Err(IngestError::Provider {
            stage: Stage::KeywordExtraction,
            message: format!(
                "model returned {} distinct keywords, need at least {MIN_KEYWORDS}",
                out.len()
            ),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchRound {
    pub round: usize,
    pub keywords: Vec<String>,
    pub returned: usize,
    pub new_pages: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub pages: Vec<WebPage>,
    pub rounds: Vec<SearchRound>,
}

/// Searches with progressively fewer keywords: round `k` (from 1) uses the
/// first `K - k + 1` terms. Stops once `page_target` distinct urls are
/// collected or fewer than two terms would remain. Pages keep first-seen
/// order.
pub fn iterative_search(
    keywords: &[String],
    engine: &dyn SearchEngine,
    page_target: usize,
) -> Result<SearchOutcome, IngestError> {
    if keywords.len() < 2 {
        return Err(IngestError::InvalidQuery(
            "iterative search needs at least two keywords".into(),
        ));
    }
    if page_target == 0 {
        return Err(IngestError::InvalidQuery(
            "page target must be at least 1".into(),
        ));
    }

    let mut pages: Vec<WebPage> = Vec::new();
    let mut rounds = Vec::new();
    let mut last_error = None;
    for (round, n) in (2..=keywords.len()).rev().enumerate() {
        let terms = keywords[..n].to_vec();
        let mut record = SearchRound {
            round: round + 1,
            keywords: terms.clone(),
            returned: 0,
            new_pages: 0,
            error: None,
        };
        match engine.search(&terms) {
            Ok(found) => {
                record.returned = found.len();
                for page in found {
                    if !page.url.is_empty() && !pages.iter().any(|p| p.url == page.url) {
                        pages.push(page);
                        record.new_pages += 1;
                    }
                }
            }
            Err(e) => {
                record.error = Some(e.0.clone());
                last_error = Some(e.0);
            }
        }
        rounds.push(record);
        if pages.len() >= page_target {
            break;
        }
    }

    if rounds.iter().all(|r| r.error.is_some()) {
        return Err(IngestError::Provider {
            stage: Stage::Search,
            message: last_error.unwrap_or_default(),
        });
    }
    Ok(SearchOutcome { pages, rounds })
}

#[derive(Deserialize)]
struct RawExtraction {
    name: Option<String>,
    product_type: Option<String>,
    brand: Option<String>,
    model: Option<String>,
    price: Option<String>,
    description: Option<String>,
    #[serde(default)]
    spec_params: BTreeMap<String, String>,
}

fn non_empty(s: Option<String>) -> Option<String> {
    s.map(|s| s.trim().to_string()).filter(|s| !s.is_empty())
}

/// Has the model structure one page and validates its JSON answer.
pub fn extract_product(
    page: &WebPage,
    lm: &dyn LanguageModel,
) -> Result<ExtractedProduct, IngestError> {
    if page.content.trim().is_empty() {
        return Err(IngestError::ExtractionFormat {
            url: page.url.clone(),
            message: "page has no content".into(),
        });
    }
    let raw = lm
        .extract_product(page)
        .map_err(provider(Stage::Extraction))?;
    let parsed: RawExtraction =
        serde_json::from_str(&raw).map_err(|e| IngestError::ExtractionFormat {
            url: page.url.clone(),
            message: e.to_string(),
        })?;
    let spec_params = parsed
        .spec_params
        .into_iter()
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .filter(|(k, v)| !k.is_empty() && !v.is_empty())
        .collect();
    Ok(ExtractedProduct {
        name: non_empty(parsed.name),
        product_type: non_empty(parsed.product_type),
        brand: non_empty(parsed.brand),
        model: non_empty(parsed.model),
        price: non_empty(parsed.price),
        description: non_empty(parsed.description),
        spec_params,
        source_url: page.url.clone(),
    })
}

/// Cosine of the angle between `a` and `b`; 0 when either is the zero vector.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

fn param_text(key: &str, value: &str) -> String {
    format!("{key}: {value}")
}

/// Scores candidates against one user's core parameters, embedding those
/// once.
pub struct SimilarityScorer<'a> {
    lm: &'a dyn LanguageModel,
    embedder: &'a dyn Embedder,
    user_vectors: Vec<Vec<f64>>,
}

impl<'a> SimilarityScorer<'a> {
    pub fn new(
        user_params: &BTreeMap<String, String>,
        lm: &'a dyn LanguageModel,
        embedder: &'a dyn Embedder,
    ) -> Result<Self, IngestError> {
        let core = lm
            .classify_params(user_params)
            .map_err(provider(Stage::Classification))?;
        if core.is_empty() {
            return Err(IngestError::InvalidQuery(
                "no core specification parameters to compare".into(),
            ));
        }
        let user_vectors = core
            .iter()
            .map(|(k, v)| embedder.embed(&param_text(k, v)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(provider(Stage::Embedding))?;
        Ok(SimilarityScorer {
            lm,
            embedder,
            user_vectors,
        })
    }

    /// Mean over user parameters of the best clamped cosine against any
    /// candidate core parameter. 0 when the candidate has none.
    pub fn score(&self, candidate: &BTreeMap<String, String>) -> Result<f64, IngestError> {
        let core = self
            .lm
            .classify_params(candidate)
            .map_err(provider(Stage::Classification))?;
        if core.is_empty() {
            return Ok(0.0);
        }
        let cand = core
            .iter()
            .map(|(k, v)| self.embedder.embed(&param_text(k, v)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(provider(Stage::Embedding))?;
        let dim = self.user_vectors[0].len();
        if cand
            .iter()
            .chain(&self.user_vectors)
            .any(|v| v.len() != dim)
        {
            return Err(IngestError::Provider {
                stage: Stage::Embedding,
                message: "embedder returned vectors of differing length".into(),
            });
        }
        let total: f64 = self
            .user_vectors
            .iter()
            .map(|u| {
                cand.iter()
                    .map(|c| cosine(u, c).clamp(0.0, 1.0))
                    .fold(0.0, f64::max)
            })
            .sum();
        Ok(total / self.user_vectors.len() as f64)
    }
}

pub fn similarity(
    user_params: &BTreeMap<String, String>,
    candidate_params: &BTreeMap<String, String>,
    lm: &dyn LanguageModel,
    embedder: &dyn Embedder,
) -> Result<f64, IngestError> {
    SimilarityScorer::new(user_params, lm, embedder)?.score(candidate_params)
}

fn rank_order(a: &ScoredProduct, b: &ScoredProduct) -> Ordering {
    b.similarity
        .total_cmp(&a.similarity)
        .then_with(|| a.product.name.cmp(&b.product.name))
        .then_with(|| a.product.source_url.cmp(&b.product.source_url))
}

/// Drops candidates missing a key attribute, sorts by similarity (desc), then
/// name and url, and keeps the top ten.
pub fn filter_and_rank(candidates: Vec<ScoredProduct>) -> Vec<ScoredProduct> {
    filter_and_rank_with_drops(candidates).0
}

pub(crate) fn filter_and_rank_with_drops(
    candidates: Vec<ScoredProduct>,
) -> (Vec<ScoredProduct>, Vec<(String, Vec<&'static str>)>) {
    let (mut kept, dropped): (Vec<_>, Vec<_>) = candidates
        .into_iter()
        .partition(|c| c.product.missing_key_fields().is_empty());
    let dropped = dropped
        .into_iter()
        .map(|c| (c.product.source_url.clone(), c.product.missing_key_fields()))
        .collect();
    kept.sort_by(rank_order);
    kept.truncate(TOP_K);
    (kept, dropped)
}

/// Merges the product's five-node star into the store.
pub fn to_graph(
    product: &ExtractedProduct,
    category: &str,
    store: &mut GraphStore,
) -> Result<(), IngestError> {
    let mut missing = product.missing_key_fields();
    if category.trim().is_empty() {
        missing.push("category");
    }
    if !missing.is_empty() {
        return Err(IngestError::IncompleteProduct { missing });
    }
    let field = |f: &Option<String>| f.clone().expect("checked above");
    let (name, brand, model, price) = (
        field(&product.name),
        field(&product.brand),
        field(&product.model),
        field(&product.price),
    );

    let mut props = Properties::new();
    props.insert("category".into(), PropertyValue::text(category));
    props.insert(
        "spec_params".into(),
        PropertyValue::text(serde_json::to_string(&product.spec_params).expect("map serializes")),
    );
    props.insert(
        "source_url".into(),
        PropertyValue::text(&product.source_url),
    );
    if let Some(t) = &product.product_type {
        props.insert("product_type".into(), PropertyValue::text(t));
    }
    if let Some(d) = &product.description {
        props.insert("description".into(), PropertyValue::text(d));
    }

    let mut price_props = Properties::new();
    if let Some(parsed) = parse_price(&price) {
        price_props.insert("amount".into(), PropertyValue::Number(parsed.amount));
        if let Some(c) = parsed.currency {
            price_props.insert("currency".into(), PropertyValue::text(c));
        }
    }

    let c = store.merge_node(Label::Category, category, Properties::new())?;
    let p = store.merge_node(Label::Product, &name, props)?;
    let b = store.merge_node(Label::Brand, &brand, Properties::new())?;
    let m = store.merge_node(Label::Model, &model, Properties::new())?;
    let pr = store.merge_node(Label::Price, &price, price_props)?;
    store.merge_relationship(p, RelType::BelongsTo, c)?;
    store.merge_relationship(p, RelType::HasBrand, b)?;
    store.merge_relationship(p, RelType::HasModel, m)?;
    store.merge_relationship(p, RelType::HasPrice, pr)?;
    Ok(())
}
