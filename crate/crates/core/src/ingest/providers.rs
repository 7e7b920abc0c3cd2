use std::collections::BTreeMap;

use thiserror::Error;

use super::{ProductQuery, WebPage};

/// A provider call that did not produce a usable answer.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{0}")]
pub struct ProviderFailure(pub String);

impl ProviderFailure {
    pub fn new(msg: impl Into<String>) -> Self {
        ProviderFailure(msg.into())
    }
}

pub trait LanguageModel: Send + Sync {
    /// Identifies the model in reports.
    fn model_id(&self) -> String;

    /// Query terms for a web search, most important first.
    fn extract_keywords(&self, query: &ProductQuery) -> Result<Vec<String>, ProviderFailure>;

    /// Raw structured output for one page: a JSON object with the optional
    /// string fields `name`, `product_type`, `brand`, `model`, `price` and an
    /// object `spec_params`. Callers parse and validate it.
    fn extract_product(&self, page: &WebPage) -> Result<String, ProviderFailure>;

    /// The core subset of `params`; non-core parameters are dropped.
    fn classify_params(
        &self,
        params: &BTreeMap<String, String>,
    ) -> Result<BTreeMap<String, String>, ProviderFailure>;

    /// Free-form Markdown answer to an analysis prompt.
    fn introduce(&self, prompt: &str) -> Result<String, ProviderFailure>;
}

pub trait SearchEngine: Send + Sync {
    fn search(&self, keywords: &[String]) -> Result<Vec<WebPage>, ProviderFailure>;
}

pub trait Embedder: Send + Sync {
    /// Must return vectors of one fixed length for all inputs.
    fn embed(&self, text: &str) -> Result<Vec<f64>, ProviderFailure>;
}
