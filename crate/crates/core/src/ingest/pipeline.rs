use serde::Serialize;

use super::providers::{Embedder, LanguageModel, SearchEngine};
use super::{
    extract_keywords, extract_product, filter_and_rank_with_drops, iterative_search, to_graph,
    IngestError, ProductQuery, ScoredProduct, SearchRound, SimilarityScorer, Stage, WebPage,
};
use crate::graph::GraphStore;

#[derive(Clone, Copy)]
pub struct Providers<'a> {
    pub lm: &'a dyn LanguageModel,
    pub search: &'a dyn SearchEngine,
    pub embedder: &'a dyn Embedder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub page_target: usize,
    /// Concurrent page extractions.
    pub fan_out: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            page_target: 20,
            fan_out: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DropRecord {
    pub url: String,
    pub stage: &'static str,
    pub reason: String,
}

/// Per-stage accounting for one run. Contains nothing time-dependent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub query: ProductQuery,
    pub keywords: Vec<String>,
    pub rounds: Vec<SearchRound>,
    pub pages_found: usize,
    pub extracted: usize,
    pub candidates_complete: usize,
    pub ranked: usize,
    pub persisted: Vec<String>,
    pub dropped: Vec<DropRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineOutput {
    pub results: Vec<ScoredProduct>,
    pub report: RunReport,
}

/// Steps one through five: everything up to, but not including, writing
/// to the graph.
pub fn rank_products(
    query: &ProductQuery,
    providers: Providers<'_>,
    config: &PipelineConfig,
) -> Result<PipelineOutput, IngestError> {
    query.validate()?;
    let scorer = SimilarityScorer::new(&query.spec_params, providers.lm, providers.embedder)?;
    let keywords = extract_keywords(query, providers.lm)?;
    let search = iterative_search(&keywords, providers.search, config.page_target)?;

    let mut dropped = Vec::new();
    let mut candidates = Vec::new();
    for (page, result) in
        search
            .pages
            .iter()
            .zip(extract_all(&search.pages, providers.lm, config.fan_out))
    {
        match result {
            Ok(product) => {
                let similarity = scorer.score(&product.spec_params)?;
                candidates.push(ScoredProduct {
                    product,
                    similarity,
                });
            }
            Err(e) => dropped.push(DropRecord {
                url: page.url.clone(),
                stage: "extraction",
                reason: e.to_string(),
            }),
        }
    }

    let extracted = candidates.len();
    let (results, incomplete) = filter_and_rank_with_drops(candidates);
    let candidates_complete = extracted - incomplete.len();
    dropped.extend(incomplete.into_iter().map(|(url, missing)| DropRecord {
        url,
        stage: "filter",
        reason: format!("missing {}", missing.join(", ")),
    }));

    let report = RunReport {
        query: query.clone(),
        keywords,
        pages_found: search.pages.len(),
        rounds: search.rounds,
        extracted,
        candidates_complete,
        ranked: results.len(),
        persisted: Vec::new(),
        dropped,
    };
    Ok(PipelineOutput { results, report })
}

/// The full pipeline: [`rank_products`] then [`to_graph`] for each survivor.
/// A product's category is its extracted type, else the query name.
pub fn run_pipeline(
    query: &ProductQuery,
    providers: Providers<'_>,
    store: &mut GraphStore,
    config: &PipelineConfig,
) -> Result<PipelineOutput, IngestError> {
    let mut out = rank_products(query, providers, config)?;
    for scored in &out.results {
        let p = &scored.product;
        let category = p.product_type.as_deref().unwrap_or(&query.name);
        to_graph(p, category, store)?;
        out.report
            .persisted
            .push(p.name.clone().expect("ranked products are complete"));
    }
    Ok(out)
}

/// Extracts every page with up to `fan_out` workers; results come back in
/// page order.
fn extract_all(
    pages: &[WebPage],
    lm: &dyn LanguageModel,
    fan_out: usize,
) -> Vec<Result<super::ExtractedProduct, IngestError>> {
    let workers = fan_out.clamp(1, pages.len().max(1));
    let mut slots: Vec<Option<Result<_, _>>> = vec![None; pages.len()];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    pages
                        .iter()
                        .enumerate()
                        .skip(w)
                        .step_by(workers)
                        .map(|(i, page)| (i, extract_product(page, lm)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("extraction worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|r| {
            r.unwrap_or_else(|| {
                Err(IngestError::Provider {
                    stage: Stage::Extraction,
                    message: "page was not processed".into(),
                })
            })
        })
        .collect()
}
