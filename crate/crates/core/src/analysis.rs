//! Graph-grounded product analysis: pull a product's brand and model from
//! the graph, fill the analyst prompt template, and ask a language model for
//! a Markdown report.

use std::sync::mpsc;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphStore, Label, NodeId, RelType};
use crate::ingest::providers::LanguageModel;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

const ROLE_AND_TASK: &str = "You are a seasoned IT product analyst. \
Please provide me with a detailed analysis report on this product based on the following structured information. \
The report should include its core technical features, market positioning, main application scenarios, and potential competitors.";

const UNKNOWN: &str = "Unknown";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductContext {
    pub product_name: String,
    pub brand: Option<String>,
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prompt {
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub markdown: String,
    pub model_id: String,
    pub elapsed_ms: u64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("node {0} not found")]
    NodeNotFound(NodeId),
    #[error("node {id} is a {label}, not a Product")]
    NotAProduct { id: NodeId, label: Label },
    #[error("language model did not answer within {0} ms")]
    Timeout(u64),
    #[error("language model failed: {0}")]
    Provider(String),
}

/// Reads the product's name and the names of its HAS_BRAND and HAS_MODEL
/// neighbors. With several candidates the lowest id wins and a warning is
/// recorded.
pub fn extract_context(store: &GraphStore, id: NodeId) -> Result<ProductContext, AnalysisError> {
    let node = store.node(id).ok_or(AnalysisError::NodeNotFound(id))?;
    if node.label != Label::Product {
        return Err(AnalysisError::NotAProduct {
            id,
            label: node.label,
        });
    }
    let mut warnings = Vec::new();
    let mut neighbor = |rel_type: RelType, what: &str| -> Option<String> {
        let names: Vec<&str> = store
            .incident(id)
            .filter(|r| r.rel_type == rel_type && r.source == id)
            .filter_map(|r| store.node(r.target))
            .map(|n| n.name())
            .collect();
        if names.len() > 1 {
            warnings.push(format!(
                "{} {what} neighbors; using `{}`",
                names.len(),
                names[0]
            ));
        }
        names.first().map(|s| s.to_string())
    };
    let brand = neighbor(RelType::HasBrand, "brand");
    let model = neighbor(RelType::HasModel, "model");
    Ok(ProductContext {
        product_name: node.name().to_string(),
        brand,
        model,
        warnings,
    })
}

pub fn build_prompt(ctx: &ProductContext) -> Prompt {
    Prompt {
        text: format!(
            "{ROLE_AND_TASK}\n\nProduct Name: {}\nBrand: {}\nModel: {}",
            ctx.product_name,
            ctx.brand.as_deref().unwrap_or(UNKNOWN),
            ctx.model.as_deref().unwrap_or(UNKNOWN),
        ),
    }
}

/// Sends the prompt for `ctx` to `lm` and waits at most `timeout`. A zero
/// timeout fails without calling the model.
pub fn introduce(
    ctx: &ProductContext,
    lm: Arc<dyn LanguageModel>,
    timeout: Duration,
) -> Result<AnalysisReport, AnalysisError> {
    let timeout_ms = timeout.as_millis() as u64;
    if timeout.is_zero() {
        return Err(AnalysisError::Timeout(0));
    }
    let prompt = build_prompt(ctx);
    let model_id = lm.model_id();
    let start = Instant::now();
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(lm.introduce(&prompt.text));
    });
    let answer = match rx.recv_timeout(timeout) {
        Ok(r) => r,
        Err(mpsc::RecvTimeoutError::Timeout) => return Err(AnalysisError::Timeout(timeout_ms)),
        Err(mpsc::RecvTimeoutError::Disconnected) => {
            return Err(AnalysisError::Provider("model call panicked".into()))
        }
    };
    let markdown = answer.map_err(|e| AnalysisError::Provider(e.0))?;
    if markdown.trim().is_empty() {
        return Err(AnalysisError::Provider(
            "model returned an empty report".into(),
        ));
    }
    Ok(AnalysisReport {
        markdown,
        model_id,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// [`introduce`] without a timer or worker thread, for single-threaded hosts.
/// `elapsed_ms` is always 0.
pub fn introduce_inline(
    ctx: &ProductContext,
    lm: &dyn LanguageModel,
) -> Result<AnalysisReport, AnalysisError> {
    let markdown = lm
        .introduce(&build_prompt(ctx).text)
        .map_err(|e| AnalysisError::Provider(e.0))?;
    if markdown.trim().is_empty() {
        return Err(AnalysisError::Provider(
            "model returned an empty report".into(),
        ));
    }
    Ok(AnalysisReport {
        markdown,
        model_id: lm.model_id(),
        elapsed_ms: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Properties;
    use crate::ingest::mock::{mock_report, MockLanguageModel};
    use crate::ingest::providers::ProviderFailure;
    use crate::ingest::{ProductQuery, WebPage};
    use std::collections::BTreeMap;

    fn taishan() -> ProductContext {
        ProductContext {
            product_name: "Huawei TaiShan Server".into(),
            brand: Some("Huawei".into()),
            model: Some("Huawei TaiShan".into()),
            warnings: vec![],
        }
    }

    #[test]
    fn prompt_template_is_exact() {
        let p = build_prompt(&taishan());
        let lines: Vec<&str> = p.text.lines().collect();
        assert_eq!(
            lines[0],
            "You are a seasoned IT product analyst. Please provide me with a detailed analysis report on this product based on the following structured information. The report should include its core technical features, market positioning, main application scenarios, and potential competitors."
        );
        assert_eq!(
            &lines[lines.len() - 3..],
            [
                "Product Name: Huawei TaiShan Server",
                "Brand: Huawei",
                "Model: Huawei TaiShan"
            ]
        );
        for label in ["Product Name:", "Brand:", "Model:"] {
            assert_eq!(p.text.lines().filter(|l| l.starts_with(label)).count(), 1);
        }
        assert_eq!(p, build_prompt(&taishan()));
    }

    #[test]
    fn missing_fields_become_unknown() {
        let ctx = ProductContext {
            brand: None,
            model: None,
            ..taishan()
        };
        let text = build_prompt(&ctx).text;
        assert!(text.ends_with("Brand: Unknown\nModel: Unknown"));
    }

    #[test]
    fn context_from_graph() {
        let mut g = GraphStore::new();
        let p = g
            .merge_node(Label::Product, "Huawei TaiShan Server", Properties::new())
            .unwrap();
        let b = g
            .merge_node(Label::Brand, "Huawei", Properties::new())
            .unwrap();
        let b2 = g
            .merge_node(Label::Brand, "Kunpeng", Properties::new())
            .unwrap();
        g.merge_relationship(p, RelType::HasBrand, b).unwrap();
        let ctx = extract_context(&g, p).unwrap();
        assert_eq!(ctx.brand.as_deref(), Some("Huawei"));
        assert_eq!(ctx.model, None);
        assert!(ctx.warnings.is_empty());

        g.merge_relationship(p, RelType::HasBrand, b2).unwrap();
        let ctx = extract_context(&g, p).unwrap();
        assert_eq!(ctx.brand.as_deref(), Some("Huawei"));
        assert_eq!(ctx.warnings.len(), 1);

        assert_eq!(
            extract_context(&g, b),
            Err(AnalysisError::NotAProduct {
                id: b,
                label: Label::Brand
            })
        );
        assert_eq!(
            extract_context(&g, NodeId(77)),
            Err(AnalysisError::NodeNotFound(NodeId(77)))
        );
    }

    #[test]
    fn mock_report_round_trip() {
        let lm: Arc<dyn LanguageModel> = Arc::new(MockLanguageModel::default());
        let r = introduce(&taishan(), lm.clone(), DEFAULT_TIMEOUT).unwrap();
        assert_eq!(
            r.markdown,
            mock_report("Huawei TaiShan Server", "Huawei", "Huawei TaiShan")
        );
        for h in [
            "## Overview",
            "## Technical Specifications",
            "## Application Scenarios",
            "## Competitors",
        ] {
            assert!(r.markdown.contains(h));
        }
        assert_eq!(r.model_id, "mock-analyst-1");
        let again = introduce(&taishan(), lm.clone(), DEFAULT_TIMEOUT).unwrap();
        assert_eq!(again.markdown, r.markdown);
        assert_eq!(
            introduce_inline(&taishan(), lm.as_ref()).unwrap().markdown,
            r.markdown
        );
    }

    struct Slow;
    struct Down;

    impl LanguageModel for Slow {
        fn model_id(&self) -> String {
            "slow".into()
        }
        fn extract_keywords(&self, _: &ProductQuery) -> Result<Vec<String>, ProviderFailure> {
            unimplemented!()
        }
        fn extract_product(&self, _: &WebPage) -> Result<String, ProviderFailure> {
            unimplemented!()
        }
        fn classify_params(
            &self,
            _: &BTreeMap<String, String>,
        ) -> Result<BTreeMap<String, String>, ProviderFailure> {
            unimplemented!()
        }
        fn introduce(&self, _: &str) -> Result<String, ProviderFailure> {
            std::thread::sleep(Duration::from_millis(500));
            Ok("late".into())
        }
    }

    impl LanguageModel for Down {
        fn model_id(&self) -> String {
            "down".into()
        }
        fn extract_keywords(&self, _: &ProductQuery) -> Result<Vec<String>, ProviderFailure> {
            unimplemented!()
        }
        fn extract_product(&self, _: &WebPage) -> Result<String, ProviderFailure> {
            unimplemented!()
        }
        fn classify_params(
            &self,
            _: &BTreeMap<String, String>,
        ) -> Result<BTreeMap<String, String>, ProviderFailure> {
            unimplemented!()
        }
        fn introduce(&self, _: &str) -> Result<String, ProviderFailure> {
            Err(ProviderFailure::new("connection refused"))
        }
    }

    #[test]
    fn timeouts_and_failures_are_typed() {
        let mock: Arc<dyn LanguageModel> = Arc::new(MockLanguageModel::default());
        assert_eq!(
            introduce(&taishan(), mock, Duration::ZERO),
            Err(AnalysisError::Timeout(0))
        );
        assert_eq!(
            introduce(&taishan(), Arc::new(Slow), Duration::from_millis(20)),
            Err(AnalysisError::Timeout(20))
        );
        assert_eq!(
            introduce(&taishan(), Arc::new(Down), DEFAULT_TIMEOUT),
            Err(AnalysisError::Provider("connection refused".into()))
        );
    }
}
