//! The fixture graph in the browser. Every method returns JSON text in the
//! same shapes the REST API serves.

use std::collections::BTreeSet;

use kgatlas_core::analysis::{extract_context, introduce_inline};
use kgatlas_core::explore::{self, ExpandRequest, SearchRequest};
use kgatlas_core::fixture;
use kgatlas_core::graph::{GraphStore, NodeId};
use kgatlas_core::ingest::mock::MockLanguageModel;
use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub struct Explorer {
    store: GraphStore,
    lm: MockLanguageModel,
}

impl Default for Explorer {
    fn default() -> Self {
        Explorer {
            store: fixture::store(),
            lm: MockLanguageModel::default(),
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("view serializes")
}

impl Explorer {
    pub fn try_search(
        &self,
        keyword: &str,
        node_limit: usize,
        rel_limit: usize,
    ) -> Result<String, String> {
        let req = SearchRequest {
            keyword: keyword.to_string(),
            node_limit,
            rel_limit,
        };
        explore::search(&self.store, &req, explore::DEFAULT_MAX_LIMIT)
            .map(|v| to_json(&v))
            .map_err(|e| e.to_string())
    }

    pub fn try_expand(
        &self,
        node_id: u64,
        visible: &[u64],
        drawn: &[u64],
    ) -> Result<String, String> {
        let req = ExpandRequest {
            node_id: NodeId(node_id),
            visible_ids: visible.iter().map(|&i| NodeId(i)).collect(),
            visible_link_ids: drawn
                .iter()
                .map(|&i| kgatlas_core::graph::RelId(i))
                .collect::<BTreeSet<_>>(),
        };
        explore::expand(&self.store, &req)
            .map(|v| to_json(&v))
            .map_err(|e| e.to_string())
    }

    pub fn try_node(&self, node_id: u64) -> Result<String, String> {
        explore::node_detail(&self.store, NodeId(node_id))
            .map(|d| to_json(&d))
            .map_err(|e| e.to_string())
    }

    pub fn try_introduce(&self, node_id: u64) -> Result<String, String> {
        let ctx = extract_context(&self.store, NodeId(node_id)).map_err(|e| e.to_string())?;
        introduce_inline(&ctx, &self.lm)
            .map(|r| to_json(&r))
            .map_err(|e| e.to_string())
    }
}

#[wasm_bindgen]
impl Explorer {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Explorer {
        Explorer::default()
    }

    pub fn stats(&self) -> String {
        to_json(&self.store.stats())
    }

    pub fn search(
        &self,
        keyword: &str,
        node_limit: u32,
        rel_limit: u32,
    ) -> Result<String, JsError> {
        self.try_search(keyword, node_limit as usize, rel_limit as usize)
            .map_err(|e| JsError::new(&e))
    }

    /// `visible` and `drawn` are the node and link ids already on screen.
    pub fn expand(
        &self,
        node_id: f64,
        visible: Vec<f64>,
        drawn: Vec<f64>,
    ) -> Result<String, JsError> {
        let ids = |v: &[f64]| v.iter().map(|&x| x as u64).collect::<Vec<_>>();
        self.try_expand(node_id as u64, &ids(&visible), &ids(&drawn))
            .map_err(|e| JsError::new(&e))
    }

    pub fn node(&self, node_id: f64) -> Result<String, JsError> {
        self.try_node(node_id as u64).map_err(|e| JsError::new(&e))
    }

    pub fn introduce(&self, node_id: f64) -> Result<String, JsError> {
        self.try_introduce(node_id as u64)
            .map_err(|e| JsError::new(&e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kgatlas_core::graph::Label;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn fixture_is_embedded() {
        let v = parse(&Explorer::new().stats());
        assert_eq!(
            (v["nodes"].as_u64(), v["relationships"].as_u64()),
            (Some(963), Some(1110))
        );
    }

    #[test]
    fn search_expand_introduce() {
        let ex = Explorer::new();
        let v = parse(&ex.try_search("TaiShan", 25, 25).unwrap());
        assert!(!v["nodes"].as_array().unwrap().is_empty());
        assert!(ex.try_search("", 25, 25).is_err());

        let t = ex
            .store
            .node_by_name(Label::Product, "Huawei TaiShan Server")
            .unwrap()
            .id
            .0;
        let v = parse(&ex.try_expand(t, &[t], &[]).unwrap());
        assert_eq!(v["nodes"].as_array().unwrap().len(), 3);
        assert!(ex.try_expand(t, &[], &[]).is_err());

        let v = parse(&ex.try_introduce(t).unwrap());
        assert!(v["markdown"]
            .as_str()
            .unwrap()
            .starts_with("# Huawei TaiShan Server"));
        let brand = ex.store.node_by_name(Label::Brand, "Huawei").unwrap().id.0;
        assert!(ex
            .try_introduce(brand)
            .unwrap_err()
            .contains("not a Product"));
        assert_eq!(parse(&ex.try_node(t).unwrap())["degree"], 3);
    }
}
