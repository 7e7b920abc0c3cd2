mod support;

use std::collections::BTreeSet;

use kgatlas_core::analysis::{build_prompt, extract_context};
use kgatlas_core::cypher::{execute, execute_read, parse, Params};
use kgatlas_core::explore::{expand, node_detail, search, ExpandRequest, SearchRequest};
use kgatlas_core::fixture;
use kgatlas_core::graph::{GraphStore, Label, NodeId, PropertyValue, RelType};
use kgatlas_core::schema;

fn taishan(g: &GraphStore) -> NodeId {
    g.node_by_name(Label::Product, "Huawei TaiShan Server")
        .unwrap()
        .id
}

#[test]
fn counts_match_catalogue() {
    let s = fixture::store().stats();
    for (label, n) in [
        (Label::Category, 49),
        (Label::Product, 269),
        (Label::Brand, 147),
        (Label::Model, 265),
        (Label::Price, 233),
    ] {
        assert_eq!(s.label(label), n, "{label}");
    }
    assert_eq!((s.nodes, s.relationships), (963, 1110));
    assert_eq!(s.rel_type(RelType::BelongsTo), 303);
    for t in [RelType::HasBrand, RelType::HasModel, RelType::HasPrice] {
        assert_eq!(s.rel_type(t), 269);
    }
}

#[test]
fn script_reproduces_snapshot() {
    let mut g = GraphStore::new();
    for q in fixture::statements().unwrap() {
        execute(&q, &Params::new(), &mut g).unwrap();
    }
    assert_eq!(g.to_snapshot_string(), fixture::SNAPSHOT);
}

#[test]
fn reingesting_script_changes_nothing() {
    let mut g = fixture::store();
    let before = g.stats();
    for q in fixture::statements().unwrap() {
        execute(&q, &Params::new(), &mut g).unwrap();
    }
    assert_eq!(g.stats(), before);
    assert_eq!(g.to_snapshot_string(), fixture::SNAPSHOT);
}

#[test]
fn fixture_is_schema_conformant() {
    assert_eq!(schema::validate(&fixture::store()), vec![]);
}

#[test]
fn every_product_has_one_brand_model_price() {
    let g = fixture::store();
    for p in g.nodes().filter(|n| n.label == Label::Product) {
        for t in [RelType::HasBrand, RelType::HasModel, RelType::HasPrice] {
            let n = g
                .incident(p.id)
                .filter(|r| r.rel_type == t && r.source == p.id)
                .count();
            assert_eq!(n, 1, "{} {t:?}", p.name());
        }
    }
}

#[test]
fn taishan_detail() {
    let g = fixture::store();
    let d = node_detail(&g, taishan(&g)).unwrap();
    assert_eq!(d.label, Label::Product);
    assert_eq!(
        d.properties["category"],
        PropertyValue::text("Computing Server")
    );
    assert_eq!(
        d.properties["description"],
        PropertyValue::text("A high-performance server based on Kunpeng processors")
    );
    assert_eq!(d.degree, 3);
}

#[test]
fn degrees_equal_incident_recount() {
    let g = fixture::store();
    for n in g.nodes() {
        let oracle = g
            .relationships()
            .filter(|r| r.source == n.id || r.target == n.id)
            .count();
        assert_eq!(node_detail(&g, n.id).unwrap().degree, oracle);
    }
}

#[test]
fn expand_taishan_returns_brand_model_price() {
    let g = fixture::store();
    let id = taishan(&g);
    let view = expand(
        &g,
        &ExpandRequest {
            node_id: id,
            visible_ids: BTreeSet::from([id]),
            visible_link_ids: BTreeSet::new(),
        },
    )
    .unwrap();
    let names: BTreeSet<(Label, &str)> = view
        .nodes
        .iter()
        .map(|n| (n.label, n.properties["name"].as_text().unwrap()))
        .collect();
    assert_eq!(
        names,
        BTreeSet::from([
            (Label::Brand, "Huawei"),
            (Label::Model, "Huawei TaiShan"),
            (Label::Price, "23500 yuan"),
        ])
    );
    assert_eq!(view.links.len(), 3);
    assert!(view.is_endpoint_closed_over(&BTreeSet::from([id])));
}

#[test]
fn computing_server_search() {
    let g = fixture::store();
    let req = SearchRequest {
        keyword: "Computing Server".into(),
        node_limit: 25,
        rel_limit: 25,
    };
    let view = search(&g, &req, 500).unwrap();
    assert!(view.nodes.len() <= 25 && view.links.len() <= 25);
    assert!(view.nodes.iter().any(|n| n.label == Label::Category
        && n.properties["name"] == PropertyValue::text("Computing Server")));
    assert!(view.is_endpoint_closed());
}

#[test]
fn keyword_search_query_over_fixture() {
    let g = fixture::store();
    let q = parse(
        "MATCH (n) WHERE n.name CONTAINS $keyword\nMATCH (n)-[r]-(m)\nRETURN n, r, m LIMIT $limit",
    )
    .unwrap();
    let params = Params::from([
        ("keyword".into(), PropertyValue::text("Computing Server")),
        ("limit".into(), PropertyValue::Number(25.0)),
    ]);
    let t = execute_read(&q, &params, &g).unwrap();
    assert_eq!(t.rows.len(), 25);
    assert_eq!(
        support::table_ids(&t),
        support::execute_oracle(&g, &q, &params)
    );
}

#[test]
fn every_product_yields_a_prompt() {
    let g = fixture::store();
    for p in g.nodes().filter(|n| n.label == Label::Product) {
        let ctx = extract_context(&g, p.id).unwrap();
        let brand = g
            .incident(p.id)
            .find(|r| r.rel_type == RelType::HasBrand)
            .map(|r| g.node(r.target).unwrap().name().to_string());
        assert_eq!(ctx.brand, brand);
        assert!(ctx.warnings.is_empty());
        let prompt = build_prompt(&ctx).text;
        assert!(prompt.contains(&format!("Product Name: {}\n", p.name())));
    }
}
