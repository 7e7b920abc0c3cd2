mod support;

use std::collections::BTreeSet;

use kgatlas_core::cypher::{execute, execute_read, parse, tokenize, Params, Query};
use kgatlas_core::graph::{GraphStore, NodeId, PropertyValue};
use proptest::prelude::*;
use support::*;

fn search_params(keyword: &str, limit: f64) -> Params {
    Params::from([
        ("keyword".into(), PropertyValue::text(keyword)),
        ("limit".into(), PropertyValue::Number(limit)),
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn execute_matches_relational_oracle(spec in graph_spec(30), q in read_query(), kw in name(), limit in 0..30u32) {
        let g = build(&spec);
        let params = search_params(&kw.chars().take(1).collect::<String>(), limit as f64);
        let got = execute_read(&q, &params, &g).unwrap();
        prop_assert_eq!(table_ids(&got), execute_oracle(&g, &q, &params));
    }

    #[test]
    fn neighborhood_matches_dense_adjacency(spec in graph_spec(50), pick in any::<prop::sample::Index>(), ex in prop::collection::vec(any::<prop::sample::Index>(), 0..6)) {
        let g = build(&spec);
        prop_assume!(g.node_count() > 0);
        let ids: Vec<NodeId> = g.nodes().map(|n| n.id).collect();
        let center = *pick.get(&ids);
        let exclude: BTreeSet<NodeId> = ex.iter().map(|i| *i.get(&ids)).collect();
        let view = g.neighborhood(center, &exclude).unwrap();
        let (nodes, links) = neighborhood_oracle(&g, center, &exclude);
        prop_assert_eq!(view.node_ids(), nodes);
        prop_assert_eq!(view.link_ids(), links);
        prop_assert!(view.is_duplicate_free());
        prop_assert!(view.is_endpoint_closed());
    }

    #[test]
    fn contains_matches_linear_scan(spec in graph_spec(40), kw in "[abcé]{1,3}") {
        let g = build(&spec);
        let got: Vec<NodeId> = g.find_nodes_containing(&kw).unwrap().iter().map(|n| n.id).collect();
        prop_assert_eq!(got, contains_oracle(&g, &kw));
    }

    #[test]
    fn search_query_rows_are_incident_matches(spec in graph_spec(30), kw in "[abc]{1,2}", limit in 0..40u32) {
        let g = build(&spec);
        let q = parse("MATCH (n) WHERE n.name CONTAINS $keyword MATCH (n)-[r]-(m) RETURN n, r, m LIMIT $limit").unwrap();
        let t = execute_read(&q, &search_params(&kw, limit as f64), &g).unwrap();
        prop_assert!(t.rows.len() <= limit as usize);
        for row in table_ids(&t) {
            let (Bound::Node(n), Bound::Rel(r), Bound::Node(m)) = (row[0], row[1], row[2]) else {
                panic!("row shape")
            };
            prop_assert!(g.node(n).unwrap().name().contains(kw.as_str()));
            let rel = g.relationship(r).unwrap();
            prop_assert_eq!(rel.other(n), Some(m));
        }
    }

    #[test]
    fn limit_results_are_prefixes(spec in graph_spec(25), q in read_query(), k in 0..15u32) {
        let g = build(&spec);
        let mut unlimited = q.clone();
        unlimited.clauses.retain(|c| !matches!(c, kgatlas_core::cypher::Clause::Limit(_)));
        let mut limited = unlimited.clone();
        limited.clauses.push(kgatlas_core::cypher::Clause::Limit(
            kgatlas_core::cypher::Operand::Literal(kgatlas_core::cypher::Literal::Number(k as f64)),
        ));
        let params = search_params("a", 0.0);
        let all = execute_read(&unlimited, &params, &g).unwrap().rows;
        let some = execute_read(&limited, &params, &g).unwrap().rows;
        prop_assert_eq!(some.len(), all.len().min(k as usize));
        prop_assert_eq!(&all[..some.len()], &some[..]);
    }

    #[test]
    fn reads_do_not_mutate(spec in graph_spec(25), q in read_query()) {
        let mut g = build(&spec);
        let before = g.to_snapshot_string();
        execute(&q, &search_params("b", 5.0), &mut g).unwrap();
        prop_assert_eq!(before, g.to_snapshot_string());
    }

    #[test]
    fn snapshot_round_trip(spec in graph_spec(40)) {
        let g = build(&spec);
        let text = g.to_snapshot_string();
        let back = GraphStore::from_snapshot_str(&text).unwrap();
        prop_assert_eq!(back.stats(), g.stats());
        prop_assert_eq!(back.to_snapshot_string(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn pretty_print_round_trips(q in prop_oneof![read_query(), merge_query()]) {
        let text = q.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn detokenize_round_trips(q in prop_oneof![read_query(), merge_query()]) {
        let tokens = tokenize(&q.to_string()).unwrap();
        let joined: Vec<&str> = tokens.iter().map(|t| t.text.as_str()).collect();
        let again = tokenize(&joined.join(" ")).unwrap();
        let kinds = |ts: &[kgatlas_core::cypher::Token]| ts.iter().map(|t| t.kind.clone()).collect::<Vec<_>>();
        prop_assert_eq!(kinds(&again), kinds(&tokens));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn stats_equal_recount(ops in merge_ops()) {
        let mut g = GraphStore::new();
        apply(&mut g, &ops);
        let s = g.stats();
        let (labels, types) = recount(&g);
        prop_assert_eq!(&s.labels, &labels);
        prop_assert_eq!(&s.rel_types, &types);
        prop_assert_eq!(s.nodes, g.nodes().count());
        prop_assert_eq!(s.relationships, g.relationships().count());
        prop_assert!(g.adjacency_consistent());
    }

    #[test]
    fn merging_twice_equals_once(ops in merge_ops()) {
        let mut once = GraphStore::new();
        apply(&mut once, &ops);
        let mut twice = GraphStore::new();
        apply(&mut twice, &ops);
        apply(&mut twice, &ops);
        prop_assert_eq!(once.stats(), twice.stats());
        prop_assert_eq!(once.to_snapshot_string(), twice.to_snapshot_string());
    }
}

#[test]
fn parse_errors_are_total() {
    // Every prefix of a valid query either parses or fails with a typed error.
    let q: Query = parse(
        "MATCH (n:Product) WHERE n.name CONTAINS 'x' MATCH (n)-[r:HAS_BRAND]->(m) RETURN n, m LIMIT 3",
    )
    .unwrap();
    let text = q.to_string();
    for (i, _) in text.char_indices() {
        let _ = parse(&text[..i]);
    }
}
