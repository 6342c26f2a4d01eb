#![allow(dead_code)]

use std::collections::BTreeSet;

use mapper_hotspot::graph::AnnotatedGraph;
use proptest::prelude::*;

/// Singleton-member graph on `n` vertices.
pub fn singleton_graph(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> AnnotatedGraph {
    let members = (0..n).map(|v| vec![v]).collect();
    let edges: BTreeSet<(usize, usize)> = edges
        .into_iter()
        .filter(|(u, v)| u != v)
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect();
    AnnotatedGraph::new(members, edges).unwrap()
}

/// Random graph with at most `max_n` vertices and small integer attribute values.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = (AnnotatedGraph, Vec<i64>)> {
    (1..=max_n).prop_flat_map(|n| {
        let edges = prop::collection::vec((0..n, 0..n), 0..=3 * n);
        let values = prop::collection::vec(-20i64..=20, n);
        (Just(n), edges, values).prop_map(|(n, e, a)| (singleton_graph(n, e), a))
    })
}

/// Sorted minimum spanning forest weights, by Prim's algorithm from every unvisited root.
pub fn prim_forest_weights(n: usize, weight: impl Fn(usize, usize) -> Option<f64>) -> Vec<f64> {
    let mut in_tree = vec![false; n];
    let mut out = Vec::new();
    for root in 0..n {
        if in_tree[root] {
            continue;
        }
        in_tree[root] = true;
        let mut best: Vec<Option<f64>> = (0..n)
            .map(|v| if in_tree[v] { None } else { weight(root, v) })
            .collect();
        loop {
            let next = (0..n)
                .filter(|&v| !in_tree[v])
                .filter_map(|v| best[v].map(|w| (w, v)))
                .min_by(|a, b| a.0.total_cmp(&b.0));
            let Some((w, v)) = next else { break };
            in_tree[v] = true;
            out.push(w);
            for u in 0..n {
                if !in_tree[u] {
                    if let Some(x) = weight(v, u) {
                        if best[u].is_none_or(|b| x < b) {
                            best[u] = Some(x);
                        }
                    }
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

pub fn jaccard(a: &[usize], b: &[usize]) -> f64 {
    let a: BTreeSet<_> = a.iter().collect();
    let b: BTreeSet<_> = b.iter().collect();
    let inter = a.intersection(&b).count();
    let union = a.union(&b).count();
    if union == 0 {
        return 0.0;
    }
    inter as f64 / union as f64
}
