mod common;

use mapper_hotspot::graph::*;
use mapper_hotspot::hotspot::*;
use num_rational::Ratio;
use proptest::prelude::*;

type Q = Ratio<i64>;

fn rational_attribute(graph: &AnnotatedGraph, values: &[i64], scale: Q, shift: Q) -> VertexAttributeMap<Q> {
    VertexAttributeMap::new(
        graph,
        values
            .iter()
            .map(|&v| Q::from_integer(v) * scale + shift)
            .collect(),
    )
    .unwrap()
}

fn verdicts<T>(report: &HotspotReport<T>) -> Vec<(Vec<usize>, Verdict)> {
    report
        .candidates
        .iter()
        .map(|c| (c.candidate.vertices.clone(), c.verdict))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verdicts_are_scale_equivariant(
        (g, a) in common::arb_graph(25),
        num in 1i64..7,
        den in 1i64..7,
        sigma1 in 1usize..5,
        eps in 0i64..8,
        tau in prop::option::of(1i64..30),
        shift in -10i64..10,
    ) {
        let c = Q::new(num, den);
        let base = rational_attribute(&g, &a, Q::from_integer(1), Q::from_integer(0));
        let scaled = rational_attribute(&g, &a, c, Q::new(shift, 3));
        let mut cfg = HotspotConfig::nodes(sigma1, Q::new(eps, 2));
        cfg.tau = tau.map(|t| Q::new(t, 2));
        let mut cfg_scaled = cfg.clone();
        cfg_scaled.epsilon = cfg.epsilon * c;
        cfg_scaled.tau = cfg.tau.map(|t| t * c);
        let r1 = detect_hotspots(&g, &base, &cfg).unwrap();
        let r2 = detect_hotspots(&g, &scaled, &cfg_scaled).unwrap();
        prop_assert_eq!(verdicts(&r1), verdicts(&r2));
        if tau.is_none() && r1.tau != Q::from_integer(1) {
            prop_assert_eq!(r1.tau * c, r2.tau);
        }
    }

    #[test]
    fn verdicts_partition_candidates((g, a) in common::arb_graph(40), sigma1 in 1usize..6, both in any::<bool>()) {
        let a = VertexAttributeMap::new(&g, a.iter().map(|&v| v as f64 / 3.0).collect()).unwrap();
        let mut cfg = HotspotConfig::nodes(sigma1, 0.1);
        if both {
            cfg.sigma1_points = Some(sigma1);
            cfg.size_mode = SizeMode::Both;
        }
        let report = detect_hotspots(&g, &a, &cfg).unwrap();
        let total: usize = [Verdict::Hotspot, Verdict::TooSmall, Verdict::InsufficientSizeContrast, Verdict::InsufficientHeterogeneity]
            .iter()
            .map(|&v| report.count(v))
            .sum();
        prop_assert_eq!(total, report.candidates.len());
        let mut seen = vec![false; g.vertex_count()];
        for c in &report.candidates {
            for &v in &c.candidate.vertices {
                prop_assert!(!seen[v]);
                seen[v] = true;
            }
            if c.verdict == Verdict::Hotspot {
                prop_assert!(c.candidate.size_nodes >= sigma1);
                prop_assert!(c.heterogeneity.unwrap() > 0.1);
                prop_assert!(!c.neighbour_ids.is_empty());
            }
            if c.verdict == Verdict::TooSmall {
                prop_assert!(c.candidate.size_nodes < sigma1);
            }
        }
        prop_assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn constant_attribute_has_no_hotspots((g, _) in common::arb_graph(40), value in -5.0f64..5.0, sigma1 in 1usize..4) {
        let a = VertexAttributeMap::new(&g, vec![value; g.vertex_count()]).unwrap();
        let report = detect_hotspots(&g, &a, &HotspotConfig::nodes(sigma1, 0.0)).unwrap();
        prop_assert_eq!(report.hotspot_count(), 0);
    }

    #[test]
    fn neighbourhoods_are_symmetric((g, a) in common::arb_graph(30), t in 1i64..20) {
        let a = VertexAttributeMap::new(&g, a.iter().map(|&v| v as f64).collect()).unwrap();
        let tree = graph_dendrogram(&g, &edge_gradient(&g, &a)).unwrap();
        let cands = candidates_at(&tree, &g, &a, t as f64).unwrap();
        for i in 0..cands.len() {
            for j in neighbourhood_of(&cands, &g, i).unwrap() {
                prop_assert!(j != i);
                prop_assert!(neighbourhood_of(&cands, &g, j).unwrap().contains(&i));
            }
        }
    }
}

#[test]
fn mad_fixture() {
    // star of five candidates sized 2, 3, 3, 4 and 10 nodes
    let sizes = [2usize, 3, 3, 4, 10];
    let mut members = Vec::new();
    let mut values = Vec::new();
    let mut edges = Vec::new();
    let mut starts = Vec::new();
    for (k, &s) in sizes.iter().enumerate() {
        starts.push(members.len());
        for i in 0..s {
            let v = members.len();
            members.push(vec![v]);
            values.push(10.0 * k as f64);
            if i > 0 {
                edges.push((v - 1, v));
            }
        }
    }
    for &s in &starts[1..] {
        edges.push((starts[0], s));
    }
    let g = AnnotatedGraph::new(members, edges).unwrap();
    let a = VertexAttributeMap::new(&g, values).unwrap();
    let tree = graph_dendrogram(&g, &edge_gradient(&g, &a)).unwrap();
    let cands = candidates_at(&tree, &g, &a, 1.0).unwrap();
    assert_eq!(cands.len(), 5);
    let report = classify_candidates(cands, &g, &a, &HotspotConfig::nodes(1, 0.1), 1.0).unwrap();
    assert_eq!(report.sigma2_nodes, Some(1.0));
}
