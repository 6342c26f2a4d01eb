//! Hotspot detection on attribute-annotated graphs.
//!
//! Step 1 builds a single-linkage dendrogram over the graph using the edge
//! gradient `F'(u, v) = |Â(u) - Â(v)|` (vertices sit at filtration 0) and cuts
//! it at level `tau`, giving candidate components that are connected and
//! edge-wise homogeneous. Step 2 classifies each candidate by its size and by
//! how far its mean attribute is from the mean over its neighbouring
//! candidates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::clustering::{cut, CutCriterion, Merge, MergeTree, UnionFind};
use crate::error::{Error, Result};
use crate::graph::{AnnotatedGraph, Edge, VertexAttributeMap};
use crate::scalar::{mean, median_absolute_deviation, Scalar};

/// `F'` on the edges of a graph, aligned with [`AnnotatedGraph::edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeGradientMap<T> {
    edges: Vec<Edge>,
    values: Vec<T>,
}

impl<T: Scalar> EdgeGradientMap<T> {
    /// Wraps precomputed values; `values[i]` belongs to `graph.edges()[i]`.
    pub fn from_values(graph: &AnnotatedGraph, values: Vec<T>) -> Result<Self> {
        if values.len() != graph.edge_count() {
            return Err(Error::domain(format!(
                "{} gradient values for {} edges",
                values.len(),
                graph.edge_count()
            )));
        }
        if values.iter().any(|&v| v < T::zero() || !v.is_finite_value()) {
            return Err(Error::domain(
                "edge gradient values must be finite and non-negative",
            ));
        }
        Ok(EdgeGradientMap {
            edges: graph.edges().to_vec(),
            values,
        })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, u: usize, v: usize) -> Option<T> {
        let key = if u <= v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok().map(|i| self.values[i])
    }

    pub fn to_map(&self) -> BTreeMap<Edge, T> {
        self.edges
            .iter()
            .copied()
            .zip(self.values.iter().copied())
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, T)> + '_ {
        self.edges.iter().copied().zip(self.values.iter().copied())
    }
}

pub fn edge_gradient<T: Scalar>(graph: &AnnotatedGraph, a_hat: &VertexAttributeMap<T>) -> EdgeGradientMap<T> {
    let values = graph
        .edges()
        .iter()
        .map(|&(u, v)| a_hat.get(u).abs_diff(a_hat.get(v)))
        .collect();
    EdgeGradientMap {
        edges: graph.edges().to_vec(),
        values,
    }
}

/// Single-linkage merge tree constrained to graph edges (Kruskal order).
///
/// Equal gradients are processed in edge order. Disconnected graphs give a
/// forest.
pub fn graph_dendrogram<T: Scalar>(
    graph: &AnnotatedGraph,
    grad: &EdgeGradientMap<T>,
) -> Result<MergeTree<T>> {
    if grad.edges() != graph.edges() {
        return Err(Error::domain("edge gradient does not match the graph's edges"));
    }
    let n = graph.vertex_count();
    let mut order: Vec<usize> = (0..grad.values.len()).collect();
    order.sort_by(|&a, &b| {
        grad.values[a]
            .partial_cmp(&grad.values[b])
            .expect("comparable gradients")
            .then(grad.edges[a].cmp(&grad.edges[b]))
    });
    let mut uf = UnionFind::new(n);
    let mut cluster_of_root: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for i in order {
        let (u, v) = grad.edges[i];
        let (ru, rv) = (uf.find(u), uf.find(v));
        if ru == rv {
            continue;
        }
        let (cu, cv) = (cluster_of_root[ru], cluster_of_root[rv]);
        uf.union(ru, rv);
        let root = uf.find(ru);
        cluster_of_root[root] = n + merges.len();
        merges.push(Merge {
            left: cu.min(cv),
            right: cu.max(cv),
            height: grad.values[i],
        });
    }
    Ok(MergeTree::new_unchecked(n, merges))
}

/// Cut level at the middle of the widest gap between consecutive distinct
/// merge heights.
///
/// Zero is always treated as a height and a virtual top is added at
/// `1.5 * max height`, so a single merge at `h` yields `h / 2` and a tree
/// whose widest gap is the top one is not cut at all (`1.25 * max`). Ties
/// between gaps pick the lowest one.
pub fn suggest_tau<T: Scalar>(tree: &MergeTree<T>) -> Result<T> {
    let mut heights: Vec<T> = tree.heights().collect();
    heights.push(T::zero());
    heights.sort_by(|a, b| a.partial_cmp(b).expect("comparable heights"));
    heights.dedup();
    let max = *heights.last().expect("zero was pushed");
    if max <= T::zero() {
        return Err(Error::domain(
            "every merge is at height 0; no meaningful cut exists, supply tau",
        ));
    }
    let three = T::from_count(3);
    heights.push(max * three * T::half());
    let mut best = (T::zero(), T::zero(), T::zero());
    for w in heights.windows(2) {
        let gap = w[1] - w[0];
        if gap > best.0 {
            best = (gap, w[0], w[1]);
        }
    }
    Ok((best.1 + best.2) * T::half())
}

/// A connected set of vertices produced by the dendrogram cut.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateComponent<T> {
    /// Sorted vertex ids.
    pub vertices: Vec<usize>,
    /// Unweighted mean of Â over the vertices.
    pub a_hat: T,
    pub size_nodes: usize,
    /// Number of distinct points covered by the vertices.
    pub size_points: usize,
    /// `max Â - min Â` inside the component.
    pub a_hat_spread: T,
}

impl<T: Scalar> CandidateComponent<T> {
    fn from_vertices(vertices: Vec<usize>, graph: &AnnotatedGraph, a_hat: &VertexAttributeMap<T>) -> Self {
        let values: Vec<T> = vertices.iter().map(|&v| a_hat.get(v)).collect();
        let mean_value = mean(values.iter().copied()).expect("components are non-empty");
        let mut lo = values[0];
        let mut hi = values[0];
        for &x in &values {
            if x < lo {
                lo = x;
            }
            if x > hi {
                hi = x;
            }
        }
        let mut points: Vec<usize> = vertices
            .iter()
            .flat_map(|&v| graph.members(v).iter().copied())
            .collect();
        points.sort_unstable();
        points.dedup();
        CandidateComponent {
            size_nodes: vertices.len(),
            size_points: points.len(),
            vertices,
            a_hat: mean_value,
            a_hat_spread: hi - lo,
        }
    }

    pub fn size(&self, measure: SizeMeasure) -> usize {
        match measure {
            SizeMeasure::Nodes => self.size_nodes,
            SizeMeasure::Points => self.size_points,
        }
    }

    /// Distinct points covered by the component.
    pub fn points(&self, graph: &AnnotatedGraph) -> Vec<usize> {
        let mut points: Vec<usize> = self
            .vertices
            .iter()
            .flat_map(|&v| graph.members(v).iter().copied())
            .collect();
        points.sort_unstable();
        points.dedup();
        points
    }
}

/// Components connected below `tau` in the dendrogram, annotated with Â and sizes.
pub fn candidates_at<T: Scalar>(
    tree: &MergeTree<T>,
    graph: &AnnotatedGraph,
    a_hat: &VertexAttributeMap<T>,
    tau: T,
) -> Result<Vec<CandidateComponent<T>>> {
    if tree.leaf_count() != graph.vertex_count() {
        return Err(Error::domain("dendrogram leaves do not match graph vertices"));
    }
    let partition = cut(tree, CutCriterion::Height(tau))?;
    Ok(partition
        .into_components()
        .into_iter()
        .map(|c| CandidateComponent::from_vertices(c, graph, a_hat))
        .collect())
}

fn candidate_labels<T>(partition: &[CandidateComponent<T>], vertex_count: usize) -> Result<Vec<usize>> {
    let mut labels = vec![usize::MAX; vertex_count];
    for (i, c) in partition.iter().enumerate() {
        for &v in &c.vertices {
            if v >= vertex_count || labels[v] != usize::MAX {
                return Err(Error::domain(format!("vertex {v} is not covered exactly once")));
            }
            labels[v] = i;
        }
    }
    if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
        return Err(Error::domain(format!("vertex {v} belongs to no candidate")));
    }
    Ok(labels)
}

fn neighbours_with_labels(
    labels: &[usize],
    graph: &AnnotatedGraph,
    index: usize,
    vertices: &[usize],
) -> Vec<usize> {
    let mut out: Vec<usize> = vertices
        .iter()
        .flat_map(|&v| graph.neighbours(v).iter().map(|&w| labels[w]))
        .filter(|&l| l != index)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Indices of the candidates sharing at least one edge with `partition[index]`.
pub fn neighbourhood_of<T>(
    partition: &[CandidateComponent<T>],
    graph: &AnnotatedGraph,
    index: usize,
) -> Result<Vec<usize>> {
    let labels = candidate_labels(partition, graph.vertex_count())?;
    let c = partition
        .get(index)
        .ok_or_else(|| Error::domain(format!("candidate {index} does not exist")))?;
    Ok(neighbours_with_labels(&labels, graph, index, &c.vertices))
}

/// How component size is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeMeasure {
    Nodes,
    Points,
}

impl SizeMeasure {
    pub fn name(self) -> &'static str {
        match self {
            SizeMeasure::Nodes => "nodes",
            SizeMeasure::Points => "points",
        }
    }
}

/// `S(N_C)`: mean size of the neighbour components; `None` for an empty
/// neighbourhood.
pub fn neighbourhood_size<T: Scalar>(
    neighbours: &[&CandidateComponent<T>],
    measure: SizeMeasure,
) -> Option<T> {
    mean(neighbours.iter().map(|c| T::from_count(c.size(measure))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeMode {
    Nodes,
    Points,
    Both,
}

impl SizeMode {
    pub fn measures(self) -> &'static [SizeMeasure] {
        match self {
            SizeMode::Nodes => &[SizeMeasure::Nodes],
            SizeMode::Points => &[SizeMeasure::Points],
            SizeMode::Both => &[SizeMeasure::Nodes, SizeMeasure::Points],
        }
    }
}

impl std::str::FromStr for SizeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nodes" => Ok(SizeMode::Nodes),
            "points" => Ok(SizeMode::Points),
            "both" => Ok(SizeMode::Both),
            _ => Err(Error::domain(format!("unknown size mode '{s}'"))),
        }
    }
}

/// Form of the size-contrast test between a candidate and its neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContrastRule {
    /// Rejects when `S(N_C) - S(C) < sigma2`: the candidate must be smaller
    /// than its neighbourhood.
    #[default]
    Signed,
    /// Rejects when `|S(N_C) - S(C)| < sigma2`.
    Absolute,
}

impl std::str::FromStr for ContrastRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "signed" => Ok(ContrastRule::Signed),
            "absolute" => Ok(ContrastRule::Absolute),
            _ => Err(Error::domain(format!("unknown contrast rule '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HotspotConfig<T> {
    /// Dendrogram cut level; suggested from the dendrogram when absent.
    pub tau: Option<T>,
    pub epsilon: T,
    pub sigma1_nodes: Option<usize>,
    pub sigma1_points: Option<usize>,
    /// Size-contrast threshold; one MAD of the candidate sizes when absent.
    pub sigma2: Option<T>,
    pub size_mode: SizeMode,
    pub contrast: ContrastRule,
}

impl<T: Scalar> HotspotConfig<T> {
    /// Node-count thresholds only.
    pub fn nodes(sigma1: usize, epsilon: T) -> Self {
        HotspotConfig {
            tau: None,
            epsilon,
            sigma1_nodes: Some(sigma1),
            sigma1_points: None,
            sigma2: None,
            size_mode: SizeMode::Nodes,
            contrast: ContrastRule::Signed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon < T::zero() || !self.epsilon.is_finite_value() {
            return Err(Error::domain("epsilon must be finite and non-negative"));
        }
        if let Some(tau) = self.tau {
            if tau <= T::zero() {
                return Err(Error::domain("tau must be positive"));
            }
        }
        if self.sigma2.is_some_and(|s| s < T::zero()) {
            return Err(Error::domain("sigma2 must be non-negative"));
        }
        for &m in self.size_mode.measures() {
            if self.sigma1(m).is_none() {
                return Err(Error::domain(format!(
                    "size mode needs a sigma1 threshold for {}",
                    m.name()
                )));
            }
        }
        Ok(())
    }

    pub fn sigma1(&self, measure: SizeMeasure) -> Option<usize> {
        match measure {
            SizeMeasure::Nodes => self.sigma1_nodes,
            SizeMeasure::Points => self.sigma1_points,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Hotspot,
    TooSmall,
    InsufficientSizeContrast,
    InsufficientHeterogeneity,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Hotspot => "hotspot",
            Verdict::TooSmall => "too_small",
            Verdict::InsufficientSizeContrast => "insufficient_size_contrast",
            Verdict::InsufficientHeterogeneity => "insufficient_heterogeneity",
        }
    }
}

impl std::str::FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Verdict::Hotspot,
            Verdict::TooSmall,
            Verdict::InsufficientSizeContrast,
            Verdict::InsufficientHeterogeneity,
        ]
        .into_iter()
        .find(|v| v.as_str() == s)
        .ok_or_else(|| Error::domain(format!("unknown verdict '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedCandidate<T> {
    pub candidate: CandidateComponent<T>,
    /// Indices into [`HotspotReport::candidates`].
    pub neighbour_ids: Vec<usize>,
    pub s_neighbourhood_nodes: Option<T>,
    pub s_neighbourhood_points: Option<T>,
    /// Mean Â over every vertex of every neighbour component.
    pub a_hat_neighbourhood: Option<T>,
    /// `|Â(C) - Â(N_C)|`.
    pub heterogeneity: Option<T>,
    pub verdict: Verdict,
}

impl<T: Scalar> ClassifiedCandidate<T> {
    pub fn s_neighbourhood(&self, measure: SizeMeasure) -> Option<T> {
        match measure {
            SizeMeasure::Nodes => self.s_neighbourhood_nodes,
            SizeMeasure::Points => self.s_neighbourhood_points,
        }
    }

    /// Signed `S(N_C) - S(C)`.
    pub fn size_contrast(&self, measure: SizeMeasure) -> Option<T> {
        self.s_neighbourhood(measure)
            .map(|s| s - T::from_count(self.candidate.size(measure)))
    }

    pub fn is_hotspot(&self) -> bool {
        self.verdict == Verdict::Hotspot
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HotspotReport<T> {
    pub tau: T,
    pub size_mode: SizeMode,
    pub sigma2_nodes: Option<T>,
    pub sigma2_points: Option<T>,
    pub candidates: Vec<ClassifiedCandidate<T>>,
}

impl<T: Scalar> HotspotReport<T> {
    pub fn hotspots(&self) -> impl Iterator<Item = &ClassifiedCandidate<T>> + '_ {
        self.candidates.iter().filter(|c| c.is_hotspot())
    }

    pub fn hotspot_count(&self) -> usize {
        self.hotspots().count()
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.candidates.iter().filter(|c| c.verdict == verdict).count()
    }

    pub fn sigma2(&self, measure: SizeMeasure) -> Option<T> {
        match measure {
            SizeMeasure::Nodes => self.sigma2_nodes,
            SizeMeasure::Points => self.sigma2_points,
        }
    }

    /// The size measure reported as `s_neighbourhood`.
    pub fn primary_measure(&self) -> SizeMeasure {
        self.size_mode.measures()[0]
    }
}

/// Step 2: size and neighbourhood-heterogeneity classification.
///
/// Neighbourhoods are always taken over the full candidate partition, so
/// candidates rejected as too small still count as neighbours. A candidate
/// without neighbours (a whole connected component) is
/// `InsufficientHeterogeneity`.
pub fn classify_candidates<T: Scalar>(
    candidates: Vec<CandidateComponent<T>>,
    graph: &AnnotatedGraph,
    a_hat: &VertexAttributeMap<T>,
    config: &HotspotConfig<T>,
    tau: T,
) -> Result<HotspotReport<T>> {
    config.validate()?;
    let sigma2_for = |m: SizeMeasure| -> Option<T> {
        config.sigma2.or_else(|| {
            let sizes: Vec<T> = candidates.iter().map(|c| T::from_count(c.size(m))).collect();
            median_absolute_deviation(&sizes)
        })
    };
    let sigma2_nodes = sigma2_for(SizeMeasure::Nodes);
    let sigma2_points = sigma2_for(SizeMeasure::Points);
    if candidates.is_empty() {
        return Ok(HotspotReport {
            tau,
            size_mode: config.size_mode,
            sigma2_nodes,
            sigma2_points,
            candidates: Vec::new(),
        });
    }
    let labels = candidate_labels(&candidates, graph.vertex_count())?;

    let mut classified = Vec::with_capacity(candidates.len());
    for (i, c) in candidates.iter().enumerate() {
        let neighbour_ids = neighbours_with_labels(&labels, graph, i, &c.vertices);
        let neighbours: Vec<&CandidateComponent<T>> = neighbour_ids.iter().map(|&j| &candidates[j]).collect();
        let s_nodes = neighbourhood_size(&neighbours, SizeMeasure::Nodes);
        let s_points = neighbourhood_size(&neighbours, SizeMeasure::Points);
        let a_hat_neighbourhood = mean(
            neighbours
                .iter()
                .flat_map(|n| n.vertices.iter().map(|&v| a_hat.get(v))),
        );
        let heterogeneity = a_hat_neighbourhood.map(|a| a.abs_diff(c.a_hat));

        let mut entry = ClassifiedCandidate {
            candidate: c.clone(),
            neighbour_ids,
            s_neighbourhood_nodes: s_nodes,
            s_neighbourhood_points: s_points,
            a_hat_neighbourhood,
            heterogeneity,
            verdict: Verdict::InsufficientHeterogeneity,
        };

        let measures = config.size_mode.measures();
        let too_small = measures
            .iter()
            .any(|&m| c.size(m) < config.sigma1(m).expect("validated"));
        let contrast_fails = |m: SizeMeasure| -> bool {
            let sigma2 = match m {
                SizeMeasure::Nodes => sigma2_nodes,
                SizeMeasure::Points => sigma2_points,
            }
            .expect("candidates are non-empty");
            let diff = entry.size_contrast(m).expect("neighbourhood is non-empty");
            match config.contrast {
                ContrastRule::Signed => diff < sigma2,
                ContrastRule::Absolute => {
                    let abs = if diff < T::zero() { T::zero() - diff } else { diff };
                    abs < sigma2
                }
            }
        };
        entry.verdict = if too_small {
            Verdict::TooSmall
        } else if heterogeneity.is_none() {
            Verdict::InsufficientHeterogeneity
        } else if measures.iter().any(|&m| contrast_fails(m)) {
            Verdict::InsufficientSizeContrast
        } else if heterogeneity.expect("checked") > config.epsilon {
            Verdict::Hotspot
        } else {
            Verdict::InsufficientHeterogeneity
        };
        classified.push(entry);
    }
    Ok(HotspotReport {
        tau,
        size_mode: config.size_mode,
        sigma2_nodes,
        sigma2_points,
        candidates: classified,
    })
}

/// Every intermediate of a detection run.
#[derive(Debug, Clone)]
pub struct Detection<T> {
    pub gradient: EdgeGradientMap<T>,
    pub dendrogram: MergeTree<T>,
    pub report: HotspotReport<T>,
}

/// Full two-step pipeline, keeping the gradient and dendrogram.
///
/// Without a configured `tau` the level comes from [`suggest_tau`]. When every
/// merge happens at height 0 any positive level gives the same partition, and
/// `1` is used.
pub fn run_detection<T: Scalar>(
    graph: &AnnotatedGraph,
    a_hat: &VertexAttributeMap<T>,
    config: &HotspotConfig<T>,
) -> Result<Detection<T>> {
    config.validate()?;
    if a_hat.len() != graph.vertex_count() {
        return Err(Error::domain("attribute map does not match the graph"));
    }
    let gradient = edge_gradient(graph, a_hat);
    let dendrogram = graph_dendrogram(graph, &gradient)?;
    let tau = match config.tau {
        Some(t) => t,
        None if dendrogram.heights().all(|h| h == T::zero()) => T::one(),
        None => suggest_tau(&dendrogram)?,
    };
    let candidates = candidates_at(&dendrogram, graph, a_hat, tau)?;
    let report = classify_candidates(candidates, graph, a_hat, config, tau)?;
    Ok(Detection {
        gradient,
        dendrogram,
        report,
    })
}

pub fn detect_hotspots<T: Scalar>(
    graph: &AnnotatedGraph,
    a_hat: &VertexAttributeMap<T>,
    config: &HotspotConfig<T>,
) -> Result<HotspotReport<T>> {
    run_detection(graph, a_hat, config).map(|d| d.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::threshold_components;

    fn singletons(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|i| vec![i]).collect()
    }

    fn graph(n: usize, edges: &[Edge]) -> AnnotatedGraph {
        AnnotatedGraph::new(singletons(n), edges.iter().copied()).unwrap()
    }

    fn attr(g: &AnnotatedGraph, v: &[f64]) -> VertexAttributeMap<f64> {
        VertexAttributeMap::new(g, v.to_vec()).unwrap()
    }

    #[test]
    fn gradient_values() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let a = attr(&g, &[0.3, 0.7, 0.7]);
        let grad = edge_gradient(&g, &a);
        assert_eq!(grad.get(0, 1), Some(0.7 - 0.3));
        assert_eq!(grad.get(1, 0), grad.get(0, 1));
        assert_eq!(grad.get(2, 1), Some(0.0));
        assert_eq!(grad.get(0, 2), None);
    }

    #[test]
    fn dendrogram_of_path() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let grad = EdgeGradientMap::from_values(&g, vec![0.9, 0.1]).unwrap();
        let t = graph_dendrogram(&g, &grad).unwrap();
        let h: Vec<f64> = t.heights().collect();
        assert_eq!(h, vec![0.1, 0.9]);
        assert_eq!((t.merges()[0].left, t.merges()[0].right), (1, 2));
        assert_eq!((t.merges()[1].left, t.merges()[1].right), (0, 3));
    }

    #[test]
    fn dendrogram_constant_and_forest() {
        let g = graph(4, &[(0, 1), (1, 2), (0, 2)]);
        let a = attr(&g, &[1.0; 4]);
        let t = graph_dendrogram(&g, &edge_gradient(&g, &a)).unwrap();
        assert_eq!(t.merges().len(), 2);
        assert!(t.heights().all(|h| h == 0.0));
        assert!(!t.is_complete());
    }

    #[test]
    fn dendrogram_rejects_foreign_gradient() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let other = graph(3, &[(0, 1)]);
        let grad = edge_gradient(&other, &attr(&other, &[0.0, 1.0, 2.0]));
        assert!(graph_dendrogram(&g, &grad).is_err());
    }

    #[test]
    fn tau_suggestions() {
        let m = |h: f64, l, r| Merge {
            left: l,
            right: r,
            height: h,
        };
        let t = MergeTree::new(5, vec![m(0.0, 0, 1), m(0.0, 2, 3), m(0.05, 5, 6), m(0.9, 4, 7)]).unwrap();
        assert!((suggest_tau(&t).unwrap() - 0.475).abs() < 1e-15);
        let t = MergeTree::new(2, vec![m(0.8, 0, 1)]).unwrap();
        assert_eq!(suggest_tau(&t).unwrap(), 0.4);
        // widest gap at the top: nothing is cut
        let t = MergeTree::new(5, vec![m(0.3, 0, 1), m(0.6, 2, 5), m(0.9, 3, 6), m(1.0, 4, 7)]).unwrap();
        assert_eq!(suggest_tau(&t).unwrap(), 1.25);
        let t = MergeTree::new(2, vec![m(0.0, 0, 1)]).unwrap();
        assert!(suggest_tau(&t).is_err());
        let t: MergeTree<f64> = MergeTree::new(2, vec![]).unwrap();
        assert!(suggest_tau(&t).is_err());
    }

    #[test]
    fn tau_suggestion_exact() {
        use num_rational::Ratio;
        let r = |a: i64, b: i64| Ratio::new(a, b);
        let m = |h, l, rr| Merge {
            left: l,
            right: rr,
            height: h,
        };
        let t = MergeTree::new(
            5,
            vec![
                m(r(0, 1), 0, 1),
                m(r(0, 1), 2, 3),
                m(r(1, 20), 5, 6),
                m(r(9, 10), 4, 7),
            ],
        )
        .unwrap();
        assert_eq!(suggest_tau(&t).unwrap(), r(19, 40));
    }

    #[test]
    fn candidates_match_threshold_oracle() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        let a = attr(&g, &[0.0, 0.1, 1.0, 1.05, 0.2]);
        let grad = edge_gradient(&g, &a);
        let t = graph_dendrogram(&g, &grad).unwrap();
        for tau in [0.01, 0.08, 0.15, 0.5, 0.95, 2.0] {
            let cands = candidates_at(&t, &g, &a, tau).unwrap();
            let got: Vec<Vec<usize>> = cands.into_iter().map(|c| c.vertices).collect();
            let want = threshold_components(&g, &grad.to_map(), tau)
                .unwrap()
                .into_components();
            assert_eq!(got, want, "tau = {tau}");
        }
        let cands = candidates_at(&t, &g, &a, 0.5).unwrap();
        assert_eq!(cands[0].vertices, vec![0, 1, 4]);
        assert!((cands[0].a_hat - 0.1).abs() < 1e-15);
        assert!((cands[0].a_hat_spread - 0.2).abs() < 1e-15);
        assert_eq!(cands[1].size_nodes, 2);
    }

    #[test]
    fn tau_above_max_gives_graph_components() {
        let g = graph(5, &[(0, 1), (2, 3)]);
        let a = attr(&g, &[0.0, 3.0, 1.0, -2.0, 5.0]);
        let t = graph_dendrogram(&g, &edge_gradient(&g, &a)).unwrap();
        assert_eq!(candidates_at(&t, &g, &a, 10.0).unwrap().len(), 3);
    }

    #[test]
    fn candidate_point_sizes_count_distinct_points() {
        let g = AnnotatedGraph::new(vec![vec![0, 1, 2], vec![2, 3]], [(0, 1)]).unwrap();
        let a = attr(&g, &[1.0, 1.0]);
        let t = graph_dendrogram(&g, &edge_gradient(&g, &a)).unwrap();
        let c = candidates_at(&t, &g, &a, 0.5).unwrap();
        assert_eq!(c[0].size_points, 4);
        assert_eq!(c[0].size_nodes, 2);
    }

    fn path_segments() -> (AnnotatedGraph, Vec<CandidateComponent<f64>>) {
        let g = graph(
            9,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)],
        );
        let a = attr(&g, &[0.0; 9]);
        let cands = vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]
            .into_iter()
            .map(|vs| CandidateComponent::from_vertices(vs, &g, &a))
            .collect();
        (g, cands)
    }

    #[test]
    fn neighbourhoods_on_path_segments() {
        let (g, cands) = path_segments();
        // adjacency enumeration oracle
        for i in 0..3 {
            let mut expected: Vec<usize> = Vec::new();
            for &(u, v) in g.edges() {
                let (cu, cv) = (u / 3, v / 3);
                if cu == i && cv != i {
                    expected.push(cv);
                }
                if cv == i && cu != i {
                    expected.push(cu);
                }
            }
            expected.sort_unstable();
            expected.dedup();
            assert_eq!(neighbourhood_of(&cands, &g, i).unwrap(), expected);
        }
        assert_eq!(neighbourhood_of(&cands, &g, 1).unwrap(), vec![0, 2]);
        assert_eq!(neighbourhood_of(&cands, &g, 0).unwrap(), vec![1]);
        assert!(neighbourhood_of(&cands, &g, 3).is_err());
        assert!(neighbourhood_of(&cands[..2], &g, 0).is_err());
    }

    #[test]
    fn isolated_component_has_no_neighbours() {
        let g = graph(3, &[(0, 1)]);
        let a = attr(&g, &[0.0; 3]);
        let cands: Vec<_> = vec![vec![0, 1], vec![2]]
            .into_iter()
            .map(|vs| CandidateComponent::from_vertices(vs, &g, &a))
            .collect();
        assert!(neighbourhood_of(&cands, &g, 1).unwrap().is_empty());
    }

    #[test]
    fn neighbourhood_sizes() {
        let g = graph(21, &[]);
        let a = attr(&g, &[0.0; 21]);
        let mk =
            |n: usize, start: usize| CandidateComponent::from_vertices((start..start + n).collect(), &g, &a);
        let (c4, c6, c9) = (mk(4, 0), mk(6, 4), mk(9, 10));
        assert_eq!(neighbourhood_size(&[&c4, &c6], SizeMeasure::Nodes), Some(5.0));
        assert_eq!(neighbourhood_size(&[&c9], SizeMeasure::Nodes), Some(9.0));
        let (c2, c3, c7) = (mk(2, 0), mk(3, 2), mk(7, 5));
        let s = neighbourhood_size(&[&c2, &c3, &c7], SizeMeasure::Nodes).unwrap();
        let oracle = [2.0, 3.0, 7.0].iter().sum::<f64>() / 3.0;
        assert_eq!(s, oracle);
        assert_eq!(s, 4.0);
        assert_eq!(neighbourhood_size::<f64>(&[], SizeMeasure::Nodes), None);
    }

    #[test]
    fn config_validation() {
        let mut cfg = HotspotConfig::nodes(2, 0.1);
        assert!(cfg.validate().is_ok());
        cfg.size_mode = SizeMode::Both;
        assert!(cfg.validate().is_err());
        cfg.sigma1_points = Some(3);
        assert!(cfg.validate().is_ok());
        cfg.epsilon = -0.1;
        assert!(cfg.validate().is_err());
        let mut cfg = HotspotConfig::nodes(2, 0.1);
        cfg.tau = Some(0.0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn star_hotspot() {
        // hub path 0..10 at 0.0, a 3-vertex spur at 1.0 attached to vertex 5
        let mut edges: Vec<Edge> = (0..9).map(|i| (i, i + 1)).collect();
        edges.extend([(5, 10), (10, 11), (11, 12)]);
        let g = graph(13, &edges);
        let mut v = vec![0.0; 13];
        v[10..].fill(1.0);
        let a = attr(&g, &v);
        let report = detect_hotspots(&g, &a, &HotspotConfig::nodes(2, 0.1)).unwrap();
        assert_eq!(report.candidates.len(), 2);
        assert_eq!(report.hotspot_count(), 1);
        let hot = report.hotspots().next().unwrap();
        assert_eq!(hot.candidate.vertices, vec![10, 11, 12]);
        assert_eq!(hot.heterogeneity, Some(1.0));
        // the big component is larger than its neighbourhood
        assert_eq!(report.candidates[0].verdict, Verdict::InsufficientSizeContrast);

        let mut cfg = HotspotConfig::nodes(2, 0.1);
        cfg.contrast = ContrastRule::Absolute;
        let report = detect_hotspots(&g, &a, &cfg).unwrap();
        assert_eq!(report.hotspot_count(), 2);

        let report = detect_hotspots(&g, &a, &HotspotConfig::nodes(4, 0.1)).unwrap();
        assert_eq!(report.candidates[1].verdict, Verdict::TooSmall);

        let report = detect_hotspots(&g, &a, &HotspotConfig::nodes(2, 1.0)).unwrap();
        assert_eq!(report.candidates[1].verdict, Verdict::InsufficientHeterogeneity);
    }

    #[test]
    fn edgeless_graph_has_no_hotspots() {
        let g = graph(6, &[]);
        let a = attr(&g, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let report = detect_hotspots(&g, &a, &HotspotConfig::nodes(1, 0.0)).unwrap();
        assert_eq!(report.candidates.len(), 6);
        assert_eq!(report.count(Verdict::InsufficientHeterogeneity), 6);
    }

    #[test]
    fn constant_attribute_has_no_hotspots() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let a = attr(&g, &[0.5; 4]);
        let report = detect_hotspots(&g, &a, &HotspotConfig::nodes(1, 0.01)).unwrap();
        assert_eq!(report.hotspot_count(), 0);
        assert_eq!(report.tau, 1.0);
    }

    #[test]
    fn empty_candidate_list() {
        let g = graph(0, &[]);
        let a = attr(&g, &[]);
        let r = classify_candidates(vec![], &g, &a, &HotspotConfig::nodes(1, 0.0), 1.0).unwrap();
        assert!(r.candidates.is_empty());
    }
}
