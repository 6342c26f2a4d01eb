//! Point clouds, attribute-annotated graphs and vertex partitions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};

/// Samples `x_1..x_k` in `R^n` with one attribute value per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud<T> {
    dim: usize,
    coords: Vec<T>,
    attribute: Vec<T>,
}

impl<T: Scalar> PointCloud<T> {
    pub fn new(points: Vec<Vec<T>>, attribute: Vec<T>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if points.is_empty() {
            return Err(Error::domain("point cloud has no points"));
        }
        if dim == 0 {
            return Err(Error::domain("points must have dimension >= 1"));
        }
        if attribute.len() != points.len() {
            return Err(Error::domain(format!(
                "attribute has {} values for {} points",
                attribute.len(),
                points.len()
            )));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.into_iter().enumerate() {
            if p.len() != dim {
                return Err(Error::domain(format!(
                    "point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if let Some(j) = p.iter().position(|x| !x.is_finite_value()) {
                return Err(Error::domain(format!("point {i} coordinate {j} is not finite")));
            }
            coords.extend(p);
        }
        if let Some(i) = attribute.iter().position(|a| !a.is_finite_value()) {
            return Err(Error::domain(format!("attribute of point {i} is not finite")));
        }
        Ok(PointCloud {
            dim,
            coords,
            attribute,
        })
    }

    pub fn len(&self) -> usize {
        self.attribute.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attribute.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn attribute(&self) -> &[T] {
        &self.attribute
    }
}

/// Undirected edge stored with `u < v`.
pub type Edge = (usize, usize);

pub(crate) fn normalize(u: usize, v: usize) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Graph whose vertices carry the indices of the points they cover.
///
/// Vertex ids are `0..vertex_count()`. Edges are unique, loop-free and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedGraph {
    members: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

impl AnnotatedGraph {
    /// Builds a graph from per-vertex member lists and an edge list.
    ///
    /// Member lists are sorted and deduplicated and duplicate edges are
    /// collapsed. Empty member sets and self-loops are rejected.
    pub fn new(members: Vec<Vec<usize>>, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let n = members.len();
        let mut members = members;
        for (v, m) in members.iter_mut().enumerate() {
            if m.is_empty() {
                return Err(Error::EmptyVertex { vertex: v });
            }
            m.sort_unstable();
            m.dedup();
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::domain(format!("self-loop on vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::domain(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            set.insert(normalize(u, v));
        }
        let edges: Vec<Edge> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Ok(AnnotatedGraph {
            members,
            edges,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.members.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn members(&self, v: usize) -> &[usize] {
        &self.members[v]
    }

    pub fn all_members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|adj| adj.binary_search(&v).is_ok())
    }

    /// Largest member index plus one.
    pub fn point_span(&self) -> usize {
        self.members
            .iter()
            .filter_map(|m| m.last())
            .max()
            .map_or(0, |&m| m + 1)
    }
}

/// The induced vertex attribute, indexed by vertex id.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexAttributeMap<T>(Vec<T>);

impl<T: Scalar> VertexAttributeMap<T> {
    pub fn new(graph: &AnnotatedGraph, values: Vec<T>) -> Result<Self> {
        if values.len() != graph.vertex_count() {
            return Err(Error::domain(format!(
                "attribute map has {} values for {} vertices",
                values.len(),
                graph.vertex_count()
            )));
        }
        if let Some(v) = values.iter().position(|a| !a.is_finite_value()) {
            return Err(Error::domain(format!("attribute of vertex {v} is not finite")));
        }
        Ok(VertexAttributeMap(values))
    }

    pub fn get(&self, v: usize) -> T {
        self.0[v]
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Applies `f` to every value.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        VertexAttributeMap(self.0.iter().map(|&x| f(x)).collect())
    }
}

/// Disjoint vertex sets in canonical order: every component sorted, components
/// ordered by their smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComponentPartition(Vec<Vec<usize>>);

impl ComponentPartition {
    pub fn from_components(mut components: Vec<Vec<usize>>) -> Self {
        components.retain(|c| !c.is_empty());
        for c in &mut components {
            c.sort_unstable();
        }
        components.sort_unstable_by_key(|c| c[0]);
        ComponentPartition(components)
    }

    /// Groups vertices by label.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(v);
        }
        Self::from_components(groups.into_values().collect())
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.0
    }

    pub fn into_components(self) -> Vec<Vec<usize>> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Component index of every vertex in `0..vertex_count`.
    pub fn labels(&self, vertex_count: usize) -> Vec<Option<usize>> {
        let mut labels = vec![None; vertex_count];
        for (i, c) in self.0.iter().enumerate() {
            for &v in c {
                labels[v] = Some(i);
            }
        }
        labels
    }

    /// True when every component of `self` lies inside one component of `coarser`.
    pub fn refines(&self, coarser: &ComponentPartition) -> bool {
        let n = self
            .0
            .iter()
            .chain(coarser.0.iter())
            .flatten()
            .max()
            .map_or(0, |&m| m + 1);
        let labels = coarser.labels(n);
        self.0.iter().all(|c| {
            let first = labels[c[0]];
            first.is_some() && c.iter().all(|&v| labels[v] == first)
        })
    }
}

/// Â(v): mean attribute over the points covered by each vertex.
pub fn induced_attribute<T: Scalar>(
    cloud: &PointCloud<T>,
    graph: &AnnotatedGraph,
) -> Result<VertexAttributeMap<T>> {
    let attribute = cloud.attribute();
    let mut values = Vec::with_capacity(graph.vertex_count());
    for v in 0..graph.vertex_count() {
        let members = graph.members(v);
        if let Some(&bad) = members.iter().find(|&&i| i >= attribute.len()) {
            return Err(Error::domain(format!(
                "vertex {v} references point {bad}, cloud has {} points",
                attribute.len()
            )));
        }
        let value = mean(members.iter().map(|&i| attribute[i])).ok_or(Error::EmptyVertex { vertex: v })?;
        values.push(value);
    }
    VertexAttributeMap::new(graph, values)
}

fn bfs_components(n: usize, neighbours: impl Fn(usize, &mut Vec<usize>)) -> ComponentPartition {
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    let mut buf = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut component = Vec::new();
        while let Some(u) = queue.pop_front() {
            component.push(u);
            buf.clear();
            neighbours(u, &mut buf);
            for &w in &buf {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        components.push(component);
    }
    ComponentPartition::from_components(components)
}

/// Maximal connected vertex sets.
pub fn connected_components(graph: &AnnotatedGraph) -> ComponentPartition {
    bfs_components(graph.vertex_count(), |u, out| {
        out.extend_from_slice(graph.neighbours(u))
    })
}

/// Components of the subgraph keeping only edges with weight strictly below `tau`.
///
/// `weights` may key an edge in either orientation.
pub fn threshold_components<T: Scalar>(
    graph: &AnnotatedGraph,
    weights: &BTreeMap<Edge, T>,
    tau: T,
) -> Result<ComponentPartition> {
    if tau <= T::zero() {
        return Err(Error::domain("tau must be positive"));
    }
    let lookup = |u: usize, v: usize| weights.get(&(u, v)).or_else(|| weights.get(&(v, u)));
    for &(u, v) in graph.edges() {
        if lookup(u, v).is_none() {
            return Err(Error::MissingEdgeWeight { u, v });
        }
    }
    Ok(bfs_components(graph.vertex_count(), |u, out| {
        out.extend(
            graph
                .neighbours(u)
                .iter()
                .copied()
                .filter(|&w| lookup(u, w).is_some_and(|&x| x < tau)),
        )
    }))
}
