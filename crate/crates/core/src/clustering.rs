//! Agglomerative hierarchical clustering.
//!
//! [`agglomerate`] produces a [`MergeTree`] from a [`DistanceMatrix`] using
//! single or Ward linkage; [`cut`] turns a tree back into flat clusters.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ComponentPartition, PointCloud};
use crate::scalar::{Real, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    /// `1 - pearson(x, y)`.
    Correlation,
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "correlation" => Ok(Metric::Correlation),
            _ => Err(Error::domain(format!("unknown metric '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkageKind {
    Single,
    Ward,
}

impl FromStr for LinkageKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(LinkageKind::Single),
            "ward" => Ok(LinkageKind::Ward),
            _ => Err(Error::domain(format!("unknown linkage '{s}'"))),
        }
    }
}

/// Dense symmetric dissimilarity matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<T> {
    size: usize,
    entries: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    /// Validates a row-major `size x size` matrix.
    pub fn from_full(size: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::domain(format!(
                "distance matrix needs {} entries, got {}",
                size * size,
                entries.len()
            )));
        }
        let tol = T::from_f64_lossy(1e-12);
        for i in 0..size {
            if entries[i * size + i] != T::zero() {
                return Err(Error::domain(format!("diagonal entry {i} is not zero")));
            }
            for j in (i + 1)..size {
                let a = entries[i * size + j];
                let b = entries[j * size + i];
                if !a.is_finite_value() || a < T::zero() {
                    return Err(Error::domain(format!(
                        "entry ({i}, {j}) must be finite and non-negative"
                    )));
                }
                if a.abs_diff(b) > tol {
                    return Err(Error::domain(format!("entries ({i}, {j}) and ({j}, {i}) differ")));
                }
            }
        }
        Ok(DistanceMatrix { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.size + j]
    }
}

fn euclidean<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .fold(T::zero(), |s, x| s + x)
        .sqrt()
}

/// Centered copy and its sum of squares.
fn centered<T: Real>(x: &[T]) -> (Vec<T>, T) {
    let n = T::from_count(x.len());
    let m = x.iter().fold(T::zero(), |s, &v| s + v) / n;
    let c: Vec<T> = x.iter().map(|&v| v - m).collect();
    let ss = c.iter().fold(T::zero(), |s, &v| s + v * v);
    (c, ss)
}

fn correlation_distance<T: Real>(a: &[T], b: &[T]) -> T {
    if a == b {
        return T::zero();
    }
    let (ca, ssa) = centered(a);
    let (cb, ssb) = centered(b);
    let dot = ca.iter().zip(&cb).fold(T::zero(), |s, (&x, &y)| s + x * y);
    let r = (dot / (ssa * ssb).sqrt()).max(-T::one()).min(T::one());
    T::one() - r
}

/// Distances between the points at `indices` (in that order).
pub fn pairwise_distances_of<T: Real>(
    cloud: &PointCloud<T>,
    indices: &[usize],
    metric: Metric,
) -> Result<DistanceMatrix<T>> {
    let m = indices.len();
    if metric == Metric::Correlation {
        for &i in indices {
            let (_, norm) = centered(cloud.point(i));
            if norm == T::zero() {
                return Err(Error::ZeroVariance { index: i });
            }
        }
    }
    let dist = |i: usize, j: usize| match metric {
        Metric::Euclidean => euclidean(cloud.point(i), cloud.point(j)),
        Metric::Correlation => correlation_distance(cloud.point(i), cloud.point(j)),
    };
    let upper: Vec<Vec<T>> = (0..m)
        .into_par_iter()
        .map(|a| ((a + 1)..m).map(|b| dist(indices[a], indices[b])).collect())
        .collect();
    let mut entries = vec![T::zero(); m * m];
    for (a, row) in upper.into_iter().enumerate() {
        for (off, d) in row.into_iter().enumerate() {
            let b = a + 1 + off;
            entries[a * m + b] = d;
            entries[b * m + a] = d;
        }
    }
    Ok(DistanceMatrix { size: m, entries })
}

/// All pairwise distances of a cloud.
pub fn pairwise_distances<T: Real>(cloud: &PointCloud<T>, metric: Metric) -> Result<DistanceMatrix<T>> {
    if cloud.len() < 2 {
        return Err(Error::domain("pairwise distances need at least 2 points"));
    }
    let all: Vec<usize> = (0..cloud.len()).collect();
    pairwise_distances_of(cloud, &all, metric)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge<T> {
    pub left: usize,
    pub right: usize,
    pub height: T,
}

/// Stepwise dendrogram. Leaves are `0..leaf_count`; the `i`-th merge creates
/// cluster `leaf_count + i`. A forest has fewer than `leaf_count - 1` merges.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeTree<T> {
    leaf_count: usize,
    merges: Vec<Merge<T>>,
}

impl<T: Scalar> MergeTree<T> {
    pub fn new(leaf_count: usize, merges: Vec<Merge<T>>) -> Result<Self> {
        if merges.len() > leaf_count.saturating_sub(1) {
            return Err(Error::domain(format!(
                "{} merges for {leaf_count} leaves",
                merges.len()
            )));
        }
        let mut used = vec![false; leaf_count + merges.len()];
        let mut prev: Option<T> = None;
        for (i, m) in merges.iter().enumerate() {
            let next_id = leaf_count + i;
            for id in [m.left, m.right] {
                if id >= next_id {
                    return Err(Error::domain(format!(
                        "merge {i} references cluster {id} before it exists"
                    )));
                }
                if used[id] {
                    return Err(Error::domain(format!("cluster {id} merged twice")));
                }
                used[id] = true;
            }
            if m.left == m.right {
                return Err(Error::domain(format!(
                    "merge {i} joins cluster {} to itself",
                    m.left
                )));
            }
            if !m.height.is_finite_value() || m.height < T::zero() {
                return Err(Error::domain(format!("merge {i} has an invalid height")));
            }
            if prev.is_some_and(|p| m.height < p) {
                return Err(Error::domain(format!("merge {i} height decreases")));
            }
            prev = Some(m.height);
        }
        Ok(MergeTree { leaf_count, merges })
    }

    pub(crate) fn new_unchecked(leaf_count: usize, merges: Vec<Merge<T>>) -> Self {
        MergeTree { leaf_count, merges }
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    pub fn merges(&self) -> &[Merge<T>] {
        &self.merges
    }

    pub fn heights(&self) -> impl Iterator<Item = T> + '_ {
        self.merges.iter().map(|m| m.height)
    }

    pub fn is_complete(&self) -> bool {
        self.leaf_count == 0 || self.merges.len() == self.leaf_count - 1
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub(crate) fn labels(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|i| self.find(i)).collect()
    }
}

/// Agglomerative clustering by repeatedly merging the closest pair of clusters.
///
/// Ties are broken by the lexicographically smallest `(smaller id, larger id)`
/// pair. Ward linkage runs the Lance-Williams recurrence on squared
/// dissimilarities and reports heights as square roots, which matches the
/// usual Euclidean Ward heights; it is applied to any dissimilarity.
pub fn agglomerate<T: Real>(dist: &DistanceMatrix<T>, linkage: LinkageKind) -> MergeTree<T> {
    let m = dist.size();
    let mut d: Vec<T> = match linkage {
        LinkageKind::Single => dist.entries.clone(),
        LinkageKind::Ward => dist.entries.iter().map(|&x| x * x).collect(),
    };
    let mut active = vec![true; m];
    let mut ids: Vec<usize> = (0..m).collect();
    let mut sizes = vec![1usize; m];
    let mut merges = Vec::with_capacity(m.saturating_sub(1));

    for step in 0..m.saturating_sub(1) {
        let mut best: Option<(T, usize, usize, usize, usize)> = None;
        for a in 0..m {
            if !active[a] {
                continue;
            }
            for b in (a + 1)..m {
                if !active[b] {
                    continue;
                }
                let v = d[a * m + b];
                let (lo, hi) = (ids[a].min(ids[b]), ids[a].max(ids[b]));
                let better = match best {
                    None => true,
                    Some((bv, blo, bhi, _, _)) => v < bv || (v == bv && (lo, hi) < (blo, bhi)),
                };
                if better {
                    best = Some((v, lo, hi, a, b));
                }
            }
        }
        let (v, lo, hi, a, b) = best.expect("at least two active clusters");
        let (na, nb) = (sizes[a], sizes[b]);
        let dab = d[a * m + b];
        for k in 0..m {
            if !active[k] || k == a || k == b {
                continue;
            }
            let dka = d[k * m + a];
            let dkb = d[k * m + b];
            let updated = match linkage {
                LinkageKind::Single => dka.min(dkb),
                LinkageKind::Ward => {
                    let nk = sizes[k];
                    let num =
                        T::from_count(na + nk) * dka + T::from_count(nb + nk) * dkb - T::from_count(nk) * dab;
                    (num / T::from_count(na + nb + nk)).max(T::zero())
                }
            };
            d[k * m + a] = updated;
            d[a * m + k] = updated;
        }
        active[b] = false;
        sizes[a] = na + nb;
        ids[a] = m + step;

        let mut height = match linkage {
            LinkageKind::Single => v,
            LinkageKind::Ward => v.max(T::zero()).sqrt(),
        };
        // Ward is monotone in exact arithmetic; absorb rounding wobble.
        if let Some(prev) = merges.last().map(|mg: &Merge<T>| mg.height) {
            if height < prev {
                height = prev;
            }
        }
        merges.push(Merge {
            left: lo,
            right: hi,
            height,
        });
    }
    MergeTree::new_unchecked(m, merges)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutCriterion<T> {
    /// Target cluster count; undoes the last merges.
    Count(usize),
    /// Applies every merge with height strictly below the level.
    Height(T),
}

/// Flat clusters of the tree's leaves.
pub fn cut<T: Scalar>(tree: &MergeTree<T>, criterion: CutCriterion<T>) -> Result<ComponentPartition> {
    let n = tree.leaf_count();
    let applied = match criterion {
        CutCriterion::Count(k) => {
            if k < 1 {
                return Err(Error::domain("cluster count must be at least 1"));
            }
            tree.merges.len().min(n.saturating_sub(k))
        }
        CutCriterion::Height(h) => {
            if h <= T::zero() {
                return Err(Error::domain("cut height must be positive"));
            }
            tree.merges.iter().take_while(|m| m.height < h).count()
        }
    };
    // representative leaf of every cluster id
    let mut rep: Vec<usize> = (0..n).collect();
    let mut uf = UnionFind::new(n);
    for m in &tree.merges[..applied] {
        let (a, b) = (rep[m.left], rep[m.right]);
        uf.union(a, b);
        rep.push(a);
    }
    Ok(ComponentPartition::from_labels(&uf.labels()))
}
