//! Mapper graph construction: interval cover of the lens range, pullback
//! clustering inside each interval, and nerve edges between clusters that
//! share points.

use rayon::prelude::*;

use crate::clustering::{agglomerate, cut, pairwise_distances_of, CutCriterion, LinkageKind, Metric};
use crate::error::{Error, Result};
use crate::graph::{normalize, AnnotatedGraph, PointCloud};
use crate::scalar::{Real, Scalar};

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverInterval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> CoverInterval<T> {
    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapperConfig<T> {
    pub n_intervals: usize,
    /// Percentage of interval length shared by consecutive intervals, in `[0, 100)`.
    pub overlap_pct: T,
    pub linkage: LinkageKind,
    pub clusters_per_interval: usize,
    pub metric: Metric,
}

impl<T: Scalar> MapperConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.n_intervals == 0 {
            return Err(Error::domain("number of intervals must be at least 1"));
        }
        if self.overlap_pct < T::zero() || self.overlap_pct >= T::from_count(100) {
            return Err(Error::domain("overlap percentage must lie in [0, 100)"));
        }
        if self.clusters_per_interval == 0 {
            return Err(Error::domain("clusters per interval must be at least 1"));
        }
        Ok(())
    }
}

/// `n` equal-length intervals covering `[range_lo, range_hi]`, consecutive
/// ones overlapping on `overlap_pct` percent of their length.
///
/// With `k = overlap_pct / 100` the length is `(hi - lo) / (n - (n - 1) k)`
/// and interval `i` starts at `lo + i (1 - k) L`.
pub fn build_cover<T: Scalar>(
    range_lo: T,
    range_hi: T,
    n: usize,
    overlap_pct: T,
) -> Result<Vec<CoverInterval<T>>> {
    if n == 0 {
        return Err(Error::domain("number of intervals must be at least 1"));
    }
    if range_lo.partial_cmp(&range_hi) != Some(std::cmp::Ordering::Less) {
        return Err(Error::domain("degenerate lens range"));
    }
    let hundred = T::from_count(100);
    if overlap_pct < T::zero() || overlap_pct >= hundred {
        return Err(Error::domain("overlap percentage must lie in [0, 100)"));
    }
    let k = overlap_pct / hundred;
    let span = range_hi - range_lo;
    let len = span / (T::from_count(n) - T::from_count(n - 1) * k);
    let shift = (T::one() - k) * len;
    let starts: Vec<T> = (0..n)
        .map(|i| {
            if i == 0 {
                range_lo
            } else {
                range_lo + T::from_count(i) * shift
            }
        })
        .collect();
    let mut cover: Vec<CoverInterval<T>> = starts
        .iter()
        .enumerate()
        .map(|(i, &lo)| {
            let mut hi = if i + 1 == n { range_hi } else { lo + len };
            // no gaps from rounding when there is no overlap
            if let Some(&next) = starts.get(i + 1) {
                if hi < next {
                    hi = next;
                }
            }
            CoverInterval { lo, hi }
        })
        .collect();
    if let Some(last) = cover.last_mut() {
        last.hi = range_hi;
    }
    Ok(cover)
}

/// Mapper graph with the provenance of every vertex.
#[derive(Debug, Clone)]
pub struct MapperGraph<T> {
    pub graph: AnnotatedGraph,
    /// Cover interval index of each vertex.
    pub vertex_interval: Vec<usize>,
    pub cover: Vec<CoverInterval<T>>,
}

fn cluster_pullback<T: Real>(
    cloud: &PointCloud<T>,
    pullback: &[usize],
    config: &MapperConfig<T>,
) -> Result<Vec<Vec<usize>>> {
    match pullback.len() {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![pullback.to_vec()]),
        _ => {}
    }
    let dist = pairwise_distances_of(cloud, pullback, config.metric)?;
    let tree = agglomerate(&dist, config.linkage);
    let k = config.clusters_per_interval.min(pullback.len());
    let partition = cut(&tree, CutCriterion::Count(k))?;
    // local indices are increasing in global index, so partition order is
    // "by smallest member"
    Ok(partition
        .into_components()
        .into_iter()
        .map(|c| c.into_iter().map(|i| pullback[i]).collect())
        .collect())
}

/// Builds the Mapper graph and keeps interval bookkeeping.
///
/// A constant lens collapses the cover to one interval holding every point.
pub fn build_mapper_detailed<T: Real>(
    cloud: &PointCloud<T>,
    lens_values: &[T],
    config: &MapperConfig<T>,
) -> Result<MapperGraph<T>> {
    config.validate()?;
    if lens_values.len() != cloud.len() {
        return Err(Error::domain(format!(
            "{} lens values for {} points",
            lens_values.len(),
            cloud.len()
        )));
    }
    if let Some(i) = lens_values.iter().position(|v| !v.is_finite()) {
        return Err(Error::domain(format!("lens value of point {i} is not finite")));
    }
    let lo = lens_values.iter().copied().fold(T::infinity(), T::min);
    let hi = lens_values.iter().copied().fold(T::neg_infinity(), T::max);
    let cover = if lo < hi {
        build_cover(lo, hi, config.n_intervals, config.overlap_pct)?
    } else {
        vec![CoverInterval { lo, hi }]
    };

    let per_interval: Vec<Vec<Vec<usize>>> = cover
        .par_iter()
        .map(|interval| {
            let pullback: Vec<usize> = (0..cloud.len())
                .filter(|&i| interval.contains(lens_values[i]))
                .collect();
            cluster_pullback(cloud, &pullback, config)
        })
        .collect::<Result<_>>()?;

    let mut members = Vec::new();
    let mut vertex_interval = Vec::new();
    for (i, clusters) in per_interval.into_iter().enumerate() {
        for c in clusters {
            members.push(c);
            vertex_interval.push(i);
        }
    }

    // each point lies in one cluster per interval, so vertices sharing a
    // point always come from distinct intervals
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); cloud.len()];
    for (v, m) in members.iter().enumerate() {
        for &p in m {
            containing[p].push(v);
        }
    }
    let mut edges = Vec::new();
    for vs in &containing {
        for (a, &u) in vs.iter().enumerate() {
            for &w in &vs[a + 1..] {
                edges.push(normalize(u, w));
            }
        }
    }
    let graph = AnnotatedGraph::new(members, edges)?;
    Ok(MapperGraph {
        graph,
        vertex_interval,
        cover,
    })
}

pub fn build_mapper<T: Real>(
    cloud: &PointCloud<T>,
    lens_values: &[T],
    config: &MapperConfig<T>,
) -> Result<AnnotatedGraph> {
    build_mapper_detailed(cloud, lens_values, config).map(|m| m.graph)
}
