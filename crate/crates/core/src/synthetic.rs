//! Synthetic datasets with planted ground truth.

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::PI;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::graph::{normalize, AnnotatedGraph, Edge, PointCloud, VertexAttributeMap};
use crate::scalar::Real;

/// Layout of the two-circles point cloud.
///
/// By default two concentric circles of radii 1 and 0.5, each holding half of
/// the points at evenly spaced angles. The attribute of a point is its minimum
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoCircles {
    pub n_points: usize,
    /// Standard deviation of the Gaussian jitter added to each coordinate.
    pub noise: f64,
    pub seed: u64,
    pub centers: [(f64, f64); 2],
    pub radii: [f64; 2],
}

impl TwoCircles {
    pub fn new(n_points: usize, noise: f64, seed: u64) -> Self {
        TwoCircles {
            n_points,
            noise,
            seed,
            centers: [(0.0, 0.0), (0.0, 0.0)],
            radii: [1.0, 0.5],
        }
    }

    pub fn generate<T: Real>(&self) -> Result<PointCloud<T>> {
        if self.n_points < 8 {
            return Err(Error::domain("two circles need at least 8 points"));
        }
        if self.noise.is_nan() || self.noise < 0.0 {
            return Err(Error::domain("noise must be non-negative"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let jitter = Normal::new(0.0, self.noise).map_err(|e| Error::domain(e.to_string()))?;
        let first = self.n_points / 2;
        let mut points = Vec::with_capacity(self.n_points);
        for (c, count) in [first, self.n_points - first].into_iter().enumerate() {
            let (cx, cy) = self.centers[c];
            let r = self.radii[c];
            for i in 0..count {
                let theta = 2.0 * PI * i as f64 / count as f64;
                let (mut dx, mut dy) = (0.0, 0.0);
                if self.noise > 0.0 {
                    dx = jitter.sample(&mut rng);
                    dy = jitter.sample(&mut rng);
                }
                points.push([cx + r * theta.cos() + dx, cy + r * theta.sin() + dy]);
            }
        }
        let attribute = points.iter().map(|p| T::from_f64_lossy(p[0].min(p[1]))).collect();
        let points = points
            .into_iter()
            .map(|p| p.iter().map(|&x| T::from_f64_lossy(x)).collect())
            .collect();
        PointCloud::new(points, attribute)
    }
}

/// Two noisy circles; see [`TwoCircles`] for the layout.
pub fn gen_two_circles<T: Real>(n_points: usize, noise: f64, seed: u64) -> Result<PointCloud<T>> {
    TwoCircles::new(n_points, noise, seed).generate()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `sin(x) + sin(y) >= 1`.
    SineBumps,
    /// `x^2 + y^2 + z^2 <= 1`.
    UnitBall,
}

impl Region {
    fn contains(self, p: &[f64]) -> bool {
        match self {
            Region::SineBumps => p[0].sin() + p[1].sin() >= 1.0,
            Region::UnitBall => p.iter().map(|x| x * x).sum::<f64>() <= 1.0,
        }
    }
}

/// Regular grid with planted high-attribute regions.
#[derive(Debug, Clone, PartialEq)]
pub struct GridGraphSpec {
    /// Per-axis `(lo, hi, step)`; the axis count is the grid dimension.
    pub extent: Vec<(f64, f64, f64)>,
    pub region: Region,
    /// Random long-range edges added on top of the axis neighbours.
    pub extra_edges: usize,
    /// Attribute noise is uniform on `[0, noise_scale]`.
    pub noise_scale: f64,
    pub correction: f64,
    pub seed: u64,
}

impl GridGraphSpec {
    /// `[0, 6 pi]^2` sampled at 91 points per axis; holds 9 sine regions.
    pub fn grid2d() -> Self {
        let hi = 6.0 * PI;
        GridGraphSpec {
            extent: vec![(0.0, hi, hi / 90.0); 2],
            region: Region::SineBumps,
            extra_edges: 30,
            noise_scale: 0.1,
            correction: 1.0,
            seed: 2,
        }
    }

    /// `[-2, 2]^3` at step 0.2 with the unit ball corrected.
    pub fn grid3d() -> Self {
        GridGraphSpec {
            extent: vec![(-2.0, 2.0, 0.2); 3],
            region: Region::UnitBall,
            extra_edges: 30,
            noise_scale: 0.1,
            correction: 1.0,
            seed: 11,
        }
    }

    fn axis_counts(&self) -> Result<Vec<usize>> {
        if !matches!(self.extent.len(), 2 | 3) {
            return Err(Error::domain("grid dimension must be 2 or 3"));
        }
        if self.region == Region::UnitBall && self.extent.len() != 3 {
            return Err(Error::domain("the ball region needs a 3-D grid"));
        }
        if self.noise_scale.is_nan() || self.noise_scale < 0.0 {
            return Err(Error::domain("noise scale must be non-negative"));
        }
        self.extent
            .iter()
            .map(|&(lo, hi, step)| {
                if step.is_nan() || step <= 0.0 || lo.is_nan() || hi.is_nan() || hi <= lo {
                    return Err(Error::domain("grid axis needs lo < hi and step > 0"));
                }
                Ok(((hi - lo) / step + 1e-9).floor() as usize + 1)
            })
            .collect()
    }
}

/// Planted regions of a synthetic grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    pub hotspot_vertex_mask: Vec<bool>,
    /// Connected pieces of the mask under grid adjacency.
    pub regions: Vec<Vec<usize>>,
    /// Extra edges joining two different regions. Such an edge fuses both
    /// regions into one homogeneous component of the graph.
    pub bridging_edges: Vec<Edge>,
}

impl GroundTruth {
    pub fn region_count(&self) -> usize {
        self.regions.len()
    }

    /// Region index of every vertex.
    pub fn region_labels(&self) -> Vec<Option<usize>> {
        let n = self.hotspot_vertex_mask.len();
        let mut labels = vec![None; n];
        for (i, r) in self.regions.iter().enumerate() {
            for &v in r {
                labels[v] = Some(i);
            }
        }
        labels
    }
}

/// A generated grid graph. Each vertex covers one "point" whose attribute is
/// `attribute[v]`, so Â equals the attribute.
#[derive(Debug, Clone)]
pub struct GridGraph<T> {
    pub graph: AnnotatedGraph,
    pub attribute: Vec<T>,
    pub truth: GroundTruth,
    pub coords: Vec<Vec<f64>>,
    pub grid_edges: Vec<Edge>,
}

impl<T: Real> GridGraph<T> {
    pub fn a_hat(&self) -> VertexAttributeMap<T> {
        VertexAttributeMap::new(&self.graph, self.attribute.clone()).expect("one value per vertex")
    }
}

fn flood_fill(n: usize, mask: &[bool], edges: &[Edge]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if mask[u] && mask[v] {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut seen = vec![false; n];
    let mut regions = Vec::new();
    for s in 0..n {
        if !mask[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        let mut region = Vec::new();
        while let Some(u) = queue.pop_front() {
            region.push(u);
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        region.sort_unstable();
        regions.push(region);
    }
    regions
}

pub fn gen_grid_graph<T: Real>(spec: &GridGraphSpec) -> Result<GridGraph<T>> {
    let counts = spec.axis_counts()?;
    let n: usize = counts.iter().product();
    if n < 2 {
        return Err(Error::domain("grid has fewer than 2 points"));
    }
    let d = counts.len();
    // row-major, last axis fastest
    let mut strides = vec![1usize; d];
    for a in (0..d - 1).rev() {
        strides[a] = strides[a + 1] * counts[a + 1];
    }
    let coords: Vec<Vec<f64>> = (0..n)
        .map(|v| {
            (0..d)
                .map(|a| {
                    let idx = (v / strides[a]) % counts[a];
                    spec.extent[a].0 + idx as f64 * spec.extent[a].2
                })
                .collect()
        })
        .collect();
    let mut grid_edges = Vec::new();
    for v in 0..n {
        for a in 0..d {
            if (v / strides[a]) % counts[a] + 1 < counts[a] {
                grid_edges.push((v, v + strides[a]));
            }
        }
    }
    grid_edges.sort_unstable();

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mask: Vec<bool> = coords.iter().map(|p| spec.region.contains(p)).collect();
    let attribute: Vec<T> = mask
        .iter()
        .map(|&hot| {
            let noise = if spec.noise_scale > 0.0 {
                rng.random_range(0.0..=spec.noise_scale)
            } else {
                0.0
            };
            T::from_f64_lossy(noise + if hot { spec.correction } else { 0.0 })
        })
        .collect();

    let grid_set: BTreeSet<Edge> = grid_edges.iter().copied().collect();
    let available = n * (n - 1) / 2 - grid_set.len();
    let wanted = spec.extra_edges.min(available);
    let mut extra = BTreeSet::new();
    while extra.len() < wanted {
        let pair = sample(&mut rng, n, 2);
        let e = normalize(pair.index(0), pair.index(1));
        if !grid_set.contains(&e) {
            extra.insert(e);
        }
    }

    let regions = flood_fill(n, &mask, &grid_edges);
    let mut truth = GroundTruth {
        hotspot_vertex_mask: mask,
        regions,
        bridging_edges: Vec::new(),
    };
    let labels = truth.region_labels();
    truth.bridging_edges = extra
        .iter()
        .copied()
        .filter(|&(u, v)| matches!((labels[u], labels[v]), (Some(a), Some(b)) if a != b))
        .collect();
    let members = (0..n).map(|v| vec![v]).collect();
    let graph = AnnotatedGraph::new(members, grid_edges.iter().copied().chain(extra))?;
    Ok(GridGraph {
        graph,
        attribute,
        truth,
        coords,
        grid_edges,
    })
}

/// Gaussian point cloud with one planted cluster that is shifted on a few
/// features and carries a shifted attribute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedBlob {
    pub n_samples: usize,
    pub n_features: usize,
    pub planted: usize,
    pub support: usize,
    /// Shift of the planted samples on each supporting feature.
    pub feature_shift: f64,
    pub attribute_noise: f64,
    pub attribute_shift: f64,
    pub seed: u64,
}

impl Default for PlantedBlob {
    fn default() -> Self {
        PlantedBlob {
            n_samples: 200,
            n_features: 50,
            planted: 15,
            support: 5,
            feature_shift: 3.0,
            attribute_noise: 0.1,
            attribute_shift: 1.0,
            seed: 5,
        }
    }
}

impl PlantedBlob {
    /// Returns the cloud and the sorted indices of the planted samples.
    pub fn generate<T: Real>(&self) -> Result<(PointCloud<T>, Vec<usize>)> {
        if self.planted > self.n_samples || self.support > self.n_features || self.n_features == 0 {
            return Err(Error::domain("planted cluster does not fit the dataset"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        let mut planted: Vec<usize> = sample(&mut rng, self.n_samples, self.planted).into_vec();
        planted.sort_unstable();
        let mut support: Vec<usize> = sample(&mut rng, self.n_features, self.support).into_vec();
        support.sort_unstable();
        let mut is_planted = vec![false; self.n_samples];
        for &i in &planted {
            is_planted[i] = true;
        }
        let mut points = Vec::with_capacity(self.n_samples);
        let mut attribute = Vec::with_capacity(self.n_samples);
        for &hot in &is_planted {
            let mut x: Vec<f64> = (0..self.n_features).map(|_| normal.sample(&mut rng)).collect();
            let mut a = self.attribute_noise * normal.sample(&mut rng);
            if hot {
                for &f in &support {
                    x[f] += self.feature_shift;
                }
                a += self.attribute_shift;
            }
            points.push(x.into_iter().map(T::from_f64_lossy).collect());
            attribute.push(T::from_f64_lossy(a));
        }
        Ok((PointCloud::new(points, attribute)?, planted))
    }
}
