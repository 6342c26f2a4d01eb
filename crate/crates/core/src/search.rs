//! Random lens search: sample a lens, build the Mapper graph, detect
//! hotspots and score the result, many times over.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{connected_components, induced_attribute, PointCloud};
use crate::hotspot::{detect_hotspots, HotspotConfig, HotspotReport};
use crate::lens::{eval_lens, sample_lens, LensSpec, SamplerConfig};
use crate::mapper::{build_mapper, MapperConfig};
use crate::scalar::Real;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreCriterion {
    /// Largest `|Â(C) - Â(N_C)|` over the hotspots.
    MaxHeterogeneity,
    /// Total points covered by the hotspots.
    HotspotPointCount,
}

impl std::str::FromStr for ScoreCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max_heterogeneity" => Ok(ScoreCriterion::MaxHeterogeneity),
            "hotspot_point_count" => Ok(ScoreCriterion::HotspotPointCount),
            _ => Err(Error::domain(format!("unknown score criterion '{s}'"))),
        }
    }
}

pub fn score_trial<T: Scalar>(report: &HotspotReport<T>, criterion: ScoreCriterion) -> f64 {
    match criterion {
        ScoreCriterion::MaxHeterogeneity => report
            .hotspots()
            .filter_map(|c| c.heterogeneity)
            .map(Scalar::to_f64_lossy)
            .fold(0.0, f64::max),
        ScoreCriterion::HotspotPointCount => {
            report.hotspots().map(|c| c.candidate.size_points).sum::<usize>() as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig<T> {
    pub trials: usize,
    pub sampler: SamplerConfig,
    pub mapper: MapperConfig<T>,
    pub hotspot: HotspotConfig<T>,
    pub master_seed: u64,
    pub score: ScoreCriterion,
}

impl<T: Scalar> SearchConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::domain("at least one trial is required"));
        }
        self.sampler.validate()?;
        self.mapper.validate()?;
        self.hotspot.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialScores {
    pub max_heterogeneity: f64,
    pub hotspot_point_count: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult<T> {
    pub trial_index: usize,
    /// Seed of the trial's random state.
    pub seed: u64,
    pub lens: LensSpec<T>,
    /// Score under the configured criterion; `-inf` for failed trials.
    pub score: f64,
    pub scores: Option<TrialScores>,
    pub graph_summary: Option<GraphSummary>,
    pub report: Option<HotspotReport<T>>,
    /// Points covered by each hotspot, in report order.
    pub hotspot_points: Vec<Vec<usize>>,
    pub error: Option<String>,
}

impl<T: Scalar> TrialResult<T> {
    /// Points of the hotspot with the largest heterogeneity.
    pub fn top_hotspot_points(&self) -> Option<&[usize]> {
        let report = self.report.as_ref()?;
        let mut best: Option<(f64, usize)> = None;
        for (i, c) in report.hotspots().enumerate() {
            let h = c.heterogeneity.map_or(0.0, Scalar::to_f64_lossy);
            if best.is_none_or(|(bh, _)| h > bh) {
                best = Some((h, i));
            }
        }
        best.map(|(_, i)| self.hotspot_points[i].as_slice())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index`: `splitmix64(master ^ splitmix64(index))`.
pub fn derive_trial_seed(master_seed: u64, index: usize) -> u64 {
    splitmix64(master_seed ^ splitmix64(index as u64))
}

struct Evaluated<T> {
    report: HotspotReport<T>,
    summary: GraphSummary,
    hotspot_points: Vec<Vec<usize>>,
}

fn evaluate<T: Real>(
    cloud: &PointCloud<T>,
    lens: &LensSpec<T>,
    config: &SearchConfig<T>,
) -> Result<Evaluated<T>> {
    let values = eval_lens(lens, cloud)?;
    if values.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::domain("lens is constant on the data"));
    }
    let graph = build_mapper(cloud, &values, &config.mapper)?;
    let a_hat = induced_attribute(cloud, &graph)?;
    let report = detect_hotspots(&graph, &a_hat, &config.hotspot)?;
    let hotspot_points = report.hotspots().map(|c| c.candidate.points(&graph)).collect();
    Ok(Evaluated {
        summary: GraphSummary {
            vertices: graph.vertex_count(),
            edges: graph.edge_count(),
            components: connected_components(&graph).len(),
        },
        report,
        hotspot_points,
    })
}

/// Runs one trial.
pub fn run_trial<T: Real>(
    cloud: &PointCloud<T>,
    config: &SearchConfig<T>,
    trial_index: usize,
) -> Result<TrialResult<T>> {
    let seed = derive_trial_seed(config.master_seed, trial_index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lens = sample_lens(&config.sampler, cloud.dim(), &mut rng)?;
    let result = match evaluate(cloud, &lens, config) {
        Ok(ev) => {
            let scores = TrialScores {
                max_heterogeneity: score_trial(&ev.report, ScoreCriterion::MaxHeterogeneity),
                hotspot_point_count: score_trial(&ev.report, ScoreCriterion::HotspotPointCount),
            };
            TrialResult {
                trial_index,
                seed,
                lens,
                score: score_trial(&ev.report, config.score),
                scores: Some(scores),
                graph_summary: Some(ev.summary),
                report: Some(ev.report),
                hotspot_points: ev.hotspot_points,
                error: None,
            }
        }
        Err(e) => TrialResult {
            trial_index,
            seed,
            lens,
            score: f64::NEG_INFINITY,
            scores: None,
            graph_summary: None,
            report: None,
            hotspot_points: Vec::new(),
            error: Some(e.to_string()),
        },
    };
    Ok(result)
}

/// Runs every trial on the current rayon pool and sorts by descending score,
/// ties by trial index. Per-trial failures are recorded, not propagated.
pub fn run_lens_search<T: Real>(
    cloud: &PointCloud<T>,
    config: &SearchConfig<T>,
) -> Result<Vec<TrialResult<T>>> {
    config.validate()?;
    let mut results: Vec<TrialResult<T>> = (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(cloud, config, i))
        .collect::<Result<_>>()?;
    results.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.trial_index.cmp(&b.trial_index))
    });
    Ok(results)
}

/// [`run_lens_search`] on a dedicated pool with `threads` workers.
pub fn run_lens_search_with_threads<T: Real>(
    cloud: &PointCloud<T>,
    config: &SearchConfig<T>,
    threads: usize,
) -> Result<Vec<TrialResult<T>>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
    pool.install(|| run_lens_search(cloud, config))
}
