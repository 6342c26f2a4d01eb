//! CSV ingestion plus JSON and DOT serialization.
//!
//! JSON objects are emitted with sorted keys and vertices in ascending id
//! order, so output is byte-deterministic. Floats are written in shortest
//! round-trip form.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::clustering::{Merge, MergeTree};
use crate::error::{Error, Result};
use crate::graph::{AnnotatedGraph, PointCloud, VertexAttributeMap};
use crate::hotspot::{
    CandidateComponent, ClassifiedCandidate, EdgeGradientMap, HotspotReport, SizeMode, Verdict,
};
use crate::lens::LensSpec;
use crate::scalar::{Real, Scalar};
use crate::search::{GraphSummary, TrialResult, TrialScores};

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn to_json<S: Serialize>(value: &S) -> String {
    // through Value so that object keys come out sorted
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn from_json<D: for<'de> Deserialize<'de>>(text: &str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn opt_f64<T: Scalar>(x: Option<T>) -> Option<f64> {
    x.map(Scalar::to_f64_lossy)
}

fn opt_t<T: Scalar>(x: Option<f64>) -> Option<T> {
    x.map(T::from_f64_lossy)
}

// ---------------------------------------------------------------- CSV

/// Loads a cloud from a headed CSV file; every non-attribute column is a feature.
pub fn load_point_cloud_csv<T: Real>(path: &Path, attribute_column: &str) -> Result<PointCloud<T>> {
    let text = read_file(path)?;
    parse_point_cloud_csv(&text, attribute_column)
}

pub fn parse_point_cloud_csv<T: Real>(text: &str, attribute_column: &str) -> Result<PointCloud<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Format(e.to_string()))?
        .clone();
    let attr_idx = headers
        .iter()
        .position(|h| h == attribute_column)
        .ok_or_else(|| Error::MissingColumn(attribute_column.to_string()))?;
    let mut points = Vec::new();
    let mut attribute = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| Error::Format(e.to_string()))?;
        if record.len() != headers.len() {
            return Err(Error::RaggedRow {
                row,
                found: record.len(),
                expected: headers.len(),
            });
        }
        let mut features = Vec::with_capacity(headers.len() - 1);
        for (c, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| Error::NonNumeric {
                row,
                column: headers[c].to_string(),
                value: cell.to_string(),
            })?;
            if c == attr_idx {
                attribute.push(T::from_f64_lossy(value));
            } else {
                features.push(T::from_f64_lossy(value));
            }
        }
        points.push(features);
    }
    PointCloud::new(points, attribute)
}

/// Writes `f0..f{n-1}` feature columns followed by the attribute column.
pub fn point_cloud_to_csv<T: Scalar>(cloud: &PointCloud<T>, attribute_column: &str) -> String {
    let mut out = String::new();
    let mut header: Vec<String> = (0..cloud.dim()).map(|j| format!("f{j}")).collect();
    header.push(attribute_column.to_string());
    out.push_str(&header.join(","));
    out.push('\n');
    for (p, a) in cloud.points().zip(cloud.attribute()) {
        let row: Vec<String> = p
            .iter()
            .chain(std::iter::once(a))
            .map(|x| format!("{}", x.to_f64_lossy()))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------- graph JSON

#[derive(Debug, Serialize, Deserialize)]
struct NodeJson {
    id: usize,
    members: Vec<usize>,
    size: usize,
    a_hat: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeJson {
    u: usize,
    v: usize,
    f_prime: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    nodes: Vec<NodeJson>,
    edges: Vec<EdgeJson>,
}

pub fn graph_to_json<T: Scalar>(
    graph: &AnnotatedGraph,
    a_hat: &VertexAttributeMap<T>,
    grad: &EdgeGradientMap<T>,
) -> String {
    let doc = GraphJson {
        nodes: (0..graph.vertex_count())
            .map(|v| NodeJson {
                id: v,
                members: graph.members(v).to_vec(),
                size: graph.members(v).len(),
                a_hat: a_hat.get(v).to_f64_lossy(),
            })
            .collect(),
        edges: grad
            .iter()
            .map(|((u, v), f)| EdgeJson {
                u,
                v,
                f_prime: f.to_f64_lossy(),
            })
            .collect(),
    };
    to_json(&doc)
}

/// Parses graph JSON. `f_prime` values are taken from the file.
pub fn graph_from_json<T: Scalar>(
    text: &str,
) -> Result<(AnnotatedGraph, VertexAttributeMap<T>, EdgeGradientMap<T>)> {
    let mut doc: GraphJson = from_json(text)?;
    doc.nodes.sort_by_key(|n| n.id);
    if let Some((i, n)) = doc.nodes.iter().enumerate().find(|(i, n)| n.id != *i) {
        return Err(Error::Format(format!(
            "node ids must be 0..n, found {} at position {i}",
            n.id
        )));
    }
    let values: Vec<T> = doc.nodes.iter().map(|n| T::from_f64_lossy(n.a_hat)).collect();
    let members: Vec<Vec<usize>> = doc.nodes.into_iter().map(|n| n.members).collect();
    let graph = AnnotatedGraph::new(members, doc.edges.iter().map(|e| (e.u, e.v)))?;
    if graph.edge_count() != doc.edges.len() {
        return Err(Error::Format("duplicate edges".into()));
    }
    let a_hat = VertexAttributeMap::new(&graph, values)?;
    let mut grad_values = vec![T::zero(); graph.edge_count()];
    for e in &doc.edges {
        let key = if e.u < e.v { (e.u, e.v) } else { (e.v, e.u) };
        let i = graph.edges().binary_search(&key).expect("edge was inserted");
        grad_values[i] = T::from_f64_lossy(e.f_prime);
    }
    let grad = EdgeGradientMap::from_values(&graph, grad_values)?;
    Ok((graph, a_hat, grad))
}

pub fn export_graph_json<T: Scalar>(
    graph: &AnnotatedGraph,
    a_hat: &VertexAttributeMap<T>,
    grad: &EdgeGradientMap<T>,
    path: &Path,
) -> Result<()> {
    write_file(path, &graph_to_json(graph, a_hat, grad))
}

// ---------------------------------------------------------------- DOT

/// Colour ramp endpoints; Â is mapped linearly from the minimum (cool) to
/// the maximum (warm) in RGB space.
pub const RAMP_LOW: [u8; 3] = [0x3b, 0x4c, 0xc0];
pub const RAMP_HIGH: [u8; 3] = [0xb4, 0x04, 0x26];

pub fn ramp_color(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let c: Vec<u8> = RAMP_LOW
        .iter()
        .zip(RAMP_HIGH)
        .map(|(&a, b)| (a as f64 + (b as f64 - a as f64) * t).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Undirected DOT rendering. Hotspot vertices, when a report is given, get a
/// thick black outline.
pub fn graph_to_dot<T: Scalar>(
    graph: &AnnotatedGraph,
    a_hat: &VertexAttributeMap<T>,
    grad: &EdgeGradientMap<T>,
    report: Option<&HotspotReport<T>>,
) -> String {
    let values: Vec<f64> = a_hat.values().iter().map(|x| x.to_f64_lossy()).collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut hot = vec![false; graph.vertex_count()];
    if let Some(r) = report {
        for c in r.hotspots() {
            for &v in &c.candidate.vertices {
                if v < hot.len() {
                    hot[v] = true;
                }
            }
        }
    }
    let mut out = String::from("graph mapper {\n  node [shape=circle, style=filled];\n");
    for (v, &a) in values.iter().enumerate() {
        let t = if hi > lo { (a - lo) / (hi - lo) } else { 0.5 };
        let outline = if hot[v] {
            ", color=\"#000000\", penwidth=3"
        } else {
            ""
        };
        out.push_str(&format!(
            "  {v} [label=\"{v}\", fillcolor=\"{}\", size={}, a_hat=\"{a}\"{outline}];\n",
            ramp_color(t),
            graph.members(v).len()
        ));
    }
    for ((u, v), f) in grad.iter() {
        out.push_str(&format!("  {u} -- {v} [f_prime=\"{}\"];\n", f.to_f64_lossy()));
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "dot" => Ok(ExportFormat::Dot),
            _ => Err(Error::domain(format!("unknown export format '{s}'"))),
        }
    }
}

/// Writes the graph as JSON or DOT. The report only affects DOT output.
pub fn export_graph<T: Scalar>(
    graph: &AnnotatedGraph,
    a_hat: &VertexAttributeMap<T>,
    grad: &EdgeGradientMap<T>,
    format: ExportFormat,
    report: Option<&HotspotReport<T>>,
    path: &Path,
) -> Result<()> {
    let text = match format {
        ExportFormat::Json => graph_to_json(graph, a_hat, grad),
        ExportFormat::Dot => graph_to_dot(graph, a_hat, grad, report),
    };
    write_file(path, &text)
}

// ---------------------------------------------------------------- dendrogram

#[derive(Debug, Serialize, Deserialize)]
struct DendrogramJson {
    leaf_count: usize,
    merges: Vec<(usize, usize, f64)>,
}

pub fn dendrogram_to_json<T: Scalar>(tree: &MergeTree<T>) -> String {
    to_json(&DendrogramJson {
        leaf_count: tree.leaf_count(),
        merges: tree
            .merges()
            .iter()
            .map(|m| (m.left, m.right, m.height.to_f64_lossy()))
            .collect(),
    })
}

pub fn dendrogram_from_json<T: Scalar>(text: &str) -> Result<MergeTree<T>> {
    let doc: DendrogramJson = from_json(text)?;
    MergeTree::new(
        doc.leaf_count,
        doc.merges
            .into_iter()
            .map(|(left, right, h)| Merge {
                left,
                right,
                height: T::from_f64_lossy(h),
            })
            .collect(),
    )
}

pub fn export_dendrogram<T: Scalar>(tree: &MergeTree<T>, path: &Path) -> Result<()> {
    write_file(path, &dendrogram_to_json(tree))
}

// ---------------------------------------------------------------- lens JSON

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct LensJson {
    kind: String,
    #[serde(default)]
    coeffs: Vec<f64>,
    #[serde(default)]
    terms: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    index: Option<usize>,
}

impl LensJson {
    fn from_spec<T: Real>(spec: &LensSpec<T>) -> Self {
        let f = |c: &[T]| c.iter().map(|x| x.to_f64_lossy()).collect();
        let (coeffs, terms, index) = match spec {
            LensSpec::Coordinate(j) => (vec![], vec![], Some(*j)),
            LensSpec::Linear { coeffs } => (f(coeffs), vec![], None),
            LensSpec::Quadratic { coeffs, terms } => (
                f(coeffs),
                terms.iter().map(|&(i, j, a)| (i, j, a.to_f64_lossy())).collect(),
                None,
            ),
            _ => (vec![], vec![], None),
        };
        LensJson {
            kind: spec.kind().to_string(),
            coeffs,
            terms,
            index,
        }
    }

    fn into_spec<T: Real>(self) -> Result<LensSpec<T>> {
        let coeffs = || self.coeffs.iter().map(|&x| T::from_f64_lossy(x)).collect();
        Ok(match self.kind.as_str() {
            "l2_norm" => LensSpec::L2Norm,
            "std_dev" => LensSpec::StdDev,
            "min_value" => LensSpec::MinValue,
            "coordinate" => LensSpec::Coordinate(
                self.index
                    .ok_or_else(|| Error::Format("coordinate lens needs an index".into()))?,
            ),
            "linear" => LensSpec::Linear { coeffs: coeffs() },
            "quadratic" => LensSpec::Quadratic {
                coeffs: coeffs(),
                terms: self
                    .terms
                    .iter()
                    .map(|&(i, j, a)| (i, j, T::from_f64_lossy(a)))
                    .collect(),
            },
            other => return Err(Error::Format(format!("unknown lens kind '{other}'"))),
        })
    }
}

/// `{"kind": ..., "coeffs": [...], "terms": [[i, j, alpha], ...]}`; coordinate
/// lenses carry an extra `"index"`.
pub fn lens_to_json<T: Real>(spec: &LensSpec<T>) -> String {
    to_json(&LensJson::from_spec(spec))
}

pub fn lens_from_json<T: Real>(text: &str) -> Result<LensSpec<T>> {
    from_json::<LensJson>(text)?.into_spec()
}

// ---------------------------------------------------------------- report JSON

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct CandidateJson {
    vertices: Vec<usize>,
    a_hat: f64,
    a_hat_spread: f64,
    size_nodes: usize,
    size_points: usize,
    neighbour_ids: Vec<usize>,
    s_neighbourhood: Option<f64>,
    s_neighbourhood_nodes: Option<f64>,
    s_neighbourhood_points: Option<f64>,
    size_contrast: Option<f64>,
    a_hat_neighbourhood: Option<f64>,
    heterogeneity: Option<f64>,
    verdict: Verdict,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct ReportJson {
    tau: f64,
    size_mode: SizeMode,
    sigma2_nodes: Option<f64>,
    sigma2_points: Option<f64>,
    hotspot_count: usize,
    candidates: Vec<CandidateJson>,
}

impl ReportJson {
    fn from_report<T: Scalar>(report: &HotspotReport<T>) -> Self {
        let primary = report.primary_measure();
        ReportJson {
            tau: report.tau.to_f64_lossy(),
            size_mode: report.size_mode,
            sigma2_nodes: opt_f64(report.sigma2_nodes),
            sigma2_points: opt_f64(report.sigma2_points),
            hotspot_count: report.hotspot_count(),
            candidates: report
                .candidates
                .iter()
                .map(|c| CandidateJson {
                    vertices: c.candidate.vertices.clone(),
                    a_hat: c.candidate.a_hat.to_f64_lossy(),
                    a_hat_spread: c.candidate.a_hat_spread.to_f64_lossy(),
                    size_nodes: c.candidate.size_nodes,
                    size_points: c.candidate.size_points,
                    neighbour_ids: c.neighbour_ids.clone(),
                    s_neighbourhood: opt_f64(c.s_neighbourhood(primary)),
                    s_neighbourhood_nodes: opt_f64(c.s_neighbourhood_nodes),
                    s_neighbourhood_points: opt_f64(c.s_neighbourhood_points),
                    size_contrast: opt_f64(c.size_contrast(primary)),
                    a_hat_neighbourhood: opt_f64(c.a_hat_neighbourhood),
                    heterogeneity: opt_f64(c.heterogeneity),
                    verdict: c.verdict,
                })
                .collect(),
        }
    }

    fn into_report<T: Scalar>(self) -> HotspotReport<T> {
        HotspotReport {
            tau: T::from_f64_lossy(self.tau),
            size_mode: self.size_mode,
            sigma2_nodes: opt_t(self.sigma2_nodes),
            sigma2_points: opt_t(self.sigma2_points),
            candidates: self
                .candidates
                .into_iter()
                .map(|c| ClassifiedCandidate {
                    candidate: CandidateComponent {
                        vertices: c.vertices,
                        a_hat: T::from_f64_lossy(c.a_hat),
                        size_nodes: c.size_nodes,
                        size_points: c.size_points,
                        a_hat_spread: T::from_f64_lossy(c.a_hat_spread),
                    },
                    neighbour_ids: c.neighbour_ids,
                    s_neighbourhood_nodes: opt_t(c.s_neighbourhood_nodes),
                    s_neighbourhood_points: opt_t(c.s_neighbourhood_points),
                    a_hat_neighbourhood: opt_t(c.a_hat_neighbourhood),
                    heterogeneity: opt_t(c.heterogeneity),
                    verdict: c.verdict,
                })
                .collect(),
        }
    }
}

/// Report JSON: `tau`, sigma2 per size measure and one record per candidate.
/// `s_neighbourhood` and `size_contrast` (signed `S(N_C) - S(C)`) use the
/// first measure of the size mode.
pub fn report_to_json<T: Scalar>(report: &HotspotReport<T>) -> String {
    to_json(&ReportJson::from_report(report))
}

pub fn report_from_json<T: Scalar>(text: &str) -> Result<HotspotReport<T>> {
    Ok(from_json::<ReportJson>(text)?.into_report())
}

// ---------------------------------------------------------------- search JSON

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SummaryJson {
    vertices: usize,
    edges: usize,
    components: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScoresJson {
    max_heterogeneity: f64,
    hotspot_point_count: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TrialJson {
    trial_index: usize,
    seed: u64,
    lens: LensJson,
    /// `null` for failed trials.
    score: Option<f64>,
    scores: Option<ScoresJson>,
    graph: Option<SummaryJson>,
    report: Option<ReportJson>,
    hotspot_points: Vec<Vec<usize>>,
    error: Option<String>,
}

pub fn trials_to_json<T: Real>(trials: &[TrialResult<T>]) -> String {
    let docs: Vec<TrialJson> = trials
        .iter()
        .map(|t| TrialJson {
            trial_index: t.trial_index,
            seed: t.seed,
            lens: LensJson::from_spec(&t.lens),
            score: finite(t.score),
            scores: t.scores.map(|s| ScoresJson {
                max_heterogeneity: s.max_heterogeneity,
                hotspot_point_count: s.hotspot_point_count,
            }),
            graph: t.graph_summary.map(|g| SummaryJson {
                vertices: g.vertices,
                edges: g.edges,
                components: g.components,
            }),
            report: t.report.as_ref().map(ReportJson::from_report),
            hotspot_points: t.hotspot_points.clone(),
            error: t.error.clone(),
        })
        .collect();
    to_json(&docs)
}

pub fn trials_from_json<T: Real>(text: &str) -> Result<Vec<TrialResult<T>>> {
    let docs: Vec<TrialJson> = from_json(text)?;
    docs.into_iter()
        .map(|d| {
            Ok(TrialResult {
                trial_index: d.trial_index,
                seed: d.seed,
                lens: d.lens.into_spec()?,
                score: d.score.unwrap_or(f64::NEG_INFINITY),
                scores: d.scores.map(|s| TrialScores {
                    max_heterogeneity: s.max_heterogeneity,
                    hotspot_point_count: s.hotspot_point_count,
                }),
                graph_summary: d.graph.map(|g| GraphSummary {
                    vertices: g.vertices,
                    edges: g.edges,
                    components: g.components,
                }),
                report: d.report.map(ReportJson::into_report),
                hotspot_points: d.hotspot_points,
                error: d.error,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hotspot::{edge_gradient, run_detection, HotspotConfig};

    fn two_vertex() -> (AnnotatedGraph, VertexAttributeMap<f64>, EdgeGradientMap<f64>) {
        let g = AnnotatedGraph::new(vec![vec![0, 1], vec![1, 2]], [(0, 1)]).unwrap();
        let a = VertexAttributeMap::new(&g, vec![0.25, 0.75]).unwrap();
        let grad = edge_gradient(&g, &a);
        (g, a, grad)
    }

    #[test]
    fn csv_basic() {
        let c: PointCloud<f64> =
            parse_point_cloud_csv("f1,f2,survival\n1,2,0.5\n3,4,1\n5,6,0\n", "survival").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.point(1), &[3.0, 4.0]);
        assert_eq!(c.attribute(), &[0.5, 1.0, 0.0]);
        // attribute column in the middle
        let c: PointCloud<f64> = parse_point_cloud_csv("a,y,b\n1,9,2\n", "y").unwrap();
        assert_eq!(c.point(0), &[1.0, 2.0]);
    }

    #[test]
    fn csv_errors() {
        let err = parse_point_cloud_csv::<f64>("f1,f2\n1,2\n", "survival").unwrap_err();
        assert!(matches!(&err, Error::MissingColumn(c) if c == "survival"));
        assert!(err.to_string().contains("survival"));
        let err = parse_point_cloud_csv::<f64>("f1,s\n1,2\nx,3\n", "s").unwrap_err();
        assert!(matches!(err, Error::NonNumeric { row: 2, ref column, .. } if column == "f1"));
        let err = parse_point_cloud_csv::<f64>("f1,s\n1,2\n3\n", "s").unwrap_err();
        assert!(matches!(
            err,
            Error::RaggedRow {
                row: 2,
                found: 1,
                expected: 2
            }
        ));
    }

    #[test]
    fn graph_json_shape() {
        let (g, a, grad) = two_vertex();
        let text = graph_to_json(&g, &a, &grad);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["nodes"].as_array().unwrap().len(), 2);
        assert_eq!(v["edges"].as_array().unwrap().len(), 1);
        assert_eq!(v["edges"][0]["f_prime"], 0.5);
        assert_eq!(v["nodes"][1]["members"], serde_json::json!([1, 2]));
        assert_eq!(v["nodes"][1]["size"], 2);
        assert!(text.find("\"edges\"").unwrap() < text.find("\"nodes\"").unwrap());
        let (g2, a2, grad2) = graph_from_json::<f64>(&text).unwrap();
        assert_eq!((g2, a2, grad2), (g, a, grad));
    }

    #[test]
    fn graph_json_rejects_bad_ids() {
        let text = r#"{"nodes":[{"id":1,"members":[0],"size":1,"a_hat":0.0}],"edges":[]}"#;
        assert!(graph_from_json::<f64>(text).is_err());
        assert!(graph_from_json::<f64>("not json").is_err());
    }

    #[test]
    fn dot_output() {
        let (g, a, grad) = two_vertex();
        let det = run_detection(&g, &a, &HotspotConfig::nodes(1, 0.0)).unwrap();
        let dot = graph_to_dot(&g, &a, &grad, Some(&det.report));
        assert!(dot.starts_with("graph mapper {"));
        assert!(dot.contains("0 -- 1"));
        assert!(dot.contains(&ramp_color(0.0)));
        assert!(dot.contains(&ramp_color(1.0)));
    }

    #[test]
    fn ramp_endpoints() {
        assert_eq!(ramp_color(0.0), "#3b4cc0");
        assert_eq!(ramp_color(1.0), "#b40426");
        assert_eq!(ramp_color(7.0), "#b40426");
    }

    #[test]
    fn empty_dendrogram() {
        let t: MergeTree<f64> = MergeTree::new(3, vec![]).unwrap();
        let text = dendrogram_to_json(&t);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["merges"], serde_json::json!([]));
        assert_eq!(v["leaf_count"], 3);
        assert_eq!(dendrogram_from_json::<f64>(&text).unwrap(), t);
    }

    #[test]
    fn lens_json() {
        let q = LensSpec::Quadratic {
            coeffs: vec![0.5, -0.25],
            terms: vec![(0, 1, 0.125)],
        };
        let text = lens_to_json(&q);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["kind"], "quadratic");
        assert_eq!(v["terms"], serde_json::json!([[0, 1, 0.125]]));
        assert_eq!(lens_from_json::<f64>(&text).unwrap(), q);
        for spec in [
            LensSpec::L2Norm,
            LensSpec::StdDev,
            LensSpec::MinValue,
            LensSpec::Coordinate(3),
        ] {
            assert_eq!(lens_from_json::<f64>(&lens_to_json(&spec)).unwrap(), spec);
        }
        assert!(lens_from_json::<f64>(r#"{"kind":"cubic"}"#).is_err());
        assert!(lens_from_json::<f64>(r#"{"kind":"coordinate"}"#).is_err());
    }

    #[test]
    fn report_json_round_trip() {
        let (g, a, _) = two_vertex();
        let det = run_detection(&g, &a, &HotspotConfig::nodes(1, 0.0)).unwrap();
        let text = report_to_json(&det.report);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v["tau"].is_number());
        let c = &v["candidates"][0];
        for key in [
            "vertices",
            "a_hat",
            "size_nodes",
            "size_points",
            "neighbour_ids",
            "s_neighbourhood",
            "a_hat_neighbourhood",
            "heterogeneity",
            "verdict",
        ] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
        assert_eq!(report_from_json::<f64>(&text).unwrap(), det.report);
    }
}
