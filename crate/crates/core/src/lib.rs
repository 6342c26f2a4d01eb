//! Mapper graphs and automatic hotspot detection.
//!
//! A *hotspot* is a connected set of vertices of an attribute-annotated graph
//! whose induced attribute is internally homogeneous, differs from the
//! surrounding components by more than a threshold, and is large enough not
//! to be an outlier while being smaller than its neighbourhood.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] - point clouds, annotated graphs, component partitions.
//! * [`clustering`] - distance matrices, agglomerative merge trees and cuts.
//! * [`lens`] - built-in and randomly sampled lens functions.
//! * [`mapper`] - interval covers and Mapper graph construction.
//! * [`hotspot`] - edge-gradient dendrograms and candidate classification.
//! * [`synthetic`] - generators with planted ground truth.
//! * [`io`] and [`search`] - CSV/JSON/DOT serialization and the lens search loop.
//!
//! All numerical code is generic over the scalar type. [`Scalar`] is enough
//! for the purely order/field based parts (covers, dendrograms, classification),
//! so those also run on exact rationals; [`Real`] adds the float operations
//! needed for distances and lenses. Aliases for `f64` are provided at the
//! crate root.

pub mod clustering;
pub mod error;
pub mod graph;
pub mod hotspot;
pub mod io;
pub mod lens;
pub mod mapper;
pub mod scalar;
pub mod search;
pub mod synthetic;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

pub type PointCloud64 = graph::PointCloud<f64>;
pub type VertexAttributeMap64 = graph::VertexAttributeMap<f64>;
pub type DistanceMatrix64 = clustering::DistanceMatrix<f64>;
pub type MergeTree64 = clustering::MergeTree<f64>;
pub type LensSpec64 = lens::LensSpec<f64>;
pub type MapperConfig64 = mapper::MapperConfig<f64>;
pub type EdgeGradientMap64 = hotspot::EdgeGradientMap<f64>;
pub type HotspotConfig64 = hotspot::HotspotConfig<f64>;
pub type HotspotReport64 = hotspot::HotspotReport<f64>;
pub type SearchConfig64 = search::SearchConfig<f64>;
pub type TrialResult64 = search::TrialResult<f64>;
