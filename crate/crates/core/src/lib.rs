//! Edge-path bundling of node-link drawings, with the quality metrics used
//! to compare bundlings (ink, distortion, ambiguity), seeded synthetic
//! benchmark graphs and SVG/raster rendering.
//!
//! ```
//! use edgepath::{datasets, edge_path_bundle, BundlingParams};
//!
//! let spec = datasets::CubesSpec::new(datasets::CubesVariant::R1, 7);
//! let (graph, layout) = datasets::generate_cubes(&spec).unwrap();
//! let bundled = edge_path_bundle(&graph, &layout, BundlingParams::default()).unwrap();
//! assert_eq!(bundled.stats().bundled_count + bundled.stats().locked_count
//!     + bundled.stats().unbundled_count, graph.edge_count());
//! ```

pub mod bundling;
pub mod datasets;
pub mod drawing;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod render;

pub use bundling::{edge_path_bundle, BundleStats, BundledDrawing, Bundler, BundlingParams, ThresholdMode};
pub use drawing::{Drawing, DrawingEdge};
pub use error::{Error, Result};
pub use geometry::{BoundingBox, Point};
pub use graph::{Edge, EdgeId, Graph, Layout, VertexId};
pub use metrics::{evaluate, MetricsConfig, MetricsReport};
