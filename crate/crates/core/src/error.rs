use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("vertex {0} is referenced by an edge but has no coordinates")]
    MissingCoordinates(String),

    #[error("vertex {vertex} has a non-finite coordinate")]
    NonFiniteCoordinate { vertex: usize },

    #[error("edge ({source_id}, {target}) references a vertex outside 0..{vertex_count}")]
    VertexOutOfRange {
        source_id: usize,
        target: usize,
        vertex_count: usize,
    },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("layout has {layout} positions but the graph has {graph} vertices")]
    LayoutMismatch { graph: usize, layout: usize },

    #[error("drawing does not match graph: {0}")]
    SchemaMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("drawing has a degenerate bounding box")]
    DegenerateBoundingBox,

    #[error("edge {0} has zero Euclidean length")]
    ZeroLengthEdge(usize),

    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("baseline image has no occupied pixels")]
    EmptyBaseline,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("png encoding failed: {0}")]
    Png(#[from] png::EncodingError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
