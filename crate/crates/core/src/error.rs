use std::path::PathBuf;

use crate::complex::{Edge, Triangle};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a complex on {n_vertices} vertices")]
    VertexOutOfRange { vertex: u32, n_vertices: usize },
    #[error("degenerate simplex {0:?}: repeated vertex")]
    Degenerate(Vec<u32>),
    #[error("{0} is not a triangle of the complex")]
    MissingTriangle(Triangle),
    #[error("{0} is not an edge of the complex")]
    MissingEdge(Edge),
    #[error("{edge} is not an edge of {triangle}")]
    EdgeNotInTriangle { edge: Edge, triangle: Triangle },
    #[error("the complex has no triangles")]
    NoTriangles,
    #[error("{0} has infinite collapse depth")]
    InfiniteDepth(Triangle),
    #[error("{0} is free; the edge-restricted accessible boundary needs depth at least 1")]
    FreeTriangle(Triangle),
    #[error("pattern is not pure: it has {0} edges outside its triangles")]
    NonPurePattern(usize),
    #[error("empty catalog")]
    EmptyCatalog,
    #[error("no catalog is available for k={k}, r={r}")]
    CatalogUnavailable { k: usize, r: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed complex: {0}")]
    Malformed(String),
    #[error("I/O error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
