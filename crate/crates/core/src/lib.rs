//! Recognition of polyhedral objects in line drawings by graph indexing.
//!
//! Views of objects and scene fragments are weighted graphs. Each graph is
//! keyed by the coefficients of the second immanantal polynomial of its
//! Laplacian, stored in per-size hash tables, and recognized by voting.
//!
//! - [`graph`]: weighted graphs, Laplacians, components, the graph text format
//! - [`immanant`]: exact d2 and characteristic polynomial signatures
//! - [`iso`]: brute-force isomorphism and small connected graph enumeration
//! - [`decompose`]: p-neighborhood subgraphs and the relevance measure
//! - [`linedraw`]: line-drawing ingestion, junction labels, image-graph extraction
//! - [`indexdb`]: the three-layer model database and vote-based recognition
//! - [`study`]: the signature collision study
//! - [`synth`]: synthetic polyhedral views and degraded query scenes

pub mod config;
pub mod decompose;
mod error;
pub mod exact;
pub mod graph;
pub mod immanant;
pub mod indexdb;
pub mod iso;
pub mod linedraw;
pub mod study;
pub mod synth;

pub use config::{CatalogueMode, RunConfig};
pub use error::{Error, ErrorKind};
pub use graph::{LaplacianMatrix, WeightedGraph};
pub use immanant::{char_signature, d2_signature, diff, CharPolySignature, GraphSignature};
pub use indexdb::{ModelDatabase, VoteTally};
pub use linedraw::LineDrawing;

/// Graphs described by `text`: every record of a graph file, or the image
/// graphs of a line drawing.
pub fn read_graphs(text: &str, run: &RunConfig) -> Result<Vec<WeightedGraph>, Error> {
    if graph::format::looks_like_graph_text(text) {
        Ok(graph::format::parse_graphs(text)?.into_iter().map(|r| r.graph).collect())
    } else {
        Ok(linedraw::split_image_graph(&LineDrawing::parse(text)?, &run.drawing_options())?)
    }
}
