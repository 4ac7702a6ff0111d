//! Planar embedded graphs with rotation systems, faces, graph maps and
//! rotation-preserving equivalence.

mod faces;
mod graph;
pub mod io;
mod iso;
mod map;

pub use faces::{trace_faces, Corner, FaceSet};
pub use graph::{
    rotation_from_geometry, EdgeEnd, EdgeRecord, EmbeddedGraph, Side, Subgraph, VertexKind, VertexRecord,
    DEGENERATE_GAP,
};
pub use iso::{find_equivalences, Witness};
pub use map::{check_regular_extension, corner_ranges, is_graph_map, CornerRange, EdgeTarget, ExtensionReport, GraphMapRecord, MapReport};

