//! Planar analysis of folded overlays and the sign-factor bijection between
//! folded survivors and reflected rhs survivors.

pub mod bijection;
pub mod graph;
pub mod strips;

pub use bijection::{code_transform, satisfies_colour_pattern, CodeClass, XiBijection};
pub use graph::{
    build_graph, detect_free_kinks, faces, finite_faces, level_restricted_graph, ColourSet, Face, GraphEdge,
    OverlayGraph,
};
pub use strips::{decompose_strips, strip_of_face, Adjacency, StripDecomposition, StripType, VerticalStrip};
