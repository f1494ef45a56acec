//! Classical and directed Q-analysis of directed graphs.
//!
//! The crate turns a digraph into its directed flag complex (the ordered
//! simplicial complex of directed cliques) and analyses simplicial
//! connectivity in two flavours:
//!
//! - **classical**: undirected q-nearness, q-graphs, connected components,
//!   structure vectors, eccentricity, clique communities, pseudomanifold
//!   certificates ([`qclassic`]);
//! - **directed**: ordered (q,i,j)-nearness built from modified face maps,
//!   connectivity digraphs (preorders in Hasse form), their condensations,
//!   and directed pseudomanifold certificates ([`qdirected`]).
//!
//! On top of the directed connectivity digraphs sit longest simplicial path
//! extraction with path fractions ([`paths`]) and finite-space invariants of
//! the condensed posets: order complexes, Z2 homology, poset height
//! ([`topology`]).
//!
//! The `flagq` binary exposes the whole pipeline as subcommands; see [`cli`].

pub mod cli;
pub mod digraph;
pub mod flagcomplex;
pub mod paths;
pub mod qclassic;
pub mod qdirected;
pub mod topology;

pub use digraph::Digraph;
pub use flagcomplex::{DirectedFlagComplex, SimplexId};
pub use paths::SimplicialPath;
pub use qclassic::{QGraph, SimplicialComplexView, StructureVectors};
pub use qdirected::{Condensation, ConnectionSpec, ConnectivityDigraph};
pub use topology::Poset;
