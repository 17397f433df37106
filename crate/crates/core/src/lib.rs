//! Sandpile operators ψ and φ on general graphs, their closed forms on the
//! complete bipartite graph `K_{m,n}` and on `K_n`, the moving-frame picture
//! on periodic path pairs, and exact enumeration of parallelogram polyominoes.
//!
//! Vertices are 1-based at every public boundary and the sink is always the
//! highest-indexed vertex. Heights are stored for non-sink vertices only.

pub mod acceptance;
pub mod bipartite;
pub mod complete;
pub mod enumeration;
pub mod error;
pub mod frames;
pub mod graph;
pub mod limits;
pub mod operators;
pub mod reference;
pub mod render;
pub mod words;

pub use bipartite::SortedBipartiteConfig;
pub use complete::CompleteConfig;
pub use error::{Result, SandpileError};
pub use frames::{FramedPair, Point, Polyomino};
pub use graph::{Configuration, DistanceProfile, Graph};
pub use limits::Limits;
pub use words::{BinomialWord, Step};
