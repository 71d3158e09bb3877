//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed edge-list or arc-list input.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A self-loop `u u` was supplied where a simple graph is required.
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },

    /// A vertex id outside the graph's vertex range.
    #[error("unknown vertex {vertex} (graph has {count} vertices)")]
    UnknownVertex { vertex: usize, count: usize },

    /// A vertex ordering that is not a permutation of the graph's vertices.
    #[error("ordering is not a permutation of the graph's vertices")]
    NotAPermutation,

    /// A vertex set that was required to be a clique is not one.
    #[error("vertex set is not a clique: {u} and {v} are non-adjacent")]
    NotAClique { u: usize, v: usize },

    /// An arc query named an arc that is not part of the orientation.
    #[error("arc {tail} -> {head} is not present in the orientation")]
    ArcNotPresent { tail: usize, head: usize },

    /// An operation that requires an acyclic orientation was handed a
    /// cyclic one. Carries one directed cycle as evidence.
    #[error("orientation contains a directed cycle: {cycle:?}")]
    CyclicOrientation { cycle: Vec<usize> },

    /// The exhaustive oracle refused to enumerate a graph above its edge cap.
    #[error("graph has {edges} edges, above the enumeration cap of {cap}")]
    EnumerationCap { edges: usize, cap: usize },

    /// Two independent computations of the same quantity disagreed.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    /// The graph is not chordal; carries a chordless cycle of length >= 4.
    #[error("graph is not chordal; chordless cycle {witness:?}")]
    NotChordal { witness: Vec<usize> },

    /// A synthesis target outside the feasible dependent-arc range.
    #[error("target {target} outside feasible range [{d_min}, {d_max}]")]
    InfeasibleTarget {
        target: usize,
        d_min: usize,
        d_max: usize,
    },

    /// Insertion extension requires a non-trivial dependent arc in the clique.
    #[error("clique has no non-trivial dependent arc; insertion extension is not applicable")]
    NoNontrivialArc,

    /// A position index outside an ordering.
    #[error("position {position} out of range for ordering of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
