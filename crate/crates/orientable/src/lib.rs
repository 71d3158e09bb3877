//! Acyclic orientations of undirected simple graphs: dependent arcs,
//! exact dependency spectra, chordal graph recognition, and constructive
//! synthesis of orientations with a prescribed dependent-arc count.
//!
//! An arc of an acyclic orientation is *dependent* when its reversal
//! creates a directed cycle. Over all acyclic orientations of a graph the
//! count of dependent arcs ranges between `d_min` and
//! `d_max = ||G|| - |G| + c`; a graph is *fully orientable* when every
//! value in between is attained. Chordal graphs always are, and for them
//! [`synthesis::synthesize`] constructs an orientation hitting any
//! feasible target exactly. The [`oracle`] module provides exhaustive
//! desk-scale ground truth for all of it.

pub mod chordality;
pub mod cli;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod orientation;
pub mod synthesis;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use orientation::{d_max, DependencyReport, Orientation};
