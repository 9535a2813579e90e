//! Colored triad census.
//!
//! Every unordered node triple of a node-colored graph falls into exactly one
//! colored triad class: its directed (MAN) or undirected isomorphism class
//! together with the colors sitting at its positions, up to symmetry. This
//! crate counts all classes at once with matrix trace identities over
//! color-masked relations, checks the counts against a brute-force oracle,
//! and tests them against a null model that preserves color mixing rates.
//!
//! ```
//! use colorcensus::{census, Backend, ColoredGraph};
//!
//! // a -> b -> c -> a, colored x, x, y
//! let g = ColoredGraph::from_labels(true, &["x", "x", "y"], &[(0, 1), (1, 2), (2, 0)]).unwrap();
//! let result = census(&g, Backend::default()).unwrap();
//! assert_eq!(result.get_by_name("030C-x.x.y"), Some(1));
//! assert_eq!(result.total(), 1);
//! ```
//!
//! Modules:
//!
//! - [`isoclass`]: triad classes, automorphisms, canonical colored classes
//! - [`graph`]: colored graphs, file loading, derived relation matrices
//! - [`census`]: the trace-based census engine and its backends
//! - [`oracle`]: exhaustive per-triple counting
//! - [`nullmodel`]: mixing matrices, expectations, conditional uniform graph tests
//! - [`bench`]: runtime measurement on random graphs
//! - [`cli`]: the `colorcensus` command line

pub mod bench;
pub mod census;
pub mod cli;
pub mod error;
pub mod graph;
pub mod isoclass;
pub mod nullmodel;
pub mod oracle;

pub use census::{
    census, census_with_threads, classify_triple, dyad_matrix, triad_count, Backend, BackendKind,
    CensusResult, DyadRelation,
};
pub use error::{Error, Result};
pub use graph::{
    derive_matrices, load_graph, load_graph_files, ColorMask, ColoredGraph, DerivedMatrices,
    Relation,
};
pub use isoclass::{
    canonicalize, class_count_formula, class_table, enumerate_classes, structural_automorphisms,
    total_count, ClassTable, ColoredTriadClass, DyadState, TriadClass,
};
pub use nullmodel::{
    cug_test, cug_test_with, estimate_mixing_matrix, exact_binomial_test, expected_count,
    sample_graph, triad_probability, CugOptions, CugRow, CugStatus, CugTestResult, Expectation,
    MixingMatrix,
};
pub use oracle::brute_force_census;
