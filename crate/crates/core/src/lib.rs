//! Randomized detection of simple k-vertex paths and of multilinear terms in
//! arithmetic circuits, by evaluation over the group algebra GF(2^l)[Z_2^k].
//!
//! * [`gf2e`] — the field GF(2^l).
//! * [`algebra`] — GF(2^l)[Z_2^k] with naive and Walsh–Hadamard products.
//! * [`circuit`] — scalar-free circuits and the general multilinear detector.
//! * [`kpath`] — k-path detection and extraction on graphs.
//! * [`oracle`] — brute-force references for testing.
//!
//! ```
//! use kpath_core::{kpath, Graph};
//!
//! let g = Graph::path(5);
//! assert!(kpath::detect(&g, 5, 64, 1).unwrap().answer);
//! assert!(!kpath::detect(&g, 6, 64, 1).unwrap().answer);
//! let p = kpath::find(&g, 4, 1).unwrap().unwrap();
//! assert!(kpath_core::graph::verify_path(&g, &p, 4));
//! ```

pub mod algebra;
pub mod circuit;
pub mod error;
pub mod generate;
pub mod gf2e;
pub mod graph;
pub mod held_karp;
pub mod kpath;
pub mod oracle;
pub mod rng;

pub use algebra::{AlgebraElem, GroupVector};
pub use circuit::{Circuit, CircuitBuilder, Gate, WeightedCircuit};
pub use error::{Error, Result};
pub use gf2e::{FieldElem, FieldSpec};
pub use graph::{Graph, Path};
pub use kpath::Decision;
pub use rng::RngStream;

/// Word used by the transform-based product for every supported `k`.
pub type TransformWord = u32;

/// Integer type for exact walk counts.
pub type WalkCount = u128;
