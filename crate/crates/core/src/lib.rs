//! Constructive path decompositions of Eulerian and triangle-removal-set
//! graphs, with machine-checkable certificates.
//!
//! The crate is organized around one promise: every decomposition handed out
//! is re-checked by [`decomp::verify_decomposition`], an independent verifier
//! that no construction is allowed to bypass, and small instances can always
//! be cross-examined with the exact solver in [`solver`].
//!
//! * [`graph`] — simple graphs, degree census, triangles, Eulerian checks.
//! * [`decomp`] — path/cycle sequences, the verifier, and bound reports.
//! * [`merge`] — merging a path with up to five cycles, flower
//!   decompositions, and the exact two-path search on contracted multigraphs.
//! * [`solver`] — exact minimum decomposition (branch and bound) and the
//!   triangle-free decomposer with its `alpha/2 + floor(3*beta/5)` contract.
//! * [`pipeline`] — triangle removal sets, vertex reattachment, and the
//!   `floor(3n/5)` end-to-end construction with a per-step ledger.
//! * [`generate`] — seeded instance families for tests and benchmarks.
//! * [`certificate`] / [`edgelist`] — the JSON certificate and the edge-list
//!   file format.

pub mod certificate;
pub mod decomp;
pub mod edgelist;
pub mod generate;
pub mod graph;
pub mod merge;
pub mod pipeline;
pub mod solver;
