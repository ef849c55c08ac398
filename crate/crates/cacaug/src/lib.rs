//! Cactus augmentation toolkit.
//!
//! Given a cactus graph (every edge on exactly one cycle, parallel-edge
//! 2-cycles allowed) and a set of candidate links, the augmentation problem
//! asks for a minimum subset of links whose addition makes the graph
//! 3-edge-connected. The crate provides:
//!
//! - [`cactus`]: multigraph validation, cycle decomposition, 2-edge-cut
//!   enumeration and feasibility checking;
//! - [`reduction`]: the reduction to an unweighted Steiner tree instance on
//!   the degree-2 nodes (terminals) and the links (Steiner nodes), plus both
//!   solution mappings;
//! - [`exact`]: ground-truth solvers (brute force over link subsets,
//!   Dreyfus-Wagner dynamic programming) used as oracles and as the column
//!   generator for the LP;
//! - [`dcr`]: the directed-component covering LP restricted to components
//!   with at most `k` terminals, solved by a dense two-phase simplex
//!   ([`simplex`]);
//! - [`irr`]: the iterative randomized rounding loop (solve, sample,
//!   contract) and the end-to-end solver pipeline with a greedy baseline;
//! - [`marking`]: rooted Steiner trees, the terminal-favoring marking
//!   scheme, witness sets and the witness tree, exact per-node expected
//!   costs, node classification, grouping, and the averaged cost bound;
//! - [`bounds`]: harmonic tables, the geometric harmonic tail, the four
//!   group-average functions, the optimal present and the final
//!   approximation constant, all verified numerically and symbolically;
//! - [`io`], [`gen`], [`report`], [`cli`]: file formats, seeded generators,
//!   benchmark reporting and the command-line front end.
//!
//! Every randomized routine takes an explicit seed and is reproducible
//! bit-for-bit; see [`rng::SplitMix64`].

pub mod bounds;
pub mod cactus;
pub mod cli;
pub mod connectivity;
pub mod dcr;
pub mod exact;
pub mod gen;
pub mod io;
pub mod irr;
pub mod marking;
pub mod par;
pub mod reduction;
pub mod report;
pub mod rng;
pub mod samples;
pub mod simplex;
pub mod steiner;
