//! Exact, witness-producing checkers for the order-theoretic side of
//! comparison sorting: semivaluation laws on finite lattices, the quasi-
//! and partial metrics they induce, decision trees of comparison sorts
//! with exact complexity profiles, the balance order on binary trees, and
//! the topologies of finite posets.
//!
//! Everything is computed in exact rational arithmetic and every law check
//! returns a concrete counterexample on failure. Start with the crate
//! examples (`cargo run --example …`) or the `qdt` binary.

pub mod check;
pub mod cli;
pub mod dtree;
pub mod imbalance;
pub mod rat;
pub mod semival;
pub mod topo;
pub mod treecore;

pub use check::{CheckResult, Witness};
pub use rat::{format_rat, parse_rat, Rat};
pub use treecore::{enumerate_tn, tree_from_seq, BinTree, NodeId, Orientation, PathLenSeq};
