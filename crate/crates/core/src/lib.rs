//! Akton-Algebra toolchain: terms, sorts, networks, rewriting, digital
//! simulation and metric layout.

pub mod cli;
pub mod digital;
pub mod metric;
pub mod network;
pub mod rewrite;
pub mod sort;
pub mod term;

pub use sort::{Interface, Sort};
pub use term::{AtomRegistry, Term};
