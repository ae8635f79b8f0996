//! Terms: syntax tree, concrete syntax and the atom registry.

mod ast;
mod parse;
mod print;
mod registry;

pub use ast::{Atom, Path, Rotation, Term};
pub use parse::{desugar_counts, parse, parse_program, Expr, ParseError, ParseErrorKind, Program};
pub use print::print;
pub use registry::{
    AtomClass, AtomDef, AtomRegistry, ConcealError, Origin, BUILTIN_NAMES, JUNCTION_BODIES,
};
