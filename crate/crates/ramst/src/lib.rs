//! Structure-transformation languages over finite partial structures:
//! an interpreter for the ST, STV, and STR dialects, a static checker for
//! the ramified dialect, polynomial time/space certificates for accepted
//! STR units, and a corpus of program generators (duplication, enumerators,
//! arithmetic, sorting, composition, and clock-based ramification of PTime
//! ST programs).
//!
//! Start at [`syntax::parse_program`] and [`interp::run`], or browse the
//! `examples/` directory: each example is a runnable tour of one
//! capability.

pub mod bounds;
pub mod checker;
pub mod cli;
pub mod interp;
pub mod structure;
pub mod syntax;
pub mod transform;
