//! Library side of the command-line tool: file I/O, corpus generation,
//! and the blow-up restriction-surjectivity workflow. The binary in
//! `main.rs` is a thin dispatcher over these and the core crate.

pub mod corpus;
pub mod io;
pub mod surjectivity;
