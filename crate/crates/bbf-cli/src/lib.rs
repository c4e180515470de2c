//! Command-line front end for the lattice toolkit: document parsing,
//! dispatch into `bbf-core`, and deterministic JSON / text / SVG reports.

pub mod commands;
pub mod dto;
pub mod io;
pub mod svg;

pub use commands::{run, Cli, Command, Format, Outcome};
