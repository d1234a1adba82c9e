//! Library half of the `coxdiag` command: the diagram text format and the
//! command implementations.

pub mod commands;
pub mod diagram;

pub use diagram::{parse_diagram, render, ParseError};
