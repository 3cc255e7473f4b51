//! File formats, report rendering and command dispatch for `wsharp-core`.
//!
//! Problems are JSON documents (see [`problem`]); certificate reports render
//! as text for people and as JSON for pipelines, where every float carries 17
//! significant digits so the report reads back unchanged.

pub mod csv_out;
pub mod error;
pub mod expr;
pub mod files;
pub mod json;
mod node;
pub mod problem;
pub mod render;
pub mod run;

pub use error::{InputError, Result};
pub use problem::{parse_problem, parse_problem_str, problem_from_value, problem_to_json};
pub use run::{execute, Command, Format, Output, Overrides, Request};
