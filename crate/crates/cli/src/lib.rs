//! Command-line front end: model-file parsing and command dispatch.

pub mod model;
pub mod run;

pub use model::{parse_model, Entry, ErrorKind, ModelFile, ParseError};
pub use run::{run, Command, CommandError, Format, Outcome};
