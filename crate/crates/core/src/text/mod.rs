//! The document format: a lexer, a parser for declarations and the view
//! definition language, a printer that round-trips, and renderers for
//! states, updates and reports.

mod lexer;
mod parser;
mod print;
mod render;
mod workspace;

pub use parser::{Literal, RowEdit};
pub use print::{format_value, print_view, print_workspace, quote_name};
pub use render::*;
pub use workspace::{parse_workspace, Workspace};
