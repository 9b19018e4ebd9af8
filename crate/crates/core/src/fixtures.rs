//! Small shipped workspaces used by the tests and the command-line tool.

use crate::text::Workspace;

pub const SINGLE_COLUMN: &str = include_str!("../fixtures/single_column.ccv");
pub const SELECTION_NULL: &str = include_str!("../fixtures/selection_null.ccv");
pub const UNION: &str = include_str!("../fixtures/union.ccv");
pub const PROJECTION: &str = include_str!("../fixtures/projection.ccv");
pub const INVOICE: &str = include_str!("../fixtures/invoice.ccv");
pub const PARTS: &str = include_str!("../fixtures/parts.ccv");
pub const BOXES: &str = include_str!("../fixtures/boxes.ccv");

/// Every fixture by file stem.
pub const ALL: &[(&str, &str)] = &[
    ("single_column", SINGLE_COLUMN),
    ("selection_null", SELECTION_NULL),
    ("union", UNION),
    ("projection", PROJECTION),
    ("invoice", INVOICE),
    ("parts", PARTS),
    ("boxes", BOXES),
];

/// Parses a shipped fixture. They are fixed text, so failure is a bug.
pub fn load(src: &str) -> Workspace {
    Workspace::parse(src).expect("shipped fixture parses")
}
