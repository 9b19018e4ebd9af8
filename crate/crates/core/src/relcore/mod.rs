//! Finite domains, schemas, database states and the update algebra.

mod schema;
mod space;
mod state;
mod update;

pub use schema::{DatabaseSchema, Domain, DomainId, ForeignKey, TableKeys, TableSchema};
pub use space::{
    check_complete_set, enumerate_states, tuple_space, Bounds, CompleteSetReport, StateSpace,
    DEFAULT_MAX_TRIPLES,
};
pub use state::{DatabaseState, TableState, Tuple, Value};
pub use update::{apply, compose, diff, identity, invert, Update, ViewUpdate};
