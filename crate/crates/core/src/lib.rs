//! Relational views over finite in-memory databases, constant-complement
//! translation of view updates, and exhaustive checking of the translator
//! laws over every state of small schemas.

pub mod error;
pub mod fixtures;
pub mod relcore;
pub mod text;
pub mod translate;
pub mod verify;
pub mod views;

pub use error::{Error, Result};
