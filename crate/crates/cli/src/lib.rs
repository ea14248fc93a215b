//! Serialization and cache pieces of the CLI, exposed as a library so the
//! integration tests can exercise the exact document types the binary emits.

pub mod cache;
pub mod doc;
