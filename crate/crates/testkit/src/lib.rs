//! Test-only helpers: random tables and queries, and slow reference
//! implementations to check the real ones against.

pub mod edit;
pub mod gen;
pub mod oracle;
pub mod scan;
