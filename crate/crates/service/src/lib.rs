//! Service and CLI plumbing around `roundtable-core`.

pub mod api;
pub mod cli;
pub mod config;
pub mod registry;
