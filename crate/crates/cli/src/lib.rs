//! File formats and command implementations for the `pachner` tool.

pub mod commands;
pub mod format;
