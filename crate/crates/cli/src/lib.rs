//! File formats, checkpoints, the parallel classification driver and the
//! subcommands of the `hypercone` binary.

pub mod checkpoint;
pub mod commands;
pub mod driver;
pub mod formats;
pub mod published;
