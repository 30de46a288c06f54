//! Configuration, rendering and dispatch for the `linf` command.

pub mod commands;
pub mod config;
pub mod expr;
pub mod notation;
pub mod structured;
