//! Command-line front end and HTTP service.

pub mod commands;
pub mod render;
pub mod server;
