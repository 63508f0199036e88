//! Command-line front end and stateless JSON API for the SRG toolkit.

pub mod cli;
pub mod jobs;
pub mod server;
pub mod svg;

pub use jobs::JobError;
