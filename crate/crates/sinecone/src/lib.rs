pub use sinecone_core;

pub mod files;
pub mod json;
pub mod report;
pub mod cli;
