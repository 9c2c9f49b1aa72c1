pub mod divide;
pub mod error;
pub mod generators;
pub mod homology;
pub mod report;
pub mod enumerate;
pub mod tracer;
pub mod render;
pub mod cli;
