pub mod error;
pub mod extraction;
pub mod geometry;
pub mod metrics;
pub mod serialization;
pub mod rendering;
pub mod cli;
