//! Command-line plumbing: descriptors, emitters, reports, and the commands.

pub mod analysis;
pub mod commands;
pub mod descriptor;
pub mod emit;
pub mod figure;

pub use analysis::{analyze, AnalysisOptions, AnalysisReport};
pub use descriptor::{build_curve, Descriptor};
