//! Exact exterior calculus on ℝ⁴ for complex-structure formulations of
//! vacuum electrodynamics.

pub mod config;
pub mod eed;
pub mod expr;
pub mod forms;
pub mod maxwell;
pub mod report;
pub mod sample;
pub mod structures;
pub mod symmetry;
