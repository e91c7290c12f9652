pub mod cli;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod labeling;
pub mod solver;
pub mod recognizer;
pub mod reduction;
