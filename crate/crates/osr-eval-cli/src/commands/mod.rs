pub mod demo;
pub mod grid;
pub mod plan;
pub mod score;
pub mod simulate;
