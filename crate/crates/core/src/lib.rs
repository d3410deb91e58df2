//! Pointed planar maps and labeled mobiles.

pub mod map;
pub mod mobile;
pub mod bijection;
pub mod census;
pub mod series;
pub mod solve;
pub mod sampler;
pub mod cli;
