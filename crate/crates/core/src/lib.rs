//! Exact-arithmetic toolkit for Thurston norm balls of link complements,
//! boundary slopes of surfaces, and the combinatorics of capping them off
//! after Dehn filling.

pub mod cli;
pub mod error;
pub mod fat_graph;
pub mod homology;
pub mod lattice;
pub mod norm_ball;
pub mod rational;
pub mod slope_arith;
pub mod surgery_verdict;

pub use error::{Error, Result};
pub use homology::{LinkData, SurfaceClass};
pub use rational::Q;
pub use slope_arith::{CurveClass, Slope};
