//! Exact rank-1 and rank-2 Riemann-invariant solutions of the Euler equations
//! with gravity and Coriolis forces, plus the numerical machinery to evaluate
//! and check them.

pub mod cauchy;
pub mod elements;
pub mod error;
pub mod funcs;
pub mod io;
pub mod linalg;
pub mod solver;
pub mod special;
pub mod states;
pub mod types;
pub mod verify;
pub mod waves;

pub use error::{Error, Result};
pub use types::{make_grid, Field, FluidState, Grid4, PhysParams, RankTwoField, RiemannPair, SpacetimePoint, WaveCovector};
