//! Rank-2 solutions: a simple wave travelling on a simple state.

pub mod e0a;
pub mod e0e;
pub mod h0a;
pub mod h0e;

pub use e0a::{catastrophe_time, E0AConfig, E0AField, E0aReading};
pub use e0e::{E0EConfig, E0EField};
pub use h0a::{h0a_conditions, h0a_residual, H0AConfig, H0AField, H0AResidualReport};
pub use h0e::{H0EConfig, H0EField};

use crate::types::{RiemannPair, WaveCovector};

/// The two tensor terms of `du = gamma0 (x) lam0 + gamma1 (x) lam1` at a point.
#[derive(Debug, Clone, Copy)]
pub struct RankTwoElements {
    pub r: RiemannPair,
    /// State part, `du/dr0` at fixed `r1`.
    pub gamma0: [f64; 5],
    pub lam0: WaveCovector,
    /// Wave part, `du/dr1` at fixed `r0`.
    pub gamma1: [f64; 5],
    pub lam1: WaveCovector,
}

impl RankTwoElements {
    /// The reconstructed Jacobian `du_j / dx^mu`.
    pub fn jacobian(&self) -> [[f64; 4]; 5] {
        let l0 = self.lam0.to_array();
        let l1 = self.lam1.to_array();
        std::array::from_fn(|j| std::array::from_fn(|mu| self.gamma0[j] * l0[mu] + self.gamma1[j] * l1[mu]))
    }
}

pub(crate) fn combine(a: f64, x: [f64; 3], b: f64, y: [f64; 3], c: f64, z: [f64; 3]) -> [f64; 3] {
    crate::types::vec3::combine3(a, x, b, y, c, z)
}
