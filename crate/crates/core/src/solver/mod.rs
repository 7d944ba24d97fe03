//! Root finding, quadrature and the implicit Riemann-invariant systems.

pub mod implicit;
pub mod pair;
pub mod quad;
pub mod scalar;

pub use implicit::{alpha_nonzero_invariants, alpha_zero_invariants, alpha_zero_multi, AlphaNonzeroSpec, AlphaZeroSpec, WaveComponent};
pub use pair::{solve_pair, ImplicitPair, PairOptions, PairSolution, PairSystem};
pub use quad::{quad_adaptive, quad_gauss, QUAD_TOL};
pub use scalar::{find_root, invert_monotone, scan_brackets, solve_scalar, solve_scalar_newton, unique_root, ScalarProblem};
