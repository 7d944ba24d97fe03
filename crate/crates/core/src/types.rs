//! Shared value types: physical parameters, fluid states, covectors and
//! sampling grids.

use crate::error::{Error, Result};

/// Plain spatial 3-vector.
pub type Vec3 = [f64; 3];

/// Standard gravitational acceleration used by the reference configurations.
pub const STANDARD_GRAVITY: f64 = 9.81;

pub mod vec3 {
    use super::Vec3;

    #[inline]
    pub fn dot(a: Vec3, b: Vec3) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    #[inline]
    pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    #[inline]
    pub fn norm(a: Vec3) -> f64 {
        dot(a, a).sqrt()
    }

    #[inline]
    pub fn add(a: Vec3, b: Vec3) -> Vec3 {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    }

    #[inline]
    pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    #[inline]
    pub fn scale(s: f64, a: Vec3) -> Vec3 {
        [s * a[0], s * a[1], s * a[2]]
    }

    /// `a*x + b*y + c*z` for three vectors.
    #[inline]
    pub fn combine3(a: f64, x: Vec3, b: f64, y: Vec3, c: f64, z: Vec3) -> Vec3 {
        [
            a * x[0] + b * y[0] + c * z[0],
            a * x[1] + b * y[1] + c * z[1],
            a * x[2] + b * y[2] + c * z[2],
        ]
    }

    pub fn is_finite(a: Vec3) -> bool {
        a.iter().all(|c| c.is_finite())
    }
}

/// Adiabatic exponent, gravity and Coriolis rotation vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub kappa: f64,
    pub g_vec: Vec3,
    pub omega_vec: Vec3,
}

impl PhysParams {
    pub fn new(kappa: f64, g_vec: Vec3, omega_vec: Vec3) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidInput(format!("kappa must be > 0, got {kappa}")));
        }
        if !vec3::is_finite(g_vec) || !vec3::is_finite(omega_vec) {
            return Err(Error::InvalidInput("g and omega must be finite".into()));
        }
        Ok(Self { kappa, g_vec, omega_vec })
    }

    /// Force-free parameters (no gravity, no rotation).
    pub fn force_free(kappa: f64) -> Result<Self> {
        Self::new(kappa, [0.0; 3], [0.0; 3])
    }

    /// Effective forcing `g - Omega x v` felt by a fluid parcel moving with `v`.
    #[inline]
    pub fn forcing(&self, v: Vec3) -> Vec3 {
        vec3::sub(self.g_vec, vec3::cross(self.omega_vec, v))
    }
}

/// Density, pressure and velocity at a spacetime point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidState {
    pub rho: f64,
    pub p: f64,
    pub v: Vec3,
}

impl FluidState {
    /// Builds a state, rejecting nonpositive density or pressure.
    pub fn new(rho: f64, p: f64, v: Vec3) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::NonPhysical(format!("rho = {rho}")));
        }
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::NonPhysical(format!("p = {p}")));
        }
        if !vec3::is_finite(v) {
            return Err(Error::NonPhysical(format!("v = {v:?}")));
        }
        Ok(Self { rho, p, v })
    }

    /// Components in the order `(rho, p, v1, v2, v3)`.
    #[inline]
    pub fn to_array(&self) -> [f64; 5] {
        [self.rho, self.p, self.v[0], self.v[1], self.v[2]]
    }

    /// Sound speed squared `kappa p / rho`.
    #[inline]
    pub fn sound_speed_sq(&self, kappa: f64) -> f64 {
        kappa * self.p / self.rho
    }
}

/// A covector `lambda = (lambda_0, lambda_vec)` on spacetime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveCovector {
    pub lam0: f64,
    pub lam_vec: Vec3,
}

impl WaveCovector {
    pub fn new(lam0: f64, lam_vec: Vec3) -> Self {
        Self { lam0, lam_vec }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self { lam0: a[0], lam_vec: [a[1], a[2], a[3]] }
    }

    #[inline]
    pub fn to_array(&self) -> [f64; 4] {
        [self.lam0, self.lam_vec[0], self.lam_vec[1], self.lam_vec[2]]
    }

    pub fn is_zero(&self) -> bool {
        self.lam0 == 0.0 && self.lam_vec.iter().all(|c| *c == 0.0)
    }

    /// Pairing `lambda_mu x^mu` with a spacetime point.
    #[inline]
    pub fn apply(&self, pt: &SpacetimePoint) -> f64 {
        self.lam0 * pt.t + vec3::dot(self.lam_vec, pt.x)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { lam0: s * self.lam0, lam_vec: vec3::scale(s, self.lam_vec) }
    }
}

/// Spacetime point `(t, x_vec)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: Vec3,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: Vec3) -> Self {
        Self { t, x }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self { t: a[0], x: [a[1], a[2], a[3]] }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.t, self.x[0], self.x[1], self.x[2]]
    }

    /// The point shifted by `h` along coordinate `axis` (0 = t, 1..=3 = x).
    #[inline]
    pub fn shifted(&self, axis: usize, h: f64) -> Self {
        let mut a = self.to_array();
        a[axis] += h;
        Self::from_array(a)
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && vec3::is_finite(self.x)
    }
}

/// Values of the two Riemann invariants at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RiemannPair {
    pub r0: f64,
    pub r1: f64,
}

impl RiemannPair {
    pub fn new(r0: f64, r1: f64) -> Self {
        Self { r0, r1 }
    }
}

/// One sampled axis of a [`Grid4`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub h: f64,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite range [{lo}, {hi}]")));
        }
        if hi < lo {
            return Err(Error::InvalidInput(format!("reversed range [{lo}, {hi}]")));
        }
        match count {
            0 => Err(Error::InvalidInput("axis count must be >= 1".into())),
            1 if hi != lo => Err(Error::InvalidInput(format!(
                "range [{lo}, {hi}] is non-degenerate and needs count >= 2"
            ))),
            1 => Ok(Self { lo, hi, count, h: 0.0 }),
            n => Ok(Self { lo, hi, count: n, h: (hi - lo) / (n - 1) as f64 }),
        }
    }

    /// A single pinned coordinate.
    pub fn pinned(value: f64) -> Result<Self> {
        Self::new(value, value, 1)
    }

    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.h
    }
}

/// Tensor-product sampling lattice over `(t, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid4 {
    pub axes: [Axis; 4],
}

impl Grid4 {
    pub fn new(axes: [Axis; 4]) -> Self {
        Self { axes }
    }

    /// Total number of lattice points.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point with flat index `k` in row-major order (`z` fastest, `t` slowest).
    pub fn point(&self, k: usize) -> SpacetimePoint {
        let mut rem = k;
        let mut idx = [0usize; 4];
        for axis in (0..4).rev() {
            let n = self.axes[axis].count;
            idx[axis] = rem % n;
            rem /= n;
        }
        SpacetimePoint::from_array([
            self.axes[0].coord(idx[0]),
            self.axes[1].coord(idx[1]),
            self.axes[2].coord(idx[2]),
            self.axes[3].coord(idx[3]),
        ])
    }

    pub fn points(&self) -> impl Iterator<Item = SpacetimePoint> + '_ {
        (0..self.len()).map(move |k| self.point(k))
    }

    /// Same ranges, every non-degenerate axis refined to `2n - 1` points.
    pub fn refined(&self) -> Self {
        let mut axes = self.axes;
        for a in axes.iter_mut() {
            if a.count > 1 {
                *a = Axis::new(a.lo, a.hi, 2 * a.count - 1).expect("refinement of a valid axis");
            }
        }
        Self { axes }
    }
}

/// Builds a grid from `(lo, hi)` ranges and per-axis counts, in `(t, x, y, z)` order.
pub fn make_grid(ranges: [(f64, f64); 4], counts: [usize; 4]) -> Result<Grid4> {
    let mut axes = [Axis { lo: 0.0, hi: 0.0, count: 1, h: 0.0 }; 4];
    for i in 0..4 {
        axes[i] = Axis::new(ranges[i].0, ranges[i].1, counts[i])?;
    }
    Ok(Grid4 { axes })
}

/// A callable solution `u(t, x)`.
pub trait Field: Sync {
    fn eval(&self, pt: &SpacetimePoint) -> Result<FluidState>;
}

impl<F> Field for F
where
    F: Fn(&SpacetimePoint) -> Result<FluidState> + Sync,
{
    fn eval(&self, pt: &SpacetimePoint) -> Result<FluidState> {
        self(pt)
    }
}

/// A rank-2 field that also reports its Riemann invariants.
pub trait RankTwoField: Field {
    fn eval_with_invariants(&self, pt: &SpacetimePoint) -> Result<(FluidState, RiemannPair)>;
}
