//! Damped Newton iteration for two coupled implicit relations in `(r0, r1)`.

use crate::error::{Error, Result};
use crate::types::{RiemannPair, SpacetimePoint};

/// Two implicit relations `F0(r0, r1; x) = 0`, `F1(r0, r1; x) = 0`.
pub trait PairSystem {
    fn residual(&self, r: RiemannPair, pt: &SpacetimePoint) -> Result<[f64; 2]>;

    /// Analytic Jacobian `[[dF0/dr0, dF0/dr1], [dF1/dr0, dF1/dr1]]` if known.
    fn jacobian(&self, _r: RiemannPair, _pt: &SpacetimePoint) -> Option<Result<[[f64; 2]; 2]>> {
        None
    }
}

/// Closure-backed [`PairSystem`] with optional analytic Jacobian.
pub struct ImplicitPair<F0, F1> {
    pub f0: F0,
    pub f1: F1,
    #[allow(clippy::type_complexity)]
    pub jac: Option<Box<dyn Fn(f64, f64, &SpacetimePoint) -> [[f64; 2]; 2] + Send + Sync>>,
}

impl<F0, F1> ImplicitPair<F0, F1>
where
    F0: Fn(f64, f64, &SpacetimePoint) -> f64,
    F1: Fn(f64, f64, &SpacetimePoint) -> f64,
{
    pub fn new(f0: F0, f1: F1) -> Self {
        Self { f0, f1, jac: None }
    }

    pub fn with_jacobian(mut self, j: impl Fn(f64, f64, &SpacetimePoint) -> [[f64; 2]; 2] + Send + Sync + 'static) -> Self {
        self.jac = Some(Box::new(j));
        self
    }
}

impl<F0, F1> PairSystem for ImplicitPair<F0, F1>
where
    F0: Fn(f64, f64, &SpacetimePoint) -> f64,
    F1: Fn(f64, f64, &SpacetimePoint) -> f64,
{
    fn residual(&self, r: RiemannPair, pt: &SpacetimePoint) -> Result<[f64; 2]> {
        Ok([(self.f0)(r.r0, r.r1, pt), (self.f1)(r.r0, r.r1, pt)])
    }

    fn jacobian(&self, r: RiemannPair, pt: &SpacetimePoint) -> Option<Result<[[f64; 2]; 2]>> {
        self.jac.as_ref().map(|j| Ok(j(r.r0, r.r1, pt)))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PairOptions {
    /// Convergence when `max(|F0|, |F1|) <= tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Largest allowed Newton step in either component.
    pub trust: f64,
    /// Jacobians with condition number above this are reported as singular.
    pub max_cond: f64,
    /// Optional admissible region `[r0_lo, r0_hi] x [r1_lo, r1_hi]`.
    pub domain: Option<[(f64, f64); 2]>,
}

impl Default for PairOptions {
    fn default() -> Self {
        Self { tol: 1e-11, max_iter: 100, trust: 10.0, max_cond: 1e12, domain: None }
    }
}

#[derive(Debug, Clone)]
pub struct PairSolution {
    pub r: RiemannPair,
    pub iterations: usize,
    pub residual: f64,
    /// Residual norm after every accepted step, starting with the seed.
    pub history: Vec<f64>,
}

fn norm_inf(f: [f64; 2]) -> f64 {
    let n = f[0].abs().max(f[1].abs());
    if f[0].is_nan() || f[1].is_nan() { f64::NAN } else { n }
}

/// Central-difference Jacobian with step `max(1e-6, 1e-6 |r|)`.
pub fn fd_jacobian<S: PairSystem + ?Sized>(sys: &S, r: RiemannPair, pt: &SpacetimePoint) -> Result<[[f64; 2]; 2]> {
    let h0 = 1e-6f64.max(1e-6 * r.r0.abs());
    let h1 = 1e-6f64.max(1e-6 * r.r1.abs());
    let p0 = sys.residual(RiemannPair::new(r.r0 + h0, r.r1), pt)?;
    let m0 = sys.residual(RiemannPair::new(r.r0 - h0, r.r1), pt)?;
    let p1 = sys.residual(RiemannPair::new(r.r0, r.r1 + h1), pt)?;
    let m1 = sys.residual(RiemannPair::new(r.r0, r.r1 - h1), pt)?;
    Ok([
        [(p0[0] - m0[0]) / (2.0 * h0), (p1[0] - m1[0]) / (2.0 * h1)],
        [(p0[1] - m0[1]) / (2.0 * h0), (p1[1] - m1[1]) / (2.0 * h1)],
    ])
}

/// Condition number of a 2x2 matrix in the spectral norm.
pub fn cond2(j: [[f64; 2]; 2]) -> f64 {
    let [[a, b], [c, d]] = j;
    let fro2 = a * a + b * b + c * c + d * d;
    let det = (a * d - b * c).abs();
    if det == 0.0 {
        return f64::INFINITY;
    }
    // s1^2 + s2^2 = fro2, s1 s2 = det
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let s1 = ((fro2 + disc) / 2.0).sqrt();
    s1 * s1 / det
}

fn in_domain(r: RiemannPair, dom: &Option<[(f64, f64); 2]>) -> bool {
    match dom {
        None => true,
        Some([(a0, b0), (a1, b1)]) => r.r0 >= *a0 && r.r0 <= *b0 && r.r1 >= *a1 && r.r1 <= *b1,
    }
}

/// Solves the pair from `seed` by damped Newton with step halving.
pub fn solve_pair<S: PairSystem + ?Sized>(sys: &S, pt: &SpacetimePoint, seed: RiemannPair, opts: &PairOptions) -> Result<PairSolution> {
    if !(seed.r0.is_finite() && seed.r1.is_finite()) {
        return Err(Error::InvalidInput("non-finite seed".into()));
    }
    let mut r = seed;
    let mut f = sys.residual(r, pt)?;
    let mut fn_ = norm_inf(f);
    if !fn_.is_finite() {
        return Err(Error::Evaluation(format!("residual at seed ({}, {})", r.r0, r.r1)));
    }
    let mut history = vec![fn_];
    for it in 0..opts.max_iter {
        if fn_ <= opts.tol {
            return Ok(PairSolution { r, iterations: it, residual: fn_, history });
        }
        let j = match sys.jacobian(r, pt) {
            Some(j) => j?,
            None => fd_jacobian(sys, r, pt)?,
        };
        let c = cond2(j);
        if !(c <= opts.max_cond) {
            return Err(Error::Singular(format!(
                "Jacobian condition number {c:e} at (r0, r1) = ({}, {})",
                r.r0, r.r1
            )));
        }
        let [[a, b], [cc, d]] = j;
        let det = a * d - b * cc;
        let mut d0 = -(d * f[0] - b * f[1]) / det;
        let mut d1 = -(-cc * f[0] + a * f[1]) / det;
        let big = d0.abs().max(d1.abs());
        if big > opts.trust {
            d0 *= opts.trust / big;
            d1 *= opts.trust / big;
        }
        let mut lam = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial = RiemannPair::new(r.r0 + lam * d0, r.r1 + lam * d1);
            if in_domain(trial, &opts.domain) {
                if let Ok(ft) = sys.residual(trial, pt) {
                    let nt = norm_inf(ft);
                    if nt.is_finite() && nt <= fn_ {
                        if nt == fn_ && trial == r {
                            break;
                        }
                        r = trial;
                        f = ft;
                        fn_ = nt;
                        accepted = true;
                        break;
                    }
                }
            }
            lam *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence { iterations: it + 1, residual: fn_ });
        }
        history.push(fn_);
    }
    if fn_ <= opts.tol {
        return Ok(PairSolution { r, iterations: opts.max_iter, residual: fn_, history });
    }
    Err(Error::NoConvergence { iterations: opts.max_iter, residual: fn_ })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn origin() -> SpacetimePoint {
        SpacetimePoint::new(0.0, [0.0; 3])
    }

    #[test]
    fn linear_system_one_step() {
        let sys = ImplicitPair::new(|a, _b, _p: &SpacetimePoint| a - 1.0, |_a, b, _p: &SpacetimePoint| b - 2.0);
        let s = solve_pair(&sys, &origin(), RiemannPair::new(0.0, 0.0), &PairOptions::default()).unwrap();
        assert!((s.r.r0 - 1.0).abs() < 1e-12 && (s.r.r1 - 2.0).abs() < 1e-12);
        assert!(s.iterations <= 2);
    }

    #[test]
    fn nonlinear_with_point_dependence() {
        let sys = ImplicitPair::new(
            |a: f64, b: f64, p: &SpacetimePoint| a.exp() + b - p.x[0],
            |a: f64, b: f64, p: &SpacetimePoint| a - b * b - p.t,
        );
        let pt = SpacetimePoint::new(0.5, [3.0, 0.0, 0.0]);
        let s = solve_pair(&sys, &pt, RiemannPair::new(0.5, 0.5), &PairOptions::default()).unwrap();
        let f = sys.residual(s.r, &pt).unwrap();
        assert!(f[0].abs() < 1e-11 && f[1].abs() < 1e-11);
        for w in s.history.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn singular_jacobian_is_controlled() {
        // both relations depend on r0 + r1 only
        let sys = ImplicitPair::new(|a: f64, b: f64, _p: &SpacetimePoint| a + b - 1.0, |a: f64, b: f64, _p: &SpacetimePoint| 2.0 * (a + b) - 3.0);
        let e = solve_pair(&sys, &origin(), RiemannPair::new(0.0, 0.0), &PairOptions::default()).unwrap_err();
        assert!(matches!(e, Error::Singular(_)));
    }

    #[test]
    fn singular_midpath_gives_error_not_nan() {
        // Jacobian degenerates on r0 = 0 where the seed iteration is driven
        let sys = ImplicitPair::new(|a: f64, _b: f64, _p: &SpacetimePoint| a * a + 1.0, |_a: f64, b: f64, _p: &SpacetimePoint| b);
        let r = solve_pair(&sys, &origin(), RiemannPair::new(3.0, 0.0), &PairOptions::default());
        assert!(r.is_err());
    }

    #[test]
    fn cond_of_identity() {
        assert!((cond2([[1.0, 0.0], [0.0, 1.0]]) - 1.0).abs() < 1e-15);
        assert!((cond2([[2.0, 0.0], [0.0, 1e-3]]) - 2e3).abs() < 1e-9);
    }

    proptest::proptest! {
        #[test]
        fn residual_history_nonincreasing(x in -2.0f64..2.0, y in -2.0f64..2.0, s0 in -1.0f64..1.0, s1 in -1.0f64..1.0) {
            let sys = ImplicitPair::new(
                move |a: f64, b: f64, _p: &SpacetimePoint| a + 0.3 * b.sin() - x,
                move |a: f64, b: f64, _p: &SpacetimePoint| b + 0.2 * a.tanh() - y,
            );
            let s = solve_pair(&sys, &origin(), RiemannPair::new(s0, s1), &PairOptions::default()).unwrap();
            proptest::prop_assert!(s.residual <= 1e-11);
            for w in s.history.windows(2) {
                proptest::prop_assert!(w[1] <= w[0]);
            }
        }
    }
}
