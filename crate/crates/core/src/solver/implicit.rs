//! Implicit Riemann-invariant systems for the two involutive regimes.
//!
//! With `alpha_1 != 0` the invariants solve
//!
//! ```text
//! lambda(r1) . x = Phi(r1)  + int_b^{r0} exp(-phi(s, r1)) ds
//! lambda'(r1) . x = Phi'(r1) - int_b^{r0} phi_r1(s, r1) exp(-phi(s, r1)) ds
//! ```
//!
//! and with `alpha_1 = 0`
//!
//! ```text
//! C . x + a0 = Psi0(r0) = int_b^{r0} exp(-phi(s)) ds
//! int_b^{r0} chi(s, r1) exp(-phi(s)) ds + A(r1) . x = psi1(r1)
//! ```
//!
//! The lower limit `b` defaults to 0 and can be moved for conditioning.

use crate::error::{Error, Result};
use crate::funcs::{pair4, CovectorFunc, Func1, Func2};
use crate::solver::pair::{solve_pair, PairOptions, PairSolution, PairSystem};
use crate::solver::quad::{quad_adaptive, QUAD_TOL};
use crate::solver::scalar::{find_root, solve_scalar_newton, ScalarProblem};
use crate::types::{RiemannPair, SpacetimePoint};

/// Data of the `alpha_1 != 0` construction.
#[derive(Clone, Debug)]
pub struct AlphaNonzeroSpec {
    /// `lambda(r1)` with derivative.
    pub lam: CovectorFunc,
    pub phi: Func2,
    /// The free function `Phi(r1)`.
    pub big_phi: Func1,
    pub base: f64,
}

impl AlphaNonzeroSpec {
    pub fn new(lam: CovectorFunc, phi: Func2, big_phi: Func1) -> Self {
        Self { lam, phi, big_phi, base: 0.0 }
    }

    /// `Psi0(r0, r1) = Phi(r1) + int_b^{r0} e^{-phi}`.
    pub fn psi0(&self, r0: f64, r1: f64) -> Result<f64> {
        let i = quad_adaptive(|s| (-self.phi.eval(s, r1)).exp(), self.base, r0, QUAD_TOL)?;
        Ok(self.big_phi.eval(r1) + i)
    }

    /// `Psi1(r0, r1) = Phi'(r1) - int_b^{r0} phi_r1 e^{-phi}`.
    pub fn psi1(&self, r0: f64, r1: f64) -> Result<f64> {
        let i = quad_adaptive(
            |s| self.phi.d_r1(s, r1) * (-self.phi.eval(s, r1)).exp(),
            self.base,
            r0,
            QUAD_TOL,
        )?;
        Ok(self.big_phi.deriv(r1) - i)
    }

    /// The wave forms `lambda^0 = lambda e^phi` and `lambda^1 = phi_r1 lambda + lambda'`.
    pub fn wave_forms(&self, r0: f64, r1: f64) -> ([f64; 4], [f64; 4]) {
        let l = self.lam.eval(r1);
        let ld = self.lam.deriv(r1);
        let e = self.phi.eval(r0, r1).exp();
        let p1 = self.phi.d_r1(r0, r1);
        (std::array::from_fn(|i| l[i] * e), std::array::from_fn(|i| p1 * l[i] + ld[i]))
    }
}

impl PairSystem for AlphaNonzeroSpec {
    fn residual(&self, r: RiemannPair, pt: &SpacetimePoint) -> Result<[f64; 2]> {
        let x = pt.to_array();
        Ok([
            pair4(self.lam.eval(r.r1), x) - self.psi0(r.r0, r.r1)?,
            pair4(self.lam.deriv(r.r1), x) - self.psi1(r.r0, r.r1)?,
        ])
    }

    fn jacobian(&self, r: RiemannPair, pt: &SpacetimePoint) -> Option<Result<[[f64; 2]; 2]>> {
        Some((|| {
            let x = pt.to_array();
            let e = (-self.phi.eval(r.r0, r.r1)).exp();
            let f1 = pair4(self.lam.deriv(r.r1), x) - self.psi1(r.r0, r.r1)?;
            let h = 1e-5 * r.r1.abs().max(1.0);
            let g = |b: f64| -> Result<f64> { Ok(pair4(self.lam.deriv(b), x) - self.psi1(r.r0, b)?) };
            let d11 = (g(r.r1 + h)? - g(r.r1 - h)?) / (2.0 * h);
            Ok([[-e, f1], [self.phi.d_r1(r.r0, r.r1) * e, d11]])
        })())
    }
}

/// Solves the `alpha_1 != 0` system at `pt` from `seed`.
pub fn alpha_nonzero_invariants(spec: &AlphaNonzeroSpec, pt: &SpacetimePoint, seed: RiemannPair, opts: &PairOptions) -> Result<PairSolution> {
    let (l0, l1) = spec.wave_forms(seed.r0, seed.r1);
    if wedge_norm(l0, l1) == 0.0 {
        return Err(Error::Constraint("lambda and its derivative are parallel at the seed".into()));
    }
    solve_pair(spec, pt, seed, opts)
}

fn wedge_norm(a: [f64; 4], b: [f64; 4]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            let w = a[i] * b[j] - a[j] * b[i];
            s += w * w;
        }
    }
    s.sqrt()
}

/// One simple wave `s` in the `alpha_1 = 0` regime.
#[derive(Clone, Debug)]
pub struct WaveComponent {
    pub chi: Func2,
    pub a_fn: CovectorFunc,
    pub psi: Func1,
    /// Search interval for this invariant.
    pub bracket: (f64, f64),
}

/// Data of the `alpha_1 = 0` construction, with one or more simple waves.
#[derive(Clone, Debug)]
pub struct AlphaZeroSpec {
    pub c: [f64; 4],
    pub a0: f64,
    pub phi: Func1,
    pub waves: Vec<WaveComponent>,
    pub base: f64,
    /// Search interval for `r0`.
    pub r0_bracket: (f64, f64),
}

impl AlphaZeroSpec {
    pub fn new(c: [f64; 4], a0: f64, phi: Func1, wave: WaveComponent, r0_bracket: (f64, f64)) -> Self {
        Self { c, a0, phi, waves: vec![wave], base: 0.0, r0_bracket }
    }

    /// `Psi0(r0) = int_b^{r0} e^{-phi}`.
    pub fn psi0(&self, r0: f64) -> Result<f64> {
        quad_adaptive(|s| (-self.phi.eval(s)).exp(), self.base, r0, QUAD_TOL)
    }

    /// Inverse of `Psi0` on the `r0` bracket.
    pub fn psi0_inverse(&self, y: f64) -> Result<f64> {
        let (lo, hi) = self.r0_bracket;
        let a = self.psi0(lo)?;
        let b = self.psi0(hi)?;
        if !(a < b) {
            return Err(Error::NotMonotone { index: 0 });
        }
        let p = ScalarProblem::new(|r: f64| self.psi0(r).map(|v| v - y).unwrap_or(f64::NAN), lo, hi).tolerances(1e-15, 4.0 * f64::EPSILON);
        solve_scalar_newton(&p, &|r: f64| (-self.phi.eval(r)).exp())
    }

    /// Left side minus right side of the relation for wave `s`.
    pub fn wave_residual(&self, s: usize, r0: f64, rs: f64, pt: &SpacetimePoint) -> Result<f64> {
        let w = &self.waves[s];
        let i = quad_adaptive(|xi| w.chi.eval(xi, rs) * (-self.phi.eval(xi)).exp(), self.base, r0, QUAD_TOL)?;
        Ok(i + pair4(w.a_fn.eval(rs), pt.to_array()) - w.psi.eval(rs))
    }

    pub fn wave_forms(&self, r0: f64, r1: f64) -> ([f64; 4], [f64; 4]) {
        let e = self.phi.eval(r0).exp();
        let w = &self.waves[0];
        let chi = w.chi.eval(r0, r1);
        let a = w.a_fn.eval(r1);
        (std::array::from_fn(|i| self.c[i] * e), std::array::from_fn(|i| chi * self.c[i] + a[i]))
    }
}

impl PairSystem for AlphaZeroSpec {
    fn residual(&self, r: RiemannPair, pt: &SpacetimePoint) -> Result<[f64; 2]> {
        let phase = pair4(self.c, pt.to_array()) + self.a0;
        Ok([self.psi0(r.r0)? - phase, self.wave_residual(0, r.r0, r.r1, pt)?])
    }
}

/// Solves `r0` then every `r^s` of an `alpha_1 = 0` spec; returns `[r0, r1, ..., rp]`.
pub fn alpha_zero_multi(spec: &AlphaZeroSpec, pt: &SpacetimePoint) -> Result<Vec<f64>> {
    let phase = pair4(spec.c, pt.to_array()) + spec.a0;
    let r0 = spec.psi0_inverse(phase)?;
    let mut out = vec![r0];
    for s in 0..spec.waves.len() {
        let (lo, hi) = spec.waves[s].bracket;
        let f = |rs: f64| spec.wave_residual(s, r0, rs, pt).unwrap_or(f64::NAN);
        out.push(find_root(f, lo, hi)?);
    }
    Ok(out)
}

/// Solves the single-wave `alpha_1 = 0` system at `pt`.
pub fn alpha_zero_invariants(spec: &AlphaZeroSpec, pt: &SpacetimePoint) -> Result<RiemannPair> {
    if spec.waves.is_empty() {
        return Err(Error::InvalidInput("alpha-zero spec without a wave".into()));
    }
    let r = alpha_zero_multi(spec, pt)?;
    Ok(RiemannPair::new(r[0], r[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(t: f64, x: f64, y: f64, z: f64) -> SpacetimePoint {
        SpacetimePoint::new(t, [x, y, z])
    }

    #[test]
    fn alpha_nonzero_trivial_phase() {
        // phi = 0, Phi = 0: lambda.x = r0 and lambda'.x = 0
        let lam = CovectorFunc::new(|r: f64| [r.cos(), r.sin(), 0.0, 1.0]).with_derivative(|r: f64| [-r.sin(), r.cos(), 0.0, 0.0]);
        let spec = AlphaNonzeroSpec::new(lam, Func2::constant(0.0), Func1::constant(0.0));
        let p = pt(0.3, 0.2, 0.0, 0.5);
        let s = alpha_nonzero_invariants(&spec, &p, RiemannPair::new(0.5, 0.5), &PairOptions { tol: 1e-12, ..Default::default() }).unwrap();
        // lambda'.x = 0 gives tan r1 = 0.2/0.3 in this setup
        let r1 = (0.2f64 / 0.3).atan();
        assert!((s.r.r1 - r1).abs() < 1e-10);
        let r0 = 0.3 * r1.cos() + 0.2 * r1.sin() + 0.5;
        assert!((s.r.r0 - r0).abs() < 1e-10);
    }

    #[test]
    fn alpha_zero_identity_psi0() {
        let wave = WaveComponent {
            chi: Func2::constant(1.0),
            a_fn: CovectorFunc::constant([0.0, 0.0, 1.0, 0.0]),
            psi: Func1::poly(vec![0.0, 2.0]),
            bracket: (-10.0, 10.0),
        };
        let spec = AlphaZeroSpec::new([1.0, 1.0, 0.0, 0.0], 0.25, Func1::constant(0.0), wave, (-10.0, 10.0));
        let p = pt(0.5, 1.0, 0.3, 0.0);
        let r = alpha_zero_invariants(&spec, &p).unwrap();
        assert!((r.r0 - 1.75).abs() < 1e-13);
        // r0 + y = 2 r1
        assert!((r.r1 - (1.75 + 0.3) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn multiwave_two_components() {
        let mk = |a: [f64; 4], k: f64| WaveComponent {
            chi: Func2::new(move |s: f64, r: f64| 1.0 + 0.1 * s * r),
            a_fn: CovectorFunc::constant(a),
            psi: Func1::poly(vec![0.0, k]),
            bracket: (-20.0, 20.0),
        };
        let mut spec = AlphaZeroSpec::new([0.0, 1.0, 0.0, 0.0], 0.0, Func1::poly(vec![0.0, 0.2]), mk([0.0, 0.0, 1.0, 0.0], 3.0), (-10.0, 10.0));
        spec.waves.push(mk([1.0, 0.0, 0.0, 1.0], -2.0));
        let p = pt(0.2, 0.7, -0.4, 0.9);
        let r = alpha_zero_multi(&spec, &p).unwrap();
        assert_eq!(r.len(), 3);
        for s in 0..2 {
            assert!(spec.wave_residual(s, r[0], r[s + 1], &p).unwrap().abs() < 1e-10);
        }
        assert!((spec.psi0(r[0]).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn sequential_and_coupled_solves_agree() {
        // the alpha_1 = 0 relations handed to the coupled Newton solver give
        // the same pair as the sequential scalar solves
        let wave = WaveComponent {
            chi: Func2::new(|s: f64, r: f64| 0.5 + 0.2 * s * r),
            a_fn: CovectorFunc::new(|r: f64| [0.1 * r, 0.0, 1.0, 0.3]).with_derivative(|_| [0.1, 0.0, 0.0, 0.0]),
            psi: Func1::poly(vec![0.1, 1.5]),
            bracket: (-50.0, 50.0),
        };
        let spec = AlphaZeroSpec::new([0.2, 1.0, 0.0, 0.0], 0.1, Func1::poly(vec![0.0, 0.3]), wave, (-20.0, 20.0));
        let p = pt(0.3, 0.4, 0.9, -0.2);
        let rz = alpha_zero_invariants(&spec, &p).unwrap();
        let rn = solve_pair(&spec, &p, RiemannPair::new(rz.r0 + 0.3, rz.r1 - 0.2), &PairOptions::default()).unwrap();
        assert!((rn.r.r0 - rz.r0).abs() < 1e-9, "{} vs {}", rn.r.r0, rz.r0);
        assert!((rn.r.r1 - rz.r1).abs() < 1e-9);
    }
}
