//! Stationary entropic wave on an entropic state.
//!
//! With `Omega = (O1, O2, 0)` and `g = (0, 0, g3)` the velocity is parallel to
//! `Omega`, so the Coriolis force vanishes and `v . grad` annihilates any
//! function of `w = -O2 x + O1 y` and `z`. The invariants are `r0 = g3 z` and
//! the root of `r1 = w + c z sqrt(r1 + r01)`.

use crate::elements::Sign;
use crate::error::{Error, Result};
use crate::funcs::Func1;
use crate::solver::unique_root;
use crate::special::jacobi_sncndn;
use crate::types::{Field, FluidState, PhysParams, RankTwoField, RiemannPair, SpacetimePoint, WaveCovector};

use super::RankTwoElements;

#[derive(Debug, Clone)]
pub struct E0EConfig {
    pub m: f64,
    pub p0: f64,
    pub rho0: f64,
    pub b: f64,
    pub c: f64,
    pub r01: f64,
    /// Elliptic modulus; the parameter passed to `cn` is `k^2`.
    pub k: f64,
    pub a_fn: Func1,
    pub branch: Sign,
    pub params: PhysParams,
}

impl E0EConfig {
    pub fn reference() -> Self {
        let a_fn = Func1::new(|r| 0.5 + 0.3 * r.sin()).with_derivative(|r| 0.3 * r.cos()).labelled("0.5+0.3sin");
        Self {
            m: 0.5,
            p0: 2.0,
            rho0: 1.0,
            b: 0.7,
            c: 0.8,
            r01: 1.0,
            k: 0.6,
            a_fn,
            branch: Sign::Plus,
            params: PhysParams::new(1.4, [0.0, 0.0, -1.0], [0.6, 0.8, 0.0]).unwrap(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct E0EField {
    cfg: E0EConfig,
    o1: f64,
    o2: f64,
    g3: f64,
}

impl E0EField {
    pub fn new(cfg: E0EConfig) -> Result<Self> {
        let [o1, o2, o3] = cfg.params.omega_vec;
        let [g1, g2, g3] = cfg.params.g_vec;
        if !(cfg.k > 0.0 && cfg.k < 1.0) {
            return Err(Error::Constraint(format!("elliptic modulus k = {} must lie in (0, 1)", cfg.k)));
        }
        if o1 == 0.0 {
            return Err(Error::Constraint("Omega_1 must be nonzero".into()));
        }
        if o3 != 0.0 {
            return Err(Error::Constraint("Omega must lie in the horizontal plane".into()));
        }
        if g1 != 0.0 || g2 != 0.0 || g3 == 0.0 {
            return Err(Error::Constraint("g must be vertical and nonzero".into()));
        }
        if cfg.m == 0.0 {
            return Err(Error::Constraint("m must be nonzero".into()));
        }
        Ok(Self { o1, o2, g3, cfg })
    }

    pub fn config(&self) -> &E0EConfig {
        &self.cfg
    }

    fn w(&self, pt: &SpacetimePoint) -> f64 {
        -self.o2 * pt.x[0] + self.o1 * pt.x[1]
    }

    /// `sqrt(r1 + r01)` on the selected branch.
    fn root_s(&self, pt: &SpacetimePoint) -> Result<f64> {
        let cz = self.cfg.c * pt.x[2];
        let disc = cz * cz + 4.0 * (self.w(pt) + self.cfg.r01);
        if disc < 0.0 {
            return Err(Error::Evaluation(format!("negative discriminant {disc} for r1")));
        }
        let s = 0.5 * (cz + self.cfg.branch.value() * disc.sqrt());
        if s < -1e-14 * (1.0 + cz.abs()) {
            return Err(Error::Evaluation("the selected branch does not solve the r1 relation here".into()));
        }
        Ok(s.max(0.0))
    }

    /// Closed-form Riemann invariants.
    pub fn invariants(&self, pt: &SpacetimePoint) -> Result<RiemannPair> {
        let cz = self.cfg.c * pt.x[2];
        let w = self.w(pt);
        let disc = cz * cz + 4.0 * (w + self.cfg.r01);
        self.root_s(pt)?;
        let r1 = w + 0.5 * cz * cz + self.cfg.branch.value() * 0.5 * cz * disc.sqrt();
        Ok(RiemannPair::new(self.g3 * pt.x[2], r1))
    }

    /// Residual of the implicit relation `r1 - w - c z sqrt(r1 + r01)`.
    pub fn implicit_residual(&self, pt: &SpacetimePoint, r1: f64) -> f64 {
        r1 - self.w(pt) - self.cfg.c * pt.x[2] * (r1 + self.cfg.r01).max(0.0).sqrt()
    }

    /// `r1` found by bracketing the implicit relation, independent of the closed form.
    pub fn numeric_r1(&self, pt: &SpacetimePoint) -> Result<f64> {
        let lo = -self.cfg.r01;
        let mut hi = lo.abs() + self.w(pt).abs() + 1.0;
        while self.implicit_residual(pt, hi) <= 0.0 {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::NoBracket { lo, hi });
            }
        }
        unique_root(|r| self.implicit_residual(pt, r), lo, hi, 256, false)
    }

    /// State as a function of the invariants.
    pub fn parametric(&self, r0: f64, r1: f64) -> Result<FluidState> {
        let c = &self.cfg;
        let rho = c.rho0 / (c.m * r0).cosh();
        let p = c.rho0 / c.m * (c.m * r0).sinh().atan() + c.p0;
        let beta = c.a_fn.eval(r1) * jacobi_sncndn(1.0 / (1.0 + (c.b * r0).cosh()), c.k * c.k).1;
        FluidState::new(rho, p, [beta, beta * self.o2 / self.o1, 0.0])
    }

    pub fn elements_at(&self, pt: &SpacetimePoint) -> Result<RankTwoElements> {
        let c = &self.cfg;
        let r = self.invariants(pt)?;
        let u = self.parametric(r.r0, r.r1)?;
        let e = [1.0, self.o2 / self.o1, 0.0];
        let ch = (c.b * r.r0).cosh();
        let arg = 1.0 / (1.0 + ch);
        let (sn, cn, dn) = jacobi_sncndn(arg, c.k * c.k);
        let darg = -c.b * (c.b * r.r0).sinh() / ((1.0 + ch) * (1.0 + ch));
        let beta_r0 = c.a_fn.eval(r.r1) * (-sn * dn) * darg;
        let rho_r0 = -c.rho0 * c.m * (c.m * r.r0).sinh() / (c.m * r.r0).cosh().powi(2);
        let gamma0 = [rho_r0, u.rho, beta_r0 * e[0], beta_r0 * e[1], 0.0];
        let lam0 = WaveCovector::new(0.0, [0.0, 0.0, self.g3]);
        let beta_r1 = c.a_fn.deriv(r.r1) * cn;
        let gamma1 = [0.0, 0.0, beta_r1 * e[0], beta_r1 * e[1], 0.0];
        let s = self.root_s(pt)?;
        let cz = c.c * pt.x[2];
        let den = 1.0 - cz / (2.0 * s);
        if !(den.is_finite() && den != 0.0) {
            return Err(Error::Singular("r1 is not differentiable here".into()));
        }
        let lam1 = WaveCovector::new(0.0, [-self.o2 / den, self.o1 / den, c.c * s / den]);
        Ok(RankTwoElements { r, gamma0, lam0, gamma1, lam1 })
    }
}

impl Field for E0EField {
    fn eval(&self, pt: &SpacetimePoint) -> Result<FluidState> {
        self.eval_with_invariants(pt).map(|x| x.0)
    }
}

impl RankTwoField for E0EField {
    fn eval_with_invariants(&self, pt: &SpacetimePoint) -> Result<(FluidState, RiemannPair)> {
        let r = self.invariants(pt)?;
        Ok((self.parametric(r.r0, r.r1)?, r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::make_grid;
    use crate::verify::{euler_residual_convergence, fd_jacobian, jacobian_rank, RANK_TOL};

    fn field() -> E0EField {
        E0EField::new(E0EConfig::reference()).unwrap()
    }

    #[test]
    fn r1_equals_w_on_the_floor() {
        let f = field();
        let pt = SpacetimePoint::new(0.0, [0.3, -0.1, 0.0]);
        let r = f.invariants(&pt).unwrap();
        assert_eq!(r.r1, f.w(&pt));
        assert_eq!(r.r0, 0.0);
        assert_eq!(f.eval(&pt).unwrap().rho, 1.0);
    }

    #[test]
    fn closed_form_solves_implicit_relation() {
        let f = field();
        for (x, y, z) in [(0.1, 0.2, 0.3), (-0.4, 0.1, -0.5), (0.0, 0.4, 1.2)] {
            let pt = SpacetimePoint::new(0.0, [x, y, z]);
            let r1 = f.invariants(&pt).unwrap().r1;
            assert!(f.implicit_residual(&pt, r1).abs() < 1e-12);
            assert!((f.numeric_r1(&pt).unwrap() - r1).abs() < 1e-10);
        }
    }

    #[test]
    fn stationary_and_exact() {
        let f = field();
        let grid = make_grid([(0.0, 1.0), (-0.4, 0.4), (-0.4, 0.4), (-0.5, 0.5)], [2, 4, 4, 4]).unwrap();
        let rep = euler_residual_convergence(&f, &grid, &f.cfg.params, 2e-2).unwrap();
        assert!(rep.converges_with(1.8), "{rep:?}");
        let pt = SpacetimePoint::new(0.3, [0.1, 0.2, 0.3]);
        let (_, j) = fd_jacobian(&f, &pt, 1e-5).unwrap();
        assert!(j.iter().all(|row| row[0] == 0.0));
        assert_eq!(jacobian_rank(&f, &pt, 1e-5, RANK_TOL).unwrap().rank, 2);
    }

    #[test]
    fn elements_reconstruct_jacobian() {
        let f = field();
        let pt = SpacetimePoint::new(0.0, [0.1, 0.2, 0.3]);
        let e = f.elements_at(&pt).unwrap();
        let (_, j) = fd_jacobian(&f, &pt, 1e-5).unwrap();
        let jr = e.jacobian();
        for k in 0..5 {
            for mu in 0..4 {
                assert!((j[k][mu] - jr[k][mu]).abs() < 1e-7, "{k} {mu}: {} vs {}", j[k][mu], jr[k][mu]);
            }
        }
    }

    #[test]
    fn minus_branch_outside_its_domain_is_an_error() {
        let cfg = E0EConfig { branch: Sign::Minus, ..E0EConfig::reference() };
        let f = E0EField::new(cfg).unwrap();
        assert!(f.eval(&SpacetimePoint::new(0.0, [0.0, 0.0, 0.5])).is_err());
        let far = SpacetimePoint::new(0.0, [5.0, 0.0, 0.0]);
        assert!(field().eval(&far).is_err());
    }

    #[test]
    fn config_checks() {
        let mut c = E0EConfig::reference();
        c.k = 1.0;
        assert!(E0EField::new(c).is_err());
        let mut c = E0EConfig::reference();
        c.params = PhysParams::new(1.4, [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]).unwrap();
        assert!(E0EField::new(c).is_err());
    }
}
