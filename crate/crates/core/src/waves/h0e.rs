//! Entropic wave on a hydrostatic-type state, with `S = S1` and `l2 = 0`.
//!
//! In the frame `c`, `Omega`, `n = c x Omega` the pressure depends only on
//! `w = c0 t + x + a0 + l1` through
//! `w^2 + p^{-2/k} / S1^2 + 2 A^{1/k} F(p) + a1 = 0`,
//! and `r1` is the root of `psi1(r1) = Y0 J0 + Y1 J1 + Y3 J3`.

use crate::error::{Error, Result};
use crate::funcs::Func1;
use crate::solver::{quad_gauss, unique_root};
use crate::states::RootBranch;
use crate::types::{vec3, Field, FluidState, PhysParams, RankTwoField, RiemannPair, SpacetimePoint, Vec3, WaveCovector};

use super::{combine, RankTwoElements};

const QUAD_TOL: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct H0EConfig {
    pub a: f64,
    pub s1: f64,
    pub a0: f64,
    pub a1: f64,
    pub c0: f64,
    pub t1: f64,
    pub c: Vec3,
    pub y0: Func1,
    pub y1: Func1,
    pub y3: Func1,
    pub v2: Func1,
    pub psi1: Func1,
    pub branch: RootBranch,
    pub p_bracket: (f64, f64),
    pub r1_bracket: (f64, f64),
    /// Use the closed form for the pressure when `kappa = 3`.
    pub closed_form: bool,
    pub params: PhysParams,
}

impl H0EConfig {
    /// `kappa = 3`, `A = S1 = 1`, `a1 = -6`, frame `c = e1`, `Omega = e2`,
    /// `g = (0.3, -0.5, 0.4)`, `c0 = 0.4`.
    pub fn reference() -> Self {
        Self {
            a: 1.0,
            s1: 1.0,
            a0: 0.0,
            a1: -6.0,
            c0: 0.4,
            t1: 0.3,
            c: [1.0, 0.0, 0.0],
            y0: Func1::constant(0.3),
            y1: Func1::new(|r| 1.0 + 0.1 * r.sin()).with_derivative(|r| 0.1 * r.cos()).labelled("1+0.1sin"),
            y3: Func1::constant(0.5),
            v2: Func1::new(|r| 0.5 * r.tanh()).with_derivative(|r| 0.5 / r.cosh().powi(2)).labelled("0.5tanh"),
            psi1: Func1::new(|r| 2.0 * r).with_derivative(|_| 2.0).labelled("2r"),
            branch: RootBranch::High,
            p_bracket: (1e-8, 1e8),
            r1_bracket: (-50.0, 50.0),
            closed_form: true,
            params: PhysParams::new(3.0, [0.3, -0.5, 0.4], [0.0, 1.0, 0.0]).unwrap(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct H0EField {
    cfg: H0EConfig,
    om: Vec3,
    n: Vec3,
    g1: f64,
    g2: f64,
    l1: f64,
    kappa: f64,
    p_sonic: f64,
}

impl H0EField {
    pub fn new(cfg: H0EConfig) -> Result<Self> {
        let om = cfg.params.omega_vec;
        let c = cfg.c;
        if (vec3::norm(c) - 1.0).abs() > 1e-10 || (vec3::norm(om) - 1.0).abs() > 1e-10 || vec3::dot(c, om).abs() > 1e-10 {
            return Err(Error::Constraint("requires |c| = |Omega| = 1 and c . Omega = 0".into()));
        }
        if cfg.s1 == 0.0 {
            return Err(Error::Constraint("S1 must be nonzero".into()));
        }
        if !(cfg.a > 0.0) {
            return Err(Error::Constraint(format!("A = {} must be positive", cfg.a)));
        }
        let (lo, hi) = cfg.p_bracket;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::InvalidInput(format!("pressure bracket [{lo}, {hi}]")));
        }
        let n = vec3::cross(c, om);
        let g = cfg.params.g_vec;
        let g3 = vec3::dot(g, n);
        if (g3 - cfg.c0).abs() > 1e-10 * (1.0 + g3.abs()) {
            return Err(Error::Constraint(format!("l2 = 0 requires g . (c x Omega) = c0, got {g3} and {}", cfg.c0)));
        }
        let kappa = cfg.params.kappa;
        let g1 = vec3::dot(g, c);
        let g2 = vec3::dot(g, om);
        let p_sonic = (kappa * cfg.s1 * cfg.s1 * cfg.a.powf(1.0 / kappa)).powf(-kappa / (kappa + 1.0));
        Ok(Self { l1: cfg.t1 - g1, om, n, g1, g2, kappa, p_sonic, cfg })
    }

    pub fn config(&self) -> &H0EConfig {
        &self.cfg
    }

    /// Pressure at which the two roots of the pressure relation merge.
    pub fn sonic_pressure(&self) -> f64 {
        self.p_sonic
    }

    /// The phase `w = c0 t + c . x + a0 + l1`.
    pub fn phase(&self, pt: &SpacetimePoint) -> f64 {
        self.cfg.c0 * pt.t + vec3::dot(self.cfg.c, pt.x) + self.cfg.a0 + self.l1
    }

    fn big_f(&self, p: f64) -> f64 {
        let k = self.kappa;
        if (k - 1.0).abs() < 1e-12 {
            p.ln()
        } else {
            p.powf(1.0 - 1.0 / k) / (1.0 - 1.0 / k)
        }
    }

    /// Left side of the pressure relation.
    pub fn pressure_relation(&self, w: f64, p: f64) -> f64 {
        let c = &self.cfg;
        let k = self.kappa;
        w * w + p.powf(-2.0 / k) / (c.s1 * c.s1) + 2.0 * c.a.powf(1.0 / k) * self.big_f(p) + c.a1
    }

    /// `-1/2` of the `p`-derivative of the pressure relation.
    fn big_g(&self, p: f64) -> f64 {
        let k = self.kappa;
        p.powf(-1.0 - 2.0 / k) / (k * self.cfg.s1 * self.cfg.s1) - self.cfg.a.powf(1.0 / k) * p.powf(-1.0 / k)
    }

    /// Pressure by a bracketed scan on the selected side of the sonic pressure.
    pub fn pressure_numeric(&self, w: f64) -> Result<f64> {
        let (lo, hi) = self.cfg.p_bracket;
        let (a, b) = match self.cfg.branch {
            RootBranch::Low => (lo, self.p_sonic.min(hi)),
            RootBranch::High => (self.p_sonic.max(lo), hi),
        };
        if a >= b {
            return Err(Error::NoBracket { lo: a, hi: b });
        }
        unique_root(|p| self.pressure_relation(w, p), a, b, 96, true)
    }

    /// Closed-form pressure for `kappa = 3`, where the relation is quadratic in `p^{2/3}`.
    pub fn pressure_closed_form(&self, w: f64) -> Result<f64> {
        if (self.kappa - 3.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("closed-form pressure needs kappa = 3, got {}", self.kappa)));
        }
        let c = &self.cfg;
        let a3 = c.a.cbrt();
        let r = -c.a1 - w * w;
        let disc = r * r - 12.0 * a3 / (c.s1 * c.s1);
        if disc < 0.0 {
            return Err(Error::Evaluation(format!("no real pressure at w = {w} (discriminant {disc})")));
        }
        let sgn = match c.branch {
            RootBranch::Low => -1.0,
            RootBranch::High => 1.0,
        };
        let q = (r + sgn * disc.sqrt()) / (6.0 * a3);
        if !(q > 0.0) {
            return Err(Error::NonPhysical(format!("non-positive p^(2/3) = {q}")));
        }
        Ok(q.powf(1.5))
    }

    pub fn pressure(&self, w: f64) -> Result<f64> {
        if self.cfg.closed_form && (self.kappa - 3.0).abs() <= 1e-12 {
            self.pressure_closed_form(w)
        } else {
            self.pressure_numeric(w)
        }
    }

    /// `K1 = int_0^w p^{1/k}` and `K2 = int_0^w w' p^{1/k}`.
    fn moments(&self, w: f64) -> Result<(f64, f64)> {
        let err = std::cell::Cell::new(None);
        let pk = |s: f64| match self.pressure(s) {
            Ok(p) => p.powf(1.0 / self.kappa),
            Err(e) => {
                err.set(Some(e));
                f64::NAN
            }
        };
        let k1 = quad_gauss(&pk, 0.0, w, QUAD_TOL);
        let k2 = quad_gauss(|s| s * pk(s), 0.0, w, QUAD_TOL);
        if let Some(e) = err.take() {
            return Err(e);
        }
        Ok((k1?, k2?))
    }

    fn js(&self, pt: &SpacetimePoint, w: f64, k1: f64, k2: f64) -> [f64; 3] {
        let c = &self.cfg;
        let x = vec3::dot(c.c, pt.x);
        let z = vec3::dot(self.n, pt.x);
        [pt.t - c.s1 * k1, x - w + c.c0 * c.s1 * k1, z - c.s1 * (k2 + self.g1 * k1)]
    }

    fn r1_relation(&self, r1: f64, j: [f64; 3]) -> f64 {
        let c = &self.cfg;
        c.psi1.eval(r1) - c.y0.eval(r1) * j[0] - c.y1.eval(r1) * j[1] - c.y3.eval(r1) * j[2]
    }

    /// Residual of the `r1` relation at a given `r1`.
    pub fn implicit_residual(&self, pt: &SpacetimePoint, r1: f64) -> Result<f64> {
        let w = self.phase(pt);
        let (k1, k2) = self.moments(w)?;
        Ok(self.r1_relation(r1, self.js(pt, w, k1, k2)))
    }

    fn solve(&self, pt: &SpacetimePoint) -> Result<Solved> {
        let w = self.phase(pt);
        let p = self.pressure(w)?;
        let (k1, k2) = self.moments(w)?;
        let j = self.js(pt, w, k1, k2);
        let (lo, hi) = self.cfg.r1_bracket;
        let r1 = unique_root(|r| self.r1_relation(r, j), lo, hi, 400, false)?;
        Ok(Solved { w, p, k1, j, r1 })
    }

    fn state(&self, s: &Solved) -> Result<FluidState> {
        let c = &self.cfg;
        let pk = s.p.powf(1.0 / self.kappa);
        let rho = c.a.powf(-1.0 / self.kappa) * pk;
        let v1 = 1.0 / (c.s1 * pk) - c.c0;
        let v2 = self.g2 * c.s1 * s.k1 + c.v2.eval(s.r1);
        let v3 = s.w + self.g1;
        FluidState::new(rho, s.p, combine(v1, c.c, v2, self.om, v3, self.n))
    }

    pub fn elements_at(&self, pt: &SpacetimePoint) -> Result<RankTwoElements> {
        let c = &self.cfg;
        let s = self.solve(pt)?;
        let u = self.state(&s)?;
        let k = self.kappa;
        let gg = self.big_g(s.p);
        if gg == 0.0 {
            return Err(Error::Singular("pressure at the sonic point".into()));
        }
        let pk = s.p.powf(1.0 / k);
        let p_w = s.w / gg;
        let rho_w = u.rho * p_w / (k * s.p);
        let v1_w = -p_w / (k * c.s1 * pk * s.p);
        let v2_w = self.g2 * c.s1 * pk;
        let dv = combine(v1_w, c.c, v2_w, self.om, 1.0, self.n);
        let gamma0 = [rho_w, p_w, dv[0], dv[1], dv[2]];
        let lam0 = WaveCovector::new(c.c0, c.c);
        let v2p = c.v2.deriv(s.r1);
        let gamma1 = [0.0, 0.0, v2p * self.om[0], v2p * self.om[1], v2p * self.om[2]];

        let dw = [c.c0, c.c[0], c.c[1], c.c[2]];
        let sp = c.s1 * pk;
        let dj0: [f64; 4] = std::array::from_fn(|m| if m == 0 { 1.0 } else { 0.0 } - sp * dw[m]);
        let dj1: [f64; 4] = std::array::from_fn(|m| if m == 0 { 0.0 } else { c.c[m - 1] } - (1.0 - c.c0 * sp) * dw[m]);
        let dj3: [f64; 4] = std::array::from_fn(|m| if m == 0 { 0.0 } else { self.n[m - 1] } - sp * (s.w + self.g1) * dw[m]);
        let ys = [c.y0.eval(s.r1), c.y1.eval(s.r1), c.y3.eval(s.r1)];
        let yp = [c.y0.deriv(s.r1), c.y1.deriv(s.r1), c.y3.deriv(s.r1)];
        let den = c.psi1.deriv(s.r1) - (0..3).map(|i| yp[i] * s.j[i]).sum::<f64>();
        if den == 0.0 || !den.is_finite() {
            return Err(Error::Singular("the r1 relation is stationary in r1".into()));
        }
        let lam1: [f64; 4] = std::array::from_fn(|m| (ys[0] * dj0[m] + ys[1] * dj1[m] + ys[2] * dj3[m]) / den);
        Ok(RankTwoElements {
            r: RiemannPair::new(s.w, s.r1),
            gamma0,
            lam0,
            gamma1,
            lam1: WaveCovector::from_array(lam1),
        })
    }
}

struct Solved {
    w: f64,
    p: f64,
    k1: f64,
    j: [f64; 3],
    r1: f64,
}

impl Field for H0EField {
    fn eval(&self, pt: &SpacetimePoint) -> Result<FluidState> {
        self.eval_with_invariants(pt).map(|x| x.0)
    }
}

impl RankTwoField for H0EField {
    fn eval_with_invariants(&self, pt: &SpacetimePoint) -> Result<(FluidState, RiemannPair)> {
        let s = self.solve(pt)?;
        Ok((self.state(&s)?, RiemannPair::new(s.w, s.r1)))
    }
}
