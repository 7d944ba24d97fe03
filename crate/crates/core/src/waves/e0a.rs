//! Acoustic wave on an entropic state (`p = A rho`, `g . Omega = 0`).
//!
//! `r0 = A0 ln(tanh^2(zeta / F0) + 1)` is a function of the linear phase
//! `zeta`, and `B = r1` solves `K B = (ee1 sqrt(A) (B + 1) + B0) t + Omega . x`,
//! which has a pole at `t = K / (ee1 sqrt(A))`.

use crate::elements::Sign;
use crate::error::{Error, Result};
use crate::types::{vec3, Field, FluidState, PhysParams, RankTwoField, RiemannPair, SpacetimePoint, Vec3, WaveCovector};

use super::{combine, RankTwoElements};

/// Which closed form to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum E0aReading {
    /// The form that satisfies the Euler equations.
    Corrected,
    /// The display with the reference parameters substituted, kept for comparison.
    AsPrinted,
}

#[derive(Debug, Clone)]
pub struct E0AConfig {
    pub a: f64,
    pub a0: f64,
    pub f0: f64,
    pub b0: f64,
    pub c0: f64,
    pub c1: f64,
    pub k: f64,
    pub eps: Sign,
    pub eps1: Sign,
    pub eps2: Sign,
    pub reading: E0aReading,
    pub params: PhysParams,
}

impl E0AConfig {
    /// `eps = eps1 = 1`, `B0 = 0`, `F0 = 1`, `A0 = 5`, `Omega = (0, -1, 0)`,
    /// `c0 = g`, `c1 = 0`, `g = (0, 0, g)`.
    pub fn reference(k: f64, a: f64, g: f64) -> Self {
        Self {
            a,
            a0: 5.0,
            f0: 1.0,
            b0: 0.0,
            c0: g,
            c1: 0.0,
            k,
            eps: Sign::Plus,
            eps1: Sign::Plus,
            eps2: Sign::Plus,
            reading: E0aReading::Corrected,
            params: PhysParams::new(1.0, [0.0, 0.0, g], [0.0, -1.0, 0.0]).unwrap(),
        }
    }

    /// The figure configuration: `K = -sqrt(A)`, `A = 5/3`, `g = 9.81`.
    pub fn figure() -> Self {
        let a: f64 = 5.0 / 3.0;
        Self::reference(-a.sqrt(), a, crate::types::STANDARD_GRAVITY)
    }

    fn ee1(&self) -> f64 {
        self.eps.value() * self.eps1.value()
    }
}

/// Time of the gradient catastrophe, if the pole of `B` lies in the future.
pub fn catastrophe_time(cfg: &E0AConfig) -> Option<f64> {
    let t = cfg.k / (cfg.ee1() * cfg.a.sqrt());
    (t > 0.0 && t.is_finite()).then_some(t)
}

#[derive(Debug, Clone)]
pub struct E0AField {
    cfg: E0AConfig,
    gabs: f64,
    /// Spatial part of `d zeta`.
    zeta_x: Vec3,
    g_cross_o: Vec3,
    root: f64,
}

struct Parts {
    zeta: f64,
    r0: f64,
    /// `dr0 / dzeta`.
    e_phi: f64,
    b: f64,
    den: f64,
}

impl E0AField {
    pub fn new(cfg: E0AConfig) -> Result<Self> {
        let g = cfg.params.g_vec;
        let om = cfg.params.omega_vec;
        let gabs = vec3::norm(g);
        if !(cfg.a > 0.0) {
            return Err(Error::Constraint(format!("A = {} must be positive", cfg.a)));
        }
        if cfg.f0 == 0.0 {
            return Err(Error::Constraint("F0 must be nonzero".into()));
        }
        if gabs == 0.0 || gabs * gabs < cfg.c0 * cfg.c0 {
            return Err(Error::Constraint(format!("|g|^2 = {} must be at least c0^2 = {}", gabs * gabs, cfg.c0 * cfg.c0)));
        }
        if (vec3::norm(om) - 1.0).abs() > 1e-10 || vec3::dot(g, om).abs() > 1e-10 * gabs {
            return Err(Error::Constraint("requires |Omega| = 1 and g . Omega = 0".into()));
        }
        let g2 = gabs * gabs;
        let root = (g2 - cfg.c0 * cfg.c0).max(0.0).sqrt();
        let g_cross_o = vec3::cross(g, om);
        let zeta_x = vec3::sub(vec3::scale(cfg.eps2.value() * root / g2, g), vec3::scale(cfg.c0 / g2, g_cross_o));
        Ok(Self { cfg, gabs, zeta_x, g_cross_o, root })
    }

    pub fn config(&self) -> &E0AConfig {
        &self.cfg
    }

    pub fn catastrophe_time(&self) -> Option<f64> {
        catastrophe_time(&self.cfg)
    }

    /// A 3 x 3 cluster of spatial points where the gradient grows like
    /// `C / (t* - t)` up to `t*`.
    ///
    /// Away from the cluster the `tanh` kink of the phase passes by, and where
    /// the numerator of `B` ends positive the density grows like
    /// `exp(C / (t* - t))`. The points keep `|zeta| >= 15 |F0|` for `t` in
    /// `[0, t*]` and make the numerator of `B` at `t*` at most `-5`, so `rho`
    /// decays and the velocity pole dominates.
    pub fn catastrophe_probe_points(&self) -> Result<Vec<[f64; 3]>> {
        let c = &self.cfg;
        let ts = self.catastrophe_time().ok_or_else(|| Error::Constraint("no catastrophe for K <= 0".into()))?;
        let om = c.params.omega_vec;
        let zx = self.zeta_x;
        let sa = c.ee1() * c.a.sqrt();
        // x = alpha Omega + beta zeta_x with Omega . x = a and zeta_x . x = b
        let (oo, oz, zz) = (vec3::dot(om, om), vec3::dot(om, zx), vec3::dot(zx, zx));
        let det = oo * zz - oz * oz;
        if !(det > 1e-12 * oo * zz) {
            return Err(Error::Constraint("phase direction parallel to Omega: no probe window".into()));
        }
        let b = 15.0 * c.f0.abs() + c.c0.abs() * ts + c.c1.abs() + 1.0;
        let mut pts = Vec::with_capacity(9);
        for i in 0..3 {
            for j in 0..3 {
                let a = -(sa + c.b0) * ts - 5.0 - 0.5 * i as f64;
                let bj = b + 0.5 * j as f64;
                let alpha = (a * zz - bj * oz) / det;
                let beta = (bj * oo - a * oz) / det;
                pts.push(combine(alpha, om, beta, zx, 0.0, [0.0; 3]));
            }
        }
        Ok(pts)
    }

    fn parts(&self, pt: &SpacetimePoint) -> Result<Parts> {
        let c = &self.cfg;
        let zeta = c.c0 * pt.t + vec3::dot(self.zeta_x, pt.x) + c.c1;
        let th = (zeta / c.f0).tanh();
        let r0 = c.a0 * (th * th).ln_1p();
        let e_phi = 2.0 * c.a0 / c.f0 * th * (1.0 - th * th) / (1.0 + th * th);
        let sa = c.ee1() * c.a.sqrt();
        let den = c.k - sa * pt.t;
        if den.abs() <= 1e-14 * c.k.abs().max(1.0) {
            return Err(Error::Evaluation(format!("t = {} is at the pole of B", pt.t)));
        }
        let b = ((sa + c.b0) * pt.t + vec3::dot(c.params.omega_vec, pt.x)) / den;
        Ok(Parts { zeta, r0, e_phi, b, den })
    }

    /// Riemann invariants `(r0, B)`.
    pub fn invariants(&self, pt: &SpacetimePoint) -> Result<RiemannPair> {
        let p = self.parts(pt)?;
        Ok(RiemannPair::new(p.r0, p.b))
    }

    /// Residuals of the two defining relations at `(r0, r1)`: the inverted phase
    /// relation and `K B - (ee1 sqrt(A)(B + 1) + B0) t - Omega . x`.
    pub fn implicit_residual(&self, pt: &SpacetimePoint, r: RiemannPair) -> Result<[f64; 2]> {
        let c = &self.cfg;
        let p = self.parts(pt)?;
        let x = (r.r0 / c.a0).exp_m1();
        if !(0.0..1.0).contains(&x) {
            return Err(Error::Evaluation(format!("r0 = {} outside the range of the phase relation", r.r0)));
        }
        let zeta_abs = c.f0.abs() * x.sqrt().atanh();
        let sa = c.ee1() * c.a.sqrt();
        Ok([
            zeta_abs - p.zeta.abs(),
            c.k * r.r1 - ((sa * (r.r1 + 1.0) + c.b0) * pt.t + vec3::dot(c.params.omega_vec, pt.x)),
        ])
    }

    fn velocity(&self, e_phi: f64, b: f64) -> Vec3 {
        let c = &self.cfg;
        let g2 = self.gabs * self.gabs;
        combine(
            -e_phi * c.c0 / g2,
            c.params.g_vec,
            -(c.b0 + c.ee1() * c.a.sqrt() * b),
            c.params.omega_vec,
            1.0 - c.eps2.value() * e_phi * self.root / g2,
            self.g_cross_o,
        )
    }

    fn eval_corrected(&self, pt: &SpacetimePoint) -> Result<(FluidState, RiemannPair)> {
        let p = self.parts(pt)?;
        let rho = (p.r0 / self.cfg.a + p.b).exp();
        let u = FluidState::new(rho, self.cfg.a * rho, self.velocity(p.e_phi, p.b))?;
        Ok((u, RiemannPair::new(p.r0, p.b)))
    }

    fn eval_printed(&self, pt: &SpacetimePoint) -> Result<(FluidState, RiemannPair)> {
        let c = &self.cfg;
        let g = self.gabs;
        let [x, _, z] = pt.x;
        let t = pt.t;
        let sa = c.a.sqrt();
        let den = c.k - sa * t;
        let den2 = c.k - c.a * t;
        if den.abs() <= 1e-14 * c.k.abs().max(1.0) || den2.abs() <= 1e-14 * c.k.abs().max(1.0) {
            return Err(Error::Evaluation(format!("t = {t} is at a pole of the printed form")));
        }
        let zeta = g * t - x;
        let th = zeta.tanh();
        let rho = (th * th + 1.0).powf(c.a0 / c.a) * ((sa * t + g * z) / den).exp();
        let v2 = -(c.a * t + sa * g * z) / den2;
        let ch = zeta.cosh();
        let v3 = -2.0 * th * th / (2.0 * ch * ch - 1.0);
        let u = FluidState::new(rho, c.a * rho, [g, v2, v3])?;
        let p = self.parts(pt)?;
        Ok((u, RiemannPair::new(p.r0, p.b)))
    }

    /// State as a function of the invariants and the phase (the velocity
    /// depends on `r0` through `dr0/dzeta`, which is two-valued in `r0`).
    pub fn parametric(&self, zeta: f64, b: f64) -> Result<FluidState> {
        let c = &self.cfg;
        let th = (zeta / c.f0).tanh();
        let r0 = c.a0 * (th * th).ln_1p();
        let e_phi = 2.0 * c.a0 / c.f0 * th * (1.0 - th * th) / (1.0 + th * th);
        let rho = (r0 / c.a + b).exp();
        FluidState::new(rho, c.a * rho, self.velocity(e_phi, b))
    }

    pub fn elements_at(&self, pt: &SpacetimePoint) -> Result<RankTwoElements> {
        let c = &self.cfg;
        let p = self.parts(pt)?;
        if p.e_phi == 0.0 {
            return Err(Error::Singular("dr0/dzeta vanishes at this point".into()));
        }
        let rho = (p.r0 / c.a + p.b).exp();
        let th = (p.zeta / c.f0).tanh();
        let t2 = th * th;
        let d_e_phi = 2.0 * c.a0 / (c.f0 * c.f0) * (1.0 - t2) * (1.0 - 4.0 * t2 - t2 * t2) / ((1.0 + t2) * (1.0 + t2));
        let g2 = self.gabs * self.gabs;
        let s = d_e_phi / p.e_phi;
        let dv = combine(-s * c.c0 / g2, c.params.g_vec, 0.0, [0.0; 3], -s * c.eps2.value() * self.root / g2, self.g_cross_o);
        let gamma0 = [rho / c.a, rho, dv[0], dv[1], dv[2]];
        let lam0 = WaveCovector::new(p.e_phi * c.c0, vec3::scale(p.e_phi, self.zeta_x));
        let sa = c.ee1() * c.a.sqrt();
        let om = c.params.omega_vec;
        let gamma1 = [rho, c.a * rho, -sa * om[0], -sa * om[1], -sa * om[2]];
        let lam1 = WaveCovector::new((sa * (1.0 + p.b) + c.b0) / p.den, vec3::scale(1.0 / p.den, om));
        Ok(RankTwoElements { r: RiemannPair::new(p.r0, p.b), gamma0, lam0, gamma1, lam1 })
    }
}

impl Field for E0AField {
    fn eval(&self, pt: &SpacetimePoint) -> Result<FluidState> {
        self.eval_with_invariants(pt).map(|x| x.0)
    }
}

impl RankTwoField for E0AField {
    fn eval_with_invariants(&self, pt: &SpacetimePoint) -> Result<(FluidState, RiemannPair)> {
        match self.cfg.reading {
            E0aReading::Corrected => self.eval_corrected(pt),
            E0aReading::AsPrinted => self.eval_printed(pt),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::make_grid;
    use crate::verify::{euler_residual, euler_residual_convergence, fd_jacobian, jacobian_rank, RANK_TOL};

    #[test]
    fn figure_origin_values() {
        let f = E0AField::new(E0AConfig::figure()).unwrap();
        let u = f.eval(&SpacetimePoint::new(0.0, [0.0; 3])).unwrap();
        assert!((u.rho - 1.0).abs() < 1e-12);
        assert_eq!(u.v[0], 9.81);
        for pt in [[1.0, 2.0, 0.3], [-3.0, 0.5, 0.1]] {
            assert_eq!(f.eval(&SpacetimePoint::new(0.7, pt)).unwrap().v[0], 9.81);
        }
    }

    #[test]
    fn corrected_reading_is_exact_and_printed_is_not() {
        let grid = make_grid([(0.0, 0.2), (-0.5, 0.5), (-0.5, 0.5), (0.0, 0.5)], [2, 4, 4, 3]).unwrap();
        let f = E0AField::new(E0AConfig::figure()).unwrap();
        let rep = euler_residual_convergence(&f, &grid, &f.cfg.params, 1e-3).unwrap();
        assert!(rep.converges_with(1.8), "{rep:?}");
        let printed = E0AField::new(E0AConfig { reading: E0aReading::AsPrinted, ..E0AConfig::figure() }).unwrap();
        let bad = euler_residual(&printed, &grid, &f.cfg.params, 1e-4).unwrap();
        assert!(bad.relative_max().iter().any(|r| *r > 1e-2), "{bad:?}");
    }

    #[test]
    fn general_parameters_are_exact() {
        // c0 < |g| exercises the oblique phase and the eps2 sign
        for eps2 in [Sign::Plus, Sign::Minus] {
            let cfg = E0AConfig {
                a: 1.3,
                a0: 0.7,
                f0: 1.4,
                b0: 0.2,
                c0: 0.6,
                c1: 0.1,
                k: 2.0,
                eps: Sign::Minus,
                eps1: Sign::Plus,
                eps2,
                reading: E0aReading::Corrected,
                params: PhysParams::new(1.0, [0.6, 0.0, 0.8], [0.0, 1.0, 0.0]).unwrap(),
            };
            let f = E0AField::new(cfg).unwrap();
            let grid = make_grid([(0.0, 0.5), (-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)], [2, 3, 3, 3]).unwrap();
            let rep = euler_residual_convergence(&f, &grid, &f.cfg.params, 1e-2).unwrap();
            assert!(rep.converges_with(1.8), "{eps2:?}: {rep:?}");
        }
    }

    #[test]
    fn wrong_kappa_shows_in_entropy() {
        let mut cfg = E0AConfig::figure();
        let f = E0AField::new(cfg.clone()).unwrap();
        cfg.params.kappa = 1.4;
        let grid = make_grid([(0.0, 0.0), (-0.5, 0.5), (0.0, 0.0), (0.0, 0.5)], [1, 3, 1, 3]).unwrap();
        let good = euler_residual(&f, &grid, &f.cfg.params, 1e-4).unwrap();
        let rep = euler_residual(&f, &grid, &cfg.params, 1e-4).unwrap();
        assert!(rep.relative_max()[4] > 1e-3, "{rep:?}");
        assert!(rep.max[4] > 1e4 * good.max[4], "{rep:?} vs {good:?}");
    }

    #[test]
    fn catastrophe_times() {
        assert_eq!(catastrophe_time(&E0AConfig::reference(1.0, 1.0, 9.81)), Some(1.0));
        assert_eq!(catastrophe_time(&E0AConfig::reference(2.0, 4.0, 9.81)), Some(1.0));
        assert_eq!(catastrophe_time(&E0AConfig::figure()), None);
        let f = E0AField::new(E0AConfig::reference(1.0, 1.0, 9.81)).unwrap();
        assert!(f.eval(&SpacetimePoint::new(1.0, [0.0; 3])).is_err());
    }

    #[test]
    fn invariants_satisfy_relations_and_rank_two() {
        let f = E0AField::new(E0AConfig::reference(1.5, 5.0 / 3.0, 9.81)).unwrap();
        for pt in [[0.3, 0.2, 0.1], [-0.2, 1.0, 0.4]] {
            let p = SpacetimePoint::new(0.2, pt);
            let r = f.invariants(&p).unwrap();
            let res = f.implicit_residual(&p, r).unwrap();
            assert!(res[0].abs() < 1e-10 && res[1].abs() < 1e-12, "{res:?}");
            let rk = jacobian_rank(&f, &p, 1e-5, RANK_TOL).unwrap();
            assert_eq!(rk.rank, 2, "{rk:?}");
            let e = f.elements_at(&p).unwrap();
            let (_, j) = fd_jacobian(&f, &p, 1e-6).unwrap();
            let jr = e.jacobian();
            for k in 0..5 {
                for mu in 0..4 {
                    assert!((j[k][mu] - jr[k][mu]).abs() < 1e-5 * (1.0 + jr[k][mu].abs()), "{k} {mu}");
                }
            }
        }
    }
}
