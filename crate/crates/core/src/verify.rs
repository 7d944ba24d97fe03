//! Finite-difference checks of candidate solutions: Euler residuals, Jacobian
//! rank, rank-2 decomposition, involutivity, commutators and blow-up scans.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{lstsq, relative_residual, singular_values};
use crate::types::{vec3, Field, FluidState, Grid4, PhysParams, SpacetimePoint, WaveCovector};

/// Default finite-difference step for Jacobians (times the coordinate scale).
pub const DEFAULT_FD_STEP: f64 = 1e-5;
/// Default singular-value ratio below which a direction counts as null.
pub const RANK_TOL: f64 = 1e-6;
/// Residuals below this fraction of the equation's term scale count as exact.
pub const ROUNDOFF_REL: f64 = 1e-9;

pub const EQUATION_NAMES: [&str; 5] = ["momentum_x", "momentum_y", "momentum_z", "continuity", "entropy"];

/// Central-difference Jacobian `du_j / dx^mu` (rows: rho, p, v1, v2, v3; columns: t, x, y, z),
/// together with the centre state.
pub fn fd_jacobian<F: Field + ?Sized>(field: &F, pt: &SpacetimePoint, h: f64) -> Result<(FluidState, [[f64; 4]; 5])> {
    let u = field.eval(pt)?;
    let mut j = [[0.0; 4]; 5];
    for mu in 0..4 {
        let up = field.eval(&pt.shifted(mu, h))?.to_array();
        let um = field.eval(&pt.shifted(mu, -h))?.to_array();
        for k in 0..5 {
            j[k][mu] = (up[k] - um[k]) / (2.0 * h);
        }
    }
    Ok((u, j))
}

/// Residuals of the five Euler equations and the magnitudes of their terms.
#[derive(Debug, Clone, Copy)]
pub struct PointResidual {
    pub res: [f64; 5],
    pub scale: [f64; 5],
}

/// Euler residual at one point with central differences of step `h`.
pub fn euler_residual_at<F: Field + ?Sized>(field: &F, pt: &SpacetimePoint, params: &PhysParams, h: f64) -> Result<PointResidual> {
    let c = field.eval(pt)?;
    let k = params.kappa;
    let mut d = [[0.0f64; 5]; 4];
    let mut ds = [0.0f64; 4];
    for mu in 0..4 {
        let up = field.eval(&pt.shifted(mu, h))?;
        let um = field.eval(&pt.shifted(mu, -h))?;
        let a = up.to_array();
        let b = um.to_array();
        for j in 0..5 {
            d[mu][j] = (a[j] - b[j]) / (2.0 * h);
        }
        // entropy differenced directly so that constant entropy gives zero
        ds[mu] = (up.p / up.rho.powf(k) - um.p / um.rho.powf(k)) / (2.0 * h);
    }
    let (rho, p, v) = (c.rho, c.p, c.v);
    let f = params.forcing(v);
    let mut res = [0.0; 5];
    let mut vt = [0.0; 3];
    let mut adv = [0.0; 3];
    let mut gp = [0.0; 3];
    for i in 0..3 {
        vt[i] = rho * d[0][2 + i];
        adv[i] = rho * (v[0] * d[1][2 + i] + v[1] * d[2][2 + i] + v[2] * d[3][2 + i]);
        gp[i] = d[1 + i][1];
        res[i] = vt[i] + adv[i] + gp[i] - rho * f[i];
    }
    let mom_scale = [vec3::norm(vt), vec3::norm(adv), vec3::norm(gp), rho * vec3::norm(f)]
        .into_iter()
        .fold(0.0f64, f64::max);
    let rho_t = d[0][0];
    let v_grad_rho = v[0] * d[1][0] + v[1] * d[2][0] + v[2] * d[3][0];
    let div = rho * (d[1][2] + d[2][3] + d[3][4]);
    res[3] = rho_t + v_grad_rho + div;
    let cont_scale = rho_t.abs().max(v_grad_rho.abs()).max(div.abs());
    let s_t = ds[0];
    let v_grad_s = v[0] * ds[1] + v[1] * ds[2] + v[2] * ds[3];
    res[4] = s_t + v_grad_s;
    let s = p / rho.powf(k);
    let vn = vec3::norm(v);
    let grad_n = |j: usize| (d[1][j].powi(2) + d[2][j].powi(2) + d[3][j].powi(2)).sqrt();
    let expanded = s * ((d[0][1].abs() + vn * grad_n(1)) / p + k * (d[0][0].abs() + vn * grad_n(0)) / rho);
    let ent_scale = s_t.abs().max(v_grad_s.abs()).max(expanded);
    Ok(PointResidual { res, scale: [mom_scale, mom_scale, mom_scale, cont_scale, ent_scale] })
}

/// Per-equation residual norms over a grid.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub max: [f64; 5],
    /// Root-mean-square residual.
    pub l2: [f64; 5],
    /// Largest term magnitude seen for each equation.
    pub scale: [f64; 5],
    pub n_points: usize,
    pub h: f64,
    /// Observed order per equation from a run at `h / 2` (`None` where the
    /// residual is at the rounding floor).
    pub order: Option<[Option<f64>; 5]>,
}

impl ResidualReport {
    pub fn relative_max(&self) -> [f64; 5] {
        std::array::from_fn(|i| if self.scale[i] > 0.0 { self.max[i] / self.scale[i] } else { self.max[i] })
    }

    /// Whether equation `i` is satisfied to rounding at this resolution.
    pub fn is_exact(&self, i: usize) -> bool {
        self.max[i] <= ROUNDOFF_REL * self.scale[i].max(f64::MIN_POSITIVE) || self.max[i] == 0.0
    }

    /// Smallest observed order among the equations that are not exact.
    pub fn min_order(&self) -> Option<f64> {
        let o = self.order?;
        o.iter().flatten().copied().reduce(f64::min)
    }

    /// Every equation either exact or converging with at least `order`.
    pub fn converges_with(&self, order: f64) -> bool {
        match self.order {
            None => (0..5).all(|i| self.is_exact(i)),
            Some(o) => o.iter().enumerate().all(|(i, oi)| match oi {
                None => self.is_exact(i),
                Some(v) => *v >= order,
            }),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.max.iter().copied().fold(0.0, f64::max)
    }
}

/// Residual norms of the Euler equations over `grid` with step `h`.
pub fn euler_residual<F: Field + ?Sized>(field: &F, grid: &Grid4, params: &PhysParams, h: f64) -> Result<ResidualReport> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!("step h = {h}")));
    }
    let pts: Vec<PointResidual> = (0..grid.len())
        .into_par_iter()
        .map(|k| euler_residual_at(field, &grid.point(k), params, h))
        .collect::<Result<_>>()?;
    let mut max = [0.0f64; 5];
    let mut sq = [0.0f64; 5];
    let mut scale = [0.0f64; 5];
    for r in &pts {
        for i in 0..5 {
            max[i] = max[i].max(r.res[i].abs());
            sq[i] += r.res[i] * r.res[i];
            scale[i] = scale[i].max(r.scale[i]);
        }
    }
    let n = pts.len().max(1) as f64;
    Ok(ResidualReport { max, l2: sq.map(|s| (s / n).sqrt()), scale, n_points: pts.len(), h, order: None })
}

/// Residuals at `h` and `h / 2` with the observed convergence order.
pub fn euler_residual_convergence<F: Field + ?Sized>(field: &F, grid: &Grid4, params: &PhysParams, h: f64) -> Result<ResidualReport> {
    let mut coarse = euler_residual(field, grid, params, h)?;
    let fine = euler_residual(field, grid, params, 0.5 * h)?;
    let mut order = [None; 5];
    for (i, o) in order.iter_mut().enumerate() {
        if !coarse.is_exact(i) {
            *o = Some(if fine.max[i] > 0.0 { (coarse.max[i] / fine.max[i]).log2() } else { f64::INFINITY });
        }
    }
    coarse.order = Some(order);
    Ok(coarse)
}

/// Singular values and numerical rank of the field Jacobian at a point.
#[derive(Debug, Clone, Copy)]
pub struct RankReport {
    pub singular_values: [f64; 4],
    pub rank: usize,
    pub tol_ratio: f64,
}

impl RankReport {
    /// `sigma_{k+1} / sigma_1`, zero for a vanishing Jacobian.
    pub fn ratio(&self, k: usize) -> f64 {
        if self.singular_values[0] == 0.0 { 0.0 } else { self.singular_values[k] / self.singular_values[0] }
    }
}

pub fn rank_of(j: &[[f64; 4]; 5], tol_ratio: f64) -> RankReport {
    let flat: Vec<f64> = j.iter().flat_map(|r| r.iter().copied()).collect();
    let sv = singular_values(&flat, 5, 4);
    let s: [f64; 4] = [sv[0], sv[1], sv[2], sv[3]];
    let rank = if s[0] == 0.0 { 0 } else { s.iter().filter(|v| **v >= tol_ratio * s[0]).count() };
    RankReport { singular_values: s, rank, tol_ratio }
}

/// Numerical rank of `du/dx` at `pt`.
pub fn jacobian_rank<F: Field + ?Sized>(field: &F, pt: &SpacetimePoint, h: f64, tol_ratio: f64) -> Result<RankReport> {
    let (_, j) = fd_jacobian(field, pt, h)?;
    Ok(rank_of(&j, tol_ratio))
}

/// Least-squares fit `du/dx = xi gamma (x) lambda + c gamma0 (x) lambda0`.
#[derive(Debug, Clone, Copy)]
pub struct DecompositionFit {
    pub xi: f64,
    /// Weight of the inhomogeneous part (1 for an exact rank-2 wave on a state).
    pub coeff0: f64,
    pub rel_residual: f64,
}

fn outer(g: &[f64; 5], l: &WaveCovector) -> Vec<f64> {
    let la = l.to_array();
    g.iter().flat_map(|gi| la.iter().map(move |lj| gi * lj)).collect()
}

/// Fits a given Jacobian onto the two element tensors.
pub fn fit_jacobian(j: &[[f64; 4]; 5], gamma: &[f64; 5], lam: &WaveCovector, gamma0: &[f64; 5], lam0: &WaveCovector) -> Result<DecompositionFit> {
    let b: Vec<f64> = j.iter().flat_map(|r| r.iter().copied()).collect();
    let cols = vec![outer(gamma, lam), outer(gamma0, lam0)];
    let c = lstsq(&cols, &b).ok_or_else(|| Error::Singular("element tensors are linearly dependent".into()))?;
    Ok(DecompositionFit { xi: c[0], coeff0: c[1], rel_residual: relative_residual(&cols, &c, &b) })
}

/// Fits the numerical Jacobian of `field` at `pt` onto the two element tensors.
pub fn decomposition_fit<F: Field + ?Sized>(
    field: &F,
    pt: &SpacetimePoint,
    h: f64,
    gamma: &[f64; 5],
    lam: &WaveCovector,
    gamma0: &[f64; 5],
    lam0: &WaveCovector,
) -> Result<DecompositionFit> {
    let (_, j) = fd_jacobian(field, pt, h)?;
    fit_jacobian(&j, gamma, lam, gamma0, lam0)
}

/// Worst-case residuals of the involutivity conditions on a grid in `(r0, r1)`.
#[derive(Debug, Clone)]
pub struct InvolutivityReport {
    /// `d lambda0 / d r0` in span{lambda0}.
    pub res_a: f64,
    /// `d lambda0 / d r1` in span{lambda1}.
    pub res_b: f64,
    /// `d lambda1 / d r0` in span{lambda0, lambda1}.
    pub res_c: f64,
    /// Recovered `alpha_1` at every grid point.
    pub alpha1: Vec<f64>,
}

impl InvolutivityReport {
    pub fn max_residual(&self) -> f64 {
        self.res_a.max(self.res_b).max(self.res_c)
    }

    pub fn max_abs_alpha1(&self) -> f64 {
        self.alpha1.iter().fold(0.0f64, |m, a| m.max(a.abs()))
    }

    pub fn min_abs_alpha1(&self) -> f64 {
        self.alpha1.iter().fold(f64::INFINITY, |m, a| m.min(a.abs()))
    }
}

fn d4<G: Fn(f64) -> [f64; 4]>(g: G, x: f64) -> [f64; 4] {
    // fourth-order central difference
    let h = 1e-3 * x.abs().max(1.0);
    let a = g(x + 2.0 * h);
    let b = g(x + h);
    let c = g(x - h);
    let d = g(x - 2.0 * h);
    std::array::from_fn(|i| (-a[i] + 8.0 * b[i] - 8.0 * c[i] + d[i]) / (12.0 * h))
}

fn span_fit(d: [f64; 4], basis: &[[f64; 4]]) -> Result<(Vec<f64>, f64)> {
    let cols: Vec<Vec<f64>> = basis.iter().map(|b| b.to_vec()).collect();
    let c = lstsq(&cols, &d).ok_or_else(|| Error::Singular("wave forms are linearly dependent".into()))?;
    let mut r = d.to_vec();
    for (ci, col) in c.iter().zip(&cols) {
        for (ri, v) in r.iter_mut().zip(col) {
            *ri -= ci * v;
        }
    }
    let nr = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    let scale = d.iter().map(|v| v * v).sum::<f64>().sqrt().max(basis.iter().map(|b| b.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0, f64::max));
    Ok((c, if scale > 0.0 { nr / scale } else { 0.0 }))
}

/// Checks that `lambda0(r), lambda1(r)` satisfy the involutivity conditions by
/// least-squares fits of their finite-difference derivatives.
pub fn involutivity_check<L0, L1>(lam0: L0, lam1: L1, rgrid: &[(f64, f64)]) -> Result<InvolutivityReport>
where
    L0: Fn(f64, f64) -> [f64; 4] + Sync,
    L1: Fn(f64, f64) -> [f64; 4] + Sync,
{
    let per: Vec<(f64, f64, f64, f64)> = rgrid
        .par_iter()
        .map(|&(r0, r1)| {
            let l0 = lam0(r0, r1);
            let l1 = lam1(r0, r1);
            let d00 = d4(|a| lam0(a, r1), r0);
            let d01 = d4(|b| lam0(r0, b), r1);
            let d10 = d4(|a| lam1(a, r1), r0);
            let (_, ra) = span_fit(d00, &[l0])?;
            let (cb, rb) = span_fit(d01, &[l1])?;
            let (_, rc) = span_fit(d10, &[l0, l1])?;
            Ok((ra, rb, rc, cb[0]))
        })
        .collect::<Result<_>>()?;
    let mut rep = InvolutivityReport { res_a: 0.0, res_b: 0.0, res_c: 0.0, alpha1: Vec::with_capacity(per.len()) };
    for (a, b, c, al) in per {
        rep.res_a = rep.res_a.max(a);
        rep.res_b = rep.res_b.max(b);
        rep.res_c = rep.res_c.max(c);
        rep.alpha1.push(al);
    }
    Ok(rep)
}

/// Largest Lie bracket `[X, Y] = DY X - DX Y` of two vector fields on the
/// state space, evaluated at the points `surface(r0, r1)`.
#[derive(Debug, Clone, Copy)]
pub struct CommutatorReport {
    pub max_abs: f64,
    /// Bracket norm relative to `max(|DY X|, |DX Y|)`.
    pub max_rel: f64,
}

pub fn commutator_check<S, X, Y>(surface: S, x: X, y: Y, rgrid: &[(f64, f64)]) -> CommutatorReport
where
    S: Fn(f64, f64) -> [f64; 5] + Sync,
    X: Fn(&[f64; 5]) -> [f64; 5] + Sync,
    Y: Fn(&[f64; 5]) -> [f64; 5] + Sync,
{
    let directional = |f: &dyn Fn(&[f64; 5]) -> [f64; 5], u: &[f64; 5], dir: &[f64; 5]| -> [f64; 5] {
        let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n == 0.0 {
            return [0.0; 5];
        }
        let un = u.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
        let h = 1e-3 * un / n;
        let step = |s: f64| -> [f64; 5] { std::array::from_fn(|i| u[i] + s * h * dir[i]) };
        let a = f(&step(2.0));
        let b = f(&step(1.0));
        let c = f(&step(-1.0));
        let d = f(&step(-2.0));
        std::array::from_fn(|i| (-a[i] + 8.0 * b[i] - 8.0 * c[i] + d[i]) / (12.0 * h))
    };
    rgrid
        .par_iter()
        .map(|&(r0, r1)| {
            let u = surface(r0, r1);
            let xv = x(&u);
            let yv = y(&u);
            let dyx = directional(&y, &u, &xv);
            let dxy = directional(&x, &u, &yv);
            let br: f64 = (0..5).map(|i| (dyx[i] - dxy[i]).powi(2)).sum::<f64>().sqrt();
            let sc = dyx.iter().map(|v| v * v).sum::<f64>().sqrt().max(dxy.iter().map(|v| v * v).sum::<f64>().sqrt());
            (br, if sc > 0.0 { br / sc } else { 0.0 })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(CommutatorReport { max_abs: 0.0, max_rel: 0.0 }, |acc, (a, r)| CommutatorReport {
            max_abs: acc.max_abs.max(a),
            max_rel: acc.max_rel.max(r),
        })
}

/// Result of fitting `G(t) = C / (t* - t)` to the gradient history.
#[derive(Debug, Clone, Copy)]
pub struct BlowupFit {
    pub t_star: f64,
    /// Half-width of the ~95% confidence interval of `t_star`.
    pub t_star_ci: f64,
    pub c: f64,
    pub r2: f64,
}

#[derive(Debug, Clone)]
pub struct CatastropheReport {
    /// `(t, max |du/dx|)` per time; `None` where evaluation failed.
    pub samples: Vec<(f64, Option<f64>)>,
    pub fit: Option<BlowupFit>,
}

/// Minimum coefficient of determination of an accepted blow-up fit.
pub const BLOWUP_MIN_R2: f64 = 0.98;
const BLOWUP_TAIL: usize = 10;

/// Max over the spatial points of the Frobenius norm of the spatial Jacobian.
pub fn max_spatial_gradient<F: Field + ?Sized>(field: &F, points: &[[f64; 3]], t: f64, h: f64) -> Result<f64> {
    let vals: Vec<f64> = points
        .par_iter()
        .map(|x| {
            let pt = SpacetimePoint::new(t, *x);
            let mut s = 0.0;
            for mu in 1..4 {
                let a = field.eval(&pt.shifted(mu, h))?.to_array();
                let b = field.eval(&pt.shifted(mu, -h))?.to_array();
                for k in 0..5 {
                    s += ((a[k] - b[k]) / (2.0 * h)).powi(2);
                }
            }
            Ok(s.sqrt())
        })
        .collect::<Result<_>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

/// Fits `1/G = (t* - t)/C` by linear regression over the last samples.
pub fn fit_blowup(samples: &[(f64, f64)]) -> Option<BlowupFit> {
    let tail: Vec<(f64, f64)> = samples.iter().rev().take(BLOWUP_TAIL).rev().copied().collect();
    let n = tail.len();
    if n < 4 {
        return None;
    }
    let nf = n as f64;
    let xs: Vec<f64> = tail.iter().map(|s| s.0).collect();
    let ys: Vec<f64> = tail.iter().map(|s| 1.0 / s.1).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 || syy <= 1e-24 * my * my * nf {
        return None;
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    if !(slope < 0.0) {
        return None;
    }
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum();
    let r2 = 1.0 - sse / syy;
    if !(r2 >= BLOWUP_MIN_R2) {
        return None;
    }
    let t_star = -icpt / slope;
    if !(t_star > *xs.last()?) {
        return None;
    }
    // delta-method error of -icpt/slope
    let s2 = if n > 2 { sse / (nf - 2.0) } else { 0.0 };
    let var_b = s2 / sxx;
    let var_a = s2 * (1.0 / nf + mx * mx / sxx);
    let cov_ab = -mx * s2 / sxx;
    let ga = -1.0 / slope;
    let gb = icpt / (slope * slope);
    let var_t = ga * ga * var_a + gb * gb * var_b + 2.0 * ga * gb * cov_ab;
    Some(BlowupFit { t_star, t_star_ci: 2.0 * var_t.max(0.0).sqrt(), c: -1.0 / slope, r2 })
}

/// Gradient history over `t_list` and the blow-up time fitted to its tail.
/// Times at which evaluation fails are recorded and skipped.
pub fn catastrophe_scan<F: Field + ?Sized>(field: &F, points: &[[f64; 3]], t_list: &[f64], h: f64) -> CatastropheReport {
    let samples: Vec<(f64, Option<f64>)> = t_list
        .iter()
        .map(|&t| (t, max_spatial_gradient(field, points, t, h).ok().filter(|g| g.is_finite())))
        .collect();
    let finite: Vec<(f64, f64)> = samples.iter().filter_map(|(t, g)| g.map(|g| (*t, g))).collect();
    let fit = fit_blowup(&finite);
    CatastropheReport { samples, fit }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::make_grid;

    fn free() -> PhysParams {
        PhysParams::new(1.4, [0.0; 3], [0.0; 3]).unwrap()
    }

    fn small_grid() -> Grid4 {
        make_grid([(0.0, 0.5), (-1.0, 1.0), (0.0, 0.0), (0.0, 1.0)], [3, 5, 1, 4]).unwrap()
    }

    #[test]
    fn constant_state_is_exact() {
        let f = |_: &SpacetimePoint| FluidState::new(1.0, 2.0, [0.3, 0.0, -0.1]);
        let r = euler_residual_convergence(&f, &small_grid(), &free(), 1e-2).unwrap();
        assert_eq!(r.max_abs(), 0.0);
        assert!(r.converges_with(1.8));
        let rk = jacobian_rank(&f, &SpacetimePoint::new(0.0, [0.0; 3]), 1e-5, RANK_TOL).unwrap();
        assert_eq!(rk.rank, 0);
    }

    #[test]
    fn hydrostatic_column_converges() {
        // isothermal atmosphere: p = rho = exp(-g z), g pointing down
        let g = 2.0;
        let p = PhysParams::new(1.0, [0.0, 0.0, -g], [0.0; 3]).unwrap();
        let f = move |pt: &SpacetimePoint| {
            let r = (-g * pt.x[2]).exp();
            FluidState::new(r, r, [0.0; 3])
        };
        let rep = euler_residual_convergence(&f, &small_grid(), &p, 2e-2).unwrap();
        let o = rep.min_order().unwrap();
        assert!((o - 2.0).abs() < 0.2, "order {o}");
        let rk = jacobian_rank(&f, &SpacetimePoint::new(0.0, [0.0, 0.0, 0.3]), 1e-5, RANK_TOL).unwrap();
        assert_eq!(rk.rank, 1);
    }

    #[test]
    fn scaled_pressure_breaks_momentum_only() {
        let g = 2.0;
        let p = PhysParams::new(1.0, [0.0, 0.0, -g], [0.0; 3]).unwrap();
        let f = move |pt: &SpacetimePoint| {
            let r = (-g * pt.x[2]).exp();
            FluidState::new(r, 1.01 * r, [0.0; 3])
        };
        let rep = euler_residual(&f, &small_grid(), &p, 1e-4).unwrap();
        assert!(rep.max[2] > 1e-3);
        assert_eq!(rep.max[3], 0.0);
    }

    #[test]
    fn decomposition_of_synthetic_rank_two_field() {
        // u = f(r0, r1) with r0 = lam0.x and r1 = lam1.x
        let l0 = WaveCovector::new(0.3, [1.0, 0.0, 0.5]);
        let l1 = WaveCovector::new(-1.0, [0.0, 2.0, 0.0]);
        let f = move |pt: &SpacetimePoint| {
            let a = l0.apply(pt);
            let b = l1.apply(pt);
            FluidState::new(2.0 + a.sin() * 0.5, 3.0 + a, [b.sin(), 0.1 * b, a])
        };
        let pt = SpacetimePoint::new(0.1, [0.2, 0.3, 0.4]);
        let a = l0.apply(&pt);
        let b = l1.apply(&pt);
        let g0 = [0.5 * a.cos(), 1.0, 0.0, 0.0, 1.0];
        let g1 = [0.0, 0.0, b.cos(), 0.1, 0.0];
        let fit = decomposition_fit(&f, &pt, 1e-5, &g1, &l1, &g0, &l0).unwrap();
        assert!(fit.rel_residual < 1e-6);
        assert!((fit.coeff0 - 1.0).abs() < 1e-6);
        assert!((fit.xi - 1.0).abs() < 1e-6);
        let rk = jacobian_rank(&f, &pt, 1e-5, RANK_TOL).unwrap();
        assert_eq!(rk.rank, 2);
        // wrong-family covector: fit fails visibly
        let bad = decomposition_fit(&f, &pt, 1e-5, &g1, &WaveCovector::new(0.0, [0.0, 0.0, 1.0]), &g0, &l0).unwrap();
        assert!(bad.rel_residual > 1e-2);
        assert!(fit_jacobian(&[[0.0; 4]; 5], &g0, &l0, &g0, &l0).is_err());
    }

    #[test]
    fn involutivity_of_alpha_nonzero_construction() {
        let lam = |r1: f64| [r1.cos(), r1.sin(), 1.0, 0.2 * r1];
        let dlam = |r1: f64| [-r1.sin(), r1.cos(), 0.0, 0.2];
        let phi = |r0: f64, r1: f64| 0.3 * r0 * r1 + 0.1 * r0 * r0;
        let phi1 = |r0: f64, _r1: f64| 0.3 * r0;
        let l0 = move |r0: f64, r1: f64| lam(r1).map(|v| v * phi(r0, r1).exp());
        let l1 = move |r0: f64, r1: f64| {
            let a = lam(r1);
            let b = dlam(r1);
            std::array::from_fn(|i| phi1(r0, r1) * a[i] + b[i])
        };
        let grid: Vec<(f64, f64)> = (0..5).flat_map(|i| (0..5).map(move |j| (0.2 * i as f64, 0.3 * j as f64 - 0.6))).collect();
        let rep = involutivity_check(l0, l1, &grid).unwrap();
        assert!(rep.max_residual() < 1e-7, "{rep:?}");
        assert!(rep.min_abs_alpha1() > 0.1);
    }

    #[test]
    fn involutivity_alpha_zero_and_negative_control() {
        let c = [1.0, 0.0, 0.5, 0.0];
        let l0 = move |r0: f64, _r1: f64| c.map(|v| v * (0.4 * r0).exp());
        let l1 = move |r0: f64, r1: f64| [r0 * r1 + 1.0, r1, 0.5 * r0 * r1, 1.0];
        let grid: Vec<(f64, f64)> = (0..4).flat_map(|i| (0..4).map(move |j| (0.25 * i as f64, 0.25 * j as f64))).collect();
        let rep = involutivity_check(l0, l1, &grid).unwrap();
        assert!(rep.max_abs_alpha1() < 1e-7);
        assert!(rep.max_residual() < 1e-7);
        let r0f = |r0: f64, r1: f64| [r0.sin() + r1, r1 * r1, r0 * r0 * r1, 1.0 + r0];
        let r1f = |r0: f64, r1: f64| [r1.cos(), r0, 1.0, r0 * r1];
        let bad = involutivity_check(r0f, r1f, &[(0.3, 0.7), (0.5, 0.2)]).unwrap();
        assert!(bad.max_residual() > 1e-2);
    }

    #[test]
    fn commutator_of_polar_coordinate_fields() {
        let surface = |r: f64, th: f64| [r * th.cos(), r * th.sin(), 1.0, 0.0, 0.0];
        let dr = |u: &[f64; 5]| {
            let n = (u[0] * u[0] + u[1] * u[1]).sqrt();
            [u[0] / n, u[1] / n, 0.0, 0.0, 0.0]
        };
        let dth = |u: &[f64; 5]| [-u[1], u[0], 0.0, 0.0, 0.0];
        let grid: Vec<(f64, f64)> = (1..5).flat_map(|i| (0..5).map(move |j| (0.5 * i as f64, 0.7 * j as f64))).collect();
        let rep = commutator_check(surface, dr, dth, &grid);
        assert!(rep.max_abs < 1e-9, "{rep:?}");
        // rescaling by a function that varies along d/dr breaks the bracket
        let scaled = |u: &[f64; 5]| {
            let c = 1.0 + u[0] * u[0] + u[1] * u[1];
            [-c * u[1], c * u[0], 0.0, 0.0, 0.0]
        };
        let bad = commutator_check(surface, dr, scaled, &grid);
        assert!(bad.max_abs > 1e-2);
    }

    #[test]
    fn blowup_fit_recovers_pole() {
        let ts: Vec<f64> = (0..30).map(|i| 0.9 * 2.0 * i as f64 / 29.0).collect();
        let s: Vec<(f64, f64)> = ts.iter().map(|t| (*t, 3.0 / (2.0 - t))).collect();
        let f = fit_blowup(&s).unwrap();
        assert!((f.t_star - 2.0).abs() < 1e-10);
        assert!((f.c - 3.0).abs() < 1e-9);
        // bounded, decaying gradient: no blow-up
        let d: Vec<(f64, f64)> = ts.iter().map(|t| (*t, 3.0 / (2.0 + t))).collect();
        assert!(fit_blowup(&d).is_none());
        let c: Vec<(f64, f64)> = ts.iter().map(|t| (*t, 5.0)).collect();
        assert!(fit_blowup(&c).is_none());
    }

    #[test]
    fn stationary_field_has_constant_gradient() {
        let f = |pt: &SpacetimePoint| FluidState::new(2.0 + pt.x[0].sin(), 1.0, [0.0; 3]);
        let pts = [[0.1, 0.0, 0.0], [0.5, 0.0, 0.0]];
        let rep = catastrophe_scan(&f, &pts, &[0.0, 1.0, 2.0, 3.0, 4.0], 1e-5);
        let g0 = rep.samples[0].1.unwrap();
        assert!(rep.samples.iter().all(|(_, g)| (g.unwrap() - g0).abs() < 1e-12));
        assert!(rep.fit.is_none());
    }

    #[test]
    fn failed_times_are_skipped() {
        let f = |pt: &SpacetimePoint| {
            if pt.t > 1.5 {
                Err(Error::Evaluation("past the pole".into()))
            } else {
                FluidState::new(1.0 + 0.1 * pt.x[0] / (2.0 - pt.t), 1.0, [0.0; 3])
            }
        };
        let rep = catastrophe_scan(&f, &[[0.0; 3]], &[0.0, 1.0, 2.0], 1e-5);
        assert!(rep.samples[2].1.is_none());
        assert!(rep.samples[1].1.is_some());
    }
}
