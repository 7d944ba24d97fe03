//! Cauchy problem for a simple wave on a simple state.
//!
//! Data `(r0, r1)` are prescribed along a spacetime curve `x = eta(s)`. The
//! free functions `a(r0)` and `Phi(r1)` of the general integral
//!
//! ```text
//! lambda(r1) . x  = Phi(r1)  + int a(xi) exp(-phi(xi, r1)) dxi
//! lambda'(r1) . x = Phi'(r1) - int a(xi) phi_r1(xi, r1) exp(-phi(xi, r1)) dxi
//! ```
//!
//! are reconstructed from the data, and the pair is then solved off the curve.
//! Integrals in `r0` are carried out in the curve parameter `s`, where
//! `a(r0(s)) r0'(s) = lambda(r1(s)) . eta'(s) exp(phi(r0(s), r1(s)))`.

mod alpha_zero;
mod characteristics;
mod pchip;

pub use alpha_zero::{alpha_zero_cauchy, AlphaZeroCauchy, AlphaZeroCurve};
pub use characteristics::{trace_characteristics, CharacteristicTrace, Crossing, TraceOptions};
pub use pchip::Cubic;

use crate::error::{Error, Result};
use crate::funcs::{pair4, CovectorFunc, Func2};
use crate::solver::quad::gauss_legendre8;
use crate::solver::{invert_monotone, solve_pair, unique_root, PairOptions, PairSystem};
use crate::types::{RiemannPair, SpacetimePoint};

/// Smallest accepted normalised transversality margin.
pub const TRANSVERSALITY_TOL: f64 = 1e-8;
/// Consecutive data samples must differ by more than this.
pub const MONOTONE_TOL: f64 = 1e-12;
/// Largest Jacobian condition number accepted inside the validity box.
pub const VALIDITY_MAX_COND: f64 = 1e10;

/// Samples of a curve with invariant data, interpolated by cubic splines
/// (Fritsch-Carlson for data where the spline would lose monotonicity).
#[derive(Debug, Clone)]
pub struct CauchyCurve {
    eta: [Cubic; 4],
    r0: Cubic,
    r1: Cubic,
}

fn check_strict(v: &[f64]) -> Result<()> {
    if v.len() < 2 {
        return Err(Error::InvalidInput("a curve needs at least two samples".into()));
    }
    let sgn = (v[1] - v[0]).signum();
    for i in 1..v.len() {
        if !(sgn * (v[i] - v[i - 1]) > MONOTONE_TOL) {
            return Err(Error::NotMonotone { index: i });
        }
    }
    Ok(())
}

/// The spline when it stays strictly monotone, otherwise the Fritsch-Carlson interpolant.
fn monotone_cubic(s: &[f64], v: Vec<f64>) -> Result<Cubic> {
    let sp = Cubic::spline(s.to_vec(), v.clone())?;
    if sp.is_strictly_monotone() { Ok(sp) } else { Cubic::pchip(s.to_vec(), v) }
}

impl CauchyCurve {
    /// `s` strictly increasing, `points[i] = (t, x, y, z)`, `r0` and `r1` strictly monotone.
    pub fn new(s: Vec<f64>, points: &[[f64; 4]], r0: Vec<f64>, r1: Vec<f64>) -> Result<Self> {
        if points.len() != s.len() || r0.len() != s.len() || r1.len() != s.len() {
            return Err(Error::InvalidInput("curve columns differ in length".into()));
        }
        check_strict(&s)?;
        check_strict(&r0)?;
        check_strict(&r1)?;
        let eta = [0, 1, 2, 3].map(|k| Cubic::spline(s.clone(), points.iter().map(|p| p[k]).collect()));
        let [e0, e1, e2, e3] = eta;
        Ok(Self { eta: [e0?, e1?, e2?, e3?], r0: monotone_cubic(&s, r0)?, r1: monotone_cubic(&s, r1)? })
    }

    /// Curve with only `r0` data; `r1` on each sample is the root in `r1_bracket`
    /// of `lambda(r1) exp(phi(r0, r1)) . deta/dr0 = 1`, the restriction `a = 1`.
    pub fn from_r0_only(
        s: Vec<f64>,
        points: &[[f64; 4]],
        r0: Vec<f64>,
        lam: &CovectorFunc,
        phi: &Func2,
        r1_bracket: (f64, f64),
    ) -> Result<Self> {
        check_strict(&r0)?;
        let provisional = Self::new(s.clone(), points, r0.clone(), (0..s.len()).map(|i| i as f64).collect())?;
        let mut r1 = Vec::with_capacity(s.len());
        for (i, &si) in s.iter().enumerate() {
            let tangent = provisional.tangent(si);
            let dr0 = provisional.r0.deriv(si);
            let f = |q: f64| pair4(lam.eval(q), tangent) / dr0 * phi.eval(r0[i], q).exp() - 1.0;
            let root = unique_root(f, r1_bracket.0, r1_bracket.1, 200, false).map_err(|e| {
                Error::Evaluation(format!("r1 at sample {i} is not determined by the restriction a = 1: {e}"))
            })?;
            r1.push(root);
        }
        Self::new(s, points, r0, r1)
    }

    pub fn params(&self) -> &[f64] {
        self.r0.knots()
    }

    pub fn len(&self) -> usize {
        self.params().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, s: f64) -> [f64; 4] {
        self.eta.each_ref().map(|p| p.eval(s))
    }

    pub fn tangent(&self, s: f64) -> [f64; 4] {
        self.eta.each_ref().map(|p| p.deriv(s))
    }

    pub fn data(&self, s: f64) -> RiemannPair {
        RiemannPair::new(self.r0.eval(s), self.r1.eval(s))
    }

    fn range(p: &Cubic) -> (f64, f64) {
        let v = p.values();
        let (a, b) = (v[0], v[v.len() - 1]);
        (a.min(b), a.max(b))
    }

    pub fn r0_range(&self) -> (f64, f64) {
        Self::range(&self.r0)
    }

    pub fn r1_range(&self) -> (f64, f64) {
        Self::range(&self.r1)
    }

    fn invert(p: &Cubic, y: f64, what: &str) -> Result<f64> {
        let (lo, hi) = Self::range(p);
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if y < lo - slack || y > hi + slack {
            return Err(Error::Evaluation(format!("{what} = {y} outside the data range [{lo}, {hi}]")));
        }
        let (a, b) = p.domain();
        invert_monotone(|s| p.eval(s), y.clamp(lo, hi), a, b)
    }

    /// Curve parameter at which the `r0` data take the value `r0`.
    pub fn s_of_r0(&self, r0: f64) -> Result<f64> {
        Self::invert(&self.r0, r0, "r0")
    }

    pub fn s_of_r1(&self, r1: f64) -> Result<f64> {
        Self::invert(&self.r1, r1, "r1")
    }
}

/// Per-sample normalised margins `|lambda^i(eta')| / (|lambda^i| |eta'|)`.
#[derive(Debug, Clone)]
pub struct TransversalityReport {
    pub margins: Vec<[f64; 2]>,
    pub min: [f64; 2],
    pub argmin: [usize; 2],
}

fn normalised(l: [f64; 4], v: [f64; 4]) -> f64 {
    let n = pair4(l, l).sqrt() * pair4(v, v).sqrt();
    if n == 0.0 { 0.0 } else { pair4(l, v).abs() / n }
}

/// Margins of both wave forms against the curve tangent at every sample.
pub fn transversality_check(
    curve: &CauchyCurve,
    lam0: impl Fn(f64, f64) -> [f64; 4],
    lam1: impl Fn(f64, f64) -> [f64; 4],
) -> TransversalityReport {
    let mut margins = Vec::with_capacity(curve.len());
    let mut min = [f64::INFINITY; 2];
    let mut argmin = [0; 2];
    for (i, &s) in curve.params().iter().enumerate() {
        let r = curve.data(s);
        let tau = curve.tangent(s);
        let m = [normalised(lam0(r.r0, r.r1), tau), normalised(lam1(r.r0, r.r1), tau)];
        for k in 0..2 {
            if m[k] < min[k] {
                min[k] = m[k];
                argmin[k] = i;
            }
        }
        margins.push(m);
    }
    TransversalityReport { margins, min, argmin }
}

/// Reconstructed free functions and the solvable implicit pair.
#[derive(Debug, Clone)]
pub struct CauchySolution {
    curve: CauchyCurve,
    lam: CovectorFunc,
    phi: Func2,
    transversality: TransversalityReport,
    validity: [(f64, f64); 4],
    on_curve_max: f64,
    pub pair: PairOptions,
}

/// Builds `a`, `Phi`, `G0` and `G1` from data on `curve` after checking both
/// solvability conditions.
pub fn build_from_curve(curve: CauchyCurve, phi: Func2, lam: CovectorFunc) -> Result<CauchySolution> {
    let tr = {
        let (l, p) = (&lam, &phi);
        transversality_check(
            &curve,
            |r0, r1| {
                let e = p.eval(r0, r1).exp();
                l.eval(r1).map(|v| v * e)
            },
            |r0, r1| {
                let a = l.eval(r1);
                let d = l.deriv(r1);
                let pr = p.d_r1(r0, r1);
                std::array::from_fn(|i| pr * a[i] + d[i])
            },
        )
    };
    for k in 0..2 {
        if !(tr.min[k] >= TRANSVERSALITY_TOL) {
            return Err(Error::NotTransversal { index: tr.argmin[k], form: k, margin: tr.min[k] });
        }
    }
    let (r0r, r1r) = (curve.r0_range(), curve.r1_range());
    let mut sol = CauchySolution {
        curve,
        lam,
        phi,
        transversality: tr,
        validity: [(0.0, 0.0); 4],
        on_curve_max: 0.0,
        pair: PairOptions { tol: 1e-12, max_cond: VALIDITY_MAX_COND, domain: Some([r0r, r1r]), ..PairOptions::default() },
    };
    let mut worst = 0.0f64;
    for &s in sol.curve.params() {
        let g = sol.on_curve_residual(s)?;
        worst = worst.max(g[0].abs()).max(g[1].abs());
    }
    sol.on_curve_max = worst;
    sol.validity = sol.discover_validity_box();
    Ok(sol)
}

impl CauchySolution {
    pub fn curve(&self) -> &CauchyCurve {
        &self.curve
    }

    pub fn transversality(&self) -> &TransversalityReport {
        &self.transversality
    }

    /// Box in `(t, x, y, z)` around the curve where the pair is solved.
    pub fn validity_box(&self) -> [(f64, f64); 4] {
        self.validity
    }

    /// Largest on-curve residual of the two relations over the samples.
    pub fn on_curve_residual_max(&self) -> f64 {
        self.on_curve_max
    }

    /// `lambda(r1(s)) . eta'(s) exp(phi(r0(s), r1(s)) - phi(r0(s), r1))`, the
    /// integrand in `s`, and the same times `phi_r1(r0(s), r1)`.
    fn kernel(&self, s: f64, r1: f64) -> (f64, f64) {
        let d = self.curve.data(s);
        let k = pair4(self.lam.eval(d.r1), self.curve.tangent(s)) * (self.phi.eval(d.r0, d.r1) - self.phi.eval(d.r0, r1)).exp();
        (k, k * self.phi.d_r1(d.r0, r1))
    }

    /// Integrals of both kernels over `s` in `[sa, sb]`, one Gauss rule per knot interval.
    fn integrals(&self, r1: f64, sa: f64, sb: f64) -> (f64, f64) {
        if sa == sb {
            return (0.0, 0.0);
        }
        let (lo, hi, sign) = if sa < sb { (sa, sb, 1.0) } else { (sb, sa, -1.0) };
        let knots = self.curve.params();
        let mut cuts = vec![lo];
        cuts.extend(knots.iter().copied().filter(|&k| k > lo && k < hi));
        cuts.push(hi);
        let mut out = (0.0, 0.0);
        for w in cuts.windows(2) {
            out.0 += gauss_legendre8(|s| self.kernel(s, r1).0, w[0], w[1]);
            out.1 += gauss_legendre8(|s| self.kernel(s, r1).1, w[0], w[1]);
        }
        (sign * out.0, sign * out.1)
    }

    fn s_first(&self) -> f64 {
        self.curve.params()[0]
    }

    /// `a(r0) = lambda(rho1(r0)) . deta/dr0 exp(phi(r0, rho1(r0)))`.
    pub fn a_fn(&self, r0: f64) -> Result<f64> {
        let s = self.curve.s_of_r0(r0)?;
        let d = self.curve.data(s);
        Ok(pair4(self.lam.eval(d.r1), self.curve.tangent(s)) / self.curve.r0.deriv(s) * self.phi.eval(r0, d.r1).exp())
    }

    /// `Phi(r1)`, with the `r0` integrals based at the first sample.
    pub fn big_phi(&self, r1: f64) -> Result<f64> {
        let s1 = self.curve.s_of_r1(r1)?;
        let eta = self.curve.point(s1);
        Ok(pair4(self.lam.eval(r1), eta) - self.integrals(r1, self.s_first(), s1).0)
    }

    pub fn big_phi_dot(&self, r1: f64) -> Result<f64> {
        let s1 = self.curve.s_of_r1(r1)?;
        let eta = self.curve.point(s1);
        Ok(pair4(self.lam.deriv(r1), eta) + self.integrals(r1, self.s_first(), s1).1)
    }

    pub fn g0(&self, r: RiemannPair) -> Result<f64> {
        let s0 = self.curve.s_of_r0(r.r0)?;
        Ok(self.big_phi(r.r1)? + self.integrals(r.r1, self.s_first(), s0).0)
    }

    pub fn g1(&self, r: RiemannPair) -> Result<f64> {
        let s0 = self.curve.s_of_r0(r.r0)?;
        Ok(self.big_phi_dot(r.r1)? - self.integrals(r.r1, self.s_first(), s0).1)
    }

    /// `[lambda . x - G0, lambda' . x - G1]`.
    pub fn residual(&self, r: RiemannPair, pt: &SpacetimePoint) -> Result<[f64; 2]> {
        let s0 = self.curve.s_of_r0(r.r0)?;
        let s1 = self.curve.s_of_r1(r.r1)?;
        let eta = self.curve.point(s1);
        let x = pt.to_array();
        let dx: [f64; 4] = std::array::from_fn(|i| x[i] - eta[i]);
        let (i0, i1) = self.integrals(r.r1, s1, s0);
        Ok([pair4(self.lam.eval(r.r1), dx) - i0, pair4(self.lam.deriv(r.r1), dx) + i1])
    }

    fn on_curve_residual(&self, s: f64) -> Result<[f64; 2]> {
        let p = self.curve.point(s);
        self.residual(self.curve.data(s), &SpacetimePoint::from_array(p))
    }

    pub(crate) fn solve_from(&self, pt: &SpacetimePoint, seed: RiemannPair) -> Result<RiemannPair> {
        Ok(solve_pair(self, pt, seed, &self.pair)?.r)
    }

    /// Solves from the nearest curve sample, walking along the segment from it if needed.
    fn solve_continued(&self, pt: &SpacetimePoint) -> Result<RiemannPair> {
        let x = pt.to_array();
        let near = self
            .curve
            .params()
            .iter()
            .copied()
            .min_by(|&a, &b| dist2(self.curve.point(a), x).total_cmp(&dist2(self.curve.point(b), x)))
            .unwrap();
        let seed = self.curve.data(near);
        match self.solve_from(pt, seed) {
            Ok(r) => Ok(r),
            Err(first) => {
                let start = self.curve.point(near);
                let mut r = seed;
                let n = 16;
                for k in 1..=n {
                    let f = k as f64 / n as f64;
                    let q: [f64; 4] = std::array::from_fn(|i| start[i] + f * (x[i] - start[i]));
                    r = self.solve_from(&SpacetimePoint::from_array(q), r).map_err(|_| first.clone())?;
                }
                Ok(r)
            }
        }
    }

    /// Solves the implicit pair at `pt`, which must lie in the validity box.
    pub fn solve(&self, pt: &SpacetimePoint) -> Result<RiemannPair> {
        let x = pt.to_array();
        for (k, &(lo, hi)) in self.validity.iter().enumerate() {
            let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
            if !(x[k] >= lo - slack && x[k] <= hi + slack) {
                return Err(Error::Evaluation(format!("point outside the validity box along axis {k}: {} not in [{lo}, {hi}]", x[k])));
            }
        }
        self.solve_continued(pt)
    }

    fn discover_validity_box(&self) -> [(f64, f64); 4] {
        let params = self.curve.params();
        let pts: Vec<[f64; 4]> = params.iter().map(|&s| self.curve.point(s)).collect();
        // the interpolated curve can bulge past the extreme samples
        let dense: Vec<[f64; 4]> = params
            .windows(2)
            .flat_map(|w| (0..8).map(move |j| w[0] + (w[1] - w[0]) * j as f64 / 8.0))
            .chain([params[params.len() - 1]])
            .map(|s| self.curve.point(s))
            .collect();
        // end samples sit on the edge of the data range, where every off-curve step can leave it
        let n = params.len();
        let stride = (n / 6).max(1);
        let probes: Vec<usize> = if n > 2 { (1..n - 1).step_by(stride).chain([n - 2]).collect() } else { vec![0, 1] };
        std::array::from_fn(|k| {
            let lo = dense.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
            let hi = dense.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
            let scale = pts.iter().flat_map(|p| p.iter()).map(|v| v.abs()).fold(0.0, f64::max).max(hi - lo).max(1.0);
            let mut good = 0.0;
            let mut seeds: Vec<[RiemannPair; 2]> = probes.iter().map(|&i| [self.curve.data(params[i]); 2]).collect();
            let mut delta = 1e-3 * scale;
            for _ in 0..12 {
                let mut ok = true;
                'probe: for (j, &i) in probes.iter().enumerate() {
                    for (m, sgn) in [-1.0, 1.0].into_iter().enumerate() {
                        let mut q = pts[i];
                        q[k] += sgn * delta;
                        match self.solve_from(&SpacetimePoint::from_array(q), seeds[j][m]) {
                            Ok(r) => seeds[j][m] = r,
                            Err(_) => {
                                ok = false;
                                break 'probe;
                            }
                        }
                    }
                }
                if !ok {
                    break;
                }
                good = delta;
                delta *= 2.0;
            }
            (lo - good, hi + good)
        })
    }
}

impl PairSystem for CauchySolution {
    fn residual(&self, r: RiemannPair, pt: &SpacetimePoint) -> Result<[f64; 2]> {
        CauchySolution::residual(self, r, pt)
    }

    /// The `r0` column is exact; `dF0/dr1 = F1`, and `dF1/dr1` is differenced
    /// one-sidedly at the ends of the `r1` data.
    fn jacobian(&self, r: RiemannPair, pt: &SpacetimePoint) -> Option<Result<[[f64; 2]; 2]>> {
        Some((|| {
            let f = CauchySolution::residual(self, r, pt)?;
            let s0 = self.curve.s_of_r0(r.r0)?;
            let (k, kp) = self.kernel(s0, r.r1);
            let dr0 = self.curve.r0.deriv(s0);
            let (lo, hi) = self.curve.r1_range();
            let h = 1e-6 * (hi - lo);
            let (a, b) = ((r.r1 - h).max(lo), (r.r1 + h).min(hi));
            let fa = CauchySolution::residual(self, RiemannPair::new(r.r0, a), pt)?[1];
            let fb = CauchySolution::residual(self, RiemannPair::new(r.r0, b), pt)?[1];
            Ok([[-k / dr0, f[1]], [kp / dr0, (fb - fa) / (b - a)]])
        })())
    }
}

fn dist2(a: [f64; 4], b: [f64; 4]) -> f64 {
    (0..4).map(|i| (a[i] - b[i]) * (a[i] - b[i])).sum()
}

/// Solves the reconstructed pair at `pt`.
pub fn solve_cauchy(sol: &CauchySolution, pt: &SpacetimePoint) -> Result<RiemannPair> {
    sol.solve(pt)
}

#[cfg(test)]
mod tests;
