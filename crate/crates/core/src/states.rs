//! Rank-1 simple states: closed-form fields whose state depends on a single
//! linear phase `r0 = lam0 t + lam . x`.

use std::fmt;
use std::str::FromStr;

use crate::elements::Sign;
use crate::error::{Error, Result};
use crate::funcs::Func1;
use crate::solver::{quad_gauss, solve_scalar_newton, ScalarProblem};
use crate::types::{vec3, Field, FluidState, Grid4, PhysParams, SpacetimePoint, Vec3, WaveCovector};
use crate::verify::{euler_residual_convergence, ResidualReport};

const CONSTRAINT_TOL: f64 = 1e-10;
/// Relative band around `kappa = 1` inside which the logarithmic branch is used.
pub const KAPPA_ONE_BAND: f64 = 1e-12;
const STATE_QUAD_TOL: f64 = 1e-13;

/// Which root of a two-branch scalar relation to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootBranch {
    Low,
    High,
}

impl FromStr for RootBranch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "low" | "Low" | "-" => Ok(Self::Low),
            "high" | "High" | "+" => Ok(Self::High),
            _ => Err(Error::Config(format!("unknown root branch '{s}' (expected low or high)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    E0GdotONonzero,
    E0GdotOZero,
    A0LamCrossONonzero,
    A0LamParallelO,
    H0Row1,
    H0Row2,
    H0Row3,
}

impl StateKind {
    pub const ALL: [StateKind; 7] = [
        Self::E0GdotONonzero,
        Self::E0GdotOZero,
        Self::A0LamCrossONonzero,
        Self::A0LamParallelO,
        Self::H0Row1,
        Self::H0Row2,
        Self::H0Row3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::E0GdotONonzero => "E0_gdotO_nonzero",
            Self::E0GdotOZero => "E0_gdotO_zero",
            Self::A0LamCrossONonzero => "A0_lam_cross_O_nonzero",
            Self::A0LamParallelO => "A0_lam_parallel_O",
            Self::H0Row1 => "H0_row1",
            Self::H0Row2 => "H0_row2",
            Self::H0Row3 => "H0_row3",
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown state row '{s}'")))
    }
}

/// Free profile functions of the entropic states.
#[derive(Clone)]
pub struct E0Profiles {
    pub p: Func1,
    pub rho_hat: Func1,
    /// Velocity amplitude along `Omega` (second entropic row only).
    pub nu: Func1,
}

impl E0Profiles {
    /// `p = p0 e^{alpha r0}`, `rho = dp/dr0`, `nu = 0`.
    pub fn exponential(p0: f64, alpha: f64) -> Self {
        Self { p: Func1::exp(p0, alpha), rho_hat: Func1::exp(p0 * alpha, alpha), nu: Func1::constant(0.0) }
    }

    /// Density taken as the derivative of the given pressure profile.
    pub fn from_pressure(p: Func1, nu: Func1) -> Self {
        let q = p.clone();
        Self { rho_hat: Func1::new(move |r| q.deriv(r)), p, nu }
    }
}

impl fmt::Debug for E0Profiles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E0Profiles {{ p: {}, rho_hat: {}, nu: {} }}", self.p.label(), self.rho_hat.label(), self.nu.label())
    }
}

/// Constants of the first hydrodynamic row (implicit density).
#[derive(Debug, Clone)]
pub struct H0Row1Consts {
    pub a: f64,
    pub a1: f64,
    pub b1: f64,
    pub t1: f64,
    pub c0: f64,
    pub c: Vec3,
    /// Density at `r0 = 0`.
    pub rho0: f64,
    /// Sign in front of the quadrature; must equal `sign(g.c - T1)`.
    pub branch: Sign,
    /// Density interval on which the relation is inverted.
    pub rho_range: (f64, f64),
}

#[derive(Debug, Clone)]
pub enum StateRow {
    E0GdotONonzero { v0: Vec3, profiles: E0Profiles },
    E0GdotOZero { a_vec: Vec3, profiles: E0Profiles },
    A0LamCrossONonzero { c: Vec3, b0: f64, rho0: f64, p0: f64, eps: Sign },
    A0LamParallelO { rho0: f64, p0: f64, a1: f64, b1: f64, c0: f64, eps: Sign, eps1: Sign },
    H0Row1(H0Row1Consts),
    H0Row2 { rho0: f64, p0: f64, a1: f64, b1: f64, c0: f64, b0: f64, eps1: Sign },
    /// `rho0` here is the additive constant of the implicit relation.
    H0Row3 { a: f64, a1: f64, b1: f64, c0: f64, k: f64, rho0: f64, eps1: Sign, branch: RootBranch },
}

impl StateRow {
    pub fn kind(&self) -> StateKind {
        match self {
            Self::E0GdotONonzero { .. } => StateKind::E0GdotONonzero,
            Self::E0GdotOZero { .. } => StateKind::E0GdotOZero,
            Self::A0LamCrossONonzero { .. } => StateKind::A0LamCrossONonzero,
            Self::A0LamParallelO { .. } => StateKind::A0LamParallelO,
            Self::H0Row1(_) => StateKind::H0Row1,
            Self::H0Row2 { .. } => StateKind::H0Row2,
            Self::H0Row3 { .. } => StateKind::H0Row3,
        }
    }
}

#[derive(Debug, Clone)]
struct Row1Cache {
    n: Vec3,
    gc: f64,
    gn: f64,
    go: f64,
    r0_range: (f64, f64),
    /// `(rho, r0, int rho dr0)` on a uniform density mesh; quadratures start at the nearest node.
    nodes: Vec<[f64; 3]>,
}

const ROW1_PANELS: usize = 256;

#[derive(Debug, Clone)]
struct Row3Cache {
    gabs: f64,
    eps2: f64,
    rho_sonic: f64,
}

/// A simple-state field `u(t, x) = U(r0(t, x))`.
#[derive(Debug, Clone)]
pub struct StateField {
    row: StateRow,
    params: PhysParams,
    phase: WaveCovector,
    row1: Option<Row1Cache>,
    row3: Option<Row3Cache>,
}

fn near_zero(x: f64, scale: f64) -> bool {
    x.abs() <= CONSTRAINT_TOL * scale.max(1.0)
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond { Ok(()) } else { Err(Error::Constraint(msg.into())) }
}

fn require_unit(v: Vec3, name: &str) -> Result<()> {
    require((vec3::norm(v) - 1.0).abs() <= CONSTRAINT_TOL, format!("|{name}| must be 1, got {}", vec3::norm(v)))
}

fn positive(x: f64, name: &str) -> Result<()> {
    require(x > 0.0 && x.is_finite(), format!("{name} must be positive, got {x}"))
}

fn is_kappa_one(k: f64) -> bool {
    (k - 1.0).abs() <= KAPPA_ONE_BAND
}

impl StateField {
    /// Checks the row constraints and fixes the phase covector.
    pub fn new(row: StateRow, params: PhysParams) -> Result<Self> {
        let g = params.g_vec;
        let om = params.omega_vec;
        let kappa = params.kappa;
        let gn = vec3::norm(g);
        let on = vec3::norm(om);
        let mut row1 = None;
        let mut row3 = None;
        let phase = match &row {
            StateRow::E0GdotONonzero { v0, .. } => {
                require(!near_zero(vec3::dot(g, om), gn * on), "g . Omega must be nonzero for this row")?;
                let lam = params.forcing(*v0);
                require(vec3::norm(lam) > CONSTRAINT_TOL * gn.max(1.0), "g must differ from Omega x v0")?;
                WaveCovector::new(-vec3::dot(*v0, g), lam)
            }
            StateRow::E0GdotOZero { a_vec, .. } => {
                require(near_zero(vec3::dot(g, om), gn * on), "g . Omega must vanish for this row")?;
                require(near_zero(vec3::dot(*a_vec, om), vec3::norm(*a_vec) * on), "A . Omega must vanish")?;
                let lam = params.forcing(*a_vec);
                require(vec3::norm(lam) > CONSTRAINT_TOL * gn.max(1.0), "g must differ from Omega x A")?;
                WaveCovector::new(-vec3::dot(*a_vec, g), lam)
            }
            StateRow::A0LamCrossONonzero { c, rho0, p0, eps, .. } => {
                positive(*rho0, "rho0")?;
                positive(*p0, "p0")?;
                require_unit(*c, "c")?;
                require_unit(om, "Omega")?;
                require(near_zero(vec3::dot(*c, om), 1.0), "c . Omega must vanish")?;
                require(!near_zero(vec3::dot(g, om), gn), "g . Omega must be nonzero for this row")?;
                let s = kappa * p0 / rho0;
                WaveCovector::new(eps.value() * s.sqrt() - vec3::dot(g, vec3::cross(om, *c)), *c)
            }
            StateRow::A0LamParallelO { rho0, p0, a1, c0, eps1, .. } => {
                positive(*rho0, "rho0")?;
                positive(*p0, "p0")?;
                require_unit(om, "Omega")?;
                require(near_zero(vec3::dot(g, om), gn), "g . Omega must vanish for this row")?;
                require(*a1 != 0.0, "A1 must be nonzero")?;
                WaveCovector::new(*c0, vec3::scale(eps1.value(), om))
            }
            StateRow::H0Row1(k) => {
                positive(k.a, "A")?;
                positive(k.rho0, "rho0")?;
                require(k.a1 != 0.0, "a1 must be nonzero")?;
                require_unit(k.c, "c")?;
                require_unit(om, "Omega")?;
                require(near_zero(vec3::dot(k.c, om), 1.0), "c . Omega must vanish")?;
                require(!near_zero(vec3::dot(g, om), gn), "g . Omega must be nonzero for this row")?;
                let n = vec3::cross(k.c, om);
                let gc = vec3::dot(g, k.c);
                let w0 = gc - k.t1;
                require(w0 != 0.0, "T1 must differ from g . c")?;
                require(
                    Sign::from_value(w0.signum())? == k.branch,
                    format!("branch must equal sign(g . c - T1) = {}", w0.signum()),
                )?;
                let (lo, hi) = k.rho_range;
                require(lo > 0.0 && lo < k.rho0 && k.rho0 < hi && hi.is_finite(), "rho_range must bracket rho0 inside (0, inf)")?;
                let mut cache = Row1Cache { n, gc, gn: vec3::dot(g, n), go: vec3::dot(g, om), r0_range: (0.0, 0.0), nodes: vec![] };
                let mut probe = StateField {
                    row: row.clone(),
                    params: params.clone(),
                    phase: WaveCovector::new(k.c0, k.c),
                    row1: Some(cache.clone()),
                    row3: None,
                };
                let e0 = probe.row1_eprime(k.rho0).signum();
                for i in 0..=64 {
                    let r = lo + (hi - lo) * i as f64 / 64.0;
                    let q = probe.row1_q(r);
                    let e = probe.row1_eprime(r);
                    require(q > 0.0, format!("the implicit density relation has a turning point near rho = {r}"))?;
                    require(e.signum() == e0 && e != 0.0, format!("the flow becomes sonic near rho = {r}"))?;
                }
                // cumulative panel integrals from lo, then shifted to vanish at rho0
                let mut nodes = vec![[lo, 0.0, 0.0]];
                for i in 1..=ROW1_PANELS {
                    let [r, a, b] = nodes[i - 1];
                    let r1 = if i == ROW1_PANELS { hi } else { lo + (hi - lo) * i as f64 / ROW1_PANELS as f64 };
                    let da = quad_gauss(|x| probe.row1_drdrho(x), r, r1, STATE_QUAD_TOL)?;
                    let db = quad_gauss(|x| x * probe.row1_drdrho(x), r, r1, STATE_QUAD_TOL)?;
                    nodes.push([r1, a + da, b + db]);
                }
                let j = ((k.rho0 - lo) / (hi - lo) * ROW1_PANELS as f64).floor() as usize;
                let [rj, aj, bj] = nodes[j];
                let a0 = aj + quad_gauss(|x| probe.row1_drdrho(x), rj, k.rho0, STATE_QUAD_TOL)?;
                let b0 = bj + quad_gauss(|x| x * probe.row1_drdrho(x), rj, k.rho0, STATE_QUAD_TOL)?;
                for n in &mut nodes {
                    n[1] -= a0;
                    n[2] -= b0;
                }
                let (a, b) = (nodes[0][1], nodes[ROW1_PANELS][1]);
                cache.r0_range = (a.min(b), a.max(b));
                cache.nodes = nodes;
                probe.row1 = Some(cache);
                row1 = probe.row1.take();
                WaveCovector::new(k.c0, k.c)
            }
            StateRow::H0Row2 { rho0, p0, a1, c0, b0, eps1, .. } => {
                positive(*rho0, "rho0")?;
                positive(*p0, "p0")?;
                require_unit(om, "Omega")?;
                require(near_zero(vec3::dot(g, om), gn), "g . Omega must vanish for this row")?;
                require(*a1 != 0.0, "A1 must be nonzero")?;
                require(c0 + eps1.value() * b0 != 0.0, "B0 must differ from -eps1 c0")?;
                WaveCovector::new(*c0, vec3::scale(eps1.value(), om))
            }
            StateRow::H0Row3 { a, k, c0, eps1, .. } => {
                positive(*a, "A")?;
                require(*k != 0.0 && k.is_finite(), "K must be nonzero")?;
                require(vec3::norm(vec3::sub(om, [0.0, 0.0, 1.0])) <= CONSTRAINT_TOL, "Omega must be e3 for this row")?;
                require(g[2] != 0.0 && near_zero(g[0].hypot(g[1]), g[2].abs()), "g must be parallel to Omega")?;
                row3 = Some(Row3Cache {
                    gabs: g[2].abs(),
                    eps2: g[2].signum(),
                    rho_sonic: (k * k / (kappa * a)).powf(1.0 / (kappa + 1.0)),
                });
                WaveCovector::new(*c0, [0.0, 0.0, eps1.value()])
            }
        };
        Ok(Self { row, params, phase, row1, row3 })
    }

    pub fn kind(&self) -> StateKind {
        self.row.kind()
    }

    pub fn row(&self) -> &StateRow {
        &self.row
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    /// The covector `(lam0, lam)` of the phase.
    pub fn phase(&self) -> WaveCovector {
        self.phase
    }

    pub fn r0(&self, pt: &SpacetimePoint) -> f64 {
        self.phase.apply(pt)
    }

    /// Range of `r0` covered by the density interval (implicit rows only).
    pub fn r0_range(&self) -> Option<(f64, f64)> {
        self.row1.as_ref().map(|c| c.r0_range)
    }

    /// State as a function of the phase.
    pub fn state_at(&self, r0: f64) -> Result<FluidState> {
        let g = self.params.g_vec;
        let om = self.params.omega_vec;
        let kappa = self.params.kappa;
        match &self.row {
            StateRow::E0GdotONonzero { v0, profiles } => FluidState::new(profiles.rho_hat.eval(r0), profiles.p.eval(r0), *v0),
            StateRow::E0GdotOZero { a_vec, profiles } => FluidState::new(
                profiles.rho_hat.eval(r0),
                profiles.p.eval(r0),
                vec3::add(vec3::scale(profiles.nu.eval(r0), om), *a_vec),
            ),
            StateRow::A0LamCrossONonzero { c, b0, rho0, p0, eps } => {
                let s = kappa * p0 / rho0;
                let go = vec3::dot(g, om);
                let v = vec3::combine3(
                    vec3::dot(g, vec3::cross(om, *c)),
                    *c,
                    eps.value() * go * r0 / s.sqrt() + b0,
                    om,
                    vec3::dot(g, *c),
                    vec3::cross(*c, om),
                );
                FluidState::new(*rho0, *p0, v)
            }
            StateRow::A0LamParallelO { rho0, p0, a1, b1, c0, eps, eps1 } => {
                let s = kappa * p0 / rho0;
                let th = -eps.value() * r0 / s.sqrt() + b1;
                let v = vec3::combine3(
                    a1 * th.cos(),
                    g,
                    eps1.value() * (eps.value() * s.sqrt() - c0),
                    om,
                    1.0 - a1 * th.sin(),
                    vec3::cross(g, om),
                );
                FluidState::new(*rho0, *p0, v)
            }
            StateRow::H0Row1(k) => {
                let c = self.row1.as_ref().expect("row cache");
                let rho = self.row1_rho(r0)?;
                let int_rho = self.row1_int_rho(rho)?;
                let v1 = 1.0 / (k.a1 * rho) - k.c0;
                let v2 = c.go * k.a1 * int_rho + k.b1;
                let v3 = (c.gn - k.c0) * k.a1 * int_rho + r0 + k.t1;
                FluidState::new(rho, k.a * rho.powf(kappa), vec3::combine3(v1, k.c, v2, om, v3, c.n))
            }
            StateRow::H0Row2 { rho0, p0, a1, b1, c0, b0, eps1 } => {
                let th = b1 - r0 / (c0 + eps1.value() * b0);
                let v = vec3::combine3(a1 * th.cos(), g, *b0, om, 1.0 - a1 * th.sin(), vec3::cross(g, om));
                FluidState::new(*rho0, *p0, v)
            }
            StateRow::H0Row3 { a, a1, b1, c0, k, eps1, .. } => {
                let c = self.row3.as_ref().expect("row cache");
                let rho = self.row3_rho(r0)?;
                let th = b1 + eps1.value() * c.eps2 / (k * c.gabs) * (a * rho.powf(kappa) + k * k / rho);
                let v = [a1 * th.cos(), -a1 * th.sin(), eps1.value() * (k / rho - c0)];
                FluidState::new(rho, a * rho.powf(kappa), v)
            }
        }
    }

    fn row1_consts(&self) -> &H0Row1Consts {
        match &self.row {
            StateRow::H0Row1(k) => k,
            _ => unreachable!("not the first hydrodynamic row"),
        }
    }

    fn row1_eprime(&self, r: f64) -> f64 {
        let k = self.row1_consts();
        let kappa = self.params.kappa;
        kappa * k.a * r.powf(kappa - 2.0) - r.powi(-3) / (k.a1 * k.a1)
    }

    fn row1_q(&self, r: f64) -> f64 {
        let k = self.row1_consts();
        let c = self.row1.as_ref().expect("row cache");
        let kappa = self.params.kappa;
        let f = if is_kappa_one(kappa) {
            2.0 * k.a * (r / k.rho0).ln()
        } else {
            2.0 * kappa * k.a / (kappa - 1.0) * (r.powf(kappa - 1.0) - k.rho0.powf(kappa - 1.0))
        };
        let ia2 = 1.0 / (k.a1 * k.a1);
        (k.t1 - c.gc).powi(2)
            - f
            - ia2 * (r.powi(-2) - k.rho0.powi(-2))
            - 2.0 * (c.gn - k.c0) * (k.a1 * k.a * (r.powf(kappa) - k.rho0.powf(kappa)) + (1.0 / r - 1.0 / k.rho0) / k.a1)
    }

    fn row1_drdrho(&self, r: f64) -> f64 {
        self.row1_consts().branch.value() * self.row1_eprime(r) / self.row1_q(r).sqrt()
    }

    fn row1_node(&self, rho: f64) -> [f64; 3] {
        let nodes = &self.row1.as_ref().expect("row cache").nodes;
        let (lo, hi) = self.row1_consts().rho_range;
        let i = ((rho - lo) / (hi - lo) * ROW1_PANELS as f64).round();
        nodes[i.clamp(0.0, ROW1_PANELS as f64) as usize]
    }

    fn row1_r0(&self, rho: f64) -> Result<f64> {
        let [r, a, _] = self.row1_node(rho);
        Ok(a + quad_gauss(|x| self.row1_drdrho(x), r, rho, STATE_QUAD_TOL)?)
    }

    fn row1_int_rho(&self, rho: f64) -> Result<f64> {
        let [r, _, b] = self.row1_node(rho);
        Ok(b + quad_gauss(|x| x * self.row1_drdrho(x), r, rho, STATE_QUAD_TOL)?)
    }

    fn row1_rho(&self, r0: f64) -> Result<f64> {
        let c = self.row1.as_ref().expect("row cache");
        let (a, b) = c.r0_range;
        if !(r0 >= a && r0 <= b) {
            return Err(Error::NoBracket { lo: a, hi: b });
        }
        // r0 is monotone in rho, so the panel holding the root is found by bisection on the nodes
        let up = c.nodes[ROW1_PANELS][1] > c.nodes[0][1];
        let i = c.nodes.partition_point(|n| (n[1] < r0) == up).clamp(1, ROW1_PANELS);
        let (lo, hi) = (c.nodes[i - 1][0], c.nodes[i][0]);
        let f = |r: f64| self.row1_r0(r).map(|v| v - r0).unwrap_or(f64::NAN);
        let p = ScalarProblem::new(f, lo, hi).tolerances(1e-15, 2.0 * f64::EPSILON);
        solve_scalar_newton(&p, &|r| self.row1_drdrho(r))
    }

    fn row3_h(&self, rho: f64) -> f64 {
        let StateRow::H0Row3 { a, k, .. } = &self.row else { unreachable!() };
        let kappa = self.params.kappa;
        let base = if is_kappa_one(kappa) { a * rho.ln() } else { kappa * a / (kappa - 1.0) * rho.powf(kappa - 1.0) };
        base + k * k / (2.0 * rho * rho)
    }

    fn row3_dh(&self, rho: f64) -> f64 {
        let StateRow::H0Row3 { a, k, .. } = &self.row else { unreachable!() };
        let kappa = self.params.kappa;
        kappa * a * rho.powf(kappa - 2.0) - k * k / rho.powi(3)
    }

    /// Phase reproduced by a density on the third hydrodynamic row.
    pub fn row3_phase_of(&self, rho: f64) -> Option<f64> {
        let StateRow::H0Row3 { rho0, eps1, .. } = &self.row else { return None };
        let c = self.row3.as_ref()?;
        Some(eps1.value() * c.eps2 / c.gabs * self.row3_h(rho) + rho0)
    }

    fn row3_rho(&self, r0: f64) -> Result<f64> {
        let StateRow::H0Row3 { rho0, eps1, branch, .. } = &self.row else { unreachable!() };
        let c = self.row3.as_ref().expect("row cache");
        let target = eps1.value() * c.eps2 * c.gabs * (r0 - rho0);
        let rs = c.rho_sonic;
        let hmin = self.row3_h(rs);
        if target < hmin {
            return Err(Error::NoBracket { lo: hmin, hi: f64::INFINITY });
        }
        if target == hmin {
            return Ok(rs);
        }
        let f = |r: f64| self.row3_h(r) - target;
        let (lo, hi) = match branch {
            RootBranch::Low => {
                let mut lo = 0.5 * rs;
                while f(lo) < 0.0 {
                    lo *= 0.5;
                    if lo < rs * 1e-150 {
                        return Err(Error::NoBracket { lo, hi: rs });
                    }
                }
                (lo, rs)
            }
            RootBranch::High => {
                let mut hi = 2.0 * rs;
                while f(hi) < 0.0 {
                    hi *= 2.0;
                    if hi > rs * 1e150 {
                        return Err(Error::NoBracket { lo: rs, hi });
                    }
                }
                (rs, hi)
            }
        };
        let p = ScalarProblem::new(f, lo, hi).tolerances(1e-300, 2.0 * f64::EPSILON);
        solve_scalar_newton(&p, &|r| self.row3_dh(r))
    }
}

impl Field for StateField {
    fn eval(&self, pt: &SpacetimePoint) -> Result<FluidState> {
        self.state_at(self.r0(pt))
    }
}

pub fn eval_state(field: &StateField, pt: &SpacetimePoint) -> Result<FluidState> {
    field.eval(pt)
}

/// Euler residual of a state field with a two-resolution order estimate.
pub fn state_residual(field: &StateField, grid: &Grid4, params: &PhysParams, h: f64) -> Result<ResidualReport> {
    euler_residual_convergence(field, grid, params, h)
}

/// Parameter sets for every row that are used by tests, examples and the CLI.
pub mod reference {
    use super::*;

    pub fn e0_oblique() -> StateField {
        let p = PhysParams::new(1.4, [0.0, 0.3, -1.0], [0.2, 0.0, 0.5]).unwrap();
        StateField::new(StateRow::E0GdotONonzero { v0: [0.3, -0.2, 0.1], profiles: E0Profiles::exponential(1.0, 0.7) }, p).unwrap()
    }

    pub fn e0_orthogonal() -> StateField {
        let p = PhysParams::new(1.4, [0.0, 0.0, -1.0], [0.0, 0.5, 0.0]).unwrap();
        let profiles = E0Profiles { nu: Func1::sin(0.4, 1.3, 0.2), ..E0Profiles::exponential(1.0, 0.5) };
        StateField::new(StateRow::E0GdotOZero { a_vec: [0.2, 0.0, 0.3], profiles }, p).unwrap()
    }

    pub fn a0_oblique() -> StateField {
        let p = PhysParams::new(1.4, [0.3, -0.2, -1.0], [0.0, 0.0, 1.0]).unwrap();
        let c = [0.6, 0.8, 0.0];
        StateField::new(StateRow::A0LamCrossONonzero { c, b0: 0.2, rho0: 1.2, p0: 0.9, eps: Sign::Plus }, p).unwrap()
    }

    pub fn a0_parallel() -> StateField {
        let p = PhysParams::new(1.4, [0.0, -0.8, 0.0], [0.0, 0.0, 1.0]).unwrap();
        StateField::new(
            StateRow::A0LamParallelO { rho0: 1.0, p0: 1.0, a1: 0.5, b1: 0.3, c0: 0.2, eps: Sign::Minus, eps1: Sign::Plus },
            p,
        )
        .unwrap()
    }

    pub fn h0_row1() -> StateField {
        let p = PhysParams::new(1.4, [0.1, 0.2, -1.0], [0.0, 0.0, 1.0]).unwrap();
        let k = H0Row1Consts {
            a: 1.0,
            a1: 2.0,
            b1: 0.1,
            t1: 3.0,
            c0: 0.3,
            c: [1.0, 0.0, 0.0],
            rho0: 1.0,
            branch: Sign::Minus,
            rho_range: (0.6, 1.6),
        };
        StateField::new(StateRow::H0Row1(k), p).unwrap()
    }

    pub fn h0_row2() -> StateField {
        let p = PhysParams::new(1.4, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
        StateField::new(
            StateRow::H0Row2 { rho0: 1.0, p0: 2.0, a1: 0.7, b1: 0.1, c0: 0.5, b0: 0.4, eps1: Sign::Minus },
            p,
        )
        .unwrap()
    }

    pub fn h0_row3() -> StateField {
        let p = PhysParams::new(1.4, [0.0, 0.0, -1.0], [0.0, 0.0, 1.0]).unwrap();
        StateField::new(
            StateRow::H0Row3 { a: 1.0, a1: 0.5, b1: 0.2, c0: 0.1, k: 0.5, rho0: -5.0, eps1: Sign::Minus, branch: RootBranch::High },
            p,
        )
        .unwrap()
    }

    /// One field per row, in table order.
    pub fn all() -> Vec<StateField> {
        vec![e0_oblique(), e0_orthogonal(), a0_oblique(), a0_parallel(), h0_row1(), h0_row2(), h0_row3()]
    }
}
