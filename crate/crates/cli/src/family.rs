//! Builds a field from the `family` key and the family constants.
//!
//! Every constant defaults to the family's reference value, so a config only
//! needs the keys it changes.

use rankwave::elements::Sign;
use rankwave::funcs::{Func1, Func2};
use rankwave::io::Config;
use rankwave::states::{reference as state_ref, E0Profiles, H0Row1Consts, RootBranch, StateField, StateRow};
use rankwave::waves::{E0AConfig, E0AField, E0EConfig, E0EField, E0aReading, H0AConfig, H0AField, H0EConfig, H0EField, RankTwoElements};
use rankwave::{Error, Field, FluidState, PhysParams, RankTwoField, Result, RiemannPair, SpacetimePoint};

pub const FAMILIES: [&str; 11] = [
    "e0e", "e0a", "h0e", "h0a", "e0_oblique", "e0_orthogonal", "a0_oblique", "a0_parallel", "h0_row1", "h0_row2", "h0_row3",
];

pub enum AnyField {
    State(StateField),
    E0E(E0EField),
    E0A(E0AField),
    H0E(H0EField),
    H0A(H0AField),
}

impl AnyField {
    pub fn params(&self) -> &PhysParams {
        match self {
            Self::State(f) => f.params(),
            Self::E0E(f) => &f.config().params,
            Self::E0A(f) => &f.config().params,
            Self::H0E(f) => &f.config().params,
            Self::H0A(f) => &f.config().params,
        }
    }

    /// Rank of `du/dx`: 1 for simple states, 2 for the waves.
    pub fn expected_rank(&self) -> usize {
        if matches!(self, Self::State(_)) { 1 } else { 2 }
    }

    /// State and invariants; a simple state has only `r0` and reports `r1 = 0`.
    pub fn eval_full(&self, pt: &SpacetimePoint) -> Result<(FluidState, RiemannPair)> {
        match self {
            Self::State(f) => Ok((f.eval(pt)?, RiemannPair::new(f.r0(pt), 0.0))),
            Self::E0E(f) => f.eval_with_invariants(pt),
            Self::E0A(f) => f.eval_with_invariants(pt),
            Self::H0E(f) => f.eval_with_invariants(pt),
            Self::H0A(f) => f.eval_with_invariants(pt),
        }
    }

    /// Constructed elements, where the family provides them.
    pub fn elements_at(&self, pt: &SpacetimePoint) -> Option<Result<RankTwoElements>> {
        match self {
            Self::E0E(f) => Some(f.elements_at(pt)),
            Self::E0A(f) => Some(f.elements_at(pt)),
            Self::H0E(f) => Some(f.elements_at(pt)),
            _ => None,
        }
    }
}

impl Field for AnyField {
    fn eval(&self, pt: &SpacetimePoint) -> Result<FluidState> {
        match self {
            Self::State(f) => f.eval(pt),
            Self::E0E(f) => f.eval(pt),
            Self::E0A(f) => f.eval(pt),
            Self::H0E(f) => f.eval(pt),
            Self::H0A(f) => f.eval(pt),
        }
    }
}

fn sign(cfg: &Config, key: &str, default: Sign) -> Result<Sign> {
    Ok(cfg.opt_parse::<Sign>(key, "a sign (+1 or -1)")?.unwrap_or(default))
}

fn branch(cfg: &Config, key: &str, default: RootBranch) -> Result<RootBranch> {
    Ok(cfg.opt_parse::<RootBranch>(key, "a root branch (low or high)")?.unwrap_or(default))
}

fn pair(cfg: &Config, key: &str, default: (f64, f64)) -> Result<(f64, f64)> {
    match cfg.opt_list(key)? {
        None => Ok(default),
        Some(v) if v.len() == 2 => Ok((v[0], v[1])),
        Some(v) => Err(Error::Config(format!("key {key}: expected 2 components, got {}", v.len()))),
    }
}

fn func(cfg: &Config, key: &str, default: &Func1) -> Result<Func1> {
    Ok(cfg.opt_func(key)?.unwrap_or_else(|| default.clone()))
}

/// `kappa`, `g` and `omega` with the family's reference values as defaults.
pub fn phys(cfg: &Config, default: &PhysParams) -> Result<PhysParams> {
    PhysParams::new(cfg.f64_or("kappa", default.kappa)?, cfg.vec3_or("g", default.g_vec)?, cfg.vec3_or("omega", default.omega_vec)?)
}

fn lin(v: (f64, f64, usize)) -> Vec<f64> {
    if v.2 < 2 {
        return vec![v.0];
    }
    (0..v.2).map(|i| v.0 + (v.1 - v.0) * i as f64 / (v.2 - 1) as f64).collect()
}

fn range3(cfg: &Config, key: &str, default: (f64, f64, usize)) -> Result<(f64, f64, usize)> {
    match cfg.opt_list(key)? {
        None => Ok(default),
        Some(v) if v.len() == 3 && v[2] >= 1.0 && v[2].fract() == 0.0 => Ok((v[0], v[1], v[2] as usize)),
        Some(_) => Err(Error::Config(format!("key {key}: expected lo, hi, count"))),
    }
}

fn e0_profiles(cfg: &Config, default: E0Profiles) -> Result<E0Profiles> {
    match (cfg.opt_func("profile.p")?, cfg.opt_func("profile.nu")?) {
        (None, None) => Ok(default),
        (p, nu) => Ok(E0Profiles::from_pressure(p.unwrap_or(default.p), nu.unwrap_or(default.nu))),
    }
}

fn build_state(cfg: &Config, name: &str) -> Result<StateField> {
    let base = match name {
        "e0_oblique" => state_ref::e0_oblique(),
        "e0_orthogonal" => state_ref::e0_orthogonal(),
        "a0_oblique" => state_ref::a0_oblique(),
        "a0_parallel" => state_ref::a0_parallel(),
        "h0_row1" => state_ref::h0_row1(),
        "h0_row2" => state_ref::h0_row2(),
        _ => state_ref::h0_row3(),
    };
    let params = phys(cfg, base.params())?;
    let row = match base.row().clone() {
        StateRow::E0GdotONonzero { v0, profiles } => {
            StateRow::E0GdotONonzero { v0: cfg.vec3_or("v0", v0)?, profiles: e0_profiles(cfg, profiles)? }
        }
        StateRow::E0GdotOZero { a_vec, profiles } => {
            StateRow::E0GdotOZero { a_vec: cfg.vec3_or("a_vec", a_vec)?, profiles: e0_profiles(cfg, profiles)? }
        }
        StateRow::A0LamCrossONonzero { c, b0, rho0, p0, eps } => StateRow::A0LamCrossONonzero {
            c: cfg.vec3_or("c", c)?,
            b0: cfg.f64_or("b0", b0)?,
            rho0: cfg.f64_or("rho0", rho0)?,
            p0: cfg.f64_or("p0", p0)?,
            eps: sign(cfg, "eps", eps)?,
        },
        StateRow::A0LamParallelO { rho0, p0, a1, b1, c0, eps, eps1 } => StateRow::A0LamParallelO {
            rho0: cfg.f64_or("rho0", rho0)?,
            p0: cfg.f64_or("p0", p0)?,
            a1: cfg.f64_or("a1", a1)?,
            b1: cfg.f64_or("b1", b1)?,
            c0: cfg.f64_or("c0", c0)?,
            eps: sign(cfg, "eps", eps)?,
            eps1: sign(cfg, "eps1", eps1)?,
        },
        StateRow::H0Row1(k) => StateRow::H0Row1(H0Row1Consts {
            a: cfg.f64_or("a", k.a)?,
            a1: cfg.f64_or("a1", k.a1)?,
            b1: cfg.f64_or("b1", k.b1)?,
            t1: cfg.f64_or("t1", k.t1)?,
            c0: cfg.f64_or("c0", k.c0)?,
            c: cfg.vec3_or("c", k.c)?,
            rho0: cfg.f64_or("rho0", k.rho0)?,
            branch: sign(cfg, "branch", k.branch)?,
            rho_range: pair(cfg, "rho_range", k.rho_range)?,
        }),
        StateRow::H0Row2 { rho0, p0, a1, b1, c0, b0, eps1 } => StateRow::H0Row2 {
            rho0: cfg.f64_or("rho0", rho0)?,
            p0: cfg.f64_or("p0", p0)?,
            a1: cfg.f64_or("a1", a1)?,
            b1: cfg.f64_or("b1", b1)?,
            c0: cfg.f64_or("c0", c0)?,
            b0: cfg.f64_or("b0", b0)?,
            eps1: sign(cfg, "eps1", eps1)?,
        },
        StateRow::H0Row3 { a, a1, b1, c0, k, rho0, eps1, branch: br } => StateRow::H0Row3 {
            a: cfg.f64_or("a", a)?,
            a1: cfg.f64_or("a1", a1)?,
            b1: cfg.f64_or("b1", b1)?,
            c0: cfg.f64_or("c0", c0)?,
            k: cfg.f64_or("k", k)?,
            rho0: cfg.f64_or("rho0", rho0)?,
            eps1: sign(cfg, "eps1", eps1)?,
            branch: branch(cfg, "branch", br)?,
        },
    };
    StateField::new(row, params)
}

fn build_e0e(cfg: &Config) -> Result<E0EField> {
    let d = E0EConfig::reference();
    E0EField::new(E0EConfig {
        m: cfg.f64_or("m", d.m)?,
        p0: cfg.f64_or("p0", d.p0)?,
        rho0: cfg.f64_or("rho0", d.rho0)?,
        b: cfg.f64_or("b", d.b)?,
        c: cfg.f64_or("c", d.c)?,
        r01: cfg.f64_or("r01", d.r01)?,
        k: cfg.f64_or("k", d.k)?,
        a_fn: func(cfg, "a_fn", &d.a_fn)?,
        branch: sign(cfg, "branch", d.branch)?,
        params: phys(cfg, &d.params)?,
    })
}

/// Ex. 2 with `K`, `A` and `g` as top-level keys; the other constants
/// default to the reference choice.
fn build_e0a(cfg: &Config) -> Result<E0AField> {
    let fig = E0AConfig::figure();
    let a = cfg.f64_or("A", fig.a)?;
    let k = cfg.f64_or("K", fig.k)?;
    let gz = cfg.f64_or("gz", fig.params.g_vec[2])?;
    let d = E0AConfig::reference(k, a, gz);
    let reading = match cfg.opt_str("reading").as_deref() {
        None | Some("corrected") => E0aReading::Corrected,
        Some("as_printed") => E0aReading::AsPrinted,
        Some(o) => return Err(Error::Config(format!("key reading: expected corrected or as_printed, got {o:?}"))),
    };
    E0AField::new(E0AConfig {
        a0: cfg.f64_or("a0", d.a0)?,
        f0: cfg.f64_or("f0", d.f0)?,
        b0: cfg.f64_or("b0", d.b0)?,
        c0: cfg.f64_or("c0", d.c0)?,
        c1: cfg.f64_or("c1", d.c1)?,
        eps: sign(cfg, "eps", d.eps)?,
        eps1: sign(cfg, "eps1", d.eps1)?,
        eps2: sign(cfg, "eps2", d.eps2)?,
        reading,
        params: phys(cfg, &d.params)?,
        ..d
    })
}

fn build_h0e(cfg: &Config) -> Result<H0EField> {
    let d = H0EConfig::reference();
    H0EField::new(H0EConfig {
        a: cfg.f64_or("a", d.a)?,
        s1: cfg.f64_or("s1", d.s1)?,
        a0: cfg.f64_or("a0", d.a0)?,
        a1: cfg.f64_or("a1", d.a1)?,
        c0: cfg.f64_or("c0", d.c0)?,
        t1: cfg.f64_or("t1", d.t1)?,
        c: cfg.vec3_or("c", d.c)?,
        y0: func(cfg, "y0", &d.y0)?,
        y1: func(cfg, "y1", &d.y1)?,
        y3: func(cfg, "y3", &d.y3)?,
        v2: func(cfg, "v2", &d.v2)?,
        psi1: func(cfg, "psi1", &d.psi1)?,
        branch: branch(cfg, "branch", d.branch)?,
        p_bracket: pair(cfg, "p_bracket", d.p_bracket)?,
        r1_bracket: pair(cfg, "r1_bracket", d.r1_bracket)?,
        closed_form: cfg.opt_parse::<bool>("closed_form", "true or false")?.unwrap_or(d.closed_form),
        params: phys(cfg, &d.params)?,
    })
}

fn build_h0a(cfg: &Config) -> Result<H0AField> {
    let d = H0AConfig::degenerate();
    let v1 = match cfg.opt_func("v1")? {
        Some(f) => Func2::of_r0(f),
        None => d.v1.clone(),
    };
    let c = H0AConfig {
        a: cfg.f64_or("a", d.a)?,
        v1,
        v2: func(cfg, "v2", &d.v2)?,
        s: func(cfg, "s", &d.s)?,
        f: func(cfg, "f", &d.f)?,
        theta: func(cfg, "theta", &d.theta)?,
        e_a: cfg.vec3_or("e_a", d.e_a)?,
        v3_fn: func(cfg, "v3", &d.v3_fn)?,
        psi: func(cfg, "psi", &d.psi)?,
        eps: sign(cfg, "eps", d.eps)?,
        eps4: sign(cfg, "eps4", d.eps4)?,
        v3_scale: cfg.f64_or("v3_scale", d.v3_scale)?,
        params: phys(cfg, &d.params)?,
        ..d
    };
    let r0s = lin(range3(cfg, "validate.r0", (-0.5, 0.5, 5))?);
    let r1s = lin(range3(cfg, "validate.r1", (0.5, 1.5, 5))?);
    H0AField::new(c, &r0s, &r1s, cfg.f64_or("validate.tol", 1e-10)?)
}

pub fn build(cfg: &Config) -> Result<AnyField> {
    let name = cfg.str("family")?;
    match name.as_str() {
        "e0e" => Ok(AnyField::E0E(build_e0e(cfg)?)),
        "e0a" => Ok(AnyField::E0A(build_e0a(cfg)?)),
        "h0e" => Ok(AnyField::H0E(build_h0e(cfg)?)),
        "h0a" => Ok(AnyField::H0A(build_h0a(cfg)?)),
        n if FAMILIES.contains(&n) => Ok(AnyField::State(build_state(cfg, n)?)),
        other => Err(Error::Config(format!("key family: unknown family {other:?} (expected one of {})", FAMILIES.join(", ")))),
    }
}
