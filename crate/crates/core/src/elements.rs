//! Simple elements `(gamma, lambda)` of the Euler system.
//!
//! Substituting `du = gamma (x) lambda` into the equations gives, with
//! `delta = lambda_0 + v . lambda` and `F = g - Omega x v`,
//!
//! ```text
//! rho delta gamma_v + gamma_p lambda   = rho F   (0 for homogeneous elements)
//! delta gamma_rho + rho gamma_v . lambda = 0
//! delta (gamma_p - (kappa p / rho) gamma_rho) = 0
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::types::{vec3, FluidState, PhysParams, Vec3, WaveCovector};

/// Relative violation below which orthogonality inputs are projected instead of rejected.
pub const PROJECTION_TOL: f64 = 1e-8;
/// Default relative residual tolerance of [`verify_element`].
pub const ELEMENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    E0,
    APlus0,
    AMinus0,
    H0,
    E,
    APlus,
    AMinus,
}

impl Family {
    pub fn is_homogeneous(self) -> bool {
        matches!(self, Family::E | Family::APlus | Family::AMinus)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::E0 => "E0",
            Family::APlus0 => "A_plus0",
            Family::AMinus0 => "A_minus0",
            Family::H0 => "H0",
            Family::E => "E",
            Family::APlus => "A_plus",
            Family::AMinus => "A_minus",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Characteristic family of a covector at a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharFamily {
    Entropic,
    AcousticPlus,
    AcousticMinus,
    Hydrodynamic,
}

impl CharFamily {
    pub fn name(self) -> &'static str {
        match self {
            CharFamily::Entropic => "entropic",
            CharFamily::AcousticPlus => "acoustic_plus",
            CharFamily::AcousticMinus => "acoustic_minus",
            CharFamily::Hydrodynamic => "hydrodynamic",
        }
    }
}

/// A sign `eps = +1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_value(v: f64) -> Result<Self> {
        if v == 1.0 {
            Ok(Sign::Plus)
        } else if v == -1.0 {
            Ok(Sign::Minus)
        } else {
            Err(Error::InvalidInput(format!("sign must be +1 or -1, got {v}")))
        }
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" | "+" | "plus" => Ok(Sign::Plus),
            "-1" | "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::Config(format!("sign must be +1 or -1, got {other:?}"))),
        }
    }
}

/// A simple element with its family tag and advection speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleElement {
    pub family: Family,
    /// `(gamma_rho, gamma_p, gamma_v1, gamma_v2, gamma_v3)`.
    pub gamma: [f64; 5],
    pub lam: WaveCovector,
    pub delta: f64,
}

impl SimpleElement {
    pub fn gamma_v(&self) -> Vec3 {
        [self.gamma[2], self.gamma[3], self.gamma[4]]
    }
}

/// Residual of the element equations, split by equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementResidual {
    pub momentum: Vec3,
    pub continuity: f64,
    pub entropy: f64,
    /// Largest magnitude of the individual terms (at least 1).
    pub scale: f64,
}

impl ElementResidual {
    pub fn max_abs(&self) -> f64 {
        self.momentum
            .iter()
            .chain([self.continuity, self.entropy].iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn relative(&self) -> f64 {
        self.max_abs() / self.scale
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.momentum[0], self.momentum[1], self.momentum[2], self.continuity, self.entropy]
    }
}

/// `delta = lambda_0 + v . lambda`.
#[inline]
pub fn advection_speed(u: &FluidState, lam: &WaveCovector) -> f64 {
    lam.lam0 + vec3::dot(u.v, lam.lam_vec)
}

fn check_state(u: &FluidState) -> Result<()> {
    if !(u.rho > 0.0) {
        return Err(Error::NonPhysical(format!("rho = {}", u.rho)));
    }
    if !(u.p > 0.0) {
        return Err(Error::NonPhysical(format!("p = {}", u.p)));
    }
    Ok(())
}

/// `delta^3 (delta^2 - (kappa p / rho) |lambda|^2)`.
pub fn characteristic_determinant(u: &FluidState, lam: &WaveCovector, params: &PhysParams) -> Result<f64> {
    if !(u.rho > 0.0) {
        return Err(Error::NonPhysical(format!("rho = {}", u.rho)));
    }
    let d = advection_speed(u, lam);
    let l2 = vec3::dot(lam.lam_vec, lam.lam_vec);
    Ok(d * d * d * (d * d - params.kappa * u.p / u.rho * l2))
}

/// Natural magnitude of [`characteristic_determinant`]: `max(|delta|, c |lambda|)^5`.
pub fn determinant_scale(u: &FluidState, lam: &WaveCovector, params: &PhysParams) -> f64 {
    let d = advection_speed(u, lam).abs();
    let c = (params.kappa * u.p / u.rho).sqrt() * vec3::norm(lam.lam_vec);
    d.max(c).powi(5)
}

/// Tags a covector by the root of the characteristic determinant it sits on.
pub fn classify(u: &FluidState, lam: &WaveCovector, params: &PhysParams, tol: f64) -> Result<CharFamily> {
    check_state(u)?;
    if lam.is_zero() {
        return Err(Error::InvalidInput("zero covector".into()));
    }
    let d = advection_speed(u, lam);
    let scale = vec3::norm(lam.lam_vec) * (params.kappa * u.p / u.rho).sqrt();
    if d.abs() <= tol * scale {
        Ok(CharFamily::Entropic)
    } else if (d - scale).abs() <= tol * scale {
        Ok(CharFamily::AcousticPlus)
    } else if (d + scale).abs() <= tol * scale {
        Ok(CharFamily::AcousticMinus)
    } else {
        Ok(CharFamily::Hydrodynamic)
    }
}

/// Removes the component of `h` along `dir` when it is a rounding artefact;
/// larger violations are rejected.
fn project_orthogonal(h: Vec3, dir: Vec3, what: &str) -> Result<Vec3> {
    let nd = vec3::norm(dir);
    let nh = vec3::norm(h);
    if nd == 0.0 || nh == 0.0 {
        return Ok(h);
    }
    let dot = vec3::dot(h, dir);
    let viol = dot.abs() / (nh * nd);
    if viol == 0.0 {
        Ok(h)
    } else if viol < PROJECTION_TOL {
        Ok(vec3::sub(h, vec3::scale(dot / (nd * nd), dir)))
    } else {
        Err(Error::Constraint(format!("{what}: relative violation {viol:e}")))
    }
}

fn nonzero_lam(lam_vec: Vec3) -> Result<()> {
    if !vec3::is_finite(lam_vec) {
        return Err(Error::InvalidInput("non-finite lambda".into()));
    }
    if vec3::norm(lam_vec) == 0.0 {
        return Err(Error::Constraint("lambda vector is zero".into()));
    }
    Ok(())
}

/// Inhomogeneous entropic element `E0`.
pub fn entropic_inhom(u: &FluidState, params: &PhysParams, gamma_rho: f64, h: Vec3) -> Result<SimpleElement> {
    check_state(u)?;
    let lam = params.forcing(u.v);
    if vec3::norm(lam) == 0.0 {
        return Err(Error::Constraint("g = Omega x v: the forcing vanishes and E0 is undefined".into()));
    }
    let h = project_orthogonal(h, lam, "h . (g - Omega x v) = 0")?;
    Ok(SimpleElement {
        family: Family::E0,
        gamma: [gamma_rho, u.rho, h[0], h[1], h[2]],
        lam: WaveCovector::new(-vec3::dot(u.v, lam), lam),
        delta: 0.0,
    })
}

/// Inhomogeneous acoustic element `A_eps^0`; needs `(g - Omega x v) . lambda = 0`.
pub fn acoustic_inhom(u: &FluidState, params: &PhysParams, lam_vec: Vec3, eps: Sign, gamma_rho: f64) -> Result<SimpleElement> {
    check_state(u)?;
    nonzero_lam(lam_vec)?;
    let f = params.forcing(u.v);
    let lam_vec = project_orthogonal(lam_vec, f, "(g - Omega x v) . lambda = 0")?;
    let s = params.kappa * u.p / u.rho;
    let delta = eps.value() * s.sqrt() * vec3::norm(lam_vec);
    let gp = s * gamma_rho;
    // rho delta gamma_v = rho F - gamma_p lambda
    let gv = vec3::scale(1.0 / delta, vec3::sub(f, vec3::scale(gp / u.rho, lam_vec)));
    let family = match eps {
        Sign::Plus => Family::APlus0,
        Sign::Minus => Family::AMinus0,
    };
    Ok(SimpleElement {
        family,
        gamma: [gamma_rho, gp, gv[0], gv[1], gv[2]],
        lam: WaveCovector::new(delta - vec3::dot(u.v, lam_vec), lam_vec),
        delta,
    })
}

/// Inhomogeneous hydrodynamic element `H0` for a prescribed non-characteristic `delta`.
pub fn hydrodynamic_inhom(u: &FluidState, params: &PhysParams, lam_vec: Vec3, delta: f64) -> Result<SimpleElement> {
    check_state(u)?;
    nonzero_lam(lam_vec)?;
    let l2 = vec3::dot(lam_vec, lam_vec);
    let kp = params.kappa * u.p;
    let s = kp / u.rho;
    if !delta.is_finite() || delta.abs() <= PROJECTION_TOL * (s * l2).sqrt() {
        return Err(Error::Singular(format!("delta = {delta} is the entropic value")));
    }
    let den = u.rho * delta * delta - kp * l2;
    if den.abs() < PROJECTION_TOL * kp * l2 {
        return Err(Error::Singular(format!("delta = {delta} is an acoustic value (rho delta^2 - kappa p |lambda|^2 = {den:e})")));
    }
    let f = params.forcing(u.v);
    let fl = vec3::dot(f, lam_vec);
    let g_rho = -u.rho * u.rho * fl / den;
    let g_p = -params.kappa * u.rho * u.p * fl / den;
    let gv = vec3::scale(1.0 / delta, vec3::add(f, vec3::scale(kp * fl / den, lam_vec)));
    Ok(SimpleElement {
        family: Family::H0,
        gamma: [g_rho, g_p, gv[0], gv[1], gv[2]],
        lam: WaveCovector::new(delta - vec3::dot(u.v, lam_vec), lam_vec),
        delta,
    })
}

/// Homogeneous entropic element `E`.
pub fn entropic_hom(u: &FluidState, gamma_rho: f64, h: Vec3, lam_vec: Vec3) -> Result<SimpleElement> {
    check_state(u)?;
    nonzero_lam(lam_vec)?;
    let h = project_orthogonal(h, lam_vec, "h . lambda = 0")?;
    Ok(SimpleElement {
        family: Family::E,
        gamma: [gamma_rho, 0.0, h[0], h[1], h[2]],
        lam: WaveCovector::new(-vec3::dot(u.v, lam_vec), lam_vec),
        delta: 0.0,
    })
}

/// Homogeneous acoustic element `A_eps`.
pub fn acoustic_hom(u: &FluidState, params: &PhysParams, lam_vec: Vec3, eps: Sign, gamma_rho: f64) -> Result<SimpleElement> {
    check_state(u)?;
    nonzero_lam(lam_vec)?;
    let s = params.kappa * u.p / u.rho;
    let n = vec3::norm(lam_vec);
    let e = eps.value();
    let gv = vec3::scale(-e * s.sqrt() * gamma_rho / (u.rho * n), lam_vec);
    let delta = e * n * s.sqrt();
    let family = match eps {
        Sign::Plus => Family::APlus,
        Sign::Minus => Family::AMinus,
    };
    Ok(SimpleElement {
        family,
        gamma: [gamma_rho, s * gamma_rho, gv[0], gv[1], gv[2]],
        lam: WaveCovector::new(delta - vec3::dot(u.v, lam_vec), lam_vec),
        delta,
    })
}

/// Left minus right side of the element equations, inhomogeneous or
/// homogeneous according to the element family.
pub fn verify_element(u: &FluidState, elem: &SimpleElement, params: &PhysParams) -> ElementResidual {
    let delta = advection_speed(u, &elem.lam);
    let gv = elem.gamma_v();
    let [g_rho, g_p, ..] = elem.gamma;
    let lam = elem.lam.lam_vec;
    let rhs = if elem.family.is_homogeneous() { [0.0; 3] } else { vec3::scale(u.rho, params.forcing(u.v)) };
    let t1 = vec3::scale(u.rho * delta, gv);
    let t2 = vec3::scale(g_p, lam);
    let momentum = vec3::sub(vec3::add(t1, t2), rhs);
    let c1 = delta * g_rho;
    let c2 = u.rho * vec3::dot(gv, lam);
    let s = params.kappa * u.p / u.rho;
    let e1 = delta * g_p;
    let e2 = delta * s * g_rho;
    let scale = [
        vec3::norm(t1),
        vec3::norm(t2),
        vec3::norm(rhs),
        c1.abs(),
        u.rho * vec3::norm(gv) * vec3::norm(lam),
        e1.abs(),
        e2.abs(),
        1.0,
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    ElementResidual { momentum, continuity: c1 + c2, entropy: e1 - e2, scale }
}
