//! Cauchy data for the `alpha_1 = 0` regime: `r1` given along `x = h(s)` and
//! `r0` fixed at one anchor sample. `r0` on the curve follows from the linear
//! phase relation and `psi1` from the wave relation evaluated on the curve.

use crate::error::{Error, Result};
use crate::funcs::{pair4, Func1};
use crate::solver::quad::{quad_adaptive, QUAD_TOL};
use crate::solver::AlphaZeroSpec;

use super::{check_strict, CauchyCurve, TRANSVERSALITY_TOL};

#[derive(Debug, Clone)]
pub struct AlphaZeroCurve {
    pub s: Vec<f64>,
    pub points: Vec<[f64; 4]>,
    pub r1: Vec<f64>,
    pub anchor: usize,
    pub r0_anchor: f64,
}

#[derive(Debug, Clone)]
pub struct AlphaZeroCauchy {
    pub r0_on_curve: Vec<f64>,
    /// Signed `lambda^1(r) . dh/dr1` at each sample.
    pub margins: Vec<f64>,
    /// Normalised margins, as in the transversality check.
    pub normalised_margins: Vec<f64>,
    /// The input spec with `a0` and `psi1` determined by the data.
    pub spec: AlphaZeroSpec,
}

/// Completes the data set and checks that the tangent is not annihilated by `lambda^1`.
pub fn alpha_zero_cauchy(curve: &AlphaZeroCurve, spec: &AlphaZeroSpec) -> Result<AlphaZeroCauchy> {
    if spec.waves.is_empty() {
        return Err(Error::InvalidInput("alpha-zero spec without a wave".into()));
    }
    let n = curve.s.len();
    if curve.anchor >= n {
        return Err(Error::InvalidInput(format!("anchor index {} out of range", curve.anchor)));
    }
    check_strict(&curve.r1)?;
    // r0 is not known yet; the interpolated curve only needs r1 and the points
    let placeholder: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let geo = CauchyCurve::new(curve.s.clone(), &curve.points, placeholder, curve.r1.clone())?;
    let a0 = spec.psi0(curve.r0_anchor)? - pair4(spec.c, curve.points[curve.anchor]);
    let mut out = spec.clone();
    out.a0 = a0;

    let wave = &spec.waves[0];
    let mut r0s = Vec::with_capacity(n);
    let mut margins = Vec::with_capacity(n);
    let mut normalised = Vec::with_capacity(n);
    for (i, &s) in curve.s.iter().enumerate() {
        let r0 = out.psi0_inverse(pair4(spec.c, curve.points[i]) + a0)?;
        let r1 = curve.r1[i];
        let chi = wave.chi.eval(r0, r1);
        let a = wave.a_fn.eval(r1);
        let lam1: [f64; 4] = std::array::from_fn(|k| chi * spec.c[k] + a[k]);
        let tau = geo.tangent(s);
        let dr1 = geo.r1.deriv(s);
        let hdot: [f64; 4] = std::array::from_fn(|k| tau[k] / dr1);
        let m = pair4(lam1, hdot);
        let norm = pair4(lam1, lam1).sqrt() * pair4(hdot, hdot).sqrt();
        let nm = if norm == 0.0 { 0.0 } else { m.abs() / norm };
        if !(nm >= TRANSVERSALITY_TOL) {
            return Err(Error::NotTransversal { index: i, form: 1, margin: nm });
        }
        r0s.push(r0);
        margins.push(m);
        normalised.push(nm);
    }

    let (spec_c, base) = (out.clone(), spec.base);
    let geo2 = geo.clone();
    let psi1 = Func1::new(move |r1: f64| {
        let eval = || -> Result<f64> {
            let s = geo2.s_of_r1(r1)?;
            let h = geo2.point(s);
            let r0 = spec_c.psi0_inverse(pair4(spec_c.c, h) + spec_c.a0)?;
            let w = &spec_c.waves[0];
            let i = quad_adaptive(|xi| w.chi.eval(xi, r1) * (-spec_c.phi.eval(xi)).exp(), base, r0, QUAD_TOL)?;
            Ok(i + pair4(w.a_fn.eval(r1), h))
        };
        eval().unwrap_or(f64::NAN)
    })
    .labelled("psi1 from Cauchy data");
    out.waves[0].psi = psi1;
    // psi1 is only known on the data range
    out.waves[0].bracket = geo.r1_range();
    Ok(AlphaZeroCauchy { r0_on_curve: r0s, margins, normalised_margins: normalised, spec: out })
}
