//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

/// Default absolute and relative tolerance.
pub const QUAD_TOL: f64 = 1e-10;
/// Maximum number of accepted subintervals before giving up.
pub const SUBDIVISION_CAP: usize = 1 << 20;

const MAX_DEPTH: u32 = 60;

/// Integral of `f` over `[a, b]` by adaptive Simpson with absolute plus
/// relative tolerance `tol`. Reversed limits give the negated integral.
pub fn quad_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput(format!("quadrature limits [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return quad_adaptive(f, b, a, tol).map(|v| -v);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    if !(fa.is_finite() && fb.is_finite() && fm.is_finite()) {
        return Err(Error::Evaluation(format!("non-finite integrand on [{a}, {b}]")));
    }
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

    // explicit stack keeps deep refinement off the call stack
    struct Seg {
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    }
    let mut stack = vec![Seg { a, b, fa, fm, fb, whole, tol, depth: 0 }];
    let mut total = 0.0;
    let mut comp = 0.0; // Kahan compensation
    let mut accepted = 0usize;
    let abs_whole = whole.abs();

    while let Some(s) = stack.pop() {
        let m = 0.5 * (s.a + s.b);
        let lm = 0.5 * (s.a + m);
        let rm = 0.5 * (m + s.b);
        let flm = f(lm);
        let frm = f(rm);
        if !(flm.is_finite() && frm.is_finite()) {
            return Err(Error::Evaluation(format!("non-finite integrand near {m}")));
        }
        let h = s.b - s.a;
        let left = h / 12.0 * (s.fa + 4.0 * flm + s.fm);
        let right = h / 12.0 * (s.fm + 4.0 * frm + s.fb);
        let delta = left + right - s.whole;
        let thresh = s.tol.max(tol * abs_whole * (h / (b - a)));
        let converged = delta.abs() <= 15.0 * thresh;
        if converged || s.depth >= MAX_DEPTH || h <= 4.0 * f64::EPSILON * m.abs().max(1.0) {
            if !converged {
                return Err(Error::QuadratureCap { a, b });
            }
            let v = left + right + delta / 15.0;
            let y = v - comp;
            let t = total + y;
            comp = (t - total) - y;
            total = t;
            accepted += 1;
            if accepted > SUBDIVISION_CAP {
                return Err(Error::QuadratureCap { a, b });
            }
        } else {
            if stack.len() + accepted > SUBDIVISION_CAP {
                return Err(Error::QuadratureCap { a, b });
            }
            let half = 0.5 * s.tol;
            stack.push(Seg { a: m, b: s.b, fa: s.fm, fm: frm, fb: s.fb, whole: right, tol: half, depth: s.depth + 1 });
            stack.push(Seg { a: s.a, b: m, fa: s.fa, fm: flm, fb: s.fm, whole: left, tol: half, depth: s.depth + 1 });
        }
    }
    Ok(total)
}

/// Composite Gauss-Legendre quadrature, doubling the panel count until two
/// successive estimates agree to `tol` (absolute plus relative). Falls back
/// to [`quad_adaptive`] for integrands that are not resolved by 4096 panels.
pub fn quad_gauss<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput(format!("quadrature limits [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let composite = |n: usize| -> f64 {
        let w = (b - a) / n as f64;
        (0..n).map(|i| gauss_legendre8(&f, a + i as f64 * w, a + (i + 1) as f64 * w)).sum()
    };
    let mut n = 2;
    let mut prev = composite(n);
    while n < 4096 {
        n *= 2;
        let cur = composite(n);
        if !cur.is_finite() {
            return Err(Error::Evaluation(format!("non-finite integrand on [{a}, {b}]")));
        }
        if (cur - prev).abs() <= tol * (1.0 + cur.abs()) {
            return Ok(cur);
        }
        prev = cur;
    }
    quad_adaptive(f, a, b, tol)
}

/// Composite Simpson rule on `n` (even) panels.
pub fn simpson_fixed<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 1 { n + 1 } else { n.max(2) };
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    s * h / 3.0
}

/// Gauss-Legendre 8-point rule, used for smooth short panels.
pub fn gauss_legendre8<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    const X: [f64; 4] = [
        0.183_434_642_495_649_8,
        0.525_532_409_916_329,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_3,
    ];
    const W: [f64; 4] = [
        0.362_683_783_378_362,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_5,
        0.101_228_536_290_376_3,
    ];
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut s = 0.0;
    for i in 0..4 {
        s += W[i] * (f(c - r * X[i]) + f(c + r * X[i]));
    }
    s * r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial() {
        let v = quad_adaptive(|x| x * x, 0.0, 1.0, QUAD_TOL).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn exponential() {
        let v = quad_adaptive(|x| (-x).exp(), 0.0, 1.0, QUAD_TOL).unwrap();
        assert!((v - (1.0 - (-1.0f64).exp())).abs() < 1e-10);
    }

    #[test]
    fn reversed_limits() {
        let v = quad_adaptive(|x| x, 1.0, 0.0, QUAD_TOL).unwrap();
        assert!((v + 0.5).abs() < 1e-14);
    }

    #[test]
    fn interior_kink_against_fine_rule() {
        let f = |x: f64| (x - 0.3).abs();
        let exact = 0.5 * 0.3 * 0.3 + 0.5 * 0.7 * 0.7;
        let v = quad_adaptive(f, 0.0, 1.0, QUAD_TOL).unwrap();
        assert!((v - exact).abs() < 1e-9);
        let fine = simpson_fixed(f, 0.0, 1.0, 200_000);
        assert!((v - fine).abs() < 1e-8);
    }

    #[test]
    fn non_integrable_hits_cap_or_fails() {
        let r = quad_adaptive(|x: f64| if x == 0.0 { 0.0 } else { 1.0 / x }, 0.0, 1.0, 1e-12);
        assert!(r.is_err());
    }

    #[test]
    fn gauss_composite_matches_closed_form() {
        let v = quad_gauss(|x: f64| 1.0 / (1.0 + x * x), 0.0, 3.0, 1e-13).unwrap();
        assert!((v - 3f64.atan()).abs() < 1e-13);
        let r = quad_gauss(|x: f64| x.sqrt(), 1.0, 0.0, 1e-10).unwrap();
        assert!((r + 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn gauss_is_exact_for_degree_15() {
        let v = gauss_legendre8(|x| x.powi(15) + x.powi(4), -1.0, 2.0);
        let exact = (2f64.powi(16) - 1.0) / 16.0 + (32.0 + 1.0) / 5.0;
        assert!((v - exact).abs() < 1e-10 * exact);
    }

    proptest::proptest! {
        #[test]
        fn matches_ten_times_finer_simpson(a in -2.0f64..0.0, w in 0.1f64..3.0, k in 0.1f64..3.0) {
            let f = |x: f64| (k * x).sin() + x * x * (-x).exp();
            let v = quad_adaptive(f, a, a + w, QUAD_TOL).unwrap();
            let fine = simpson_fixed(f, a, a + w, 20_000);
            proptest::prop_assert!((v - fine).abs() < 1e-9);
        }
    }
}
