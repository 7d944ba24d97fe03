//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// A bracketed scalar root problem.
pub struct ScalarProblem<F> {
    pub f: F,
    pub bracket: (f64, f64),
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub max_iter: usize,
}

impl<F: Fn(f64) -> f64> ScalarProblem<F> {
    pub fn new(f: F, lo: f64, hi: f64) -> Self {
        Self { f, bracket: (lo, hi), tol_abs: 1e-14, tol_rel: 4.0 * f64::EPSILON, max_iter: 200 }
    }

    pub fn tolerances(mut self, tol_abs: f64, tol_rel: f64) -> Self {
        self.tol_abs = tol_abs;
        self.tol_rel = tol_rel;
        self
    }
}

/// Solves a [`ScalarProblem`] with a secant/bisection hybrid that keeps every
/// iterate inside the current bracket.
pub fn solve_scalar<F: Fn(f64) -> f64>(p: &ScalarProblem<F>) -> Result<f64> {
    hybrid(&p.f, None::<&fn(f64) -> f64>, p.bracket, p.tol_abs, p.tol_rel, p.max_iter)
}

/// Same as [`solve_scalar`] but uses an analytic derivative for Newton steps.
pub fn solve_scalar_newton<F, D>(p: &ScalarProblem<F>, df: &D) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    hybrid(&p.f, Some(df), p.bracket, p.tol_abs, p.tol_rel, p.max_iter)
}

/// Shorthand with default tolerances.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    solve_scalar(&ScalarProblem::new(f, lo, hi))
}

fn hybrid<F, D>(f: &F, df: Option<&D>, bracket: (f64, f64), tol_abs: f64, tol_rel: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut a, mut b) = bracket;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput(format!("bracket [{a}, {b}]")));
    }
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut fa = f(a);
    let mut fb = f(b);
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::Evaluation(format!("NaN at bracket end of [{a}, {b}]")));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo: a, hi: b });
    }

    // x is the current best point, always inside [a, b]
    let (mut x, mut fx) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    let mut width_prev = b - a;
    for _ in 0..max_iter {
        let tol = tol_abs + tol_rel * x.abs();
        if b - a <= 2.0 * tol || fx == 0.0 {
            return Ok(x);
        }
        // candidate step: Newton if available, otherwise secant on the bracket
        let mut cand = match df {
            Some(d) => {
                let dx = d(x);
                if dx != 0.0 && dx.is_finite() {
                    let step = fx / dx;
                    // converged from one side: the bracket may stay wide
                    if step.abs() <= tol && x - step >= a && x - step <= b {
                        return Ok(x - step);
                    }
                    x - step
                } else {
                    f64::NAN
                }
            }
            None => b - fb * (b - a) / (fb - fa),
        };
        let mid = 0.5 * (a + b);
        if !(cand.is_finite() && cand > a && cand < b) || (b - a) > 0.5 * width_prev {
            cand = mid;
        }
        width_prev = b - a;
        let fc = f(cand);
        if fc.is_nan() {
            return Err(Error::Evaluation(format!("NaN at {cand}")));
        }
        if fc == 0.0 {
            return Ok(cand);
        }
        if fc.signum() == fa.signum() {
            a = cand;
            fa = fc;
        } else {
            b = cand;
            fb = fc;
        }
        if fa.abs() < fb.abs() {
            x = a;
            fx = fa;
        } else {
            x = b;
            fx = fb;
        }
    }
    let tol = tol_abs + tol_rel * x.abs();
    if b - a <= 2.0 * tol {
        Ok(x)
    } else {
        Err(Error::NoConvergence { iterations: max_iter, residual: fx.abs() })
    }
}

/// Sign-change brackets of `f` on `n` subintervals of `[lo, hi]`.
/// With `geometric` the sample points are spaced log-uniformly (requires `lo > 0`).
pub fn scan_brackets<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize, geometric: bool) -> Result<Vec<(f64, f64)>> {
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo || n == 0 {
        return Err(Error::InvalidInput(format!("scan interval [{lo}, {hi}] with {n} cells")));
    }
    if geometric && lo <= 0.0 {
        return Err(Error::InvalidInput("geometric scan needs lo > 0".into()));
    }
    let node = |i: usize| -> f64 {
        if i == n {
            return hi;
        }
        let s = i as f64 / n as f64;
        if geometric { lo * (hi / lo).powf(s) } else { lo + s * (hi - lo) }
    };
    let mut out = Vec::new();
    let mut x0 = node(0);
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = node(i);
        let f1 = f(x1);
        if f0.is_finite() && f1.is_finite() {
            if f0 == 0.0 {
                out.push((x0, x0));
            } else if f0.signum() != f1.signum() && f1 != 0.0 {
                out.push((x0, x1));
            }
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        out.push((x0, x0));
    }
    Ok(out)
}

/// Unique root of `f` on `[lo, hi]` located by scanning; zero or several
/// sign changes are errors.
pub fn unique_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize, geometric: bool) -> Result<f64> {
    let br = scan_brackets(&f, lo, hi, n, geometric)?;
    match br.len() {
        0 => Err(Error::NoBracket { lo, hi }),
        1 => {
            let (a, b) = br[0];
            if a == b { Ok(a) } else { find_root(&f, a, b) }
        }
        _ => Err(Error::MultipleRoots { brackets: br }),
    }
}

/// Inverse of a strictly monotone function on `[lo, hi]`: returns `x` with `f(x) = y`.
pub fn invert_monotone<F: Fn(f64) -> f64>(f: F, y: f64, lo: f64, hi: f64) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if !(flo.is_finite() && fhi.is_finite()) || flo == fhi {
        return Err(Error::NotMonotone { index: 0 });
    }
    find_root(|x| f(x) - y, lo, hi)
}
