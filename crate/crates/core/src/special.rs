//! Jacobi elliptic functions and 1-D interpolants.

use crate::error::{Error, Result};

const AGM_TOL: f64 = 1e-16;

/// Complete elliptic integral of the first kind `K(m)`, parameter `m = k^2 < 1`.
pub fn ellip_k(m: f64) -> f64 {
    if m >= 1.0 {
        return f64::INFINITY;
    }
    let mut a = 1.0;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..64 {
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    std::f64::consts::PI / (2.0 * a)
}

/// `(sn, cn, dn)` of argument `u` and parameter `m = k^2` with `0 <= m <= 1`,
/// computed by the descending AGM (Gauss) transformation.
pub fn jacobi_sncndn(u: f64, m: f64) -> (f64, f64, f64) {
    if m < 0.0 || m > 1.0 || !u.is_finite() || m.is_nan() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    if m < 1e-16 {
        return (u.sin(), u.cos(), 1.0);
    }
    if m > 1.0 - 1e-16 {
        let s = 1.0 / u.cosh();
        return (u.tanh(), s, s);
    }
    let mut a = [0.0f64; 32];
    let mut c = [0.0f64; 32];
    a[0] = 1.0;
    let mut b = (1.0 - m).sqrt();
    c[0] = m.sqrt();
    let mut n = 0;
    while n < 31 {
        if c[n].abs() <= AGM_TOL * a[n] {
            break;
        }
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (1.0 - m * sn * sn).sqrt();
    (sn, cn, dn)
}

/// Jacobi elliptic cosine `cn(u | m)` with parameter `m = k^2`.
pub fn jacobi_cn(u: f64, m: f64) -> f64 {
    jacobi_sncndn(u, m).1
}

fn check_nodes(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidInput(format!("interpolant needs >= 2 matching nodes, got {} and {}", x.len(), y.len())));
    }
    for (i, w) in x.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::NotMonotone { index: i + 1 });
        }
    }
    if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite interpolation node".into()));
    }
    Ok(())
}

fn locate(x: &[f64], t: f64) -> usize {
    // index i with x[i] <= t < x[i+1], clamped to the end intervals
    match x.partition_point(|v| *v <= t) {
        0 => 0,
        k if k >= x.len() => x.len() - 2,
        k => k - 1,
    }
}

/// Natural cubic spline.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// second derivatives at the nodes
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        check_nodes(&x, &y)?;
        let n = x.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // tridiagonal system for interior second derivatives (Thomas algorithm)
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut upper = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for i in 0..k {
                let h0 = x[i + 1] - x[i];
                let h1 = x[i + 2] - x[i + 1];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((y[i + 2] - y[i + 1]) / h1 - (y[i + 1] - y[i]) / h0);
            }
            for i in 1..k {
                let lower = x[i + 1] - x[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
            }
        }
        Ok(Self { x, y, m })
    }

    pub fn eval_with_deriv(&self, t: f64) -> (f64, f64) {
        let i = locate(&self.x, t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let v = a * self.y[i] + b * self.y[i + 1] + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0;
        let dv = (self.y[i + 1] - self.y[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * self.m[i] + (3.0 * b * b - 1.0) / 6.0 * h * self.m[i + 1];
        (v, dv)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_with_deriv(t).0
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.eval_with_deriv(t).1
    }
}
