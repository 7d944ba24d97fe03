//! Piecewise cubic Hermite interpolation.
//!
//! Two slope rules: Fritsch-Carlson (monotone data give a monotone
//! interpolant) and the clamped cubic spline, whose end slopes come from the
//! cubic through the first or last four samples.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Cubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

fn check(x: &[f64], y: &[f64]) -> Result<()> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(Error::InvalidInput(format!("interpolation needs matching samples, got {} and {}", n, y.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite interpolation sample".into()));
    }
    if let Some(i) = (1..n).find(|&i| x[i] <= x[i - 1]) {
        return Err(Error::NotMonotone { index: i });
    }
    Ok(())
}

/// Derivative at `x[0]` of the cubic through the four given points.
fn lagrange_slope(x: [f64; 4], y: [f64; 4]) -> f64 {
    let mut d = 0.0;
    for j in 0..4 {
        let denom: f64 = (0..4).filter(|&m| m != j).map(|m| x[j] - x[m]).product();
        // derivative of prod_{m != j} (t - x_m) at t = x0
        let mut num = 0.0;
        for q in (0..4).filter(|&q| q != j) {
            num += (0..4).filter(|&m| m != j && m != q).map(|m| x[0] - x[m]).product::<f64>();
        }
        d += y[j] * num / denom;
    }
    d
}

impl Cubic {
    /// Clamped cubic spline; fewer than four samples fall back to [`Cubic::pchip`].
    pub fn spline(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        check(&x, &y)?;
        let n = x.len();
        if n < 4 {
            return Self::pchip(x, y);
        }
        let h: Vec<f64> = (0..n - 1).map(|k| x[k + 1] - x[k]).collect();
        let del: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![0.0; n];
        d[0] = lagrange_slope([x[0], x[1], x[2], x[3]], [y[0], y[1], y[2], y[3]]);
        d[n - 1] = lagrange_slope([x[n - 1], x[n - 2], x[n - 3], x[n - 4]], [y[n - 1], y[n - 2], y[n - 3], y[n - 4]]);
        // Thomas algorithm on the interior slopes
        let m = n - 2;
        let mut diag = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        let mut upper = vec![0.0; m];
        let mut lower = vec![0.0; m];
        for i in 0..m {
            let k = i + 1;
            lower[i] = h[k];
            diag[i] = 2.0 * (h[k - 1] + h[k]);
            upper[i] = h[k - 1];
            rhs[i] = 3.0 * (h[k] * del[k - 1] + h[k - 1] * del[k]);
        }
        rhs[0] -= lower[0] * d[0];
        rhs[m - 1] -= upper[m - 1] * d[n - 1];
        for i in 1..m {
            let w = lower[i] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        d[m] = rhs[m - 1] / diag[m - 1];
        for i in (0..m - 1).rev() {
            d[i + 1] = (rhs[i] - upper[i] * d[i + 2]) / diag[i];
        }
        Ok(Self { x, y, d })
    }

    /// Whether the derivative keeps one strict sign on the whole domain.
    pub fn is_strictly_monotone(&self) -> bool {
        let sgn = (self.y[self.y.len() - 1] - self.y[0]).signum();
        if sgn == 0.0 {
            return false;
        }
        for k in 0..self.x.len() - 1 {
            let h = self.x[k + 1] - self.x[k];
            // the derivative is quadratic on each segment: check the ends and the vertex
            let a = self.x[k];
            let mut probes = vec![a, a + h];
            let (q0, qm, q1) = (self.deriv(a), self.deriv(a + 0.5 * h), self.deriv(a + h));
            let c2 = 2.0 * (q0 - 2.0 * qm + q1);
            if c2 != 0.0 {
                let c1 = -3.0 * q0 + 4.0 * qm - q1;
                let u = -c1 / (2.0 * c2);
                if u > 0.0 && u < 1.0 {
                    probes.push(a + u * h);
                }
            }
            if probes.iter().any(|&t| !(sgn * self.eval_d(t.min(self.x[k + 1] - 1e-15 * h.max(1.0)).max(a)).1 > 0.0)) {
                return false;
            }
        }
        true
    }

    /// Fritsch-Carlson slopes. `x` must be strictly increasing with at least two points.
    pub fn pchip(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        check(&x, &y)?;
        let n = x.len();
        let h: Vec<f64> = (0..n - 1).map(|k| x[k + 1] - x[k]).collect();
        let del: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = del[0];
            d[1] = del[0];
        } else {
            for k in 1..n - 1 {
                if del[k - 1] * del[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
                }
            }
            d[0] = end_slope(h[0], h[1], del[0], del[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        }
        Ok(Self { x, y, d })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.x.len();
        self.x[1..n - 1].partition_point(|&v| v <= t)
    }

    /// Value and first derivative at `t`; outside the knots the end cubics are extended.
    pub fn eval_d(&self, t: f64) -> (f64, f64) {
        let k = self.segment(t);
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (y0, y1, d0, d1) = (self.y[k], self.y[k + 1], self.d[k] * h, self.d[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let v = (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * d0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * d1;
        let dv = (6.0 * s2 - 6.0 * s) * y0 + (3.0 * s2 - 4.0 * s + 1.0) * d0 + (-6.0 * s2 + 6.0 * s) * y1 + (3.0 * s2 - 2.0 * s) * d1;
        (v, dv / h)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_d(t).0
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.eval_d(t).1
    }
}

fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() || m0 == 0.0 {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_cubic_knots_and_lines() {
        let x: Vec<f64> = (0..6).map(|i| i as f64 * 0.5).collect();
        let p = Cubic::pchip(x.clone(), x.iter().map(|v| 2.0 * v - 1.0).collect()).unwrap();
        for t in [0.1, 0.77, 1.3, 2.49] {
            let (v, d) = p.eval_d(t);
            assert!((v - (2.0 * t - 1.0)).abs() < 1e-14 && (d - 2.0).abs() < 1e-13);
        }
        assert_eq!(p.eval(1.5), 2.0);
    }

    #[test]
    fn rejects_unsorted() {
        assert!(matches!(Cubic::pchip(vec![0.0, 1.0, 1.0], vec![0.0; 3]), Err(Error::NotMonotone { index: 2 })));
        assert!(Cubic::pchip(vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn converges_on_smooth_data() {
        let err = |n: usize| {
            let x: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
            let p = Cubic::pchip(x.clone(), x.iter().map(|v| v.exp()).collect()).unwrap();
            (0..200).map(|i| i as f64 / 199.0).map(|t| (p.eval(t) - t.exp()).abs()).fold(0.0, f64::max)
        };
        assert!(err(100) < 1e-6 && err(50) / err(100) > 6.0);
    }

    proptest! {
        #[test]
        fn monotone_data_give_monotone_interpolant(steps in prop::collection::vec(0.01f64..2.0, 3..12), dy in prop::collection::vec(0.0f64..3.0, 12)) {
            let mut x = vec![0.0];
            let mut y = vec![0.0];
            for (i, h) in steps.iter().enumerate() {
                x.push(x[i] + h);
                y.push(y[i] + dy[i]);
            }
            let (a, b) = (x[0], *x.last().unwrap());
            let p = Cubic::pchip(x, y).unwrap();
            let mut prev = p.eval(a);
            for i in 1..=400 {
                let v = p.eval(a + (b - a) * i as f64 / 400.0);
                prop_assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
}
