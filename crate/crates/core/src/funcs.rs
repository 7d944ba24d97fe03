//! Caller-supplied free functions and the built-in registry used by configs.
//!
//! Registry syntax is `name:args`, for example `poly:1,0,2` (`1 + 2x^2`),
//! `exp:a,b` (`a e^{bx}`), `sin:a,b,c` (`a sin(bx + c)`), `cos:a,b,c`,
//! `tanh:a,b,c`, `const:c`, or `table:x0/y0;x1/y1;...` (natural cubic spline).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::special::CubicSpline;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type ScalarFn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type CovectorFn = Arc<dyn Fn(f64) -> [f64; 4] + Send + Sync>;

/// Finite-difference step used when no analytic derivative is supplied.
fn fd_step(x: f64) -> f64 {
    6e-6 * x.abs().max(1.0)
}

/// A scalar function of one variable with optional analytic derivatives.
#[derive(Clone)]
pub struct Func1 {
    f: ScalarFn,
    df: Option<ScalarFn>,
    d2f: Option<ScalarFn>,
    label: String,
}

impl fmt::Debug for Func1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Func1({})", self.label)
    }
}

impl Func1 {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), df: None, d2f: None, label: "closure".into() }
    }

    pub fn with_derivative(mut self, df: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.df = Some(Arc::new(df));
        self
    }

    pub fn with_second_derivative(mut self, d2f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d2f = Some(Arc::new(d2f));
        self
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// First derivative, analytic if available, else central difference.
    pub fn deriv(&self, x: f64) -> f64 {
        match &self.df {
            Some(d) => d(x),
            None => {
                let h = fd_step(x);
                ((self.f)(x + h) - (self.f)(x - h)) / (2.0 * h)
            }
        }
    }

    pub fn deriv2(&self, x: f64) -> f64 {
        match (&self.d2f, &self.df) {
            (Some(d2), _) => d2(x),
            (None, Some(d)) => {
                let h = fd_step(x);
                (d(x + h) - d(x - h)) / (2.0 * h)
            }
            (None, None) => {
                let h = 1e-4 * x.abs().max(1.0);
                ((self.f)(x + h) - 2.0 * (self.f)(x) + (self.f)(x - h)) / (h * h)
            }
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c).with_derivative(|_| 0.0).with_second_derivative(|_| 0.0).labelled(format!("const:{c}"))
    }

    pub fn identity() -> Self {
        Self::poly(vec![0.0, 1.0])
    }

    /// `sum c_i x^i`.
    pub fn poly(c: Vec<f64>) -> Self {
        let label = format!("poly:{}", join(&c));
        let c1: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, v)| i as f64 * v).collect();
        let c2: Vec<f64> = c1.iter().enumerate().skip(1).map(|(i, v)| i as f64 * v).collect();
        let horner = |c: &[f64], x: f64| c.iter().rev().fold(0.0, |acc, v| acc * x + v);
        Self::new(move |x| horner(&c, x))
            .with_derivative(move |x| horner(&c1, x))
            .with_second_derivative(move |x| horner(&c2, x))
            .labelled(label)
    }

    /// `a e^{b x}`.
    pub fn exp(a: f64, b: f64) -> Self {
        Self::new(move |x| a * (b * x).exp())
            .with_derivative(move |x| a * b * (b * x).exp())
            .with_second_derivative(move |x| a * b * b * (b * x).exp())
            .labelled(format!("exp:{a},{b}"))
    }

    /// `a sin(b x + c)`.
    pub fn sin(a: f64, b: f64, c: f64) -> Self {
        Self::new(move |x| a * (b * x + c).sin())
            .with_derivative(move |x| a * b * (b * x + c).cos())
            .with_second_derivative(move |x| -a * b * b * (b * x + c).sin())
            .labelled(format!("sin:{a},{b},{c}"))
    }

    /// `a cos(b x + c)`.
    pub fn cos(a: f64, b: f64, c: f64) -> Self {
        Self::new(move |x| a * (b * x + c).cos())
            .with_derivative(move |x| -a * b * (b * x + c).sin())
            .with_second_derivative(move |x| -a * b * b * (b * x + c).cos())
            .labelled(format!("cos:{a},{b},{c}"))
    }

    /// `a tanh(b x + c)`.
    pub fn tanh(a: f64, b: f64, c: f64) -> Self {
        let sech2 = move |x: f64| {
            let s = 1.0 / (b * x + c).cosh();
            s * s
        };
        Self::new(move |x| a * (b * x + c).tanh())
            .with_derivative(move |x| a * b * sech2(x))
            .with_second_derivative(move |x| -2.0 * a * b * b * (b * x + c).tanh() * sech2(x))
            .labelled(format!("tanh:{a},{b},{c}"))
    }

    /// Natural cubic spline through tabulated points.
    pub fn table(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let label = format!(
            "table:{}",
            x.iter().zip(&y).map(|(a, b)| format!("{a}/{b}")).collect::<Vec<_>>().join(";")
        );
        let s = Arc::new(CubicSpline::new(x, y)?);
        let s2 = s.clone();
        Ok(Self::new(move |t| s.eval(t)).with_derivative(move |t| s2.deriv(t)).labelled(label))
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_num(s: &str) -> Result<f64> {
    let t = s.trim();
    let v: f64 = t
        .parse()
        .map_err(|_| Error::Config(format!("not a number: {t:?}")))?;
    if !v.is_finite() {
        return Err(Error::Config(format!("non-finite number: {t:?}")));
    }
    Ok(v)
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_num).collect()
}

fn exact_args(name: &str, v: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    if v.len() != n {
        return Err(Error::Config(format!("{name} takes {n} arguments, got {}", v.len())));
    }
    Ok(v)
}

/// Parses a registry function specification.
pub fn parse_func1(spec: &str) -> Result<Func1> {
    let spec = spec.trim();
    let (name, args) = spec
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("function spec {spec:?} lacks 'name:' prefix")))?;
    match name.trim() {
        "const" => {
            let v = exact_args("const", parse_list(args)?, 1)?;
            Ok(Func1::constant(v[0]))
        }
        "poly" => {
            let v = parse_list(args)?;
            if v.len() > 64 {
                return Err(Error::Config("poly degree above 63".into()));
            }
            Ok(Func1::poly(v))
        }
        "exp" => {
            let v = exact_args("exp", parse_list(args)?, 2)?;
            Ok(Func1::exp(v[0], v[1]))
        }
        "sin" => {
            let v = exact_args("sin", parse_list(args)?, 3)?;
            Ok(Func1::sin(v[0], v[1], v[2]))
        }
        "cos" => {
            let v = exact_args("cos", parse_list(args)?, 3)?;
            Ok(Func1::cos(v[0], v[1], v[2]))
        }
        "tanh" => {
            let v = exact_args("tanh", parse_list(args)?, 3)?;
            Ok(Func1::tanh(v[0], v[1], v[2]))
        }
        "table" => {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for pair in args.split(';').filter(|s| !s.trim().is_empty()) {
                let (a, b) = pair
                    .split_once('/')
                    .ok_or_else(|| Error::Config(format!("table entry {pair:?} is not x/y")))?;
                xs.push(parse_num(a)?);
                ys.push(parse_num(b)?);
            }
            Func1::table(xs, ys).map_err(|e| Error::Config(format!("table: {e}")))
        }
        other => Err(Error::Config(format!("unknown function {other:?}"))),
    }
}

/// A scalar function of `(r0, r1)` with optional partial derivatives.
#[derive(Clone)]
pub struct Func2 {
    f: ScalarFn2,
    d0: Option<ScalarFn2>,
    d1: Option<ScalarFn2>,
}

impl fmt::Debug for Func2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Func2")
    }
}

impl Func2 {
    pub fn new(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), d0: None, d1: None }
    }

    pub fn with_d0(mut self, d: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d0 = Some(Arc::new(d));
        self
    }

    pub fn with_d1(mut self, d: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d1 = Some(Arc::new(d));
        self
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_, _| c).with_d0(|_, _| 0.0).with_d1(|_, _| 0.0)
    }

    /// Function of the first argument only.
    pub fn of_r0(g: Func1) -> Self {
        let g2 = g.clone();
        Self::new(move |a, _| g.eval(a)).with_d0(move |a, _| g2.deriv(a)).with_d1(|_, _| 0.0)
    }

    #[inline]
    pub fn eval(&self, a: f64, b: f64) -> f64 {
        (self.f)(a, b)
    }

    pub fn d_r0(&self, a: f64, b: f64) -> f64 {
        match &self.d0 {
            Some(d) => d(a, b),
            None => {
                let h = fd_step(a);
                ((self.f)(a + h, b) - (self.f)(a - h, b)) / (2.0 * h)
            }
        }
    }

    pub fn d_r1(&self, a: f64, b: f64) -> f64 {
        match &self.d1 {
            Some(d) => d(a, b),
            None => {
                let h = fd_step(b);
                ((self.f)(a, b + h) - (self.f)(a, b - h)) / (2.0 * h)
            }
        }
    }

    /// Second partial in `r1`, by differencing `d_r1`.
    pub fn d_r1r1(&self, a: f64, b: f64) -> f64 {
        let h = 1e-4 * b.abs().max(1.0);
        (self.d_r1(a, b + h) - self.d_r1(a, b - h)) / (2.0 * h)
    }
}

/// A covector-valued function of one variable with its derivative.
#[derive(Clone)]
pub struct CovectorFunc {
    f: CovectorFn,
    df: Option<CovectorFn>,
}

impl fmt::Debug for CovectorFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CovectorFunc")
    }
}

impl CovectorFunc {
    pub fn new(f: impl Fn(f64) -> [f64; 4] + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), df: None }
    }

    pub fn with_derivative(mut self, df: impl Fn(f64) -> [f64; 4] + Send + Sync + 'static) -> Self {
        self.df = Some(Arc::new(df));
        self
    }

    pub fn constant(c: [f64; 4]) -> Self {
        Self::new(move |_| c).with_derivative(|_| [0.0; 4])
    }

    #[inline]
    pub fn eval(&self, r: f64) -> [f64; 4] {
        (self.f)(r)
    }

    pub fn deriv(&self, r: f64) -> [f64; 4] {
        match &self.df {
            Some(d) => d(r),
            None => {
                let h = fd_step(r);
                let a = (self.f)(r + h);
                let b = (self.f)(r - h);
                std::array::from_fn(|i| (a[i] - b[i]) / (2.0 * h))
            }
        }
    }

    /// Second derivative by differencing [`Self::deriv`].
    pub fn deriv2(&self, r: f64) -> [f64; 4] {
        let h = 1e-4 * r.abs().max(1.0);
        let a = self.deriv(r + h);
        let b = self.deriv(r - h);
        std::array::from_fn(|i| (a[i] - b[i]) / (2.0 * h))
    }
}

/// Pairing of a covector with a spacetime point `(t, x, y, z)`.
#[inline]
pub fn pair4(l: [f64; 4], x: [f64; 4]) -> f64 {
    l[0] * x[0] + l[1] * x[1] + l[2] * x[2] + l[3] * x[3]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_poly() {
        let f = parse_func1("poly:1,0,2").unwrap();
        assert_eq!(f.eval(3.0), 19.0);
        assert_eq!(f.deriv(3.0), 12.0);
        assert_eq!(f.deriv2(3.0), 4.0);
    }

    #[test]
    fn registry_others() {
        assert!((parse_func1("exp:2,0.5").unwrap().eval(2.0) - 2.0 * 1f64.exp()).abs() < 1e-15);
        assert!((parse_func1("sin:1,1,0").unwrap().deriv(0.0) - 1.0).abs() < 1e-15);
        assert!((parse_func1("tanh:1,2,0").unwrap().deriv(0.0) - 2.0).abs() < 1e-15);
        assert_eq!(parse_func1(" const: 4 ").unwrap().eval(9.0), 4.0);
    }

    #[test]
    fn registry_table() {
        let f = parse_func1("table:0/0;1/2;2/4;3/6").unwrap();
        assert!((f.eval(1.5) - 3.0).abs() < 1e-14);
        assert!((f.deriv(0.5) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn registry_errors() {
        for bad in ["", "poly", "nope:1", "exp:1", "const:nan", "table:1/2", "table:0/1;0/2", "sin:1,2,x"] {
            assert!(parse_func1(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn fd_fallback_derivatives() {
        let f = Func1::new(|x: f64| x.sin());
        assert!((f.deriv(0.4) - 0.4f64.cos()).abs() < 1e-9);
        let g = Func2::new(|a: f64, b: f64| a * b * b);
        assert!((g.d_r1(2.0, 3.0) - 12.0).abs() < 1e-8);
        assert!((g.d_r1r1(2.0, 3.0) - 4.0).abs() < 1e-5);
    }

    #[test]
    fn labels_round_trip() {
        let f = parse_func1("poly:1,2").unwrap();
        let g = parse_func1(f.label()).unwrap();
        assert_eq!(f.eval(0.3), g.eval(0.3));
    }
}
