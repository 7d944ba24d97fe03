//! Characteristics of `r1_t + v1(r0, r1) r1_x = 0` in one space dimension,
//! with `r0 = l0 t + l1 x` the simple state outside the wave.

use crate::error::{Error, Result};
use crate::funcs::{Func1, Func2};
use crate::solver::find_root;

#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    pub t0: f64,
    pub t_end: f64,
    /// RK4 steps over `[t0, t_end]`.
    pub steps: usize,
    /// Characteristics traced across the padded support.
    pub n_chars: usize,
    /// Feet extend this far beyond the support on each side.
    pub pad: f64,
}

impl TraceOptions {
    pub fn new(t0: f64, t_end: f64) -> Self {
        Self { t0, t_end, steps: 1000, n_chars: 801, pad: 0.5 }
    }
}

/// First loss of ordering between neighbouring characteristics.
#[derive(Debug, Clone, Copy)]
pub struct Crossing {
    pub t: f64,
    pub x: f64,
}

#[derive(Debug, Clone)]
pub struct CharacteristicTrace {
    v1: Func2,
    r1_init: Func1,
    lam0: [f64; 2],
    opts: TraceOptions,
    dt: f64,
    pub feet: Vec<f64>,
    pub times: Vec<f64>,
    /// `positions[n][i]`: characteristic `i` at `times[n]`.
    pub positions: Vec<Vec<f64>>,
    /// Characteristics through the ends of the support, per time.
    pub strip: Vec<(f64, f64)>,
    pub crossing: Option<Crossing>,
}

fn rk4_step(f: &impl Fn(f64, f64) -> f64, t: f64, x: f64, dt: f64) -> f64 {
    let k1 = f(t, x);
    let k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
    let k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
    let k4 = f(t + dt, x + dt * k3);
    x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Traces characteristics from `t0`; stops at the first crossing.
/// `support = (a, b)` must contain the support of `r1_init'`.
pub fn trace_characteristics(
    v1: &Func2,
    r1_init: &Func1,
    support: (f64, f64),
    lam0: [f64; 2],
    opts: TraceOptions,
) -> Result<CharacteristicTrace> {
    let (a, b) = support;
    if !(b > a) || !(opts.t_end > opts.t0) || opts.steps == 0 || opts.n_chars < 2 {
        return Err(Error::InvalidInput("trace needs a < b, t_end > t0, steps > 0 and two characteristics".into()));
    }
    let lo = a - opts.pad * (b - a);
    let hi = b + opts.pad * (b - a);
    let mut feet: Vec<f64> = (0..opts.n_chars).map(|i| lo + (hi - lo) * i as f64 / (opts.n_chars - 1) as f64).collect();
    feet.extend([a, b]);
    feet.sort_by(f64::total_cmp);
    feet.dedup();
    let ia = feet.iter().position(|&x| x == a).unwrap();
    let ib = feet.iter().position(|&x| x == b).unwrap();
    let r1s: Vec<f64> = feet.iter().map(|&x| r1_init.eval(x)).collect();
    let dt = (opts.t_end - opts.t0) / opts.steps as f64;
    let mut times = vec![opts.t0];
    let mut positions = vec![feet.clone()];
    let mut strip = vec![(a, b)];
    let mut crossing = None;
    for n in 0..opts.steps {
        let t = opts.t0 + n as f64 * dt;
        let prev = positions.last().unwrap();
        let next: Vec<f64> = prev
            .iter()
            .zip(&r1s)
            .map(|(&x, &r1)| rk4_step(&|tt, xx| v1.eval(lam0[0] * tt + lam0[1] * xx, r1), t, x, dt))
            .collect();
        let mut first: Option<Crossing> = None;
        for i in 0..next.len() - 1 {
            let g_now = next[i + 1] - next[i];
            if g_now <= 0.0 {
                let g_prev = prev[i + 1] - prev[i];
                let f = g_prev / (g_prev - g_now);
                let tc = t + f * dt;
                if first.map_or(true, |c| tc < c.t) {
                    first = Some(Crossing { t: tc, x: prev[i] + f * (next[i] - prev[i]) });
                }
            }
        }
        if let Some(c) = first {
            crossing = Some(c);
            break;
        }
        strip.push((next[ia], next[ib]));
        times.push(t + dt);
        positions.push(next);
    }
    Ok(CharacteristicTrace { v1: v1.clone(), r1_init: r1_init.clone(), lam0, opts, dt, feet, times, positions, strip, crossing })
}

impl CharacteristicTrace {
    /// Position at time `t` of the characteristic leaving `x0` at `t0`.
    pub fn flow(&self, x0: f64, t: f64) -> f64 {
        let r1 = self.r1_init.eval(x0);
        let span = t - self.opts.t0;
        let m = ((span / self.dt).abs().ceil() as usize).max(1);
        let h = span / m as f64;
        let mut x = x0;
        for k in 0..m {
            let tk = self.opts.t0 + k as f64 * h;
            x = rk4_step(&|tt, xx| self.v1.eval(self.lam0[0] * tt + self.lam0[1] * xx, r1), tk, x, h);
        }
        x
    }

    /// Last time covered before any crossing.
    pub fn t_reached(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// `(r0, r1)` at `(t, x)`: the foot of the characteristic through the point
    /// is found by root finding on the flow map.
    pub fn sample(&self, t: f64, x: f64) -> Result<(f64, f64)> {
        if t < self.opts.t0 || t > self.t_reached() {
            return Err(Error::Evaluation(format!("t = {t} outside the traced interval [{}, {}]", self.opts.t0, self.t_reached())));
        }
        let n = (((t - self.opts.t0) / self.dt).round() as usize).min(self.positions.len() - 1);
        let pos = &self.positions[n];
        let j = pos.partition_point(|&p| p < x);
        if j == 0 || j == pos.len() {
            if j == 0 && (x - pos[0]).abs() < 1e-14 {
                return Ok((self.lam0[0] * t + self.lam0[1] * x, self.r1_init.eval(self.feet[0])));
            }
            return Err(Error::Evaluation(format!("x = {x} outside the traced characteristics at t = {t}")));
        }
        let (mut i0, mut i1) = (j - 1, j);
        // the stored time may differ from t by half a step
        while i0 > 0 && self.flow(self.feet[i0], t) > x {
            i0 -= 1;
        }
        while i1 + 1 < pos.len() && self.flow(self.feet[i1], t) < x {
            i1 += 1;
        }
        let x0 = find_root(|y| self.flow(y, t) - x, self.feet[i0], self.feet[i1])?;
        Ok((self.lam0[0] * t + self.lam0[1] * x, self.r1_init.eval(x0)))
    }
}
