use super::*;
use crate::funcs::Func1;
use crate::solver::quad::quad_adaptive;
use crate::solver::{alpha_nonzero_invariants, AlphaNonzeroSpec, AlphaZeroSpec, WaveComponent};

fn lam() -> CovectorFunc {
    CovectorFunc::new(|r: f64| [1.0, r.cos(), r.sin(), 0.3]).with_derivative(|r: f64| [0.0, -r.sin(), r.cos(), 0.0])
}

fn phi() -> Func2 {
    Func2::new(|a, b| 0.2 * a * b).with_d0(|_, b| 0.2 * b).with_d1(|a, _| 0.2 * a)
}

fn exact() -> AlphaNonzeroSpec {
    AlphaNonzeroSpec::new(lam(), phi(), Func1::new(|r| 0.5 * r).with_derivative(|_| 0.5))
}

fn exact_at(spec: &AlphaNonzeroSpec, p: [f64; 4], seed: RiemannPair) -> RiemannPair {
    let opts = PairOptions { tol: 1e-13, ..PairOptions::default() };
    alpha_nonzero_invariants(spec, &SpacetimePoint::from_array(p), seed, &opts).unwrap().r
}

/// Exact data along `q(s) = p0 + s v` pushed onto the level sets of the exact solution.
fn sampled_curve(p0: [f64; 4], v: [f64; 4], n: usize) -> CauchyCurve {
    let spec = exact();
    let s: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let mut pts = vec![];
    let mut r0 = vec![];
    let mut r1 = vec![];
    for &si in &s {
        let (a, b) = (0.2 + 0.5 * si, -0.3 + 0.8 * si);
        let q: [f64; 4] = std::array::from_fn(|k| p0[k] + si * v[k]);
        let (l, ld) = (lam().eval(b), lam().deriv(b));
        let rhs = [spec.psi0(a, b).unwrap() - pair4(l, q), spec.psi1(a, b).unwrap() - pair4(ld, q)];
        let m = [[pair4(l, l), pair4(l, ld)], [pair4(ld, l), pair4(ld, ld)]];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let u = (rhs[0] * m[1][1] - rhs[1] * m[0][1]) / det;
        let w = (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det;
        pts.push(std::array::from_fn(|k| q[k] + u * l[k] + w * ld[k]));
        r0.push(a);
        r1.push(b);
    }
    CauchyCurve::new(s, &pts, r0, r1).unwrap()
}

fn curves() -> Vec<([f64; 4], [f64; 4])> {
    vec![
        ([0.5, -0.3, 0.2, 0.0], [2.0, 0.5, 0.2, -0.3]),
        ([0.5, -0.3, 0.2, 0.0], [3.0, 0.4, 0.5, 0.2]),
        ([0.5, -0.3, 0.2, 0.0], [2.0, 0.5, -0.4, 0.3]),
    ]
}

fn built(i: usize) -> CauchySolution {
    let (p0, v) = curves()[i];
    build_from_curve(sampled_curve(p0, v, 41), phi(), lam()).unwrap()
}

#[test]
fn exact_data_are_monotone_and_transversal() {
    for (p0, v) in curves() {
        let c = sampled_curve(p0, v, 41);
        let sol = build_from_curve(c, phi(), lam()).unwrap();
        assert!(sol.transversality().min[0] > 0.1 && sol.transversality().min[1] > 0.1);
    }
}

#[test]
fn on_curve_round_trip() {
    for i in 0..3 {
        let sol = built(i);
        assert!(sol.on_curve_residual_max() < 1e-12);
        let c = sol.curve().clone();
        for k in 0..80 {
            let s = (k as f64 + 0.37) / 80.0;
            let want = c.data(s);
            let got = solve_cauchy(&sol, &SpacetimePoint::from_array(c.point(s))).unwrap();
            assert!((got.r0 - want.r0).abs() < 1e-9 && (got.r1 - want.r1).abs() < 1e-9, "{i} {s} {got:?} {want:?}");
        }
    }
}

#[test]
fn recovers_unit_a_and_the_exact_solution_off_curve() {
    let spec = exact();
    let sol = built(0);
    let (lo, hi) = sol.curve().r0_range();
    // spline end slopes are one order less accurate than the interior
    for k in 0..=20 {
        let r0 = lo + (hi - lo) * k as f64 / 20.0;
        let tol = if (1..20).contains(&k) { 1e-6 } else { 1e-4 };
        assert!((sol.a_fn(r0).unwrap() - 1.0).abs() < tol, "{k}");
    }
    let c = sol.curve().clone();
    let b = sol.validity_box();
    assert!(b.iter().all(|(l, h)| h > l));
    for s in [0.2, 0.5, 0.8] {
        let mut p = c.point(s);
        p[3] += 0.02;
        let want = exact_at(&spec, p, c.data(s));
        let got = solve_cauchy(&sol, &SpacetimePoint::from_array(p)).unwrap();
        assert!((got.r0 - want.r0).abs() < 1e-5 && (got.r1 - want.r1).abs() < 1e-5, "{got:?} {want:?}");
    }
}

#[test]
fn big_phi_matches_direct_quadrature_in_r0() {
    let sol = built(1);
    let c = sol.curve().clone();
    let r0_first = c.data(c.params()[0]).r0;
    for s in [0.25, 0.6, 0.9] {
        let d = c.data(s);
        // panels between the r0 knot values, where a(r0) is smooth
        let mut cuts: Vec<f64> = c.params().iter().map(|&v| c.data(v).r0).filter(|&v| v > r0_first && v < d.r0).collect();
        cuts.insert(0, r0_first);
        cuts.push(d.r0);
        let direct: f64 = cuts
            .windows(2)
            .map(|w| quad_adaptive(|xi| sol.a_fn(xi).unwrap() * (-phi().eval(xi, d.r1)).exp(), w[0], w[1], 1e-13).unwrap())
            .sum();
        let want = pair4(lam().eval(d.r1), c.point(s)) - direct;
        assert!((sol.big_phi(d.r1).unwrap() - want).abs() < 1e-9);
    }
}

#[test]
fn margin_is_the_g0_slope() {
    let sol = built(2);
    let c = sol.curve().clone();
    let s = 0.45;
    let d = c.data(s);
    let h = 1e-6;
    let slope = (sol.g0(RiemannPair::new(d.r0 + h, d.r1)).unwrap() - sol.g0(RiemannPair::new(d.r0 - h, d.r1)).unwrap()) / (2.0 * h);
    let want = pair4(lam().eval(d.r1), c.tangent(s)) / c.r0.deriv(s);
    assert!((slope - want).abs() < 1e-6 * want.abs(), "{slope} {want}");
}

#[test]
fn field_satisfies_the_pfaffian_system() {
    let sol = built(0);
    let c = sol.curve().clone();
    let h = 1e-6;
    for s in [0.3, 0.7] {
        let mut p = c.point(s);
        p[1] += 0.01;
        let r = solve_cauchy(&sol, &SpacetimePoint::from_array(p)).unwrap();
        let mut g0 = [0.0; 4];
        let mut g1 = [0.0; 4];
        for k in 0..4 {
            let mut a = p;
            let mut b = p;
            a[k] += h;
            b[k] -= h;
            let ra = sol.solve_from(&SpacetimePoint::from_array(a), r).unwrap();
            let rb = sol.solve_from(&SpacetimePoint::from_array(b), r).unwrap();
            g0[k] = (ra.r0 - rb.r0) / (2.0 * h);
            g1[k] = (ra.r1 - rb.r1) / (2.0 * h);
        }
        let l = lam().eval(r.r1);
        let e = phi().eval(r.r0, r.r1).exp();
        let l0: [f64; 4] = std::array::from_fn(|i| l[i] * e);
        let ld = lam().deriv(r.r1);
        let pr = phi().d_r1(r.r0, r.r1);
        let l1: [f64; 4] = std::array::from_fn(|i| pr * l[i] + ld[i]);
        for (g, f) in [(g0, l0), (g1, l1)] {
            let k = pair4(g, f) / pair4(f, f);
            let res: f64 = (0..4).map(|i| (g[i] - k * f[i]).powi(2)).sum::<f64>().sqrt();
            assert!(res < 1e-6 * pair4(g, g).sqrt(), "{res}");
        }
    }
}

#[test]
fn seeds_in_the_box_agree() {
    let sol = built(0);
    let c = sol.curve().clone();
    let mut p = c.point(0.5);
    p[2] += 0.01;
    let pt = SpacetimePoint::from_array(p);
    let base = solve_cauchy(&sol, &pt).unwrap();
    for (a, b) in [(0.02, 0.0), (-0.03, 0.02), (0.0, -0.04)] {
        let r = sol.solve_from(&pt, RiemannPair::new(base.r0 + a, base.r1 + b)).unwrap();
        assert!((r.r0 - base.r0).abs() < 1e-10 && (r.r1 - base.r1).abs() < 1e-10);
    }
    let near = solve_cauchy(&sol, &SpacetimePoint::from_array([p[0], p[1], p[2] + 1e-4, p[3]])).unwrap();
    assert!((near.r0 - base.r0).abs() < 1e-2 && (near.r1 - base.r1).abs() < 1e-2);
}

#[test]
fn outside_box_is_an_error() {
    let sol = built(0);
    let b = sol.validity_box();
    let p = [b[0].1 + 1.0, 0.0, 0.0, 0.0];
    assert!(matches!(solve_cauchy(&sol, &SpacetimePoint::from_array(p)), Err(Error::Evaluation(_))));
}

#[test]
fn tangential_curve_is_rejected() {
    let n = 11;
    let s: Vec<f64> = (0..n).map(|i| i as f64 / 10.0).collect();
    let pts: Vec<[f64; 4]> = s.iter().map(|&v| [0.0, v, 0.0, 0.0]).collect();
    let c = CauchyCurve::new(s.clone(), &pts, s.clone(), s.iter().map(|v| 2.0 * v).collect()).unwrap();
    let err = build_from_curve(c, phi(), CovectorFunc::constant([1.0, 0.0, 0.0, 0.5])).unwrap_err();
    assert!(matches!(err, Error::NotTransversal { form: 0, .. }));
    assert!(err.to_string().contains("condition 2"));
}

#[test]
fn non_monotone_data_are_rejected() {
    let s = vec![0.0, 0.5, 1.0];
    let pts = vec![[0.0; 4], [0.5, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]];
    assert!(matches!(CauchyCurve::new(s.clone(), &pts, vec![0.0, 1.0, 1.0], vec![0.0, 1.0, 2.0]), Err(Error::NotMonotone { index: 2 })));
    assert!(matches!(CauchyCurve::new(s, &pts, vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.5]), Err(Error::NotMonotone { index: 2 })));
}

#[test]
fn r1_from_unit_a_restriction() {
    let full = sampled_curve([0.5, -0.3, 0.2, 0.0], [2.0, 0.5, 0.2, -0.3], 41);
    let s = full.params().to_vec();
    let pts: Vec<[f64; 4]> = s.iter().map(|&v| full.point(v)).collect();
    let r0: Vec<f64> = s.iter().map(|&v| full.data(v).r0).collect();
    let c = CauchyCurve::from_r0_only(s.clone(), &pts, r0, &lam(), &phi(), (-0.45, 0.6)).unwrap();
    for &v in &s[1..s.len() - 1] {
        assert!((c.data(v).r1 - full.data(v).r1).abs() < 1e-4);
    }
}

fn az_spec(phi0: Func1) -> AlphaZeroSpec {
    let wave = WaveComponent {
        chi: Func2::new(|a, b| 1.0 + 0.1 * a * b),
        a_fn: CovectorFunc::new(|r: f64| [0.2, 0.0, 1.0 + 0.1 * r, 0.0]),
        psi: Func1::constant(0.0),
        bracket: (-5.0, 5.0),
    };
    AlphaZeroSpec::new([0.5, 1.0, 0.0, 0.2], 0.0, phi0, wave, (-10.0, 10.0))
}

fn az_curve() -> AlphaZeroCurve {
    let s: Vec<f64> = (0..21).map(|i| i as f64 / 20.0).collect();
    AlphaZeroCurve {
        points: s.iter().map(|&v| [0.1 * v, 0.3 + 0.2 * v, v, 0.0]).collect(),
        r1: s.iter().map(|&v| -0.5 + v).collect(),
        s,
        anchor: 3,
        r0_anchor: 0.4,
    }
}

#[test]
fn alpha_zero_identity_phase_is_affine() {
    let curve = az_curve();
    let out = alpha_zero_cauchy(&curve, &az_spec(Func1::constant(0.0))).unwrap();
    let c0 = [0.5, 1.0, 0.0, 0.2];
    for (i, p) in curve.points.iter().enumerate() {
        let want = 0.4 + pair4(c0, *p) - pair4(c0, curve.points[3]);
        assert!((out.r0_on_curve[i] - want).abs() < 1e-12);
    }
}

#[test]
fn alpha_zero_data_satisfy_the_relations_on_the_curve() {
    let curve = az_curve();
    let out = alpha_zero_cauchy(&curve, &az_spec(Func1::new(|r| 0.3 * r).with_derivative(|_| 0.3))).unwrap();
    assert!((out.r0_on_curve[3] - 0.4).abs() < 1e-12);
    for (i, p) in curve.points.iter().enumerate() {
        let pt = SpacetimePoint::from_array(*p);
        let res = out.spec.wave_residual(0, out.r0_on_curve[i], curve.r1[i], &pt).unwrap();
        assert!(res.abs() < 1e-9, "{i}: {res}");
        // margin is (chi C + A) . dh/dr1 with dh/dr1 = (0.1, 0.2, 1, 0)
        let (r0, r1) = (out.r0_on_curve[i], curve.r1[i]);
        let chi = 1.0 + 0.1 * r0 * r1;
        let want = chi * (0.05 + 0.2) + 0.02 + (1.0 + 0.1 * r1);
        assert!((out.margins[i] - want).abs() < 1e-9);
    }
    let r = crate::solver::alpha_zero_invariants(&out.spec, &SpacetimePoint::from_array(curve.points[10])).unwrap();
    assert!((r.r1 - curve.r1[10]).abs() < 1e-8 && (r.r0 - out.r0_on_curve[10]).abs() < 1e-10);
}

#[test]
fn alpha_zero_zero_margin_is_rejected() {
    let mut curve = az_curve();
    // tangent along y only, annihilated by a covector with no y part
    curve.points = curve.s.iter().map(|&v| [0.0, 0.0, v, 0.0]).collect();
    let mut spec = az_spec(Func1::constant(0.0));
    spec.c = [1.0, 0.0, 0.0, 0.0];
    spec.waves[0].a_fn = CovectorFunc::constant([0.0, 1.0, 0.0, 0.0]);
    assert!(matches!(alpha_zero_cauchy(&curve, &spec), Err(Error::NotTransversal { form: 1, .. })));
}

fn smoothstep_data(c: f64) -> Func1 {
    Func1::new(move |x: f64| {
        let u = x.clamp(0.0, 1.0);
        c * (1.0 - (3.0 * u * u - 2.0 * u * u * u))
    })
}

#[test]
fn burgers_breaking_time() {
    for c in [1.0, 0.5, 2.0] {
        let v1 = Func2::new(|_, r1| r1);
        let tr = trace_characteristics(&v1, &smoothstep_data(c), (0.0, 1.0), [0.0, 0.0], TraceOptions::new(0.0, 5.0)).unwrap();
        let want = 1.0 / (1.5 * c);
        let got = tr.crossing.expect("crossing").t;
        assert!((got - want).abs() < 0.01 * want, "{c}: {got} vs {want}");
        assert!(tr.t_reached() <= got);
    }
}

#[test]
fn constant_speed_translates_the_strip() {
    let v1 = Func2::constant(0.7);
    let tr = trace_characteristics(&v1, &smoothstep_data(1.0), (0.0, 1.0), [0.0, 0.0], TraceOptions::new(0.0, 2.0)).unwrap();
    assert!(tr.crossing.is_none());
    for (t, (a, b)) in tr.times.iter().zip(&tr.strip) {
        assert!((a - 0.7 * t).abs() < 1e-12 && (b - 1.0 - 0.7 * t).abs() < 1e-12);
    }
    let (_, r1) = tr.sample(2.0, 1.4 + 0.5).unwrap();
    assert!((r1 - 0.5).abs() < 1e-10);
}

#[test]
fn rk4_order_and_outside_strip() {
    // dx/dt = r1 cos(r0) with r0 = t, so x = x0 + r1(x0) sin t
    let v1 = Func2::new(|a: f64, b| b * a.cos());
    let data = smoothstep_data(0.3);
    let err = |steps: usize| {
        let tr = trace_characteristics(&v1, &data, (0.0, 1.0), [1.0, 0.0], TraceOptions { steps, n_chars: 11, ..TraceOptions::new(0.0, 2.0) }).unwrap();
        tr.feet.iter().zip(tr.positions.last().unwrap()).map(|(x0, x)| (x - (x0 + data.eval(*x0) * 2f64.sin())).abs()).fold(0.0, f64::max)
    };
    let (e1, e2) = (err(10), err(20));
    assert!(e1 / e2 > 12.0, "{e1} {e2}");
    let tr = trace_characteristics(&v1, &data, (0.0, 1.0), [1.0, 0.0], TraceOptions::new(0.0, 1.0)).unwrap();
    let (a, b) = *tr.strip.last().unwrap();
    let t = tr.t_reached();
    for x in [a - 0.2, b + 0.2] {
        let (r0, r1) = tr.sample(t, x).unwrap();
        let (_, r1b) = tr.sample(t, x + 1e-3).unwrap();
        assert!((r1 - r1b).abs() < 1e-14 && (r0 - t).abs() < 1e-14);
    }
    let (_, mid) = tr.sample(t, 0.5 * (a + b)).unwrap();
    assert!(mid > 0.0 && mid < 0.3);
}
