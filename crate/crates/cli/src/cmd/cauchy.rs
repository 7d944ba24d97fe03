//! The Cauchy data carry invariants only, so the state columns of the output
//! are `nan` and a row fails when its invariants could not be solved.

use rayon::prelude::*;
use rankwave::cauchy::{build_from_curve, solve_cauchy, CauchyCurve};
use rankwave::funcs::{CovectorFunc, Func1, Func2};
use rankwave::io::{parse_curve_csv, Config, FieldRow};
use rankwave::SpacetimePoint;

use super::{dat_block, emit_rows, failure_summary, grid, has_grid};
use crate::{CliError, CliResult, Ctx};

fn lam(cfg: &Config) -> CliResult<CovectorFunc> {
    let c: Vec<Func1> = ["lam.t", "lam.x", "lam.y", "lam.z"]
        .iter()
        .map(|k| cfg.opt_func(k)?.ok_or_else(|| CliError::config(format!("missing key {k}"))))
        .collect::<CliResult<_>>()?;
    let d = c.clone();
    Ok(CovectorFunc::new(move |r| std::array::from_fn(|i| c[i].eval(r)))
        .with_derivative(move |r| std::array::from_fn(|i| d[i].deriv(r))))
}

/// `phi(r0, r1) = f(r0) + g(r1) + c r0 r1`.
fn phi(cfg: &Config) -> CliResult<Func2> {
    let f = cfg.func_or("phi.r0", "const:0")?;
    let g = cfg.func_or("phi.r1", "const:0")?;
    let c = cfg.f64_or("phi.cross", 0.0)?;
    let (f0, g0) = (f.clone(), g.clone());
    Ok(Func2::new(move |a, b| f0.eval(a) + g0.eval(b) + c * a * b)
        .with_d0(move |a, b| f.deriv(a) + c * b)
        .with_d1(move |a, b| g.deriv(b) + c * a))
}

pub fn run(ctx: Ctx) -> CliResult {
    let cfg = &ctx.cfg;
    let path = ctx.path(&cfg.str("curve")?);
    let lam = lam(cfg)?;
    let phi = phi(cfg)?;
    let bracket = cfg.opt_list("r1_bracket")?;
    let g = if has_grid(cfg) { Some(grid(cfg)?) } else { None };
    let csv = cfg.opt_str("output");
    let dat = cfg.opt_str("output.dat");
    cfg.finish()?;

    let text = std::fs::read_to_string(&path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let table = parse_curve_csv(&text)?;
    let r0 = table.r0.clone().ok_or_else(|| CliError::config("curve CSV needs an r0 column"))?;
    let curve = match (table.r1.clone(), bracket) {
        (Some(r1), _) => CauchyCurve::new(table.s.clone(), &table.points, r0, r1)?,
        (None, Some(b)) if b.len() == 2 => CauchyCurve::from_r0_only(table.s.clone(), &table.points, r0, &lam, &phi, (b[0], b[1]))?,
        (None, _) => return Err(CliError::config("curve CSV without r1 needs r1_bracket = lo,hi")),
    };
    let sol = build_from_curve(curve, phi, lam)?;

    let pts: Vec<SpacetimePoint> = match &g {
        Some(g) => g.points().collect(),
        None => table.points.iter().map(|p| SpacetimePoint::from_array(*p)).collect(),
    };
    let results: Vec<_> = pts
        .par_iter()
        .map(|pt| match solve_cauchy(&sol, pt) {
            Ok(r) => (FieldRow { pt: *pt, state: None, r: Some(r) }, None),
            Err(e) => (FieldRow { pt: *pt, state: None, r: None }, Some(format!("{e} at t={}, x={:?}", pt.t, pt.x))),
        })
        .collect();
    let first_err = results.iter().find_map(|(_, e)| e.clone());
    let rows: Vec<FieldRow> = results.into_iter().map(|(r, _)| r).collect();

    let tr = sol.transversality();
    let vb = sol.validity_box();
    let mut report = format!(
        "samples={}\nmargin_lam0={:.6e} at={}\nmargin_lam1={:.6e} at={}\non_curve_residual={:.3e}\n",
        sol.curve().len(),
        tr.min[0],
        tr.argmin[0],
        tr.min[1],
        tr.argmin[1],
        sol.on_curve_residual_max()
    );
    for (a, (lo, hi)) in ["t", "x", "y", "z"].iter().zip(vb) {
        report.push_str(&format!("validity.{a}={lo:.6e},{hi:.6e}\n"));
    }
    report.push_str(&format!("rows={}\n", rows.len()));
    if csv.is_some() {
        print!("{report}");
    } else {
        eprint!("{report}");
    }
    let block = g.as_ref().map_or(0, dat_block);
    emit_rows(&ctx, &rows, block, csv, dat)?;
    failure_summary(&rows, first_err)
}
