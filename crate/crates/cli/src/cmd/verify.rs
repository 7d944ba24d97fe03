use rayon::prelude::*;
use rankwave::verify::{decomposition_fit, euler_residual_convergence, jacobian_rank};
use rankwave::{Field, Result};

use super::grid;
use crate::family::{build, AnyField};
use crate::{CliError, CliResult, Ctx};

struct Check {
    name: &'static str,
    status: &'static str,
    detail: String,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: String) -> Self {
        Self { name, status: if ok { "PASS" } else { "FAIL" }, detail }
    }

    fn failed(name: &'static str, e: rankwave::Error) -> Self {
        Self { name, status: "FAIL", detail: format!("error=\"{e}\"") }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or("exact".into(), |o| format!("{o:.3}"))
}

fn euler(field: &AnyField, g: &rankwave::Grid4, h: f64, order: f64) -> Check {
    match euler_residual_convergence(field, g, field.params(), h) {
        Ok(rep) => {
            let orders = rep.order.map(|o| o.map(fmt_opt).join(",")).unwrap_or_else(|| "n/a".into());
            let rel = rep.relative_max().map(|v| format!("{v:.3e}")).join(",");
            Check::new(
                "euler_residual",
                rep.converges_with(order),
                format!("h={h:e} min_order={} orders={orders} rel_max={rel}", fmt_opt(rep.min_order())),
            )
        }
        Err(e) => Check::failed("euler_residual", e),
    }
}

fn rank(field: &AnyField, g: &rankwave::Grid4, h: f64, tol: f64) -> Check {
    let k = field.expected_rank();
    let reps: Result<Vec<_>> = (0..g.len()).into_par_iter().map(|i| jacobian_rank(field, &g.point(i), h, tol)).collect();
    match reps {
        Ok(reps) => {
            let worst_rank = reps.iter().map(|r| r.rank).max().unwrap_or(0);
            let ratio = reps.iter().map(|r| r.ratio(k)).fold(0.0, f64::max);
            Check::new(
                "jacobian_rank",
                worst_rank <= k,
                format!("expected<={k} max_rank={worst_rank} max_sigma{}/sigma1={ratio:.3e} points={}", k + 1, reps.len()),
            )
        }
        Err(e) => Check::failed("jacobian_rank", e),
    }
}

fn decomposition(field: &AnyField, g: &rankwave::Grid4, h: f64, tol: f64) -> Check {
    if field.elements_at(&g.point(0)).is_none() {
        return Check { name: "decomposition_fit", status: "SKIP", detail: "reason=\"family provides no elements\"".into() };
    }
    // the constructed elements are undefined where the wave parameter is stationary
    let fits: Result<Vec<_>> = (0..g.len())
        .into_par_iter()
        .map(|i| {
            let pt = g.point(i);
            match field.elements_at(&pt).expect("checked above") {
                Ok(el) => decomposition_fit(field, &pt, h, &el.gamma1, &el.lam1, &el.gamma0, &el.lam0).map(Some),
                Err(rankwave::Error::Singular(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    match fits {
        Ok(fits) => {
            let skipped = fits.iter().filter(|f| f.is_none()).count();
            let fits: Vec<_> = fits.into_iter().flatten().collect();
            let res = fits.iter().map(|f| f.rel_residual).fold(0.0, f64::max);
            let dev = fits.iter().map(|f| (f.coeff0 - 1.0).abs()).fold(0.0, f64::max);
            Check::new(
                "decomposition_fit",
                !fits.is_empty() && res < tol && dev < tol,
                format!("max_rel_residual={res:.3e} max_coeff0_dev={dev:.3e} points={} singular={skipped}", fits.len()),
            )
        }
        Err(e) => Check::failed("decomposition_fit", e),
    }
}

pub fn run(ctx: Ctx) -> CliResult {
    let cfg = &ctx.cfg;
    let field = build(cfg)?;
    let g = grid(cfg)?;
    let h = cfg.f64_or("verify.h", 2e-2)?;
    let order = cfg.f64_or("verify.order", 1.8)?;
    let rank_h = cfg.f64_or("verify.rank_h", 1e-5)?;
    let rank_tol = cfg.f64_or("verify.rank_tol", 1e-6)?;
    let fit_tol = cfg.f64_or("verify.fit_tol", 1e-4)?;
    cfg.finish()?;
    // make sure the grid is evaluable before the sweeps
    field.eval(&g.point(0))?;

    let checks = [
        euler(&field, &g, h, order),
        rank(&field, &g, rank_h, rank_tol),
        decomposition(&field, &g, rank_h, fit_tol),
        Check {
            name: "involutivity",
            status: "SKIP",
            detail: "reason=\"needs the forms as functions of (r0, r1); run on a construction, not a sampled field\"".into(),
        },
    ];
    let mut failed = Vec::new();
    for c in &checks {
        println!("check={} status={} {}", c.name, c.status, c.detail);
        if c.status == "FAIL" {
            failed.push(c.name);
        }
    }
    println!("overall={}", if failed.is_empty() { "PASS" } else { "FAIL" });
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::verification(format!("failed checks: {}", failed.join(", "))))
    }
}
