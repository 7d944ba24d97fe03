use rankwave::verify::catastrophe_scan;

use crate::family::{build, AnyField};
use crate::{CliError, CliResult, Ctx};

pub fn run(mut ctx: Ctx) -> CliResult {
    if !ctx.cfg.contains("K") {
        return Err(CliError::config("missing key K"));
    }
    if !ctx.cfg.contains("family") {
        ctx.cfg.set_override("family=e0a")?;
    }
    let cfg = &ctx.cfg;
    let n = cfg.usize_or("catastrophe.n", 41)?;
    let frac = cfg.f64_or("catastrophe.frac", 0.9)?;
    let h = cfg.f64_or("catastrophe.h", 1e-6)?;
    let tol = cfg.f64_or("catastrophe.tol", 0.02)?;
    let field = build(cfg)?;
    let AnyField::E0A(f) = &field else {
        return Err(CliError::precondition("the catastrophe scan needs a family with a blow-up law (e0a)"));
    };
    cfg.finish()?;
    if n < 4 || !(frac > 0.0 && frac < 1.0) {
        return Err(CliError::config("catastrophe.n must be at least 4 and catastrophe.frac in (0, 1)"));
    }
    println!("K={:.16e}", f.config().k);
    let Some(ts) = f.catastrophe_time() else {
        println!("predicted=none");
        println!("result=none detected");
        return Ok(());
    };
    let pts = f.catastrophe_probe_points()?;
    let times: Vec<f64> = (0..n).map(|i| frac * ts * i as f64 / (n - 1) as f64).collect();
    let rep = catastrophe_scan(f, &pts, &times, h);
    let skipped = rep.samples.iter().filter(|s| s.1.is_none()).count();
    println!("predicted={ts:.16e}");
    println!("samples={} failed={skipped} t_max={:.16e}", times.len(), times[n - 1]);
    let Some(fit) = rep.fit else {
        println!("fitted=none");
        println!("status=FAIL");
        return Err(CliError::verification("no blow-up law fits the gradient history"));
    };
    let rel = (fit.t_star - ts).abs() / ts;
    println!("fitted={:.16e} ci={:.3e} C={:.6e} r2={:.12}", fit.t_star, fit.t_star_ci, fit.c, fit.r2);
    println!("rel_error={rel:.3e}");
    let ok = rel <= tol;
    println!("status={}", if ok { "PASS" } else { "FAIL" });
    if ok {
        Ok(())
    } else {
        Err(CliError::verification(format!("fitted t* off by {rel:.3e} relative (tolerance {tol})")))
    }
}
