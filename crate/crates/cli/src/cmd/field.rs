use rayon::prelude::*;
use rankwave::io::FieldRow;

use super::{dat_block, emit_rows, failure_summary, grid};
use crate::family::{build, AnyField};
use crate::{CliResult, Ctx};

/// Evaluates `field` on every grid point in parallel; rows keep grid order.
pub fn sample(field: &AnyField, g: &rankwave::Grid4) -> (Vec<FieldRow>, Option<String>) {
    let results: Vec<_> = (0..g.len())
        .into_par_iter()
        .map(|k| {
            let pt = g.point(k);
            match field.eval_full(&pt) {
                Ok(v) => (FieldRow::new(pt, Some(v)), None),
                Err(e) => (FieldRow::new(pt, None), Some(format!("{} at t={}, x={:?}", e, pt.t, pt.x))),
            }
        })
        .collect();
    let first_err = results.iter().find_map(|(_, e)| e.clone());
    (results.into_iter().map(|(r, _)| r).collect(), first_err)
}

pub fn run(ctx: Ctx) -> CliResult {
    let field = build(&ctx.cfg)?;
    let g = grid(&ctx.cfg)?;
    let csv = ctx.cfg.opt_str("output");
    let dat = ctx.cfg.opt_str("output.dat");
    ctx.cfg.finish()?;
    let (rows, first_err) = sample(&field, &g);
    emit_rows(&ctx, &rows, dat_block(&g), csv, dat)?;
    failure_summary(&rows, first_err)
}
