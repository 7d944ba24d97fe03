pub mod catastrophe;
pub mod cauchy;
pub mod elements;
pub mod field;
pub mod verify;

use std::io::Write;

use rankwave::io::{write_field_csv, write_field_dat, Config, FieldRow};
use rankwave::{make_grid, Grid4};

use crate::{CliError, CliResult, Ctx};

const AXES: [&str; 4] = ["t", "x", "y", "z"];

/// `grid.<axis>.{lo,hi,n}`; an axis without keys is the single point 0.
pub fn grid(cfg: &Config) -> CliResult<Grid4> {
    let mut ranges = [(0.0, 0.0); 4];
    let mut counts = [1; 4];
    for (i, a) in AXES.iter().enumerate() {
        let lo = cfg.f64_or(&format!("grid.{a}.lo"), 0.0)?;
        let hi = cfg.f64_or(&format!("grid.{a}.hi"), lo)?;
        let n = cfg.usize_or(&format!("grid.{a}.n"), 1)?;
        ranges[i] = (lo, hi);
        counts[i] = n;
    }
    Ok(make_grid(ranges, counts)?)
}

pub fn has_grid(cfg: &Config) -> bool {
    cfg.keys().any(|k| k.starts_with("grid."))
}

/// Rows per gnuplot block: the length of the fastest axis with more than one point.
pub fn dat_block(g: &Grid4) -> usize {
    g.axes.iter().rev().map(|a| a.count).find(|&n| n > 1).unwrap_or(0)
}

pub fn write_text(ctx: &Ctx, path: Option<&str>, text: &str) -> CliResult {
    match path {
        Some(p) => {
            let full = ctx.path(p);
            std::fs::write(&full, text).map_err(|e| CliError::config(format!("{}: {e}", full.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::config(format!("stdout: {e}")))
        }
    }
}

/// Writes the CSV (to `output`, or stdout) and the optional `.dat` variant.
/// Reports go to stderr when the CSV takes stdout.
pub fn emit_rows(ctx: &Ctx, rows: &[FieldRow], block: usize, csv_path: Option<String>, dat_path: Option<String>) -> CliResult {
    write_text(ctx, csv_path.as_deref(), &write_field_csv(rows))?;
    if let Some(p) = dat_path {
        write_text(ctx, Some(&p), &write_field_dat(rows, block))?;
    }
    Ok(())
}

/// Exit 2 with a summary when any row failed.
pub fn failure_summary(rows: &[FieldRow], first_err: Option<String>) -> CliResult {
    let failed = rows.iter().filter(|r| r.is_failed()).count();
    if failed == 0 {
        return Ok(());
    }
    let detail = first_err.map(|e| format!("; first failure: {e}")).unwrap_or_default();
    Err(CliError::precondition(format!("{failed} of {} rows failed to evaluate (written as nan){detail}", rows.len())))
}

pub fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(",")
}
