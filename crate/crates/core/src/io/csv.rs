use crate::error::{Error, Result};
use crate::types::{FluidState, RiemannPair, SpacetimePoint};

/// Exact header of the sampled-field CSV.
pub const FIELD_HEADER: &str = "t,x,y,z,rho,p,v1,v2,v3,r0,r1";

/// Columns of a curve CSV. `r0` and `r1` are each optional.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub s: Vec<f64>,
    pub points: Vec<[f64; 4]>,
    pub r0: Option<Vec<f64>>,
    pub r1: Option<Vec<f64>>,
}

/// One sampled point. Missing values are written as `nan`; a row without
/// invariants is an evaluation failure.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRow {
    pub pt: SpacetimePoint,
    pub state: Option<FluidState>,
    pub r: Option<RiemannPair>,
}

impl FieldRow {
    pub fn new(pt: SpacetimePoint, value: Option<(FluidState, RiemannPair)>) -> Self {
        match value {
            Some((s, r)) => Self { pt, state: Some(s), r: Some(r) },
            None => Self { pt, state: None, r: None },
        }
    }

    pub fn is_failed(&self) -> bool {
        self.r.is_none()
    }
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes())
}

fn parse_cell(cell: &str, line: usize, allow_nan: bool) -> Result<f64> {
    let v: f64 = cell.parse().map_err(|_| Error::Parse { line, msg: format!("not a number: {cell:?}") })?;
    if v.is_finite() || (allow_nan && v.is_nan()) {
        Ok(v)
    } else {
        Err(Error::Parse { line, msg: format!("non-finite value {cell:?}") })
    }
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Parse { line, msg: e.to_string() }
}

/// Reads `s,t,x,y,z[,r0][,r1]` in any column order.
pub fn parse_curve_csv(text: &str) -> Result<CurveTable> {
    let mut rdr = reader(text);
    let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let col = |name: &str| header.iter().position(|h| h == name);
    for (i, h) in header.iter().enumerate() {
        if !["s", "t", "x", "y", "z", "r0", "r1"].contains(&h.as_str()) {
            return Err(Error::Parse { line: 1, msg: format!("unknown column {h:?}") });
        }
        if header[..i].contains(h) {
            return Err(Error::Parse { line: 1, msg: format!("duplicate column {h:?}") });
        }
    }
    let req: Vec<usize> = ["s", "t", "x", "y", "z"]
        .iter()
        .map(|n| col(n).ok_or_else(|| Error::Parse { line: 1, msg: format!("missing column {n:?}") }))
        .collect::<Result<_>>()?;
    let (c0, c1) = (col("r0"), col("r1"));
    let mut out = CurveTable { s: vec![], points: vec![], r0: c0.map(|_| vec![]), r1: c1.map(|_| vec![]) };
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() != header.len() {
            return Err(Error::Parse { line, msg: format!("expected {} fields, got {}", header.len(), rec.len()) });
        }
        let get = |i: usize| parse_cell(&rec[i], line, false);
        out.s.push(get(req[0])?);
        out.points.push([get(req[1])?, get(req[2])?, get(req[3])?, get(req[4])?]);
        if let (Some(i), Some(v)) = (c0, out.r0.as_mut()) {
            v.push(get(i)?);
        }
        if let (Some(i), Some(v)) = (c1, out.r1.as_mut()) {
            v.push(get(i)?);
        }
    }
    if out.s.is_empty() {
        return Err(Error::Parse { line: 1, msg: "curve has no samples".into() });
    }
    Ok(out)
}

/// 17 significant digits; `nan` for missing values.
fn fmt(v: f64) -> String {
    if v.is_nan() { "nan".into() } else { format!("{v:.16e}") }
}

fn row_values(r: &FieldRow) -> [f64; 11] {
    let p = r.pt.to_array();
    let s = r.state.as_ref().map_or([f64::NAN; 5], FluidState::to_array);
    let q = r.r.map_or([f64::NAN; 2], |q| [q.r0, q.r1]);
    [p[0], p[1], p[2], p[3], s[0], s[1], s[2], s[3], s[4], q[0], q[1]]
}

pub fn write_field_csv(rows: &[FieldRow]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * 260);
    out.push_str(FIELD_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&row_values(r).map(fmt).join(","));
        out.push('\n');
    }
    out
}

/// Whitespace-separated variant for gnuplot: a `#` header and a blank line
/// after every `block` rows.
pub fn write_field_dat(rows: &[FieldRow], block: usize) -> String {
    let mut out = format!("# {}\n", FIELD_HEADER.replace(',', " "));
    for (i, r) in rows.iter().enumerate() {
        out.push_str(&row_values(r).map(fmt).join(" "));
        out.push('\n');
        if block > 0 && (i + 1) % block == 0 && i + 1 < rows.len() {
            out.push('\n');
        }
    }
    out
}

/// Reads a field CSV back; failed rows come back with `nan` entries.
pub fn parse_field_csv(text: &str) -> Result<Vec<[f64; 11]>> {
    let mut rdr = reader(text);
    let header = rdr.headers().map_err(csv_err)?.iter().collect::<Vec<_>>().join(",");
    if header != FIELD_HEADER {
        return Err(Error::Parse { line: 1, msg: format!("header must be {FIELD_HEADER:?}") });
    }
    let mut rows = vec![];
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() != 11 {
            return Err(Error::Parse { line, msg: format!("expected 11 fields, got {}", rec.len()) });
        }
        let mut v = [0.0; 11];
        for (k, cell) in rec.iter().enumerate() {
            v[k] = parse_cell(cell, line, k >= 4)?;
        }
        rows.push(v);
    }
    Ok(rows)
}
