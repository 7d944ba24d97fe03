//! Plain-text inputs and outputs: flat `key=value` configs, curve CSVs and
//! sampled-field CSVs.

mod config;
mod csv;

pub use config::Config;
pub use csv::{parse_curve_csv, parse_field_csv, write_field_csv, write_field_dat, CurveTable, FieldRow, FIELD_HEADER};
