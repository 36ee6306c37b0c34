mod bessel;
mod epd;
mod liouville;
mod snapshot;

use std::path::Path;

use jnu_core::GridFunction;
use serde::Serialize;
use serde_json::Value;

use crate::args::Group;
use crate::error::Result;
use crate::report::{Files, Table};

pub struct Output {
    pub result: Value,
    pub table: Option<Table>,
}

impl Output {
    pub fn new(result: Value) -> Self {
        Self { result, table: None }
    }

    pub fn with_table(result: Value, table: Table) -> Self {
        Self { result, table: Some(table) }
    }
}

pub fn params<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

pub fn load_grid(files: &mut Files, path: &Path) -> Result<GridFunction> {
    let text = files.read(path)?;
    Ok(GridFunction::from_text(&text)?)
}

pub fn save_grid(files: &mut Files, path: &Path, grid: &GridFunction) -> Result<()> {
    files.write(path, &grid.to_text())
}

/// Runs the selected command; returns its name, echoed parameters and output.
pub fn dispatch(group: &Group, files: &mut Files) -> Result<(String, Value, Output)> {
    let (name, params, out) = match group {
        Group::Bessel(c) => bessel::run(c)?,
        Group::Liouville(c) => liouville::run(c)?,
        Group::Epd(c) => epd::run(c, files)?,
        Group::Snapshot(c) => snapshot::run(c, files)?,
    };
    Ok((name.to_string(), params, out))
}
