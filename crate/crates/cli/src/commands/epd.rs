use jnu_core::epd::{
    asgeirsson_check, asgeirsson_check_quadrature, epd_residual, propagate, slow_decrease_profile,
};
use serde_json::{json, Value};

use super::{load_grid, params, save_grid, Output};
use crate::args::{EpdAsgeirsson, EpdCmd, EpdPropagate, EpdResidual, EpdSlowDecrease};
use crate::error::{CliError, Result};
use crate::report::{Files, Table};

pub fn run(cmd: &EpdCmd, files: &mut Files) -> Result<(&'static str, Value, Output)> {
    Ok(match cmd {
        EpdCmd::Propagate(a) => ("epd propagate", params(a), propagate_cmd(a, files)?),
        EpdCmd::Residual(a) => ("epd residual", params(a), residual(a, files)?),
        EpdCmd::Asgeirsson(a) => ("epd asgeirsson", params(a), asgeirsson(a, files)?),
        EpdCmd::Slowdecrease(a) => ("epd slowdecrease", params(a), slow(a)?),
    })
}

fn propagate_cmd(a: &EpdPropagate, files: &mut Files) -> Result<Output> {
    let f = load_grid(files, &a.f)?;
    let u = propagate(&f, a.t, a.alpha.0)?;
    if let Some(path) = &a.grid_out {
        save_grid(files, path, &u)?;
    }
    Ok(Output::new(json!({
        "dim": f.dim(),
        "points": f.points(),
        "sup_norm_in": f.sup_norm(),
        "sup_norm_out": u.sup_norm(),
    })))
}

fn residual(a: &EpdResidual, files: &mut Files) -> Result<Output> {
    let f = load_grid(files, &a.f)?;
    let coarse = epd_residual(&f, a.alpha.0, &a.t.0, a.ht)?;
    let fine = epd_residual(&f, a.alpha.0, &a.t.0, a.ht / 2.0)?;
    let mut table = Table::new(&["t", "residual_h", "residual_h_half", "order"]);
    let mut orders = Vec::new();
    for ((t, c), h) in a.t.0.iter().zip(&coarse).zip(&fine) {
        let order = (c / h).log2();
        orders.push(order);
        table.push(vec![json!(t), json!(c), json!(h), json!(order)]);
    }
    Ok(Output::with_table(json!({ "orders": orders }), table))
}

fn asgeirsson(a: &EpdAsgeirsson, files: &mut Files) -> Result<Output> {
    let f = load_grid(files, &a.f)?;
    let x = a.x.as_ref().map_or_else(|| vec![0; f.dim()], |l| l.0.clone());
    if x.len() != f.dim() {
        return Err(CliError::Arg(format!("--x needs {} indices", f.dim())));
    }
    let spectral = asgeirsson_check(&f, a.alpha.0, &x, &a.times.0)?;
    let quadrature = if a.quadrature {
        let coords: Vec<f64> = x.iter().map(|&i| i as f64 * f.spacing()).collect();
        Some(asgeirsson_check_quadrature(&f, &coords, &a.times.0)?)
    } else {
        None
    };
    Ok(Output::new(json!({ "spectral": spectral, "quadrature": quadrature })))
}

fn slow(a: &EpdSlowDecrease) -> Result<Output> {
    let s = slow_decrease_profile(a.nu.0, a.t, a.xi_max)?;
    Ok(Output::new(serde_json::to_value(s).expect("serializes")))
}
