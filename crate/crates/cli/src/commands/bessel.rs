use jnu_core::zeros::{complex_zeros, real_zeros};
use jnu_core::BesselEvaluator;
use num_complex::Complex64;
use serde_json::{json, Value};

use super::{params, Output};
use crate::args::{BesselCmd, BesselEval, BesselRatio, BesselZeros};
use crate::error::{CliError, Result};
use crate::report::Table;

pub fn run(cmd: &BesselCmd) -> Result<(&'static str, Value, Output)> {
    Ok(match cmd {
        BesselCmd::Eval(a) => ("bessel eval", params(a), eval(a)?),
        BesselCmd::Zeros(a) => ("bessel zeros", params(a), zeros(a)?),
        BesselCmd::Ratio(a) => ("bessel ratio", params(a), ratio(a)?),
    })
}

fn eval(a: &BesselEval) -> Result<Output> {
    let e = BesselEvaluator::new(a.nu.0)?;
    let mut table = Table::new(&["z_re", "z_im", "j_re", "j_im", "dj_re", "dj_im", "scaled_re", "scaled_im"]);
    for &x in &a.x.0 {
        let z = Complex64::new(x, a.im);
        let (v, d, s) = (e.eval(z), e.derivative(z), e.eval_scaled(z));
        table.push(vec![
            json!(z.re),
            json!(z.im),
            json!(v.re),
            json!(v.im),
            json!(d.re),
            json!(d.im),
            json!(s.re),
            json!(s.im),
        ]);
    }
    let g = e.gamma_shifted();
    Ok(Output::with_table(json!({ "gamma_shifted": [g.re, g.im], "points": a.x.0.len() }), table))
}

fn zeros(a: &BesselZeros) -> Result<Output> {
    if a.count == 0 || a.start == 0 {
        return Err(CliError::Arg("--count and --start must be at least 1".into()));
    }
    let last = a.start + a.count - 1;
    let lattice = if a.nu.0.im == 0.0 {
        real_zeros(a.nu.0.re, last)?
    } else {
        complex_zeros(a.nu.0, a.start..=last)?
    };
    let mut table = Table::new(&["index", "re", "im", "residual"]);
    for entry in lattice.entries().iter().filter(|e| e.index >= a.start) {
        table.push(vec![json!(entry.index), json!(entry.value.re), json!(entry.value.im), json!(entry.residual)]);
    }
    let result = json!({
        "found": table.rows.len(),
        "missing": lattice.missing(),
        "max_residual": lattice.entries().iter().map(|e| e.residual).fold(0.0, f64::max),
    });
    Ok(Output::with_table(result, table))
}

fn ratio(a: &BesselRatio) -> Result<Output> {
    if a.k == 0 || a.n == 0 {
        return Err(CliError::Arg("zero indices start at 1".into()));
    }
    let lattice = real_zeros(a.nu, a.k.max(a.n))?;
    let v = lattice.real_values();
    let (ak, an) = (v[a.k - 1], v[a.n - 1]);
    Ok(Output::new(json!({ "a_k": ak, "a_n": an, "ratio": ak / an })))
}
