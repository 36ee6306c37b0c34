use std::collections::BTreeMap;

use jnu_core::liouville::Lattice;
use jnu_core::snapshot::{
    compatibility_residual, kernel_witness, make_problem, reconstruct, small_denominator_scan,
    strong_compatibility_residual, Channel, FloorPolicy, DEFAULT_CANDIDATES,
};
use jnu_core::SnapshotProblem;
use serde_json::{json, Value};

use super::{load_grid, params, save_grid, Output};
use crate::args::{SnapshotCheck, SnapshotCmd, SnapshotMake, SnapshotPair, SnapshotReconstruct, SnapshotScan, SnapshotWitness};
use crate::error::{CliError, Result};
use crate::report::{Files, Table};

pub fn run(cmd: &SnapshotCmd, files: &mut Files) -> Result<(&'static str, Value, Output)> {
    Ok(match cmd {
        SnapshotCmd::Make(a) => ("snapshot make", params(a), make(a, files)?),
        SnapshotCmd::Check(a) => ("snapshot check", params(a), check(a, files)?),
        SnapshotCmd::Reconstruct(a) => ("snapshot reconstruct", params(a), reconstruct_cmd(a, files)?),
        SnapshotCmd::Scan(a) => ("snapshot scan", params(a), scan(a)?),
        SnapshotCmd::Witness(a) => ("snapshot witness", params(a), witness(a, files)?),
    })
}

fn make(a: &SnapshotMake, files: &mut Files) -> Result<Output> {
    let f = load_grid(files, &a.f)?;
    let p = make_problem(&f, a.r, a.s, a.alpha.0)?;
    save_grid(files, &a.g_out, p.g())?;
    save_grid(files, &a.h_out, p.h())?;
    Ok(Output::new(json!({ "compatibility": compatibility_residual(&p)? })))
}

fn load_pair(a: &SnapshotPair, files: &mut Files) -> Result<SnapshotProblem> {
    let g = load_grid(files, &a.g)?;
    let h = load_grid(files, &a.h)?;
    Ok(SnapshotProblem::new(g, h, a.r, a.s, a.alpha.0)?)
}

fn check(a: &SnapshotCheck, files: &mut Files) -> Result<Output> {
    let p = load_pair(&a.pair, files)?;
    let strong = match (a.a, a.b) {
        (Some(za), Some(zb)) => Some(strong_compatibility_residual(&p, za, zb)?),
        _ => None,
    };
    Ok(Output::new(json!({ "compatibility": compatibility_residual(&p)?, "strong_compatibility": strong })))
}

fn floor_policy(a: &SnapshotReconstruct, p: &SnapshotProblem) -> Result<FloorPolicy> {
    let base = FloorPolicy { absolute: a.absolute, scan: None };
    match a.floor.trim() {
        "absolute" => Ok(base),
        "auto" => {
            let g = p.g();
            let half = (g.points() / 2) as f64;
            let xi_top: f64 = g.frequency_unit() * half * (g.dim() as f64).sqrt();
            let reach = 10.0 * std::f64::consts::PI / p.r().min(p.s());
            let nu = p.multiplier().order();
            let scan = small_denominator_scan(p.r(), p.s(), nu, (1.05 * xi_top).max(reach), &DEFAULT_CANDIDATES)?;
            Ok(FloorPolicy { scan: scan.fitted_n.map(|n| (scan.fitted_c, n)), ..base })
        }
        other => {
            let parts: Vec<f64> = other.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(
                |_| CliError::Arg(format!("--floor must be `absolute`, `auto` or `C,N`, got `{other}`")),
            )?;
            match parts[..] {
                [c, n] if c > 0.0 && n >= 0.0 => Ok(FloorPolicy { scan: Some((c, n)), ..base }),
                _ => Err(CliError::Arg(format!("--floor C,N needs C > 0 and N ≥ 0, got `{other}`"))),
            }
        }
    }
}

fn reconstruct_cmd(a: &SnapshotReconstruct, files: &mut Files) -> Result<Output> {
    let p = load_pair(&a.pair, files)?;
    let policy = floor_policy(a, &p)?;
    let rep = reconstruct(&p, policy, a.tolerance)?;
    if let Some(path) = &a.f_out {
        save_grid(files, path, &rep.f)?;
    }
    let relative_error = match &a.truth {
        Some(path) => {
            let truth = load_grid(files, path)?;
            Some(rep.f.max_abs_diff(&truth)? / truth.sup_norm().max(f64::MIN_POSITIVE))
        }
        None => None,
    };
    // denominator profile, one row per distinct |k|²
    let g = p.g();
    let unit = g.frequency_unit();
    let mut profile: BTreeMap<u64, (f64, f64, Channel, bool)> = BTreeMap::new();
    let flagged_keys: std::collections::HashSet<u64> = rep
        .flagged
        .iter()
        .map(|idx| idx.iter().map(|&i| (i * i) as u64).sum())
        .collect();
    for k in 0..g.len() {
        let key = g.frequency_norm_sq(k);
        profile.entry(key).or_insert((
            rep.denominator_s[k],
            rep.denominator_r[k],
            rep.channels[k],
            flagged_keys.contains(&key),
        ));
    }
    let mut table = Table::new(&["xi", "d_s", "d_r", "channel", "flagged"]);
    for (key, (ds, dr, ch, fl)) in &profile {
        table.push(vec![
            json!(unit * (*key as f64).sqrt()),
            json!(ds),
            json!(dr),
            json!(ch),
            json!(fl),
        ]);
    }
    let result = json!({
        "flagged": rep.flagged,
        "residual_s": rep.residual_s,
        "residual_r": rep.residual_r,
        "compatibility": rep.compatibility,
        "min_denominator": rep.min_denominator(),
        "floor": {
            "absolute": rep.floor.absolute,
            "fitted_c": rep.floor.scan.map(|s| s.0),
            "fitted_n": rep.floor.scan.map(|s| s.1),
        },
        "relative_error": relative_error,
    });
    Ok(Output::with_table(result, table))
}

fn scan(a: &SnapshotScan) -> Result<Output> {
    let s = small_denominator_scan(a.r, a.s, a.nu.0, a.zmax, &a.candidates.0)?;
    let mut table = Table::new(&["exponent", "c_full", "c_half"]);
    for c in &s.candidates {
        table.push(vec![json!(c.exponent), json!(c.c_full), json!(c.c_half)]);
    }
    Ok(Output::with_table(serde_json::to_value(&s).expect("serializes"), table))
}

fn witness(a: &SnapshotWitness, files: &mut Files) -> Result<Output> {
    let lattice = Lattice::bessel(a.nu, a.bound + 10)?;
    let alpha = num_complex::Complex64::new(a.nu - (a.dim as f64 - 2.0) / 2.0, 0.0);
    let w = kernel_witness(a.r, a.s, &lattice, alpha, a.dim, a.points, a.bound)?;
    let Some(w) = w else {
        return Ok(Output::new(json!({ "found": false })));
    };
    if let Some(path) = &a.f_out {
        save_grid(files, path, &w.f)?;
    }
    Ok(Output::new(json!({
        "found": true,
        "frequency": w.frequency,
        "length": w.f.length(),
        "indices": [w.indices.0, w.indices.1],
        "norm_r": w.norm_r,
        "norm_s": w.norm_s,
    })))
}
