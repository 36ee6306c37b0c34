use jnu_core::liouville::{
    decimal, liouville_constant, liouville_quality, liouville_quality_exact, log10_abs, measure_cover, theta,
    theta_chain, BinarySequence, ChainOptions, Lattice, RatioApproximation,
};
use num_rational::BigRational;
use serde_json::{json, Value};

use super::{params, Output};
use crate::args::{LiouvilleChain, LiouvilleCmd, LiouvilleMeasure, LiouvilleQuality, LiouvilleTheta};
use crate::error::{CliError, Result};
use crate::report::Table;

pub fn run(cmd: &LiouvilleCmd) -> Result<(&'static str, Value, Output)> {
    Ok(match cmd {
        LiouvilleCmd::Theta(a) => ("liouville theta", params(a), theta_cmd(a)?),
        LiouvilleCmd::Chain(a) => ("liouville chain", params(a), chain(a)?),
        LiouvilleCmd::Quality(a) => ("liouville quality", params(a), quality(a)?),
        LiouvilleCmd::Measure(a) => ("liouville measure", params(a), measure(a)?),
    })
}

fn parse_rational(s: &str) -> Result<BigRational> {
    s.trim().parse().map_err(|e| CliError::Arg(format!("`{s}` is not a rational p/q: {e}")))
}

fn theta_cmd(a: &LiouvilleTheta) -> Result<Output> {
    let lattice = Lattice::bessel(a.nu, a.computed)?;
    let value = theta(&lattice, a.n, a.x)?;
    Ok(Output::new(json!({ "theta": value })))
}

fn chain(a: &LiouvilleChain) -> Result<Output> {
    let seq = BinarySequence::parse(&a.bits)?;
    let depth = a.depth.unwrap_or(seq.len());
    let x_start = parse_rational(&a.x_start)?;
    let lattice = Lattice::bessel(a.nu, a.computed)?;
    let opts = ChainOptions { cutoff: a.cutoff, constant: a.constant, depth, budget_bits: a.budget_bits };
    let chain = theta_chain(&lattice, &seq, &x_start, &opts)?;
    let values = chain.decimal_values();
    let indices: Vec<String> = chain.indices().iter().map(|n| n.to_string()).collect();
    let mut table = Table::new(&["m", "bit", "n_m", "value"]);
    for (m, (n, v)) in indices.iter().zip(&values).enumerate() {
        table.push(vec![json!(m + 1), json!(seq.bit(m + 1)), json!(n), json!(v)]);
    }
    let result = json!({
        "exact": chain.is_exact(),
        "x_start": decimal(chain.x_start(), 12),
        "indices": indices,
        "values": values,
        "certified_error": chain.certified_error(),
        "tail_bound_log10": log10_abs(&chain.tail_bound()?),
        "increments_ok": chain.increments_ok(),
        "in_window": chain.in_window(),
    });
    Ok(Output::with_table(result, table))
}

fn approximation_json(q: &RatioApproximation) -> Value {
    json!({
        "target": q.target,
        "numerator_index": q.numerator_index.to_string(),
        "denominator_index": q.denominator_index.to_string(),
        "gap": q.gap,
        "ln_gap": if q.ln_gap.is_finite() { json!(q.ln_gap) } else { json!("-inf") },
        "exponent": if q.exponent.is_finite() { json!(q.exponent) } else { json!("inf") },
    })
}

fn quality(a: &LiouvilleQuality) -> Result<Output> {
    let lattice = Lattice::bessel(a.nu, a.computed)?;
    let q = match (&a.x, a.liouville_terms) {
        (_, Some(k)) => liouville_quality_exact(&liouville_constant(k), &lattice, a.bound)?,
        (Some(x), None) if x.contains('/') => liouville_quality_exact(&parse_rational(x)?, &lattice, a.bound)?,
        (Some(x), None) => {
            let v: f64 = x.trim().parse().map_err(|e| CliError::Arg(format!("`{x}` is not a number: {e}")))?;
            liouville_quality(v, &lattice, a.bound)?
        }
        (None, None) => return Err(CliError::Arg("give --x or --liouville-terms".into())),
    };
    Ok(Output::new(approximation_json(&q)))
}

fn measure(a: &LiouvilleMeasure) -> Result<Output> {
    let lattice = Lattice::bessel(a.nu, a.n_max + 20)?;
    let mut table = Table::new(&["p", "measure", "bound", "c3", "intervals"]);
    let mut reports = Vec::new();
    for &p in &a.p.0 {
        let r = measure_cover(&lattice, a.l, p, a.n_max)?;
        table.push(vec![json!(p), json!(r.measure), json!(r.bound), json!(r.c3), json!(r.intervals)]);
        reports.push(r);
    }
    let below = reports.iter().all(|r| r.measure <= r.bound);
    let decreasing = reports.windows(2).all(|w| w[1].measure < w[0].measure);
    Ok(Output::with_table(json!({ "below_bound": below, "strictly_decreasing": decreasing }), table))
}
