//! Lebesgue measure of the cover `Y^{(L)}(p) = ∪_n Y_n^{(L)}(p)`, where
//! `Y_n` is the union of intervals of radius `a_n^{−p}` centred on the
//! ratios `a_k/a_n` in `(0, L)`.

use serde::Serialize;

use super::Lattice;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    /// Measure of the union, from a sort-and-merge sweep.
    pub measure: f64,
    /// `2·C₃·L·Σ_n n / a_n^p`.
    pub bound: f64,
    /// `max_n K(L, n) / (L n)` with `K(L, n)` the number of ratios below `L`.
    pub c3: f64,
    /// Number of intervals before merging.
    pub intervals: usize,
}

pub fn measure_cover(lattice: &Lattice, l: f64, p: f64, n_max: usize) -> Result<MeasureReport> {
    if !(l >= 1.0) || !(p >= 1.0) || n_max == 0 {
        return Err(Error::Domain(format!("measure needs L, p, n_max >= 1; got L={l}, p={p}, n_max={n_max}")));
    }
    let mut spans: Vec<(f64, f64)> = Vec::new();
    let mut c3: f64 = 0.0;
    let mut weighted = 0.0;
    for n in 1..=n_max {
        let Some(a_n) = lattice.a(n) else { break };
        let radius = a_n.powf(-p);
        let mut count = 0usize;
        let mut k = 1usize;
        while let Some(r) = lattice.ratio(k, n) {
            if r >= l {
                break;
            }
            spans.push((r - radius, r + radius));
            count += 1;
            k += 1;
        }
        c3 = c3.max(count as f64 / (l * n as f64));
        weighted += n as f64 * radius;
    }
    let intervals = spans.len();
    spans.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut measure = 0.0;
    let mut current: Option<(f64, f64)> = None;
    for (lo, hi) in spans {
        match current {
            Some((clo, chi)) if lo <= chi => current = Some((clo, chi.max(hi))),
            Some((clo, chi)) => {
                measure += chi - clo;
                current = Some((lo, hi));
            }
            None => current = Some((lo, hi)),
        }
    }
    if let Some((clo, chi)) = current {
        measure += chi - clo;
    }
    Ok(MeasureReport { measure, bound: 2.0 * c3 * l * weighted, c3, intervals })
}
