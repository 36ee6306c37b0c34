//! Acceptance suite: one PASS/FAIL line per criterion on stderr.

#[path = "../src/oracle.rs"]
mod oracle;

use std::f64::consts::{PI, TAU};
use std::io::Write;

use jnu_core::bessel::BesselEvaluator;
use jnu_core::epd::{
    asgeirsson_check, asgeirsson_check_quadrature, m_alpha_quadrature, propagate, residual_order, spherical_mean,
};
use jnu_core::grid::GridFunction;
use jnu_core::liouville::{measure_cover, theta_chain, BinarySequence, ChainOptions, Lattice};
use jnu_core::scalar::re;
use jnu_core::snapshot::{
    compatibility_residual, kernel_witness, make_problem, reconstruct, small_denominator_scan,
    strong_compatibility_residual, FloorPolicy, SnapshotProblem, DEFAULT_CANDIDATES, DEFAULT_TOLERANCE,
};
use jnu_core::zeros::{complex_zeros, real_zeros, zero_ratio_f};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};

const PHI: f64 = 1.618_033_988_749_895;

/// Criteria that cannot be met as stated; they still run and report FAIL.
const KNOWN_UNATTAINABLE: &[usize] = &[12];

struct Outcome {
    id: usize,
    pass: bool,
    detail: String,
}

fn outcome(id: usize, pass: bool, detail: String) -> Outcome {
    Outcome { id, pass, detail }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn modes(dim: usize, p: usize, terms: &[(f64, [f64; 3], f64)]) -> GridFunction<f64> {
    GridFunction::from_fn(dim, p, TAU, |x| {
        let mut v = 0.0;
        for (amp, k, phase) in terms {
            let arg: f64 = x.iter().zip(k).map(|(xd, kd)| xd * kd).sum();
            v += amp * (arg + phase).cos();
        }
        re(v)
    })
    .unwrap()
}

fn bessel_closed_form() -> Outcome {
    let e = BesselEvaluator::real(0.5).unwrap();
    let mut worst: f64 = 0.0;
    let mut x = 0.1;
    while x <= 100.0 {
        worst = worst.max((e.eval_real(x).re - oracle::j_half_closed(x)).abs());
        x += 0.005;
    }
    let mut overlap: f64 = 0.0;
    for nu in [c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0), c(2.5, 0.0), c(1.0, 0.5)] {
        let e = BesselEvaluator::new(nu).unwrap();
        for i in 0..=80 {
            let rho = 20.0 + 0.25 * i as f64;
            for theta in [0.0, 0.05, 0.2, -0.2] {
                let z = Complex64::from_polar(rho, theta);
                let s = e.series(z).unwrap();
                let a = e.asymptotic(z).unwrap();
                let scale = s.norm().max(e.envelope(z));
                overlap = overlap.max((s - a).norm() / scale);
            }
        }
    }
    outcome(
        1,
        worst <= 1e-10 && overlap <= 1e-8,
        format!("closed-form sup error {worst:.2e} (≤ 1e-10), series/Hankel overlap {overlap:.2e} (≤ 1e-8)"),
    )
}

fn zeros() -> Outcome {
    let half = real_zeros(0.5, 100).unwrap();
    let half_err = half
        .real_values()
        .iter()
        .enumerate()
        .map(|(k, a)| (a - (k + 1) as f64 * PI).abs())
        .fold(0.0, f64::max);
    let z0 = real_zeros(0.0, 101).unwrap().real_values();
    let reference = oracle::integer_order_zeros(0, 50);
    let zero_err = reference.iter().zip(&z0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let gap = (z0[100] - z0[99] - PI).abs();
    let cz = complex_zeros(c(1.0, 1.0), 30..=30).unwrap();
    let im_err = cz.zero(30).map_or(f64::INFINITY, |z| (z.im - PI / 2.0).abs());
    outcome(
        2,
        half_err <= 1e-12 && zero_err <= 1e-10 && gap <= 1e-3 && im_err <= 0.05,
        format!(
            "|a_{{1/2,k}} − kπ| {half_err:.1e}, |a_{{0,k}} − bisection| {zero_err:.1e}, |gap_100 − π| {gap:.1e}, \
             |Im a_30(1+i) − π/2| {im_err:.3}"
        ),
    )
}

fn derivative_identity() -> Outcome {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let nu = c(rng.gen_range(-0.9..4.5), rng.gen_range(-1.0..1.0));
        let z = c(rng.gen_range(0.5..60.0), rng.gen_range(-0.5..0.5));
        let e = BesselEvaluator::new(nu).unwrap();
        let fd = (e.eval(z + h) - e.eval(z - h)) / (2.0 * h);
        worst = worst.max((e.derivative(z) - fd).norm());
    }
    let at_pi = BesselEvaluator::real(0.5).unwrap().derivative(re(PI));
    let want = -2.0 / PI.powf(1.5);
    let dev = (at_pi - want).norm();
    outcome(
        3,
        worst <= 1e-6 && dev <= 1e-8,
        format!("max |j′ − FD| {worst:.1e} over 100 samples, j′_{{1/2}}(π) = {:.12} (−2/π^{{3/2}} = {want:.12})", at_pi.re),
    )
}

fn identity_at_zero() -> Outcome {
    let mut worst: f64 = 0.0;
    for dim in 1..=3 {
        let f = modes(dim, 16, &[(1.0, [1.0, 0.0, 0.0], 0.1), (0.5, [2.0, 3.0, 1.0], 0.4), (0.2, [-5.0, 1.0, 2.0], 0.0)]);
        for alpha in [c(0.0, 0.0), c(1.0, 0.0), c(0.7, 0.0), c(1.0, 0.5)] {
            worst = worst.max(propagate(&f, 0.0, alpha).unwrap().max_abs_diff(&f).unwrap());
        }
    }
    outcome(4, worst <= 1e-12, format!("max ‖propagate(f, 0, α) − f‖ {worst:.1e} (≤ 1e-12)"))
}

fn eigen_relation() -> Outcome {
    let mut worst: f64 = 0.0;
    for (alpha, dim) in [(0.0, 2), (0.0, 3), (1.0, 3), (0.7, 2)] {
        let f = modes(dim, 16, &[(1.0, [2.0, 0.0, 0.0], 0.0), (0.4, [1.0, 1.0, 0.0], 0.3)]);
        for t in [0.4, 1.0, 1.7] {
            let u = propagate(&f, t, re(alpha)).unwrap();
            for idx in [[0usize, 0, 0], [3, 5, 7], [11, 2, 9]] {
                let idx = &idx[..dim];
                let x: Vec<f64> = idx.iter().map(|&i| i as f64 * f.spacing()).collect();
                let q = if alpha == 0.0 {
                    spherical_mean(&f, t, &x).unwrap()
                } else {
                    m_alpha_quadrature(&f, t, re(alpha), &x).unwrap()
                };
                worst = worst.max((q - u.at(idx)).norm());
            }
        }
    }
    let lambda = 3.0;
    let f = GridFunction::cosine(3, 16, TAU, lambda).unwrap();
    let mut sinc: f64 = 0.0;
    for t in [0.3, 1.0, 2.2] {
        let want = f.scale(re((lambda * t).sin() / (lambda * t)));
        sinc = sinc.max(propagate(&f, t, re(0.0)).unwrap().max_abs_diff(&want).unwrap());
    }
    outcome(
        5,
        worst <= 1e-6 && sinc <= 1e-8,
        format!("spectral vs quadrature {worst:.1e} (≤ 1e-6), n=3 α=0 sinc law {sinc:.1e} (≤ 1e-8)"),
    )
}

fn residual_convergence() -> Outcome {
    let mut orders = Vec::new();
    for dim in [2usize, 3] {
        let f = modes(dim, 16, &[(1.0, [1.0, 0.0, 0.0], 0.0), (0.5, [1.0, 2.0, 1.0], 0.2), (0.3, [0.0, 3.0, 0.0], 0.7)]);
        for alpha in [0.0, 1.0, (1.0 - dim as f64) / 2.0 + 1.0] {
            for t in [0.5, 1.0, 1.5, 2.0] {
                orders.push(residual_order(&f, re(alpha), t, 0.02).unwrap());
            }
        }
    }
    let lo = orders.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = orders.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    outcome(6, (lo - 2.0).abs() <= 0.2 && (hi - 2.0).abs() <= 0.2, format!("observed orders in [{lo:.3}, {hi:.3}]"))
}

fn asgeirsson() -> Outcome {
    let times = [0.5, 1.0, 1.5];
    let mut spectral: f64 = 0.0;
    for dim in [2usize, 3] {
        let f = modes(dim, 16, &[(1.0, [1.0, 2.0, 0.0], 0.0), (0.6, [3.0, 0.0, 1.0], 0.5), (0.2, [0.0, 0.0, 0.0], 0.0)]);
        for alpha in [c(0.0, 0.0), c(1.0, 0.0), c(0.7, 0.0), c(1.0, 0.5)] {
            spectral = spectral.max(asgeirsson_check(&f, alpha, &[3, 5, 1][..dim], &times).unwrap());
        }
    }
    let f = modes(2, 16, &[(1.0, [1.0, 2.0, 0.0], 0.0), (0.6, [3.0, 0.0, 0.0], 0.5)]);
    let quad = asgeirsson_check_quadrature(&f, &[0.2, 0.7], &times).unwrap();
    outcome(7, spectral <= 1e-10 && quad <= 1e-6, format!("spectral {spectral:.1e} (≤ 1e-10), quadrature {quad:.1e} (≤ 1e-6)"))
}

fn round_trip() -> Outcome {
    let terms = [
        (0.3, [0.0, 0.0, 0.0], 0.0),
        (1.0, [1.0, 0.0, 0.0], 0.1),
        (0.5, [2.0, 3.0, -1.0], 0.7),
        (0.25, [-7.0, 4.0, 2.0], 1.3),
        (0.1, [13.0, -9.0, 5.0], 0.2),
        (0.05, [21.0, 11.0, -17.0], 2.1),
    ];
    let mut worst: f64 = 0.0;
    let mut flagged = 0usize;
    for (dim, points) in [(2usize, 128usize), (3, 64)] {
        let f = modes(dim, points, &terms);
        for (r, s) in [(1.0, PHI), (1.0, 1.3)] {
            for nu in [0.5, 0.0] {
                let alpha = re(nu - (dim as f64 - 2.0) / 2.0);
                let p = make_problem(&f, r, s, alpha).unwrap();
                let rep = reconstruct(&p, FloorPolicy::default(), DEFAULT_TOLERANCE).unwrap();
                flagged += rep.flagged.len();
                worst = worst.max(rep.f.max_abs_diff(&f).unwrap() / f.sup_norm());
            }
        }
    }
    outcome(
        8,
        worst <= 1e-8 && flagged == 0,
        format!("max relative error {worst:.1e} (≤ 1e-8), flagged frequencies {flagged}"),
    )
}

/// `lim_{λ→π} Γ(3/2) j_{1/2}(λ) / (λ² − π²)` by Richardson extrapolation.
fn psi_limit() -> f64 {
    let g = PI.sqrt() / 2.0;
    let q = |l: f64| g * oracle::j_half_closed(l) / (l * l - PI * PI);
    let sym = |h: f64| (q(PI + h) + q(PI - h)) / 2.0;
    let h = 1e-3;
    (4.0 * sym(h / 2.0) - sym(h)) / 3.0
}

fn resonant_failure() -> Outcome {
    let l = Lattice::half_order();
    let w = kernel_witness(1.0, 2.0, &l, re(0.0), 3, 16, 50).unwrap();
    let Some(w) = w else {
        return outcome(9, false, "no kernel witness found".into());
    };
    let g = GridFunction::cosine(3, 16, w.f.length(), PI).unwrap();
    let h = GridFunction::zeros(3, 16, w.f.length()).unwrap();
    let p = SnapshotProblem::new(g, h, 1.0, 2.0, re(0.0)).unwrap();
    let compat = compatibility_residual(&p).unwrap();
    let strong = strong_compatibility_residual(&p, PI, 2.0 * PI).unwrap();
    let oracle = psi_limit().abs();
    outcome(
        9,
        w.norm_r <= 1e-10 && w.norm_s <= 1e-10 && compat <= 1e-10 && (strong - oracle).abs() <= 1e-6,
        format!(
            "witness norms {:.1e}, {:.1e}; compatibility {compat:.1e}; strong residual {strong:.9} vs limit {oracle:.9} \
             (1/(2π²) = {:.9})",
            w.norm_r,
            w.norm_s,
            1.0 / (2.0 * PI * PI)
        ),
    )
}

fn small_denominators() -> Outcome {
    let ranges = [50.0, 100.0, 200.0, 400.0];
    let rational: Vec<_> =
        ranges.iter().map(|&z| small_denominator_scan(2.0, 1.0, re(0.5), z, &DEFAULT_CANDIDATES).unwrap()).collect();
    let rational_ok = rational.iter().all(|s| s.fitted_n.is_none() && s.fitted_c <= 1e-8)
        && rational.windows(2).all(|w| w[1].fitted_c <= w[0].fitted_c);
    let golden: Vec<_> =
        ranges.iter().map(|&z| small_denominator_scan(1.0, PHI, re(0.5), z, &DEFAULT_CANDIDATES).unwrap()).collect();
    let last = &golden[golden.len() - 1];
    let golden_ok = golden[2..].iter().all(|s| s.fitted_n == last.fitted_n)
        && last.fitted_n.is_some_and(|n| n <= 2.0)
        && golden.iter().all(|s| s.fitted_c >= 0.5 * golden[0].fitted_c);
    let complex: Vec<f64> = ranges
        .iter()
        .map(|&z| small_denominator_scan(1.0, 2.0, c(1.0, 0.5), z, &DEFAULT_CANDIDATES).unwrap().min_normalized)
        .collect();
    let complex_ok = complex.iter().all(|&m| m > 0.0 && m >= 0.5 * complex[0]);
    let fmt = |v: Vec<String>| v.join(", ");
    outcome(
        10,
        rational_ok && golden_ok && complex_ok,
        format!(
            "r/s=2 C: [{}]; r/s=φ (N, C): [{}]; ν=1+0.5i normalized minimum: [{}]",
            fmt(rational.iter().map(|s| format!("{:.1e}", s.fitted_c)).collect()),
            fmt(golden.iter().map(|s| format!("({:?}, {:.3e})", s.fitted_n, s.fitted_c)).collect()),
            fmt(complex.iter().map(|m| format!("{m:.3}")).collect()),
        ),
    )
}

fn theta_chains() -> Outcome {
    let l = Lattice::half_order();
    let start = BigRational::new(BigInt::from(1), BigInt::from(2));
    let opts = ChainOptions::new(3);
    let prefixes = BinarySequence::all(3);
    let mut ok = true;
    let mut intervals = Vec::new();
    for seq in &prefixes {
        let chain = theta_chain(&l, seq, &start, &opts).unwrap();
        ok &= chain.is_exact() && chain.increments_ok() && chain.in_window();
        intervals.push(chain.certified_interval().unwrap());
    }
    let ordered = intervals.windows(2).all(|w| w[0].1 < w[1].0);
    outcome(
        11,
        ok && ordered,
        format!("8 exact chains, increments and window {ok}, certified intervals ordered {ordered}"),
    )
}

fn measure() -> Outcome {
    let mut ok = true;
    let mut lines = Vec::new();
    for (name, lattice) in [("ν=1/2", Lattice::half_order()), ("ν=0", Lattice::bessel(0.0, 220).unwrap())] {
        let reports: Vec<_> = (3..=8).map(|p| measure_cover(&lattice, 2.0, p as f64, 200).unwrap()).collect();
        let below = reports.iter().all(|r| r.measure <= r.bound);
        let decreasing = reports.windows(2).all(|w| w[1].measure < w[0].measure);
        let last = reports[reports.len() - 1].measure;
        ok &= below && decreasing && last < 1e-6;
        lines.push(format!("{name}: ≤ bound {below}, decreasing {decreasing}, measure(p=8) {last:.3e}"));
    }
    outcome(12, ok, format!("{} (target < 1e-6; the a_1 = π term alone covers 2π^-8 = {:.2e})", lines.join("; "), 2.0 * PI.powi(-8)))
}

fn order_variation() -> Outcome {
    let half = zero_ratio_f(0.5f64).unwrap();
    let mut prev = zero_ratio_f(0.0f64).unwrap();
    let f0 = prev;
    let mut jump: f64 = 0.0;
    for i in 1..=500 {
        let v = zero_ratio_f(i as f64 * 1e-3).unwrap();
        jump = jump.max((v - prev).abs());
        prev = v;
    }
    let z = oracle::integer_order_zeros(0, 2);
    let reference = z[0] / z[1];
    outcome(
        13,
        (half - 0.5).abs() <= 1e-12 && jump <= 1e-2 && (f0 - 0.43565).abs() <= 1e-5 && (f0 - reference).abs() <= 1e-10,
        format!(
            "f(1/2) = {half}, max increment {jump:.1e}, f(0) = {f0:.8} (bisection {reference:.8}); \
             discrepancy: the stated bracket f(0) > 14/23 does not hold"
        ),
    )
}

#[test]
fn acceptance() {
    let results = vec![
        bessel_closed_form(),
        zeros(),
        derivative_identity(),
        identity_at_zero(),
        eigen_relation(),
        residual_convergence(),
        asgeirsson(),
        round_trip(),
        resonant_failure(),
        small_denominators(),
        theta_chains(),
        measure(),
        order_variation(),
    ];
    let mut err = std::io::stderr();
    for r in &results {
        let tag = if r.pass { "PASS" } else { "FAIL" };
        writeln!(err, "criterion {:>2}: {tag}  {}", r.id, r.detail).unwrap();
    }
    let unexpected: Vec<usize> =
        results.iter().filter(|r| r.pass == KNOWN_UNATTAINABLE.contains(&r.id)).map(|r| r.id).collect();
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}
