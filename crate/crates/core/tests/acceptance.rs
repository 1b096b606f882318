//! Exit criteria for the library. Each test prints one `PASS`/`FAIL` line.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slab_area::catenoid::{beta, solve_beta, waist_area, CatenoidalWaist};
use slab_area::complex_core::winding_number;
use slab_area::generate::{random_surface, SampleBounds};
use slab_area::slab_analysis::{
    h_profile, jensen_gap, surface_area, total_winding_at, uniform_grid, verify_chain, ChainOptions, SlabSurface,
};
use slab_area::{format_gauss_map, immerse, parse_gauss_map, period_closure, GaussMap, QuadratureSpec};

const BETA_RESIDUAL: f64 = 1e-13;
const BETA_TIME: Duration = Duration::from_millis(1);
const CLOSED_FORM_REL: f64 = 1e-9;
const DERIVATIVE_TOL: f64 = 1e-6;
const SLOPE_TOL: f64 = 1e-8;
const AFFINE_TOL: f64 = 1e-9;
const JENSEN_TOL: f64 = 1e-10;
const CHAIN_TIME: Duration = Duration::from_secs(60);
const EQUALITY_TOL: f64 = 1e-8;
const PERTURBATION: f64 = 1e-2;
const PERTURBED_SLACK: f64 = 1e-5;
const CATENOID_TOL: f64 = 1e-8;
const PERIOD_TOL: f64 = 1e-10;
const MESH_AREA_REL: f64 = 5e-3;

fn report(id: u32, name: &str, ok: bool, detail: String) {
    println!("criterion {id:>2} [{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} failed: {detail}");
}

fn corpus(seed: u64, count: usize) -> Vec<SlabSurface> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_surface(&mut rng, &SampleBounds::default()).unwrap()).collect()
}

#[test]
fn criterion_01_beta_constant() {
    let start = Instant::now();
    let b = solve_beta(1e-13);
    let elapsed = start.elapsed();
    let ok = b.residual <= BETA_RESIDUAL && b.value > 1.19 && b.value < 1.21 && elapsed < BETA_TIME;
    report(1, "beta constant", ok, format!("beta = {}, residual = {:e}, time = {elapsed:?}", b.value, b.residual));
}

#[test]
fn criterion_02_closed_form_vs_quadrature() {
    let spec = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let a = rng.gen_range(0.5..2.0);
        let lambda = rng.gen_range(0.2..5.0) / a;
        let s = SlabSurface::single(a, GaussMap::catenoid(TAU / lambda, 0.0).unwrap()).unwrap();
        let area = surface_area(&s, &spec).unwrap().value;
        let exact = TAU * a / lambda + PI / (lambda * lambda) * (2.0 * lambda * a).sinh();
        worst = worst.max((area - exact).abs() / exact);
    }
    report(2, "closed form vs quadrature", worst <= CLOSED_FORM_REL, format!("max relative error {worst:e}"));
}

#[test]
fn criterion_03_optimal_waist() {
    let a = 1.0;
    let (lo, hi, steps) = (0.5, 3.0, 1000);
    let step = (hi - lo) / (steps - 1) as f64;
    let area = |l: f64| waist_area(&CatenoidalWaist::new(l, 0.0, a).unwrap()).unwrap();
    let argmin = (0..steps)
        .map(|i| lo + step * i as f64)
        .min_by(|x, y| area(*x).total_cmp(&area(*y)))
        .unwrap();
    let b = beta().value;
    let h = 1e-5;
    let derivative = (area(b + h) - area(b - h)) / (2.0 * h);
    let ok = (argmin - b).abs() <= step && derivative.abs() <= DERIVATIVE_TOL;
    report(3, "optimal waist", ok, format!("argmin {argmin}, beta {b}, A'(beta) = {derivative:e}"));
}

#[test]
fn criterion_04_slope_identity() {
    let spec = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    let mut windings_ok = true;
    for s in corpus(4, 50) {
        let hp = h_profile(&s, &uniform_grid(s.a(), 21), &spec).unwrap();
        let expected = TAU * s.total_winding() as f64 / s.flux();
        worst = worst.max((hp.slope - expected).abs());
        for u in [-s.a(), 0.0, s.a()] {
            windings_ok &= total_winding_at(&s, u, &spec).unwrap() == s.total_winding();
        }
        for g in s.components() {
            windings_ok &= winding_number(g, 0.3 * s.a(), &spec).unwrap().value == g.winding();
        }
    }
    report(
        4,
        "slope identity",
        worst <= SLOPE_TOL && windings_ok,
        format!("max slope error {worst:e}, windings exact: {windings_ok}"),
    );
}

#[test]
fn criterion_05_h_affinity() {
    let spec = QuadratureSpec::default();
    let worst = corpus(7, 100)
        .iter()
        .map(|s| h_profile(s, &uniform_grid(s.a(), 200), &spec).unwrap().max_linear_deviation)
        .fold(0.0, f64::max);
    report(5, "h affinity", worst <= AFFINE_TOL, format!("max deviation {worst:e}"));
}

#[test]
fn criterion_06_jensen_link() {
    let spec = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = f64::INFINITY;
    for s in corpus(7, 100) {
        for _ in 0..50 {
            let u = rng.gen_range(-s.a()..=s.a());
            worst = worst.min(jensen_gap(&s, u, &spec).unwrap().gap());
        }
    }
    report(6, "Jensen link", worst >= -JENSEN_TOL, format!("min gap {worst:e}"));
}

#[test]
fn criterion_07_full_chain() {
    let spec = QuadratureSpec::default();
    let surfaces = corpus(7, 100);
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut min_margin = f64::INFINITY;
    for (i, s) in surfaces.iter().enumerate() {
        let r = verify_chain(s, &spec, &ChainOptions::default()).unwrap();
        for slack in r.slacks {
            min_margin = min_margin.min(slack + r.err_est);
        }
        if !r.verdict {
            failures.push(i);
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < CHAIN_TIME;
    report(7, "full chain", ok, format!("failures {failures:?}, min slack + err {min_margin:e}, time {elapsed:?}"));
}

#[test]
fn criterion_08_equality_and_rigidity() {
    let spec = QuadratureSpec::default();
    let a = 1.0;
    let f = TAU * a / beta().value;
    let optimal = SlabSurface::single(a, GaussMap::catenoid(f, 0.0).unwrap()).unwrap();
    let r = verify_chain(&optimal, &spec, &ChainOptions::default()).unwrap();
    let base_ok = r.equality_case && r.slacks.iter().all(|s| *s <= EQUALITY_TOL);

    // Real shift of c_0 and complex shifts of c_k, k != 0. An imaginary shift
    // of c_0 is a rotation about the axis and leaves the surface unchanged.
    let mut perturbations: Vec<(i32, Complex64)> = vec![(0, Complex64::new(PERTURBATION, 0.0))];
    for k in [-2, -1, 1, 2] {
        perturbations.push((k, Complex64::new(PERTURBATION, 0.0)));
        perturbations.push((k, Complex64::new(0.0, PERTURBATION)));
    }
    let mut perturbed_ok = true;
    let mut detail = Vec::new();
    for (k, delta) in perturbations {
        let g = GaussMap::new(1, f, BTreeMap::from([(0, Complex64::new(0.0, 0.0)), (k, delta)])).unwrap();
        let r = verify_chain(&SlabSurface::single(a, g).unwrap(), &spec, &ChainOptions::default()).unwrap();
        let max_slack = r.slacks.iter().copied().fold(f64::MIN, f64::max);
        perturbed_ok &= max_slack >= PERTURBED_SLACK && !r.equality_case;
        detail.push(format!("c{k}+{delta}: {max_slack:.2e}"));
    }
    report(
        8,
        "equality and rigidity",
        base_ok && perturbed_ok,
        format!("optimal slacks {:?}; perturbed max slacks [{}]", r.slacks, detail.join(", ")),
    );
}

#[test]
fn criterion_09_geometry_witness() {
    let g = GaussMap::catenoid(TAU, 0.0).unwrap();
    let sample = immerse(&g, 1.0, 64, 256).unwrap();
    let worst = sample
        .points
        .iter()
        .map(|[x, y, z]| (z.cosh().powi(2) - (x * x + y * y)).abs())
        .fold(0.0, f64::max);
    let (period, _) = period_closure(&g).unwrap();
    let ok = worst <= CATENOID_TOL && period.norm() <= PERIOD_TOL;
    report(9, "geometry witness", ok, format!("max |cosh^2 z - r^2| = {worst:e}, |period| = {:e}", period.norm()));
}

#[test]
fn criterion_10_mesh_area_convergence() {
    let g = GaussMap::catenoid(TAU, 0.0).unwrap();
    let sample = immerse(&g, 1.0, 128, 512).unwrap();
    let exact = waist_area(&CatenoidalWaist::new(1.0, 0.0, 1.0).unwrap()).unwrap();
    let rel = (sample.mesh_area() - exact).abs() / exact;
    report(10, "mesh area convergence", rel <= MESH_AREA_REL, format!("relative error {rel:e}"));
}

/// Inputs with the 1-based column of the first byte that has no valid continuation.
const MALFORMED: [(&str, usize); 20] = [
    ("", 1),
    ("w", 1),
    ("q", 2),
    ("q^", 3),
    ("q^+", 3),
    ("q^2 +", 5),
    ("q^2 * e", 8),
    ("q^2 * epx(q)", 8),
    ("q^2 * exp q", 11),
    ("q^2 * exp(* q)", 11),
    ("q^2 * exp(0.5", 14),
    ("q^2 * exp(0.5 - )", 17),
    ("q^2 * exp(.)", 12),
    ("q^2 * exp(3e+)", 14),
    ("q^2 * exp((1-2))", 15),
    ("q^2 * exp((1+2j))", 15),
    ("q^2 * exp(4*q^)", 15),
    ("q^2 * exp(4/r)", 13),
    ("q^2 * exp(1*1/p)", 15),
    ("q^2 * exp(q)) ", 13),
];

#[test]
fn criterion_11_parser() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut round_trip_ok = true;
    for _ in 0..500 {
        let n = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let count = rng.gen_range(0..6);
        let coeffs: BTreeMap<i32, Complex64> = (0..count)
            .map(|_| {
                let re = rng.gen_range(-10.0..10.0) * 10f64.powi(rng.gen_range(-8..8));
                let im = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(-10.0..10.0) };
                (rng.gen_range(-64..=64), Complex64::new(re, im))
            })
            .collect();
        let g = GaussMap::new(n, 1.5, coeffs).unwrap();
        let back = parse_gauss_map(&format_gauss_map(&g), 1.5).unwrap();
        round_trip_ok &= back == g
            && g.coeffs().iter().all(|(k, c)| {
                let d = back.coeffs()[k];
                c.re.to_bits() == d.re.to_bits() && c.im.to_bits() == d.im.to_bits()
            });
    }
    let mut column_failures = Vec::new();
    for (text, column) in MALFORMED {
        let got = parse_gauss_map(text, 1.0).err().and_then(|e| e.column());
        if got != Some(column) {
            column_failures.push(format!("{text:?}: expected {column}, got {got:?}"));
        }
    }
    report(
        11,
        "parser",
        round_trip_ok && column_failures.is_empty(),
        format!("round trip ok: {round_trip_ok}, column mismatches {column_failures:?}"),
    );
}
