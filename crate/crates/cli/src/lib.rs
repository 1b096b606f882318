//! Command implementations behind the `slabarea` binary.
//!
//! Each command writes human-readable output to `out`, diagnostics to `err`,
//! and returns a process exit status: 0 when every check passes, 1 when a
//! mathematical verdict fails, 2 on usage, parse or I/O errors.

pub mod corpus;

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use slab_area::catenoid::beta;
use slab_area::weierstrass::write_mesh;
use slab_area::{
    immerse, is_maximally_stable, parse_gauss_map, period_closure, waist_area, CatenoidalWaist, ChainOptions,
    ChainReport, QuadratureSpec,
};

pub use corpus::{format_corpus, parse_corpus, Corpus, CorpusError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERDICT: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Tolerance on `lambda a - beta` used when reporting maximal stability.
const STABLE_TOL: f64 = 1e-9;

fn usage(err: &mut dyn Write, message: impl std::fmt::Display) -> io::Result<u8> {
    writeln!(err, "error: {message}")?;
    Ok(EXIT_USAGE)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), String> {
    fs::write(path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

pub fn cmd_beta(digits: usize, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<u8> {
    if !(1..=15).contains(&digits) {
        return usage(err, format!("digits must lie in 1..=15, got {digits}"));
    }
    let b = beta();
    writeln!(out, "beta = {:.*} (residual {:e})", digits, b.value, b.residual)?;
    Ok(EXIT_OK)
}

pub fn cmd_waist(lambda: f64, d0: f64, a: f64, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<u8> {
    let waist = match CatenoidalWaist::new(lambda, d0, a) {
        Ok(w) => w,
        Err(e) => return usage(err, e),
    };
    match waist_area(&waist) {
        Ok(area) => {
            writeln!(out, "area = {area}")?;
            writeln!(out, "flux = {}", waist.flux())?;
            writeln!(out, "stable = {}", is_maximally_stable(&waist, STABLE_TOL))?;
            Ok(EXIT_OK)
        }
        Err(e) => usage(err, e),
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyArgs {
    pub spec: QuadratureSpec,
    pub mixed_ok: bool,
}

fn spec_comment(spec: &QuadratureSpec) -> String {
    format!(
        "# quadrature v_nodes={} u_panels={} u_order={} rel_tol={:e} max_refinements={}",
        spec.v_nodes, spec.u_panels, spec.u_order, spec.rel_tol, spec.max_refinements
    )
}

pub fn cmd_verify(
    corpus_path: &Path,
    out_csv: &Path,
    args: &VerifyArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<u8> {
    if let Err(e) = args.spec.validate() {
        return usage(err, e);
    }
    let text = match fs::read_to_string(corpus_path) {
        Ok(t) => t,
        Err(e) => return usage(err, format!("cannot read {}: {e}", corpus_path.display())),
    };
    let corpus = match parse_corpus(&text) {
        Ok(c) => c,
        Err(e) => return usage(err, format!("{}: {e}", corpus_path.display())),
    };
    if !args.mixed_ok {
        let mixed: Vec<&str> =
            corpus.surfaces.iter().filter(|(_, s)| !s.is_theorem_eligible()).map(|(id, _)| id.as_str()).collect();
        if !mixed.is_empty() {
            return usage(
                err,
                format!(
                    "surface {} has level components of mixed orientation; pass --mixed-ok to analyse it",
                    mixed.join(", ")
                ),
            );
        }
    }

    let options = ChainOptions { mixed_ok: args.mixed_ok, ..ChainOptions::default() };
    let reports: Vec<Result<ChainReport, slab_area::Error>> =
        corpus.surfaces.par_iter().map(|(_, s)| slab_area::verify_chain(s, &args.spec, &options)).collect();

    let mut csv = String::new();
    csv.push_str(&spec_comment(&args.spec));
    csv.push('\n');
    csv.push_str(ChainReport::csv_header());
    csv.push('\n');
    let mut status = EXIT_OK;
    for ((id, _), report) in corpus.surfaces.iter().zip(&reports) {
        match report {
            Ok(r) => {
                csv.push_str(&r.csv_row(id));
                csv.push('\n');
                write!(out, "{id}: {} (slack {:e})", r.verdict_label(), r.overall_slack())?;
                if r.equality_case {
                    write!(out, ", equality")?;
                }
                writeln!(out)?;
                if !r.verdict {
                    writeln!(err, "{id}: failed links: {}", r.failed_links().join("; "))?;
                    if !r.exploratory {
                        status = EXIT_VERDICT;
                    }
                }
            }
            Err(e) => {
                writeln!(err, "surface {id}: {e}")?;
                status = EXIT_VERDICT;
            }
        }
    }
    if let Err(message) = write_file(out_csv, csv.as_bytes()) {
        return usage(err, message);
    }
    Ok(status)
}

pub fn cmd_sweep(
    a: f64,
    lambda_lo: f64,
    lambda_hi: f64,
    steps: usize,
    out_csv: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<u8> {
    if !(a.is_finite() && a > 0.0) {
        return usage(err, format!("a must be positive, got {a}"));
    }
    if !(lambda_lo > 0.0 && lambda_lo < lambda_hi && lambda_hi.is_finite()) {
        return usage(err, format!("need 0 < lambda-lo < lambda-hi, got [{lambda_lo}, {lambda_hi}]"));
    }
    if steps < 3 {
        return usage(err, format!("steps must be at least 3, got {steps}"));
    }
    let step = (lambda_hi - lambda_lo) / (steps - 1) as f64;
    let mut csv = String::from("lambda,area\n");
    let mut best = (f64::NAN, f64::INFINITY);
    for i in 0..steps {
        let lambda = lambda_lo + step * i as f64;
        let area = match CatenoidalWaist::new(lambda, 0.0, a).and_then(|w| waist_area(&w)) {
            Ok(v) => v,
            Err(e) => return usage(err, e),
        };
        if area < best.1 {
            best = (lambda, area);
        }
        csv.push_str(&format!("{lambda},{area}\n"));
    }
    if let Err(message) = write_file(out_csv, csv.as_bytes()) {
        return usage(err, message);
    }
    let analytic = beta().value / a;
    writeln!(out, "grid argmin = {} (area {})", best.0, best.1)?;
    writeln!(out, "lambda* = {analytic}")?;
    writeln!(out, "discrepancy = {:e} (grid step {:e})", (best.0 - analytic).abs(), step)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone)]
pub struct MeshArgs {
    pub g: String,
    pub f: f64,
    pub a: f64,
    pub u_count: usize,
    pub v_count: usize,
}

pub fn cmd_mesh(args: &MeshArgs, out_path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<u8> {
    let g = match parse_gauss_map(&args.g, args.f) {
        Ok(g) => g,
        Err(e) => return usage(err, format!("g: {e}")),
    };
    let sample = match immerse(&g, args.a, args.u_count, args.v_count) {
        Ok(s) => s,
        Err(e) => return usage(err, e),
    };
    let mut bytes = Vec::new();
    write_mesh(&sample, &mut bytes)?;
    if let Err(message) = write_file(out_path, &bytes) {
        return usage(err, message);
    }
    writeln!(out, "wrote {} vertices to {}", sample.points.len(), out_path.display())?;
    match period_closure(&g) {
        Ok((_, true)) => writeln!(out, "closed: true")?,
        Ok((period, false)) => writeln!(out, "closed: false (|period| = {:e})", period.norm())?,
        Err(e) => return usage(err, e),
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(f: impl FnOnce(&mut dyn Write, &mut dyn Write) -> io::Result<u8>) -> (u8, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = f(&mut out, &mut err).unwrap();
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn beta_rounding() {
        let (code, out, _) = run(|o, e| cmd_beta(12, o, e));
        assert_eq!(code, 0);
        assert!(out.starts_with("beta = 1.199678640258 ("), "{out}");
        assert!(run(|o, e| cmd_beta(3, o, e)).1.starts_with("beta = 1.200 ("));
        assert_eq!(run(|o, e| cmd_beta(0, o, e)).0, EXIT_USAGE);
        assert_eq!(run(|o, e| cmd_beta(16, o, e)).0, EXIT_USAGE);
    }

    #[test]
    fn waist_reports() {
        let (code, out, _) = run(|o, e| cmd_waist(1.0, 0.0, 1.0, o, e));
        assert_eq!(code, 0);
        let area: f64 = out.lines().next().unwrap().trim_start_matches("area = ").parse().unwrap();
        // 2 pi + pi sinh 2
        assert!((area - 17.67730332006746193).abs() < 1e-12);
        assert!(out.contains("stable = false"));
        let (_, out, _) = run(|o, e| cmd_waist(beta().value, 0.0, 1.0, o, e));
        assert!(out.contains("stable = true"));
        assert_eq!(run(|o, e| cmd_waist(-1.0, 0.0, 1.0, o, e)).0, EXIT_USAGE);
        assert_eq!(run(|o, e| cmd_waist(1.0, 0.0, 0.0, o, e)).0, EXIT_USAGE);
    }

    #[test]
    fn spec_comment_lists_every_field() {
        let line = spec_comment(&QuadratureSpec::default());
        assert_eq!(line, "# quadrature v_nodes=256 u_panels=64 u_order=8 rel_tol=1e-10 max_refinements=6");
    }
}
