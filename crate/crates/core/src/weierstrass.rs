//! Immersion from Weierstrass data with height differential `dw`.
//!
//! With `eta = dw / g` the coordinate differentials are
//! `dx = Re[(1/2)(1/g - g) dw]`, `dy = Re[(i/2)(1/g + g) dw]` and `dz = Re dw`,
//! so the height is the parameter `u` itself. Combined,
//! `d(x + iy) = (conj(dw / g) - g dw) / 2`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::complex_core::{CylinderPoint, GaussMap};
use crate::quadrature::{integrate_periodic, PanelRule, QuadratureError, QuadratureSpec};
use crate::{Error, Result};

/// Closure threshold relative to the length of the level curve.
const PERIOD_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ImmersionSample {
    pub u_count: usize,
    pub v_count: usize,
    /// Row-major `(u, v)` grid of points; `v` wraps around.
    pub points: Vec<[f64; 3]>,
    /// Horizontal period `P_x + i P_y` of one loop around the cylinder.
    pub period: Complex64,
    pub closed: bool,
}

impl ImmersionSample {
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.v_count + j % self.v_count
    }

    pub fn point(&self, i: usize, j: usize) -> [f64; 3] {
        self.points[self.index(i, j)]
    }

    /// Two triangles per grid quad, wrapped in `v`; 0-based indices.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut tris = Vec::with_capacity(2 * (self.u_count - 1) * self.v_count);
        for i in 0..self.u_count - 1 {
            for j in 0..self.v_count {
                let a = self.index(i, j);
                let b = self.index(i, j + 1);
                let c = self.index(i + 1, j + 1);
                let d = self.index(i + 1, j);
                tris.push([a, b, c]);
                tris.push([a, c, d]);
            }
        }
        tris
    }

    /// Sum of triangle areas.
    pub fn mesh_area(&self) -> f64 {
        self.triangles().iter().map(|t| triangle_area(self.points[t[0]], self.points[t[1]], self.points[t[2]])).sum()
    }

    /// Cotangent-formula mean curvature `|H|` at vertices of the interior rows.
    pub fn discrete_mean_curvature(&self) -> Vec<f64> {
        let n = self.points.len();
        let mut laplace = vec![[0.0; 3]; n];
        let mut mass = vec![0.0; n];
        for t in self.triangles() {
            let p = t.map(|i| self.points[i]);
            let area = triangle_area(p[0], p[1], p[2]);
            for corner in 0..3 {
                let (i, j, k) = (corner, (corner + 1) % 3, (corner + 2) % 3);
                mass[t[i]] += area / 3.0;
                // Angle at k faces edge (i, j); angle at j faces edge (i, k).
                let cot_k = cotangent(p[k], p[i], p[j]);
                let cot_j = cotangent(p[j], p[i], p[k]);
                for c in 0..3 {
                    laplace[t[i]][c] += 0.5 * (cot_k * (p[j][c] - p[i][c]) + cot_j * (p[k][c] - p[i][c]));
                }
            }
        }
        (1..self.u_count - 1)
            .flat_map(|i| (0..self.v_count).map(move |j| (i, j)))
            .map(|(i, j)| {
                let idx = self.index(i, j);
                let l = laplace[idx];
                0.5 * norm(l) / mass[idx]
            })
            .collect()
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn triangle_area(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    0.5 * norm(cross(sub(b, a), sub(c, a)))
}

/// Cotangent of the angle at `apex` in the triangle `(apex, p, q)`.
fn cotangent(apex: [f64; 3], p: [f64; 3], q: [f64; 3]) -> f64 {
    let (e1, e2) = (sub(p, apex), sub(q, apex));
    dot(e1, e2) / norm(cross(e1, e2))
}

fn gauss_value(g: &GaussMap, u: f64, v: f64) -> Result<Complex64> {
    crate::complex_core::eval_gauss_map(g, CylinderPoint::new(u, v))
}

/// `d(x + iy) / du` along a line of constant `v`.
fn horizontal_du(g: &GaussMap, u: f64, v: f64) -> Result<Complex64> {
    let gv = gauss_value(g, u, v)?;
    Ok(((gv.inv()).conj() - gv) * 0.5)
}

/// `d(x + iy) / dv` along a line of constant `u` (`dw = i dv`).
fn horizontal_dv(g: &GaussMap, u: f64, v: f64) -> Result<Complex64> {
    let gv = gauss_value(g, u, v)?;
    let i = Complex64::i();
    Ok((-i * gv.inv().conj() - i * gv) * 0.5)
}

struct SegmentIntegrator {
    rule: PanelRule,
    max_panel: f64,
}

impl SegmentIntegrator {
    fn new(g: &GaussMap) -> Self {
        let spec = QuadratureSpec::default();
        let modes = g.winding().unsigned_abs() + g.max_index() + 1;
        Self { rule: PanelRule::new(spec.u_order), max_panel: g.circumference() / (4.0 * f64::from(modes)) }
    }

    fn integrate(&self, mut d: impl FnMut(f64) -> Result<Complex64>, lo: f64, hi: f64) -> Result<Complex64> {
        let panels = (((hi - lo).abs() / self.max_panel).ceil() as usize).max(1);
        let mut total = Complex64::new(0.0, 0.0);
        for (t, w) in self.rule.weighted_nodes(lo, hi, panels) {
            total += d(t)? * w;
        }
        Ok(total)
    }
}

/// Samples the immersion on a `u_count x v_count` grid over `[-a, a] x [0, f)`.
///
/// Integration starts at `(-a, 0)`; the result is translated so that the
/// bottom level curve is centred on the vertical axis.
pub fn immerse(g: &GaussMap, a: f64, u_count: usize, v_count: usize) -> Result<ImmersionSample> {
    if u_count < 2 || v_count < 2 {
        return Err(Error::InvalidInput(format!("grid must be at least 2 x 2, got {u_count} x {v_count}")));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidInput(format!("slab half-height must be positive, got {a}")));
    }
    let f = g.circumference();
    let us: Vec<f64> = (0..u_count).map(|i| -a + 2.0 * a * i as f64 / (u_count - 1) as f64).collect();
    let vs: Vec<f64> = (0..v_count).map(|j| f * j as f64 / v_count as f64).collect();
    let seg = SegmentIntegrator::new(g);

    let mut horizontal = vec![Complex64::new(0.0, 0.0); u_count * v_count];
    let mut spine = Complex64::new(0.0, 0.0);
    for (i, &u) in us.iter().enumerate() {
        if i > 0 {
            spine += seg.integrate(|t| horizontal_du(g, t, 0.0), us[i - 1], u)?;
        }
        let mut acc = spine;
        horizontal[i * v_count] = acc;
        for j in 1..v_count {
            acc += seg.integrate(|t| horizontal_dv(g, u, t), vs[j - 1], vs[j])?;
            horizontal[i * v_count + j] = acc;
        }
    }
    let centre = horizontal[..v_count].iter().sum::<Complex64>() / v_count as f64;

    let points = horizontal
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let z = z - centre;
            [z.re, z.im, us[idx / v_count]]
        })
        .collect();
    let (period, closed) = period_closure(g)?;
    Ok(ImmersionSample { u_count, v_count, points, period, closed })
}

/// Horizontal translation picked up by `x + iy` around one loop of the
/// cylinder, and whether it vanishes relative to the loop length.
pub fn period_closure(g: &GaussMap) -> Result<(Complex64, bool)> {
    let spec = QuadratureSpec { rel_tol: 1e-13, max_refinements: 8, ..Default::default() };
    let f = g.circumference();
    let u = 0.0;
    // Surface range errors before quadrature turns them into NaN.
    gauss_value(g, u, 0.0)?;
    let component = |part: fn(Complex64) -> f64| -> std::result::Result<f64, QuadratureError> {
        match integrate_periodic(|v| horizontal_dv(g, u, v).map_or(f64::NAN, part), f, &spec) {
            Ok(e) => Ok(e.value),
            // A vanishing period only converges to rounding level.
            Err(QuadratureError::NonConvergence { value, err_est }) if err_est <= 1e-12 * f => Ok(value),
            Err(e) => Err(e),
        }
    };
    let period = Complex64::new(component(|z| z.re)?, component(|z| z.im)?);
    let length = integrate_periodic(
        |v| gauss_value(g, u, v).map_or(f64::NAN, |gv| 0.5 * (gv.norm() + 1.0 / gv.norm())),
        f,
        &QuadratureSpec::default(),
    )?
    .value;
    let closed = period.norm() <= PERIOD_REL_TOL * length;
    Ok((period, closed))
}

/// Writes the sample as a plain-text triangle mesh (`v x y z`, `f i j k`, 1-based).
pub fn export_mesh(sample: &ImmersionSample, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io { path: path.display().to_string(), source };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    write_mesh(sample, &mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

pub fn write_mesh(sample: &ImmersionSample, w: &mut impl Write) -> std::io::Result<()> {
    for p in &sample.points {
        writeln!(w, "v {} {} {}", p[0], p[1], p[2])?;
    }
    for t in sample.triangles() {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}
