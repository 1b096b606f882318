//! Quadrature on the cylinder.
//!
//! Around a level curve we use the uniform-node (periodic trapezoid) rule,
//! which converges spectrally for the analytic periodic integrands met here.
//! Across heights we use composite Gauss-Legendre panels. Both report an
//! error estimate obtained by doubling the node or panel count.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Uniform nodes per circumference; power of two, at least 8.
    pub v_nodes: usize,
    pub u_panels: usize,
    /// Gauss-Legendre nodes per panel.
    pub u_order: usize,
    pub rel_tol: f64,
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { v_nodes: 256, u_panels: 64, u_order: 8, rel_tol: 1e-10, max_refinements: 6 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if self.v_nodes < 8 || !self.v_nodes.is_power_of_two() {
            return Err(QuadratureError::InvalidSpec(format!(
                "v_nodes must be a power of two >= 8, got {}",
                self.v_nodes
            )));
        }
        if self.u_panels == 0 || self.u_order == 0 {
            return Err(QuadratureError::InvalidSpec("u_panels and u_order must be positive".into()));
        }
        if !(self.rel_tol > 100.0 * f64::EPSILON) {
            return Err(QuadratureError::InvalidSpec(format!(
                "rel_tol must exceed 100 * machine epsilon, got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err_est: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature did not converge: value {value}, error estimate {err_est}")]
    NonConvergence { value: f64, err_est: f64 },
    #[error("integrand is not finite at {at}")]
    NonFinite { at: f64 },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
}

/// Neumaier-compensated sum in a fixed order.
#[derive(Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

fn converged(err: f64, scale: f64, rel_tol: f64) -> bool {
    err <= rel_tol * scale
}

/// Periodic trapezoid rule for an `f`-periodic integrand.
pub fn integrate_periodic<F>(mut integrand: F, f: f64, spec: &QuadratureSpec) -> Result<Estimate, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_periodic(|v| Ok::<_, QuadratureError>(integrand(v)), f, spec)
}

/// Fallible variant of [`integrate_periodic`]; integrand errors are passed through.
///
/// Convergence is declared when the doubling estimate falls below `rel_tol`
/// times the integral of `|integrand|`, which also covers mean-zero integrands.
pub fn try_integrate_periodic<F, E>(mut integrand: F, f: f64, spec: &QuadratureSpec) -> Result<Estimate, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    spec.validate()?;
    if !(f.is_finite() && f > 0.0) {
        return Err(QuadratureError::InvalidInterval { lo: 0.0, hi: f }.into());
    }
    // Sums over the nodes of the coarse rule (half of the starting count).
    let mut n = spec.v_nodes / 2;
    let mut sum = CompensatedSum::default();
    let mut abs_sum = CompensatedSum::default();
    for j in 0..n {
        let v = f * j as f64 / n as f64;
        let y = integrand(v)?;
        if !y.is_finite() {
            return Err(QuadratureError::NonFinite { at: v }.into());
        }
        sum.add(y);
        abs_sum.add(y.abs());
    }
    let mut coarse = f * sum.total() / n as f64;
    let mut last = Estimate { value: coarse, err_est: f64::INFINITY };
    for _ in 0..=spec.max_refinements {
        // Odd nodes of the doubled rule.
        for j in 0..n {
            let v = f * (2 * j + 1) as f64 / (2 * n) as f64;
            let y = integrand(v)?;
            if !y.is_finite() {
                return Err(QuadratureError::NonFinite { at: v }.into());
            }
            sum.add(y);
            abs_sum.add(y.abs());
        }
        n *= 2;
        let fine = f * sum.total() / n as f64;
        let scale = f * abs_sum.total() / n as f64;
        last = Estimate { value: fine, err_est: (fine - coarse).abs() };
        if converged(last.err_est, scale, spec.rel_tol) {
            return Ok(last);
        }
        coarse = fine;
    }
    Err(QuadratureError::NonConvergence { value: last.value, err_est: last.err_est }.into())
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let m = (order + 1) / 2;
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if order == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=order {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let n = order as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// Fixed composite Gauss-Legendre rule.
pub(crate) struct PanelRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PanelRule {
    pub(crate) fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self { nodes, weights }
    }

    /// `(node, weight)` pairs of the composite rule on `[lo, hi]`.
    pub(crate) fn weighted_nodes(&self, lo: f64, hi: f64, panels: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        let width = (hi - lo) / panels as f64;
        (0..panels).flat_map(move |p| {
            let mid = lo + width * (p as f64 + 0.5);
            self.nodes.iter().zip(&self.weights).map(move |(x, w)| (mid + 0.5 * width * x, 0.5 * width * w))
        })
    }

    pub(crate) fn apply<F, E>(&self, integrand: &mut F, lo: f64, hi: f64, panels: usize) -> Result<f64, E>
    where
        F: FnMut(f64) -> Result<f64, E>,
        E: From<QuadratureError>,
    {
        let width = (hi - lo) / panels as f64;
        let mut total = CompensatedSum::default();
        for p in 0..panels {
            let a = lo + width * p as f64;
            let mid = a + 0.5 * width;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                let u = mid + 0.5 * width * x;
                let y = integrand(u)?;
                if !y.is_finite() {
                    return Err(QuadratureError::NonFinite { at: u }.into());
                }
                total.add(0.5 * width * w * y);
            }
        }
        Ok(total.total())
    }
}

/// Composite Gauss-Legendre integration on `[lo, hi]`.
pub fn integrate_interval<F>(mut integrand: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<Estimate, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_interval(|u| Ok::<_, QuadratureError>(integrand(u)), lo, hi, spec)
}

/// Fallible variant of [`integrate_interval`].
pub fn try_integrate_interval<F, E>(mut integrand: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<Estimate, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    spec.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadratureError::InvalidInterval { lo, hi }.into());
    }
    let rule = PanelRule::new(spec.u_order);
    let mut panels = spec.u_panels;
    let mut coarse = rule.apply(&mut integrand, lo, hi, panels)?;
    let mut last = Estimate { value: coarse, err_est: f64::INFINITY };
    for _ in 0..=spec.max_refinements {
        panels *= 2;
        let fine = rule.apply(&mut integrand, lo, hi, panels)?;
        last = Estimate { value: fine, err_est: (fine - coarse).abs() };
        // Absolute floor for integrals that cancel to zero.
        let scale = fine.abs().max(f64::MIN_POSITIVE) + 64.0 * f64::EPSILON * (hi - lo);
        if converged(last.err_est, scale, spec.rel_tol) {
            return Ok(last);
        }
        coarse = fine;
    }
    Err(QuadratureError::NonConvergence { value: last.value, err_est: last.err_est }.into())
}
