//! Catenoidal waists `C(lambda; d0) ∩ {-a <= z <= a}`.
//!
//! `C(lambda; d0)` is the catenoid with Gauss map `exp(lambda w + d0)` and
//! vertical flux `2 pi / lambda`. Its waist area in the slab is
//!
//! ```text
//! A = (2 pi / lambda) * integral_{-a}^{a} cosh^2(lambda u + d0) du.
//! ```

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use crate::{Error, Result};

/// Root of `tanh z = 1/z` on `(1, 2)` with its residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaConstant {
    pub value: f64,
    pub residual: f64,
}

fn beta_equation(z: f64) -> f64 {
    z * z.tanh() - 1.0
}

/// Solves `z tanh z = 1` by bisection on `[1, 2]` followed by Newton polishing.
pub fn solve_beta(tol: f64) -> BetaConstant {
    let tol = tol.max(1e-15);
    let (mut lo, mut hi) = (1.0_f64, 2.0_f64);
    // 40 halvings leave a bracket of width 1e-12; Newton finishes the job.
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if beta_equation(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut z = 0.5 * (lo + hi);
    for _ in 0..8 {
        let t = z.tanh();
        let derivative = t + z * (1.0 - t * t);
        let step = beta_equation(z) / derivative;
        if step == 0.0 || (z.tanh() - 1.0 / z).abs() <= tol * 1e-2 {
            break;
        }
        z -= step;
    }
    BetaConstant { value: z, residual: (z.tanh() - 1.0 / z).abs() }
}

/// Process-wide `beta`, solved once on first use.
pub fn beta() -> BetaConstant {
    static BETA: OnceLock<BetaConstant> = OnceLock::new();
    *BETA.get_or_init(|| solve_beta(1e-15))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatenoidalWaist {
    pub lambda: f64,
    pub d0: f64,
    pub a: f64,
}

impl CatenoidalWaist {
    pub fn new(lambda: f64, d0: f64, a: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidInput(format!("lambda must be positive, got {lambda}")));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidInput(format!("slab half-height must be positive, got {a}")));
        }
        if !d0.is_finite() {
            return Err(Error::InvalidInput(format!("d0 must be finite, got {d0}")));
        }
        Ok(Self { lambda, d0, a })
    }

    /// Vertical flux `2 pi / lambda` along a horizontal circle.
    pub fn flux(&self) -> f64 {
        TAU / self.lambda
    }
}

/// Closed-form waist area.
pub fn waist_area(c: &CatenoidalWaist) -> Result<f64> {
    let CatenoidalWaist { lambda, d0, a } = *c;
    let area = if d0 == 0.0 {
        TAU * a / lambda + PI / (lambda * lambda) * (2.0 * lambda * a).sinh()
    } else {
        let inner = a + ((2.0 * (lambda * a + d0)).sinh() + (2.0 * (lambda * a - d0)).sinh()) / (4.0 * lambda);
        TAU / lambda * inner
    };
    if area.is_finite() {
        Ok(area)
    } else {
        Err(Error::Range(format!(
            "waist area overflows for lambda = {lambda}, d0 = {d0}, a = {a}"
        )))
    }
}

/// `dA/dlambda` for the symmetric waist, in closed form.
pub fn waist_area_derivative(lambda: f64, a: f64) -> f64 {
    let l2 = lambda * lambda;
    -TAU * a / l2 - TAU / (l2 * lambda) * (2.0 * lambda * a).sinh() + TAU * a / l2 * (2.0 * lambda * a).cosh()
}

/// The least-area waist in the slab of half-height `a`: `lambda = beta / a`, `d0 = 0`.
pub fn optimal_waist(a: f64) -> Result<CatenoidalWaist> {
    CatenoidalWaist::new(beta().value / a, 0.0, a)
}

/// Symmetric waist whose boundary circles are tangent to rays from the slab centre.
pub fn is_maximally_stable(c: &CatenoidalWaist, tol: f64) -> bool {
    c.d0 == 0.0 && (c.lambda * c.a - beta().value).abs() <= tol
}
