//! Gauss maps on a flat cylinder `C / ifZ`.
//!
//! A Gauss map is stored in logarithm-canonical form
//!
//! ```text
//! g(w) = q^n * exp(sum_k c_k q^k),    q = exp(2 pi w / f),
//! ```
//!
//! so it never vanishes and has no poles on the cylinder. The conformal
//! factor of the induced metric is `cosh^2(kappa)` with `kappa = ln|g|`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::quadrature::{integrate_periodic, QuadratureSpec};
use crate::{Error, Result};

/// Largest real part of `log g` that still exponentiates to a finite value.
const MAX_LOG_MODULUS: f64 = 709.0;

/// A point `w = u + iv` of the cylinder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderPoint {
    pub u: f64,
    pub v: f64,
}

impl CylinderPoint {
    pub fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn w(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }
}

/// Nonvanishing Gauss map `q^n exp(sum c_k q^k)` on a cylinder of circumference `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussMap {
    winding: i32,
    circumference: f64,
    coeffs: BTreeMap<i32, Complex64>,
}

impl GaussMap {
    pub fn new(winding: i32, circumference: f64, coeffs: BTreeMap<i32, Complex64>) -> Result<Self> {
        if winding == 0 {
            return Err(Error::InvalidInput("Gauss map winding must be nonzero".into()));
        }
        if !(circumference.is_finite() && circumference > 0.0) {
            return Err(Error::InvalidInput(format!(
                "circumference must be positive and finite, got {circumference}"
            )));
        }
        if let Some((k, c)) = coeffs.iter().find(|(_, c)| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidInput(format!("coefficient of q^{k} is not finite: {c}")));
        }
        Ok(Self { winding, circumference, coeffs })
    }

    /// The Gauss map `exp(2 pi w / f + d0)` of the catenoid with flux `f`.
    pub fn catenoid(circumference: f64, d0: f64) -> Result<Self> {
        Self::new(1, circumference, BTreeMap::from([(0, Complex64::new(d0, 0.0))]))
    }

    pub fn winding(&self) -> i32 {
        self.winding
    }

    pub fn circumference(&self) -> f64 {
        self.circumference
    }

    pub fn coeffs(&self) -> &BTreeMap<i32, Complex64> {
        &self.coeffs
    }

    /// Same data on a cylinder of a different circumference.
    pub fn with_circumference(&self, circumference: f64) -> Result<Self> {
        Self::new(self.winding, circumference, self.coeffs.clone())
    }

    /// `1/g`, i.e. the antipodal Gauss map: winding and coefficients negated.
    pub fn reciprocal(&self) -> Self {
        Self {
            winding: -self.winding,
            circumference: self.circumference,
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k, -c)).collect(),
        }
    }

    /// True when the exponent is a real constant, i.e. the map is that of a
    /// catenoid (up to a rotation when `Im c_0 != 0`).
    pub fn is_pure_catenoid(&self) -> bool {
        self.winding == 1 && self.coeffs.iter().all(|(&k, c)| k == 0 || *c == Complex64::new(0.0, 0.0))
    }

    /// Real constant term `Re c_0`.
    pub fn constant_term(&self) -> f64 {
        self.coeffs.get(&0).map_or(0.0, |c| c.re)
    }

    fn wavenumber(&self) -> f64 {
        TAU / self.circumference
    }

    /// Maximum Laurent index `max |k|` among stored coefficients.
    pub fn max_index(&self) -> u32 {
        self.coeffs.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    /// `log g(w) = n 2 pi w / f + sum c_k q^k`, with `v` reduced modulo `f`.
    pub fn log_eval(&self, p: CylinderPoint) -> Complex64 {
        self.level(p.u).log_at(p.v)
    }

    /// Precomputed evaluator along the level curve at height `u`.
    pub fn level(&self, u: f64) -> LevelCurve<'_> {
        let s = self.wavenumber();
        let terms = self
            .coeffs
            .iter()
            .map(|(&k, &c)| (k, c * (s * f64::from(k) * u).exp()))
            .collect();
        LevelCurve { map: self, u, terms }
    }

    /// Derivative `(log g)'(w) = (2 pi / f) (n + sum k c_k q^k)`.
    pub fn log_derivative(&self, p: CylinderPoint) -> Complex64 {
        let level = self.level(p.u);
        let z = level.phase(p.v);
        let mut acc = Complex64::new(f64::from(self.winding), 0.0);
        for &(k, ck) in &level.terms {
            acc += ck * f64::from(k) * level.power(z, k);
        }
        acc * self.wavenumber()
    }
}

/// Evaluation of a Gauss map along `{u = const}`.
///
/// The Laurent coefficients are pre-scaled by `exp(2 pi k u / f)`, so each
/// evaluation only needs one `sin_cos` and a handful of multiplications.
pub struct LevelCurve<'a> {
    map: &'a GaussMap,
    u: f64,
    terms: Vec<(i32, Complex64)>,
}

impl LevelCurve<'_> {
    fn phase(&self, v: f64) -> Complex64 {
        let f = self.map.circumference;
        let theta = TAU * v.rem_euclid(f) / f;
        let (sin, cos) = theta.sin_cos();
        Complex64::new(cos, sin)
    }

    fn power(&self, z: Complex64, k: i32) -> Complex64 {
        if k >= 0 {
            z.powu(k as u32)
        } else {
            z.conj().powu(k.unsigned_abs())
        }
    }

    fn exponent_sum(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(k, ck) in &self.terms {
            acc += ck * self.power(z, k);
        }
        acc
    }

    pub fn log_at(&self, v: f64) -> Complex64 {
        let z = self.phase(v);
        let f = self.map.circumference;
        let linear = Complex64::new(self.u, v.rem_euclid(f)) * (f64::from(self.map.winding) * TAU / f);
        linear + self.exponent_sum(z)
    }

    /// `kappa = ln|g|` on this level curve.
    pub fn kappa_at(&self, v: f64) -> f64 {
        let z = self.phase(v);
        f64::from(self.map.winding) * self.map.wavenumber() * self.u + self.exponent_sum(z).re
    }
}

/// `g(w)`; a range error is returned instead of an infinity or zero.
pub fn eval_gauss_map(g: &GaussMap, p: CylinderPoint) -> Result<Complex64> {
    check_finite_point(p)?;
    let lg = g.log_eval(p);
    if !lg.re.is_finite() || lg.re.abs() > MAX_LOG_MODULUS {
        return Err(Error::Range(format!(
            "ln|g| = {} at (u, v) = ({}, {}) is outside the floating range",
            lg.re, p.u, p.v
        )));
    }
    Ok(lg.exp())
}

/// `kappa(u, v) = ln|g(w)|`.
pub fn kappa(g: &GaussMap, p: CylinderPoint) -> Result<f64> {
    check_finite_point(p)?;
    let k = g.level(p.u).kappa_at(p.v);
    if !k.is_finite() {
        return Err(Error::Range(format!("kappa is not finite at (u, v) = ({}, {})", p.u, p.v)));
    }
    Ok(k)
}

fn check_finite_point(p: CylinderPoint) -> Result<()> {
    if p.u.is_finite() && p.v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("cylinder point ({}, {}) is not finite", p.u, p.v)))
    }
}

/// Winding number of `g` along the level curve at height `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding {
    pub value: i32,
    /// Unrounded value of `(1/2pi) \oint d arg g`.
    pub raw: f64,
}

impl Winding {
    pub fn residual(&self) -> f64 {
        (self.raw - f64::from(self.value)).abs()
    }
}

/// Default allowed distance of the raw winding integral from an integer.
pub const WINDING_TOL: f64 = 1e-6;

/// Winding of `arg g` along `{u = const}` via the periodic integral of
/// `Im(g'/g dw) = Re(g'/g) dv`.
pub fn winding_number(g: &GaussMap, u: f64, spec: &QuadratureSpec) -> Result<Winding> {
    winding_number_with_tol(g, u, spec, WINDING_TOL)
}

pub fn winding_number_with_tol(g: &GaussMap, u: f64, spec: &QuadratureSpec, tol: f64) -> Result<Winding> {
    let f = g.circumference();
    let est = integrate_periodic(|v| g.log_derivative(CylinderPoint::new(u, v)).re, f, spec)?;
    let raw = est.value / (2.0 * PI);
    let rounded = raw.round();
    if !raw.is_finite() || (raw - rounded).abs() > tol {
        return Err(Error::WindingNotInteger { height: u, raw, tol });
    }
    Ok(Winding { value: rounded as i32, raw })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(n: i32, f: f64, coeffs: &[(i32, Complex64)]) -> GaussMap {
        GaussMap::new(n, f, coeffs.iter().copied().collect()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bare_winding_one_is_one_at_origin() {
        let g = map(1, TAU, &[]);
        let val = eval_gauss_map(&g, CylinderPoint::new(0.0, 0.0)).unwrap();
        assert!((val - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn constant_term_scales_by_exponential() {
        let g = map(1, TAU, &[(0, c(0.5, 0.0))]);
        let val = eval_gauss_map(&g, CylinderPoint::new(0.0, 0.0)).unwrap();
        assert!((val.re - 1.648_721_270_700_128_1).abs() < 1e-15);
        assert!(val.im.abs() < 1e-15);
    }

    #[test]
    fn second_order_example_matches_term_by_term_evaluation() {
        // q = e^{0.1}; g = q^2 exp(0.3 q) evaluated with real exponentials only.
        let g = map(2, TAU, &[(1, c(0.3, 0.0))]);
        let val = eval_gauss_map(&g, CylinderPoint::new(0.1, 0.0)).unwrap();
        let q = 0.1_f64.exp();
        let oracle = q * q * (0.3 * q).exp();
        assert!((val.re - oracle).abs() < 1e-14);
        assert!((val.re - 1.701_569_865_813_627_9).abs() < 1e-14);
        assert!(val.im.abs() < 1e-14);
    }

    #[test]
    fn catenoid_kappa_is_linear_in_height() {
        let f = 3.0;
        let g = GaussMap::catenoid(f, -0.4).unwrap();
        for &(u, v) in &[(0.0, 0.0), (0.7, 1.1), (-1.3, 2.9)] {
            let k = kappa(&g, CylinderPoint::new(u, v)).unwrap();
            assert!((k - (TAU / f * u - 0.4)).abs() < 1e-14);
        }
    }

    #[test]
    fn first_harmonic_kappa_on_unit_circle_is_cosine() {
        let g = map(1, TAU, &[(1, c(1.0, 0.0))]);
        for i in 0..16 {
            let v = i as f64 * 0.4;
            let k = kappa(&g, CylinderPoint::new(0.0, v)).unwrap();
            let direct = eval_gauss_map(&g, CylinderPoint::new(0.0, v)).unwrap().norm().ln();
            assert!((k - v.cos()).abs() < 1e-14);
            assert!((k - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn overflow_is_reported_as_range_error() {
        let g = map(1, 1.0, &[]);
        let err = eval_gauss_map(&g, CylinderPoint::new(200.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }

    #[test]
    fn zero_winding_is_rejected() {
        assert!(GaussMap::new(0, 1.0, BTreeMap::new()).is_err());
        assert!(GaussMap::new(1, -1.0, BTreeMap::new()).is_err());
    }

    #[test]
    fn winding_of_bare_maps() {
        let spec = QuadratureSpec::default();
        assert_eq!(winding_number(&map(1, TAU, &[]), 0.0, &spec).unwrap().value, 1);
        let g = map(3, 2.5, &[(1, c(0.2, -0.5)), (-2, c(0.1, 0.3))]);
        for &u in &[-0.5, 0.0, 0.9] {
            assert_eq!(winding_number(&g, u, &spec).unwrap().value, 3);
        }
        assert_eq!(winding_number(&g.reciprocal(), 0.3, &spec).unwrap().value, -3);
    }

    /// Winding from argument increments of sampled `g` values only.
    fn winding_by_argument_increments(g: &GaussMap, u: f64, nodes: usize) -> f64 {
        let f = g.circumference();
        let mut total = 0.0;
        let mut prev = eval_gauss_map(g, CylinderPoint::new(u, 0.0)).unwrap();
        for j in 1..=nodes {
            let v = f * j as f64 / nodes as f64;
            let cur = eval_gauss_map(g, CylinderPoint::new(u, v)).unwrap();
            total += (cur / prev).arg();
            prev = cur;
        }
        total / TAU
    }

    #[test]
    fn winding_agrees_with_denser_argument_count() {
        let g = map(2, TAU, &[(-1, c(0.0, 0.2)), (1, c(0.4, 0.0))]);
        let spec = QuadratureSpec::default();
        let w = winding_number(&g, 0.5, &spec).unwrap();
        let oracle = winding_by_argument_increments(&g, 0.5, 4 * spec.v_nodes);
        assert_eq!(w.value, 2);
        assert!((oracle - 2.0).abs() < 1e-9);
        assert!(w.residual() < 1e-12);
    }

    #[test]
    fn log_derivative_matches_finite_difference() {
        let g = map(2, 1.7, &[(-1, c(0.3, 0.2)), (2, c(-0.1, 0.4))]);
        let p = CylinderPoint::new(0.2, 0.9);
        let h = 1e-6;
        let fd = (g.log_eval(CylinderPoint::new(p.u + h, p.v)) - g.log_eval(CylinderPoint::new(p.u - h, p.v)))
            / (2.0 * h);
        assert!((fd - g.log_derivative(p)).norm() < 1e-7);
    }
}
