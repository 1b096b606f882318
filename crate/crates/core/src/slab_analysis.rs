//! Level-curve analysis of a minimal surface in the slab `{-a <= z <= a}`.
//!
//! A [`SlabSurface`] is a disjoint union of cylinders `[-a, a] x R/f_i Z`,
//! each carrying a canonical Gauss map `g_i`. The level set at height `u` is
//! the union of the circles `{u} x R/f_i Z`, its vertical flux is
//! `f = sum f_i`, and the metric is `cosh^2(kappa_i) |dw|^2`.
//!
//! Orientation: level curves are traversed with `v` increasing, so a surface
//! whose windings are all positive has an increasing profile
//! `h(u) = (1/f) sum_i \int kappa_i dv` with slope `2 pi (sum n_i) / f`.
//! Surfaces with all windings negative are handled through `g -> 1/g`, which
//! leaves the metric unchanged.

use std::f64::consts::TAU;

use crate::catenoid::{beta, optimal_waist, waist_area, CatenoidalWaist};
use crate::complex_core::{winding_number, GaussMap};
use crate::quadrature::{try_integrate_interval, try_integrate_periodic, Estimate, QuadratureSpec};
use crate::{Error, Result};

/// Largest `|kappa|` for which `cosh^2(kappa)` stays finite.
const MAX_KAPPA: f64 = 350.0;

/// Tolerance on the continuous parameters in the structural rigidity test.
const STRUCTURE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SlabSurface {
    a: f64,
    components: Vec<GaussMap>,
}

impl SlabSurface {
    pub fn new(a: f64, components: Vec<GaussMap>) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidInput(format!("slab half-height must be positive, got {a}")));
        }
        if components.is_empty() {
            return Err(Error::InvalidInput("a surface needs at least one component".into()));
        }
        Ok(Self { a, components })
    }

    pub fn single(a: f64, g: GaussMap) -> Result<Self> {
        Self::new(a, vec![g])
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn components(&self) -> &[GaussMap] {
        &self.components
    }

    pub fn flux(&self) -> f64 {
        self.components.iter().map(GaussMap::circumference).sum()
    }

    pub fn total_winding(&self) -> i64 {
        self.components.iter().map(|g| i64::from(g.winding())).sum()
    }

    /// All level components share one orientation.
    pub fn is_theorem_eligible(&self) -> bool {
        let positive = self.components.iter().all(|g| g.winding() > 0);
        let negative = self.components.iter().all(|g| g.winding() < 0);
        positive || negative
    }

    /// Copy with `g -> 1/g` applied when the total winding is negative.
    pub fn oriented(&self) -> Self {
        if self.total_winding() < 0 {
            Self { a: self.a, components: self.components.iter().map(GaussMap::reciprocal).collect() }
        } else {
            self.clone()
        }
    }

    fn check_height(&self, u: f64) -> Result<()> {
        let slack = 1e-12 * self.a;
        if u.is_finite() && u >= -self.a - slack && u <= self.a + slack {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("height {u} lies outside [-{a}, {a}]", a = self.a)))
        }
    }

    /// `sum_i \int_0^{f_i} kappa_i(u, v) dv`.
    fn kappa_integral(&self, u: f64, spec: &QuadratureSpec) -> Result<f64> {
        let mut total = 0.0;
        for g in &self.components {
            let level = g.level(u);
            let est = try_integrate_periodic(|v| Ok::<_, Error>(level.kappa_at(v)), g.circumference(), spec)?;
            total += est.value;
        }
        Ok(total)
    }

    /// `h(u)`, the mean of `kappa` over the level set.
    pub fn h(&self, u: f64, spec: &QuadratureSpec) -> Result<f64> {
        Ok(self.kappa_integral(u, spec)? / self.flux())
    }

    /// Length of the level set, `sum_i \int cosh^2(kappa_i) dv`.
    pub fn slice_area(&self, u: f64, spec: &QuadratureSpec) -> Result<Estimate> {
        let mut value = 0.0;
        let mut err_est = 0.0;
        for g in &self.components {
            let level = g.level(u);
            let est = try_integrate_periodic(
                |v| {
                    let k = level.kappa_at(v);
                    if !(k.abs() <= MAX_KAPPA) {
                        return Err(Error::Range(format!(
                            "cosh^2(kappa) overflows: kappa = {k} at (u, v) = ({u}, {v})"
                        )));
                    }
                    Ok(k.cosh().powi(2))
                },
                g.circumference(),
                spec,
            )?;
            value += est.value;
            err_est += est.err_est;
        }
        Ok(Estimate { value, err_est })
    }
}

/// Vertical flux `f = sum f_i` of the level curves.
pub fn vertical_flux(s: &SlabSurface) -> f64 {
    s.flux()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HProfile {
    pub samples: Vec<(f64, f64)>,
    /// Least-squares affine fit of the samples.
    pub slope: f64,
    pub intercept: f64,
    pub max_linear_deviation: f64,
}

impl HProfile {
    pub fn from_samples(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidInput("an h profile needs at least two heights".into()));
        }
        let n = samples.len() as f64;
        let mean_u = samples.iter().map(|s| s.0).sum::<f64>() / n;
        let mean_h = samples.iter().map(|s| s.1).sum::<f64>() / n;
        let suu: f64 = samples.iter().map(|s| (s.0 - mean_u).powi(2)).sum();
        let suh: f64 = samples.iter().map(|s| (s.0 - mean_u) * (s.1 - mean_h)).sum();
        if suu <= 0.0 {
            return Err(Error::InvalidInput("h profile heights must not all coincide".into()));
        }
        let slope = suh / suu;
        let intercept = mean_h - slope * mean_u;
        let max_linear_deviation = samples
            .iter()
            .map(|&(u, h)| (h - (slope * u + intercept)).abs())
            .fold(0.0, f64::max);
        Ok(Self { samples, slope, intercept, max_linear_deviation })
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.slope * u + self.intercept
    }
}

/// Samples `h` on `grid` and fits an affine function.
pub fn h_profile(s: &SlabSurface, grid: &[f64], spec: &QuadratureSpec) -> Result<HProfile> {
    let samples = grid
        .iter()
        .map(|&u| {
            s.check_height(u)?;
            Ok((u, s.h(u, spec)?))
        })
        .collect::<Result<Vec<_>>>()?;
    HProfile::from_samples(samples)
}

/// `count` equispaced heights covering `[-a, a]`.
pub fn uniform_grid(a: f64, count: usize) -> Vec<f64> {
    let count = count.max(2);
    (0..count).map(|i| -a + 2.0 * a * i as f64 / (count - 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeIdentity {
    /// Difference quotient of `h` across the slab.
    pub lhs: f64,
    /// `2 pi (sum of windings) / f`.
    pub rhs: f64,
    /// `(height, total winding)` at the five witness heights.
    pub windings: Vec<(f64, i64)>,
}

/// Total winding of the level set at `u`.
pub fn total_winding_at(s: &SlabSurface, u: f64, spec: &QuadratureSpec) -> Result<i64> {
    s.components
        .iter()
        .map(|g| winding_number(g, u, spec).map(|w| i64::from(w.value)))
        .sum()
}

fn witness_windings(s: &SlabSurface, spec: &QuadratureSpec) -> Result<Vec<(f64, i64)>> {
    uniform_grid(s.a, 5)
        .into_iter()
        .map(|u| Ok((u, total_winding_at(s, u, spec)?)))
        .collect()
}

pub fn h_slope_identity(s: &SlabSurface, spec: &QuadratureSpec) -> Result<SlopeIdentity> {
    let lhs = (s.h(s.a, spec)? - s.h(-s.a, spec)?) / (2.0 * s.a);
    let windings = witness_windings(s, spec)?;
    let first = windings[0].1;
    if let Some(&(u, w)) = windings.iter().find(|w| w.1 != first) {
        return Err(Error::InvalidInput(format!(
            "total winding changes from {first} to {w} at height {u}"
        )));
    }
    let rhs = TAU * first as f64 / s.flux();
    Ok(SlopeIdentity { lhs, rhs, windings })
}

/// `Area = \int_{-a}^{a} sum_i \int cosh^2(kappa_i) dv du`.
pub fn surface_area(s: &SlabSurface, spec: &QuadratureSpec) -> Result<Estimate> {
    let mut inner_rel: f64 = 0.0;
    let outer = try_integrate_interval(
        |u| {
            let slice = s.slice_area(u, spec)?;
            inner_rel = inner_rel.max(slice.err_est / slice.value.abs().max(f64::MIN_POSITIVE));
            Ok::<_, Error>(slice.value)
        },
        -s.a,
        s.a,
        spec,
    )?;
    Ok(Estimate { value: outer.value, err_est: outer.err_est + inner_rel * outer.value.abs() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenGap {
    pub slice_area: f64,
    /// `f cosh^2(h(u))`.
    pub avg_bound: f64,
    pub err_est: f64,
}

impl JensenGap {
    pub fn gap(&self) -> f64 {
        self.slice_area - self.avg_bound
    }
}

pub fn jensen_gap(s: &SlabSurface, u: f64, spec: &QuadratureSpec) -> Result<JensenGap> {
    s.check_height(u)?;
    let slice = s.slice_area(u, spec)?;
    let h = s.h(u, spec)?;
    Ok(JensenGap { slice_area: slice.value, avg_bound: s.flux() * h.cosh().powi(2), err_est: slice.err_est })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComparisonCase {
    /// `h` vanishes at height `d`; `k(u) = (2 pi / f)(u - d)`.
    ZeroCrossing { d: f64 },
    /// `h > 0` on the slab; the line is anchored at `(-a, h(-a))`.
    AllPositive,
    /// `h < 0` on the slab; the line is anchored at `(a, h(a))`.
    AllNegative,
}

impl ComparisonCase {
    pub fn label(&self) -> &'static str {
        match self {
            ComparisonCase::ZeroCrossing { .. } => "zero-crossing",
            ComparisonCase::AllPositive => "all-positive",
            ComparisonCase::AllNegative => "all-negative",
        }
    }
}

/// `k(u) = slope * u + offset` with `slope = 2 pi / f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonLine {
    pub slope: f64,
    /// `k(0)`, the `d0` of the comparison catenoid.
    pub offset: f64,
    pub case: ComparisonCase,
}

impl ComparisonLine {
    pub fn eval(&self, u: f64) -> f64 {
        self.slope * u + self.offset
    }

    pub fn zero(&self) -> Option<f64> {
        match self.case {
            ComparisonCase::ZeroCrossing { d } => Some(d),
            _ => None,
        }
    }

    /// `h <= k <= 0` or `0 <= k <= h` at every `u`, up to `tol`.
    pub fn is_sandwiched(&self, h: impl Fn(f64) -> f64, heights: &[f64], tol: f64) -> bool {
        heights.iter().all(|&u| {
            let (hu, ku) = (h(u), self.eval(u));
            (hu <= ku + tol && ku <= tol) || (-tol <= ku && ku <= hu + tol)
        })
    }
}

/// Builds the comparison line below an increasing affine profile.
pub fn comparison_line(hp: &HProfile, f_total: f64, a: f64) -> Result<ComparisonLine> {
    let slope = TAU / f_total;
    if !(hp.slope >= slope * (1.0 - 1e-9)) {
        return Err(Error::NotApplicable(format!(
            "h has slope {} but the comparison needs at least 2 pi / f = {slope}",
            hp.slope
        )));
    }
    let (h_lo, h_hi) = (hp.eval(-a), hp.eval(a));
    let line = if h_lo > 0.0 {
        ComparisonLine { slope, offset: slope * a + h_lo, case: ComparisonCase::AllPositive }
    } else if h_hi < 0.0 {
        ComparisonLine { slope, offset: -slope * a + h_hi, case: ComparisonCase::AllNegative }
    } else {
        let d = -hp.intercept / hp.slope;
        ComparisonLine { slope, offset: -slope * d, case: ComparisonCase::ZeroCrossing { d } }
    };
    Ok(line)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainOptions {
    /// Analyse surfaces whose level components have mixed orientations.
    pub mixed_ok: bool,
    /// Slack below which a link counts as an equality.
    pub equality_tol: f64,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self { mixed_ok: false, equality_tol: 1e-8 }
    }
}

pub const LINK_NAMES: [&str; 5] = [
    "area >= average bound",
    "average bound >= line bound",
    "line bound >= waist(d0)",
    "waist(d0) >= symmetric waist",
    "symmetric waist >= optimal waist",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub a: f64,
    pub f_total: f64,
    pub sum_n: i64,
    /// Set when the surface falls outside the orientation hypothesis.
    pub exploratory: bool,
    pub area_sigma: f64,
    pub avg_bound: f64,
    pub line_bound: f64,
    pub waist_area_d0: f64,
    pub waist_area_sym: f64,
    pub optimal_area: f64,
    pub slacks: [f64; 5],
    pub err_ests: [f64; 3],
    pub err_est: f64,
    pub link_pass: [bool; 5],
    pub verdict: bool,
    pub equality_case: bool,
    pub line: Option<ComparisonLine>,
    /// `(height, total winding)` at five heights; constant for canonical surfaces.
    pub windings: Vec<(f64, i64)>,
    pub spec: QuadratureSpec,
}

impl ChainReport {
    /// `area_sigma - optimal_area`, defined even when intermediate links are not.
    pub fn overall_slack(&self) -> f64 {
        self.area_sigma - self.optimal_area
    }

    pub fn failed_links(&self) -> Vec<&'static str> {
        LINK_NAMES.iter().zip(&self.link_pass).filter(|(_, ok)| !**ok).map(|(n, _)| *n).collect()
    }

    pub fn verdict_label(&self) -> &'static str {
        match (self.exploratory, self.verdict) {
            (false, true) => "pass",
            (false, false) => "fail",
            (true, true) => "exploratory-pass",
            (true, false) => "exploratory-fail",
        }
    }

    pub fn csv_header() -> &'static str {
        "surface-id,a,f_total,sum_n,area_sigma,avg_bound,line_bound,waist_d0,waist_sym,optimal,\
         slack1,slack2,slack3,slack4,slack5,err_est,verdict,equality"
    }

    pub fn csv_row(&self, id: &str) -> String {
        let mut fields = vec![
            id.to_string(),
            self.a.to_string(),
            self.f_total.to_string(),
            self.sum_n.to_string(),
            self.area_sigma.to_string(),
            self.avg_bound.to_string(),
            self.line_bound.to_string(),
            self.waist_area_d0.to_string(),
            self.waist_area_sym.to_string(),
            self.optimal_area.to_string(),
        ];
        fields.extend(self.slacks.iter().map(f64::to_string));
        fields.push(self.err_est.to_string());
        fields.push(self.verdict_label().to_string());
        fields.push(self.equality_case.to_string());
        fields.join(",")
    }
}

/// Heights used to fit `h` inside [`verify_chain`].
const PROFILE_POINTS: usize = 33;

/// Evaluates the full inequality chain
/// `Area >= \int f cosh^2 h >= \int f cosh^2 k = Area(W) >= Area(W_sym) >= Area(optimal)`.
pub fn verify_chain(s: &SlabSurface, spec: &QuadratureSpec, options: &ChainOptions) -> Result<ChainReport> {
    let exploratory = !s.is_theorem_eligible();
    if exploratory && !options.mixed_ok {
        let windings: Vec<String> = s.components.iter().map(|g| g.winding().to_string()).collect();
        return Err(Error::HypothesisViolation(format!(
            "level components have mixed orientations (windings {})",
            windings.join(", ")
        )));
    }
    let oriented = s.oriented();
    let (a, f) = (s.a, s.flux());
    let windings = witness_windings(&oriented, spec)?;

    let area = surface_area(&oriented, spec)?;
    let avg = try_integrate_interval(|u| Ok::<_, Error>(f * oriented.h(u, spec)?.cosh().powi(2)), -a, a, spec)?;
    let optimal_area = waist_area(&optimal_waist(a)?)?;

    let profile = h_profile(&oriented, &uniform_grid(a, PROFILE_POINTS), spec)?;
    let line = match comparison_line(&profile, f, a) {
        Ok(line) => Some(line),
        Err(Error::NotApplicable(_)) if exploratory => None,
        Err(e) => return Err(e),
    };

    let lambda = TAU / f;
    let (line_bound, line_err, waist_d0, waist_sym) = match line {
        Some(line) => {
            let est = try_integrate_interval(|u| Ok::<_, Error>(f * line.eval(u).cosh().powi(2)), -a, a, spec)?;
            let w_d0 = waist_area(&CatenoidalWaist::new(lambda, line.offset, a)?)?;
            let w_sym = waist_area(&CatenoidalWaist::new(lambda, 0.0, a)?)?;
            (est.value, est.err_est, w_d0, w_sym)
        }
        None => (f64::NAN, 0.0, f64::NAN, f64::NAN),
    };

    let chain = [area.value, avg.value, line_bound, waist_d0, waist_sym, optimal_area];
    let slacks = std::array::from_fn(|i| chain[i] - chain[i + 1]);
    let err_ests = [area.err_est, avg.err_est, line_err];
    let err_est = err_ests.iter().sum::<f64>() + 1e-12 * area.value.abs().max(1.0);
    let link_pass = slacks.map(|s: f64| s >= -err_est);
    let verdict = link_pass.iter().all(|&ok| ok);

    let equality_case = verdict
        && slacks.iter().all(|&s| s <= options.equality_tol)
        && is_optimal_catenoid_form(&oriented);

    Ok(ChainReport {
        a,
        f_total: f,
        sum_n: s.total_winding(),
        exploratory,
        area_sigma: area.value,
        avg_bound: avg.value,
        line_bound,
        waist_area_d0: waist_d0,
        waist_area_sym: waist_sym,
        optimal_area,
        slacks,
        err_ests,
        err_est,
        link_pass,
        verdict,
        equality_case,
        line,
        windings,
        spec: *spec,
    })
}

/// Single catenoid component, centred in the slab, with `2 pi a / f = beta`.
///
/// `Im c_0` only rotates the surface about the vertical axis and is ignored.
fn is_optimal_catenoid_form(s: &SlabSurface) -> bool {
    match s.components.as_slice() {
        [g] => {
            g.is_pure_catenoid()
                && g.constant_term().abs() <= STRUCTURE_TOL
                && (TAU * s.a / g.circumference() - beta().value).abs() <= STRUCTURE_TOL
        }
        _ => false,
    }
}
