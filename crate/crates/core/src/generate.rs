//! Random theorem-eligible surfaces for test corpora.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::complex_core::GaussMap;
use crate::slab_analysis::SlabSurface;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleBounds {
    pub max_components: usize,
    pub max_winding: i32,
    /// Laurent truncation `K`; indices lie in `[-K, K]`.
    pub max_index: i32,
    pub coeff_radius: f64,
    pub a_range: (f64, f64),
}

impl Default for SampleBounds {
    fn default() -> Self {
        Self { max_components: 3, max_winding: 4, max_index: 4, coeff_radius: 1.0, a_range: (0.5, 2.0) }
    }
}

fn disk_sample(rng: &mut impl Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..TAU))
}

/// Gauss map with winding in `1..=max_winding` and a random Laurent exponent.
///
/// The circumference is `2 pi a K t` with `t` in `[1, 2]`, so every
/// `|q^k|` stays below `e` on the slab and the integrands remain resolvable.
pub fn random_gauss_map(rng: &mut impl Rng, a: f64, bounds: &SampleBounds) -> Result<GaussMap> {
    let n = rng.gen_range(1..=bounds.max_winding);
    let k_max = rng.gen_range(0..=bounds.max_index);
    let coeffs: BTreeMap<i32, Complex64> =
        (-k_max..=k_max).map(|k| (k, disk_sample(rng, bounds.coeff_radius))).collect();
    let f = TAU * a * f64::from(k_max.max(1)) * rng.gen_range(1.0..2.0);
    GaussMap::new(n, f, coeffs)
}

pub fn random_surface(rng: &mut impl Rng, bounds: &SampleBounds) -> Result<SlabSurface> {
    let a = rng.gen_range(bounds.a_range.0..=bounds.a_range.1);
    let count = rng.gen_range(1..=bounds.max_components);
    let comps = (0..count).map(|_| random_gauss_map(rng, a, bounds)).collect::<Result<Vec<_>>>()?;
    SlabSurface::new(a, comps)
}
