//! Area bounds for minimal surfaces in a horizontal slab.
//!
//! Surfaces are described by Weierstrass data on flat cylinders: the height
//! `u` is the real part of the conformal parameter `w = u + iv` and each
//! level curve `{u = const}` is a union of circles of circumference `f_i`.
//! The crate evaluates the area, the vertical flux, the averaged profile
//! `h(u)` of `ln|g|`, and checks the chain of inequalities that compares
//! the area with catenoidal waists in the same slab.

pub mod catenoid;
pub mod complex_core;
pub mod generate;
pub mod parser;
pub mod quadrature;
pub mod slab_analysis;
pub mod weierstrass;

use thiserror::Error;

pub use catenoid::{is_maximally_stable, optimal_waist, solve_beta, waist_area, BetaConstant, CatenoidalWaist};
pub use complex_core::{eval_gauss_map, kappa, winding_number, CylinderPoint, GaussMap, Winding};
pub use parser::{format_gauss_map, parse_gauss_map, ParseError};
pub use quadrature::{integrate_interval, integrate_periodic, Estimate, QuadratureError, QuadratureSpec};
pub use slab_analysis::{
    comparison_line, h_profile, h_slope_identity, jensen_gap, surface_area, verify_chain, vertical_flux,
    ChainOptions, ChainReport, ComparisonCase, ComparisonLine, HProfile, SlabSurface,
};
pub use weierstrass::{export_mesh, immerse, period_closure, ImmersionSample};

#[derive(Debug, Error)]
pub enum Error {
    #[error("range error: {0}")]
    Range(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("winding integral at height {height} is {raw}, more than {tol} from an integer")]
    WindingNotInteger { height: f64, raw: f64, tol: f64 },
    #[error("comparison line not applicable: {0}")]
    NotApplicable(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
