//! Detection of special splittings of Coxeter groups acting on hyperbolic
//! space, together with the explicit displacement bound that applies when no
//! small splitting certificate is found.
//!
//! The crate is organised around the stages of the analysis:
//!
//! * [`coxeter`] — presentations, Coxeter diagrams, special splittings and
//!   finite/affine type recognition;
//! * [`hyperbolic`] — the hyperboloid model of `H^n`: Lorentz linear algebra,
//!   distances, reflections, dihedral fixed points and the quantitative
//!   midpoint estimates;
//! * [`trees`] — finite metric trees, labelling systems, useful edges and the
//!   full-vertex theorem;
//! * [`approx`] — approximating trees for finite point sets and their shadows
//!   back in `H^n`;
//! * [`pipeline`] — the end-to-end analysis: either a small nontrivial special
//!   splitting certificate or an explicit displacement bound.
//!
//! The crate is `no_std` (with `alloc`); document formats, IO and the CLI live
//! in the companion crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod approx;
pub mod bitset;
pub mod coxeter;
pub mod hyperbolic;
pub mod pipeline;
pub mod samples;
pub mod trees;

/// Thinness constant of real hyperbolic space: every triangle in `H^n` is
/// `ln 3`-thin.
pub const DELTA: f64 = 1.098_612_288_668_109_8;

/// Numerical validation thresholds used throughout the crate.
///
/// `point` guards hyperboloid membership and collinearity tests, `isom`
/// guards Lorentz-matrix and relator residuals, `fix` is the threshold below
/// which a point counts as fixed by an isometry, and `thin` pads the `ln 3`
/// thinness bound in sampled checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub point: f64,
    pub isom: f64,
    pub fix: f64,
    pub thin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            point: 1e-9,
            isom: 1e-8,
            fix: 1e-6,
            thin: 1e-6,
        }
    }
}
