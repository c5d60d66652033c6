//! The hyperboloid model of hyperbolic `n`-space.
//!
//! Points live on the upper sheet of `⟨x,x⟩ = -1` in Minkowski space
//! `R^{1,n}` with the Lorentz form `⟨x,y⟩ = -x₀y₀ + Σ xᵢyᵢ`, and isometries
//! are Lorentz matrices preserving that sheet.  Besides the basic metric
//! toolkit (distances, geodesics, reflections, dihedral fixed points) this
//! module carries the quantitative estimates the analysis relies on: the
//! involution `h`, the segment-length threshold `Λ(ε,R)`, comparison tripods
//! and sampled triangle thinness.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::Tolerances;

/// Factor covering per-term representation error in compensated Lorentz
/// products; used to derive conditioning-aware tolerances.
const DOT_ERR_FACTOR: f64 = 4.0e-16;

#[derive(Clone, Debug, PartialEq)]
pub enum HyperbolicError {
    /// Coordinates do not satisfy `⟨x,x⟩ = -1` within tolerance.
    NotOnHyperboloid { norm: f64 },
    /// Time coordinate is not positive (lower sheet).
    NotUpperSheet,
    /// Matrix does not preserve the Lorentz form within tolerance.
    NotLorentz { residual: f64 },
    /// Wrong coordinate or matrix size for the stated dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// `h` requires a strictly positive argument.
    NonPositiveArgument,
    /// `Λ(ε,R)` requires `ε > 0`.
    NonPositiveEpsilon,
    /// Subspace basis is (numerically) linearly dependent or null.
    DegenerateSubspace,
    /// Subspace or averaged orbit vector misses the timelike cone.
    NotTimelike,
    /// `(s_i s_j)^m` is not the identity within tolerance.
    OrderMismatch { residual: f64 },
    /// Side lengths violate the triangle inequality.
    TriangleInequalityViolated,
    /// A stated precondition failed; the message names it.
    PreconditionViolated(String),
}

impl fmt::Display for HyperbolicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HyperbolicError::NotOnHyperboloid { norm } => {
                write!(f, "point is not on the hyperboloid: <x,x> = {norm}")
            }
            HyperbolicError::NotUpperSheet => write!(f, "point is not on the upper sheet"),
            HyperbolicError::NotLorentz { residual } => {
                write!(f, "matrix is not Lorentz: residual {residual}")
            }
            HyperbolicError::DimensionMismatch { expected, got } => {
                write!(f, "expected {expected} entries, got {got}")
            }
            HyperbolicError::NonPositiveArgument => write!(f, "argument must be positive"),
            HyperbolicError::NonPositiveEpsilon => write!(f, "epsilon must be positive"),
            HyperbolicError::DegenerateSubspace => write!(f, "subspace basis is degenerate"),
            HyperbolicError::NotTimelike => write!(f, "no timelike direction"),
            HyperbolicError::OrderMismatch { residual } => {
                write!(f, "dihedral order relation fails: residual {residual}")
            }
            HyperbolicError::TriangleInequalityViolated => {
                write!(f, "side lengths violate the triangle inequality")
            }
            HyperbolicError::PreconditionViolated(what) => {
                write!(f, "precondition violated: {what}")
            }
        }
    }
}

impl core::error::Error for HyperbolicError {}

/// Compensated Lorentz inner product `-x₀y₀ + Σ xᵢyᵢ`.
///
/// Products are split with fused multiply-adds and summed with Neumaier
/// compensation, so cancellation between the time and space parts does not
/// cost accuracy beyond what the inputs themselves carry.
pub fn lorentz_dot(x: &[f64], y: &[f64]) -> f64 {
    lorentz_dot_mag(x, y).0
}

/// Lorentz product together with the sum of term magnitudes, the scale
/// against which cancellation error must be judged.
pub fn lorentz_dot_mag(x: &[f64], y: &[f64]) -> (f64, f64) {
    debug_assert_eq!(x.len(), y.len());
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut mag = 0.0f64;
    for k in 0..x.len() {
        let sign = if k == 0 { -1.0 } else { 1.0 };
        let a = sign * x[k];
        let b = y[k];
        let p = a * b;
        let err = libm::fma(a, b, -p);
        mag += libm::fabs(p);
        // Neumaier update.
        let t = sum + p;
        if libm::fabs(sum) >= libm::fabs(p) {
            comp += (sum - t) + p;
        } else {
            comp += (p - t) + sum;
        }
        sum = t;
        comp += err;
    }
    (sum + comp, mag)
}

fn acosh_clamped(arg: f64) -> f64 {
    if arg <= 1.0 {
        0.0
    } else {
        libm::acosh(arg)
    }
}

/// A point on the upper sheet of the hyperboloid, `n+1` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct HPoint {
    coords: Vec<f64>,
}

impl HPoint {
    /// Validates hyperboloid membership (`⟨x,x⟩ = -1` within `tol.point`,
    /// scaled by the conditioning of the product) and the upper sheet.
    pub fn new(coords: Vec<f64>, tol: &Tolerances) -> Result<HPoint, HyperbolicError> {
        if coords.len() < 2 {
            return Err(HyperbolicError::DimensionMismatch {
                expected: 2,
                got: coords.len(),
            });
        }
        let (norm, mag) = lorentz_dot_mag(&coords, &coords);
        let slack = tol.point * (1.0 + mag) + mag * DOT_ERR_FACTOR;
        if libm::fabs(norm + 1.0) > slack {
            return Err(HyperbolicError::NotOnHyperboloid { norm });
        }
        if coords[0] <= 0.0 {
            return Err(HyperbolicError::NotUpperSheet);
        }
        Ok(HPoint { coords })
    }

    /// Rescales a timelike vector onto the upper sheet.
    ///
    /// The norm must be negative beyond the product's conditioning error,
    /// otherwise the rescaling would be noise and `NotTimelike` is returned.
    pub fn from_timelike(v: Vec<f64>) -> Result<HPoint, HyperbolicError> {
        let (norm, mag) = lorentz_dot_mag(&v, &v);
        let err = mag * DOT_ERR_FACTOR;
        if !(norm < -err) || !norm.is_finite() {
            return Err(HyperbolicError::NotTimelike);
        }
        let scale = 1.0 / libm::sqrt(-norm);
        let flip = if v[0] < 0.0 { -scale } else { scale };
        Ok(HPoint {
            coords: v.into_iter().map(|c| c * flip).collect(),
        })
    }

    /// Wraps coordinates produced by formulas that are exact on the
    /// hyperboloid in real arithmetic; no validation or rescaling, since at
    /// large radii the norm residual is dominated by representation error.
    pub(crate) fn from_exact_formula(coords: Vec<f64>) -> HPoint {
        HPoint { coords }
    }

    /// The base point `e₀ = (1, 0, ..., 0)` of `H^n`.
    pub fn origin(dim: usize) -> HPoint {
        let mut coords = vec![0.0; dim + 1];
        coords[0] = 1.0;
        HPoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn lorentz_norm(&self) -> f64 {
        lorentz_dot(&self.coords, &self.coords)
    }
}

/// Hyperbolic distance `arccosh(-⟨x,y⟩)`, clamped so the argument is `≥ 1`.
///
/// Identical coordinate vectors give exactly `0`; the product's own rounding
/// would otherwise put the argument a few ulps past `1`, where `arccosh`
/// amplifies it to `~1e-8`.
pub fn dist(x: &HPoint, y: &HPoint) -> f64 {
    if x.coords == y.coords {
        return 0.0;
    }
    let arg = -lorentz_dot(&x.coords, &y.coords);
    acosh_clamped(arg)
}

/// Distance together with a bound on its numerical error, by interval
/// propagation of the product's conditioning error through `arccosh`.
///
/// At large coordinates the product cancels catastrophically, so the bound
/// can be large; callers gating preconditions on a distance must allow it.
pub fn dist_with_err(x: &HPoint, y: &HPoint) -> (f64, f64) {
    let (dot, mag) = lorentz_dot_mag(&x.coords, &y.coords);
    let arg = -dot;
    let arg_err = mag * DOT_ERR_FACTOR;
    let d = acosh_clamped(arg);
    let hi = acosh_clamped(arg + arg_err);
    let lo = acosh_clamped(arg - arg_err);
    (d, (hi - d).max(d - lo))
}

/// True when the distance from `x` to `y` is at most `r`, judged in
/// `cosh`-space so the product's conditioning error is handled without
/// amplification near zero distance.
///
/// The allowance also covers points produced by chains of isometry
/// applications, whose coordinates carry more rounding than a raw product.
pub fn within_distance(x: &HPoint, y: &HPoint, r: f64, tol: &Tolerances) -> bool {
    debug_assert!(r >= 0.0);
    if r >= 700.0 {
        return true;
    }
    let (dot, mag) = lorentz_dot_mag(&x.coords, &y.coords);
    let arg = -dot;
    let arg_err = mag * 2e-14;
    arg <= libm::cosh(r) * (1.0 + tol.point) + arg_err
}

/// Point at arc-length fraction `t` along the geodesic from `x` to `y`.
///
/// `t = 0` and `t = 1` return the endpoints exactly; interior points follow
/// `(sinh((1-t)d)·x + sinh(td)·y)/sinh(d)` and are renormalised onto the
/// hyperboloid.
pub fn geodesic_point(x: &HPoint, y: &HPoint, t: f64) -> HPoint {
    if t == 0.0 {
        return x.clone();
    }
    if t == 1.0 {
        return y.clone();
    }
    let d = dist(x, y);
    if d == 0.0 {
        return x.clone();
    }
    // For large d, sinh((1-t)d)/sinh(d) underflows gracefully via the
    // exponential form.
    let (wa, wb) = if d < 350.0 {
        let s = libm::sinh(d);
        (libm::sinh((1.0 - t) * d) / s, libm::sinh(t * d) / s)
    } else {
        let ra = libm::exp(-t * d) * (1.0 - libm::exp(-2.0 * (1.0 - t) * d))
            / (1.0 - libm::exp(-2.0 * d));
        let rb = libm::exp(-(1.0 - t) * d) * (1.0 - libm::exp(-2.0 * t * d))
            / (1.0 - libm::exp(-2.0 * d));
        (ra, rb)
    };
    let coords: Vec<f64> = x
        .coords
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| wa * a + wb * b)
        .collect();
    HPoint::from_exact_formula(coords)
}

/// Geodesic midpoint of `x` and `y`.
pub fn midpoint(x: &HPoint, y: &HPoint) -> HPoint {
    geodesic_point(x, y, 0.5)
}

/// The involution `h(x) = arcsinh(1/sinh x)`, strictly decreasing on `x > 0`.
///
/// `h` is its own inverse.  Beyond `x ≈ 710` the true value underflows double
/// precision and `0` is returned.
pub fn h(x: f64) -> Result<f64, HyperbolicError> {
    if !(x > 0.0) {
        return Err(HyperbolicError::NonPositiveArgument);
    }
    Ok(libm::asinh(1.0 / libm::sinh(x)))
}

/// Inverse of [`h`]; `h` is an involution, so this is `h` itself.
pub fn h_inv(x: f64) -> Result<f64, HyperbolicError> {
    h(x)
}

/// The segment-length threshold `Λ(ε,R) = 4/ε + 2R`.
///
/// A segment at least this long has its midpoint moved at most `ε` by any
/// involution moving both endpoints at most `R`.
pub fn lambda(epsilon: f64, r: f64) -> Result<f64, HyperbolicError> {
    if !(epsilon > 0.0) {
        return Err(HyperbolicError::NonPositiveEpsilon);
    }
    debug_assert!(r >= 0.0);
    Ok(4.0 / epsilon + 2.0 * r)
}

/// A geodesic segment with its length cached.
#[derive(Clone, Debug)]
pub struct GeodesicSegment {
    a: HPoint,
    b: HPoint,
    length: f64,
}

impl GeodesicSegment {
    pub fn new(a: HPoint, b: HPoint) -> GeodesicSegment {
        let length = dist(&a, &b);
        GeodesicSegment { a, b, length }
    }

    pub fn endpoints(&self) -> (&HPoint, &HPoint) {
        (&self.a, &self.b)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn midpoint(&self) -> HPoint {
        midpoint(&self.a, &self.b)
    }

    /// Point at arc-length `s` from the first endpoint.
    pub fn point_at(&self, s: f64) -> HPoint {
        if self.length == 0.0 {
            return self.a.clone();
        }
        geodesic_point(&self.a, &self.b, s / self.length)
    }
}

/// An isometry of `H^n`: a Lorentz matrix preserving the upper sheet,
/// stored row-major as `(n+1)²` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct HIsometry {
    dim: usize,
    mat: Vec<f64>,
}

impl HIsometry {
    pub fn identity(dim: usize) -> HIsometry {
        let n = dim + 1;
        let mut mat = vec![0.0; n * n];
        for i in 0..n {
            mat[i * n + i] = 1.0;
        }
        HIsometry { dim, mat }
    }

    /// Validates the Lorentz condition `MᵀJM = J` (within `tol.isom`, scaled
    /// by the conditioning of the entries) and upper-sheet preservation.
    pub fn new(dim: usize, mat: Vec<f64>, tol: &Tolerances) -> Result<HIsometry, HyperbolicError> {
        let n = dim + 1;
        if mat.len() != n * n {
            return Err(HyperbolicError::DimensionMismatch {
                expected: n * n,
                got: mat.len(),
            });
        }
        let m = HIsometry { dim, mat };
        let residual = m.lorentz_residual();
        if residual > m.validation_slack(tol) {
            return Err(HyperbolicError::NotLorentz { residual });
        }
        if m.mat[0] <= 0.0 {
            return Err(HyperbolicError::NotUpperSheet);
        }
        Ok(m)
    }

    fn validation_slack(&self, tol: &Tolerances) -> f64 {
        let scale = self.max_abs();
        tol.isom * (1.0 + scale * scale * (self.dim as f64 + 1.0) * 1e-8)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.mat
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().fold(0.0, |m, &v| m.max(libm::fabs(v)))
    }

    /// `max |MᵀJM - J|`.
    pub fn lorentz_residual(&self) -> f64 {
        let n = self.dim + 1;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                // (MᵀJM)_{ij} = Σ_k M_{ki} J_{kk} M_{kj}
                let col_i: Vec<f64> = (0..n).map(|k| self.mat[k * n + i]).collect();
                let col_j: Vec<f64> = (0..n).map(|k| self.mat[k * n + j]).collect();
                let entry = lorentz_dot(&col_i, &col_j);
                let target = if i != j {
                    0.0
                } else if i == 0 {
                    -1.0
                } else {
                    1.0
                };
                worst = worst.max(libm::fabs(entry - target));
            }
        }
        worst
    }

    pub fn apply(&self, p: &HPoint) -> HPoint {
        HPoint {
            coords: self.apply_raw(&p.coords),
        }
    }

    pub fn apply_raw(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim + 1;
        debug_assert_eq!(v.len(), n);
        let mut out = vec![0.0; n];
        for i in 0..n {
            let row = &self.mat[i * n..(i + 1) * n];
            let mut sum = 0.0;
            let mut comp = 0.0;
            for k in 0..n {
                let p = row[k] * v[k];
                let err = libm::fma(row[k], v[k], -p);
                let t = sum + p;
                if libm::fabs(sum) >= libm::fabs(p) {
                    comp += (sum - t) + p;
                } else {
                    comp += (p - t) + sum;
                }
                sum = t;
                comp += err;
            }
            out[i] = sum + comp;
        }
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &HIsometry) -> HIsometry {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim + 1;
        let mut mat = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut sum = 0.0;
                for k in 0..n {
                    sum += self.mat[i * n + k] * other.mat[k * n + j];
                }
                mat[i * n + j] = sum;
            }
        }
        HIsometry { dim: self.dim, mat }
    }

    /// Exact Lorentz inverse `J Mᵀ J`.
    pub fn inverse(&self) -> HIsometry {
        let n = self.dim + 1;
        let mut mat = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let sign = if (i == 0) != (j == 0) { -1.0 } else { 1.0 };
                mat[i * n + j] = sign * self.mat[j * n + i];
            }
        }
        HIsometry { dim: self.dim, mat }
    }

    pub fn pow(&self, k: u32) -> HIsometry {
        let mut acc = HIsometry::identity(self.dim);
        for _ in 0..k {
            acc = acc.compose(self);
        }
        acc
    }

    /// `max |M² - I|`.
    pub fn involution_residual(&self) -> f64 {
        let sq = self.compose(self);
        let n = self.dim + 1;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max(libm::fabs(sq.mat[i * n + j] - target));
            }
        }
        worst
    }

    /// Hyperbolic translation of rapidity `t` along spatial axis `axis`
    /// (1-based among the spatial coordinates).
    pub fn boost(dim: usize, axis: usize, t: f64) -> HIsometry {
        debug_assert!(axis >= 1 && axis <= dim);
        let n = dim + 1;
        let mut m = HIsometry::identity(dim);
        m.mat[0] = libm::cosh(t);
        m.mat[axis] = libm::sinh(t);
        m.mat[axis * n] = libm::sinh(t);
        m.mat[axis * n + axis] = libm::cosh(t);
        m
    }

    /// Rotation by `angle` in the spatial plane spanned by axes `i` and `j`.
    pub fn rotation(dim: usize, i: usize, j: usize, angle: f64) -> HIsometry {
        debug_assert!(i >= 1 && j >= 1 && i <= dim && j <= dim && i != j);
        let n = dim + 1;
        let mut m = HIsometry::identity(dim);
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        m.mat[i * n + i] = c;
        m.mat[j * n + j] = c;
        m.mat[i * n + j] = -s;
        m.mat[j * n + i] = s;
        m
    }

    /// Reflection fixing the hyperplane Lorentz-orthogonal to the spacelike
    /// vector `normal`.
    pub fn hyperplane_reflection(dim: usize, normal: &[f64]) -> Result<HIsometry, HyperbolicError> {
        let n = dim + 1;
        if normal.len() != n {
            return Err(HyperbolicError::DimensionMismatch {
                expected: n,
                got: normal.len(),
            });
        }
        let norm = lorentz_dot(normal, normal);
        if !(norm > 0.0) {
            return Err(HyperbolicError::NotTimelike);
        }
        let mut mat = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let jsign = if j == 0 { -1.0 } else { 1.0 };
                let id = if i == j { 1.0 } else { 0.0 };
                mat[i * n + j] = id - 2.0 * normal[i] * jsign * normal[j] / norm;
            }
        }
        Ok(HIsometry { dim, mat })
    }

    /// Lorentz reflection fixing the subspace spanned by `basis`.
    ///
    /// The subspace must be nondegenerate and contain a timelike direction,
    /// so that its fixed set meets `H^n`.  The basis need not be orthogonal;
    /// an eigendecomposition of its Gram matrix supplies a Lorentz-orthonormal
    /// frame.
    pub fn reflection_through(
        dim: usize,
        basis: &[Vec<f64>],
        _tol: &Tolerances,
    ) -> Result<HIsometry, HyperbolicError> {
        let n = dim + 1;
        let k = basis.len();
        if k == 0 || k > n {
            return Err(HyperbolicError::DegenerateSubspace);
        }
        for b in basis {
            if b.len() != n {
                return Err(HyperbolicError::DimensionMismatch {
                    expected: n,
                    got: b.len(),
                });
            }
        }
        let mut gram = vec![0.0; k * k];
        let mut scale = 0.0f64;
        for i in 0..k {
            for j in 0..k {
                let g = lorentz_dot(&basis[i], &basis[j]);
                gram[i * k + j] = g;
                scale = scale.max(libm::fabs(g));
            }
        }
        let (eigvals, eigvecs) = jacobi_eigen(&gram, k);
        let eps = scale.max(1.0) * 1e-10;
        let mut negatives = 0;
        for &l in &eigvals {
            if libm::fabs(l) <= eps {
                return Err(HyperbolicError::DegenerateSubspace);
            }
            if l < 0.0 {
                negatives += 1;
            }
        }
        if negatives == 0 {
            return Err(HyperbolicError::NotTimelike);
        }
        if negatives > 1 {
            return Err(HyperbolicError::DegenerateSubspace);
        }
        // M = 2 Σ ε_j w_j w_jᵀ J - I with w_j the orthonormal frame.
        let mut mat = vec![0.0; n * n];
        for i in 0..n {
            mat[i * n + i] = -1.0;
        }
        for col in 0..k {
            let lam = eigvals[col];
            let sign = if lam < 0.0 { -1.0 } else { 1.0 };
            let inv = 1.0 / libm::sqrt(libm::fabs(lam));
            let mut w = vec![0.0; n];
            for (i, b) in basis.iter().enumerate() {
                let coeff = eigvecs[i * k + col] * inv;
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi += coeff * bi;
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let jsign = if j == 0 { -1.0 } else { 1.0 };
                    mat[i * n + j] += 2.0 * sign * w[i] * jsign * w[j];
                }
            }
        }
        let m = HIsometry { dim, mat };
        if m.mat[0] <= 0.0 {
            return Err(HyperbolicError::NotTimelike);
        }
        Ok(m)
    }
}

/// Checks `M² = I` within `tol.isom` (scaled by entry magnitude).
pub fn verify_involution(m: &HIsometry, tol: &Tolerances) -> bool {
    m.involution_residual() <= m.validation_slack(tol)
}

/// Jacobi eigendecomposition of a symmetric `k×k` matrix (row-major).
/// Returns eigenvalues and the matrix of column eigenvectors.
fn jacobi_eigen(a: &[f64], k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut m = a.to_vec();
    let mut v = vec![0.0; k * k];
    for i in 0..k {
        v[i * k + i] = 1.0;
    }
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for i in 0..k {
            for j in (i + 1)..k {
                off = off.max(libm::fabs(m[i * k + j]));
            }
        }
        let scale = (0..k).fold(0.0f64, |s, i| s.max(libm::fabs(m[i * k + i])));
        if off <= scale.max(1.0) * 1e-15 {
            break;
        }
        for p in 0..k {
            for q in (p + 1)..k {
                let apq = m[p * k + q];
                if libm::fabs(apq) <= 1e-300 {
                    continue;
                }
                let theta = (m[q * k + q] - m[p * k + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for i in 0..k {
                    let mip = m[i * k + p];
                    let miq = m[i * k + q];
                    m[i * k + p] = c * mip - s * miq;
                    m[i * k + q] = s * mip + c * miq;
                }
                for j in 0..k {
                    let mpj = m[p * k + j];
                    let mqj = m[q * k + j];
                    m[p * k + j] = c * mpj - s * mqj;
                    m[q * k + j] = s * mpj + c * mqj;
                }
                for i in 0..k {
                    let vip = v[i * k + p];
                    let viq = v[i * k + q];
                    v[i * k + p] = c * vip - s * viq;
                    v[i * k + q] = s * vip + c * viq;
                }
            }
        }
    }
    let eig = (0..k).map(|i| m[i * k + i]).collect();
    (eig, v)
}

/// Representative fixed point of the finite dihedral group generated by two
/// involutions whose product has order `m`.
///
/// The point is the Lorentz-normalised average of the orbit of `e₀` under
/// the `2m` group elements, which the group fixes exactly up to rounding.
pub fn dihedral_fixed_point(
    s_i: &HIsometry,
    s_j: &HIsometry,
    m: u32,
    tol: &Tolerances,
) -> Result<HPoint, HyperbolicError> {
    debug_assert_eq!(s_i.dim(), s_j.dim());
    let dim = s_i.dim();
    if m == 0 {
        return Err(HyperbolicError::OrderMismatch { residual: f64::INFINITY });
    }
    let rot = s_i.compose(s_j);
    let power = rot.pow(m);
    let n = dim + 1;
    let mut residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            residual = residual.max(libm::fabs(power.entries()[i * n + j] - target));
        }
    }
    if residual > power.validation_slack(tol) {
        return Err(HyperbolicError::OrderMismatch { residual });
    }
    let e0 = HPoint::origin(dim);
    let mut acc = vec![0.0; n];
    let mut word = HIsometry::identity(dim);
    for _ in 0..m {
        for (a, b) in acc.iter_mut().zip(word.apply(&e0).coords()) {
            *a += b;
        }
        let reflected = word.compose(s_i);
        for (a, b) in acc.iter_mut().zip(reflected.apply(&e0).coords()) {
            *a += b;
        }
        word = word.compose(&rot);
    }
    HPoint::from_timelike(acc)
}

/// Metric tripod with the same pairwise leaf distances as a triangle.
///
/// Leg `i` is the Gromov product `(d_ij + d_ik - d_jk)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tripod {
    legs: [f64; 3],
}

impl Tripod {
    pub fn legs(&self) -> [f64; 3] {
        self.legs
    }

    /// Distance between leaves `i` and `j`.
    pub fn side(&self, i: usize, j: usize) -> f64 {
        self.legs[i] + self.legs[j]
    }
}

/// Comparison tripod from side lengths `d12, d13, d23`.
pub fn comparison_tripod(d12: f64, d13: f64, d23: f64) -> Result<Tripod, HyperbolicError> {
    let scale = d12.max(d13).max(d23).max(1.0);
    let legs = [
        (d12 + d13 - d23) / 2.0,
        (d12 + d23 - d13) / 2.0,
        (d13 + d23 - d12) / 2.0,
    ];
    for &l in &legs {
        if l < -1e-12 * scale {
            return Err(HyperbolicError::TriangleInequalityViolated);
        }
    }
    Ok(Tripod {
        legs: [legs[0].max(0.0), legs[1].max(0.0), legs[2].max(0.0)],
    })
}

/// Distance between the two points at arc length `u` from a triangle corner
/// along its two adjacent sides of lengths `b` and `c`, with opposite side
/// `a`.
///
/// Uses the cancellation-free closed form `2·arcsinh(sinh(u)·sin(γ/2))` with
/// `sin²(γ/2) = sinh((a+e)/2)·sinh((a-e)/2)/(sinh b · sinh c)`, `e = |b-c|`,
/// which stays accurate however far the corner sits from the model origin.
pub fn corner_fiber_distance(b: f64, c: f64, a: f64, u: f64) -> f64 {
    if b <= 0.0 || c <= 0.0 || u <= 0.0 {
        return 0.0;
    }
    let e = libm::fabs(b - c);
    let hi = libm::sinh((a + e) / 2.0);
    let lo = libm::sinh(((a - e) / 2.0).max(0.0));
    let sin_half_sq = hi * lo / (libm::sinh(b) * libm::sinh(c));
    2.0 * libm::asinh(libm::sinh(u) * libm::sqrt(sin_half_sq.max(0.0)))
}

/// Sampled thinness of a triangle given by its side lengths: the maximum
/// distance between points on two sides identified by the comparison-tripod
/// map, over `samples` parameters per leg.  A lower bound on the true
/// thinness.
pub fn thinness_from_sides(d_xy: f64, d_xz: f64, d_yz: f64, samples: usize) -> f64 {
    let tripod = match comparison_tripod(d_xy, d_xz, d_yz) {
        Ok(t) => t,
        Err(_) => return 0.0,
    };
    // Adjacent side lengths and opposite side per corner.
    let corners = [
        (d_xy, d_xz, d_yz),
        (d_xy, d_yz, d_xz),
        (d_xz, d_yz, d_xy),
    ];
    let mut worst = 0.0f64;
    for (idx, &(b, c, a)) in corners.iter().enumerate() {
        let leg = tripod.legs()[idx];
        if leg == 0.0 {
            continue;
        }
        for s in 0..=samples {
            let u = leg * (s as f64) / (samples as f64);
            worst = worst.max(corner_fiber_distance(b, c, a, u));
        }
    }
    worst
}

/// Sampled thinness of the triangle `[xyz]`.
///
/// The side lengths are measured once; the fiber distances are then
/// evaluated intrinsically, the only well-conditioned route once vertices
/// sit far from the origin.
pub fn thinness(x: &HPoint, y: &HPoint, z: &HPoint, samples: usize) -> f64 {
    thinness_from_sides(dist(x, y), dist(x, z), dist(y, z), samples)
}

/// Unit tangent vector at `x` pointing toward `y`, or `None` when the points
/// coincide.
pub fn unit_tangent(x: &HPoint, y: &HPoint) -> Option<Vec<f64>> {
    let xy = lorentz_dot(x.coords(), y.coords());
    let mut u: Vec<f64> = y
        .coords()
        .iter()
        .zip(x.coords())
        .map(|(yi, xi)| yi + xy * xi)
        .collect();
    let norm = lorentz_dot(&u, &u);
    if !(norm > 0.0) {
        return None;
    }
    let inv = 1.0 / libm::sqrt(norm);
    for c in &mut u {
        *c *= inv;
    }
    Some(u)
}

/// Exponential map: the point at distance `t` from `x` along the unit
/// tangent `u`.
pub fn exp_map(x: &HPoint, u: &[f64], t: f64) -> HPoint {
    let (ch, sh) = (libm::cosh(t), libm::sinh(t));
    let coords: Vec<f64> = x
        .coords()
        .iter()
        .zip(u)
        .map(|(xi, ui)| ch * xi + sh * ui)
        .collect();
    HPoint::from_exact_formula(coords)
}

/// Angle at `v` between the geodesics toward `a` and toward `b`, measured in
/// the Lorentz tangent space at `v`.
pub fn angle_at(v: &HPoint, a: &HPoint, b: &HPoint) -> Option<f64> {
    let ta = unit_tangent(v, a)?;
    let tb = unit_tangent(v, b)?;
    let c = lorentz_dot(&ta, &tb).clamp(-1.0, 1.0);
    Some(libm::acos(c))
}

/// Verdict of the midpoint estimate on one segment/involution pair.
#[derive(Clone, Debug, PartialEq)]
pub enum MidpointVerdict {
    /// The segment is shorter than `Λ(ε,R)`; the estimate does not apply.
    NotApplicable { length: f64, threshold: f64 },
    /// The estimate applies; `holds` records whether the midpoint moved at
    /// most `ε` (within `tol.point`).
    Checked { holds: bool, displacement: f64 },
}

/// Checks the midpoint estimate on segment `e` for the involution `s`.
///
/// Preconditions: `s` is an involution, and both endpoints of `e` move at
/// most `R` (judged with conditioning-aware slack).  When the segment length
/// reaches `Λ(ε,R)` the midpoint displacement is compared against `ε`.
pub fn midpoint_estimate_check(
    e: &GeodesicSegment,
    s: &HIsometry,
    epsilon: f64,
    r: f64,
    tol: &Tolerances,
) -> Result<MidpointVerdict, HyperbolicError> {
    if !verify_involution(s, tol) {
        return Err(HyperbolicError::PreconditionViolated(String::from(
            "s is not an involution",
        )));
    }
    let (v1, v2) = e.endpoints();
    for v in [v1, v2] {
        let moved = s.apply(v);
        if !within_distance(v, &moved, r, tol) {
            return Err(HyperbolicError::PreconditionViolated(String::from(
                "endpoint moved more than R",
            )));
        }
    }
    let threshold = lambda(epsilon, r)?;
    if e.length() < threshold {
        return Ok(MidpointVerdict::NotApplicable {
            length: e.length(),
            threshold,
        });
    }
    let m = e.midpoint();
    let displacement = dist(&m, &s.apply(&m));
    Ok(MidpointVerdict::Checked {
        holds: displacement <= epsilon + tol.point,
        displacement,
    })
}
