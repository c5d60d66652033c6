//! Ready-made sample systems and representations.
//!
//! These are small reflection groups in `H^2` with explicitly constructed
//! mirror matrices, convenient as demo inputs and test fixtures.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::coxeter::{CoxeterOrder, CoxeterSystem};
use crate::hyperbolic::HIsometry;

fn gen_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("s{i}")).collect()
}

/// Rank-2 system `⟨s1, s2 | (s1 s2)^m⟩`.
pub fn dihedral_system(m: u32) -> CoxeterSystem {
    CoxeterSystem::new(gen_names(2), &[(0, 1, CoxeterOrder::Finite(m))]).unwrap()
}

/// Mirror matrices in `H^2` for [`dihedral_system`]: two reflections through
/// `e₀` whose mirrors meet at angle `π/m`.  The group fixes `e₀`.
pub fn dihedral_matrices(m: u32) -> Vec<Vec<f64>> {
    let angle = core::f64::consts::PI / m as f64;
    let normals = [
        vec![0.0, 1.0, 0.0],
        vec![0.0, -libm::cos(angle), libm::sin(angle)],
    ];
    normals
        .iter()
        .map(|u| HIsometry::hyperplane_reflection(2, u).unwrap().entries().to_vec())
        .collect()
}

/// The reflection group of the hyperbolic quadrilateral with angles
/// `π/2, π/4, π/3, π/4`: orders `m12 = 2`, `m23 = 4`, `m34 = 3`, `m41 = 4`,
/// other pairs infinite.
pub fn quadrilateral_system() -> CoxeterSystem {
    CoxeterSystem::new(
        gen_names(4),
        &[
            (0, 1, CoxeterOrder::Finite(2)),
            (1, 2, CoxeterOrder::Finite(4)),
            (2, 3, CoxeterOrder::Finite(3)),
            (3, 0, CoxeterOrder::Finite(4)),
        ],
    )
    .unwrap()
}

/// Unit spacelike mirror normals realising [`quadrilateral_system`] in `H^2`,
/// with the shape modulus `g = ⟨u1, u3⟩ = -g` free (`g > 1`).
///
/// Adjacent normals satisfy `⟨u_i, u_j⟩ = -cos(π/m_ij)` and the two diagonal
/// pairs are ultraparallel (`⟨u_i, u_j⟩ < -1`), so the half-space
/// intersection is a genuine hyperbolic quadrilateral.  The last normal is
/// pinned by a one-dimensional root solve.
pub fn quadrilateral_normals_with(g: f64) -> [Vec<f64>; 4] {
    assert!(g > 1.0);
    let c = libm::cos(core::f64::consts::FRAC_PI_4);
    let t3 = libm::sqrt(g * g - 0.5);
    // Solve t3·sqrt(h²-1/2) = c(g+h) + 1/2 for h > 1.
    let f = |hh: f64| t3 * libm::sqrt(hh * hh - 0.5) - (c * (g + hh) + 0.5);
    let (mut lo, mut hi) = (1.0, 1e4);
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let h = 0.5 * (lo + hi);
    let t4 = libm::sqrt(h * h - 0.5);
    [
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![t3, -g, -c],
        vec![t4, -c, -h],
    ]
}

/// The reference quadrilateral normals, with the modulus fixed at `3/2`.
pub fn quadrilateral_normals() -> [Vec<f64>; 4] {
    quadrilateral_normals_with(1.5)
}

fn reflections(dim: usize, normals: &[Vec<f64>]) -> Vec<Vec<f64>> {
    normals
        .iter()
        .map(|u| HIsometry::hyperplane_reflection(dim, u).unwrap().entries().to_vec())
        .collect()
}

/// Reflection matrices in `H^2` for [`quadrilateral_system`].
pub fn quadrilateral_matrices() -> Vec<Vec<f64>> {
    reflections(2, &quadrilateral_normals())
}

/// Reflection matrices in `H^2` for [`quadrilateral_system`] at modulus `g`.
pub fn quadrilateral_matrices_with(g: f64) -> Vec<Vec<f64>> {
    reflections(2, &quadrilateral_normals_with(g))
}

/// The `(p, q, r)` triangle reflection group in `H^2`: orders
/// `m12 = p`, `m13 = q`, `m23 = r`.  Requires `1/p + 1/q + 1/r < 1`.
pub fn triangle_group(p: u32, q: u32, r: u32) -> Option<(CoxeterSystem, Vec<Vec<f64>>)> {
    // 1/p + 1/q + 1/r < 1, checked in integers.
    let (pp, qq, rr) = (p as u64, q as u64, r as u64);
    if p < 2 || q < 2 || r < 2 || qq * rr + pp * rr + pp * qq >= pp * qq * rr {
        return None;
    }
    let ap = core::f64::consts::PI / p as f64;
    let aq = core::f64::consts::PI / q as f64;
    let ar = core::f64::consts::PI / r as f64;
    let u1 = vec![0.0, 1.0, 0.0];
    let u2 = vec![0.0, -libm::cos(ap), libm::sin(ap)];
    // ⟨u1,u3⟩ = -cos(π/q), ⟨u2,u3⟩ = -cos(π/r), unit: solve componentwise.
    let a = -libm::cos(aq);
    let b = (a * libm::cos(ap) - libm::cos(ar)) / libm::sin(ap);
    let t2 = a * a + b * b - 1.0;
    debug_assert!(t2 > 0.0);
    let u3 = vec![libm::sqrt(t2), a, b];
    let system = CoxeterSystem::new(
        gen_names(3),
        &[
            (0, 1, CoxeterOrder::Finite(p)),
            (0, 2, CoxeterOrder::Finite(q)),
            (1, 2, CoxeterOrder::Finite(r)),
        ],
    )
    .unwrap();
    Some((system, reflections(2, &[u1, u2, u3])))
}

/// A reflection/segment pair for exercising the midpoint estimate, built in
/// standard position and then turned: the mirror is the last-coordinate
/// hyperplane, the segment runs through the origin inside it with in-mirror
/// direction `dir` (unit, `dim-1` spatial coordinates) and arc `half` to
/// each side, and the endpoints are lifted off the mirror by `t1`, `t2`
/// (so the reflection moves them exactly `2|t_i|`).  `angles` gives spatial
/// rotations and `boost` a final translation.
///
/// Everything is assembled from exact product formulas; tangent-space
/// arithmetic at the far endpoints would be meaningless in doubles.
pub fn mirrored_segment(
    dim: usize,
    dir: &[f64],
    half: f64,
    t1: f64,
    t2: f64,
    angles: &[f64],
    boost: f64,
) -> (crate::hyperbolic::GeodesicSegment, HIsometry) {
    use crate::hyperbolic::GeodesicSegment;
    assert_eq!(dir.len(), dim - 1);
    let lifted = |sign: f64, t: f64| {
        let mut coords = vec![libm::cosh(half) * libm::cosh(t)];
        for d in dir {
            coords.push(libm::sinh(half) * sign * d * libm::cosh(t));
        }
        coords.push(libm::sinh(t));
        crate::hyperbolic::HPoint::from_exact_formula(coords)
    };
    let v1 = lifted(1.0, t1);
    let v2 = lifted(-1.0, t2);
    let mut normal = vec![0.0; dim + 1];
    normal[dim] = 1.0;
    let s0 = HIsometry::hyperplane_reflection(dim, &normal).unwrap();
    let mut q = HIsometry::identity(dim);
    for (idx, &angle) in angles.iter().enumerate() {
        let i = 1 + idx % dim;
        let j = 1 + (idx + 1) % dim;
        if i != j {
            q = q.compose(&HIsometry::rotation(dim, i.min(j), i.max(j), angle));
        }
    }
    q = q.compose(&HIsometry::boost(dim, 1, boost));
    let s = q.compose(&s0).compose(&q.inverse());
    (GeodesicSegment::new(q.apply(&v1), q.apply(&v2)), s)
}

/// A right-angled system of `k ≤ dim` coordinate reflections in `H^dim`;
/// all pair orders are `2` and the whole group fixes `e₀`.
pub fn orthogonal_mirror_system(dim: usize, k: usize) -> (CoxeterSystem, Vec<Vec<f64>>) {
    assert!(k >= 1 && k <= dim);
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            pairs.push((i, j, CoxeterOrder::Finite(2)));
        }
    }
    let system = CoxeterSystem::new(gen_names(k), &pairs).unwrap();
    let matrices = (0..k)
        .map(|axis| {
            let mut normal = vec![0.0; dim + 1];
            normal[axis + 1] = 1.0;
            HIsometry::hyperplane_reflection(dim, &normal)
                .unwrap()
                .entries()
                .to_vec()
        })
        .collect();
    (system, matrices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::lorentz_dot;

    #[test]
    fn triangle_groups_load() {
        use crate::pipeline::load_representation;
        for (p, q, r) in [(2, 3, 7), (2, 4, 5), (3, 3, 4), (4, 4, 4), (2, 4, 6)] {
            let (system, matrices) = triangle_group(p, q, r).unwrap();
            load_representation(&system, 2, &matrices, crate::Tolerances::default())
                .unwrap_or_else(|e| panic!("({p},{q},{r}): {e}"));
        }
        assert!(triangle_group(2, 3, 6).is_none()); // Euclidean
        assert!(triangle_group(2, 2, 2).is_none()); // spherical
    }

    #[test]
    fn quadrilateral_family_loads() {
        use crate::pipeline::load_representation;
        let system = quadrilateral_system();
        for g in [1.1, 1.5, 2.0, 4.0] {
            let matrices = quadrilateral_matrices_with(g);
            load_representation(&system, 2, &matrices, crate::Tolerances::default())
                .unwrap_or_else(|e| panic!("g = {g}: {e}"));
        }
    }

    #[test]
    fn quadrilateral_normals_satisfy_gram_conditions() {
        let u = quadrilateral_normals();
        let c = libm::cos(core::f64::consts::FRAC_PI_4);
        for normal in &u {
            assert!((lorentz_dot(normal, normal) - 1.0).abs() < 1e-12);
        }
        assert!((lorentz_dot(&u[0], &u[1])).abs() < 1e-12);
        assert!((lorentz_dot(&u[1], &u[2]) + c).abs() < 1e-12);
        assert!((lorentz_dot(&u[2], &u[3]) + 0.5).abs() < 1e-12);
        assert!((lorentz_dot(&u[3], &u[0]) + c).abs() < 1e-12);
        assert!(lorentz_dot(&u[0], &u[2]) < -1.0);
        assert!(lorentz_dot(&u[1], &u[3]) < -1.0);
    }
}
