//! Shared random generators for the property suites.

#![allow(dead_code)]

use coxsplit_core::hyperbolic::{exp_map, HIsometry, HPoint};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on the unit sphere of the tangent space at `e₀`.
pub fn random_direction(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let mut dir = vec![0.0];
        let mut norm = 0.0;
        for _ in 0..dim {
            let v: f64 = rng.gen_range(-1.0..1.0);
            norm += v * v;
            dir.push(v);
        }
        if norm > 1e-4 {
            let inv = 1.0 / norm.sqrt();
            for d in dir.iter_mut().skip(1) {
                *d *= inv;
            }
            return dir;
        }
    }
}

/// Random point at distance up to `max_r` from the base point.
pub fn random_point(dim: usize, max_r: f64, rng: &mut ChaCha8Rng) -> HPoint {
    let dir = random_direction(dim, rng);
    let r = rng.gen_range(0.0..max_r);
    exp_map(&HPoint::origin(dim), &dir, r)
}

/// Random orientation-ish isometry: rotations and a bounded boost.
pub fn random_isometry(dim: usize, max_rapidity: f64, rng: &mut ChaCha8Rng) -> HIsometry {
    let mut m = HIsometry::rotation(dim, 1, 2, rng.gen_range(0.0..std::f64::consts::TAU));
    if dim >= 3 {
        m = m.compose(&HIsometry::rotation(
            dim,
            2,
            3,
            rng.gen_range(0.0..std::f64::consts::TAU),
        ));
    }
    let b = HIsometry::boost(dim, 1, rng.gen_range(-max_rapidity..max_rapidity));
    m.compose(&b)
}

/// Random reflection through a hyperplane passing within `offset` of the
/// base point.
pub fn random_reflection(dim: usize, offset: f64, rng: &mut ChaCha8Rng) -> HIsometry {
    let mut normal = random_direction(dim, rng);
    normal[0] = rng.gen_range(-0.5..0.5);
    let conj = random_isometry(dim, offset, rng);
    let plane = HIsometry::hyperplane_reflection(dim, &normal).unwrap();
    conj.compose(&plane).compose(&conj.inverse())
}

/// Random triangle with side lengths within `[min_side, max_side]`.
pub fn random_triangle(
    dim: usize,
    min_side: f64,
    max_side: f64,
    rng: &mut ChaCha8Rng,
) -> [HPoint; 3] {
    loop {
        let a = random_point(dim, max_side / 4.0, rng);
        let b = exp_map(&a, &tangent_at(&a, dim, rng), rng.gen_range(min_side..max_side / 2.0));
        let c = exp_map(&a, &tangent_at(&a, dim, rng), rng.gen_range(min_side..max_side / 2.0));
        let sides = [
            coxsplit_core::hyperbolic::dist(&a, &b),
            coxsplit_core::hyperbolic::dist(&a, &c),
            coxsplit_core::hyperbolic::dist(&b, &c),
        ];
        if sides.iter().all(|&s| s >= min_side && s <= max_side) {
            return [a, b, c];
        }
    }
}

/// Random unit tangent vector at `x`: an ambient random vector projected
/// onto the tangent space, so directions stay spread out however far `x`
/// sits from the origin.
pub fn tangent_at(x: &HPoint, dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    use coxsplit_core::hyperbolic::lorentz_dot;
    loop {
        let v: Vec<f64> = (0..=dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let xv = lorentz_dot(x.coords(), &v);
        let u: Vec<f64> = v
            .iter()
            .zip(x.coords())
            .map(|(vi, xi)| vi + xv * xi)
            .collect();
        let norm = lorentz_dot(&u, &u);
        if norm > 1e-8 {
            let inv = 1.0 / norm.sqrt();
            return u.into_iter().map(|c| c * inv).collect();
        }
    }
}
