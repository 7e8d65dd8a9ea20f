//! Small numerical helpers shared across modules: deterministic summation,
//! unit-ball constants, orthonormal completions and spherical triangles.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

const PAIRWISE_BLOCK: usize = 8;

/// Pairwise (cascade) summation. The split points depend only on the
/// slice length, so the result is bit-stable for a given input order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise sum of `f(i)` for `i in 0..len`.
pub fn pairwise_sum_by(len: usize, f: impl Fn(usize) -> f64) -> f64 {
    let terms: Vec<f64> = (0..len).map(f).collect();
    pairwise_sum(&terms)
}

/// Volume of the n-dimensional unit ball, `π^{n/2} / Γ(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    PI.powf(half) / libm::tgamma(half + 1.0)
}

/// Total surface measure of the unit sphere in R^n, `n·ω_n`.
pub fn sphere_measure(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// Orthonormal basis of the hyperplane orthogonal to the unit vector `u`,
/// returned as the columns of an n×(n−1) matrix. Built from a Householder
/// reflection, so it is exact to rounding for any `u`.
pub fn orthogonal_complement(u: &Vector) -> Matrix {
    let n = u.len();
    let k = u.iamax();
    let sign = if u[k] >= 0.0 { 1.0 } else { -1.0 };
    let mut v = u.clone();
    v[k] += sign;
    let vv = v.norm_squared();
    let reflector = Matrix::identity(n, n) - (&v * v.transpose()) * (2.0 / vv);
    // Column k of the reflector is ±u; every other column is orthogonal to u.
    let mut basis = Matrix::zeros(n, n - 1);
    let mut col = 0;
    for j in 0..n {
        if j != k {
            basis.set_column(col, &reflector.column(j));
            col += 1;
        }
    }
    basis
}

/// Great-circle distance between two unit vectors.
pub fn arc_length(a: &Vector, b: &Vector) -> f64 {
    let cross_norm = (a.norm_squared() * b.norm_squared() - a.dot(b).powi(2))
        .max(0.0)
        .sqrt();
    cross_norm.atan2(a.dot(b))
}

/// Area of the spherical triangle with unit-vector corners via L'Huilier's
/// formula.
pub fn spherical_triangle_area(a: &Vector, b: &Vector, c: &Vector) -> f64 {
    let ab = arc_length(a, b);
    let bc = arc_length(b, c);
    let ca = arc_length(c, a);
    let s = 0.5 * (ab + bc + ca);
    let t = (0.5 * s).tan()
        * (0.5 * (s - ab)).max(0.0).tan()
        * (0.5 * (s - bc)).max(0.0).tan()
        * (0.5 * (s - ca)).max(0.0).tan();
    4.0 * t.max(0.0).sqrt().atan()
}

/// Clamp to [-1, 1] before taking the arc cosine.
pub fn safe_acos(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}

/// Seeded generator used for every random stream in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent seed from `seed` and a stream tag (splitmix64).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniformly distributed unit vector in R^n.
pub fn random_direction(n: usize, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let v = Vector::from_iterator(n, (0..n).map(|_| StandardNormal.sample(rng)));
        let norm = v.norm();
        if norm > 1e-12 {
            return v / norm;
        }
    }
}

/// Haar-random rotation (determinant +1) in dimension n.
pub fn random_rotation(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let g = Matrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let col = -q.column(j);
            q.set_column(j, &col);
        }
    }
    if q.determinant() < 0.0 {
        let col = -q.column(0);
        q.set_column(0, &col);
    }
    q
}

/// Relative gap used by reports: `|a − b| / max(|a|, |b|, 1)`.
pub fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}
