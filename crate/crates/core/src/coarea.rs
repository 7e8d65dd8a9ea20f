//! Restriction sets on which the Gauss map and its inverse are Lipschitz,
//! and numerical checks of the sphere ↔ boundary changes of variable.
//!
//! * `(∂K)_r`: boundary points `x` at which the ball `B(x − rν(x), r)` lies
//!   in `K`.
//! * `A_i`: regular normals `u` for which `K ⊂ B[τ(u) − iu, i]`.
//!
//! Containment is tested through the support function on a fixed probe set
//! of directions (or polytope vertices), with absolute tolerance
//! [`CONTAINMENT_TOL`].

use crate::asa::{asa_boundary, asa_sphere, check_exponent};
use crate::body::{ConvexBody, Direction};
use crate::curvature::{curvature_function, gauss_curvature};
use crate::error::{AsaError, Result};
use crate::numeric::{
    orthogonal_complement, pairwise_sum, relative_gap, rng_from_seed, Vector,
};
use crate::quadrature::{sample_boundary, sample_sphere, sphere_samples, Quadrature};
use rand::RngExt;
use serde::Serialize;
use std::sync::Arc;

pub const CONTAINMENT_TOL: f64 = 1e-9;
pub const BISECTION_STEPS: usize = 40;

/// Directions and support values used for ball-in-body tests, plus the
/// boundary points used for body-in-ball tests.
#[derive(Debug, Clone)]
pub struct Probe {
    pub directions: Vec<Vector>,
    pub support: Vec<f64>,
    pub points: Vec<Vector>,
}

impl Probe {
    /// Probe set of at most `max_level` icosahedral subdivisions (n = 3),
    /// 1024 angles (n = 2) or 5000 random directions (n ≥ 4). Polytopes use
    /// their vertices as boundary points.
    pub fn new(body: &ConvexBody, quad: Quadrature, max_level: usize) -> Result<Self> {
        let n = body.dim();
        let resolution = match n {
            2 => quad.resolution.min(1024),
            3 => quad.resolution.min(max_level),
            _ => quad.resolution.min(5000),
        };
        let nodes = sample_sphere(n, resolution, quad.seed)?;
        let directions: Vec<Vector> = nodes.iter().map(|s| s.u.as_vector().clone()).collect();
        let support = directions.iter().map(|u| body.support_at(u)).collect();
        let points = match body.as_polytope() {
            Some(p) => p.vertices().to_vec(),
            None => nodes
                .iter()
                .map(|s| body.inverse_gauss(&s.u))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(Probe { directions, support, points })
    }

    pub fn for_body(body: &ConvexBody) -> Result<Self> {
        Self::new(body, Quadrature::default_for(body.dim()), 3)
    }
}

/// Normal used for the rolling-ball test, `None` for non-regular points.
fn rolling_normal(body: &ConvexBody, x: &Vector) -> Result<Option<Direction>> {
    match body.gauss(x) {
        Ok(nu) => Ok(Some(nu)),
        Err(AsaError::NonRegularPoint) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Whether `B(x − rν(x), r) ⊂ K` on the probe directions. Non-regular
/// points (polytope vertices and edges) are never in the set.
pub fn in_rolling_ball_set(body: &ConvexBody, x: &Vector, r: f64, probe: &Probe) -> Result<bool> {
    let Some(nu) = rolling_normal(body, x)? else {
        return Ok(false);
    };
    let centre = x - nu.as_vector() * r;
    Ok(probe
        .directions
        .iter()
        .zip(&probe.support)
        .all(|(u, h)| centre.dot(u) + r <= h + CONTAINMENT_TOL))
}

/// Largest `r` passing [`in_rolling_ball_set`] at `x`, in closed form:
/// `min_u (h(u) − ⟨x,u⟩ + tol) / (1 − ⟨ν,u⟩)`. Zero for non-regular points.
pub fn rolling_radius(body: &ConvexBody, x: &Vector, probe: &Probe) -> Result<f64> {
    let Some(nu) = rolling_normal(body, x)? else {
        return Ok(0.0);
    };
    let mut best = f64::INFINITY;
    for (u, h) in probe.directions.iter().zip(&probe.support) {
        let slack = h - x.dot(u) + CONTAINMENT_TOL;
        let tilt = 1.0 - nu.dot(u);
        if slack < 0.0 {
            return Ok(0.0);
        }
        if tilt > 0.0 {
            best = best.min(slack / tilt);
        }
    }
    Ok(best)
}

/// Boundary point with outer normal `u`, `None` for non-regular normals.
fn enclosing_anchor(body: &ConvexBody, u: &Direction) -> Result<Option<Vector>> {
    match body.inverse_gauss(u) {
        Ok(x) => Ok(Some(x)),
        Err(AsaError::NonRegularNormal) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Whether `K ⊂ B[τ(u) − iu, i]`, tested on the probe boundary points.
/// Non-regular normals are never in the set.
pub fn in_enclosing_ball_set(body: &ConvexBody, u: &Direction, i: f64, probe: &Probe) -> Result<bool> {
    let Some(x) = enclosing_anchor(body, u)? else {
        return Ok(false);
    };
    let centre = x - u.as_vector() * i;
    Ok(probe
        .points
        .iter()
        .all(|y| dist2(y, &centre).sqrt() <= i + CONTAINMENT_TOL))
}

fn dist2(a: &Vector, b: &Vector) -> f64 {
    a.iter().zip(b.iter()).map(|(p, q)| (p - q) * (p - q)).sum()
}

/// Smallest `i` passing [`in_enclosing_ball_set`], in closed form:
/// `max_y |y − x|² / (2⟨x − y, u⟩)` (tolerance included). Infinite for
/// non-regular normals.
pub fn enclosing_radius(body: &ConvexBody, u: &Direction, probe: &Probe) -> Result<f64> {
    let Some(x) = enclosing_anchor(body, u)? else {
        return Ok(f64::INFINITY);
    };
    let tol = CONTAINMENT_TOL;
    let mut worst: f64 = 0.0;
    let xu = x.dot(u);
    for y in &probe.points {
        let d2 = dist2(y, &x) - tol * tol;
        if d2 <= 0.0 {
            continue;
        }
        let denom = 2.0 * (xu - y.dot(u)) + 2.0 * tol;
        if denom <= 0.0 {
            return Ok(f64::INFINITY);
        }
        worst = worst.max(d2 / denom);
    }
    Ok(worst)
}

/// Largest `r ∈ [0, r_max]` with the rolling-ball property, by bisection.
pub fn rolling_threshold_bisect(body: &ConvexBody, x: &Vector, r_max: f64, probe: &Probe) -> Result<f64> {
    if in_rolling_ball_set(body, x, r_max, probe)? {
        return Ok(r_max);
    }
    let (mut lo, mut hi) = (0.0, r_max);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if in_rolling_ball_set(body, x, mid, probe)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Smallest `i ∈ (0, i_max]` with the enclosing-ball property, by
/// bisection; `None` if even `i_max` fails.
pub fn enclosing_threshold_bisect(body: &ConvexBody, u: &Direction, i_max: f64, probe: &Probe) -> Result<Option<f64>> {
    if !in_enclosing_ball_set(body, u, i_max, probe)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, i_max);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if in_enclosing_ball_set(body, u, mid, probe)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictionSetReport {
    pub parameter: f64,
    pub fraction_covered: f64,
    pub membership: Vec<bool>,
}

/// `(∂K)_r` over the boundary mesh for each radius; the fraction is by
/// boundary area.
pub fn rolling_ball_sweep(body: &ConvexBody, quad: Quadrature, radii: &[f64]) -> Result<Vec<RestrictionSetReport>> {
    let samples = sample_boundary(body, quad)?;
    let probe = Probe::new(body, quad, 3)?;
    let thresholds: Vec<f64> = samples
        .iter()
        .map(|s| rolling_radius(body, &s.x, &probe))
        .collect::<Result<_>>()?;
    let total = pairwise_sum(&samples.iter().map(|s| s.weight).collect::<Vec<_>>());
    Ok(radii
        .iter()
        .map(|&r| {
            let membership: Vec<bool> = thresholds.iter().map(|&t| r <= t).collect();
            let covered: Vec<f64> = samples
                .iter()
                .zip(&membership)
                .map(|(s, &m)| if m { s.weight } else { 0.0 })
                .collect();
            RestrictionSetReport { parameter: r, fraction_covered: pairwise_sum(&covered) / total, membership }
        })
        .collect())
}

/// `A_i` over the sphere mesh for each `i`; the fraction is by spherical
/// measure.
pub fn enclosing_ball_sweep(body: &ConvexBody, quad: Quadrature, params: &[f64]) -> Result<Vec<RestrictionSetReport>> {
    let nodes = sample_sphere(body.dim(), quad.resolution, quad.seed)?;
    let probe = Probe::new(body, quad, 3)?;
    let thresholds: Vec<f64> = nodes
        .iter()
        .map(|s| enclosing_radius(body, &s.u, &probe))
        .collect::<Result<_>>()?;
    let total = pairwise_sum(&nodes.iter().map(|s| s.weight).collect::<Vec<_>>());
    Ok(params
        .iter()
        .map(|&i| {
            let membership: Vec<bool> = thresholds.iter().map(|&t| t <= i).collect();
            let covered: Vec<f64> = nodes
                .iter()
                .zip(&membership)
                .map(|(s, &m)| if m { s.weight } else { 0.0 })
                .collect();
            RestrictionSetReport { parameter: i, fraction_covered: pairwise_sum(&covered) / total, membership }
        })
        .collect())
}

/// Finite-difference Jacobian of `τ_K` restricted to `u^⊥`: central
/// differences along geodesics of angular step `delta`. Its determinant
/// approximates `F_K(u)`.
pub fn jacobian_estimate(body: &ConvexBody, u: &Direction, delta: f64) -> Result<f64> {
    let n = body.dim();
    let basis = orthogonal_complement(u.as_vector());
    let mut jac = nalgebra::DMatrix::zeros(n - 1, n - 1);
    for j in 0..n - 1 {
        let e = basis.column(j).into_owned();
        let plus = Direction::new(u.as_vector() * delta.cos() + &e * delta.sin())?;
        let minus = Direction::new(u.as_vector() * delta.cos() - &e * delta.sin())?;
        let d = (body.inverse_gauss(&plus)? - body.inverse_gauss(&minus)?) / (2.0 * delta);
        for i in 0..n - 1 {
            jac[(i, j)] = basis.column(i).dot(&d);
        }
    }
    Ok(jac.determinant())
}

pub type Field = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;

/// Positive test function: `g` is evaluated on boundary points, `h` on
/// directions.
#[derive(Clone)]
pub struct TestFunction {
    pub name: String,
    pub g: Field,
    pub h: Field,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction").field("name", &self.name).finish()
    }
}

impl TestFunction {
    pub fn constant(c: f64) -> Self {
        TestFunction {
            name: format!("const({c})"),
            g: Arc::new(move |_| c),
            h: Arc::new(move |_| c),
        }
    }

    /// `g = h_K(ν_K(x))^{(p−1)/(n+p)} H_K(x)^{1/(n+p)}` on the boundary and
    /// the Lutwak-side optimum `(F_K / h_K^{p−1})^{1/(n+p)}` on the sphere.
    pub fn minimizer(body: &ConvexBody, p: f64) -> Self {
        let np = body.dim() as f64 + p;
        let (bg, bh) = (body.clone(), body.clone());
        TestFunction {
            name: "minimizer".into(),
            g: Arc::new(move |x| {
                let nu = bg.gauss(x).expect("boundary point");
                let hk = bg.support(&nu);
                let curv = gauss_curvature(&bg, x).expect("positive curvature");
                hk.powf((p - 1.0) / np) * curv.powf(1.0 / np)
            }),
            h: Arc::new(move |u| {
                let d = Direction::new(u.clone()).expect("direction");
                let f = curvature_function(&bh, &d).expect("curvature");
                (f / bh.support(&d).powf(p - 1.0)).powf(1.0 / np)
            }),
        }
    }
}

/// Seeded smooth positive functions `exp(0.3·Σ_k a_k sin(⟨b_k, ·⟩ + c_k))`.
pub fn seeded_test_functions(n: usize, count: usize, seed: u64) -> Vec<TestFunction> {
    let mut rng = rng_from_seed(seed);
    let mut wave = move || -> Field {
        let terms: Vec<(f64, Vector, f64)> = (0..3)
            .map(|_| {
                let a: f64 = rng.random_range(-1.0..1.0);
                let b = Vector::from_fn(n, |_, _| rng.random_range(-1.5..1.5));
                let c: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                (a, b, c)
            })
            .collect();
        Arc::new(move |x: &Vector| {
            let s: f64 = terms.iter().map(|(a, b, c)| a * (b.dot(x) + c).sin()).sum();
            (0.3 * s).exp()
        })
    };
    (0..count)
        .map(|k| TestFunction { name: format!("wave{k}"), g: wave(), h: wave() })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChangeOfVariableRow {
    pub function: String,
    /// `∫_{H+} g^{−n} H_K dH^{n−1}` on the boundary mesh.
    pub g_boundary: f64,
    /// `∫_{F+} g(τ_K(u))^{−n} dσ` on the sphere mesh.
    pub g_sphere: f64,
    pub g_gap: f64,
    /// `∫_{F+} h^{−p} h_K^{1−p} F_K dσ` on the sphere mesh.
    pub h_sphere: f64,
    /// `∫_{H+} h(ν_K)^{−p} h_K(ν_K)^{1−p} dH^{n−1}` on the boundary mesh.
    pub h_boundary: f64,
    pub h_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChangeOfVariableReport {
    pub p: f64,
    pub resolution: usize,
    pub rows: Vec<ChangeOfVariableRow>,
    pub max_gap: f64,
}

/// Both sides of the `g`- and `h`-identities on independent meshes.
pub fn verify_change_of_variable(
    body: &ConvexBody,
    p: f64,
    quad: Quadrature,
    functions: &[TestFunction],
) -> Result<ChangeOfVariableReport> {
    check_exponent(p)?;
    if !body.is_smooth() {
        return Err(AsaError::NotSmooth);
    }
    let n = body.dim() as i32;
    let boundary = sample_boundary(body, quad)?;
    let sphere = sphere_samples(body, quad)?;
    let anchors: Vec<Vector> = sphere
        .iter()
        .map(|s| body.inverse_gauss(&s.u))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(functions.len());
    for tf in functions {
        let g_boundary = pairwise_sum(
            &boundary
                .iter()
                .filter(|s| s.in_h_plus)
                .map(|s| (tf.g)(&s.x).powi(-n) * s.h_curv * s.weight)
                .collect::<Vec<_>>(),
        );
        let g_sphere = pairwise_sum(
            &sphere
                .iter()
                .zip(&anchors)
                .filter(|(s, _)| s.in_f_plus)
                .map(|(s, x)| (tf.g)(x).powi(-n) * s.weight)
                .collect::<Vec<_>>(),
        );
        let h_sphere = pairwise_sum(
            &sphere
                .iter()
                .filter(|s| s.in_f_plus)
                .map(|s| (tf.h)(s.u.as_vector()).powf(-p) * s.h.powf(1.0 - p) * s.f * s.weight)
                .collect::<Vec<_>>(),
        );
        let h_boundary = pairwise_sum(
            &boundary
                .iter()
                .filter(|s| s.in_h_plus)
                .map(|s| (tf.h)(s.nu.as_vector()).powf(-p) * s.h_at_nu.powf(1.0 - p) * s.weight)
                .collect::<Vec<_>>(),
        );
        rows.push(ChangeOfVariableRow {
            function: tf.name.clone(),
            g_boundary,
            g_sphere,
            g_gap: relative_gap(g_boundary, g_sphere),
            h_sphere,
            h_boundary,
            h_gap: relative_gap(h_sphere, h_boundary),
        });
    }
    let max_gap = rows.iter().map(|r| r.g_gap.max(r.h_gap)).fold(0.0, f64::max);
    Ok(ChangeOfVariableReport { p, resolution: quad.resolution, rows, max_gap })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialSumRow {
    pub i: f64,
    /// Spherical measure fraction of `A_i`.
    pub fraction: f64,
    /// `∫_{A_i} (F_K / h_K^{p−1})^{n/(n+p)} dσ`.
    pub sphere_partial: f64,
    /// Boundary integrand over `{x : ν_K(x) ∈ A_i}`.
    pub boundary_partial: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereBoundaryEqualityReport {
    pub p: f64,
    pub sphere_value: f64,
    pub boundary_value: f64,
    pub gap: f64,
    pub ladder: Vec<PartialSumRow>,
    pub monotone: bool,
    pub final_gap: f64,
}

/// Geometric ladder `2^k`, `k = −3..=8`.
pub fn default_ladder() -> Vec<f64> {
    (-3..=8).map(|k| 2f64.powi(k)).collect()
}

/// Direct equality of the sphere and boundary integrals, with partial sums
/// over the enclosing-ball sets `A_i` along `ladder`.
pub fn verify_sphere_boundary_equality(
    body: &ConvexBody,
    p: f64,
    quad: Quadrature,
    ladder: &[f64],
) -> Result<SphereBoundaryEqualityReport> {
    check_exponent(p)?;
    if !body.is_smooth() {
        return Err(AsaError::NotSmooth);
    }
    let n = body.dim() as f64;
    let (a, b) = (p / (n + p), n / (n + p));
    let sphere_value = asa_sphere(body, p, quad)?;
    let boundary_value = asa_boundary(body, p, quad)?;
    let probe = Probe::new(body, quad, 3)?;
    let sphere = sphere_samples(body, quad)?;
    let boundary = sample_boundary(body, quad)?;
    let sphere_terms: Vec<(f64, f64)> = sphere
        .iter()
        .filter(|s| s.in_f_plus)
        .map(|s| {
            Ok((
                enclosing_radius(body, &s.u, &probe)?,
                (s.f / s.h.powf(p - 1.0)).powf(b) * s.weight,
            ))
        })
        .collect::<Result<_>>()?;
    let boundary_terms: Vec<(f64, f64)> = boundary
        .iter()
        .filter(|s| s.in_h_plus)
        .map(|s| {
            Ok((
                enclosing_radius(body, &s.nu, &probe)?,
                (s.h_curv / s.h_at_nu.powf((p - 1.0) * n / p)).powf(a) * s.weight,
            ))
        })
        .collect::<Result<_>>()?;
    let total_weight: f64 = pairwise_sum(&sphere.iter().map(|s| s.weight).collect::<Vec<_>>());
    let partial = |terms: &[(f64, f64)], i: f64| {
        pairwise_sum(&terms.iter().map(|(t, v)| if *t <= i { *v } else { 0.0 }).collect::<Vec<_>>())
    };
    let rows: Vec<PartialSumRow> = ladder
        .iter()
        .map(|&i| {
            let covered: Vec<f64> = sphere
                .iter()
                .filter(|s| s.in_f_plus)
                .zip(&sphere_terms)
                .map(|(s, (t, _))| if *t <= i { s.weight } else { 0.0 })
                .collect();
            PartialSumRow {
                i,
                fraction: pairwise_sum(&covered) / total_weight,
                sphere_partial: partial(&sphere_terms, i),
                boundary_partial: partial(&boundary_terms, i),
            }
        })
        .collect();
    let monotone = rows.windows(2).all(|w| {
        w[1].sphere_partial >= w[0].sphere_partial && w[1].boundary_partial >= w[0].boundary_partial
    });
    let final_gap = rows
        .last()
        .map(|r| relative_gap(r.sphere_partial, r.boundary_partial))
        .unwrap_or(0.0);
    Ok(SphereBoundaryEqualityReport {
        p,
        sphere_value,
        boundary_value,
        gap: relative_gap(sphere_value, boundary_value),
        ladder: rows,
        monotone,
        final_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn v(c: &[f64]) -> Vector {
        Vector::from_column_slice(c)
    }

    #[test]
    fn ball_rolls_inside_itself_up_to_its_radius() {
        let r = 1.5;
        let b = ConvexBody::centered_ball(3, r).unwrap();
        let probe = Probe::for_body(&b).unwrap();
        let x = v(&[0.0, r, 0.0]);
        assert!(in_rolling_ball_set(&b, &x, r, &probe).unwrap());
        assert!(in_rolling_ball_set(&b, &x, 0.3, &probe).unwrap());
        assert!(!in_rolling_ball_set(&b, &x, 1.01 * r, &probe).unwrap());
    }

    #[test]
    fn cube_facet_centre_admits_half_unit_ball() {
        let cube = ConvexBody::cube(3, 1.0).unwrap();
        let probe = Probe::for_body(&cube).unwrap();
        let x = v(&[0.5, 0.0, 0.0]);
        assert!(in_rolling_ball_set(&cube, &x, 0.5, &probe).unwrap());
        assert!(!in_rolling_ball_set(&cube, &x, 0.6, &probe).unwrap());
        assert!(!in_rolling_ball_set(&cube, &v(&[0.5, 0.5, 0.5]), 1e-3, &probe).unwrap());
    }

    #[test]
    fn ellipsoid_rolling_threshold_by_bisection() {
        // The largest ball tangent at (1,0,0) inside the (1,2,3) ellipsoid is
        // the unit ball: r* = 1.
        let e = ConvexBody::axis_ellipsoid(&[1.0, 2.0, 3.0]).unwrap();
        let probe = Probe::new(&e, Quadrature::new(5, 0), 5).unwrap();
        let x = v(&[1.0, 0.0, 0.0]);
        let r = rolling_threshold_bisect(&e, &x, 10.0, &probe).unwrap();
        assert!((r - 1.0).abs() < 0.01, "{r}");
        let closed = rolling_radius(&e, &x, &probe).unwrap();
        assert!((closed - r).abs() < 1e-9, "{closed} vs {r}");
    }

    #[test]
    fn ball_enclosing_threshold_is_its_radius() {
        let r = 2.0;
        let b = ConvexBody::centered_ball(3, r).unwrap();
        let probe = Probe::for_body(&b).unwrap();
        let u = Direction::from_slice(&[0.2, 0.3, -0.9]).unwrap();
        assert!(in_enclosing_ball_set(&b, &u, r, &probe).unwrap());
        assert!(!in_enclosing_ball_set(&b, &u, 0.99 * r, &probe).unwrap());
        let i = enclosing_threshold_bisect(&b, &u, 100.0, &probe).unwrap().unwrap();
        assert!((i - r).abs() < 1e-6, "{i}");
    }

    #[test]
    fn cube_enclosing_threshold_on_the_diagonal() {
        // Vertex distances from (½,½,½) − i·u give i* = √3/2 (bisection
        // against the vertex list).
        let cube = ConvexBody::cube(3, 1.0).unwrap();
        let probe = Probe::for_body(&cube).unwrap();
        let u = Direction::from_slice(&[1.0, 1.0, 1.0]).unwrap();
        let i = enclosing_threshold_bisect(&cube, &u, 100.0, &probe).unwrap().unwrap();
        assert!((i - 3f64.sqrt() / 2.0).abs() < 1e-9, "{i}");
        assert!((enclosing_radius(&cube, &u, &probe).unwrap() - i).abs() < 1e-9);
        assert!(!in_enclosing_ball_set(&cube, &Direction::axis(3, 0), 1e6, &probe).unwrap());
    }

    #[test]
    fn closed_form_thresholds_agree_with_direct_tests() {
        let e = ConvexBody::axis_ellipsoid(&[1.0, 2.0, 3.0]).unwrap();
        let probe = Probe::new(&e, Quadrature::new(3, 0), 3).unwrap();
        for node in sample_sphere(3, 1, 5).unwrap() {
            let x = e.inverse_gauss(&node.u).unwrap();
            let r = rolling_radius(&e, &x, &probe).unwrap();
            assert!(in_rolling_ball_set(&e, &x, r * (1.0 - 1e-9), &probe).unwrap());
            assert!(!in_rolling_ball_set(&e, &x, r * (1.0 + 1e-6), &probe).unwrap());
            let i = enclosing_radius(&e, &node.u, &probe).unwrap();
            assert!(in_enclosing_ball_set(&e, &node.u, i * (1.0 + 1e-9), &probe).unwrap());
            assert!(!in_enclosing_ball_set(&e, &node.u, i * (1.0 - 1e-6), &probe).unwrap());
        }
    }

    #[test]
    fn ball_change_of_variable_with_unit_function() {
        let b = ConvexBody::centered_ball(3, 1.0).unwrap();
        let rep = verify_change_of_variable(&b, 1.0, Quadrature::new(4, 0), &[TestFunction::constant(1.0)]).unwrap();
        let row = &rep.rows[0];
        assert!((row.g_boundary / (4.0 * PI) - 1.0).abs() < 0.005);
        assert!(row.g_gap < 0.005 && row.h_gap < 0.005);
    }

    #[test]
    fn radius_two_ball_h_identity_at_p_three() {
        let b = ConvexBody::centered_ball(3, 2.0).unwrap();
        let rep = verify_change_of_variable(&b, 3.0, Quadrature::new(4, 0), &[TestFunction::constant(1.0)]).unwrap();
        let row = &rep.rows[0];
        assert!((row.h_sphere / (4.0 * PI) - 1.0).abs() < 0.005);
        assert!((row.h_boundary / (4.0 * PI) - 1.0).abs() < 0.005);
    }

    #[test]
    fn unit_ball_partial_sums_jump_at_one() {
        let b = ConvexBody::centered_ball(3, 1.0).unwrap();
        let rep = verify_sphere_boundary_equality(&b, 1.0, Quadrature::new(4, 0), &default_ladder()).unwrap();
        for row in &rep.ladder {
            if row.i < 1.0 {
                assert_eq!(row.sphere_partial, 0.0);
                assert_eq!(row.boundary_partial, 0.0);
            } else {
                assert!((row.sphere_partial / (4.0 * PI) - 1.0).abs() < 0.005);
                assert!((row.boundary_partial / (4.0 * PI) - 1.0).abs() < 0.005);
            }
        }
        assert!(rep.monotone);
    }

    #[test]
    fn ball_jacobian_estimate_matches_curvature_function() {
        let b = ConvexBody::centered_ball(3, 2.0).unwrap();
        let u = Direction::from_slice(&[0.1, 0.7, -0.3]).unwrap();
        let j = jacobian_estimate(&b, &u, 1e-3).unwrap();
        assert!((j - 4.0).abs() < 1e-5, "{j}");
    }
}
