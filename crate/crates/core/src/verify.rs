//! Property harness: scaling, linear covariance, polytope degeneracy, the
//! mixed-volume-type and polar-volume inequalities, the affine
//! isoperimetric inequality and the upper-semicontinuity demonstration.

use crate::asa::{asa_boundary, check_exponent};
use crate::body::{quartic_oracle, ConvexBody, Direction};
use crate::error::{AsaError, Result};
use crate::measures::{centroid, polar_volume, surface_area_measure, volume};
use crate::numeric::{pairwise_sum, random_direction, rng_from_seed, unit_ball_volume, Matrix, Vector};
use crate::polytope::Polytope;
use crate::quadrature::{icosahedral_vertices, sample_boundary, sample_sphere, Quadrature};
use serde::Serialize;

/// Quadrature-versus-closed-form equalities.
pub const QUADRATURE_TOL: f64 = 0.01;
/// Algebraically exact identities.
pub const EXACT_TOL: f64 = 1e-9;
/// Minimum isoperimetric slack on the non-ellipsoidal smooth body.
pub const ISOPERIMETRIC_MIN_SLACK: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Le,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Eq => "eq",
            Relation::Le => "le",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// `|lhs − rhs| / max(|lhs|, |rhs|, 1)` for `eq`; `(rhs − lhs) / max(|lhs|, |rhs|)`
    /// for `le` (zero when both vanish).
    pub rel_gap_or_slack: f64,
    pub pass: bool,
    pub tolerance: f64,
}

impl PropertyResult {
    pub fn eq(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        let gap = (lhs - rhs).abs() / scale;
        PropertyResult {
            name: name.into(),
            lhs,
            rhs,
            relation: Relation::Eq,
            rel_gap_or_slack: gap,
            pass: (lhs - rhs).abs() <= tolerance * scale,
            tolerance,
        }
    }

    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs());
        let slack = if scale > 0.0 { (rhs - lhs) / scale } else { 0.0 };
        PropertyResult {
            name: name.into(),
            lhs,
            rhs,
            relation: Relation::Le,
            rel_gap_or_slack: slack,
            pass: lhs <= rhs * (1.0 + tolerance),
            tolerance,
        }
    }

    /// Re-evaluate `pass` at another tolerance.
    pub fn with_tolerance(&self, tolerance: f64) -> Self {
        let mut r = match self.relation {
            Relation::Eq => Self::eq(self.name.clone(), self.lhs, self.rhs, tolerance),
            Relation::Le => Self::le(self.name.clone(), self.lhs, self.rhs, tolerance),
        };
        r.rel_gap_or_slack = self.rel_gap_or_slack;
        r
    }
}

fn exponent_scaling(n: usize, p: f64) -> f64 {
    let n = n as f64;
    n * (n - p) / (n + p)
}

fn exponent_linear(n: usize, p: f64) -> f64 {
    let n = n as f64;
    (n - p) / (n + p)
}

/// `Ω_p(λK) = λ^{n(n−p)/(n+p)} Ω_p(K)`.
pub fn check_homogeneity(body: &ConvexBody, p: f64, lambda: f64, quad: Quadrature) -> Result<PropertyResult> {
    check_exponent(p)?;
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(AsaError::InvalidBody(format!("scaling factor must be positive, got {lambda}")));
    }
    let base = asa_boundary(body, p, quad)?;
    let lhs = if lambda == 1.0 { base } else { asa_boundary(&body.dilate(lambda)?, p, quad)? };
    let rhs = lambda.powf(exponent_scaling(body.dim(), p)) * base;
    Ok(PropertyResult::eq(format!("homogeneity[lambda={lambda}]"), lhs, rhs, QUADRATURE_TOL))
}

/// `Ω_p(φK) = |det φ|^{(n−p)/(n+p)} Ω_p(K)`.
pub fn check_gl_covariance(
    body: &ConvexBody,
    p: f64,
    label: &str,
    phi: &Matrix,
    quad: Quadrature,
) -> Result<PropertyResult> {
    check_exponent(p)?;
    let n = body.dim();
    let image = body.apply_linear(phi, &Vector::zeros(n))?;
    let base = asa_boundary(body, p, quad)?;
    let lhs = asa_boundary(&image, p, quad)?;
    let rhs = phi.determinant().abs().powf(exponent_linear(n, p)) * base;
    Ok(PropertyResult::eq(format!("gl_covariance[{label}]"), lhs, rhs, QUADRATURE_TOL))
}

/// `Ω_1(K + t) = Ω_1(K)`.
pub fn check_translation_invariance(body: &ConvexBody, t: &Vector, quad: Quadrature) -> Result<PropertyResult> {
    let lhs = asa_boundary(&body.translate(t)?, 1.0, quad)?;
    let rhs = asa_boundary(body, 1.0, quad)?;
    Ok(PropertyResult::eq("translation_invariance[p=1]", lhs, rhs, QUADRATURE_TOL))
}

/// `Ω_p(P) = 0` for polytopes.
pub fn check_polytope_zero(body: &ConvexBody, p: f64, quad: Quadrature) -> Result<PropertyResult> {
    if !body.is_polytope() {
        return Err(AsaError::InvalidBody("polytope_zero needs a polytope".into()));
    }
    let lhs = asa_boundary(body, p, quad)?;
    Ok(PropertyResult::eq("polytope_zero", lhs, 0.0, EXACT_TOL))
}

/// `V_p(K, L) = (1/n) ∫ h_L^p h_K^{1−p} dS_K`.
pub fn mixed_volume(k: &ConvexBody, l: &ConvexBody, p: f64, quad: Quadrature) -> Result<f64> {
    let s = surface_area_measure(k, quad)?;
    let n = k.dim() as f64;
    let mut terms: Vec<f64> = s
        .samples
        .iter()
        .zip(&s.density)
        .map(|(x, d)| l.support(&x.u).powf(p) * x.h.powf(1.0 - p) * d * x.weight)
        .collect();
    for a in &s.atoms {
        terms.push(l.support(&a.direction).powf(p) * k.support(&a.direction).powf(1.0 - p) * a.mass);
    }
    Ok(pairwise_sum(&terms) / n)
}

/// `W(K, h_L∘ν_K) = (1/n) ∫_{H+} h_L(ν_K)^{−n} H_K dH^{n−1}`.
pub fn w_functional(k: &ConvexBody, l: &ConvexBody, quad: Quadrature) -> Result<f64> {
    let n = k.dim() as i32;
    let samples = sample_boundary(k, quad)?;
    let terms: Vec<f64> = samples
        .iter()
        .filter(|s| s.in_h_plus)
        .map(|s| l.support(&s.nu).powi(-n) * s.h_curv * s.weight)
        .collect();
    Ok(pairwise_sum(&terms) / n as f64)
}

/// `Ω_p(K)/n ≤ W^{p/(n+p)} V_p(K,L)^{n/(n+p)}` and `W ≤ V(L*)`.
pub fn check_mixed_volume_inequality(
    k: &ConvexBody,
    l: &ConvexBody,
    p: f64,
    quad: Quadrature,
) -> Result<[PropertyResult; 2]> {
    check_exponent(p)?;
    if k.dim() != l.dim() {
        return Err(AsaError::DimensionMismatch { expected: k.dim(), got: l.dim() });
    }
    let n = k.dim() as f64;
    let omega = asa_boundary(k, p, quad)?;
    let w = w_functional(k, l, quad)?;
    let vp = mixed_volume(k, l, p, quad)?;
    let polar = polar_volume(l, quad)?;
    let rhs = w.powf(p / (n + p)) * vp.powf(n / (n + p));
    Ok([
        PropertyResult::le("mixed_volume", omega / n, rhs, QUADRATURE_TOL),
        PropertyResult::le("w_le_polar_volume", w, polar, QUADRATURE_TOL),
    ])
}

/// `n·ω_n^{2p/(n+p)}·V(K)^{(n−p)/(n+p)}`.
pub fn isoperimetric_bound(n: usize, p: f64, vol: f64) -> f64 {
    let nf = n as f64;
    nf * unit_ball_volume(n).powf(2.0 * p / (nf + p)) * vol.powf((nf - p) / (nf + p))
}

/// `K` translated so that its centroid is at the origin.
pub fn recentre(body: &ConvexBody, quad: Quadrature) -> Result<ConvexBody> {
    let c = centroid(body, quad)?;
    body.translate(&(-c))
}

/// `(Ω_p(K − c), bound)` with `c` the centroid.
pub fn isoperimetric_sides(body: &ConvexBody, p: f64, quad: Quadrature) -> Result<(f64, f64)> {
    check_exponent(p)?;
    let k = recentre(body, quad)?;
    let lhs = asa_boundary(&k, p, quad)?;
    let rhs = isoperimetric_bound(k.dim(), p, volume(&k, quad)?);
    Ok((lhs, rhs))
}

/// `Ω_p(K) ≤ n ω_n^{2p/(n+p)} V(K)^{(n−p)/(n+p)}` after recentring.
pub fn check_isoperimetric(body: &ConvexBody, p: f64, quad: Quadrature) -> Result<PropertyResult> {
    let (lhs, rhs) = isoperimetric_sides(body, p, quad)?;
    Ok(PropertyResult::le("isoperimetric", lhs, rhs, QUADRATURE_TOL))
}

/// Equality case (balls and ellipsoids).
pub fn check_isoperimetric_equality(body: &ConvexBody, p: f64, quad: Quadrature) -> Result<PropertyResult> {
    let (lhs, rhs) = isoperimetric_sides(body, p, quad)?;
    Ok(PropertyResult::eq("isoperimetric_equality", lhs, rhs, QUADRATURE_TOL))
}

/// `Ω_p(K) ≤ (1 − min_slack)·bound`.
pub fn check_isoperimetric_strict(
    body: &ConvexBody,
    p: f64,
    min_slack: f64,
    quad: Quadrature,
) -> Result<PropertyResult> {
    let (lhs, rhs) = isoperimetric_sides(body, p, quad)?;
    let mut r = PropertyResult::le("isoperimetric_strict", lhs, rhs * (1.0 - min_slack), 0.0);
    r.rel_gap_or_slack = if rhs > 0.0 { (rhs - lhs) / rhs } else { 0.0 };
    r.tolerance = min_slack;
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UscRow {
    pub m: usize,
    /// `max_u |h_K(u) − h_{P_m}(u)|` over sphere nodes.
    pub hausdorff_proxy: f64,
    pub omega_polytope: f64,
    pub omega_body: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UscReport {
    pub p: f64,
    pub rows: Vec<UscRow>,
    /// Hausdorff proxies strictly decreasing along the ladder.
    pub distances_decreasing: bool,
    /// `Ω_p(P_m) < Ω_p(K)` on every row.
    pub strict_gap: bool,
}

/// Inscribed polytopes with vertices `τ_K(u)` at icosahedral directions
/// (12, 42, 162, … vertices for `levels` 0, 1, 2, …).
pub fn demo_upper_semicontinuity(
    body: &ConvexBody,
    p: f64,
    levels: &[usize],
    quad: Quadrature,
) -> Result<UscReport> {
    check_exponent(p)?;
    let n = body.dim();
    if n != 3 {
        return Err(AsaError::HullUnavailable(n));
    }
    if !body.is_smooth() {
        return Err(AsaError::NotSmooth);
    }
    let omega_body = asa_boundary(body, p, quad)?;
    let nodes = sample_sphere(n, quad.resolution, quad.seed)?;
    let mut rows = Vec::with_capacity(levels.len());
    for &level in levels {
        let verts = icosahedral_vertices(level)
            .into_iter()
            .map(|u| body.inverse_gauss(&Direction::new(u)?))
            .collect::<Result<Vec<_>>>()?;
        let m = verts.len();
        let poly = ConvexBody::polytope(Polytope::from_vertices(verts)?);
        let hausdorff_proxy = nodes
            .iter()
            .map(|s| (body.support(&s.u) - poly.support(&s.u)).abs())
            .fold(0.0, f64::max);
        let omega_polytope = asa_boundary(&poly, p, quad)?;
        rows.push(UscRow { m, hausdorff_proxy, omega_polytope, omega_body });
    }
    let distances_decreasing = rows.windows(2).all(|w| w[1].hausdorff_proxy < w[0].hausdorff_proxy);
    let strict_gap = rows.iter().all(|r| r.omega_polytope < r.omega_body);
    Ok(UscReport { p, rows, distances_decreasing, strict_gap })
}

/// Simplex with `n + 1` random vertices, translated so that the vertex
/// mean is the origin.
pub fn random_simplex(n: usize, seed: u64) -> Result<ConvexBody> {
    let mut rng = rng_from_seed(seed);
    loop {
        let verts: Vec<Vector> = (0..=n).map(|_| random_direction(n, &mut rng)).collect();
        let mean = verts.iter().fold(Vector::zeros(n), |a, v| a + v) / (n + 1) as f64;
        let verts: Vec<Vector> = verts.into_iter().map(|v| v - &mean).collect();
        let edges = Matrix::from_fn(n, n, |i, j| verts[j + 1][i] - verts[0][i]);
        if edges.determinant().abs() > 0.1 {
            return Ok(ConvexBody::polytope(Polytope::from_vertices(verts)?));
        }
    }
}

/// Per-dimension version of the ellipsoid `(1, 2, 3)`: the first `n` axes.
fn axes(full: &[f64], n: usize) -> Vec<f64> {
    if n == 2 && full == [1.0, 1.0, 4.0] {
        return vec![1.0, 4.0];
    }
    (0..n).map(|i| full.get(i).copied().unwrap_or(1.0)).collect()
}

#[derive(Debug, Clone)]
pub struct NamedBody {
    pub name: String,
    pub body: ConvexBody,
    /// Ball or ellipsoid centred at its centroid: the isoperimetric
    /// equality case.
    pub ellipsoidal: bool,
}

/// Unit ball, ball of radius 2, ellipsoids `(1,2,3)` and `(1,1,4)`, cube
/// and a seeded random simplex. In the plane the ellipsoids become `(1,2)`
/// and `(1,4)`.
pub fn standard_bodies(n: usize, seed: u64) -> Result<Vec<NamedBody>> {
    let named = |name: &str, body, ellipsoidal| NamedBody { name: name.into(), body, ellipsoidal };
    Ok(vec![
        named("unit_ball", ConvexBody::centered_ball(n, 1.0)?, true),
        named("ball_r2", ConvexBody::centered_ball(n, 2.0)?, true),
        named("ellipsoid_123", ConvexBody::axis_ellipsoid(&axes(&[1.0, 2.0, 3.0], n))?, true),
        named("ellipsoid_114", ConvexBody::axis_ellipsoid(&axes(&[1.0, 1.0, 4.0], n))?, true),
        named("cube", ConvexBody::cube(n, 1.0)?, false),
        named("simplex", random_simplex(n, seed)?, false),
    ])
}

/// `diag(1, 2, 3)` (first `n` entries).
pub fn diag_map(n: usize) -> Matrix {
    Matrix::from_diagonal(&Vector::from_fn(n, |i, _| (i + 1) as f64))
}

/// Unit upper shear `e_1 ← e_1 + e_2`.
pub fn shear_map(n: usize) -> Matrix {
    let mut m = Matrix::identity(n, n);
    m[(0, 1)] = 1.0;
    m
}

/// All single-body checks for `body` at exponent `p`, sorted by name.
pub fn body_checks(nb: &NamedBody, p: f64, quad: Quadrature) -> Result<Vec<PropertyResult>> {
    let body = &nb.body;
    let n = body.dim();
    let mut out = vec![
        check_homogeneity(body, p, 0.5, quad)?,
        check_homogeneity(body, p, 2.0, quad)?,
        check_gl_covariance(body, p, "diag", &diag_map(n), quad)?,
        check_gl_covariance(body, p, "shear", &shear_map(n), quad)?,
        check_isoperimetric(body, p, quad)?,
    ];
    let ball = ConvexBody::centered_ball(n, 1.0)?;
    for (label, l) in [("unit_ball", ball.clone()), ("ball_r2", ball.dilate(2.0)?)] {
        for mut r in check_mixed_volume_inequality(body, &l, p, quad)? {
            r.name = format!("{}[L={label}]", r.name);
            out.push(r);
        }
    }
    if nb.ellipsoidal {
        out.push(check_isoperimetric_equality(body, p, quad)?);
    }
    if body.is_polytope() {
        out.push(check_polytope_zero(body, p, quad)?);
    }
    if body.is_smooth() && p == 1.0 {
        let t = Vector::from_element(n, 0.1);
        out.push(check_translation_invariance(body, &t, quad)?);
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

/// Strict isoperimetric slack on `h = 1 + amplitude·Σu_i⁴`.
pub fn quartic_slack_check(n: usize, amplitude: f64, p: f64, quad: Quadrature) -> Result<PropertyResult> {
    let body = quartic_oracle(n, amplitude)?;
    check_isoperimetric_strict(&body, p, ISOPERIMETRIC_MIN_SLACK, quad)
}
