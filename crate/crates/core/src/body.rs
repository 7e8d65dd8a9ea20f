//! Convex bodies described through their support functions.
//!
//! Every variant evaluates the 1-homogeneous extension `h_K(x) = max_{y∈K} ⟨x, y⟩`
//! on arbitrary nonzero vectors, which makes the gradient (the inverse Gauss
//! map on unit vectors) and the Hessian available for the smooth variants.
//! Affine images are represented lazily through `h_{φK+t}(x) = h_K(φᵀx) + ⟨t, x⟩`,
//! except for polytopes whose vertices are mapped directly.

use crate::error::{AsaError, Result};
use crate::numeric::{
    orthogonal_complement, random_direction, rng_from_seed, Matrix, Vector,
};
use crate::polytope::Polytope;
use std::fmt;
use std::sync::Arc;

/// Finite-difference step for oracle gradients.
pub const FD_GRADIENT_STEP: f64 = 1e-5;
/// Finite-difference step for oracle Hessians.
pub const FD_HESSIAN_STEP: f64 = 1e-4;
/// Largest tolerated asymmetry of a user-supplied Hessian.
pub const HESSIAN_ASYMMETRY_TOL: f64 = 1e-4;
/// Relative residual allowed for a point to count as a boundary point.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// A unit vector in R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vector);

impl Direction {
    /// Normalise `v`; fails on (near) zero vectors.
    pub fn new(v: Vector) -> Result<Self> {
        let norm = v.norm();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(AsaError::InvalidBody("direction must be a nonzero finite vector".into()));
        }
        Ok(Direction(v / norm))
    }

    pub fn from_slice(c: &[f64]) -> Result<Self> {
        Self::new(Vector::from_column_slice(c))
    }

    /// The i-th standard basis vector.
    pub fn axis(n: usize, i: usize) -> Self {
        Direction(Vector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 }))
    }

    pub fn as_vector(&self) -> &Vector {
        &self.0
    }

    pub fn into_inner(self) -> Vector {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl std::ops::Deref for Direction {
    type Target = Vector;
    fn deref(&self) -> &Vector {
        &self.0
    }
}

pub type SupportFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;
pub type HessianFn = Arc<dyn Fn(&Vector) -> Matrix + Send + Sync>;

/// User-supplied support function on unit directions, with optional analytic
/// derivatives of its 1-homogeneous extension (evaluated at unit vectors).
#[derive(Clone)]
pub struct SupportOracle {
    dim: usize,
    label: String,
    support: SupportFn,
    gradient: Option<GradientFn>,
    hessian: Option<HessianFn>,
}

impl SupportOracle {
    pub fn new(dim: usize, label: impl Into<String>, support: SupportFn) -> Self {
        SupportOracle { dim, label: label.into(), support, gradient: None, hessian: None }
    }

    pub fn with_gradient(mut self, gradient: GradientFn) -> Self {
        self.gradient = Some(gradient);
        self
    }

    pub fn with_hessian(mut self, hessian: HessianFn) -> Self {
        self.hessian = Some(hessian);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_analytic_hessian(&self) -> bool {
        self.hessian.is_some()
    }

    fn extension(&self, x: &Vector) -> f64 {
        let r = x.norm();
        r * (self.support)(&(x / r))
    }
}

impl fmt::Debug for SupportOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SupportOracle")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .field("analytic_gradient", &self.gradient.is_some())
            .field("analytic_hessian", &self.hessian.is_some())
            .finish()
    }
}

/// How a Hessian was obtained; it decides downstream tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeSource {
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone)]
pub enum BodyKind {
    Ball {
        center: Vector,
        radius: f64,
    },
    Ellipsoid {
        semi_axes: Vector,
        rotation: Matrix,
        center: Vector,
        /// `rotation · diag(a²) · rotationᵀ`
        shape: Matrix,
        shape_inverse: Matrix,
    },
    Polytope(Arc<Polytope>),
    Oracle(SupportOracle),
    Transformed {
        base: Box<ConvexBody>,
        linear: Matrix,
        translation: Vector,
        inverse: Matrix,
    },
}

#[derive(Debug, Clone)]
pub struct ConvexBody {
    dim: usize,
    kind: BodyKind,
}

impl ConvexBody {
    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(AsaError::InvalidBody("ball radius must be positive".into()));
        }
        let dim = check_dim(center.len())?;
        Ok(ConvexBody { dim, kind: BodyKind::Ball { center, radius } })
    }

    /// Ball of radius `radius` centred at the origin of R^n.
    pub fn centered_ball(n: usize, radius: f64) -> Result<Self> {
        Self::ball(Vector::zeros(n), radius)
    }

    pub fn ellipsoid(semi_axes: Vector, rotation: Matrix, center: Vector) -> Result<Self> {
        let dim = check_dim(semi_axes.len())?;
        if rotation.shape() != (dim, dim) || center.len() != dim {
            return Err(AsaError::DimensionMismatch { expected: dim, got: center.len() });
        }
        if semi_axes.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(AsaError::InvalidBody("semi-axes must be positive".into()));
        }
        if (rotation.transpose() * &rotation - Matrix::identity(dim, dim)).norm() > 1e-9 {
            return Err(AsaError::InvalidBody("ellipsoid rotation must be orthogonal".into()));
        }
        let squares = Matrix::from_diagonal(&semi_axes.map(|a| a * a));
        let inv_squares = Matrix::from_diagonal(&semi_axes.map(|a| 1.0 / (a * a)));
        let shape = &rotation * squares * rotation.transpose();
        let shape_inverse = &rotation * inv_squares * rotation.transpose();
        Ok(ConvexBody {
            dim,
            kind: BodyKind::Ellipsoid { semi_axes, rotation, center, shape, shape_inverse },
        })
    }

    /// Axis-aligned ellipsoid centred at the origin.
    pub fn axis_ellipsoid(semi_axes: &[f64]) -> Result<Self> {
        let n = semi_axes.len();
        Self::ellipsoid(
            Vector::from_column_slice(semi_axes),
            Matrix::identity(n, n),
            Vector::zeros(n),
        )
    }

    pub fn polytope(polytope: Polytope) -> Self {
        ConvexBody { dim: polytope.dim(), kind: BodyKind::Polytope(Arc::new(polytope)) }
    }

    /// Axis-parallel cube `[-side/2, side/2]^n`.
    pub fn cube(n: usize, side: f64) -> Result<Self> {
        let half = 0.5 * side;
        let vertices = (0..1usize << n)
            .map(|mask| {
                Vector::from_fn(n, |k, _| if mask >> k & 1 == 1 { half } else { -half })
            })
            .collect();
        Ok(Self::polytope(Polytope::from_vertices(vertices)?))
    }

    pub fn oracle(oracle: SupportOracle) -> Result<Self> {
        let dim = check_dim(oracle.dim)?;
        Ok(ConvexBody { dim, kind: BodyKind::Oracle(oracle) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match &self.kind {
            BodyKind::Polytope(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_polytope(&self) -> bool {
        self.as_polytope().is_some()
    }

    /// True for the variants with a twice-differentiable support function.
    pub fn is_smooth(&self) -> bool {
        match &self.kind {
            BodyKind::Ball { .. } | BodyKind::Ellipsoid { .. } | BodyKind::Oracle(_) => true,
            BodyKind::Polytope(_) => false,
            BodyKind::Transformed { base, .. } => base.is_smooth(),
        }
    }

    /// Support function of a unit direction.
    pub fn support(&self, u: &Direction) -> f64 {
        self.support_at(u.as_vector())
    }

    /// 1-homogeneous support function on any nonzero vector.
    pub fn support_at(&self, x: &Vector) -> f64 {
        match &self.kind {
            BodyKind::Ball { center, radius } => center.dot(x) + radius * x.norm(),
            BodyKind::Ellipsoid { center, shape, .. } => {
                center.dot(x) + x.dot(&(shape * x)).max(0.0).sqrt()
            }
            BodyKind::Polytope(p) => p.support(x),
            BodyKind::Oracle(o) => o.extension(x),
            BodyKind::Transformed { base, linear, translation, .. } => {
                base.support_at(&(linear.transpose() * x)) + translation.dot(x)
            }
        }
    }

    /// Gradient of the support function at `x`. For unit `x` this is the
    /// boundary point with outer normal `x`.
    pub fn support_gradient_at(&self, x: &Vector) -> Result<Vector> {
        match &self.kind {
            BodyKind::Ball { center, radius } => Ok(center + x * (radius / x.norm())),
            BodyKind::Ellipsoid { center, shape, .. } => {
                let mx = shape * x;
                Ok(center + &mx / x.dot(&mx).sqrt())
            }
            BodyKind::Polytope(p) => {
                let i = p.exposed_vertex(x)?;
                Ok(p.vertices()[i].clone())
            }
            BodyKind::Oracle(o) => match &o.gradient {
                Some(g) => Ok(g(&(x / x.norm()))),
                None => Ok(fd_gradient(|y| o.extension(y), x)),
            },
            BodyKind::Transformed { base, linear, translation, .. } => {
                Ok(linear * base.support_gradient_at(&(linear.transpose() * x))? + translation)
            }
        }
    }

    /// Hessian of the 1-homogeneous support function at `x`.
    pub fn support_hessian_at(&self, x: &Vector) -> Result<(Matrix, DerivativeSource)> {
        match &self.kind {
            BodyKind::Ball { radius, .. } => {
                let r = x.norm();
                let u = x / r;
                let n = self.dim;
                Ok((
                    (Matrix::identity(n, n) - &u * u.transpose()) * (radius / r),
                    DerivativeSource::Analytic,
                ))
            }
            BodyKind::Ellipsoid { shape, .. } => {
                let mx = shape * x;
                let s = x.dot(&mx).sqrt();
                Ok((
                    shape / s - (&mx * mx.transpose()) / (s * s * s),
                    DerivativeSource::Analytic,
                ))
            }
            BodyKind::Polytope(_) => Err(AsaError::NotSmooth),
            BodyKind::Oracle(o) => match &o.hessian {
                Some(h) => {
                    let r = x.norm();
                    let m = h(&(x / r)) / r;
                    let asym = (&m - m.transpose()).amax();
                    if asym > HESSIAN_ASYMMETRY_TOL * m.amax().max(1.0) || m.iter().any(|v| !v.is_finite()) {
                        return Err(AsaError::HessianUnavailable(format!(
                            "oracle Hessian asymmetric by {asym:e}"
                        )));
                    }
                    Ok(((&m + m.transpose()) * 0.5, DerivativeSource::Analytic))
                }
                None => {
                    let m = fd_hessian(|y| o.extension(y), x);
                    if m.iter().any(|v| !v.is_finite()) {
                        return Err(AsaError::HessianUnavailable(
                            "finite differences produced non-finite entries".into(),
                        ));
                    }
                    Ok((m, DerivativeSource::FiniteDifference))
                }
            },
            BodyKind::Transformed { base, linear, .. } => {
                let (m, src) = base.support_hessian_at(&(linear.transpose() * x))?;
                Ok((linear * m * linear.transpose(), src))
            }
        }
    }

    /// Inverse Gauss map: the unique boundary point with outer normal `u`.
    pub fn inverse_gauss(&self, u: &Direction) -> Result<Vector> {
        self.support_gradient_at(u.as_vector())
    }

    /// Gauss map: the unique outer unit normal at the boundary point `x`.
    pub fn gauss(&self, x: &Vector) -> Result<Direction> {
        if x.len() != self.dim {
            return Err(AsaError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        match &self.kind {
            BodyKind::Ball { center, radius } => {
                let y = x - center;
                let residual = (y.norm() - radius).abs();
                if residual > BOUNDARY_TOL * radius.max(1.0) {
                    return Err(AsaError::NotOnBoundary { residual });
                }
                Direction::new(y)
            }
            BodyKind::Ellipsoid { center, shape_inverse, .. } => {
                let y = x - center;
                let gauge = y.dot(&(shape_inverse * &y)).sqrt();
                let residual = (gauge - 1.0).abs();
                if residual > BOUNDARY_TOL {
                    return Err(AsaError::NotOnBoundary { residual });
                }
                Direction::new(shape_inverse * y)
            }
            BodyKind::Polytope(p) => {
                let residual = p.facet_residual(x)?;
                if residual.abs() > BOUNDARY_TOL * p.scale().max(1.0) {
                    return Err(AsaError::NotOnBoundary { residual });
                }
                let containing = p.facets_containing(x)?;
                match containing.as_slice() {
                    [f] => Ok(Direction(p.facets()?[*f].normal.clone())),
                    [] => Err(AsaError::NotOnBoundary { residual }),
                    _ => Err(AsaError::NonRegularPoint),
                }
            }
            BodyKind::Oracle(_) => self.gauss_by_newton(x),
            BodyKind::Transformed { base, translation, inverse, .. } => {
                let y = inverse * (x - translation);
                let nu = base.gauss(&y)?;
                Direction::new(inverse.transpose() * nu.as_vector())
            }
        }
    }

    /// Solve `∇h(u) = x` on the sphere by damped Newton steps in the
    /// tangent space, starting from the best of a seeded direction cloud.
    fn gauss_by_newton(&self, x: &Vector) -> Result<Direction> {
        let n = self.dim;
        let mut rng = rng_from_seed(0x6A55);
        let gap = |u: &Vector| self.support_at(u) - x.dot(u);
        let mut u = random_direction(n, &mut rng);
        let mut best = gap(&u);
        for _ in 0..4096 {
            let v = random_direction(n, &mut rng);
            let g = gap(&v);
            if g < best {
                best = g;
                u = v;
            }
        }
        let scale = x.norm().max(1.0);
        let mut residual = (self.support_gradient_at(&u)? - x).norm();
        for _ in 0..100 {
            if residual <= 1e-12 * scale {
                break;
            }
            let basis = orthogonal_complement(&u);
            let (hess, _) = self.support_hessian_at(&u)?;
            let restricted = basis.transpose() * hess * &basis;
            let rhs = -(basis.transpose() * (self.support_gradient_at(&u)? - x));
            let step = restricted
                .lu()
                .solve(&rhs)
                .ok_or(AsaError::NonRegularPoint)?;
            let mut t = 1.0;
            let mut improved = false;
            while t > 1e-8 {
                let cand = (&u + &basis * &step * t).normalize();
                let r = (self.support_gradient_at(&cand)? - x).norm();
                if r < residual {
                    u = cand;
                    residual = r;
                    improved = true;
                    break;
                }
                t *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if residual > BOUNDARY_TOL * scale * 10.0 {
            return Err(AsaError::NotOnBoundary { residual });
        }
        Direction::new(u)
    }

    /// Image `φK + t`. Polytopes map their vertices; other bodies are
    /// wrapped (nested transforms are composed).
    pub fn apply_linear(&self, linear: &Matrix, translation: &Vector) -> Result<Self> {
        let n = self.dim;
        if linear.shape() != (n, n) || translation.len() != n {
            return Err(AsaError::DimensionMismatch { expected: n, got: translation.len() });
        }
        let det = linear.determinant();
        if !(det.abs() > 1e-12 * linear.amax().powi(n as i32)) || !det.is_finite() {
            return Err(AsaError::SingularMatrix);
        }
        let inverse = linear.clone().try_inverse().ok_or(AsaError::SingularMatrix)?;
        match &self.kind {
            BodyKind::Polytope(p) => Ok(Self::polytope(p.transformed(linear, translation)?)),
            BodyKind::Transformed { base, linear: l0, translation: t0, inverse: i0 } => {
                Ok(ConvexBody {
                    dim: n,
                    kind: BodyKind::Transformed {
                        base: base.clone(),
                        linear: linear * l0,
                        translation: linear * t0 + translation,
                        inverse: i0 * inverse,
                    },
                })
            }
            _ => Ok(ConvexBody {
                dim: n,
                kind: BodyKind::Transformed {
                    base: Box::new(self.clone()),
                    linear: linear.clone(),
                    translation: translation.clone(),
                    inverse,
                },
            }),
        }
    }

    pub fn translate(&self, t: &Vector) -> Result<Self> {
        self.apply_linear(&Matrix::identity(self.dim, self.dim), t)
    }

    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        self.apply_linear(&(Matrix::identity(self.dim, self.dim) * lambda), &Vector::zeros(self.dim))
    }

    /// Point membership. Exact for every variant except oracles, which are
    /// probed on a fixed cloud of 4096 directions.
    pub fn contains(&self, x: &Vector) -> bool {
        let eps = 1e-12;
        match &self.kind {
            BodyKind::Ball { center, radius } => (x - center).norm() <= radius * (1.0 + eps),
            BodyKind::Ellipsoid { center, shape_inverse, .. } => {
                let y = x - center;
                y.dot(&(shape_inverse * &y)) <= 1.0 + eps
            }
            BodyKind::Polytope(p) => match p.facet_residual(x) {
                Ok(r) => r <= eps * p.scale().max(1.0),
                Err(_) => false,
            },
            BodyKind::Oracle(_) => {
                let mut rng = rng_from_seed(0xC0DE);
                (0..4096).all(|_| {
                    let u = random_direction(self.dim, &mut rng);
                    x.dot(&u) <= self.support_at(&u) + eps
                })
            }
            BodyKind::Transformed { base, translation, inverse, .. } => {
                base.contains(&(inverse * (x - translation)))
            }
        }
    }
}

fn check_dim(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(AsaError::InvalidBody(format!("dimension must be at least 2, got {n}")));
    }
    Ok(n)
}

fn fd_gradient(f: impl Fn(&Vector) -> f64, x: &Vector) -> Vector {
    let s = FD_GRADIENT_STEP;
    Vector::from_fn(x.len(), |i, _| {
        let mut p = x.clone();
        let mut m = x.clone();
        p[i] += s;
        m[i] -= s;
        (f(&p) - f(&m)) / (2.0 * s)
    })
}

fn fd_hessian(f: impl Fn(&Vector) -> f64, x: &Vector) -> Matrix {
    let n = x.len();
    let s = FD_HESSIAN_STEP;
    let f0 = f(x);
    let shifted = |i: usize, di: f64, j: usize, dj: f64| {
        let mut y = x.clone();
        y[i] += di;
        y[j] += dj;
        f(&y)
    };
    let mut h = Matrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = (shifted(i, s, i, 0.0) - 2.0 * f0 + shifted(i, -s, i, 0.0)) / (s * s);
        for j in (i + 1)..n {
            let v = (shifted(i, s, j, s) - shifted(i, s, j, -s) - shifted(i, -s, j, s)
                + shifted(i, -s, j, -s))
                / (4.0 * s * s);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    h
}

/// Perturbed sphere `h(u) = 1 + amplitude·Σ u_i⁴` in R^n, a smooth
/// non-ellipsoidal body (convex for small amplitudes; derivatives by
/// finite differences).
pub fn quartic_oracle(n: usize, amplitude: f64) -> Result<ConvexBody> {
    let support: SupportFn = Arc::new(move |u: &Vector| 1.0 + amplitude * u.iter().map(|c| c.powi(4)).sum::<f64>());
    ConvexBody::oracle(SupportOracle::new(n, format!("quartic({amplitude})"), support))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(c: &[f64]) -> Vector {
        Vector::from_column_slice(c)
    }

    #[test]
    fn ball_support_is_offset_plus_radius() {
        let b = ConvexBody::ball(v(&[1.0, -2.0, 0.5]), 3.0).unwrap();
        let u = Direction::from_slice(&[0.0, 1.0, 0.0]).unwrap();
        assert_relative_eq!(b.support(&u), -2.0 + 3.0, epsilon = 1e-15);
    }

    #[test]
    fn cube_support_on_axis() {
        let cube = ConvexBody::cube(3, 1.0).unwrap();
        assert_relative_eq!(cube.support(&Direction::axis(3, 0)), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn ellipsoid_support_matches_dense_surface_sampling() {
        let (a, b, c) = (1.0, 2.0, 3.0);
        let e = ConvexBody::axis_ellipsoid(&[a, b, c]).unwrap();
        assert_relative_eq!(e.support(&Direction::axis(3, 1)), b, epsilon = 1e-15);
        let u = Direction::from_slice(&[0.3, -0.4, 0.7]).unwrap();
        // Independent route: maximise over a dense parametric point cloud.
        let mut best = f64::NEG_INFINITY;
        let m = 600;
        for i in 0..=m {
            let th = std::f64::consts::PI * i as f64 / m as f64;
            for j in 0..2 * m {
                let ph = std::f64::consts::PI * j as f64 / m as f64;
                let x = v(&[a * th.sin() * ph.cos(), b * th.sin() * ph.sin(), c * th.cos()]);
                best = best.max(x.dot(&u));
            }
        }
        let closed = (a * a * u[0] * u[0] + b * b * u[1] * u[1] + c * c * u[2] * u[2]).sqrt();
        assert_relative_eq!(e.support(&u), closed, epsilon = 1e-14);
        assert!((closed - best).abs() < 1e-4, "{closed} vs {best}");
    }

    #[test]
    fn inverse_gauss_examples() {
        let b = ConvexBody::centered_ball(3, 2.0).unwrap();
        let u = Direction::from_slice(&[1.0, 2.0, 2.0]).unwrap();
        assert!((b.inverse_gauss(&u).unwrap() - u.as_vector() * 2.0).norm() < 1e-14);
        let cube = ConvexBody::cube(3, 1.0).unwrap();
        let d = Direction::from_slice(&[1.0, 1.0, 1.0]).unwrap();
        assert!((cube.inverse_gauss(&d).unwrap() - v(&[0.5, 0.5, 0.5])).norm() < 1e-15);
        assert_eq!(cube.inverse_gauss(&Direction::axis(3, 0)), Err(AsaError::NonRegularNormal));
    }

    #[test]
    fn gauss_examples() {
        let b = ConvexBody::centered_ball(3, 2.0).unwrap();
        assert_eq!(b.gauss(&v(&[2.0, 0.0, 0.0])).unwrap(), Direction::axis(3, 0));
        let e = ConvexBody::axis_ellipsoid(&[1.0, 2.0, 3.0]).unwrap();
        assert!((e.gauss(&v(&[1.0, 0.0, 0.0])).unwrap().as_vector() - v(&[1.0, 0.0, 0.0])).norm() < 1e-15);
        let cube = ConvexBody::cube(3, 1.0).unwrap();
        assert_eq!(cube.gauss(&v(&[0.5, 0.5, 0.5])), Err(AsaError::NonRegularPoint));
        assert_eq!(cube.gauss(&v(&[0.5, 0.1, -0.2])).unwrap(), Direction::axis(3, 0));
        assert!(matches!(b.gauss(&v(&[1.0, 0.0, 0.0])), Err(AsaError::NotOnBoundary { .. })));
    }

    #[test]
    fn oracle_gauss_inverts_inverse_gauss() {
        let q = quartic_oracle(3, 0.3).unwrap();
        let u = Direction::from_slice(&[0.2, -0.5, 0.8]).unwrap();
        let x = q.inverse_gauss(&u).unwrap();
        let back = q.gauss(&x).unwrap();
        assert!((back.as_vector() - u.as_vector()).norm() < 1e-7);
    }

    #[test]
    fn transformed_support_law() {
        let b = ConvexBody::centered_ball(3, 1.0).unwrap();
        let phi = Matrix::from_diagonal(&v(&[1.0, 2.0, 3.0]));
        let t = v(&[0.1, 0.0, -0.2]);
        let e = b.apply_linear(&phi, &t).unwrap();
        let u = Direction::from_slice(&[0.3, 0.5, -0.2]).unwrap();
        let expect = b.support_at(&(phi.transpose() * u.as_vector())) + t.dot(u.as_vector());
        assert_eq!(e.support(&u), expect);
        assert_relative_eq!(
            b.apply_linear(&phi, &Vector::zeros(3)).unwrap().support(&Direction::axis(3, 0)),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn rotated_cube_support() {
        let cube = ConvexBody::cube(3, 1.0).unwrap();
        let (c, s) = ((std::f64::consts::FRAC_PI_4).cos(), (std::f64::consts::FRAC_PI_4).sin());
        let rot = Matrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
        let r = cube.apply_linear(&rot, &Vector::zeros(3)).unwrap();
        assert!(r.is_polytope());
        // Oracle: rotate the vertex list by hand and take the max coordinate.
        let best = cube
            .as_polytope()
            .unwrap()
            .vertices()
            .iter()
            .map(|p| (&rot * p)[0])
            .fold(f64::NEG_INFINITY, f64::max);
        assert_relative_eq!(r.support(&Direction::axis(3, 0)), best, epsilon = 1e-15);
        assert_relative_eq!(best, 2f64.sqrt() / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn singular_map_is_rejected() {
        let b = ConvexBody::centered_ball(2, 1.0).unwrap();
        let phi = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(b.apply_linear(&phi, &Vector::zeros(2)).unwrap_err(), AsaError::SingularMatrix);
    }

    #[test]
    fn containment() {
        let e = ConvexBody::axis_ellipsoid(&[1.0, 2.0, 3.0]).unwrap();
        assert!(e.contains(&v(&[0.0, 0.0, 2.9])));
        assert!(!e.contains(&v(&[1.1, 0.0, 0.0])));
        let shifted = e.translate(&v(&[5.0, 0.0, 0.0])).unwrap();
        assert!(shifted.contains(&v(&[5.9, 0.0, 0.0])));
    }
}
