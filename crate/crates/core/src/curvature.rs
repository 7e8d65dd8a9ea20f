//! Curvature function `F_K` from the support-function Hessian and the Gauss
//! curvature `H_K` through the reciprocity `H_K(τ_K(u))·F_K(u) = 1`.

use crate::body::{ConvexBody, DerivativeSource, Direction, BodyKind};
use crate::error::{AsaError, Result};
use crate::numeric::{orthogonal_complement, Matrix, Vector};

/// Eigenvalues of the restricted Hessian in `[-tol, 0)` are treated as zero
/// (analytic derivatives).
pub const NEGATIVE_EIGEN_CLAMP: f64 = 1e-10;
/// Same clamp for finite-difference Hessians, whose noise floor is higher.
pub const NEGATIVE_EIGEN_CLAMP_FD: f64 = 1e-6;

/// Hessian of the 1-homogeneous support function at a unit direction.
#[derive(Debug, Clone)]
pub struct SupportHessian {
    pub u: Direction,
    pub matrix: Matrix,
    pub source: DerivativeSource,
}

impl SupportHessian {
    /// Eigenvalues of the restriction to `u^⊥`, ascending.
    pub fn restricted_eigenvalues(&self) -> Vec<f64> {
        let basis = orthogonal_complement(self.u.as_vector());
        let restricted = basis.transpose() * &self.matrix * &basis;
        let restricted = (&restricted + restricted.transpose()) * 0.5;
        let mut eig: Vec<f64> = restricted.symmetric_eigen().eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        eig
    }

    /// `‖Ah·u‖`, which vanishes for an exact Hessian of a 1-homogeneous function.
    pub fn null_residual(&self) -> f64 {
        (&self.matrix * self.u.as_vector()).norm()
    }
}

pub fn support_hessian(body: &ConvexBody, u: &Direction) -> Result<SupportHessian> {
    let (matrix, source) = body.support_hessian_at(u.as_vector())?;
    Ok(SupportHessian { u: u.clone(), matrix, source })
}

/// Determinant of the support-function Hessian restricted to `u^⊥`.
/// Polytopes have no curvature function (`NotSmooth`).
pub fn curvature_function(body: &ConvexBody, u: &Direction) -> Result<f64> {
    if let BodyKind::Ball { radius, .. } = body.kind() {
        return Ok(radius.powi(body.dim() as i32 - 1));
    }
    let hess = support_hessian(body, u)?;
    determinant_on_complement(&hess)
}

pub(crate) fn determinant_on_complement(hess: &SupportHessian) -> Result<f64> {
    let eig = hess.restricted_eigenvalues();
    let scale = hess.matrix.amax().max(1.0);
    let clamp = match hess.source {
        DerivativeSource::Analytic => NEGATIVE_EIGEN_CLAMP,
        DerivativeSource::FiniteDifference => NEGATIVE_EIGEN_CLAMP_FD,
    } * scale;
    let mut det = 1.0;
    for &lambda in &eig {
        if !lambda.is_finite() {
            return Err(AsaError::DegenerateCurvature);
        }
        if lambda < -clamp {
            return Err(AsaError::HessianUnavailable(format!(
                "restricted Hessian has negative eigenvalue {lambda:e}; support function is not convex"
            )));
        }
        det *= lambda.max(0.0);
    }
    Ok(det)
}

/// Gauss curvature at a regular boundary point, `1 / F_K(ν_K(x))`.
pub fn gauss_curvature(body: &ConvexBody, x: &Vector) -> Result<f64> {
    if !body.is_smooth() {
        return Err(AsaError::NotSmooth);
    }
    if let BodyKind::Ball { radius, .. } = body.kind() {
        body.gauss(x)?;
        return Ok(radius.powi(1 - body.dim() as i32));
    }
    let nu = body.gauss(x)?;
    let f = curvature_function(body, &nu)?;
    if f <= 0.0 {
        return Err(AsaError::ZeroCurvatureFunction);
    }
    Ok(1.0 / f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::quartic_oracle;
    use approx::assert_relative_eq;

    fn v(c: &[f64]) -> Vector {
        Vector::from_column_slice(c)
    }

    /// Central second differences of `h` on the raw extension; independent of
    /// the closed forms used by the bodies.
    fn fd_reference(f: impl Fn(&Vector) -> f64, x: &Vector) -> Matrix {
        let n = x.len();
        let s = 1e-4;
        Matrix::from_fn(n, n, |i, j| {
            let at = |di: f64, dj: f64| {
                let mut y = x.clone();
                y[i] += di;
                y[j] += dj;
                f(&y)
            };
            (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4.0 * s * s)
        })
    }

    #[test]
    fn ball_hessian_matches_projection_and_finite_differences() {
        let r = 2.5;
        let b = ConvexBody::centered_ball(3, r).unwrap();
        let u = Direction::from_slice(&[0.3, -0.2, 0.9]).unwrap();
        let h = support_hessian(&b, &u).unwrap();
        let expect = (Matrix::identity(3, 3) - u.as_vector() * u.as_vector().transpose()) * r;
        assert!((&h.matrix - &expect).norm() < 1e-14);
        let fd = fd_reference(|x| r * x.norm(), u.as_vector());
        assert!((&h.matrix - fd).norm() < 1e-6);
        let eig = h.restricted_eigenvalues();
        assert_relative_eq!(eig[0], r, epsilon = 1e-13);
        assert_relative_eq!(eig[1], r, epsilon = 1e-13);
    }

    #[test]
    fn ellipsoid_hessian_at_pole() {
        let (a, b, c) = (1.0, 2.0, 3.0);
        let e = ConvexBody::axis_ellipsoid(&[a, b, c]).unwrap();
        let u = Direction::axis(3, 0);
        let h = support_hessian(&e, &u).unwrap();
        assert!(h.null_residual() < 1e-14);
        assert_relative_eq!(h.matrix[(1, 1)], b * b / a, epsilon = 1e-14);
        assert_relative_eq!(h.matrix[(2, 2)], c * c / a, epsilon = 1e-14);
        let fd = fd_reference(
            |x| (a * a * x[0] * x[0] + b * b * x[1] * x[1] + c * c * x[2] * x[2]).sqrt(),
            u.as_vector(),
        );
        assert!((&h.matrix - fd).norm() < 1e-5);
        assert_relative_eq!(curvature_function(&e, &u).unwrap(), b * b * c * c / (a * a), epsilon = 1e-12);
    }

    #[test]
    fn hessian_is_minus_one_homogeneous() {
        let e = ConvexBody::axis_ellipsoid(&[1.0, 2.0, 3.0]).unwrap();
        let u = v(&[0.2, 0.4, -0.5]).normalize();
        let (h1, _) = e.support_hessian_at(&u).unwrap();
        let (h2, _) = e.support_hessian_at(&(&u * 2.0)).unwrap();
        assert!((h2 - h1 * 0.5).norm() < 1e-14);
    }

    #[test]
    fn ball_curvatures() {
        let b = ConvexBody::centered_ball(3, 2.0).unwrap();
        let u = Direction::from_slice(&[1.0, 1.0, 0.0]).unwrap();
        assert_relative_eq!(curvature_function(&b, &u).unwrap(), 4.0, epsilon = 1e-14);
        assert_relative_eq!(gauss_curvature(&b, &v(&[0.0, 2.0, 0.0])).unwrap(), 0.25, epsilon = 1e-14);
        let unit = ConvexBody::centered_ball(3, 1.0).unwrap();
        assert_relative_eq!(gauss_curvature(&unit, &v(&[0.0, 0.0, 1.0])).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn ellipsoid_gauss_curvature_at_axis_end() {
        let e = ConvexBody::axis_ellipsoid(&[1.0, 2.0, 3.0]).unwrap();
        assert_relative_eq!(
            gauss_curvature(&e, &v(&[1.0, 0.0, 0.0])).unwrap(),
            1.0 / 36.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn polytope_has_no_curvature_function() {
        let cube = ConvexBody::cube(3, 1.0).unwrap();
        let u = Direction::from_slice(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(curvature_function(&cube, &u), Err(AsaError::NotSmooth));
    }

    #[test]
    fn finite_difference_oracle_is_close_to_sphere_at_zero_amplitude() {
        let q = quartic_oracle(3, 0.0).unwrap();
        let u = Direction::from_slice(&[0.6, 0.0, 0.8]).unwrap();
        let f = curvature_function(&q, &u).unwrap();
        assert!((f - 1.0).abs() < 1e-5, "{f}");
    }

    #[test]
    fn non_convex_oracle_is_rejected() {
        // h(u) = 1 − 0.9·u_3² is not a support function (its extension is not convex).
        let bad = crate::body::SupportOracle::new(
            3,
            "bad",
            std::sync::Arc::new(|u: &Vector| 1.0 - 0.9 * u[2] * u[2]),
        );
        let body = ConvexBody::oracle(bad).unwrap();
        let u = Direction::axis(3, 0);
        assert!(matches!(curvature_function(&body, &u), Err(AsaError::HessianUnavailable(_))));
    }
}
