//! Curvature measures `C_0`, `C_{n-1}` on the boundary and the surface area
//! measure `S_K` on the sphere, each as an absolutely continuous density over
//! a fixed sample set plus a finite list of atoms.

use crate::body::{ConvexBody, Direction};
use crate::error::{AsaError, Result};
use crate::numeric::{pairwise_sum, Vector};
use crate::polytope::Polytope;
use crate::quadrature::{
    check_origin_interior, sample_boundary, sphere_samples, BoundarySample, Quadrature,
    SphereSample,
};

#[derive(Debug, Clone, PartialEq)]
pub struct PointAtom {
    pub point: Vector,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionAtom {
    pub direction: Direction,
    pub mass: f64,
}

/// Measure on `∂K`: `density[i]·samples[i].weight` plus point masses.
#[derive(Debug, Clone)]
pub struct CurvatureMeasure {
    pub samples: Vec<BoundarySample>,
    pub density: Vec<f64>,
    pub atoms: Vec<PointAtom>,
}

impl CurvatureMeasure {
    pub fn density_total(&self) -> f64 {
        let terms: Vec<f64> = self
            .samples
            .iter()
            .zip(&self.density)
            .map(|(s, d)| s.weight * d)
            .collect();
        pairwise_sum(&terms)
    }

    pub fn atom_total(&self) -> f64 {
        let m: Vec<f64> = self.atoms.iter().map(|a| a.mass).collect();
        pairwise_sum(&m)
    }

    pub fn total(&self) -> f64 {
        self.density_total() + self.atom_total()
    }
}

/// Measure on the sphere: `density[i]·samples[i].weight` plus direction atoms.
#[derive(Debug, Clone)]
pub struct SurfaceAreaMeasure {
    pub samples: Vec<SphereSample>,
    pub density: Vec<f64>,
    pub atoms: Vec<DirectionAtom>,
}

impl SurfaceAreaMeasure {
    pub fn density_total(&self) -> f64 {
        let terms: Vec<f64> = self
            .samples
            .iter()
            .zip(&self.density)
            .map(|(s, d)| s.weight * d)
            .collect();
        pairwise_sum(&terms)
    }

    pub fn atom_total(&self) -> f64 {
        let m: Vec<f64> = self.atoms.iter().map(|a| a.mass).collect();
        pairwise_sum(&m)
    }

    pub fn total(&self) -> f64 {
        self.density_total() + self.atom_total()
    }
}

fn require_supported(body: &ConvexBody) -> Result<()> {
    if body.is_smooth() || body.is_polytope() {
        Ok(())
    } else {
        Err(AsaError::NotSmooth)
    }
}

/// `C_0(K,·)`: density `H_K` for smooth bodies; for polytopes one atom per
/// vertex carrying the solid angle of its normal cone.
pub fn curvature_measure_c0(body: &ConvexBody, quad: Quadrature) -> Result<CurvatureMeasure> {
    require_supported(body)?;
    let samples = sample_boundary(body, quad)?;
    let density = samples.iter().map(|s| s.h_curv).collect();
    let atoms = match body.as_polytope() {
        Some(p) => vertex_atoms(p)?,
        None => Vec::new(),
    };
    Ok(CurvatureMeasure { samples, density, atoms })
}

fn vertex_atoms(p: &Polytope) -> Result<Vec<PointAtom>> {
    p.vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            Ok(PointAtom { point: v.clone(), mass: p.normal_cone_solid_angle(i)? })
        })
        .collect()
}

/// `C_{n-1}(K,·)`: boundary area, density 1 and no atoms.
pub fn curvature_measure_cn1(body: &ConvexBody, quad: Quadrature) -> Result<CurvatureMeasure> {
    require_supported(body)?;
    let samples = sample_boundary(body, quad)?;
    let density = vec![1.0; samples.len()];
    Ok(CurvatureMeasure { samples, density, atoms: Vec::new() })
}

/// `S_K`: density `F_K` on sphere samples for smooth bodies; facet atoms
/// (outer normal, facet area) for polytopes.
pub fn surface_area_measure(body: &ConvexBody, quad: Quadrature) -> Result<SurfaceAreaMeasure> {
    require_supported(body)?;
    let samples = sphere_samples(body, quad)?;
    let density = samples.iter().map(|s| s.f).collect();
    let atoms = match body.as_polytope() {
        Some(p) => p
            .facets()?
            .iter()
            .map(|f| Ok(DirectionAtom { direction: Direction::new(f.normal.clone())?, mass: f.area }))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    Ok(SurfaceAreaMeasure { samples, density, atoms })
}

/// Solid angle of the normal cone of `polytope` at the vertex with index
/// `vertex`.
pub fn normal_cone_solid_angle(polytope: &Polytope, vertex: usize) -> Result<f64> {
    polytope.normal_cone_solid_angle(vertex)
}

/// Same, addressing the vertex by its coordinates.
pub fn normal_cone_solid_angle_at(polytope: &Polytope, point: &Vector) -> Result<f64> {
    let i = polytope
        .vertices()
        .iter()
        .position(|v| (v - point).norm() <= 1e-12 * polytope.scale().max(1.0))
        .ok_or(AsaError::NotAVertex(usize::MAX))?;
    polytope.normal_cone_solid_angle(i)
}

/// `V(K*) = (1/n) ∫ h_K^{-n} dσ`.
pub fn polar_volume(body: &ConvexBody, quad: Quadrature) -> Result<f64> {
    let n = body.dim();
    let samples = crate::quadrature::sample_sphere(n, quad.resolution, quad.seed)?;
    let mut terms = Vec::with_capacity(samples.len());
    for s in &samples {
        let h = body.support(&s.u);
        if !(h > 0.0) {
            return Err(AsaError::OriginNotInterior { support: h });
        }
        terms.push(s.weight * h.powi(-(n as i32)));
    }
    Ok(pairwise_sum(&terms) / n as f64)
}

/// Volume: exact for polytopes, `(1/n) ∫ h_K F_K dσ` for smooth bodies.
pub fn volume(body: &ConvexBody, quad: Quadrature) -> Result<f64> {
    if let Some(p) = body.as_polytope() {
        return p.volume();
    }
    require_supported(body)?;
    let samples = sphere_samples(body, quad)?;
    let terms: Vec<f64> = samples.iter().map(|s| s.weight * s.h * s.f).collect();
    Ok(pairwise_sum(&terms) / body.dim() as f64)
}

/// Surface area: exact for polytopes, `∫ F_K dσ` for smooth bodies.
pub fn surface_area(body: &ConvexBody, quad: Quadrature) -> Result<f64> {
    if let Some(p) = body.as_polytope() {
        return p.surface_area();
    }
    Ok(surface_area_measure(body, quad)?.total())
}

/// Centroid by the divergence theorem:
/// `(1/V)·(1/(n+1)) ∫_{∂K} x ⟨x, ν⟩ dH^{n-1}`.
pub fn centroid(body: &ConvexBody, quad: Quadrature) -> Result<Vector> {
    let n = body.dim();
    let samples = sample_boundary(body, quad)?;
    let vol = match body.as_polytope() {
        Some(p) => p.volume()?,
        None => {
            let terms: Vec<f64> = samples
                .iter()
                .map(|s| s.weight * s.x.dot(s.nu.as_vector()))
                .collect();
            pairwise_sum(&terms) / n as f64
        }
    };
    let c = Vector::from_fn(n, |k, _| {
        let terms: Vec<f64> = samples
            .iter()
            .map(|s| s.weight * s.x[k] * s.x.dot(s.nu.as_vector()))
            .collect();
        pairwise_sum(&terms)
    });
    Ok(c / ((n as f64 + 1.0) * vol))
}

/// Sphere samples with the origin-interior precondition checked.
pub fn origin_interior_samples(body: &ConvexBody, quad: Quadrature) -> Result<Vec<SphereSample>> {
    let samples = sphere_samples(body, quad)?;
    check_origin_interior(&samples)?;
    Ok(samples)
}
