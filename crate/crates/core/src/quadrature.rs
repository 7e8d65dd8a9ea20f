//! Deterministic quadrature on the unit sphere and on the boundary of a body.
//!
//! * n = 2: uniform angular grid with `resolution` nodes.
//! * n = 3: icosahedron subdivided `resolution` times; one node per spherical
//!   triangle (its normalised centroid) weighted by the triangle's area.
//! * n ≥ 4: `resolution` seeded uniform random directions with equal weights.
//!
//! Weights are rescaled so that they sum to `n·ω_n` exactly.
//!
//! Boundary samples of smooth bodies push sphere nodes through the inverse
//! Gauss map with area element `F_K(u)·dσ(u)`. The boundary mesh uses a
//! rotated copy of the sphere mesh (seed-derived), so boundary-side and
//! sphere-side integrals are computed on independent node sets.

use crate::body::{ConvexBody, Direction};
use crate::curvature::curvature_function;
use crate::error::{AsaError, Result};
use crate::numeric::{
    derive_seed, pairwise_sum, random_direction, random_rotation, rng_from_seed,
    sphere_measure, spherical_triangle_area, Matrix, Vector,
};
use rand::RngExt;
use std::f64::consts::PI;

/// Stream tag that separates the boundary mesh from the sphere mesh.
const BOUNDARY_STREAM: u64 = 0xB0DA;

/// Resolution and seed of a quadrature rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quadrature {
    pub resolution: usize,
    pub seed: u64,
}

impl Quadrature {
    pub fn new(resolution: usize, seed: u64) -> Self {
        Quadrature { resolution, seed }
    }

    /// Default resolution per dimension: 2048 angles in the plane, five
    /// icosahedral subdivisions (20 480 nodes) in space, 10⁵ Monte Carlo
    /// nodes above.
    pub fn default_for(n: usize) -> Self {
        let resolution = match n {
            2 => 2048,
            3 => 5,
            _ => 100_000,
        };
        Quadrature { resolution, seed: 0 }
    }

    /// The rule for the boundary mesh: same resolution, derived seed.
    pub fn boundary_rule(&self) -> Self {
        Quadrature { resolution: self.resolution, seed: derive_seed(self.seed, BOUNDARY_STREAM) }
    }

    /// Rule `steps` rungs up the refinement ladder: doubling of the node count
    /// for n = 2 and n ≥ 4, one more subdivision level (four times the nodes)
    /// for n = 3.
    pub fn refined(&self, n: usize, steps: u32) -> Self {
        let resolution = if n == 3 {
            self.resolution + steps as usize
        } else {
            self.resolution << steps
        };
        Quadrature { resolution, seed: self.seed }
    }
}

/// A quadrature node on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereNode {
    pub u: Direction,
    pub weight: f64,
}

/// Sphere node with support value and curvature function of a body.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSample {
    pub u: Direction,
    pub weight: f64,
    pub h: f64,
    pub f: f64,
    pub in_f_plus: bool,
}

/// Boundary node: position, outer normal, area weight, Gauss curvature and
/// support value at the normal.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySample {
    pub x: Vector,
    pub nu: Direction,
    pub weight: f64,
    pub h_curv: f64,
    pub h_at_nu: f64,
    pub in_h_plus: bool,
}

/// Geometric sphere nodes; weights sum to `n·ω_n`.
pub fn sample_sphere(n: usize, resolution: usize, seed: u64) -> Result<Vec<SphereNode>> {
    if n < 2 {
        return Err(AsaError::InvalidBody(format!("sphere dimension must be at least 2, got {n}")));
    }
    if resolution < 1 && n != 3 {
        return Err(AsaError::InvalidBody("resolution must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut nodes: Vec<(Vector, f64)> = match n {
        2 => {
            let offset = if seed == 0 { 0.0 } else { rng.random_range(0.0..2.0 * PI) };
            let w = 2.0 * PI / resolution as f64;
            (0..resolution)
                .map(|k| {
                    let t = offset + w * k as f64;
                    (Vector::from_vec(vec![t.cos(), t.sin()]), w)
                })
                .collect()
        }
        3 => {
            let rot = if seed == 0 { Matrix::identity(3, 3) } else { random_rotation(3, &mut rng) };
            icosahedral_triangles(resolution)
                .into_iter()
                .map(|[a, b, c]| {
                    let w = spherical_triangle_area(&a, &b, &c);
                    let centre = (&a + &b + &c).normalize();
                    (&rot * centre, w)
                })
                .collect()
        }
        _ => {
            let w = sphere_measure(n) / resolution as f64;
            (0..resolution).map(|_| (random_direction(n, &mut rng), w)).collect()
        }
    };
    let weights: Vec<f64> = nodes.iter().map(|(_, w)| *w).collect();
    let factor = sphere_measure(n) / pairwise_sum(&weights);
    for node in &mut nodes {
        node.1 *= factor;
    }
    nodes
        .into_iter()
        .map(|(u, weight)| Ok(SphereNode { u: Direction::new(u)?, weight }))
        .collect()
}

/// Triangles of the icosahedron subdivided `level` times, vertices on the
/// unit sphere.
pub fn icosahedral_triangles(level: usize) -> Vec<[Vector; 3]> {
    let (verts, faces) = icosahedron();
    let mut tris: Vec<[Vector; 3]> = faces
        .iter()
        .map(|f| [verts[f[0]].clone(), verts[f[1]].clone(), verts[f[2]].clone()])
        .collect();
    for _ in 0..level {
        let mut next = Vec::with_capacity(tris.len() * 4);
        for [a, b, c] in tris {
            let ab = (&a + &b).normalize();
            let bc = (&b + &c).normalize();
            let ca = (&c + &a).normalize();
            next.push([a, ab.clone(), ca.clone()]);
            next.push([b, bc.clone(), ab.clone()]);
            next.push([c, ca.clone(), bc.clone()]);
            next.push([ab, bc, ca]);
        }
        tris = next;
    }
    tris
}

/// Distinct vertices of the icosahedral mesh at `level` (12, 42, 162, ...).
pub fn icosahedral_vertices(level: usize) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for tri in icosahedral_triangles(level) {
        for v in tri {
            if !out.iter().any(|w| (w - &v).norm() < 1e-12) {
                out.push(v);
            }
        }
    }
    out
}

fn icosahedron() -> (Vec<Vector>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let verts = raw.iter().map(|c| Vector::from_column_slice(c).normalize()).collect();
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (verts, faces)
}

/// Sphere samples carrying `h_K(u)` and `F_K(u)`. Polytopes have `F = 0`
/// everywhere (their surface area measure is purely atomic).
pub fn sphere_samples(body: &ConvexBody, quad: Quadrature) -> Result<Vec<SphereSample>> {
    let nodes = sample_sphere(body.dim(), quad.resolution, quad.seed)?;
    let smooth = body.is_smooth();
    nodes
        .into_iter()
        .map(|node| {
            let h = body.support(&node.u);
            let f = if smooth { curvature_function(body, &node.u)? } else { 0.0 };
            if !f.is_finite() {
                return Err(AsaError::DegenerateCurvature);
            }
            Ok(SphereSample { u: node.u, weight: node.weight, h, f, in_f_plus: f > 0.0 })
        })
        .collect()
}

/// Boundary samples. Smooth bodies: sphere nodes of the boundary rule pushed
/// through `τ_K`, weight `w·F_K(u)`, `H = 1/F_K(u)`. Polytopes: per-facet
/// product rule with exact facet areas and `H = 0`.
pub fn sample_boundary(body: &ConvexBody, quad: Quadrature) -> Result<Vec<BoundarySample>> {
    if let Some(poly) = body.as_polytope() {
        return polytope_boundary(poly, quad.resolution);
    }
    let rule = quad.boundary_rule();
    let nodes = sample_sphere(body.dim(), rule.resolution, rule.seed)?;
    nodes
        .into_iter()
        .map(|node| {
            let f = curvature_function(body, &node.u)?;
            if !f.is_finite() {
                return Err(AsaError::DegenerateCurvature);
            }
            let x = body.inverse_gauss(&node.u)?;
            let h_at_nu = body.support(&node.u);
            let h_curv = if f > 0.0 { 1.0 / f } else { 0.0 };
            Ok(BoundarySample {
                x,
                weight: node.weight * f,
                nu: node.u,
                h_curv,
                h_at_nu,
                in_h_plus: f > 0.0,
            })
        })
        .collect()
}

fn polytope_boundary(poly: &crate::polytope::Polytope, resolution: usize) -> Result<Vec<BoundarySample>> {
    let facets = poly.facets()?;
    let verts = poly.vertices();
    let mut out = Vec::new();
    for facet in facets {
        let nu = Direction::new(facet.normal.clone())?;
        let mut push = |x: Vector, weight: f64| {
            out.push(BoundarySample {
                x,
                nu: nu.clone(),
                weight,
                h_curv: 0.0,
                h_at_nu: facet.offset,
                in_h_plus: false,
            })
        };
        match poly.dim() {
            2 => {
                let segments = resolution.div_ceil(facets.len()).max(1);
                let (a, b) = (&verts[facet.vertices[0]], &verts[facet.vertices[1]]);
                let w = facet.area / segments as f64;
                for k in 0..segments {
                    let t = (k as f64 + 0.5) / segments as f64;
                    push(a + (b - a) * t, w);
                }
            }
            3 => {
                let o = &verts[facet.vertices[0]];
                for pair in facet.vertices.windows(2).skip(1) {
                    let (b, c) = (&verts[pair[0]], &verts[pair[1]]);
                    for [p, q, r] in subdivide_flat(o, b, c, resolution) {
                        let area = 0.5 * crate::polytope::cross(&(&q - &p), &(&r - &p)).norm();
                        push((&p + &q + &r) / 3.0, area);
                    }
                }
            }
            n => return Err(AsaError::FacetsUnavailable(n)),
        }
    }
    Ok(out)
}

fn subdivide_flat(a: &Vector, b: &Vector, c: &Vector, level: usize) -> Vec<[Vector; 3]> {
    let mut tris = vec![[a.clone(), b.clone(), c.clone()]];
    for _ in 0..level {
        let mut next = Vec::with_capacity(tris.len() * 4);
        for [a, b, c] in tris {
            let ab = (&a + &b) * 0.5;
            let bc = (&b + &c) * 0.5;
            let ca = (&c + &a) * 0.5;
            next.push([a, ab.clone(), ca.clone()]);
            next.push([b, bc.clone(), ab.clone()]);
            next.push([c, ca.clone(), bc.clone()]);
            next.push([ab, bc, ca]);
        }
        tris = next;
    }
    tris
}

/// Fails with `OriginNotInterior` when some sampled support value is ≤ 0.
pub fn check_origin_interior(samples: &[SphereSample]) -> Result<()> {
    match samples.iter().map(|s| s.h).find(|&h| !(h > 0.0)) {
        Some(support) => Err(AsaError::OriginNotInterior { support }),
        None => Ok(()),
    }
}

pub fn total_weight<T>(samples: &[T], weight: impl Fn(&T) -> f64) -> f64 {
    let w: Vec<f64> = samples.iter().map(weight).collect();
    pairwise_sum(&w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn circle_grid_of_four() {
        let nodes = sample_sphere(2, 4, 0).unwrap();
        assert_eq!(nodes.len(), 4);
        for (k, node) in nodes.iter().enumerate() {
            let t = k as f64 * PI / 2.0;
            assert!((node.u[0] - t.cos()).abs() < 1e-15 && (node.u[1] - t.sin()).abs() < 1e-15);
            assert_relative_eq!(node.weight, PI / 2.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn icosahedral_weights_total_four_pi() {
        for level in 0..4 {
            let nodes = sample_sphere(3, level, 7).unwrap();
            assert_eq!(nodes.len(), 20 * 4usize.pow(level as u32));
            let total = total_weight(&nodes, |n| n.weight);
            assert_relative_eq!(total, 4.0 * PI, epsilon = 1e-12);
        }
    }

    #[test]
    fn icosahedral_raw_areas_already_partition_the_sphere() {
        let raw: Vec<f64> = icosahedral_triangles(3)
            .iter()
            .map(|[a, b, c]| spherical_triangle_area(a, b, c))
            .collect();
        assert_relative_eq!(pairwise_sum(&raw), 4.0 * PI, epsilon = 1e-10);
    }

    #[test]
    fn monte_carlo_weights_total_two_pi_squared() {
        let nodes = sample_sphere(4, 100_000, 3).unwrap();
        let total = total_weight(&nodes, |n| n.weight);
        assert_relative_eq!(total, 2.0 * PI * PI, epsilon = 1e-10);
    }

    #[test]
    fn icosahedral_vertex_counts() {
        assert_eq!(icosahedral_vertices(0).len(), 12);
        assert_eq!(icosahedral_vertices(1).len(), 42);
        assert_eq!(icosahedral_vertices(2).len(), 162);
    }

    #[test]
    fn unit_ball_boundary() {
        let b = ConvexBody::centered_ball(3, 1.0).unwrap();
        let samples = sample_boundary(&b, Quadrature::new(3, 0)).unwrap();
        assert!(samples.iter().all(|s| (s.h_curv - 1.0).abs() < 1e-14));
        assert_relative_eq!(total_weight(&samples, |s| s.weight), 4.0 * PI, epsilon = 1e-12);
        for s in &samples {
            assert!((s.x.dot(s.nu.as_vector()) - s.h_at_nu).abs() < 1e-9);
        }
    }

    #[test]
    fn cube_boundary_is_flat_with_area_six() {
        let cube = ConvexBody::cube(3, 1.0).unwrap();
        let samples = sample_boundary(&cube, Quadrature::new(2, 0)).unwrap();
        assert!(samples.iter().all(|s| s.h_curv == 0.0 && !s.in_h_plus));
        assert_relative_eq!(total_weight(&samples, |s| s.weight), 6.0, epsilon = 1e-12);
        for s in &samples {
            assert!((s.x.dot(s.nu.as_vector()) - s.h_at_nu).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_mesh_differs_from_sphere_mesh() {
        let q = Quadrature::new(2, 0);
        let a = sample_sphere(3, q.resolution, q.seed).unwrap();
        let b = sample_sphere(3, q.resolution, q.boundary_rule().seed).unwrap();
        assert!((a[0].u.as_vector() - b[0].u.as_vector()).norm() > 1e-6);
    }
}
