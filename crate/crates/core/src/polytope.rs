//! Convex polytopes given by their vertices, with facet enumeration in the
//! plane and in space, exact facet areas and normal-cone solid angles.

use crate::error::{AsaError, Result};
use crate::numeric::{
    orthogonal_complement, pairwise_sum, rng_from_seed, random_direction, safe_acos,
    sphere_measure, spherical_triangle_area, Matrix, Vector,
};
use std::collections::HashMap;

/// Relative tolerance for plane membership and hull visibility.
const PLANE_TOL: f64 = 1e-9;
/// Two vertex support values closer than this make a normal non-regular.
pub const EXPOSED_TIE_TOL: f64 = 1e-10;

/// A facet (codimension-one face). In R^3 the vertex indices are ordered
/// counter-clockwise when seen from outside; in R^2 they are the two edge
/// endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub vertices: Vec<usize>,
    pub normal: Vector,
    /// Support value at `normal`; the facet lies in `⟨x, normal⟩ = offset`.
    pub offset: f64,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Option<Vec<Facet>>,
    scale: f64,
}

impl Polytope {
    /// Build from a vertex list. Facets are enumerated for n = 2 and n = 3;
    /// in higher dimensions only vertex-based queries are available.
    /// Every input point must be a vertex of the hull.
    pub fn from_vertices(vertices: Vec<Vector>) -> Result<Self> {
        let dim = check_vertices(&vertices)?;
        let scale = scale_of(&vertices);
        let facets = match dim {
            2 => Some(hull_2d(&vertices, scale)?),
            3 => Some(hull_3d(&vertices, scale)?),
            _ => {
                check_full_dimensional(&vertices)?;
                None
            }
        };
        let poly = Polytope { dim, vertices, facets, scale };
        poly.check_all_vertices_extreme()?;
        Ok(poly)
    }

    /// Build an R^3 polytope from vertices and facet vertex-index lists.
    /// Facet orientation and cyclic order are normalised here; convexity is
    /// validated against every vertex.
    pub fn with_facets(vertices: Vec<Vector>, facets: Vec<Vec<usize>>) -> Result<Self> {
        let dim = check_vertices(&vertices)?;
        if dim != 3 {
            return Err(AsaError::InvalidBody(
                "explicit facet lists are supported in dimension 3 only".into(),
            ));
        }
        check_full_dimensional(&vertices)?;
        let scale = scale_of(&vertices);
        let centroid = vertex_centroid(&vertices);
        let mut built = Vec::with_capacity(facets.len());
        for idx in facets {
            if idx.len() < 3 || idx.iter().any(|&i| i >= vertices.len()) {
                return Err(AsaError::InvalidBody(format!("bad facet index list {idx:?}")));
            }
            built.push(planar_facet(&vertices, &idx, &centroid, scale)?);
        }
        for f in &built {
            for v in &vertices {
                if v.dot(&f.normal) > f.offset + PLANE_TOL * scale {
                    return Err(AsaError::InvalidBody(
                        "facet list does not describe a convex polytope".into(),
                    ));
                }
            }
        }
        let poly = Polytope { dim, vertices, facets: Some(built), scale };
        poly.check_all_vertices_extreme()?;
        Ok(poly)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> Result<&[Facet]> {
        self.facets.as_deref().ok_or(AsaError::FacetsUnavailable(self.dim))
    }

    /// Largest vertex norm; used to scale tolerances.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn support(&self, x: &Vector) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the unique vertex exposed by `x`, or `NonRegularNormal` when
    /// the top two support values tie.
    pub fn exposed_vertex(&self, x: &Vector) -> Result<usize> {
        let (mut best, mut best_val, mut second) = (0, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (i, v) in self.vertices.iter().enumerate() {
            let val = v.dot(x);
            if val > best_val {
                second = best_val;
                best_val = val;
                best = i;
            } else if val > second {
                second = val;
            }
        }
        if best_val - second <= EXPOSED_TIE_TOL * self.scale.max(1.0) * x.norm() {
            return Err(AsaError::NonRegularNormal);
        }
        Ok(best)
    }

    /// Facets whose supporting hyperplane contains `x`.
    pub fn facets_containing(&self, x: &Vector) -> Result<Vec<usize>> {
        let tol = PLANE_TOL * self.scale.max(1.0);
        Ok(self
            .facets()?
            .iter()
            .enumerate()
            .filter(|(_, f)| (x.dot(&f.normal) - f.offset).abs() <= tol)
            .map(|(i, _)| i)
            .collect())
    }

    /// Largest violation `max_f ⟨x, n_f⟩ − b_f` of the facet inequalities.
    pub fn facet_residual(&self, x: &Vector) -> Result<f64> {
        Ok(self
            .facets()?
            .iter()
            .map(|f| x.dot(&f.normal) - f.offset)
            .fold(f64::NEG_INFINITY, f64::max))
    }

    pub fn surface_area(&self) -> Result<f64> {
        let areas: Vec<f64> = self.facets()?.iter().map(|f| f.area).collect();
        Ok(pairwise_sum(&areas))
    }

    /// Exact volume `(1/n) Σ area·offset`.
    pub fn volume(&self) -> Result<f64> {
        let terms: Vec<f64> = self.facets()?.iter().map(|f| f.area * f.offset).collect();
        Ok(pairwise_sum(&terms) / self.dim as f64)
    }

    /// Image under `x ↦ linear·x + translation`.
    pub fn transformed(&self, linear: &Matrix, translation: &Vector) -> Result<Self> {
        let vertices: Vec<Vector> = self
            .vertices
            .iter()
            .map(|v| linear * v + translation)
            .collect();
        match (&self.facets, self.dim) {
            (Some(facets), 3) => {
                let idx = facets.iter().map(|f| f.vertices.clone()).collect();
                Polytope::with_facets(vertices, idx)
            }
            _ => Polytope::from_vertices(vertices),
        }
    }

    /// Spherical measure of the normal cone at `vertex`. Exact in R^2 and
    /// R^3; in higher dimensions a fixed-seed Monte Carlo estimate.
    pub fn normal_cone_solid_angle(&self, vertex: usize) -> Result<f64> {
        if vertex >= self.vertices.len() {
            return Err(AsaError::NotAVertex(vertex));
        }
        match self.dim {
            2 => self.solid_angle_2d(vertex),
            3 => self.solid_angle_3d(vertex),
            _ => Ok(self
                .normal_cone_solid_angle_mc(vertex, 1_000_000, 0)?
                .value),
        }
    }

    fn incident_facets(&self, vertex: usize) -> Result<Vec<&Facet>> {
        let incident: Vec<&Facet> = self
            .facets()?
            .iter()
            .filter(|f| f.vertices.contains(&vertex))
            .collect();
        if incident.len() < self.dim {
            return Err(AsaError::NotAVertex(vertex));
        }
        Ok(incident)
    }

    fn solid_angle_2d(&self, vertex: usize) -> Result<f64> {
        let incident = self.incident_facets(vertex)?;
        Ok(safe_acos(incident[0].normal.dot(&incident[1].normal)))
    }

    /// The normal cone is spanned by the incident facet normals. Order them
    /// cyclically around the cone axis and fan-triangulate.
    fn solid_angle_3d(&self, vertex: usize) -> Result<f64> {
        let incident = self.incident_facets(vertex)?;
        let mut axis = Vector::zeros(3);
        for f in &incident {
            axis += &f.normal;
        }
        let axis = axis.normalize();
        let basis = orthogonal_complement(&axis);
        let mut normals: Vec<(f64, &Vector)> = incident
            .iter()
            .map(|f| {
                let c = basis.transpose() * &f.normal;
                (c[1].atan2(c[0]), &f.normal)
            })
            .collect();
        normals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let first = normals[0].1;
        let areas: Vec<f64> = normals
            .windows(2)
            .skip(1)
            .map(|w| spherical_triangle_area(first, w[0].1, w[1].1))
            .collect();
        Ok(pairwise_sum(&areas))
    }

    /// Monte Carlo estimate of the normal-cone solid angle: the hit fraction
    /// of uniform directions exposing `vertex`, times the sphere measure.
    pub fn normal_cone_solid_angle_mc(
        &self,
        vertex: usize,
        samples: usize,
        seed: u64,
    ) -> Result<MonteCarloEstimate> {
        if vertex >= self.vertices.len() {
            return Err(AsaError::NotAVertex(vertex));
        }
        let mut rng = rng_from_seed(seed);
        let mut hits = 0usize;
        for _ in 0..samples {
            let u = random_direction(self.dim, &mut rng);
            let target = self.vertices[vertex].dot(&u);
            if self.vertices.iter().all(|v| v.dot(&u) <= target) {
                hits += 1;
            }
        }
        let total = sphere_measure(self.dim);
        let frac = hits as f64 / samples as f64;
        Ok(MonteCarloEstimate {
            value: total * frac,
            std_error: total * (frac * (1.0 - frac) / samples as f64).sqrt(),
        })
    }

    fn check_all_vertices_extreme(&self) -> Result<()> {
        if let Some(facets) = &self.facets {
            let mut count = vec![0usize; self.vertices.len()];
            for f in facets {
                for &i in &f.vertices {
                    count[i] += 1;
                }
            }
            if let Some(i) = count.iter().position(|&c| c < self.dim) {
                return Err(AsaError::NotAVertex(i));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub value: f64,
    pub std_error: f64,
}

fn check_vertices(vertices: &[Vector]) -> Result<usize> {
    let dim = vertices
        .first()
        .map(|v| v.len())
        .ok_or_else(|| AsaError::InvalidBody("polytope needs vertices".into()))?;
    if dim < 2 {
        return Err(AsaError::InvalidBody("dimension must be at least 2".into()));
    }
    if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
        return Err(AsaError::DimensionMismatch { expected: dim, got: v.len() });
    }
    if vertices.iter().any(|v| v.iter().any(|c| !c.is_finite())) {
        return Err(AsaError::InvalidBody("non-finite vertex coordinate".into()));
    }
    if vertices.len() <= dim {
        return Err(AsaError::InvalidBody(format!(
            "need at least {} vertices in dimension {dim}",
            dim + 1
        )));
    }
    Ok(dim)
}

fn scale_of(vertices: &[Vector]) -> f64 {
    vertices.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300)
}

fn vertex_centroid(vertices: &[Vector]) -> Vector {
    let mut c = Vector::zeros(vertices[0].len());
    for v in vertices {
        c += v;
    }
    c / vertices.len() as f64
}

fn check_full_dimensional(vertices: &[Vector]) -> Result<()> {
    let n = vertices[0].len();
    let base = &vertices[0];
    let m = Matrix::from_fn(n, vertices.len() - 1, |r, c| vertices[c + 1][r] - base[r]);
    let sv = m.singular_values();
    let smax = sv.max();
    if sv.iter().filter(|&&s| s > 1e-10 * smax.max(1e-300)).count() < n {
        return Err(AsaError::InvalidBody(
            "vertices do not affinely span the ambient space".into(),
        ));
    }
    Ok(())
}

/// Facet through the listed vertices, oriented away from `interior` and
/// with its vertices in counter-clockwise order seen from outside.
fn planar_facet(vertices: &[Vector], idx: &[usize], interior: &Vector, scale: f64) -> Result<Facet> {
    let pts: Vec<&Vector> = idx.iter().map(|&i| &vertices[i]).collect();
    let centre = {
        let mut c = Vector::zeros(3);
        for p in &pts {
            c += *p;
        }
        c / pts.len() as f64
    };
    // Newell-style normal from the best-conditioned triple.
    let mut normal = Vector::zeros(3);
    for a in 0..pts.len() {
        for b in (a + 1)..pts.len() {
            let e1 = pts[a] - &centre;
            let e2 = pts[b] - &centre;
            let c = cross(&e1, &e2);
            if c.norm() > normal.norm() {
                normal = c;
            }
        }
    }
    if normal.norm() <= 1e-14 * scale * scale {
        return Err(AsaError::InvalidBody(format!("degenerate facet {idx:?}")));
    }
    let mut normal = normal.normalize();
    if normal.dot(&(&centre - interior)) < 0.0 {
        normal = -normal;
    }
    let offset = centre.dot(&normal);
    for p in &pts {
        if (p.dot(&normal) - offset).abs() > 1e-7 * scale.max(1.0) {
            return Err(AsaError::InvalidBody(format!("facet {idx:?} is not planar")));
        }
    }
    let basis = orthogonal_complement(&normal);
    let mut ordered: Vec<(f64, usize)> = idx
        .iter()
        .map(|&i| {
            let c = basis.transpose() * (&vertices[i] - &centre);
            (c[1].atan2(c[0]), i)
        })
        .collect();
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut order: Vec<usize> = ordered.into_iter().map(|(_, i)| i).collect();
    // Make the cyclic order counter-clockwise about the outward normal.
    let orient = cross(
        &(&vertices[order[1]] - &vertices[order[0]]),
        &(&vertices[order[2]] - &vertices[order[0]]),
    );
    if orient.dot(&normal) < 0.0 {
        order.reverse();
    }
    let area = polygon_area(vertices, &order, &normal);
    Ok(Facet { vertices: order, normal, offset, area })
}

fn polygon_area(vertices: &[Vector], order: &[usize], normal: &Vector) -> f64 {
    let o = &vertices[order[0]];
    let parts: Vec<f64> = order
        .windows(2)
        .skip(1)
        .map(|w| 0.5 * cross(&(&vertices[w[0]] - o), &(&vertices[w[1]] - o)).dot(normal))
        .collect();
    pairwise_sum(&parts)
}

pub(crate) fn cross(a: &Vector, b: &Vector) -> Vector {
    Vector::from_vec(vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

/// Planar hull by Andrew's monotone chain; collinear and interior points
/// are reported as non-vertices.
fn hull_2d(vertices: &[Vector], scale: f64) -> Result<Vec<Facet>> {
    check_full_dimensional(vertices)?;
    let mut idx: Vec<usize> = (0..vertices.len()).collect();
    idx.sort_by(|&a, &b| {
        vertices[a][0]
            .total_cmp(&vertices[b][0])
            .then(vertices[a][1].total_cmp(&vertices[b][1]))
    });
    let turn = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (&vertices[o], &vertices[a], &vertices[b]);
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let eps = 1e-12 * scale * scale;
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], i) <= eps {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    if let Some(missing) = (0..vertices.len()).find(|i| !hull.contains(i)) {
        return Err(AsaError::NotAVertex(missing));
    }
    let m = hull.len();
    let mut facets = Vec::with_capacity(m);
    for k in 0..m {
        let (i, j) = (hull[k], hull[(k + 1) % m]);
        let edge = &vertices[j] - &vertices[i];
        let length = edge.norm();
        let normal = Vector::from_vec(vec![edge[1], -edge[0]]) / length;
        let offset = vertices[i].dot(&normal);
        facets.push(Facet { vertices: vec![i, j], normal, offset, area: length });
    }
    Ok(facets)
}

/// Incremental (beneath-beyond) hull in R^3, followed by merging of
/// coplanar triangles into polygonal facets.
fn hull_3d(vertices: &[Vector], scale: f64) -> Result<Vec<Facet>> {
    check_full_dimensional(vertices)?;
    let tol = PLANE_TOL * scale.max(1.0);
    let seed = initial_simplex(vertices)?;
    let interior = {
        let mut c = Vector::zeros(3);
        for &i in &seed {
            c += &vertices[i];
        }
        c / 4.0
    };
    let plane_of = |t: [usize; 3]| -> (Vector, f64) {
        let n = cross(
            &(&vertices[t[1]] - &vertices[t[0]]),
            &(&vertices[t[2]] - &vertices[t[0]]),
        )
        .normalize();
        let d = n.dot(&vertices[t[0]]);
        (n, d)
    };
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for skip in 0..4 {
        let mut t: Vec<usize> = seed
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != skip)
            .map(|(_, &i)| i)
            .collect();
        let (n, d) = plane_of([t[0], t[1], t[2]]);
        if n.dot(&interior) > d {
            t.swap(1, 2);
        }
        faces.push([t[0], t[1], t[2]]);
    }
    for (p, point) in vertices.iter().enumerate() {
        if seed.contains(&p) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|&f| {
                let (n, d) = plane_of(f);
                point.dot(&n) - d > tol
            })
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for (f, &vis) in faces.iter().zip(&visible) {
            if vis {
                for k in 0..3 {
                    *edges.entry((f[k], f[(k + 1) % 3])).or_default() += 1;
                }
            }
        }
        let mut horizon: Vec<(usize, usize)> = edges
            .keys()
            .filter(|&&(a, b)| !edges.contains_key(&(b, a)))
            .copied()
            .collect();
        horizon.sort_unstable();
        let mut next: Vec<[usize; 3]> = faces
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| !v)
            .map(|(f, _)| *f)
            .collect();
        for (a, b) in horizon {
            next.push([a, b, p]);
        }
        faces = next;
    }
    // Group triangles by supporting plane.
    let mut groups: Vec<(Vector, f64, Vec<usize>)> = Vec::new();
    for f in &faces {
        let (n, d) = plane_of(*f);
        match groups
            .iter_mut()
            .find(|(gn, gd, _)| (gn - &n).norm() < 1e-7 && (gd - d).abs() < 1e-7 * scale.max(1.0))
        {
            Some(g) => g.2.extend_from_slice(f),
            None => groups.push((n, d, f.to_vec())),
        }
    }
    let centroid = vertex_centroid(vertices);
    let mut facets = Vec::with_capacity(groups.len());
    for (_, _, mut idx) in groups {
        idx.sort_unstable();
        idx.dedup();
        facets.push(planar_facet(vertices, &idx, &centroid, scale)?);
    }
    Ok(facets)
}

fn initial_simplex(vertices: &[Vector]) -> Result<[usize; 4]> {
    let a = 0;
    let b = (0..vertices.len())
        .max_by(|&i, &j| {
            (&vertices[i] - &vertices[a])
                .norm()
                .total_cmp(&(&vertices[j] - &vertices[a]).norm())
        })
        .unwrap();
    let ab = &vertices[b] - &vertices[a];
    let c = (0..vertices.len())
        .max_by(|&i, &j| {
            cross(&ab, &(&vertices[i] - &vertices[a]))
                .norm()
                .total_cmp(&cross(&ab, &(&vertices[j] - &vertices[a])).norm())
        })
        .unwrap();
    let n = cross(&ab, &(&vertices[c] - &vertices[a]));
    let d = (0..vertices.len())
        .max_by(|&i, &j| {
            n.dot(&(&vertices[i] - &vertices[a]))
                .abs()
                .total_cmp(&n.dot(&(&vertices[j] - &vertices[a])).abs())
        })
        .unwrap();
    if n.dot(&(&vertices[d] - &vertices[a])).abs() <= 1e-12 * scale_of(vertices).powi(3) {
        return Err(AsaError::InvalidBody("vertices are coplanar".into()));
    }
    Ok([a, b, c, d])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn v(c: &[f64]) -> Vector {
        Vector::from_column_slice(c)
    }

    pub(crate) fn unit_cube() -> Polytope {
        let mut verts = Vec::new();
        for &x in &[-0.5, 0.5] {
            for &y in &[-0.5, 0.5] {
                for &z in &[-0.5, 0.5] {
                    verts.push(v(&[x, y, z]));
                }
            }
        }
        Polytope::from_vertices(verts).unwrap()
    }

    #[test]
    fn cube_hull_has_six_unit_facets() {
        let cube = unit_cube();
        let facets = cube.facets().unwrap();
        assert_eq!(facets.len(), 6);
        for f in facets {
            assert_eq!(f.vertices.len(), 4);
            assert_relative_eq!(f.area, 1.0, epsilon = 1e-12);
            assert_relative_eq!(f.offset, 0.5, epsilon = 1e-12);
        }
        assert_relative_eq!(cube.volume().unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cube_vertex_cones_are_octants() {
        let cube = unit_cube();
        for i in 0..8 {
            assert_relative_eq!(cube.normal_cone_solid_angle(i).unwrap(), PI / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn square_corners_have_quarter_turns() {
        let sq = Polytope::from_vertices(vec![
            v(&[0.0, 0.0]),
            v(&[1.0, 0.0]),
            v(&[1.0, 1.0]),
            v(&[0.0, 1.0]),
        ])
        .unwrap();
        for i in 0..4 {
            assert_relative_eq!(sq.normal_cone_solid_angle(i).unwrap(), PI / 2.0, epsilon = 1e-12);
        }
        assert_relative_eq!(sq.surface_area().unwrap(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn interior_point_is_rejected() {
        let err = Polytope::from_vertices(vec![
            v(&[0.0, 0.0]),
            v(&[1.0, 0.0]),
            v(&[0.0, 1.0]),
            v(&[0.2, 0.2]),
        ])
        .unwrap_err();
        assert!(matches!(err, AsaError::NotAVertex(_)));
    }

    #[test]
    fn explicit_facets_match_hull() {
        let cube = unit_cube();
        let idx: Vec<Vec<usize>> = cube.facets().unwrap().iter().map(|f| f.vertices.clone()).collect();
        let explicit = Polytope::with_facets(cube.vertices().to_vec(), idx).unwrap();
        assert_relative_eq!(explicit.volume().unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn diagonal_exposes_a_vertex_but_axis_does_not() {
        let cube = unit_cube();
        let d = v(&[1.0, 1.0, 1.0]).normalize();
        let i = cube.exposed_vertex(&d).unwrap();
        assert_eq!(cube.vertices()[i], v(&[0.5, 0.5, 0.5]));
        assert_eq!(cube.exposed_vertex(&v(&[1.0, 0.0, 0.0])), Err(AsaError::NonRegularNormal));
    }
}
