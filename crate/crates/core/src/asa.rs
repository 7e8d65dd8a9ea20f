//! L_p affine surface area through its four representations:
//!
//! * boundary integral `∫_{∂K} (H_K / h_K(ν_K)^{(p−1)n/p})^{p/(n+p)} dH^{n−1}`,
//! * sphere integral `∫_{S^{n−1}} (F_K / h_K^{p−1})^{n/(n+p)} dσ`,
//! * Lutwak's infimum over positive functions `h` on the sphere,
//! * the curvature-measure infimum over positive functions `g` on `∂K`,
//!
//! together with the functionals `L_1`, `L_2`, the Hölder-equality
//! minimiser and the truncated minimising sequence.

use crate::body::ConvexBody;
use crate::descent::{minimize, DescentOptions, DescentResult, TwoFactorObjective};
use crate::error::{AsaError, Result};
use crate::measures::{curvature_measure_c0, surface_area_measure, CurvatureMeasure, SurfaceAreaMeasure};
use crate::numeric::{pairwise_sum, relative_gap};
use crate::quadrature::{check_origin_interior, sphere_samples, Quadrature};
use serde::Serialize;

/// Relative slack allowed when checking that an infimum is not below the
/// corresponding integral.
pub const INFIMUM_DOMINANCE_TOL: f64 = 1e-9;

pub fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(AsaError::InvalidExponent(p))
    }
}

/// Exponent pair `(p/(n+p), n/(n+p))`.
fn powers(n: usize, p: f64) -> (f64, f64) {
    let n = n as f64;
    (p / (n + p), n / (n + p))
}

/// Positive function values on a sample set, with separate values on the
/// atoms of the relevant measure (polytope vertices for `g`, facet normals
/// for `h`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteFunction {
    pub values: Vec<f64>,
    pub atom_values: Vec<f64>,
}

impl DiscreteFunction {
    pub fn new(values: Vec<f64>, atom_values: Vec<f64>) -> Result<Self> {
        if values.iter().chain(&atom_values).any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(AsaError::NonPositiveFunction);
        }
        Ok(DiscreteFunction { values, atom_values })
    }

    pub fn constant(len: usize, atoms: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; len], vec![c; atoms])
    }

    fn check_shape(&self, len: usize, atoms: usize) -> Result<()> {
        if self.values.len() != len || self.atom_values.len() != atoms {
            return Err(AsaError::DimensionMismatch { expected: len, got: self.values.len() });
        }
        Ok(())
    }
}

/// Boundary mesh of a body with its `C_0` atoms; the domain of `g`.
#[derive(Debug, Clone)]
pub struct BoundaryMesh {
    pub dim: usize,
    pub c0: CurvatureMeasure,
}

impl BoundaryMesh {
    pub fn new(body: &ConvexBody, quad: Quadrature) -> Result<Self> {
        Ok(BoundaryMesh { dim: body.dim(), c0: curvature_measure_c0(body, quad)? })
    }

    pub fn len(&self) -> usize {
        self.c0.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c0.samples.is_empty()
    }

    pub fn atom_count(&self) -> usize {
        self.c0.atoms.len()
    }

    fn check_origin(&self) -> Result<()> {
        match self.c0.samples.iter().map(|s| s.h_at_nu).find(|h| !(*h > 0.0)) {
            Some(support) => Err(AsaError::OriginNotInterior { support }),
            None => Ok(()),
        }
    }
}

/// Sphere mesh of a body with its `S_K` atoms; the domain of `h`.
#[derive(Debug, Clone)]
pub struct SphereMesh {
    pub dim: usize,
    pub surface: SurfaceAreaMeasure,
    /// `h_K` at each atom direction.
    pub atom_support: Vec<f64>,
}

impl SphereMesh {
    pub fn new(body: &ConvexBody, quad: Quadrature) -> Result<Self> {
        let surface = surface_area_measure(body, quad)?;
        let atom_support = surface.atoms.iter().map(|a| body.support(&a.direction)).collect();
        Ok(SphereMesh { dim: body.dim(), surface, atom_support })
    }

    pub fn len(&self) -> usize {
        self.surface.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.surface.samples.is_empty()
    }

    fn check_origin(&self) -> Result<()> {
        check_origin_interior(&self.surface.samples)?;
        match self.atom_support.iter().find(|h| !(**h > 0.0)) {
            Some(&support) => Err(AsaError::OriginNotInterior { support }),
            None => Ok(()),
        }
    }
}

/// Boundary-integral representation on a prepared mesh.
pub fn asa_boundary_on(mesh: &BoundaryMesh, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if p != 1.0 {
        mesh.check_origin()?;
    }
    let n = mesh.dim as f64;
    let (a, _) = powers(mesh.dim, p);
    let terms: Vec<f64> = mesh
        .c0
        .samples
        .iter()
        .filter(|s| s.in_h_plus)
        .map(|s| (s.h_curv / s.h_at_nu.powf((p - 1.0) * n / p)).powf(a) * s.weight)
        .collect();
    Ok(pairwise_sum(&terms))
}

pub fn asa_boundary(body: &ConvexBody, p: f64, quad: Quadrature) -> Result<f64> {
    check_exponent(p)?;
    asa_boundary_on(&BoundaryMesh::new(body, quad)?, p)
}

/// Sphere-integral representation.
pub fn asa_sphere(body: &ConvexBody, p: f64, quad: Quadrature) -> Result<f64> {
    check_exponent(p)?;
    let samples = sphere_samples(body, quad)?;
    if p != 1.0 {
        check_origin_interior(&samples)?;
    }
    let (_, b) = powers(body.dim(), p);
    let terms: Vec<f64> = samples
        .iter()
        .filter(|s| s.in_f_plus)
        .map(|s| (s.f / s.h.powf(p - 1.0)).powf(b) * s.weight)
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `L_1(g) = (∫ g^{−n} H dH^{n−1})^{p/(n+p)} (∫ g^p h_K(ν)^{1−p} dH^{n−1})^{n/(n+p)}`.
pub fn functional_l1(mesh: &BoundaryMesh, g: &DiscreteFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    g.check_shape(mesh.len(), mesh.atom_count())?;
    if p != 1.0 {
        mesh.check_origin()?;
    }
    let n = mesh.dim as i32;
    let (a, b) = powers(mesh.dim, p);
    let s = &mesh.c0.samples;
    let first: Vec<f64> = s
        .iter()
        .zip(&g.values)
        .map(|(s, g)| g.powi(-n) * s.h_curv * s.weight)
        .collect();
    let second: Vec<f64> = s
        .iter()
        .zip(&g.values)
        .map(|(s, g)| g.powf(p) * s.h_at_nu.powf(1.0 - p) * s.weight)
        .collect();
    Ok(pairwise_sum(&first).powf(a) * pairwise_sum(&second).powf(b))
}

/// `L_2(g)`: as `L_1` but integrating against `C_0` (density and atoms) and
/// `C_{n−1}`.
pub fn functional_l2(mesh: &BoundaryMesh, g: &DiscreteFunction, p: f64) -> Result<f64> {
    let obj = cm_objective(mesh, p)?;
    g.check_shape(mesh.len(), mesh.atom_count())?;
    if p != 1.0 {
        mesh.check_origin()?;
    }
    let s: Vec<f64> = g.values.iter().chain(&g.atom_values).map(|v| v.ln()).collect();
    Ok(obj.value(&s))
}

/// Node layout: boundary samples first, then `C_0` atoms.
fn cm_objective(mesh: &BoundaryMesh, p: f64) -> Result<TwoFactorObjective> {
    check_exponent(p)?;
    let (a, b) = powers(mesh.dim, p);
    let c0 = &mesh.c0;
    let mut first: Vec<f64> = c0.samples.iter().zip(&c0.density).map(|(s, d)| d * s.weight).collect();
    let mut second: Vec<f64> = c0
        .samples
        .iter()
        .map(|s| s.h_at_nu.powf(1.0 - p) * s.weight)
        .collect();
    for atom in &c0.atoms {
        first.push(atom.mass);
        second.push(0.0);
    }
    Ok(TwoFactorObjective {
        first,
        first_exponent: -(mesh.dim as f64),
        first_power: a,
        second,
        second_exponent: p,
        second_power: b,
    })
}

/// Node layout: sphere samples first, then `S_K` atoms.
fn lutwak_objective(mesh: &SphereMesh, p: f64) -> Result<TwoFactorObjective> {
    check_exponent(p)?;
    let (a, b) = powers(mesh.dim, p);
    let surf = &mesh.surface;
    let mut first: Vec<f64> = surf.samples.iter().map(|s| s.weight).collect();
    let mut second: Vec<f64> = surf
        .samples
        .iter()
        .zip(&surf.density)
        .map(|(s, d)| s.h.powf(1.0 - p) * d * s.weight)
        .collect();
    for (atom, h) in surf.atoms.iter().zip(&mesh.atom_support) {
        first.push(0.0);
        second.push(h.powf(1.0 - p) * atom.mass);
    }
    Ok(TwoFactorObjective {
        first,
        first_exponent: mesh.dim as f64,
        first_power: a,
        second,
        second_exponent: -p,
        second_power: b,
    })
}

/// `g*(x) = h_K(ν_K(x))^{(p−1)/(n+p)} H_K(x)^{1/(n+p)}`, the point where
/// Hölder's inequality is tight so that `L_1(g*)` equals the boundary
/// integral.
pub fn analytic_minimizer(mesh: &BoundaryMesh, p: f64) -> Result<DiscreteFunction> {
    check_exponent(p)?;
    if mesh.atom_count() > 0 || mesh.c0.samples.iter().any(|s| !s.in_h_plus) {
        return Err(AsaError::NotSmooth);
    }
    let np = mesh.dim as f64 + p;
    let values = mesh
        .c0
        .samples
        .iter()
        .map(|s| s.h_at_nu.powf((p - 1.0) / np) * s.h_curv.powf(1.0 / np))
        .collect();
    DiscreteFunction::new(values, Vec::new())
}

/// `L_2(h_i)` for `i = 1..=i_max`, where `f_i` is `i` on the `C_0` atoms,
/// `g*` on `H^+` and `1/i` elsewhere, and `h_i` clamps `f_i` to `[1/i, i]`.
pub fn truncation_sequence(mesh: &BoundaryMesh, p: f64, i_max: usize) -> Result<Vec<(usize, f64)>> {
    check_exponent(p)?;
    let np = mesh.dim as f64 + p;
    let optimum: Vec<Option<f64>> = mesh
        .c0
        .samples
        .iter()
        .map(|s| s.in_h_plus.then(|| s.h_at_nu.powf((p - 1.0) / np) * s.h_curv.powf(1.0 / np)))
        .collect();
    (1..=i_max)
        .map(|i| {
            let top = i as f64;
            let bottom = 1.0 / top;
            let values = optimum
                .iter()
                .map(|g| g.unwrap_or(bottom).clamp(bottom, top))
                .collect();
            let g = DiscreteFunction::new(values, vec![top; mesh.atom_count()])?;
            Ok((i, functional_l2(mesh, &g, p)?))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfimumResult {
    pub value: f64,
    pub function: DiscreteFunction,
    pub trace: Vec<(usize, f64)>,
    pub converged: bool,
    pub iterations: usize,
}

impl InfimumResult {
    fn from_descent(res: DescentResult, samples: usize) -> Result<Self> {
        let values: Vec<f64> = res.log_values.iter().map(|s| s.exp()).collect();
        let (values, atoms) = values.split_at(samples);
        // Collapsing runs can push node values outside f64; keep them finite.
        let tame = |v: &[f64]| v.iter().map(|x| x.clamp(1e-300, 1e300)).collect();
        Ok(InfimumResult {
            value: res.value,
            function: DiscreteFunction::new(tame(values), tame(atoms))?,
            trace: res.trace,
            converged: res.converged,
            iterations: res.iterations,
        })
    }
}

/// Which starting point the variational routes use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum InitialGuess {
    /// Hölder-equality point on smooth bodies, constant 1 on polytopes.
    #[default]
    Analytic,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct InfimumOptions {
    pub descent: DescentOptions,
    pub init: InitialGuess,
}

/// Numerical infimum of `L_2` over positive functions on the boundary mesh.
pub fn asa_cm_infimum_on(mesh: &BoundaryMesh, p: f64, options: &InfimumOptions) -> Result<InfimumResult> {
    check_exponent(p)?;
    if p != 1.0 {
        mesh.check_origin()?;
    }
    let obj = cm_objective(mesh, p)?;
    let smooth = mesh.atom_count() == 0 && mesh.c0.samples.iter().all(|s| s.in_h_plus);
    let init: Vec<f64> = match options.init {
        InitialGuess::Analytic if smooth => analytic_minimizer(mesh, p)?.values.iter().map(|v| v.ln()).collect(),
        _ => vec![0.0; obj.len()],
    };
    InfimumResult::from_descent(minimize(&obj, init, &options.descent), mesh.len())
}

pub fn asa_cm_infimum(body: &ConvexBody, p: f64, quad: Quadrature, options: &InfimumOptions) -> Result<InfimumResult> {
    check_exponent(p)?;
    asa_cm_infimum_on(&BoundaryMesh::new(body, quad)?, p, options)
}

/// Numerical infimum of Lutwak's functional over positive functions on the
/// sphere mesh.
pub fn asa_lutwak_infimum_on(mesh: &SphereMesh, p: f64, options: &InfimumOptions) -> Result<InfimumResult> {
    check_exponent(p)?;
    mesh.check_origin()?;
    let obj = lutwak_objective(mesh, p)?;
    let np = mesh.dim as f64 + p;
    let init: Vec<f64> = match options.init {
        InitialGuess::Analytic => mesh
            .surface
            .samples
            .iter()
            .map(|s| if s.f > 0.0 { (s.f / s.h.powf(p - 1.0)).ln() / np } else { 0.0 })
            .chain(mesh.atom_support.iter().map(|_| 0.0))
            .collect(),
        InitialGuess::Constant => vec![0.0; obj.len()],
    };
    InfimumResult::from_descent(minimize(&obj, init, &options.descent), mesh.len())
}

pub fn asa_lutwak_infimum(body: &ConvexBody, p: f64, quad: Quadrature, options: &InfimumOptions) -> Result<InfimumResult> {
    check_exponent(p)?;
    asa_lutwak_infimum_on(&SphereMesh::new(body, quad)?, p, options)
}

/// All four representations at one exponent and resolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsaReport {
    pub p: f64,
    pub n: usize,
    pub resolution: usize,
    pub seed: u64,
    pub value_boundary: f64,
    pub value_sphere: f64,
    pub value_lutwak_inf: f64,
    pub value_cm_inf: f64,
    pub cm_converged: bool,
    pub lutwak_converged: bool,
    pub optimizer_trace_cm: Vec<(usize, f64)>,
    pub optimizer_trace_lutwak: Vec<(usize, f64)>,
    pub max_pairwise_rel_gap: f64,
}

impl AsaReport {
    pub fn values(&self) -> [f64; 4] {
        [self.value_boundary, self.value_sphere, self.value_lutwak_inf, self.value_cm_inf]
    }
}

/// Largest `|a − b| / max(|a|, |b|, 1)` over all pairs.
pub fn max_pairwise_gap(values: &[f64]) -> f64 {
    let mut gap: f64 = 0.0;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            gap = gap.max(relative_gap(values[i], values[j]));
        }
    }
    gap
}

pub fn compute_report(body: &ConvexBody, p: f64, quad: Quadrature, options: &InfimumOptions) -> Result<AsaReport> {
    check_exponent(p)?;
    let boundary = BoundaryMesh::new(body, quad)?;
    let sphere = SphereMesh::new(body, quad)?;
    if p != 1.0 {
        boundary.check_origin()?;
        sphere.check_origin()?;
    }
    let value_boundary = asa_boundary_on(&boundary, p)?;
    let value_sphere = asa_sphere(body, p, quad)?;
    let cm = asa_cm_infimum_on(&boundary, p, options)?;
    let lutwak = asa_lutwak_infimum_on(&sphere, p, options)?;
    let values = [value_boundary, value_sphere, lutwak.value, cm.value];
    Ok(AsaReport {
        p,
        n: body.dim(),
        resolution: quad.resolution,
        seed: quad.seed,
        value_boundary,
        value_sphere,
        value_lutwak_inf: lutwak.value,
        value_cm_inf: cm.value,
        cm_converged: cm.converged,
        lutwak_converged: lutwak.converged,
        optimizer_trace_cm: cm.trace,
        optimizer_trace_lutwak: lutwak.trace,
        max_pairwise_rel_gap: max_pairwise_gap(&values),
    })
}
