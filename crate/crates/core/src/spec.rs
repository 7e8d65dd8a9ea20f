//! JSON body specifications.
//!
//! ```json
//! {"kind": "ball", "dim": 3, "radius": 1.0}
//! {"kind": "ball", "dim": 2, "radius": 2.0, "center": [0.1, 0.0]}
//! {"kind": "ellipsoid", "dim": 3, "semi_axes": [1, 2, 3]}
//! {"kind": "ellipsoid", "dim": 2, "semi_axes": [1, 2], "rotation": [[0, -1], [1, 0]], "center": [0, 0]}
//! {"kind": "cube", "dim": 3, "side": 1.0}
//! {"kind": "polytope", "dim": 3, "vertices": [[...], ...], "facets": [[0, 1, 2], ...]}
//! {"kind": "transform", "dim": 3, "linear": [[1, 1, 0], [0, 1, 0], [0, 0, 1]], "translation": [0, 0, 0], "base": {...}}
//! {"kind": "quartic", "dim": 3, "amplitude": 0.3}
//! ```
//!
//! Matrices are row-major nested arrays. `facets` is optional; without it
//! the hull is computed. Unknown fields are rejected.

use crate::body::{quartic_oracle, ConvexBody};
use crate::error::{AsaError, Result};
use crate::numeric::{Matrix, Vector};
use crate::polytope::Polytope;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallSpec {
    pub dim: usize,
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipsoidSpec {
    pub dim: usize,
    pub semi_axes: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeSpec {
    pub dim: usize,
    pub side: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeSpec {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSpec {
    pub dim: usize,
    pub linear: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Vec<f64>>,
    pub base: Box<BodySpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuarticSpec {
    pub dim: usize,
    pub amplitude: f64,
}

// Deserialization dispatches on "kind" by hand: serde's internally tagged
// enums buffer numbers in a way that breaks with arbitrary-precision JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BodySpec {
    Ball(BallSpec),
    Ellipsoid(EllipsoidSpec),
    Cube(CubeSpec),
    Polytope(PolytopeSpec),
    Transform(TransformSpec),
    Quartic(QuarticSpec),
}

impl<'de> Deserialize<'de> for BodySpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let mut obj = serde_json::Map::<String, Value>::deserialize(d)?;
        let kind = match obj.remove("kind") {
            Some(Value::String(k)) => k,
            Some(_) => return Err(D::Error::custom("kind must be a string")),
            None => return Err(D::Error::missing_field("kind")),
        };
        let rest = Value::Object(obj);
        let r = match kind.as_str() {
            "ball" => serde_json::from_value(rest).map(BodySpec::Ball),
            "ellipsoid" => serde_json::from_value(rest).map(BodySpec::Ellipsoid),
            "cube" => serde_json::from_value(rest).map(BodySpec::Cube),
            "polytope" => serde_json::from_value(rest).map(BodySpec::Polytope),
            "transform" => serde_json::from_value(rest).map(BodySpec::Transform),
            "quartic" => serde_json::from_value(rest).map(BodySpec::Quartic),
            other => {
                return Err(D::Error::unknown_variant(
                    other,
                    &["ball", "ellipsoid", "cube", "polytope", "transform", "quartic"],
                ))
            }
        };
        r.map_err(D::Error::custom)
    }
}

fn vector(dim: usize, field: &str, v: &[f64]) -> Result<Vector> {
    if v.len() != dim {
        return Err(AsaError::Spec(format!("{field}: expected {dim} entries, got {}", v.len())));
    }
    Ok(Vector::from_column_slice(v))
}

fn matrix(dim: usize, field: &str, rows: &[Vec<f64>]) -> Result<Matrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(AsaError::Spec(format!("{field}: expected a {dim}x{dim} row-major matrix")));
    }
    Ok(Matrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

impl BodySpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| AsaError::Spec(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| AsaError::Spec(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn dim(&self) -> usize {
        match self {
            BodySpec::Ball(s) => s.dim,
            BodySpec::Ellipsoid(s) => s.dim,
            BodySpec::Cube(s) => s.dim,
            BodySpec::Polytope(s) => s.dim,
            BodySpec::Transform(s) => s.dim,
            BodySpec::Quartic(s) => s.dim,
        }
    }

    pub fn build(&self) -> Result<ConvexBody> {
        let n = self.dim();
        if n < 2 {
            return Err(AsaError::Spec(format!("dim must be at least 2, got {n}")));
        }
        match self {
            BodySpec::Ball(BallSpec { radius, center, .. }) => {
                let c = match center {
                    Some(c) => vector(n, "center", c)?,
                    None => Vector::zeros(n),
                };
                ConvexBody::ball(c, *radius)
            }
            BodySpec::Ellipsoid(EllipsoidSpec { semi_axes, rotation, center, .. }) => {
                let a = vector(n, "semi_axes", semi_axes)?;
                let r = match rotation {
                    Some(r) => matrix(n, "rotation", r)?,
                    None => Matrix::identity(n, n),
                };
                let c = match center {
                    Some(c) => vector(n, "center", c)?,
                    None => Vector::zeros(n),
                };
                ConvexBody::ellipsoid(a, r, c)
            }
            BodySpec::Cube(CubeSpec { side, .. }) => ConvexBody::cube(n, *side),
            BodySpec::Polytope(PolytopeSpec { vertices, facets, .. }) => {
                let verts = vertices
                    .iter()
                    .map(|v| vector(n, "vertices", v))
                    .collect::<Result<Vec<_>>>()?;
                let poly = match facets {
                    Some(f) => Polytope::with_facets(verts, f.clone())?,
                    None => Polytope::from_vertices(verts)?,
                };
                Ok(ConvexBody::polytope(poly))
            }
            BodySpec::Transform(TransformSpec { linear, translation, base, .. }) => {
                if base.dim() != n {
                    return Err(AsaError::Spec(format!("base: expected dim {n}, got {}", base.dim())));
                }
                let l = matrix(n, "linear", linear)?;
                let t = match translation {
                    Some(t) => vector(n, "translation", t)?,
                    None => Vector::zeros(n),
                };
                base.build()?.apply_linear(&l, &t)
            }
            BodySpec::Quartic(QuarticSpec { amplitude, .. }) => quartic_oracle(n, *amplitude),
        }
    }
}

pub fn parse_body(text: &str) -> Result<ConvexBody> {
    BodySpec::parse(text)?.build()
}
