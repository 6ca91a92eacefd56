//! JSON description of a domain to verify.
//!
//! ```json
//! {
//!   "name": "ellipse",
//!   "geometry": {"type": "ellipse", "a": 1.2, "b": 0.8333, "angle": 0.0},
//!   "ambient": {"model": "euclidean", "curvature": 0.0},
//!   "comparison": {"kappa": 0.0, "K": 0.0},
//!   "mesh": {"h": 0.1}
//! }
//! ```
//!
//! `comparison` defaults to `kappa = K = ambient curvature`. Shapes are given
//! in the tangent plane at `geometry.center` (default the origin), see
//! [`steklov_core::fem2d::Geometry`].

use std::path::Path;

use serde::{Deserialize, Serialize};
use steklov_core::fem2d::{Ambient, DomainSpec, Geometry};

use crate::error::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub geometry: GeometrySpec,
    pub ambient: AmbientSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
    pub mesh: MeshSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometrySpec {
    #[serde(flatten)]
    pub shape: Shape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Shape {
    Disk {
        #[serde(alias = "R")]
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        angle: f64,
    },
    Annulus {
        #[serde(alias = "inner")]
        r_in: f64,
        #[serde(alias = "outer")]
        r_out: f64,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    /// `r(theta) = a0 + sum_k cos[k-1] cos(k theta) + sin[k-1] sin(k theta)`.
    Polar {
        a0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Euclidean,
    Poincare,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    pub model: Model,
    #[serde(default)]
    pub curvature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Comparison {
    pub kappa: f64,
    #[serde(rename = "K")]
    pub big_k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSpec {
    pub h: f64,
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Spec(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text).map_err(|e| match e {
            HarnessError::Spec(msg) => HarnessError::Spec(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// `name`, or the file stem of `path` when the spec carries none.
    pub fn display_name(&self, path: Option<&Path>) -> String {
        self.name
            .clone()
            .or_else(|| path.and_then(|p| p.file_stem()).map(|s| s.to_string_lossy().into_owned()))
            .unwrap_or_else(|| "unnamed".to_string())
    }

    pub fn ambient(&self) -> Result<Ambient, HarnessError> {
        match self.ambient.model {
            Model::Euclidean if self.ambient.curvature == 0.0 => Ok(Ambient::Euclidean),
            Model::Euclidean => Err(HarnessError::Spec("the euclidean model has curvature 0".into())),
            Model::Poincare => {
                Ambient::poincare(self.ambient.curvature).map_err(|e| HarnessError::Spec(e.to_string()))
            }
        }
    }

    /// `(kappa, K)`, defaulting to the ambient curvature.
    pub fn comparison(&self) -> (f64, f64) {
        match self.comparison {
            Some(c) => (c.kappa, c.big_k),
            None => (self.ambient.curvature, self.ambient.curvature),
        }
    }

    /// Validated core description of the domain.
    pub fn domain(&self) -> Result<DomainSpec, HarnessError> {
        let geometry = match &self.geometry.shape {
            Shape::Disk { radius } => Geometry::Disk { radius: *radius },
            Shape::Ellipse { a, b, angle } => Geometry::Ellipse { a: *a, b: *b, angle: *angle },
            Shape::Annulus { r_in, r_out } => Geometry::Annulus { inner: *r_in, outer: *r_out },
            Shape::Polygon { vertices } => Geometry::Polygon { vertices: vertices.clone() },
            Shape::Polar { a0, cos, sin } => Geometry::Polar { a0: *a0, cos: cos.clone(), sin: sin.clone() },
        };
        let (kappa, big_k) = self.comparison();
        let invalid = |e: steklov_core::Error| HarnessError::Spec(e.to_string());
        let spec = DomainSpec::new(geometry, self.ambient()?, kappa, big_k, self.mesh.h).map_err(invalid)?;
        match self.geometry.center {
            Some(c) => spec.with_center(c).map_err(invalid),
            None => Ok(spec),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_aliases() {
        let s = SpecFile::from_json(
            r#"{"geometry": {"type": "annulus", "inner": 0.5, "outer": 1},
                "ambient": {"model": "poincare", "curvature": -1},
                "mesh": {"h": 0.1}}"#,
        )
        .unwrap();
        assert_eq!(s.comparison(), (-1.0, -1.0));
        let d = s.domain().unwrap();
        assert_eq!(d.geometry, Geometry::Annulus { inner: 0.5, outer: 1.0 });
        assert_eq!(s.display_name(Some(Path::new("x/ring.json"))), "ring");
    }

    #[test]
    fn rejects_bad_specs() {
        let flat_with_curvature = r#"{"geometry": {"type": "disk", "radius": 1},
            "ambient": {"model": "euclidean", "curvature": -1}, "mesh": {"h": 0.1}}"#;
        assert!(SpecFile::from_json(flat_with_curvature).unwrap().domain().is_err());
        let wrong_order = r#"{"geometry": {"type": "disk", "radius": 1},
            "ambient": {"model": "euclidean"}, "comparison": {"kappa": -1, "K": 0}, "mesh": {"h": 0.1}}"#;
        assert!(SpecFile::from_json(wrong_order).unwrap().domain().is_err());
        assert!(SpecFile::from_json(r#"{"geometry": {"type": "blob"}}"#).is_err());
    }
}
