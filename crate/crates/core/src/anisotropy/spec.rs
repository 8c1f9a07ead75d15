//! JSON form of an anisotropy.
//!
//! ```json
//! {"kind": "support_polytope", "vertices": [[1,1],[-1,1],[-1,-1],[1,-1]], "dimension": 2}
//! ```

use serde::{Deserialize, Serialize};

use super::Anisotropy;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnisotropyKind {
    Euclidean,
    SupportPolytope,
    Quadratic,
    ShiftedEuclidean,
}

impl AnisotropyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Euclidean => "euclidean",
            Self::SupportPolytope => "support_polytope",
            Self::Quadratic => "quadratic",
            Self::ShiftedEuclidean => "shifted_euclidean",
        }
    }
}

fn default_dimension() -> usize {
    2
}

/// Serialized anisotropy. Only the field belonging to `kind` may be present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnisotropySpec {
    pub kind: AnisotropyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<f64>>,
    #[serde(default = "default_dimension")]
    pub dimension: usize,
}

impl AnisotropySpec {
    pub fn euclidean() -> Self {
        Self {
            kind: AnisotropyKind::Euclidean,
            vertices: None,
            matrix: None,
            shift: None,
            dimension: 2,
        }
    }

    pub fn build<T: Scalar>(&self) -> Result<Anisotropy<T>> {
        let conv = |v: &Vec<f64>| v.iter().map(|&x| lit::<T>(x)).collect::<Vec<T>>();
        let field = |name: &str, present: bool, wanted: bool| -> Result<()> {
            match (present, wanted) {
                (true, false) => Err(Error::InvalidArgument(format!(
                    "field `{name}` is not allowed for kind `{}`",
                    self.kind.as_str()
                ))),
                (false, true) => Err(Error::InvalidArgument(format!(
                    "kind `{}` requires field `{name}`",
                    self.kind.as_str()
                ))),
                _ => Ok(()),
            }
        };
        use AnisotropyKind::*;
        field("vertices", self.vertices.is_some(), self.kind == SupportPolytope)?;
        field("matrix", self.matrix.is_some(), self.kind == Quadratic)?;
        field("shift", self.shift.is_some(), self.kind == ShiftedEuclidean)?;

        let phi = match self.kind {
            Euclidean => Anisotropy::euclidean(self.dimension)?,
            SupportPolytope => {
                Anisotropy::support_polytope(self.vertices.as_ref().unwrap().iter().map(conv).collect())?
            }
            Quadratic => Anisotropy::quadratic(self.matrix.as_ref().unwrap().iter().map(conv).collect())?,
            ShiftedEuclidean => Anisotropy::shifted_euclidean(conv(self.shift.as_ref().unwrap()))?,
        };
        if phi.dim != self.dimension {
            return Err(Error::InvalidArgument(format!(
                "data has dimension {} but `dimension` is {}",
                phi.dim, self.dimension
            )));
        }
        Ok(phi)
    }
}

impl<T: Scalar> From<&Anisotropy<T>> for AnisotropySpec {
    fn from(phi: &Anisotropy<T>) -> Self {
        let f = |v: &[T]| v.iter().map(|&x| to_f64(x)).collect::<Vec<f64>>();
        let n = phi.dim;
        Self {
            kind: phi.kind(),
            vertices: phi.polytope_vertices().map(|vs| vs.iter().map(|v| f(v)).collect()),
            matrix: phi.matrix().map(|m| m.chunks(n).map(f).collect()),
            shift: phi.shift().map(f),
            dimension: n,
        }
    }
}

impl<T: Scalar> TryFrom<&AnisotropySpec> for Anisotropy<T> {
    type Error = Error;
    fn try_from(spec: &AnisotropySpec) -> Result<Self> {
        spec.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anisotropy::Gauge;

    #[test]
    fn parses_each_kind() {
        let cases = [
            r#"{"kind":"euclidean"}"#,
            r#"{"kind":"support_polytope","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]],"dimension":2}"#,
            r#"{"kind":"quadratic","matrix":[[2,0],[0,1]]}"#,
            r#"{"kind":"shifted_euclidean","shift":[0,0.25]}"#,
        ];
        for c in cases {
            let spec: AnisotropySpec = serde_json::from_str(c).unwrap();
            let phi: Anisotropy<f64> = spec.build().unwrap();
            assert!(phi.eval(&[0.0, 1.0]) > 0.0);
            let back = AnisotropySpec::from(&phi);
            assert_eq!(back.kind, spec.kind);
        }
    }

    #[test]
    fn rejects_unknown_and_misplaced_fields() {
        assert!(serde_json::from_str::<AnisotropySpec>(r#"{"kind":"euclidean","radius":1}"#).is_err());
        let spec: AnisotropySpec =
            serde_json::from_str(r#"{"kind":"euclidean","shift":[0,0.1]}"#).unwrap();
        assert!(spec.build::<f64>().is_err());
        let spec: AnisotropySpec = serde_json::from_str(r#"{"kind":"quadratic"}"#).unwrap();
        assert!(spec.build::<f64>().is_err());
        let spec: AnisotropySpec =
            serde_json::from_str(r#"{"kind":"shifted_euclidean","shift":[0,0.1],"dimension":3}"#).unwrap();
        assert!(spec.build::<f64>().is_err());
    }
}
