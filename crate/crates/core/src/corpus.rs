//! Test-corpus files: a polynomial, optionally its known roots, and named
//! initial points.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::MonicPolynomial;
use crate::simul::ApproximationVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedPoint {
    pub name: String,
    #[serde(with = "crate::fmt::complex_vec")]
    pub points: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusInstance {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub polynomial: MonicPolynomial,
    #[serde(
        default,
        with = "crate::fmt::opt_complex_vec",
        skip_serializing_if = "Option::is_none"
    )]
    pub roots: Option<Vec<Complex64>>,
    pub initial_points: Vec<NamedPoint>,
    /// Free-form labels such as `clustered` or `double-root`.
    #[serde(default)]
    pub tags: Vec<String>,
}

impl CorpusInstance {
    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    pub fn point(&self, name: &str) -> Option<&NamedPoint> {
        self.initial_points.iter().find(|p| p.name == name)
    }

    pub fn vector(&self, point: &NamedPoint) -> Result<ApproximationVector> {
        if point.points.len() != self.polynomial.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.polynomial.degree(),
                got: point.points.len(),
            });
        }
        ApproximationVector::new(point.points.clone())
    }
}

pub fn load_instance(path: &Path) -> Result<CorpusInstance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// All `*.json` instances in `dir`, ordered by file name.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusInstance>> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| load_instance(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_instance() {
        let text = r#"{
            "name": "quad",
            "polynomial": {"degree": 2, "coeffs": [[-1, 0], [0, 0]]},
            "initial_points": [{"name": "near", "points": [[1.2, 0], [-0.8, 0]]}]
        }"#;
        let inst: CorpusInstance = serde_json::from_str(text).unwrap();
        assert!(inst.roots.is_none() && inst.tags.is_empty());
        let v = inst.vector(inst.point("near").unwrap()).unwrap();
        assert_eq!(v.len(), 2);
        let again: CorpusInstance =
            serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn rejects_wrong_point_length() {
        let text = r#"{
            "name": "quad",
            "polynomial": {"degree": 2, "coeffs": [[-1, 0], [0, 0]]},
            "initial_points": [{"name": "bad", "points": [[1.2, 0]]}]
        }"#;
        let inst: CorpusInstance = serde_json::from_str(text).unwrap();
        assert!(inst.vector(&inst.initial_points[0]).is_err());
    }
}
