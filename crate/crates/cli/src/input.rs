//! Reading polynomial and initial-point files.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use simulroots::corpus::{CorpusInstance, NamedPoint};
use simulroots::{ApproximationVector, Error, MonicPolynomial, Result};

/// A polynomial file, or a corpus instance holding one.
#[derive(Deserialize)]
#[serde(untagged)]
enum PolySource {
    Instance(CorpusInstance),
    Bare(MonicPolynomial),
}

/// Accepted initial-point layouts.
#[derive(Deserialize)]
#[serde(untagged)]
enum PointSource {
    Named(NamedPoint),
    Wrapped {
        #[serde(with = "simulroots::fmt::complex_vec")]
        points: Vec<Complex64>,
    },
    Bare(#[serde(with = "simulroots::fmt::complex_vec")] Vec<Complex64>),
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, what: &str) -> Result<T> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Error::Parse(format!("{}: not a valid {what}: {e}", path.display())))
}

pub struct Problem {
    pub polynomial: MonicPolynomial,
    pub instance: Option<CorpusInstance>,
}

pub fn load_problem(path: &Path) -> Result<Problem> {
    Ok(
        match parse::<PolySource>(path, "polynomial or corpus instance")? {
            PolySource::Instance(inst) => Problem {
                polynomial: inst.polynomial.clone(),
                instance: Some(inst),
            },
            PolySource::Bare(polynomial) => Problem {
                polynomial,
                instance: None,
            },
        },
    )
}

/// Initial point from a file, a named point of the corpus instance, or `None`.
pub fn load_point(
    problem: &Problem,
    file: Option<&Path>,
    name: Option<&str>,
) -> Result<Option<ApproximationVector>> {
    let points = match (file, name) {
        (Some(path), _) => match parse::<PointSource>(path, "initial point")? {
            PointSource::Named(p) => p.points,
            PointSource::Wrapped { points } | PointSource::Bare(points) => points,
        },
        (None, Some(name)) => {
            let inst = problem
                .instance
                .as_ref()
                .ok_or_else(|| Error::Parse("--point needs a corpus instance file".into()))?;
            inst.point(name)
                .ok_or_else(|| {
                    Error::Parse(format!("instance {} has no point {name:?}", inst.name))
                })?
                .points
                .clone()
        }
        (None, None) => return Ok(None),
    };
    let n = problem.polynomial.degree();
    if points.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: points.len(),
        });
    }
    ApproximationVector::new(points).map(Some)
}
