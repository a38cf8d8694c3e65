//! JSON file formats for bodies, zonotopes, measures and direction sets.

use std::fs;
use std::path::Path;

use logbm_core::{Direction, EvenDiscreteMeasure, SymmetricPolytope, Zonotope};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolytopeJson {
    pub dim: usize,
    pub normals: Vec<Vec<f64>>,
    pub supports: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ZonotopeJson {
    pub dim: usize,
    pub generators: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MeasureJson {
    pub dim: usize,
    pub directions: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

/// A bare direction set; the `weights` of a measure file are ignored.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DirectionsJson {
    pub dim: usize,
    pub directions: Vec<Vec<f64>>,
}

impl From<&SymmetricPolytope> for PolytopeJson {
    fn from(p: &SymmetricPolytope) -> Self {
        PolytopeJson {
            dim: p.dim(),
            normals: p.normals().iter().map(|d| d.coords().to_vec()).collect(),
            supports: p.supports().to_vec(),
        }
    }
}

impl From<&EvenDiscreteMeasure> for MeasureJson {
    fn from(m: &EvenDiscreteMeasure) -> Self {
        MeasureJson {
            dim: m.dim(),
            directions: m.directions().iter().map(|d| d.coords().to_vec()).collect(),
            weights: m.weights().to_vec(),
        }
    }
}

fn check_dims(dim: usize, rows: &[Vec<f64>]) -> Result<()> {
    match rows.iter().find(|r| r.len() != dim) {
        Some(r) => Err(logbm_core::Error::DimensionMismatch {
            expected: dim,
            found: r.len(),
        }
        .into()),
        None => Ok(()),
    }
}

impl PolytopeJson {
    pub fn to_polytope(&self) -> Result<SymmetricPolytope> {
        check_dims(self.dim, &self.normals)?;
        if self.normals.len() != self.supports.len() {
            return Err(CliError::Config(format!(
                "{} normals but {} supports",
                self.normals.len(),
                self.supports.len()
            )));
        }
        let dirs = self
            .normals
            .iter()
            .map(|v| Direction::new(v))
            .collect::<logbm_core::Result<Vec<_>>>()?;
        Ok(logbm_core::wulff_shape(&dirs, &self.supports)?)
    }
}

impl ZonotopeJson {
    pub fn to_zonotope(&self) -> Result<Zonotope> {
        check_dims(self.dim, &self.generators)?;
        Ok(Zonotope::new(self.generators.clone())?)
    }
}

impl MeasureJson {
    pub fn to_measure(&self) -> Result<EvenDiscreteMeasure> {
        check_dims(self.dim, &self.directions)?;
        Ok(EvenDiscreteMeasure::from_raw(self.dim, &self.directions, &self.weights)?)
    }
}

impl DirectionsJson {
    /// Canonicalized, with antipodal duplicates merged.
    pub fn to_directions(&self) -> Result<Vec<Direction>> {
        check_dims(self.dim, &self.directions)?;
        let mut out: Vec<Direction> = Vec::new();
        for v in &self.directions {
            let d = Direction::new(v)?;
            if logbm_core::convex::find_direction(&out, &d, logbm_core::convex::DIRECTION_TOL).is_none() {
                out.push(d);
            }
        }
        Ok(out)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_polytope(path: &Path) -> Result<SymmetricPolytope> {
    read_json::<PolytopeJson>(path)?.to_polytope()
}

pub fn read_zonotope(path: &Path) -> Result<Zonotope> {
    read_json::<ZonotopeJson>(path)?.to_zonotope()
}

pub fn read_measure(path: &Path) -> Result<EvenDiscreteMeasure> {
    read_json::<MeasureJson>(path)?.to_measure()
}

pub fn read_directions(path: &Path) -> Result<Vec<Direction>> {
    read_json::<DirectionsJson>(path)?.to_directions()
}

pub fn write_polytope(path: &Path, p: &SymmetricPolytope) -> Result<()> {
    write_json(path, &PolytopeJson::from(p))
}
