//! JSON file formats: meshes, dual metrics and verification reports.
//!
//! Indices are zero-based and edges are always written as `[j, k]` with
//! `j < k`. Floats go through serde_json's shortest round-trip formatting, so
//! reading a written file reproduces every coordinate exactly.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dual_algebraic::{DirectedAreaField, DualVolumeField, FieldMode};
use crate::geometry::Vector;
use crate::mesh::{BuildOptions, MeshError, Triangulation};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("coordinate {0} is not representable in the scalar type")]
    Unrepresentable(f64),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

pub type Result<T> = std::result::Result<T, IoError>;

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `value` as pretty JSON with a trailing newline.
pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    fs::write(path, to_json_string(value)?).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn to_json_string<S: Serialize>(value: &S) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// `{dimension, points, cells}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshFile {
    pub dimension: usize,
    pub points: Vec<Vec<f64>>,
    pub cells: Vec<Vec<usize>>,
}

impl MeshFile {
    pub fn from_triangulation<T: Scalar>(t: &Triangulation<T>) -> Self {
        Self {
            dimension: t.dim(),
            points: t
                .points()
                .iter()
                .map(|p| p.coords().iter().map(|c| c.to_f64_lossy()).collect())
                .collect(),
            cells: t.cells().to_vec(),
        }
    }

    pub fn to_triangulation<T: Scalar>(&self, options: BuildOptions) -> Result<Triangulation<T>> {
        let points = self
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&c| T::from_f64(c).ok_or(IoError::Unrepresentable(c)))
                    .collect::<Result<Vec<T>>>()
                    .map(Vector::new)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Triangulation::with_options(
            self.dimension,
            points,
            self.cells.clone(),
            options,
        )?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json_str(&read_text(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectedAreaEntry {
    pub edge: [usize; 2],
    pub n: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualMeta {
    pub factor: f64,
    pub mode: FieldMode,
    pub boundary_corrected: bool,
    pub points: usize,
    pub cells: usize,
    pub edges: usize,
}

/// `{dimension, volumes, directed_areas, meta}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualFile {
    pub dimension: usize,
    pub volumes: Vec<f64>,
    pub directed_areas: Vec<DirectedAreaEntry>,
    pub meta: DualMeta,
}

impl DualFile {
    pub fn new<T: Scalar>(t: &Triangulation<T>, volumes: &DualVolumeField<T>, field: &DirectedAreaField<T>) -> Self {
        Self {
            dimension: t.dim(),
            volumes: volumes.volumes.iter().map(|v| v.to_f64_lossy()).collect(),
            directed_areas: field
                .edges
                .iter()
                .zip(&field.vectors)
                .map(|(&(j, k), n)| DirectedAreaEntry {
                    edge: [j, k],
                    n: n.coords().iter().map(|c| c.to_f64_lossy()).collect(),
                })
                .collect(),
            meta: DualMeta {
                factor: field.factor.to_f64_lossy(),
                mode: field.mode,
                boundary_corrected: field.boundary_corrected,
                points: t.num_points(),
                cells: t.num_cells(),
                edges: t.edges().len(),
            },
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&read_text(path)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual_algebraic::{directed_area_field, dual_volumes};
    use crate::generate::kuhn_grid;

    #[test]
    fn malformed_json_reports_location() {
        let err = MeshFile::from_json_str("{\n  \"dimension\": 2,\n  \"points\": [oops]\n}").unwrap_err();
        match err {
            IoError::Json { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(MeshFile::from_json_str(r#"{"dimension":2,"points":[],"cells":[],"extra":1}"#).is_err());
    }

    #[test]
    fn invalid_mesh_surfaces_mesh_error() {
        let f = MeshFile {
            dimension: 2,
            points: vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            cells: vec![vec![0, 1, 1]],
        };
        assert!(matches!(
            f.to_triangulation::<f64>(BuildOptions::default()),
            Err(IoError::Mesh(MeshError::RepeatedVertex { cell: 0, vertex: 1 }))
        ));
    }

    #[test]
    fn dual_file_layout() {
        let t = kuhn_grid::<f64>(2, 1, 0.0, 0).unwrap();
        let field = directed_area_field(&t, true).unwrap();
        let dual = DualFile::new(&t, &dual_volumes(&t), &field);
        let json: serde_json::Value = serde_json::from_str(&to_json_string(&dual).unwrap()).unwrap();
        assert_eq!(json["dimension"], 2);
        assert_eq!(json["volumes"].as_array().unwrap().len(), 4);
        assert_eq!(json["directed_areas"][0]["edge"], serde_json::json!([0, 1]));
        assert_eq!(json["meta"]["mode"], "proven");
    }
}
