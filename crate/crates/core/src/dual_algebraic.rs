//! Closed-form median-dual metrics.
//!
//! Dual hypervolumes come straight from the cell volumes, and each edge's
//! directed-hyperarea vector is accumulated from the facet normals of the
//! cells sharing that edge, scaled by `2 / (d (d + 1))`:
//!
//! ```text
//! n_jk = 2/(d(d+1)) * [ sum_{T ∋ j,k} n_j^T  +  1/2 sum_{B ∋ j,k, B ⊂ ∂Ω} n_B ]
//! ```
//!
//! `n_j^T` is the normal of the facet of `T` opposite `j`, pointing away from
//! `j`, with length equal to the facet volume; `n_B` is the outward normal of a
//! boundary facet. The factor reduces to 1/3, 1/6 and 1/10 in two, three and
//! four dimensions. Above four dimensions the same factor is used and the field
//! is tagged [`FieldMode::Conjecture`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{opposite_facet_normal, Vector};
use crate::mesh::{MeshError, Triangulation};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DualError {
    #[error("cell {0} is degenerate; its facet normals are undefined")]
    DegenerateCell(usize),
    #[error("lumped normal of the facet of edge {edge:?} in cell {cell} vanishes")]
    ZeroLumpedNormal { edge: (usize, usize), cell: usize },
    #[error("field does not belong to this mesh: {0}")]
    FieldMismatch(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

pub type Result<T> = std::result::Result<T, DualError>;

/// Whether the directed-area factor is backed by a proof in this dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldMode {
    Proven,
    Conjecture,
}

impl FieldMode {
    pub fn for_dimension(d: usize) -> Self {
        if d <= 4 {
            FieldMode::Proven
        } else {
            FieldMode::Conjecture
        }
    }
}

/// `2 / (d (d + 1))`.
pub fn directed_area_factor<T: Scalar>(d: usize) -> T {
    T::from_count(2) / T::from_count(d * (d + 1))
}

/// Per-node median-dual hypervolumes.
#[derive(Clone, Debug, PartialEq)]
pub struct DualVolumeField<T> {
    pub volumes: Vec<T>,
}

impl<T: Scalar> DualVolumeField<T> {
    pub fn total(&self) -> T {
        self.volumes.iter().fold(T::zero(), |acc, &v| acc + v)
    }
}

/// One directed-hyperarea vector per mesh edge `(j, k)`, `j < k`, pointing
/// from `j` towards `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectedAreaField<T> {
    pub dim: usize,
    pub edges: Vec<(usize, usize)>,
    pub vectors: Vec<Vector<T>>,
    pub factor: T,
    pub boundary_corrected: bool,
    pub mode: FieldMode,
}

impl<T: Scalar> DirectedAreaField<T> {
    /// Vector for the ordered pair `(j, k)`; `n_kj = -n_jk`.
    pub fn oriented(&self, j: usize, k: usize) -> Option<Vector<T>> {
        let (key, flip) = if j < k { ((j, k), false) } else { ((k, j), true) };
        let id = self.edges.binary_search(&key).ok()?;
        let v = self.vectors[id].clone();
        Some(if flip { -v } else { v })
    }

    pub(crate) fn check_mesh(&self, t: &Triangulation<T>) -> Result<()> {
        if self.dim != t.dim() {
            return Err(DualError::FieldMismatch(format!(
                "field dimension {} vs mesh dimension {}",
                self.dim,
                t.dim()
            )));
        }
        if self.edges.as_slice() != t.edges() {
            return Err(DualError::FieldMismatch(format!(
                "field has {} edges, mesh has {} (or the edge lists differ)",
                self.edges.len(),
                t.edges().len()
            )));
        }
        Ok(())
    }
}

/// Accumulation strategy for [`directed_area_field_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Accumulation {
    /// Reference mode: ascending cell id, then local vertex order.
    #[default]
    Sequential,
    /// Facet normals evaluated in parallel over cells, reduced in cell order.
    Parallel,
}

/// `V_j = 1/(d+1) * sum of |T| over cells containing j`.
pub fn dual_volumes<T: Scalar>(t: &Triangulation<T>) -> DualVolumeField<T> {
    let mut volumes = vec![T::zero(); t.num_points()];
    for (cell, &vol) in t.cells().iter().zip(t.cell_volumes()) {
        for &v in cell {
            volumes[v] = volumes[v] + vol;
        }
    }
    let share = T::recip_count(t.dim() + 1);
    for v in &mut volumes {
        *v = *v * share;
    }
    DualVolumeField { volumes }
}

/// Outward facet normals of a cell, indexed by the local vertex they face away from.
pub fn cell_facet_normals<T: Scalar>(t: &Triangulation<T>, c: usize) -> Result<Vec<Vector<T>>> {
    let geom = t.cell_geom(c);
    (0..=t.dim())
        .map(|a| {
            let n = opposite_facet_normal(&geom, a).map_err(MeshError::from)?;
            if n.degenerate {
                Err(DualError::DegenerateCell(c))
            } else {
                Ok(n.vector)
            }
        })
        .collect()
}

pub fn directed_area_field<T: Scalar>(t: &Triangulation<T>, boundary_correction: bool) -> Result<DirectedAreaField<T>> {
    directed_area_field_with(t, boundary_correction, Accumulation::Sequential)
}

pub fn directed_area_field_with<T: Scalar>(
    t: &Triangulation<T>,
    boundary_correction: bool,
    accumulation: Accumulation,
) -> Result<DirectedAreaField<T>> {
    let d = t.dim();
    let mode = FieldMode::for_dimension(d);
    if mode == FieldMode::Conjecture {
        log::info!("d = {d}: directed-area factor 2/(d(d+1)) is unproven here; field tagged conjecture-mode");
    }
    let factor: T = directed_area_factor(d);
    let normals: Vec<Vec<Vector<T>>> = match accumulation {
        Accumulation::Sequential => (0..t.num_cells())
            .map(|c| cell_facet_normals(t, c))
            .collect::<Result<_>>()?,
        Accumulation::Parallel => (0..t.num_cells())
            .into_par_iter()
            .map(|c| cell_facet_normals(t, c))
            .collect::<Result<_>>()?,
    };

    let mut vectors = vec![Vector::zeros(d); t.edges().len()];
    for (cell, cell_normals) in t.cells().iter().zip(&normals) {
        for (a, &j) in cell.iter().enumerate() {
            for &k in cell {
                if j < k {
                    let e = t.edge_id(j, k).expect("cell edges are mesh edges");
                    vectors[e].add_scaled(factor, &cell_normals[a]);
                }
            }
        }
    }

    if boundary_correction {
        let half = factor / T::from_count(2);
        for (b, bf) in t.boundary_facets().iter().enumerate() {
            let nb = t.boundary_facet_outward_normal(b)?;
            for (a, &j) in bf.vertices.iter().enumerate() {
                for &k in &bf.vertices[a + 1..] {
                    let e = t.edge_id(j, k).expect("facet edges are mesh edges");
                    vectors[e].add_scaled(half, &nb);
                }
            }
        }
    }

    Ok(DirectedAreaField {
        dim: d,
        edges: t.edges().to_vec(),
        vectors,
        factor,
        boundary_corrected: boundary_correction,
        mode,
    })
}

/// Directed-hyperarea vector for the ordered pair `(j, k)`, evaluated from the
/// cells around that edge with `j` as the base node. Independent of the
/// `j < k` storage convention used by [`directed_area_field`].
pub fn directed_area_for_pair<T: Scalar>(
    t: &Triangulation<T>,
    j: usize,
    k: usize,
    boundary_correction: bool,
) -> Result<Vector<T>> {
    let d = t.dim();
    let factor: T = directed_area_factor(d);
    let edge = t.edge_id(j, k).ok_or(MeshError::NotAnEdge(j, k))?;
    let mut n = Vector::zeros(d);
    for &c in t.edge_cells(edge) {
        let a = t.cells()[c].iter().position(|&v| v == j).expect("edge cell contains j");
        let geom = t.cell_geom(c);
        let nj = opposite_facet_normal(&geom, a).map_err(MeshError::from)?;
        if nj.degenerate {
            return Err(DualError::DegenerateCell(c));
        }
        n.add_scaled(factor, &nj.vector);
    }
    if boundary_correction {
        let half = factor / T::from_count(2);
        for &b in t.boundary_facets_at_edge(edge) {
            n.add_scaled(half, &t.boundary_facet_outward_normal(b)?);
        }
    }
    Ok(n)
}

/// Which side of the hypervolume identity to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityForm {
    /// `V_j = 1/(d^2 (d+1)) * sum_k sum_{T ∋ j,k} (p_k - p_j) . n_j^T`
    FirstLine,
    /// `V_j = 1/(2d) * sum_k (p_k - p_j) . n_jk`
    EdgeField,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityVolumes<T> {
    pub form: IdentityForm,
    pub volumes: DualVolumeField<T>,
    /// Nodes lying on the domain boundary. With [`IdentityForm::EdgeField`]
    /// the identity is only guaranteed at the other nodes.
    pub boundary_nodes: Vec<bool>,
}

pub fn dual_volume_via_identity<T: Scalar>(
    t: &Triangulation<T>,
    field: &DirectedAreaField<T>,
    form: IdentityForm,
) -> Result<IdentityVolumes<T>> {
    field.check_mesh(t)?;
    let d = t.dim();
    let mut volumes = vec![T::zero(); t.num_points()];
    match form {
        IdentityForm::FirstLine => {
            for c in 0..t.num_cells() {
                let normals = cell_facet_normals(t, c)?;
                let cell = &t.cells()[c];
                for (a, &j) in cell.iter().enumerate() {
                    for &k in cell.iter().filter(|&&k| k != j) {
                        let w = (t.point(k) - t.point(j)).dot(&normals[a]);
                        volumes[j] = volumes[j] + w;
                    }
                }
            }
            let scale = T::recip_count(d * d * (d + 1));
            volumes.iter_mut().for_each(|v| *v = *v * scale);
        }
        IdentityForm::EdgeField => {
            for (&(j, k), n) in field.edges.iter().zip(&field.vectors) {
                let w = (t.point(k) - t.point(j)).dot(n);
                volumes[j] = volumes[j] + w;
                volumes[k] = volumes[k] + w;
            }
            let scale = T::recip_count(2 * d);
            volumes.iter_mut().for_each(|v| *v = *v * scale);
        }
    }
    let boundary_nodes = (0..t.num_points()).map(|j| t.is_boundary_vertex(j)).collect();
    Ok(IdentityVolumes {
        form,
        volumes: DualVolumeField { volumes },
        boundary_nodes,
    })
}
