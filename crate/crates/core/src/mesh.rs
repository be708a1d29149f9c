//! Validated simplicial triangulation with the incidence indices needed by the
//! dual computations.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::geometry::{
    is_degenerate_volume, opposite_facet_normal, signed_volume_of, GeometryError, SimplexGeom, Vector,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("mesh has no points")]
    NoPoints,
    #[error("mesh has no cells")]
    NoCells,
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("point {point} has {found} coordinates, expected {expected}")]
    PointDimension {
        point: usize,
        expected: usize,
        found: usize,
    },
    #[error("cell {cell} has {found} vertices, expected {expected}")]
    CellArity {
        cell: usize,
        expected: usize,
        found: usize,
    },
    #[error("cell {cell} references point {index}, but the mesh has {points} points")]
    IndexOutOfRange { cell: usize, index: usize, points: usize },
    #[error("cell {cell} lists vertex {vertex} more than once")]
    RepeatedVertex { cell: usize, vertex: usize },
    #[error("cell {cell} is degenerate (hypervolume {volume:e})")]
    DegenerateCell { cell: usize, volume: f64 },
    #[error("facet {vertices:?} is shared by {} cells {cells:?}; mesh is not a pseudo-manifold", cells.len())]
    NonManifoldFacet { vertices: Vec<usize>, cells: Vec<usize> },
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("({0}, {1}) is not an edge of the mesh")]
    NotAnEdge(usize, usize),
    #[error("facet {0} is not a boundary facet")]
    NotABoundaryFacet(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T> = std::result::Result<T, MeshError>;

/// Controls how strictly [`Triangulation::with_options`] validates its input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Reject degenerate cells and facets with more than two incident cells.
    pub strict: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { strict: true }
    }
}

/// A `(d-1)`-facet keyed by its sorted global vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub vertices: Vec<usize>,
    pub cells: Vec<usize>,
}

impl Facet {
    pub fn is_boundary(&self) -> bool {
        self.cells.len() == 1
    }
}

/// A facet with exactly one incident cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryFacet {
    /// Index into [`Triangulation::facets`].
    pub facet: usize,
    pub cell: usize,
    /// Global index of the cell vertex not on the facet.
    pub opposite: usize,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Triangulation<T> {
    dim: usize,
    points: Vec<Vector<T>>,
    cells: Vec<Vec<usize>>,
    cell_volumes: Vec<T>,
    edges: Vec<(usize, usize)>,
    edge_lookup: HashMap<(usize, usize), usize>,
    vertex_cells: Vec<Vec<usize>>,
    edge_cells: Vec<Vec<usize>>,
    vertex_neighbors: Vec<Vec<usize>>,
    facets: Vec<Facet>,
    boundary: Vec<BoundaryFacet>,
    vertex_boundary: Vec<Vec<usize>>,
    edge_boundary: Vec<Vec<usize>>,
}

impl<T: Scalar> Triangulation<T> {
    /// Builds and strictly validates a triangulation.
    pub fn new(dim: usize, points: Vec<Vector<T>>, cells: Vec<Vec<usize>>) -> Result<Self> {
        Self::with_options(dim, points, cells, BuildOptions::default())
    }

    pub fn with_options(
        dim: usize,
        points: Vec<Vector<T>>,
        cells: Vec<Vec<usize>>,
        options: BuildOptions,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(MeshError::DimensionTooSmall(dim));
        }
        if points.is_empty() {
            return Err(MeshError::NoPoints);
        }
        if cells.is_empty() {
            return Err(MeshError::NoCells);
        }
        for (i, p) in points.iter().enumerate() {
            if p.dim() != dim {
                return Err(MeshError::PointDimension {
                    point: i,
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        let mut cell_volumes = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            if cell.len() != dim + 1 {
                return Err(MeshError::CellArity {
                    cell: c,
                    expected: dim + 1,
                    found: cell.len(),
                });
            }
            for (a, &v) in cell.iter().enumerate() {
                if v >= points.len() {
                    return Err(MeshError::IndexOutOfRange {
                        cell: c,
                        index: v,
                        points: points.len(),
                    });
                }
                if cell[..a].contains(&v) {
                    return Err(MeshError::RepeatedVertex { cell: c, vertex: v });
                }
            }
            let verts: Vec<Vector<T>> = cell.iter().map(|&v| points[v].clone()).collect();
            let volume = signed_volume_of(&verts).abs();
            if options.strict {
                let max_edge_sq = SimplexGeom::new(verts)?.max_edge_length_squared();
                if is_degenerate_volume(volume, max_edge_sq, dim) {
                    return Err(MeshError::DegenerateCell {
                        cell: c,
                        volume: volume.to_f64_lossy(),
                    });
                }
            }
            cell_volumes.push(volume);
        }

        let n = points.len();
        let mut vertex_cells = vec![Vec::new(); n];
        let mut edge_map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let mut facet_map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                vertex_cells[v].push(c);
            }
            for (a, &j) in cell.iter().enumerate() {
                for &k in &cell[a + 1..] {
                    edge_map.entry(ordered(j, k)).or_default().push(c);
                }
            }
            for skip in 0..cell.len() {
                let mut key: Vec<usize> = cell
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                key.sort_unstable();
                facet_map.entry(key).or_default().push(c);
            }
        }

        if options.strict {
            if let Some((vertices, cells)) = facet_map.iter().find(|(_, cs)| cs.len() > 2) {
                return Err(MeshError::NonManifoldFacet {
                    vertices: vertices.clone(),
                    cells: cells.clone(),
                });
            }
        }

        let mut edges = Vec::with_capacity(edge_map.len());
        let mut edge_cells = Vec::with_capacity(edge_map.len());
        let mut edge_lookup = HashMap::with_capacity(edge_map.len());
        let mut vertex_neighbors = vec![Vec::new(); n];
        for (id, (e, cs)) in edge_map.into_iter().enumerate() {
            edge_lookup.insert(e, id);
            vertex_neighbors[e.0].push(e.1);
            vertex_neighbors[e.1].push(e.0);
            edges.push(e);
            edge_cells.push(cs);
        }
        for nbrs in &mut vertex_neighbors {
            nbrs.sort_unstable();
        }

        let facets: Vec<Facet> = facet_map
            .into_iter()
            .map(|(vertices, cells)| Facet { vertices, cells })
            .collect();
        let mut boundary = Vec::new();
        let mut vertex_boundary = vec![Vec::new(); n];
        let mut edge_boundary = vec![Vec::new(); edges.len()];
        for (f, facet) in facets.iter().enumerate() {
            if !facet.is_boundary() {
                continue;
            }
            let cell = facet.cells[0];
            let opposite = *cells[cell]
                .iter()
                .find(|v| !facet.vertices.contains(v))
                .expect("cell has a vertex off its facet");
            let b = boundary.len();
            for (a, &j) in facet.vertices.iter().enumerate() {
                vertex_boundary[j].push(b);
                for &k in &facet.vertices[a + 1..] {
                    edge_boundary[edge_lookup[&ordered(j, k)]].push(b);
                }
            }
            boundary.push(BoundaryFacet {
                facet: f,
                cell,
                opposite,
                vertices: facet.vertices.clone(),
            });
        }

        Ok(Self {
            dim,
            points,
            cells,
            cell_volumes,
            edges,
            edge_lookup,
            vertex_cells,
            edge_cells,
            vertex_neighbors,
            facets,
            boundary,
            vertex_boundary,
            edge_boundary,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vector<T>] {
        &self.points
    }

    pub fn point(&self, j: usize) -> &Vector<T> {
        &self.points[j]
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Edges `(j, k)` with `j < k`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_id(&self, j: usize, k: usize) -> Option<usize> {
        self.edge_lookup.get(&ordered(j, k)).copied()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn num_interior_facets(&self) -> usize {
        self.facets.len() - self.boundary.len()
    }

    pub fn boundary_facets(&self) -> &[BoundaryFacet] {
        &self.boundary
    }

    /// Unsigned hypervolume of a cell.
    pub fn cell_volume(&self, c: usize) -> T {
        self.cell_volumes[c]
    }

    pub fn cell_volumes(&self) -> &[T] {
        &self.cell_volumes
    }

    pub fn total_volume(&self) -> T {
        self.cell_volumes.iter().fold(T::zero(), |acc, &v| acc + v)
    }

    pub fn cell_geom(&self, c: usize) -> SimplexGeom<T> {
        SimplexGeom::new(self.cells[c].iter().map(|&v| self.points[v].clone()).collect())
            .expect("cells validated at build time")
    }

    /// Cells containing vertex `j`.
    pub fn cells_sharing_vertex(&self, j: usize) -> Result<&[usize]> {
        self.vertex_cells
            .get(j)
            .map(Vec::as_slice)
            .ok_or(MeshError::VertexOutOfRange(j))
    }

    /// Cells containing both endpoints of edge `(j, k)`, in either order.
    pub fn cells_sharing_edge(&self, j: usize, k: usize) -> Result<&[usize]> {
        let id = self.edge_id(j, k).ok_or(MeshError::NotAnEdge(j, k))?;
        Ok(&self.edge_cells[id])
    }

    pub fn edge_cells(&self, edge: usize) -> &[usize] {
        &self.edge_cells[edge]
    }

    /// Vertices joined to `j` by an edge, ascending.
    pub fn vertex_neighbors(&self, j: usize) -> Result<&[usize]> {
        self.vertex_neighbors
            .get(j)
            .map(Vec::as_slice)
            .ok_or(MeshError::VertexOutOfRange(j))
    }

    /// Boundary facet ids containing vertex `j`.
    pub fn boundary_facets_at_vertex(&self, j: usize) -> &[usize] {
        &self.vertex_boundary[j]
    }

    /// Boundary facet ids containing edge `edge` (an index into [`Self::edges`]).
    pub fn boundary_facets_at_edge(&self, edge: usize) -> &[usize] {
        &self.edge_boundary[edge]
    }

    pub fn is_boundary_vertex(&self, j: usize) -> bool {
        !self.vertex_boundary[j].is_empty()
    }

    /// Outward normal of boundary facet `b` (an index into
    /// [`Self::boundary_facets`]), with length equal to the facet's
    /// `(d-1)`-volume.
    pub fn boundary_facet_outward_normal(&self, b: usize) -> Result<Vector<T>> {
        let bf = self.boundary.get(b).ok_or(MeshError::NotABoundaryFacet(b))?;
        let local = self.cells[bf.cell]
            .iter()
            .position(|&v| v == bf.opposite)
            .expect("opposite vertex belongs to its cell");
        let n = opposite_facet_normal(&self.cell_geom(bf.cell), local)?;
        Ok(n.vector)
    }

    /// Outward normal of any facet seen from one of its incident cells.
    pub fn facet_normal_from_cell(&self, facet: usize, cell: usize) -> Result<Vector<T>> {
        let f = &self.facets[facet];
        let local = self.cells[cell]
            .iter()
            .position(|v| !f.vertices.contains(v))
            .ok_or(MeshError::NotABoundaryFacet(facet))?;
        Ok(opposite_facet_normal(&self.cell_geom(cell), local)?.vector)
    }

    /// Outward normal of the facet with the given id, rejecting interior facets.
    pub fn outward_normal_of_facet(&self, facet: usize) -> Result<Vector<T>> {
        let b = self
            .boundary
            .iter()
            .position(|bf| bf.facet == facet)
            .ok_or(MeshError::NotABoundaryFacet(facet))?;
        self.boundary_facet_outward_normal(b)
    }
}

pub(crate) fn ordered(j: usize, k: usize) -> (usize, usize) {
    if j < k {
        (j, k)
    } else {
        (k, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn standard(d: usize) -> Triangulation<f64> {
        let mut pts = vec![Vector::zeros(d)];
        pts.extend((0..d).map(|i| Vector::unit(d, i)));
        Triangulation::new(d, pts, vec![(0..=d).collect()]).unwrap()
    }

    fn mirrored_pair() -> Triangulation<f64> {
        let mut pts = vec![Vector::zeros(4)];
        pts.extend((0..4).map(|i| Vector::unit(4, i)));
        pts.push(Vector::new(vec![0.5; 4]));
        Triangulation::new(4, pts, vec![vec![0, 1, 2, 3, 4], vec![5, 1, 2, 3, 4]]).unwrap()
    }

    #[test]
    fn single_pentatope_counts() {
        let t = standard(4);
        assert_eq!(t.edges().len(), 10);
        assert_eq!(t.boundary_facets().len(), 5);
        assert_eq!(t.num_interior_facets(), 0);
        assert_eq!(t.cells_sharing_vertex(3).unwrap(), &[0]);
        assert_eq!(t.cells_sharing_edge(4, 1).unwrap(), &[0]);
    }

    #[test]
    fn mirrored_pair_counts() {
        let t = mirrored_pair();
        assert_eq!(t.num_interior_facets(), 1);
        assert_eq!(t.boundary_facets().len(), 8);
        assert_eq!(t.cells_sharing_vertex(2).unwrap(), &[0, 1]);
        assert_eq!(t.cells_sharing_edge(1, 2).unwrap(), &[0, 1]);
        assert_eq!(t.cells_sharing_edge(0, 1).unwrap(), &[0]);
    }

    #[test]
    fn repeated_vertex_rejected() {
        let pts = vec![
            Vector::new(vec![0.0, 0.0]),
            Vector::new(vec![1.0, 0.0]),
            Vector::new(vec![0.0, 1.0]),
        ];
        let err = Triangulation::new(2, pts, vec![vec![0, 1, 1]]).unwrap_err();
        assert_eq!(err, MeshError::RepeatedVertex { cell: 0, vertex: 1 });
    }

    #[test]
    fn out_of_range_index_rejected() {
        let pts = vec![Vector::new(vec![0.0, 0.0]), Vector::new(vec![1.0, 0.0])];
        let err = Triangulation::new(2, pts, vec![vec![0, 1, 5]]).unwrap_err();
        assert_eq!(
            err,
            MeshError::IndexOutOfRange {
                cell: 0,
                index: 5,
                points: 2
            }
        );
    }

    #[test]
    fn degenerate_cell_rejected_unless_lax() {
        let pts = vec![
            Vector::new(vec![0.0, 0.0]),
            Vector::new(vec![1.0, 0.0]),
            Vector::new(vec![2.0, 0.0]),
        ];
        let err = Triangulation::new(2, pts.clone(), vec![vec![0, 1, 2]]).unwrap_err();
        assert!(matches!(err, MeshError::DegenerateCell { cell: 0, .. }));
        let lax = Triangulation::with_options(2, pts, vec![vec![0, 1, 2]], BuildOptions { strict: false });
        assert!(lax.is_ok());
    }

    #[test]
    fn non_manifold_facet_rejected() {
        // three triangles hanging off the same edge
        let pts = vec![
            Vector::new(vec![0.0, 0.0]),
            Vector::new(vec![1.0, 0.0]),
            Vector::new(vec![0.0, 1.0]),
            Vector::new(vec![0.0, -1.0]),
            Vector::new(vec![0.5, 2.0]),
        ];
        let err = Triangulation::new(2, pts, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]).unwrap_err();
        assert_eq!(
            err,
            MeshError::NonManifoldFacet {
                vertices: vec![0, 1],
                cells: vec![0, 1, 2]
            }
        );
    }

    #[test]
    fn wrong_arity_and_dimension() {
        let pts = vec![Vector::new(vec![0.0, 0.0]), Vector::new(vec![1.0, 0.0, 0.0])];
        assert!(matches!(
            Triangulation::new(2, pts, vec![vec![0, 1, 0]]),
            Err(MeshError::PointDimension { point: 1, .. })
        ));
        let pts = vec![Vector::new(vec![0.0, 0.0]), Vector::new(vec![1.0, 0.0])];
        assert!(matches!(
            Triangulation::new(2, pts, vec![vec![0, 1]]),
            Err(MeshError::CellArity { cell: 0, .. })
        ));
    }

    #[test]
    fn not_an_edge() {
        let t = mirrored_pair();
        assert_eq!(t.cells_sharing_edge(0, 5), Err(MeshError::NotAnEdge(0, 5)));
    }

    #[test]
    fn boundary_normals_of_standard_pentatope() {
        let t = standard(4);
        let find = |verts: &[usize]| {
            t.boundary_facets()
                .iter()
                .position(|b| b.vertices == verts)
                .unwrap()
        };
        let n = t.boundary_facet_outward_normal(find(&[0, 1, 2, 3])).unwrap();
        for (i, want) in [0.0, 0.0, 0.0, -1.0 / 6.0].iter().enumerate() {
            assert_relative_eq!(n[i], *want, epsilon = 1e-15);
        }
        let n = t.boundary_facet_outward_normal(find(&[1, 2, 3, 4])).unwrap();
        for i in 0..4 {
            assert_relative_eq!(n[i], 1.0 / 6.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn boundary_normal_of_right_triangle() {
        let t = standard(2);
        let b = t.boundary_facets().iter().position(|b| b.vertices == [0, 1]).unwrap();
        assert_eq!(t.boundary_facet_outward_normal(b).unwrap(), Vector::new(vec![0.0, -1.0]));
    }

    #[test]
    fn interior_facet_has_no_outward_normal() {
        let t = mirrored_pair();
        let interior = t.facets().iter().position(|f| !f.is_boundary()).unwrap();
        assert_eq!(
            t.outward_normal_of_facet(interior),
            Err(MeshError::NotABoundaryFacet(interior))
        );
        assert_eq!(t.boundary_facet_outward_normal(99), Err(MeshError::NotABoundaryFacet(99)));
    }
}
