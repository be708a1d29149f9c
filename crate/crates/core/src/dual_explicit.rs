//! Brute-force median-dual construction used as an independent check on the
//! closed-form results.
//!
//! Inside a cell `T`, the piece of the dual region of node `j` and the piece
//! of the dual facet crossing edge `(j, k)` are both combinatorial cubes whose
//! corners are centroids of faces of `T`. Corners are indexed by subsets of the
//! remaining cell vertices, and the cubes are split into simplices with the
//! CFK decomposition.

use crate::cfk::{cfk_triangulate, CfkSimplex};
use crate::dual_algebraic::{DualError, DualVolumeField, Result};
use crate::geometry::{centroid, generalized_cross, signed_volume_of, Vector};
use crate::mesh::{MeshError, Triangulation};
use crate::scalar::{factorial, Scalar};

fn subset_centroids<T: Scalar>(t: &Triangulation<T>, base: &[usize], others: &[usize]) -> Vec<Vector<T>> {
    (0..1usize << others.len())
        .map(|mask| {
            let pts: Vec<Vector<T>> = base
                .iter()
                .chain(
                    others
                        .iter()
                        .enumerate()
                        .filter(|&(b, _)| mask >> b & 1 == 1)
                        .map(|(_, v)| v),
                )
                .map(|&v| t.point(v).clone())
                .collect();
            centroid(&pts).expect("base is nonempty")
        })
        .collect()
}

/// The piece of the dual facet of edge `(j, k)` inside one cell: a
/// `(d-1)`-cube with corners `c_S = centroid({p_j, p_k} ∪ S)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CuboidFacet<T> {
    pub edge: (usize, usize),
    pub cell: usize,
    /// The `d - 1` cell vertices other than `j` and `k`; bit `b` of a corner
    /// index selects `others[b]`.
    pub others: Vec<usize>,
    pub vertices: Vec<Vector<T>>,
}

impl<T: Scalar> CuboidFacet<T> {
    pub fn new(t: &Triangulation<T>, j: usize, k: usize, cell: usize) -> Result<Self> {
        let verts = &t.cells()[cell];
        if !verts.contains(&j) || !verts.contains(&k) || j == k {
            return Err(MeshError::NotAnEdge(j, k).into());
        }
        let others: Vec<usize> = verts.iter().copied().filter(|&v| v != j && v != k).collect();
        let vertices = subset_centroids(t, &[j, k], &others);
        Ok(Self {
            edge: (j, k),
            cell,
            others,
            vertices,
        })
    }

    /// Edge midpoint.
    pub fn first(&self) -> &Vector<T> {
        &self.vertices[0]
    }

    /// Cell centroid.
    pub fn last(&self) -> &Vector<T> {
        self.vertices.last().expect("cube has corners")
    }
}

/// The piece of the dual region of node `j` inside one cell: a `d`-cube with
/// corners `c_S = centroid({p_j} ∪ S)`, so `c_∅ = p_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCellCuboid<T> {
    pub node: usize,
    pub cell: usize,
    pub others: Vec<usize>,
    pub vertices: Vec<Vector<T>>,
}

impl<T: Scalar> DualCellCuboid<T> {
    pub fn new(t: &Triangulation<T>, j: usize, cell: usize) -> Result<Self> {
        let verts = &t.cells()[cell];
        if !verts.contains(&j) {
            return Err(MeshError::VertexOutOfRange(j).into());
        }
        let others: Vec<usize> = verts.iter().copied().filter(|&v| v != j).collect();
        let vertices = subset_centroids(t, &[j], &others);
        Ok(Self {
            node: j,
            cell,
            others,
            vertices,
        })
    }

    /// Signed volume of every CFK piece, multiplied by the piece's sign so that
    /// a consistently oriented cube has all entries of one sign.
    pub fn oriented_piece_volumes(&self, pieces: &[CfkSimplex]) -> Vec<T> {
        pieces
            .iter()
            .map(|s| {
                let verts: Vec<Vector<T>> = s.vertices.iter().map(|&v| self.vertices[v].clone()).collect();
                let vol = signed_volume_of(&verts);
                if s.sign < 0 {
                    -vol
                } else {
                    vol
                }
            })
            .collect()
    }

    /// Sum of unsigned CFK piece volumes. Logs a warning when pieces disagree
    /// in orientation, which only happens for inverted geometry.
    pub fn hypervolume(&self) -> T {
        let d = self.others.len();
        let pieces = self.oriented_piece_volumes(&cfk_triangulate(d));
        let pos = pieces.iter().any(|v| *v > T::zero());
        let neg = pieces.iter().any(|v| *v < T::zero());
        if pos && neg {
            log::warn!(
                "dual cuboid of node {} in cell {} has inverted CFK pieces",
                self.node,
                self.cell
            );
        }
        pieces.iter().fold(T::zero(), |acc, v| acc + v.abs())
    }
}

/// Sum of the CFK-simplex normals of a cuboid facet, combined with their
/// permutation signs and then flipped once so that it points from `p_j` to `p_k`.
pub fn lumped_normal<T: Scalar>(t: &Triangulation<T>, f: &CuboidFacet<T>) -> Result<Vector<T>> {
    lumped_normal_with(t, f, &cfk_triangulate(f.others.len()))
}

/// [`lumped_normal`] over an arbitrary CFK decomposition of the facet cube.
pub fn lumped_normal_with<T: Scalar>(
    t: &Triangulation<T>,
    f: &CuboidFacet<T>,
    pieces: &[CfkSimplex],
) -> Result<Vector<T>> {
    let d = t.dim();
    let scale = T::one() / factorial::<T>(d - 1);
    let mut total = Vector::zeros(d);
    for s in pieces {
        let origin = &f.vertices[s.vertices[0]];
        let spans: Vec<Vector<T>> = s.vertices[1..].iter().map(|&v| &f.vertices[v] - origin).collect();
        let n = generalized_cross(&spans).map_err(MeshError::from)?;
        let w = if s.sign < 0 { -scale } else { scale };
        total.add_scaled(w, &n);
    }
    let (j, k) = f.edge;
    let along = (t.point(k) - t.point(j)).dot(&total);
    if along.is_zero() || total.is_zero() {
        return Err(DualError::ZeroLumpedNormal { edge: f.edge, cell: f.cell });
    }
    if along < T::zero() {
        total = -total;
    }
    Ok(total)
}

/// Directed-hyperarea vector of `(j, k)` as the sum of lumped normals of the
/// facet cubes in every cell sharing the edge. Points from `p_j` to `p_k`.
pub fn explicit_directed_area<T: Scalar>(t: &Triangulation<T>, j: usize, k: usize) -> Result<Vector<T>> {
    let mut n = Vector::zeros(t.dim());
    for &c in t.cells_sharing_edge(j, k)? {
        n += &lumped_normal(t, &CuboidFacet::new(t, j, k, c)?)?;
    }
    Ok(n)
}

/// [`explicit_directed_area`] for every mesh edge `(j, k)`, `j < k`.
pub fn explicit_directed_areas<T: Scalar>(t: &Triangulation<T>) -> Result<Vec<Vector<T>>> {
    t.edges()
        .iter()
        .map(|&(j, k)| explicit_directed_area(t, j, k))
        .collect()
}

/// Hypervolume of the median-dual region of `j`, summed cell by cell from the
/// CFK pieces of each dual cuboid.
pub fn explicit_dual_volume<T: Scalar>(t: &Triangulation<T>, j: usize) -> Result<T> {
    let mut v = T::zero();
    for &c in t.cells_sharing_vertex(j)? {
        v = v + DualCellCuboid::new(t, j, c)?.hypervolume();
    }
    Ok(v)
}

pub fn explicit_dual_volumes<T: Scalar>(t: &Triangulation<T>) -> Result<DualVolumeField<T>> {
    let volumes = (0..t.num_points())
        .map(|j| explicit_dual_volume(t, j))
        .collect::<Result<_>>()?;
    Ok(DualVolumeField { volumes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::cfk_triangulate_anchored;
    use crate::scalar::Rational;
    use approx::assert_relative_eq;

    fn standard<T: Scalar>(d: usize) -> Triangulation<T> {
        let mut pts = vec![Vector::zeros(d)];
        pts.extend((0..d).map(|i| Vector::unit(d, i)));
        Triangulation::new(d, pts, vec![(0..=d).collect()]).unwrap()
    }

    #[test]
    fn facet_corners_are_midpoint_and_centroid() {
        let t = standard::<Rational>(4);
        let f = CuboidFacet::new(&t, 0, 1, 0).unwrap();
        assert_eq!(f.vertices.len(), 8);
        let half = Rational::new(1, 2);
        let zero = Rational::from_integer(0);
        assert_eq!(f.first().coords(), &[half, zero, zero, zero]);
        assert!(f.last().coords().iter().all(|&c| c == Rational::new(1, 5)));
    }

    #[test]
    fn right_triangle_dual_facet() {
        let t = standard::<f64>(2);
        let f = CuboidFacet::new(&t, 0, 1, 0).unwrap();
        let n = lumped_normal(&t, &f).unwrap();
        assert_relative_eq!(n[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(n[1], 1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn pentatope_lumped_normal_is_exact() {
        let t = standard::<Rational>(4);
        let n = explicit_directed_area(&t, 0, 1).unwrap();
        assert_eq!(
            n.coords(),
            &[
                Rational::new(1, 60),
                Rational::new(1, 120),
                Rational::new(1, 120),
                Rational::new(1, 120)
            ]
        );
    }

    #[test]
    fn dual_cuboid_covers_its_share() {
        let t = standard::<Rational>(4);
        for j in 0..5 {
            let q = DualCellCuboid::new(&t, j, 0).unwrap();
            assert_eq!(q.vertices.len(), 16);
            assert_eq!(q.hypervolume(), Rational::new(1, 120));
        }
        let t2 = standard::<f64>(2);
        assert_relative_eq!(explicit_dual_volume(&t2, 0).unwrap(), 1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn anchor_choice_does_not_change_lumped_normal_in_4d() {
        let t = standard::<Rational>(4);
        let f = CuboidFacet::new(&t, 0, 1, 0).unwrap();
        let base = lumped_normal(&t, &f).unwrap();
        for anchor in 0..8 {
            let other = lumped_normal_with(&t, &f, &cfk_triangulate_anchored(3, anchor)).unwrap();
            assert_eq!(other, base, "anchor {anchor}");
        }
    }

    #[test]
    fn not_an_edge_is_reported() {
        let t = standard::<f64>(3);
        assert!(matches!(
            explicit_directed_area(&t, 0, 0),
            Err(DualError::Mesh(MeshError::NotAnEdge(0, 0)))
        ));
    }
}
