//! Dimension-generic vector and simplex primitives.
//!
//! Vectors carry their dimension at runtime; every routine checks that its
//! inputs agree and reports a [`GeometryError`] otherwise.

use std::ops::{Add, AddAssign, Index, IndexMut, Neg, Sub, SubAssign};

use num_traits::Float;
use thiserror::Error;

use crate::scalar::{factorial, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected {expected} vectors, found {found}")]
    WrongVectorCount { expected: usize, found: usize },
    #[error("ambient dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("local vertex index {index} out of range for simplex with {count} vertices")]
    LocalIndexOutOfRange { index: usize, count: usize },
    #[error("local vertex indices must differ (both are {0})")]
    SameVertex(usize),
    #[error("simplex is degenerate")]
    Degenerate,
    #[error("cannot take the centroid of an empty point set")]
    EmptyPointSet,
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// A point or vector in `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<T>(Vec<T>);

impl<T: Scalar> Vector<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![T::zero(); dim])
    }

    /// Coordinate vector `e_{axis+1}` (zero-based `axis`).
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[axis] = T::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<T> {
        self.0
    }

    pub fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
    }

    pub fn norm_squared(&self) -> T {
        self.dot(self)
    }

    pub fn scaled(&self, s: T) -> Self {
        Self(self.0.iter().map(|&x| x * s).collect())
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: T, other: &Self) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            *a = *a + s * b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// Euclidean norm evaluated in `f64`, usable for any scalar type.
    pub fn norm_f64(&self) -> f64 {
        self.0
            .iter()
            .map(|x| {
                let v = x.to_f64_lossy();
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_f64(&self) -> Vector<f64> {
        Vector(self.0.iter().map(|x| x.to_f64_lossy()).collect())
    }

    fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(GeometryError::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }
}

impl<T: Scalar + Float> Vector<T> {
    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Vector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: Scalar> From<Vec<T>> for Vector<T> {
    fn from(coords: Vec<T>) -> Self {
        Self(coords)
    }
}

impl<T: Scalar> Add for &Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: Self) -> Vector<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(&a, &b)| a + b).collect())
    }
}

impl<T: Scalar> Sub for &Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: Self) -> Vector<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(&a, &b)| a - b).collect())
    }
}

impl<T: Scalar> Neg for &Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Vector<T> {
        Vector(self.0.iter().map(|&a| -a).collect())
    }
}

impl<T: Scalar> Neg for Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Vector<T> {
        -&self
    }
}

impl<T: Scalar> AddAssign<&Vector<T>> for Vector<T> {
    fn add_assign(&mut self, rhs: &Vector<T>) {
        debug_assert_eq!(self.dim(), rhs.dim());
        for (a, &b) in self.0.iter_mut().zip(&rhs.0) {
            *a = *a + b;
        }
    }
}

impl<T: Scalar> SubAssign<&Vector<T>> for Vector<T> {
    fn sub_assign(&mut self, rhs: &Vector<T>) {
        debug_assert_eq!(self.dim(), rhs.dim());
        for (a, &b) in self.0.iter_mut().zip(&rhs.0) {
            *a = *a - b;
        }
    }
}

/// Determinant of a square matrix given as rows, by Gaussian elimination with
/// partial pivoting.
pub fn determinant<T: Scalar>(rows: &[Vec<T>]) -> T {
    let n = rows.len();
    if n == 0 {
        return T::one();
    }
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let mut det = T::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| {
                m[a][col]
                    .abs()
                    .partial_cmp(&m[b][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty pivot range");
        if m[pivot][col].is_zero() {
            return T::zero();
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det = det * p;
        for r in col + 1..n {
            let f = m[r][col] / p;
            if f.is_zero() {
                continue;
            }
            let (top, rest) = m.split_at_mut(r);
            for (x, &v) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = *x - f * v;
            }
        }
    }
    det
}

/// Generalized cross product of `d - 1` vectors in `R^d`.
///
/// Cofactor expansion along a leading row of unit vectors: component `i`
/// is `(-1)^i` times the minor obtained by deleting column `i`. For `d = 2`
/// this maps `v` to `(v_2, -v_1)`; for `d = 3` it is the usual cross product.
/// The result is orthogonal to every input and its length equals the
/// `(d-1)`-volume of the parallelotope spanned by the inputs.
pub fn generalized_cross<T: Scalar>(vectors: &[Vector<T>]) -> Result<Vector<T>> {
    let d = vectors.len() + 1;
    if d < 2 {
        return Err(GeometryError::DimensionTooSmall(d));
    }
    for v in vectors {
        v.check_dim(d)?;
    }
    let mut out = Vector::zeros(d);
    let mut minor = vec![Vec::with_capacity(d - 1); d - 1];
    for i in 0..d {
        for (row, v) in minor.iter_mut().zip(vectors) {
            row.clear();
            row.extend(
                v.coords()
                    .iter()
                    .enumerate()
                    .filter(|&(c, _)| c != i)
                    .map(|(_, &x)| x),
            );
        }
        let m = determinant(&minor);
        out[i] = if i % 2 == 0 { m } else { -m };
    }
    Ok(out)
}

/// Arithmetic mean of a nonempty point set.
pub fn centroid<T: Scalar>(points: &[Vector<T>]) -> Result<Vector<T>> {
    let first = points.first().ok_or(GeometryError::EmptyPointSet)?;
    let mut sum = Vector::zeros(first.dim());
    for p in points {
        p.check_dim(first.dim())?;
        sum += p;
    }
    Ok(sum.scaled(T::recip_count(points.len())))
}

/// Geometric realization of a `q`-simplex in `R^d` (`q <= d`).
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexGeom<T> {
    vertices: Vec<Vector<T>>,
}

impl<T: Scalar> SimplexGeom<T> {
    pub fn new(vertices: Vec<Vector<T>>) -> Result<Self> {
        let first = vertices.first().ok_or(GeometryError::EmptyPointSet)?;
        let d = first.dim();
        if d < 2 {
            return Err(GeometryError::DimensionTooSmall(d));
        }
        for v in &vertices {
            v.check_dim(d)?;
        }
        if vertices.len() > d + 1 {
            return Err(GeometryError::WrongVectorCount {
                expected: d + 1,
                found: vertices.len(),
            });
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vector<T>] {
        &self.vertices
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    /// Simplex order `q` (number of vertices minus one).
    pub fn order(&self) -> usize {
        self.vertices.len() - 1
    }

    fn require_full(&self) -> Result<()> {
        if self.order() == self.dim() {
            Ok(())
        } else {
            Err(GeometryError::WrongVectorCount {
                expected: self.dim() + 1,
                found: self.vertices.len(),
            })
        }
    }

    fn check_local(&self, j: usize) -> Result<()> {
        if j < self.vertices.len() {
            Ok(())
        } else {
            Err(GeometryError::LocalIndexOutOfRange {
                index: j,
                count: self.vertices.len(),
            })
        }
    }

    /// Signed `d`-volume, `det[p_1 - p_0, ..., p_d - p_0] / d!`.
    pub fn signed_volume(&self) -> Result<T> {
        self.require_full()?;
        Ok(signed_volume_of(&self.vertices))
    }

    pub fn max_edge_length_squared(&self) -> T {
        let mut best = T::zero();
        for (a, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[a + 1..] {
                let l = (q - p).norm_squared();
                if l > best {
                    best = l;
                }
            }
        }
        best
    }

    /// Degenerate when `volume < ratio * (max edge)^d`; compared in squared
    /// form so no square root is needed.
    pub fn is_degenerate(&self) -> Result<bool> {
        let vol = self.signed_volume()?;
        Ok(is_degenerate_volume(vol, self.max_edge_length_squared(), self.dim()))
    }
}

pub(crate) fn signed_volume_of<T: Scalar>(vertices: &[Vector<T>]) -> T {
    let d = vertices.len() - 1;
    let rows: Vec<Vec<T>> = vertices[1..]
        .iter()
        .map(|p| (p - &vertices[0]).into_coords())
        .collect();
    determinant(&rows) / factorial::<T>(d)
}

pub(crate) fn is_degenerate_volume<T: Scalar>(volume: T, max_edge_sq: T, d: usize) -> bool {
    if volume.is_zero() {
        return true;
    }
    let eps = T::degeneracy_ratio();
    let scale = (0..d).fold(T::one(), |acc, _| acc * max_edge_sq);
    volume * volume < eps * eps * scale
}

/// Unsigned `d`-hypervolume of a full-dimensional simplex. Degenerate
/// simplices simply yield (near) zero.
pub fn simplex_hypervolume<T: Scalar>(s: &SimplexGeom<T>) -> Result<T> {
    Ok(s.signed_volume()?.abs())
}

/// Normal of a `(d-1)`-simplex in `R^d` with length equal to its
/// `(d-1)`-volume. Orientation follows the vertex order.
pub fn facet_normal<T: Scalar>(vertices: &[Vector<T>]) -> Result<Vector<T>> {
    let d = vertices.first().ok_or(GeometryError::EmptyPointSet)?.dim();
    if vertices.len() != d {
        return Err(GeometryError::WrongVectorCount {
            expected: d,
            found: vertices.len(),
        });
    }
    let spans: Vec<Vector<T>> = vertices[1..].iter().map(|p| p - &vertices[0]).collect();
    let cross = generalized_cross(&spans)?;
    Ok(cross.scaled(T::one() / factorial::<T>(d - 1)))
}

/// Normal of the facet opposite a vertex, with the degeneracy flag.
#[derive(Clone, Debug, PartialEq)]
pub struct OppositeNormal<T> {
    pub vector: Vector<T>,
    pub degenerate: bool,
}

/// Normal of the facet opposite local vertex `j`.
///
/// Its length is the facet's `(d-1)`-volume and it points away from `p_j`,
/// i.e. `(p_k - p_j) . n > 0` for every other vertex `p_k`. For a degenerate
/// simplex the zero vector is returned with `degenerate` set.
pub fn opposite_facet_normal<T: Scalar>(s: &SimplexGeom<T>, j: usize) -> Result<OppositeNormal<T>> {
    s.require_full()?;
    s.check_local(j)?;
    if s.is_degenerate()? {
        return Ok(OppositeNormal {
            vector: Vector::zeros(s.dim()),
            degenerate: true,
        });
    }
    let facet: Vec<Vector<T>> = s
        .vertices
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, p)| p.clone())
        .collect();
    let mut n = facet_normal(&facet)?;
    if (&facet[0] - &s.vertices[j]).dot(&n) < T::zero() {
        n = -n;
    }
    Ok(OppositeNormal {
        vector: n,
        degenerate: false,
    })
}

/// Distance from vertex `j` to the hyperplane of its opposite facet,
/// measured as `(p_k - p_j) . n_hat` through vertex `k`.
pub fn altitude<T: Scalar + Float>(s: &SimplexGeom<T>, j: usize, k: usize) -> Result<T> {
    s.check_local(k)?;
    if j == k {
        return Err(GeometryError::SameVertex(j));
    }
    let n = opposite_facet_normal(s, j)?;
    if n.degenerate {
        return Err(GeometryError::Degenerate);
    }
    let edge = &s.vertices[k] - &s.vertices[j];
    Ok(edge.dot(&n.vector) / n.vector.norm())
}
