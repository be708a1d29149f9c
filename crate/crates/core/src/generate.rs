//! Synthetic meshes: Kuhn-triangulated hypercube grids (optionally perturbed)
//! and a handful of named single- and few-cell configurations.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{generalized_cross, Vector};
use crate::mesh::{MeshError, Triangulation};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("grid dimension must be in 2..=5, got {0}")]
    UnsupportedDimension(usize),
    #[error("cells per axis must be at least 1")]
    NoCells,
    #[error("perturbation amplitude must lie in [0, 0.3], got {0}")]
    AmplitudeOutOfRange(f64),
    #[error("unknown canonical mesh {0:?}; expected one of {CANONICAL_MESHES:?}")]
    UnknownMesh(String),
    #[error("coordinate {0} is not representable in the scalar type")]
    Unrepresentable(f64),
    #[error("perturbed grid failed validation after {attempts} attempts: {source}")]
    ValidationFailed {
        attempts: usize,
        #[source]
        source: MeshError,
    },
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

pub type Result<T> = std::result::Result<T, GenerateError>;

const MAX_ATTEMPTS: usize = 5;

/// Uniform grid on `[0, n]^d` with every unit cube split into `d!` simplices
/// along its main diagonal.
///
/// Interior vertices are displaced by a seeded uniform offset in
/// `[-1, 1]^d`, scaled by `amplitude` times the vertex's shortest incident
/// edge. If the result fails validation the amplitude is halved and the
/// same seed retried, up to five attempts in total.
pub fn kuhn_grid<T: Scalar>(d: usize, n: usize, amplitude: f64, seed: u64) -> Result<Triangulation<T>> {
    if !(2..=5).contains(&d) {
        return Err(GenerateError::UnsupportedDimension(d));
    }
    if n == 0 {
        return Err(GenerateError::NoCells);
    }
    if !(0.0..=0.3).contains(&amplitude) {
        return Err(GenerateError::AmplitudeOutOfRange(amplitude));
    }
    let side = n + 1;
    let count = side.pow(d as u32);
    let lattice: Vec<Vec<usize>> = (0..count)
        .map(|mut idx| {
            (0..d)
                .map(|_| {
                    let x = idx % side;
                    idx /= side;
                    x
                })
                .collect()
        })
        .collect();
    let index_of = |x: &[usize]| x.iter().rev().fold(0, |acc, &c| acc * side + c);

    let mut cells = Vec::with_capacity(n.pow(d as u32) * (1..=d).product::<usize>());
    let perms: Vec<Vec<usize>> = (0..d).permutations(d).collect();
    for corner in lattice.iter().filter(|x| x.iter().all(|&c| c < n)) {
        for perm in &perms {
            let mut x = corner.clone();
            let mut cell = Vec::with_capacity(d + 1);
            cell.push(index_of(&x));
            for &axis in perm {
                x[axis] += 1;
                cell.push(index_of(&x));
            }
            cells.push(cell);
        }
    }

    let base: Vec<Vec<f64>> = lattice
        .iter()
        .map(|x| x.iter().map(|&c| c as f64).collect())
        .collect();
    if amplitude == 0.0 {
        return Ok(Triangulation::new(d, to_scalar_points(&base)?, cells)?);
    }

    let local_min_edge = shortest_incident_edges(&base, &cells);
    let interior: Vec<bool> = lattice.iter().map(|x| x.iter().all(|&c| c > 0 && c < n)).collect();
    let mut amp = amplitude;
    let mut last_err = None;
    for _ in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = base.clone();
        for (j, p) in pts.iter_mut().enumerate() {
            if !interior[j] {
                continue;
            }
            let scale = amp * local_min_edge[j];
            for c in p.iter_mut() {
                *c += scale * rng.gen_range(-1.0..=1.0);
            }
        }
        match Triangulation::new(d, to_scalar_points(&pts)?, cells.clone()) {
            Ok(t) => return Ok(t),
            Err(e) => {
                log::debug!("perturbation amplitude {amp} rejected: {e}");
                last_err = Some(e);
                amp *= 0.5;
            }
        }
    }
    Err(GenerateError::ValidationFailed {
        attempts: MAX_ATTEMPTS,
        source: last_err.expect("at least one attempt"),
    })
}

fn shortest_incident_edges(points: &[Vec<f64>], cells: &[Vec<usize>]) -> Vec<f64> {
    let mut best = vec![f64::INFINITY; points.len()];
    for cell in cells {
        for (a, &j) in cell.iter().enumerate() {
            for &k in &cell[a + 1..] {
                let len = points[j]
                    .iter()
                    .zip(&points[k])
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt();
                best[j] = best[j].min(len);
                best[k] = best[k].min(len);
            }
        }
    }
    best
}

fn to_scalar_points<T: Scalar>(pts: &[Vec<f64>]) -> Result<Vec<Vector<T>>> {
    pts.iter()
        .map(|p| {
            p.iter()
                .map(|&c| T::from_f64(c).ok_or(GenerateError::Unrepresentable(c)))
                .collect::<Result<Vec<T>>>()
                .map(Vector::new)
        })
        .collect()
}

pub const CANONICAL_MESHES: [&str; 6] = [
    "standard-simplex-2",
    "standard-simplex-3",
    "standard-simplex-4",
    "standard-simplex-5",
    "mirrored-pair-4",
    "proof-cluster-4",
];

pub fn canonical_mesh<T: Scalar>(name: &str) -> Result<Triangulation<T>> {
    match name {
        "standard-simplex-2" => standard_simplex(2),
        "standard-simplex-3" => standard_simplex(3),
        "standard-simplex-4" => standard_simplex(4),
        "standard-simplex-5" => standard_simplex(5),
        "mirrored-pair-4" => mirrored_pair(&standard_vertices(4)),
        "proof-cluster-4" => {
            let v = standard_vertices(4);
            proof_cluster(&[v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone()])
        }
        other => Err(GenerateError::UnknownMesh(other.to_string())),
    }
}

/// `{0, e_1, ..., e_d}`.
pub fn standard_vertices<T: Scalar>(d: usize) -> Vec<Vector<T>> {
    let mut pts = vec![Vector::zeros(d)];
    pts.extend((0..d).map(|i| Vector::unit(d, i)));
    pts
}

pub fn standard_simplex<T: Scalar>(d: usize) -> Result<Triangulation<T>> {
    Ok(Triangulation::new(d, standard_vertices(d), vec![(0..=d).collect()])?)
}

/// Mirror image of `p` across the hyperplane through `facet` (`d` points in `R^d`).
pub fn reflect_across<T: Scalar>(p: &Vector<T>, facet: &[Vector<T>]) -> Result<Vector<T>> {
    let spans: Vec<Vector<T>> = facet[1..].iter().map(|q| q - &facet[0]).collect();
    let n = generalized_cross(&spans).map_err(MeshError::from)?;
    let s = (p - &facet[0]).dot(&n) / n.norm_squared();
    let mut out = p.clone();
    out.add_scaled(-(s + s), &n);
    Ok(out)
}

/// A simplex plus the reflection of its first vertex across the opposite
/// facet, glued along that facet.
pub fn mirrored_pair<T: Scalar>(simplex: &[Vector<T>]) -> Result<Triangulation<T>> {
    let d = simplex.len() - 1;
    let mirrored = reflect_across(&simplex[0], &simplex[1..])?;
    let mut pts = simplex.to_vec();
    pts.push(mirrored);
    let first: Vec<usize> = (0..=d).collect();
    let second: Vec<usize> = std::iter::once(d + 1).chain(1..=d).collect();
    Ok(Triangulation::new(d, pts, vec![first, second])?)
}

/// The four-pentatope cluster around edge `(p1, p2)`: `T_α = {p1..p5}` and its
/// three facet neighbours that keep the edge, with `p6`, `p7`, `p8` the
/// reflections of `p5`, `p4`, `p3` across the shared facets. Points are stored
/// zero-based, so `p1` is point 0.
pub fn proof_cluster<T: Scalar>(p: &[Vector<T>; 5]) -> Result<Triangulation<T>> {
    let p6 = reflect_across(&p[4], &[p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()])?;
    let p7 = reflect_across(&p[3], &[p[0].clone(), p[1].clone(), p[2].clone(), p[4].clone()])?;
    let p8 = reflect_across(&p[2], &[p[0].clone(), p[1].clone(), p[3].clone(), p[4].clone()])?;
    let mut pts = p.to_vec();
    pts.extend([p6, p7, p8]);
    let cells = vec![
        vec![0, 1, 2, 3, 4],
        vec![0, 1, 2, 3, 5],
        vec![0, 1, 2, 4, 6],
        vec![0, 1, 3, 4, 7],
    ];
    Ok(Triangulation::new(4, pts, cells)?)
}
