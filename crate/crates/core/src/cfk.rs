//! Coxeter–Freudenthal–Kuhn triangulation of the combinatorial `m`-cube.
//!
//! Cube vertices are subsets of `{0, .., m-1}` stored as bitmasks. Each
//! permutation `π` gives the monotone path `S_0 = A, S_i = S_{i-1} Δ {π(i)}`
//! from an anchor corner `A` to its complement; the `m!` path simplices
//! partition the cube.

use itertools::Itertools;

/// One simplex of the decomposition: `m + 1` cube vertices (bitmasks) and the
/// orientation of the path relative to the cube's coordinate frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfkSimplex {
    pub vertices: Vec<usize>,
    pub sign: i8,
}

/// Decomposition anchored at the empty corner.
pub fn cfk_triangulate(m: usize) -> Vec<CfkSimplex> {
    cfk_triangulate_anchored(m, 0)
}

/// Decomposition along the diagonal from corner `anchor` to its complement.
///
/// Flipping an axis reverses orientation, so the sign is the permutation parity
/// times `(-1)^|anchor|`.
pub fn cfk_triangulate_anchored(m: usize, anchor: usize) -> Vec<CfkSimplex> {
    let full = (1usize << m) - 1;
    let anchor = anchor & full;
    let flip = if anchor.count_ones().is_multiple_of(2) { 1 } else { -1 };
    (0..m)
        .permutations(m)
        .map(|perm| {
            let mut vertices = Vec::with_capacity(m + 1);
            let mut s = anchor;
            vertices.push(s);
            for &axis in &perm {
                s ^= 1 << axis;
                vertices.push(s);
            }
            CfkSimplex {
                vertices,
                sign: permutation_parity(&perm) * flip,
            }
        })
        .collect()
}

fn permutation_parity(perm: &[usize]) -> i8 {
    let inversions = perm
        .iter()
        .enumerate()
        .flat_map(|(i, a)| perm[i + 1..].iter().filter(move |b| *b < a))
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Subset label with one-based elements, e.g. `{1,3}`.
pub fn subset_label(mask: usize) -> String {
    let elems: Vec<String> = (0..usize::BITS as usize)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| (b + 1).to_string())
        .collect();
    format!("{{{}}}", elems.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{signed_volume_of, Vector};

    #[test]
    fn square_split_by_diagonal() {
        let s = cfk_triangulate(2);
        assert_eq!(
            s,
            vec![
                CfkSimplex {
                    vertices: vec![0b00, 0b01, 0b11],
                    sign: 1
                },
                CfkSimplex {
                    vertices: vec![0b00, 0b10, 0b11],
                    sign: -1
                },
            ]
        );
    }

    #[test]
    fn counts() {
        assert_eq!(cfk_triangulate(1).len(), 1);
        assert_eq!(cfk_triangulate(3).len(), 6);
        assert_eq!(cfk_triangulate(4).len(), 24);
    }

    fn unit_cube_corner(m: usize, mask: usize) -> Vector<f64> {
        Vector::new((0..m).map(|b| (mask >> b & 1) as f64).collect())
    }

    #[test]
    fn signed_pieces_fill_unit_cube() {
        for m in 1..=4 {
            for anchor in [0, (1 << m) - 1, 1] {
                let total: f64 = cfk_triangulate_anchored(m, anchor)
                    .iter()
                    .map(|s| {
                        let verts: Vec<_> = s.vertices.iter().map(|&v| unit_cube_corner(m, v)).collect();
                        let vol = signed_volume_of(&verts);
                        assert!(vol * s.sign as f64 > 0.0, "piece orientation matches its sign");
                        vol * s.sign as f64
                    })
                    .sum();
                assert!((total - 1.0).abs() < 1e-14, "m={m} anchor={anchor}: {total}");
            }
        }
    }

    #[test]
    fn labels() {
        assert_eq!(subset_label(0), "{}");
        assert_eq!(subset_label(0b101), "{1,3}");
    }
}
