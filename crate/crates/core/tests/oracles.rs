//! Expected values checked against routes that share no code with the
//! implementation: shoelace areas, Gram determinants, brute-force counting and
//! exact rational arithmetic.

use approx::assert_relative_eq;
use median_dual::dual_algebraic::{cell_facet_normals, directed_area_factor, directed_area_field};
use median_dual::dual_explicit::{explicit_directed_area, explicit_dual_volume, lumped_normal, CuboidFacet};
use median_dual::generate::{canonical_mesh, kuhn_grid, mirrored_pair, proof_cluster, standard_vertices};
use median_dual::{Rational, Scalar, Triangulation, Vector};

fn shoelace(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        .abs()
        / 2.0
}

#[test]
fn right_triangle_dual_cell_matches_shoelace() {
    let t = canonical_mesh::<f64>("standard-simplex-2").unwrap();
    let area = shoelace(&[[0.0, 0.0], [0.5, 0.0], [1.0 / 3.0, 1.0 / 3.0], [0.0, 0.5]]);
    assert_relative_eq!(area, 1.0 / 6.0, epsilon = 1e-15);
    assert_relative_eq!(explicit_dual_volume(&t, 0).unwrap(), area, epsilon = 1e-15);
}

#[test]
fn right_triangle_facet_is_midpoint_to_centroid() {
    // dual facet runs from (1/2, 0) to (1/3, 1/3); its normal is the
    // perpendicular of that segment with positive component along +x
    let seg = [1.0 / 3.0 - 0.5, 1.0 / 3.0];
    let perp = [seg[1], -seg[0]];
    let t = canonical_mesh::<f64>("standard-simplex-2").unwrap();
    let n = lumped_normal(&t, &CuboidFacet::new(&t, 0, 1, 0).unwrap()).unwrap();
    assert_relative_eq!(n[0], perp[0], epsilon = 1e-15);
    assert_relative_eq!(n[1], perp[1], epsilon = 1e-15);
}

/// `n = 1` Kuhn cube: vertices are `{0,1}^d`, and `u`–`v` is an edge exactly
/// when one is a subset of the other.
fn brute_force_cube_edges(d: usize) -> usize {
    let corners = 1usize << d;
    (0..corners)
        .flat_map(|u| (0..corners).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && u & v == u)
        .count()
}

#[test]
fn kuhn_cube_edge_count() {
    for d in 2..=5 {
        let t = kuhn_grid::<f64>(d, 1, 0.0, 0).unwrap();
        assert_eq!(t.edges().len(), brute_force_cube_edges(d), "d={d}");
    }
    assert_eq!(brute_force_cube_edges(4), 65);
}

#[test]
fn kuhn_cube_main_diagonal_sees_every_cell() {
    let t = kuhn_grid::<f64>(4, 1, 0.0, 0).unwrap();
    let origin = 0;
    let far = t.num_points() - 1;
    assert!(t.point(far).coords().iter().all(|&c| c == 1.0));
    assert_eq!(t.cells_sharing_vertex(origin).unwrap().len(), 24);
    assert_eq!(t.cells_sharing_edge(origin, far).unwrap().len(), 24);
    let v = median_dual::dual_volumes(&t);
    assert_relative_eq!(v.volumes[origin], 0.2, epsilon = 1e-15);
}

/// `(d-1)`-volume of the parallelotope spanned by `vs`, via the Gram determinant.
fn gram_volume(vs: &[Vec<f64>]) -> f64 {
    let n = vs.len();
    let mut g: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum()).collect())
        .collect();
    // plain elimination, the Gram matrix is symmetric positive definite
    let mut det = 1.0;
    for c in 0..n {
        det *= g[c][c];
        for r in c + 1..n {
            let f = g[r][c] / g[c][c];
            let pivot = g[c].clone();
            for (x, v) in g[r][c..].iter_mut().zip(&pivot[c..]) {
                *x -= f * v;
            }
        }
    }
    det.sqrt()
}

#[test]
fn cross_magnitude_matches_gram_determinant() {
    let vs = vec![
        vec![0.3, -1.2, 0.5, 2.0, 0.1],
        vec![1.1, 0.4, -0.7, 0.2, 0.9],
        vec![-0.5, 0.8, 1.3, -0.4, 0.6],
        vec![0.2, 0.2, -0.9, 1.5, -1.1],
    ];
    let vecs: Vec<Vector<f64>> = vs.iter().cloned().map(Vector::new).collect();
    let n = median_dual::generalized_cross(&vecs).unwrap();
    assert_relative_eq!(n.norm(), gram_volume(&vs), max_relative = 1e-13);
}

fn rational_points(raw: &[[i128; 4]], den: i128) -> Vec<Vector<Rational>> {
    raw.iter()
        .map(|p| Vector::new(p.iter().map(|&c| Rational::new(c, den)).collect()))
        .collect()
}

fn generic_pentatope() -> [Vector<Rational>; 5] {
    let pts = rational_points(
        &[[0, 0, 0, 0], [7, 1, -2, 3], [1, 9, 2, -1], [-2, 3, 8, 1], [2, -1, 1, 10]],
        7,
    );
    pts.try_into().unwrap()
}

#[test]
fn per_cell_lumped_normal_decomposes_exactly() {
    // n(F^T) for edge (j,k) = factor * (n_j + 1/2 * sum of n_i over i != j,k),
    // exactly, for a generic simplex in every dimension
    for d in 2..=5 {
        let mut verts = standard_vertices::<Rational>(d);
        for (i, v) in verts.iter_mut().enumerate() {
            v[i % d] += Rational::new(i as i128, 5);
            v[(i + 1) % d] -= Rational::new(1, 3 + i as i128);
        }
        let t = Triangulation::new(d, verts, vec![(0..=d).collect()]).unwrap();
        let normals = cell_facet_normals(&t, 0).unwrap();
        let factor: Rational = directed_area_factor(d);
        for j in 0..=d {
            for k in (0..=d).filter(|&k| k != j) {
                let got = lumped_normal(&t, &CuboidFacet::new(&t, j, k, 0).unwrap()).unwrap();
                let mut want = normals[j].clone();
                for (i, n) in normals.iter().enumerate() {
                    if i != j && i != k {
                        want.add_scaled(Rational::new(1, 2), n);
                    }
                }
                assert_eq!(got, want.scaled(factor), "d={d} edge ({j},{k})");
            }
        }
    }
}

#[test]
fn proof_cluster_cancellation_is_exact() {
    let t = proof_cluster(&generic_pentatope()).unwrap();
    // cells: α = {1,2,3,4,5}, β = {1,2,3,4,6}, γ = {1,2,3,5,7}, δ = {1,2,4,5,8}
    let normal_opposite = |cell: usize, vertex: usize| {
        let a = t.cells()[cell].iter().position(|&v| v == vertex).unwrap();
        cell_facet_normals(&t, cell).unwrap()[a].clone()
    };
    assert_eq!(normal_opposite(0, 2), -normal_opposite(3, 7));
    assert_eq!(normal_opposite(0, 3), -normal_opposite(2, 6));
    assert_eq!(normal_opposite(0, 4), -normal_opposite(1, 5));

    let explicit = explicit_directed_area(&t, 0, 1).unwrap();
    let corrected = directed_area_field(&t, true).unwrap().oriented(0, 1).unwrap();
    assert_eq!(explicit, corrected);

    // interior part is exactly one tenth of the summed n_1 normals
    let mut interior = Vector::zeros(4);
    for c in 0..4 {
        interior.add_scaled(Rational::new(1, 10), &normal_opposite(c, 0));
    }
    assert_eq!(directed_area_field(&t, false).unwrap().oriented(0, 1).unwrap(), interior);
}

#[test]
fn mirrored_pair_is_reflection_symmetric() {
    let t = canonical_mesh::<Rational>("mirrored-pair-4").unwrap();
    // shared facet lies in the hyperplane x1+x2+x3+x4 = 1; edge (e1, e2) is in it
    let n = explicit_directed_area(&t, 1, 2).unwrap();
    let sum = n.coords().iter().fold(Rational::from_integer(0), |a, &c| a + c);
    assert_eq!(sum, Rational::from_integer(0), "no component along the mirror normal");
    assert_eq!(n, directed_area_field(&t, true).unwrap().oriented(1, 2).unwrap());

    // a generic mirrored pair in 3D: the same holds on the shared face
    let verts: Vec<Vector<f64>> = vec![
        Vector::new(vec![0.1, -0.2, 0.05]),
        Vector::new(vec![1.0, 0.1, 0.2]),
        Vector::new(vec![0.2, 1.1, -0.1]),
        Vector::new(vec![0.0, 0.3, 1.2]),
    ];
    let t = mirrored_pair(&verts).unwrap();
    let n = explicit_directed_area(&t, 1, 2).unwrap();
    let face_normal = median_dual::geometry::facet_normal(&verts[1..]).unwrap();
    assert!(n.dot(&face_normal).abs() < 1e-14 * n.norm() * face_normal.norm());
}

#[test]
fn kuhn_grid_identities_hold_exactly_in_rationals() {
    for d in 2..=4 {
        let t = kuhn_grid::<Rational>(d, 2, 0.0, 0).unwrap();
        let f = directed_area_field(&t, true).unwrap();
        for (e, &(j, k)) in t.edges().iter().enumerate() {
            assert_eq!(f.vectors[e], explicit_directed_area(&t, j, k).unwrap(), "d={d} ({j},{k})");
        }
        let closed_form = median_dual::dual_volumes(&t);
        for j in 0..t.num_points() {
            assert_eq!(explicit_dual_volume(&t, j).unwrap(), closed_form.volumes[j]);
        }
        assert_eq!(closed_form.total(), Rational::from_count(1 << d));
    }
}
