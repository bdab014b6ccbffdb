mod common;

use std::collections::BTreeSet;
use std::f64::consts::PI;

use common::{
    all_triangulations, brute_force, commuting_instance, convex, polygon, random_convex_pentagon,
    small_point_sets,
};
use gammaflip_core::example::rotating_pair_scene;
use gammaflip_core::kinetic::{
    delaunay, Edge, Point, ScanSettings, Scene, Tolerances, Trajectory, Triangulation,
};
use gammaflip_core::recoupling::{
    braid_operator, compose_path, count_colourings, eigen_multiplicity, enumerate_colourings,
    flip_operator, max_abs, verify_commutation, verify_pentagon, ColouringBasis, Level,
    RecouplingError,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn colourings_match_brute_force() {
    let mut total = 0;
    for points in small_point_sets() {
        for t in all_triangulations(&points) {
            assert!(t.edges().len() <= 9);
            for r in 3..=5 {
                let level = Level::new(r).unwrap();
                let basis = enumerate_colourings(&t, &level);
                assert_eq!(
                    basis.colourings(),
                    brute_force(&t, &level, r - 2).as_slice()
                );
                if t.edges().len() <= 6 {
                    assert_eq!(basis.len(), brute_force(&t, &level, 2 * r - 4).len());
                }
                total += 1;
            }
        }
    }
    // 1 + 2 + 5 + 14 convex, plus the interior-point sets.
    assert!(total >= 3 * 25, "{total}");
}

#[test]
fn single_triangle_colourings() {
    let t = Triangulation::from_oriented(3, [[1, 2, 3]]);
    let basis = enumerate_colourings(&t, &Level::new(3).unwrap());
    let got: BTreeSet<Vec<u32>> = basis.colourings().iter().cloned().collect();
    let expected: BTreeSet<Vec<u32>> =
        [vec![0, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]].into();
    assert_eq!(got, expected);
    for k in 0..basis.len() {
        assert_eq!(basis.index_of(basis.get(k).unwrap()), Some(k));
    }
}

#[test]
fn six_j_symmetries() {
    for r in 3..=6 {
        let l = Level::new(r).unwrap();
        let m = l.max_colour();
        for a in 0..=m {
            for b in 0..=m {
                for c in 0..=m {
                    for d in 0..=m {
                        for e in 0..=m {
                            for f in 0..=m {
                                let w = l.butterfly_weight(a, b, c, d, e, f);
                                assert!((w - l.butterfly_weight(b, a, c, e, d, f)).abs() < 1e-9);
                                assert!((w - l.butterfly_weight(f, e, a, c, b, d)).abs() < 1e-9);
                                let x = l.six_j(a, b, c, d, e, f);
                                assert!((x - l.six_j(b, a, c, e, d, f)).norm() < 1e-9);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn six_j_against_butterfly_weight() {
    // {a b i; c d j} = Tet·Δ_i/(θ(a,d,i)θ(b,c,i)) and the butterfly weight
    // share the tetrahedron, so their ratio is a product of thetas.
    let l = Level::new(5).unwrap();
    let m = l.max_colour();
    let mut checked = 0;
    for a in 0..=m {
        for b in 0..=m {
            for i in 0..=m {
                for c in 0..=m {
                    for d in 0..=m {
                        for j in 0..=m {
                            let ok = [(a, d, i), (b, c, i), (a, b, j), (c, d, j)]
                                .iter()
                                .all(|&(x, y, z)| l.admissible(x, y, z));
                            let x = l.six_j(a, b, i, c, d, j);
                            if !ok {
                                assert_eq!(x, Complex64::new(0.0, 0.0));
                                continue;
                            }
                            // Butterfly with triads (a,d,i), (a,b,j), (c,d,j), (c,b,i).
                            let w = l.butterfly_weight(a, d, i, c, b, j);
                            let th = |x, y, z| l.theta(x, y, z).unwrap();
                            let norm = (th(a, d, i) * th(a, b, j) * th(c, d, j) * th(c, b, i))
                                .abs()
                                .sqrt();
                            let expected = w * norm * l.delta(i) / (th(a, d, i) * th(b, c, i));
                            assert!((x.re - expected).abs() < 1e-9, "{a} {b} {i} {c} {d} {j}");
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 100);
}

fn quad_pair() -> (Triangulation, Triangulation) {
    let t = Triangulation::from_oriented(4, [[1, 2, 3], [1, 3, 4]]);
    let u = t.flip(Edge::new(1, 3)).unwrap();
    (t, u)
}

#[test]
fn single_quad_operator_at_r3() {
    let level = Level::new(3).unwrap();
    let (t, u) = quad_pair();
    let (bt, bu) = (
        ColouringBasis::new(&t, &level),
        ColouringBasis::new(&u, &level),
    );
    let a = flip_operator(&bt, &bu, &level).unwrap();
    let back = flip_operator(&bu, &bt, &level).unwrap();
    assert_eq!(a.matrix.shape(), (bu.len(), bt.len()));
    assert!(max_abs(&(&back.matrix * &a.matrix - DMatrix::identity(bt.len(), bt.len()))) < 1e-9);
    // All-zero maps to all-zero with coefficient 1.
    let zero_t = bt.index_of(&vec![0; bt.edges().len()]).unwrap();
    let zero_u = bu.index_of(&vec![0; bu.edges().len()]).unwrap();
    assert!((a.matrix[(zero_u, zero_t)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    // Entries vanish unless the colourings agree on the boundary.
    let common: Vec<(usize, usize)> = bt
        .edges()
        .iter()
        .enumerate()
        .filter_map(|(k, e)| bu.edge_position(*e).map(|p| (k, p)))
        .collect();
    for (col, f) in bt.colourings().iter().enumerate() {
        for (row, g) in bu.colourings().iter().enumerate() {
            if common.iter().any(|&(k, p)| f[k] != g[p]) {
                assert_eq!(a.matrix[(row, col)], Complex64::new(0.0, 0.0));
            }
        }
    }
}

#[test]
fn flip_then_flip_back_is_identity() {
    for points in small_point_sets() {
        for t in all_triangulations(&points) {
            for r in 3..=5 {
                let level = Level::new(r).unwrap();
                // Dense storage of a 2848-dimensional space is too heavy here.
                if count_colourings(&t, &level) > 600 {
                    continue;
                }
                for q in t
                    .internal_edges()
                    .into_iter()
                    .filter(|q| convex(&points, q))
                {
                    let u = t.flip(q.diagonal()).unwrap();
                    let op = compose_path(&[t.clone(), u, t.clone()], &level).unwrap();
                    assert!(op.identity_deviation() < 1e-9, "r = {r}");
                }
            }
        }
    }
}

#[test]
fn shape_mismatch_is_reported() {
    let level = Level::new(3).unwrap();
    let t = delaunay(&polygon(6, 1.0), &Tolerances::default()).unwrap();
    let b = ColouringBasis::new(&t, &level);
    assert!(matches!(
        flip_operator(&b, &b, &level),
        Err(RecouplingError::ShapeMismatch(_))
    ));
    let qs = t.internal_edges();
    let two = t.flip(qs[0].diagonal()).unwrap().flip(qs[2].diagonal());
    if let Ok(two) = two {
        let b2 = ColouringBasis::new(&two, &level);
        assert!(matches!(
            flip_operator(&b, &b2, &level),
            Err(RecouplingError::ShapeMismatch(_))
        ));
    }
}

#[test]
fn pentagon_identity() {
    let mut rng = StdRng::seed_from_u64(17);
    for r in 3..=5 {
        let level = Level::new(r).unwrap();
        for _ in 0..10 {
            let pts = random_convex_pentagon(&mut rng);
            let dev = verify_pentagon(&level, &pts).unwrap();
            assert!(dev < 1e-9, "r = {r}: {dev}");
        }
    }
    let mut not_convex = polygon(4, 1.0);
    not_convex.push(Point::new(0.0, 0.0));
    let pts: [Point; 5] = not_convex.try_into().unwrap();
    assert_eq!(
        verify_pentagon(&Level::new(3).unwrap(), &pts),
        Err(RecouplingError::NotConvex)
    );
}

#[test]
fn disjoint_flips_commute() {
    let mut rng = StdRng::seed_from_u64(23);
    let mut sharing_edge = 0;
    for k in 0..10 {
        // Dense matrices: keep the colouring spaces small.
        let (n, r) = if k % 2 == 0 { (7, 3) } else { (6, 4) };
        let (t, e1, e2, shares) = commuting_instance(&mut rng, n);
        let dev = verify_commutation(&Level::new(r).unwrap(), &t, e1, e2).unwrap();
        assert!(dev < 1e-9, "{dev}");
        sharing_edge += usize::from(shares);
    }
    assert!(sharing_edge > 0);
    // Flips whose quads share a triangle are refused.
    let t = delaunay(&polygon(5, 1.0), &Tolerances::default()).unwrap();
    let qs = t.internal_edges();
    let err = verify_commutation(
        &Level::new(3).unwrap(),
        &t,
        qs[0].diagonal(),
        qs[1].diagonal(),
    );
    assert!(matches!(err, Err(RecouplingError::ShapeMismatch(_))));
}

fn trace_powers(m: &DMatrix<Complex64>, k: usize) -> Vec<Complex64> {
    let mut p = m.clone();
    let mut out = Vec::new();
    for _ in 0..k {
        out.push(p.trace());
        p = &p * m;
    }
    out
}

#[test]
fn example_operator_at_level_four() {
    let level = Level::new(4).unwrap();
    let settings = ScanSettings::default();
    let (op, run) = braid_operator(&rotating_pair_scene(1.0), &level, &settings).unwrap();
    assert_eq!(run.distinct_triangulations(), 6);
    for s in &run.states {
        assert_eq!(enumerate_colourings(s, &level).len(), 160);
    }
    assert_eq!(op.matrix.shape(), (160, 160));
    assert!(op.identity_deviation() > 0.5);
    assert_eq!(
        eigen_multiplicity(&op.matrix, Complex64::new(-1.0, 0.0), 1e-6),
        20
    );
    assert_eq!(
        eigen_multiplicity(&op.matrix, Complex64::new(2.0, 0.0), 1e-6),
        0
    );

    // Running the loop twice gives the square.
    let (twice, _) = braid_operator(&rotating_pair_scene(2.0), &level, &settings).unwrap();
    assert!(max_abs(&(&twice.matrix - &op.matrix * &op.matrix)) < 1e-8);

    // Starting the loop at another triangulation conjugates the operator.
    let traces = trace_powers(&op.matrix, 4);
    let n = run.states.len() - 1;
    for shift in 1..n {
        let mut states: Vec<Triangulation> = run.states[shift..].to_vec();
        states.extend_from_slice(&run.states[1..=shift]);
        let rotated = compose_path(&states, &level).unwrap();
        for (a, b) in traces.iter().zip(trace_powers(&rotated.matrix, 4)) {
            assert!((a - b).norm() < 1e-6, "shift {shift}");
        }
    }
}

#[test]
fn static_and_open_scenes() {
    let level = Level::new(4).unwrap();
    let fixed = |x: f64, y: f64| Trajectory::Fixed { point: [x, y] };
    let scene = Scene::new(
        0.0,
        1.0,
        vec![
            fixed(0.0, 0.0),
            fixed(2.0, 0.1),
            fixed(1.1, 1.7),
            fixed(0.9, 0.6),
        ],
    )
    .unwrap();
    let (op, _) = braid_operator(&scene, &level, &ScanSettings::default()).unwrap();
    assert_eq!(op.identity_deviation(), 0.0);
    assert_eq!(
        eigen_multiplicity(&op.matrix, Complex64::new(1.0, 0.0), 1e-6),
        op.matrix.nrows()
    );

    let half = rotating_pair_scene(1.0).with_t_end(PI);
    let err = braid_operator(&half, &level, &ScanSettings::default()).unwrap_err();
    assert_eq!(err, RecouplingError::NotClosedLoop);
}

#[test]
fn matrix_record_is_row_major() {
    let level = Level::new(3).unwrap();
    let (t, u) = quad_pair();
    let a = flip_operator(
        &ColouringBasis::new(&t, &level),
        &ColouringBasis::new(&u, &level),
        &level,
    )
    .unwrap();
    let rec = a.to_json();
    assert_eq!(rec.data.len(), rec.rows * rec.cols);
    let (i, j) = (rec.rows - 1, 1);
    assert_eq!(
        rec.data[i * rec.cols + j],
        [a.matrix[(i, j)].re, a.matrix[(i, j)].im]
    );
    assert_eq!(rec.domain_edges.len(), 5);
}
