//! Homology of Lefschetz fibrations: Smith normal form, Euler
//! characteristic, intersection forms and the calibration graphs.

use std::sync::Arc;

use monodromy_core::families::{
    family_graph, gay_mark_word, monodromy_for_graph, Family, Instance,
};
use monodromy_core::fourman::{
    adjunction_check, euler_char, h1_fibration, intersection_form, is_qhb, plumbing_det,
    plumbing_matrix, report, vertex_classes, vertex_form, Fibration, ResolutionGraph, Snf,
};
use monodromy_core::mcgword::{parse_word, Params};
use monodromy_core::surfaces::Surface;
use num_bigint::BigInt;
use proptest::prelude::*;

fn planar(n: usize, word: &str) -> Fibration {
    let s = Arc::new(Surface::planar(n).unwrap());
    let w = parse_word(&s, word, Params::default()).unwrap();
    Fibration::new(s, w).unwrap()
}

/// Fraction-free elimination, independent of the Smith form code.
fn bareiss(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn tridiagonal(weights: &[i64]) -> Vec<Vec<i64>> {
    let n = weights.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => weights[i],
                    1 => 1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

#[test]
fn lantern_sides() {
    let lhs = planar(3, "a1 a2 a3 out");
    let rhs = planar(3, "L[2,1] L[3,1] L[3,2]");
    assert_eq!(euler_char(&lhs), 2);
    assert_eq!(euler_char(&rhs), 1);

    let h = h1_fibration(&rhs).unwrap();
    assert_eq!((h.betti, h.torsion.clone()), (0, vec![2]));
    assert!(is_qhb(&rhs));
    assert_eq!(report(&rhs).unwrap().h1_order, Some(2));

    let h = h1_fibration(&lhs).unwrap();
    assert_eq!((h.betti, h.torsion.len()), (0, 0));
    assert!(!is_qhb(&lhs));
    assert_eq!(intersection_form(&lhs).unwrap().gram(), &[vec![-4]]);
}

#[test]
fn empty_word_on_annulus_keeps_b1() {
    let f = planar(1, "");
    let h = h1_fibration(&f).unwrap();
    assert_eq!(h.betti, 1);
    assert_eq!(euler_char(&f), 0);
}

#[test]
fn four_vertex_has_the_expected_class_and_adjunction() {
    let m = gay_mark_word(&[-4]).unwrap();
    let f = m.fibration().unwrap();
    assert_eq!(f.len(), 4);
    assert_eq!(vertex_classes(&f).unwrap(), &[vec![-1, -1, -1, 1]]);
    let adj = adjunction_check(&f).unwrap();
    assert_eq!((adj[0].c1, adj[0].square, adj[0].pass), (-2, -4, true));
}

#[test]
fn single_vertex_adjunction_for_every_degree() {
    for a in 2..=8i64 {
        let f = gay_mark_word(&[-a]).unwrap().fibration().unwrap();
        assert!(f.rotations().iter().all(|r| *r == Some(1)));
        let adj = adjunction_check(&f).unwrap();
        assert_eq!(adj.len(), 1);
        assert_eq!((adj[0].c1, adj[0].square), (2 - a, -a), "a = {a}");
    }
}

#[test]
fn gay_mark_calibration_graphs() {
    for weights in [
        vec![-2, -2],
        vec![-2, -2, -2],
        vec![-3, -2],
        vec![-2, -5, -3],
    ] {
        let m = gay_mark_word(&weights).unwrap();
        let f = m.fibration().unwrap();
        assert_eq!(
            vertex_form(&f).unwrap().gram(),
            tridiagonal(&weights).as_slice(),
            "{weights:?}"
        );
        let rep = report(&f).unwrap();
        assert_eq!(rep.betti, (1, 0, weights.len()));
        assert_eq!(rep.vertices_span_kernel, Some(true));
        assert!(rep.adjunction.iter().all(|a| a.pass));
    }
    let f = gay_mark_word(&[-2, -2]).unwrap().fibration().unwrap();
    assert_eq!(vertex_form(&f).unwrap().gram(), &[vec![-2, 1], vec![1, -2]]);
}

#[test]
fn plumbing_determinants() {
    assert_eq!(
        plumbing_det(&ResolutionGraph::linear(&[-4])).unwrap(),
        BigInt::from(4)
    );
    assert_eq!(
        plumbing_det(&ResolutionGraph::linear(&[-1])).unwrap(),
        BigInt::from(1)
    );
    assert_eq!(
        plumbing_det(&ResolutionGraph::linear(&[-2, -2])).unwrap(),
        BigInt::from(3)
    );
    for fam in Family::ALL {
        let inst = Instance::new(fam, Params { p: 1, q: 2, r: 1 }).unwrap();
        let g = family_graph(&inst);
        let q = plumbing_matrix(&g).unwrap();
        assert_eq!(
            plumbing_det(&g).unwrap(),
            BigInt::from(bareiss(q.gram()).abs()),
            "{inst}"
        );
    }
}

#[test]
fn graph_input_in_any_vertex_order() {
    // chain -3 - -2 - -4 listed out of order
    let g = ResolutionGraph::new(vec![-2, -4, -3], vec![(0, 1), (2, 0)]);
    let m = monodromy_for_graph(&g).unwrap();
    let f = m.fibration().unwrap();
    assert_eq!(
        vertex_form(&f).unwrap().gram(),
        plumbing_matrix(&g).unwrap().gram()
    );

    let inst = Instance::new(Family::D, Params { p: 0, q: 1, r: 0 }).unwrap();
    let mut g = family_graph(&inst);
    let n = g.len();
    let perm: Vec<usize> = (0..n).map(|i| (i * 5 + 3) % n).collect();
    let mut weights = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        weights[p] = g.weights[i];
    }
    g = ResolutionGraph::new(
        weights,
        g.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect(),
    );
    let m = monodromy_for_graph(&g).unwrap();
    let f = m.fibration().unwrap();
    assert_eq!(
        vertex_form(&f).unwrap().gram(),
        plumbing_matrix(&g).unwrap().gram()
    );
}

#[test]
fn unsupported_graphs_are_rejected() {
    let cycle = ResolutionGraph::new(vec![-2, -2, -2], vec![(0, 1), (1, 2), (2, 0)]);
    assert!(monodromy_for_graph(&cycle).is_err());
    let split = ResolutionGraph::new(vec![-2, -2], vec![]);
    assert!(monodromy_for_graph(&split).is_err());
    let weak = ResolutionGraph::linear(&[-1, -2]);
    assert!(monodromy_for_graph(&weak).is_err());
    let star = ResolutionGraph::new(
        vec![-2, -2, -2, -2, -2],
        vec![(0, 1), (0, 2), (0, 3), (0, 4)],
    );
    assert!(monodromy_for_graph(&star).is_err());
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6)
        .prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-6i64..=6, n), m))
}

fn square_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..=9, n), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_form_reconstructs(a in small_matrix()) {
        let s = Snf::new(&a);
        prop_assert!(s.verify().is_ok());
        let kernel = s.kernel_basis();
        for v in &kernel {
            for row in &a {
                let dot: BigInt = row.iter().zip(v).map(|(x, y)| BigInt::from(*x) * y).sum();
                prop_assert_eq!(dot, BigInt::from(0));
            }
        }
        prop_assert_eq!(kernel.len() + s.rank, a[0].len());
    }

    #[test]
    fn coker_order_is_abs_det(a in square_matrix()) {
        let s = Snf::new(&a);
        prop_assert_eq!(s.coker_order(), BigInt::from(bareiss(&a).abs()));
    }
}
