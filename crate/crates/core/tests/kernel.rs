//! Free-group and marked-class kernel: reduction, composition and inverse
//! laws, boundary arcs and the homology action.

use monodromy_core::fatgroup::{MarkedClass, Word};
use monodromy_core::mcgword::{evaluate, h1_action, Factor};
use monodromy_core::surfaces::{CurveRef, Seed, Surface};
use proptest::prelude::*;

fn letters(rank: i32, max: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(
        (1..=rank, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g }),
        0..max,
    )
}

fn naive_reduce(raw: &[i32]) -> Vec<i32> {
    let mut w = raw.to_vec();
    loop {
        let Some(i) = w.windows(2).position(|p| p[0] == -p[1]) else {
            return w;
        };
        w.drain(i..i + 2);
    }
}

fn fiber() -> Surface {
    Surface::fiber(5, 1, 2).unwrap()
}

fn twists(s: &Surface, picks: &[(usize, bool)]) -> MarkedClass {
    let cat = s.catalog();
    let mut out = s.identity();
    for &(k, neg) in picks {
        let c = s.seed_word(cat[k % cat.len()]).unwrap();
        out = out.compose(&s.twist(&c, if neg { -1 } else { 1 })).unwrap();
    }
    out
}

fn picks() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..64, any::<bool>()), 0..5)
}

#[test]
fn reduction_examples() {
    assert_eq!(Word::reduced([1, -1]), Word::empty());
    assert_eq!(Word::reduced([1, 2, -2, 1]), Word::from([1, 1]));
    assert!(Word::from_letters(&[1, 4], 3).is_err());
    assert!(Word::from_letters(&[0], 3).is_err());
}

#[test]
fn hurwitz_identity_on_intersecting_seeds() {
    let s = fiber();
    let a = s.seed_word(Seed::Alpha(2)).unwrap();
    let b = s.seed_word(Seed::Beta(1)).unwrap();
    let tb_inv = s.twist(&b, -1);
    let a2 = s.image(&tb_inv, &a);
    let lhs = s.twist(&a, 1).compose(&s.twist(&b, 1)).unwrap();
    let rhs = s.twist(&b, 1).compose(&s.twist(&a2, 1)).unwrap();
    assert_eq!(lhs, rhs);
    assert_ne!(lhs, s.twist(&b, 1).compose(&s.twist(&a, 1)).unwrap());
}

#[test]
fn inner_boundary_twist_is_seen_by_arcs() {
    let s = Surface::planar(2).unwrap();
    for j in 0..2 {
        let c = s.seed_word(Seed::Inner(j)).unwrap();
        let t = s.twist(&c, 1);
        assert!(
            t.aut().is_identity(),
            "generator images of a boundary twist are conjugation-trivial"
        );
        assert!(!t.is_identity());
        assert!(t.first_difference(&s.identity()).is_some());
    }
}

#[test]
fn planar_twists_act_trivially_on_homology() {
    let s = Surface::planar(4).unwrap();
    let id = s.identity().abelianize();
    for seed in s.catalog() {
        let c = s.seed_word(seed).unwrap();
        assert_eq!(s.twist(&c, 1).abelianize(), id, "{seed}");
    }
}

#[test]
fn handle_twists_are_transvections() {
    let s = fiber();
    let rank = s.rank();
    let mut sign = None;
    for seed in s.catalog() {
        let c = s.seed_word(seed).unwrap();
        let hc = s.homology(&c);
        let t = s.twist(&c, 1);
        for g in 1..=rank as i32 {
            let v = s.homology(&Word::gen(g));
            let k = s.pairing(&v, &hc);
            let got = s.homology(&t.apply(&Word::gen(g)));
            if k == 0 {
                assert_eq!(got, v);
                continue;
            }
            let e = if got
                .iter()
                .zip(&v)
                .zip(&hc)
                .all(|((x, y), z)| *x == y + k * z)
            {
                1
            } else {
                -1
            };
            let want: Vec<i64> = v.iter().zip(&hc).map(|(y, z)| y + e * k * z).collect();
            assert_eq!(got, want, "{seed} on x{g}");
            assert_eq!(
                *sign.get_or_insert(e),
                e,
                "transvection sign must be uniform"
            );
        }
    }
    assert!(sign.is_some(), "some seed meets the handle");
}

#[test]
fn catalog_twists_fix_the_outer_word() {
    for s in [
        fiber(),
        Surface::planar(4).unwrap(),
        Surface::fiber(7, 3, 1).unwrap(),
    ] {
        let outer = s.outer_word();
        for seed in s.catalog() {
            let c = s.seed_word(seed).unwrap();
            for e in [1, -1] {
                assert_eq!(s.twist(&c, e).apply(&outer), outer, "{seed}^{e}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2500))]

    #[test]
    fn reduction_is_idempotent_and_inverts(raw in letters(6, 40)) {
        let w = Word::reduced(raw.iter().copied());
        prop_assert_eq!(w.letters().to_vec(), naive_reduce(&raw));
        prop_assert_eq!(Word::reduced(w.letters().iter().copied()), w.clone());
        prop_assert!(w.mul(&w.inverse()).is_empty());
        let raw_inv: Vec<i32> = raw.iter().rev().map(|x| -x).collect();
        prop_assert!(Word::reduced(raw.iter().chain(&raw_inv).copied()).is_empty());
    }

    #[test]
    fn composition_is_associative(a in picks(), b in picks(), c in picks()) {
        let s = fiber();
        let (f, g, h) = (twists(&s, &a), twists(&s, &b), twists(&s, &c));
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(s.identity().compose(&g).unwrap(), g.clone());
    }

    #[test]
    fn inverse_law_both_sides(a in picks()) {
        let s = fiber();
        let f = twists(&s, &a);
        let inv = f.inverse().unwrap();
        prop_assert!(f.compose(&inv).unwrap().is_identity());
        prop_assert!(inv.compose(&f).unwrap().is_identity());
        prop_assert_eq!(f.apply(&s.outer_word()), s.outer_word());
    }

    #[test]
    fn abelianization_matches_transvection_product(a in picks()) {
        let s = fiber();
        let cat = s.catalog();
        let word: Vec<Factor> = a
            .iter()
            .map(|&(k, neg)| Factor::new(CurveRef::seed(&s, cat[k % cat.len()]).unwrap(), if neg { -1 } else { 1 }))
            .collect();
        prop_assert_eq!(h1_action(&s, &word), evaluate(&s, &word).abelianize());
    }
}
