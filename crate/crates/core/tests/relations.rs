//! Relation library: braid pairs, lantern, daisies and the linear-plumbing
//! relations, plus substitution behavior.

use std::time::Instant;

use monodromy_core::fatgroup::Word;
use monodromy_core::mcgword::{
    evaluate, substitute, Factor, Relation, RelationId, RelationInstance, SubstituteDir,
};
use monodromy_core::surfaces::{CurveRef, Seed, Surface};

fn pos(s: &Surface, w: &Word) -> Factor {
    Factor::pos(CurveRef::from_loop(s, w.clone()).unwrap())
}

fn side(s: &Surface, ws: &[Word]) -> Vec<Factor> {
    ws.iter().map(|w| pos(s, w)).collect()
}

#[test]
fn lantern_equality_is_fast() {
    let t = Instant::now();
    let r = Relation::lantern();
    let s = &*r.model;
    assert_eq!(evaluate(s, &side(s, &r.lhs)), evaluate(s, &side(s, &r.rhs)));
    assert!(
        t.elapsed().as_secs_f64() < 0.1,
        "lantern took {:?}",
        t.elapsed()
    );
}

#[test]
fn lantern_sides_differ_from_partial_products() {
    let r = Relation::lantern();
    let s = &*r.model;
    let lhs = evaluate(s, &side(s, &r.lhs));
    assert_ne!(lhs, evaluate(s, &side(s, &r.rhs[..2])));
    assert_ne!(lhs, evaluate(s, &side(s, &r.lhs[..3])));
}

#[test]
fn every_lantern_triple_holds() {
    for k in 0..3 {
        Relation::lantern_with(k).holds_in_model().unwrap();
    }
}

#[test]
fn daisies_hold_and_daisy_two_is_the_lantern() {
    for m in 2..=6 {
        Relation::daisy(m)
            .holds_in_model()
            .unwrap_or_else(|e| panic!("daisy({m}): {e}"));
    }
    let d = Relation::daisy(2);
    let l = Relation::lantern();
    assert_eq!(d.model.rank(), l.model.rank());
    let s = &*l.model;
    let mut dl = d.lhs.clone();
    let mut ll = l.lhs.clone();
    dl.sort();
    ll.sort();
    assert_eq!(dl, ll);
    assert_eq!(evaluate(s, &side(s, &d.rhs)), evaluate(s, &side(s, &l.rhs)));
}

#[test]
fn linear_plumbing_relations_hold_for_small_q() {
    for q in 0..=1 {
        Relation::linear_eg(q).holds_in_model().unwrap();
        Relation::linear_h(q).holds_in_model().unwrap();
        Relation::linear_i(q).holds_in_model().unwrap();
    }
}

#[test]
fn braid_relation_for_once_meeting_pairs() {
    let mut checked = 0;
    for s in [
        Surface::fiber(5, 1, 2).unwrap(),
        Surface::fiber(7, 3, 1).unwrap(),
        Surface::fiber(4, 2, 0).unwrap(),
    ] {
        let cat = s.catalog();
        for (i, &a) in cat.iter().enumerate() {
            for &b in &cat[i + 1..] {
                let (wa, wb) = (s.seed_word(a).unwrap(), s.seed_word(b).unwrap());
                if s.pairing(&s.homology(&wa), &s.homology(&wb)).abs() != 1 {
                    continue;
                }
                let ca = CurveRef::seed(&s, a).unwrap();
                let cb = CurveRef::seed(&s, b).unwrap();
                RelationInstance::braid(&ca, &cb)
                    .verify(&s)
                    .unwrap_or_else(|e| panic!("{a}, {b}: {e}"));
                checked += 1;
            }
        }
    }
    assert!(checked >= 10, "only {checked} pairs");
}

#[test]
fn disjoint_seeds_commute_but_do_not_braid() {
    let s = Surface::fiber(5, 1, 2).unwrap();
    let a1 = CurveRef::seed(&s, Seed::Alpha(1)).unwrap();
    let a3 = CurveRef::seed(&s, Seed::Alpha(3)).unwrap();
    let w = [Factor::pos(a1.clone()), Factor::pos(a3.clone())];
    let v = [Factor::pos(a3.clone()), Factor::pos(a1.clone())];
    assert_eq!(evaluate(&s, &w), evaluate(&s, &v));
    assert!(RelationInstance::braid(&a1, &a3).verify(&s).is_err());
}

#[test]
fn lantern_substitution_round_trip() {
    let r = Relation::lantern();
    let s = &*r.model;
    let phi: Vec<Word> = (1..=3).map(Word::gen).collect();
    let inst = r.instance(s, &phi, "x").unwrap().verify(s).unwrap();
    let w = side(s, &r.lhs);
    let forward = substitute(s, &w, 0, &inst, SubstituteDir::LhsToRhs).unwrap();
    assert_eq!(forward.len(), 3);
    assert_eq!(evaluate(s, &forward), evaluate(s, &w));
    let back = substitute(s, &forward, 0, &inst, SubstituteDir::RhsToLhs).unwrap();
    assert_eq!(evaluate(s, &back), evaluate(s, &w));
    assert!(substitute(s, &w[1..], 0, &inst, SubstituteDir::LhsToRhs).is_err());
}

#[test]
fn failing_instance_is_rejected() {
    let r = Relation::lantern();
    let s = &*r.model;
    let phi: Vec<Word> = (1..=3).map(Word::gen).collect();
    let mut inst = r.instance(s, &phi, "x").unwrap();
    inst.rhs.swap(0, 1);
    inst.rhs[0].exp = 2;
    assert!(inst.verify(s).is_err());
}

#[test]
fn relation_ids_round_trip_through_text() {
    let ids = [
        RelationId::Braid,
        RelationId::Lantern,
        RelationId::Daisy(4),
        RelationId::LinearEG(2),
        RelationId::LinearH(0),
        RelationId::LinearI(3),
        RelationId::Embedded("f(q=0)".into()),
    ];
    for id in ids {
        assert_eq!(id.to_string().parse::<RelationId>().unwrap(), id);
    }
}
