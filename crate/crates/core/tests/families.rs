//! Family templates, derivations and certificates.

use std::time::Instant;

use monodromy_core::families::{
    certify, certify_all, derive_wprime, family_graph, family_w, grid, Family, Instance, ScriptDoc,
};
use monodromy_core::fatgroup::Word;
use monodromy_core::fourman::{plumbing_matrix, report};
use monodromy_core::mcgword::{evaluate, h1_action, Params};

fn inst(f: Family, p: i64, q: i64, r: i64) -> Instance {
    Instance::new(f, Params { p, q, r }).unwrap()
}

fn sorted_degrees(i: &Instance) -> Vec<i64> {
    let mut w = family_graph(i).weights;
    w.sort();
    w
}

#[test]
fn normalization_and_labels() {
    let f = inst(Family::D, 5, 0, -1);
    assert_eq!(f.family, Family::F);
    assert_eq!(f.label(), "f(q=0)");
    assert_eq!(inst(Family::G, 0, 2, -1).label(), "e(p=0,q=2)");
    assert_eq!(inst(Family::G, 1, 0, 2).label(), "g(p=1,q=0,r=2)");
    assert_eq!(inst(Family::H, 3, 1, 2).params, Params { p: 0, q: 1, r: 0 });
    assert!(Instance::new(Family::D, Params { p: 0, q: 0, r: -2 }).is_err());
    assert!(Instance::new(Family::J, Params { p: 0, q: -1, r: 0 }).is_err());
    assert!("x".parse::<Family>().is_err());
    assert_eq!("G".parse::<Family>().unwrap(), Family::G);
}

#[test]
fn template_degrees() {
    assert_eq!(
        sorted_degrees(&inst(Family::D, 0, 0, 0)),
        vec![-5, -4, -3, -2, -2]
    );
    assert_eq!(
        sorted_degrees(&inst(Family::H, 0, 0, 0)),
        vec![-4, -4, -3, -3, -2]
    );
    assert_eq!(
        sorted_degrees(&inst(Family::I, 0, 0, 0)),
        vec![-6, -3, -3, -2, -2]
    );
    for i in grid(2) {
        let g = family_graph(&i);
        let center = (0..g.len())
            .find(|&v| g.neighbors(v).len() == 3)
            .expect("three legs");
        assert_eq!(g.weights[center], -2, "{i}");
        assert_eq!(g.bad_vertices(), vec![center], "{i}");
    }
}

#[test]
fn grid_has_every_family() {
    let g = grid(3);
    assert_eq!(g.len(), 112);
    for f in Family::ALL {
        assert!(g.iter().any(|i| i.family == f), "{f}");
    }
    let mut labels: Vec<String> = g.iter().map(Instance::label).collect();
    labels.sort();
    labels.dedup();
    assert_eq!(labels.len(), g.len());
}

#[test]
fn global_monodromy_length_is_b1_plus_vertices() {
    // χ(X) = 1 − b₁ + len W and H₁(X) = 0 force len W = b₁ + #vertices
    for i in grid(3) {
        let m = family_w(&i).unwrap();
        assert_eq!(m.word.len(), m.surface.b1() + m.graph.len(), "{i}");
        assert!(m.word.iter().all(|f| f.exp == 1));
    }
}

#[test]
fn d_family_words_agree_on_homology() {
    let (d, c) = certify(&inst(Family::D, 0, 0, 0)).unwrap();
    let s = &*d.monodromy.surface;
    assert_eq!(h1_action(s, &d.monodromy.word), h1_action(s, &d.w_prime));
    assert_eq!(evaluate(s, &d.monodromy.word), evaluate(s, &d.w_prime));
    assert!(c.checks.pass(), "{:?}", c.checks.failures());
    assert_eq!(c.wprime_len, Some(s.b1()));
}

#[test]
fn x_lattice_is_the_plumbing_lattice() {
    let i = inst(Family::D, 0, 0, 0);
    let m = family_w(&i).unwrap();
    let rep = report(&m.fibration().unwrap()).unwrap();
    assert_eq!(
        rep.vertex_lattice.unwrap().gram(),
        plumbing_matrix(&m.graph).unwrap().gram()
    );
    assert_eq!((rep.betti.1, rep.torsion.len()), (0, 0));
}

#[test]
fn f_and_j_derivations() {
    let f = derive_wprime(&inst(Family::F, 0, 0, -1)).unwrap();
    assert!(f.w_prime.iter().all(|x| x.exp > 0));
    let j = derive_wprime(&inst(Family::J, 0, 0, 0)).unwrap();
    let embedded = j
        .script
        .steps
        .iter()
        .any(|s| s.op.to_string().contains("f(q=0)"));
    assert!(
        embedded,
        "the (j) derivation substitutes the certified (f) relation"
    );
}

#[test]
fn full_grid_certifies() {
    let t = Instant::now();
    let insts = grid(3);
    let certs = certify_all(&insts);
    let elapsed = t.elapsed();
    for (i, c) in insts.iter().zip(&certs) {
        let c = c.as_ref().unwrap_or_else(|e| panic!("{i}: {e}"));
        assert!(c.checks.pass(), "{i}: {:?}", c.checks.failures());
        let y = c.y.as_ref().unwrap();
        assert_eq!((y.chi, y.betti), (1, (1, 0, 0)));
        let h = y.h1_order.unwrap();
        assert_eq!((h * h).to_string(), c.plumbing_det, "{i}");
    }
    assert!(elapsed.as_secs_f64() < 60.0, "grid took {elapsed:?}");
}

#[test]
fn script_document_round_trip() {
    let i = inst(Family::G, 1, 0, 1);
    let d = derive_wprime(&i).unwrap();
    let doc = ScriptDoc::new(&i, &d.script);
    let text = serde_json::to_string(&doc).unwrap();
    let back: ScriptDoc = serde_json::from_str(&text).unwrap();
    assert_eq!(back, doc);
    let script = back.to_script(&d.monodromy.surface).unwrap();
    let replay = script.replay(&d.monodromy.surface, &d.monodromy.word);
    assert_eq!(replay.failed_at, None);
    let result: Vec<(Word, i32)> = replay
        .result
        .unwrap()
        .iter()
        .map(|f| (f.word().clone(), f.exp))
        .collect();
    let expect: Vec<(Word, i32)> = d
        .w_prime
        .iter()
        .map(|f| (f.word().clone(), f.exp))
        .collect();
    assert_eq!(result, expect);
}
