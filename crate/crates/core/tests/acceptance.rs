//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every check is an exact equality; the only tolerances are the two
//! wall-clock budgets below.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use monodromy_core::families::{
    certify_all, gay_mark_word, grid, Certificate, FamilyError, Instance,
};
use monodromy_core::fatgroup::{MarkedClass, Word};
use monodromy_core::fourman::{intersection_form, vertex_form, Fibration, Snf};
use monodromy_core::mcgword::{evaluate, parse_word, Factor, Params, Relation, RelationInstance};
use monodromy_core::surfaces::{CurveRef, Surface};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const LANTERN_BUDGET: Duration = Duration::from_millis(100);
const GRID_BUDGET: Duration = Duration::from_secs(60);
const GRID_N: i64 = 3;
const KERNEL_CASES: u32 = 10_000;
const MIN_MUTANTS: usize = 20;

struct Line {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn loops(s: &Surface, ws: &[Word]) -> Vec<Factor> {
    ws.iter()
        .map(|w| Factor::pos(CurveRef::from_loop(s, w.clone()).unwrap()))
        .collect()
}

fn lantern() -> Line {
    let t = Instant::now();
    let r = Relation::lantern();
    let s = &*r.model;
    let equal = evaluate(s, &loops(s, &r.lhs)) == evaluate(s, &loops(s, &r.rhs));
    let dt = t.elapsed();
    Line {
        id: 1,
        name: "lantern certificate",
        pass: equal && dt < LANTERN_BUDGET,
        detail: format!("equal={equal} in {dt:.2?} (budget {LANTERN_BUDGET:?})"),
    }
}

fn relations() -> Line {
    let mut failures = Vec::new();
    let mut braids = 0;
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
                braids += 1;
                let (ca, cb) = (
                    CurveRef::seed(&s, a).unwrap(),
                    CurveRef::seed(&s, b).unwrap(),
                );
                if RelationInstance::braid(&ca, &cb).verify(&s).is_err() {
                    failures.push(format!("braid {a},{b}"));
                }
            }
        }
    }
    for m in 2..=6 {
        if Relation::daisy(m).holds_in_model().is_err() {
            failures.push(format!("daisy({m})"));
        }
    }
    let (d, l) = (Relation::daisy(2), Relation::lantern());
    let s = &*l.model;
    if evaluate(s, &loops(s, &d.rhs)) != evaluate(s, &loops(s, &l.rhs)) {
        failures.push("daisy(2) vs lantern".into());
    }
    for q in 0..=1 {
        for (name, r) in [
            ("eg", Relation::linear_eg(q)),
            ("h", Relation::linear_h(q)),
            ("i", Relation::linear_i(q)),
        ] {
            if r.holds_in_model().is_err() {
                failures.push(format!("linear-{name}({q})"));
            }
        }
    }
    Line {
        id: 2,
        name: "relation library",
        pass: failures.is_empty() && braids > 0,
        detail: format!("{braids} braid pairs, daisy 2..6, 6 linear shapes; failures {failures:?}"),
    }
}

type Certs = Vec<(Instance, Result<Certificate, FamilyError>)>;

fn failing<F: Fn(&Certificate) -> bool>(certs: &Certs, ok: F) -> Vec<String> {
    certs
        .iter()
        .filter(|(_, c)| !c.as_ref().is_ok_and(&ok))
        .map(|(i, c)| match c {
            Ok(_) => i.label(),
            Err(e) => format!("{i}: {e}"),
        })
        .collect()
}

fn families(certs: &Certs, dt: Duration) -> Line {
    let bad = failing(certs, |c| {
        let k = &c.checks;
        k.script_replays && k.faithful_equal && k.positive && k.length_is_b1
    });
    Line {
        id: 3,
        name: "family certificates",
        pass: bad.is_empty() && dt < GRID_BUDGET,
        detail: format!(
            "{}/{} instances in {dt:.2?} (budget {GRID_BUDGET:?}); failing {bad:?}",
            certs.len() - bad.len(),
            certs.len()
        ),
    }
}

fn rational_balls(certs: &Certs) -> Line {
    let bad = failing(certs, |c| {
        c.y.as_ref().is_some_and(|y| {
            let squared = y
                .h1_order
                .map(|h| (u128::from(h) * u128::from(h)).to_string());
            y.chi == 1
                && y.betti == (1, 0, 0)
                && squared.as_deref() == Some(c.plumbing_det.as_str())
        })
    });
    Line {
        id: 4,
        name: "rational homology balls",
        pass: bad.is_empty(),
        detail: format!("chi=1, b1=b2=0, |H1|^2=|det Q|; failing {bad:?}"),
    }
}

fn plumbings(certs: &Certs) -> Line {
    let bad = failing(certs, |c| {
        let rotations_one = c.x.rotations.iter().all(|r| *r == Some(1));
        c.checks.h1_x_trivial && c.checks.lattice_match && c.checks.adjunction && rotations_one
    });
    Line {
        id: 5,
        name: "plumbing homology of X",
        pass: bad.is_empty(),
        detail: format!("H1=0, Gram=plumbing, adjunction with rotations 1; failing {bad:?}"),
    }
}

fn tridiagonal(weights: &[i64]) -> Vec<Vec<i64>> {
    let n = weights.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        weights[i]
                    } else {
                        i64::from(i.abs_diff(j) == 1)
                    }
                })
                .collect()
        })
        .collect()
}

fn calibration() -> Line {
    let s = std::sync::Arc::new(Surface::planar(3).unwrap());
    let w = parse_word(&s, "a1 a2 a3 out", Params::default()).unwrap();
    let form = intersection_form(&Fibration::new(s, w).unwrap()).unwrap();
    let lantern_ok = form.gram() == [vec![-4]];
    let mut bad = Vec::new();
    for weights in [vec![-2, -2], vec![-2, -2, -2], vec![-3, -2]] {
        let ok = gay_mark_word(&weights)
            .and_then(|m| {
                Ok(vertex_form(&m.fibration()?)?.gram() == tridiagonal(&weights).as_slice())
            })
            .unwrap_or(false);
        if !ok {
            bad.push(format!("{weights:?}"));
        }
    }
    Line {
        id: 6,
        name: "calibration oracles",
        pass: lantern_ok && bad.is_empty(),
        detail: format!(
            "lantern LHS form {:?}; Gay-Mark failing {bad:?}",
            form.gram()
        ),
    }
}

fn mutation() -> Line {
    let t = common::run_mutation_suite();
    let killed = t.total - t.survivors.len();
    Line {
        id: 7,
        name: "negative controls",
        pass: t.total >= MIN_MUTANTS && t.survivors.is_empty(),
        detail: format!(
            "{killed}/{} mutants killed ({} equivalent excluded); survivors {:?}",
            t.total, t.equivalent, t.survivors
        ),
    }
}

fn twist_product(s: &Surface, picks: &[(usize, bool)]) -> MarkedClass {
    let cat = s.catalog();
    picks.iter().fold(s.identity(), |acc, &(k, neg)| {
        let c = s.seed_word(cat[k % cat.len()]).unwrap();
        acc.compose(&s.twist(&c, if neg { -1 } else { 1 })).unwrap()
    })
}

fn kernel() -> Line {
    let s = Surface::fiber(5, 1, 2).unwrap();
    let letters = prop::collection::vec(
        (1..=8i32, any::<bool>()).prop_map(|(g, n)| if n { -g } else { g }),
        0..32,
    );
    let picks = || prop::collection::vec((0usize..64, any::<bool>()), 0..4);
    let mut runner = TestRunner::new(Config {
        cases: KERNEL_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    let result = runner.run(&(letters, picks(), picks(), picks()), |(raw, a, b, c)| {
        let w = Word::reduced(raw.iter().copied());
        prop_assert_eq!(Word::reduced(w.letters().iter().copied()), w.clone());
        prop_assert!(w.mul(&w.inverse()).is_empty());
        let (f, g, h) = (
            twist_product(&s, &a),
            twist_product(&s, &b),
            twist_product(&s, &c),
        );
        prop_assert_eq!(
            f.compose(&g).unwrap().compose(&h).unwrap(),
            f.compose(&g.compose(&h).unwrap()).unwrap()
        );
        let inv = f.inverse().unwrap();
        prop_assert!(
            f.compose(&inv).unwrap().is_identity() && inv.compose(&f).unwrap().is_identity()
        );
        Ok(())
    });
    let snf_checked =
        cfg!(debug_assertions) && Snf::new(&[vec![2, 4], vec![6, 8]]).verify().is_ok();
    Line {
        id: 8,
        name: "kernel properties",
        pass: result.is_ok() && snf_checked,
        detail: format!(
            "{KERNEL_CASES} randomized reduction/composition/inverse cases: {}; SNF reconstruction on every call: {snf_checked}",
            match &result {
                Ok(()) => "ok".to_string(),
                Err(e) => e.to_string(),
            }
        ),
    }
}

fn main() -> ExitCode {
    let t = Instant::now();
    let insts = grid(GRID_N);
    let certs: Certs = insts.iter().copied().zip(certify_all(&insts)).collect();
    let grid_time = t.elapsed();

    let lines = [
        lantern(),
        relations(),
        families(&certs, grid_time),
        rational_balls(&certs),
        plumbings(&certs),
        calibration(),
        mutation(),
        kernel(),
    ];
    for l in &lines {
        println!(
            "[{}] {}. {}: {}",
            if l.pass { "PASS" } else { "FAIL" },
            l.id,
            l.name,
            l.detail
        );
    }
    let passed = lines.iter().filter(|l| l.pass).count();
    println!("acceptance: {passed}/{} criteria pass", lines.len());
    if passed == lines.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
