//! Mutants of certified derivations for the negative-control suites.

#![allow(dead_code)]

use monodromy_core::families::{
    apply, canonical, certify_from, derive_wprime, Derivation, Family, FamilyError, FinalChecks,
    Instance, Op, Script, Step,
};
use monodromy_core::fourman::{report, Fibration};
use monodromy_core::mcgword::{Dir, Factor, Params};
use monodromy_core::surfaces::Surface;
use rayon::prelude::*;

pub enum Change {
    /// Replay an edited script from the true global monodromy.
    Script(Script),
    /// Replay the true script from an edited global monodromy.
    Start(Vec<Factor>),
    /// Certify an edited final word directly.
    Final(Vec<Factor>),
}

pub struct Mutant {
    pub instance: Instance,
    pub label: String,
    pub change: Change,
}

pub fn base_instances() -> Vec<Instance> {
    let p = |f, p, q, r| Instance::new(f, Params { p, q, r }).unwrap();
    vec![
        p(Family::D, 0, 0, 0),
        p(Family::E, 0, 0, -1),
        p(Family::F, 0, 0, -1),
        p(Family::G, 0, 0, 0),
        p(Family::G, 1, 1, 1),
        p(Family::H, 0, 0, 0),
        p(Family::I, 0, 0, 0),
        p(Family::J, 0, 0, 0),
    ]
}

fn altered(op: &Op) -> Option<Op> {
    Some(match op {
        Op::Hurwitz { i, dir } => Op::Hurwitz {
            i: *i,
            dir: if *dir == Dir::Right {
                Dir::Left
            } else {
                Dir::Right
            },
        },
        Op::Move { from, to, keep } => Op::Move {
            from: *from,
            to: *to,
            keep: !keep,
        },
        Op::InsertCancel { at, curve, first } => Op::InsertCancel {
            at: *at,
            curve: curve.clone(),
            first: -first,
        },
        Op::CancelPair { at } => Op::CancelPair { at: at + 1 },
        Op::GlobalConj { curve, sign } => Op::GlobalConj {
            curve: curve.clone(),
            sign: -sign,
        },
        Op::Rewrite {
            at,
            len,
            new,
            reason,
        } => {
            let mut new = new.clone();
            new[0] = new[0].inverse();
            Op::Rewrite {
                at: *at,
                len: *len,
                new,
                reason: *reason,
            }
        }
        Op::Substitute { at, instance, dir } => Op::Substitute {
            at: at + 1,
            instance: instance.clone(),
            dir: *dir,
        },
        Op::Check { .. } => return None,
    })
}

/// Every single-step deletion and alteration of a word-changing step, one
/// exponent flip and one exponent doubling per final factor, and two twist
/// perturbations per global-monodromy factor.
///
/// An alteration whose replay rejoins the original derivation (same word
/// after the same step) is equivalent to the original and is left out. This
/// happens for moves past a block whose product commutes with the carried
/// factor.
pub fn mutants(d: &Derivation) -> (Vec<Mutant>, usize) {
    let inst = d.instance;
    let s = &*d.monodromy.surface;
    let mut out = Vec::new();
    let mut equivalent = 0;
    let steps = &d.script.steps;
    let mut states = vec![d.monodromy.word.clone()];
    for st in steps {
        let next = apply(s, states.last().unwrap(), &st.op).expect("certified script applies");
        states.push(next);
    }
    for (k, st) in steps.iter().enumerate() {
        let Some(alt) = altered(&st.op) else { continue };
        if rejoins(s, steps, &states, k, &alt) {
            equivalent += 1;
            continue;
        }
        let mut del = d.script.clone();
        del.steps.remove(k);
        out.push(Mutant {
            instance: inst,
            label: format!("{inst} delete step {k} ({})", st.op.kind()),
            change: Change::Script(del),
        });
        let mut edit = d.script.clone();
        edit.steps[k].op = alt;
        out.push(Mutant {
            instance: inst,
            label: format!("{inst} alter step {k} ({})", st.op.kind()),
            change: Change::Script(edit),
        });
    }
    for k in 0..d.w_prime.len() {
        let mut w = d.w_prime.clone();
        w[k].exp = -w[k].exp;
        out.push(Mutant {
            instance: inst,
            label: format!("{inst} flip exponent {k} of W'"),
            change: Change::Final(w),
        });
        let mut w = d.w_prime.clone();
        w[k].exp *= 2;
        out.push(Mutant {
            instance: inst,
            label: format!("{inst} double exponent {k} of W'"),
            change: Change::Final(w),
        });
    }
    let w = &d.monodromy.word;
    for k in 0..w.len() {
        let mut m = w.clone();
        m[k] = m[k].inverse();
        out.push(Mutant {
            instance: inst,
            label: format!("{inst} invert seed twist {k}"),
            change: Change::Start(m),
        });
        if let Some(j) = (0..w.len())
            .map(|j| (k + 1 + j) % w.len())
            .find(|&j| !w[j].curve.same_curve(&w[k].curve))
        {
            let mut m = w.clone();
            m[k] = Factor::new(w[j].curve.clone(), w[k].exp);
            out.push(Mutant {
                instance: inst,
                label: format!("{inst} replace seed twist {k} by {j}"),
                change: Change::Start(m),
            });
        }
    }
    (out, equivalent)
}

fn rejoins(s: &Surface, steps: &[Step], states: &[Vec<Factor>], k: usize, alt: &Op) -> bool {
    let Ok(mut w) = apply(s, &states[k], alt) else {
        return false;
    };
    for j in k..steps.len() {
        if j > k {
            match apply(s, &w, &steps[j].op) {
                Ok(next) => w = next,
                Err(_) => return false,
            }
        }
        if canonical(&w) == canonical(&states[j + 1]) {
            return true;
        }
    }
    false
}

/// Whether some certification criterion rejects the mutant.
pub fn killed(d: &Derivation, m: &Mutant) -> bool {
    let mono = &d.monodromy;
    let verdict: Result<bool, FamilyError> = match &m.change {
        Change::Script(script) => {
            certify_from(&m.instance, mono, &mono.word, script).map(|c| c.checks.pass())
        }
        Change::Start(start) => {
            certify_from(&m.instance, mono, start, &d.script).map(|c| c.checks.pass())
        }
        Change::Final(wp) => (|| {
            let fin = FinalChecks::new(&mono.surface, &mono.word, wp);
            let y = report(&Fibration::new(mono.surface.clone(), wp.clone())?)?;
            Ok(fin.pass() && y.is_qhb && y.chi == 1)
        })(),
    };
    !matches!(verdict, Ok(true))
}

pub struct Tally {
    pub total: usize,
    pub equivalent: usize,
    pub survivors: Vec<String>,
}

pub fn run_mutation_suite() -> Tally {
    let derivations: Vec<Derivation> = base_instances()
        .iter()
        .map(|i| derive_wprime(i).expect("base derivation"))
        .collect();
    let mut cases: Vec<(usize, Mutant)> = Vec::new();
    let mut equivalent = 0;
    for (i, d) in derivations.iter().enumerate() {
        let (ms, eq) = mutants(d);
        equivalent += eq;
        cases.extend(ms.into_iter().map(|m| (i, m)));
    }
    let survivors: Vec<String> = cases
        .par_iter()
        .filter(|(i, m)| !killed(&derivations[*i], m))
        .map(|(_, m)| m.label.clone())
        .collect();
    Tally {
        total: cases.len(),
        equivalent,
        survivors,
    }
}
