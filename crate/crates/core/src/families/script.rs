//! Derivation transcripts: recorded by a builder, checked by replay.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fatgroup::{MarkedClass, Word};
use crate::mcgword::{
    cancel_pair, evaluate, global_conjugate, h1_action, hurwitz_move, insert_cancel, rewrite,
    substitute, Dir, Factor, McgError, RelationInstance, SubstituteDir,
};
use crate::surfaces::{CurveRef, Surface};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reason {
    /// Twists along curves meeting once, or disjoint curves, rearranged.
    Braid,
    /// A span replaced by an equal product written as displayed.
    Display,
}

#[derive(Clone, Debug)]
pub enum Op {
    Hurwitz {
        i: usize,
        dir: Dir,
    },
    /// Carry factor `from` to `to` by elementary moves. With `keep` the
    /// carried factor is unchanged and the factors it passes are twisted.
    Move {
        from: usize,
        to: usize,
        keep: bool,
    },
    InsertCancel {
        at: usize,
        curve: CurveRef,
        first: i32,
    },
    CancelPair {
        at: usize,
    },
    GlobalConj {
        curve: CurveRef,
        sign: i32,
    },
    Rewrite {
        at: usize,
        len: usize,
        new: Vec<Factor>,
        reason: Reason,
    },
    Substitute {
        at: usize,
        instance: RelationInstance,
        dir: SubstituteDir,
    },
    /// The word must match `expect` twist by twist.
    Check {
        label: String,
        expect: Vec<Factor>,
    },
}

impl Op {
    pub fn kind(&self) -> &'static str {
        match self {
            Op::Hurwitz { .. } => "hurwitz",
            Op::Move { .. } => "move",
            Op::InsertCancel { .. } => "insert-cancel",
            Op::CancelPair { .. } => "cancel-pair",
            Op::GlobalConj { .. } => "global-conj",
            Op::Rewrite {
                reason: Reason::Braid,
                ..
            } => "braid",
            Op::Rewrite {
                reason: Reason::Display,
                ..
            } => "rewrite",
            Op::Substitute { .. } => "substitute",
            Op::Check { .. } => "check",
        }
    }

    pub fn is_check(&self) -> bool {
        matches!(self, Op::Check { .. })
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Hurwitz { i, dir } => write!(f, "hurwitz {i} {dir:?}"),
            Op::Move { from, to, keep } => write!(
                f,
                "move {from} -> {to}{}",
                if *keep { "" } else { " (twisting)" }
            ),
            Op::InsertCancel { at, curve, first } => {
                write!(f, "insert {curve}^{first} {curve}^{} at {at}", -first)
            }
            Op::CancelPair { at } => write!(f, "cancel {at}, {}", at + 1),
            Op::GlobalConj { curve, sign } => write!(f, "conjugate by {curve}^{sign}"),
            Op::Rewrite {
                at, len, reason, ..
            } => write!(f, "{reason:?} rewrite of {len} factors at {at}"),
            Op::Substitute { at, instance, dir } => write!(f, "{} at {at} ({dir:?})", instance.id),
            Op::Check { label, .. } => write!(f, "check: {label}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Step {
    pub op: Op,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct Script {
    pub steps: Vec<Step>,
}

fn span_product(s: &Surface, w: &[Factor]) -> MarkedClass {
    evaluate(s, w)
}

fn same_span(s: &Surface, a: &[Factor], b: &[Factor]) -> Result<(), McgError> {
    match span_product(s, a).first_difference(&span_product(s, b)) {
        None => Ok(()),
        Some(d) => Err(McgError::NotEqual(d.to_string())),
    }
}

/// Whether `w` and `expect` agree factor by factor as twists.
pub fn first_mismatch(w: &[Factor], expect: &[Factor]) -> Option<usize> {
    for (k, (a, b)) in w.iter().zip(expect).enumerate() {
        if !a.same_twist(b) {
            return Some(k);
        }
    }
    (w.len() != expect.len()).then(|| w.len().min(expect.len()))
}

/// Applies one operation without verification.
pub fn apply(s: &Surface, w: &[Factor], op: &Op) -> Result<Vec<Factor>, McgError> {
    match op {
        Op::Hurwitz { i, dir } => hurwitz_move(s, w, *i, *dir),
        Op::Move { from, to, keep } => {
            let (from, to) = (*from, *to);
            if from >= w.len() || to >= w.len() {
                return Err(McgError::OutOfRange {
                    index: from.max(to),
                    len: w.len(),
                });
            }
            let mut out = w.to_vec();
            if to > from {
                let dir = if *keep { Dir::Left } else { Dir::Right };
                for k in from..to {
                    out = hurwitz_move(s, &out, k, dir)?;
                }
            } else {
                let dir = if *keep { Dir::Right } else { Dir::Left };
                for k in (to..from).rev() {
                    out = hurwitz_move(s, &out, k, dir)?;
                }
            }
            Ok(out)
        }
        Op::InsertCancel { at, curve, first } => insert_cancel(w, *at, curve, *first),
        Op::CancelPair { at } => cancel_pair(w, *at),
        Op::GlobalConj { curve, sign } => Ok(global_conjugate(s, w, curve, *sign)),
        Op::Rewrite { at, len, new, .. } => {
            if at + len > w.len() {
                return Err(McgError::OutOfRange {
                    index: at + len,
                    len: w.len(),
                });
            }
            let mut out = w.to_vec();
            out.splice(*at..at + len, new.iter().cloned());
            Ok(out)
        }
        Op::Substitute { at, instance, dir } => {
            let v = instance.clone().verify(s)?;
            substitute(s, w, *at, &v, *dir)
        }
        Op::Check { label, expect } => match first_mismatch(w, expect) {
            None => Ok(w.to_vec()),
            Some(k) => {
                let show = |v: &[Factor]| {
                    v.get(k)
                        .map_or("nothing".to_string(), |f| format!("{f} = {}", f.word()))
                };
                Err(McgError::SpanMismatch {
                    index: k,
                    detail: format!(
                        "display '{label}' differs: word has {}, display has {}",
                        show(w),
                        show(expect)
                    ),
                })
            }
        },
    }
}

/// Applies one operation and checks that the product is preserved on the
/// affected span (or, for a global conjugation, conjugated).
pub fn apply_checked(s: &Surface, w: &[Factor], op: &Op) -> Result<Vec<Factor>, McgError> {
    let out = apply(s, w, op)?;
    match op {
        Op::Hurwitz { i, .. } => same_span(s, &w[*i..i + 2], &out[*i..i + 2])?,
        Op::Move { from, to, .. } => {
            let (lo, hi) = ((*from).min(*to), (*from).max(*to));
            same_span(s, &w[lo..=hi], &out[lo..=hi])?;
        }
        Op::InsertCancel { at, .. } => {
            if !span_product(s, &out[*at..at + 2]).is_identity() {
                return Err(McgError::NotEqual("inserted pair is not trivial".into()));
            }
        }
        Op::Rewrite { at, len, new, .. } => {
            rewrite(s, w, *at, *len, new.clone())?;
        }
        Op::GlobalConj { curve, sign } => {
            let t = s.twist(curve.word(), *sign);
            let before = t.compose(&span_product(s, w))?.compose(&t.inverse()?)?;
            if let Some(d) = before.first_difference(&span_product(s, &out)) {
                return Err(McgError::NotEqual(d.to_string()));
            }
        }
        // cancel_pair and substitute check their own spans; Check compares
        Op::CancelPair { .. } | Op::Substitute { .. } | Op::Check { .. } => {}
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct StepLog {
    pub index: usize,
    pub kind: &'static str,
    pub detail: String,
    pub note: String,
    pub pass: bool,
    pub error: Option<String>,
    /// Canonical factors after the step, for hashing.
    #[serde(skip)]
    pub after: Vec<(Word, i32)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Replay {
    pub steps: Vec<StepLog>,
    pub failed_at: Option<usize>,
    /// The final word, when every step passed.
    #[serde(skip)]
    pub result: Option<Vec<Factor>>,
}

/// Canonical form of a word: each curve as the smaller of its two
/// oriented cyclic normal forms.
pub fn canonical(w: &[Factor]) -> Vec<(Word, i32)> {
    w.iter()
        .map(|f| {
            let a = f.word().canonical_cyclic();
            let b = f.word().inverse().canonical_cyclic();
            (a.min(b), f.exp)
        })
        .collect()
}

impl Script {
    /// Replays from `start`, verifying every step.
    pub fn replay(&self, s: &Surface, start: &[Factor]) -> Replay {
        let mut w = start.to_vec();
        let mut logs = Vec::with_capacity(self.steps.len());
        for (index, step) in self.steps.iter().enumerate() {
            let r = apply_checked(s, &w, &step.op);
            let (pass, error) = match r {
                Ok(next) => {
                    w = next;
                    (true, None)
                }
                Err(e) => (false, Some(e.to_string())),
            };
            logs.push(StepLog {
                index,
                kind: step.op.kind(),
                detail: step.op.to_string(),
                note: step.note.clone(),
                pass,
                error,
                after: canonical(&w),
            });
            if !pass {
                return Replay {
                    steps: logs,
                    failed_at: Some(index),
                    result: None,
                };
            }
        }
        Replay {
            steps: logs,
            failed_at: None,
            result: Some(w),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Final equalities between a start word and a derived word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinalChecks {
    pub faithful_equal: bool,
    pub h1_equal: bool,
    pub positive: bool,
    pub length: usize,
    pub b1: usize,
}

impl FinalChecks {
    pub fn new(s: &Surface, w: &[Factor], wp: &[Factor]) -> FinalChecks {
        FinalChecks {
            faithful_equal: evaluate(s, w).first_difference(&evaluate(s, wp)).is_none(),
            h1_equal: h1_action(s, w) == h1_action(s, wp),
            positive: wp.iter().all(|f| f.exp > 0),
            length: wp.iter().map(|f| f.exp.unsigned_abs() as usize).sum(),
            b1: s.b1(),
        }
    }

    pub fn pass(&self) -> bool {
        self.faithful_equal && self.h1_equal && self.positive && self.length == self.b1
    }
}

/// Records a script while tracking the current word.
pub struct Builder<'a> {
    pub s: &'a Surface,
    pub w: Vec<Factor>,
    steps: Vec<Step>,
}

impl<'a> Builder<'a> {
    pub fn new(s: &'a Surface, start: Vec<Factor>) -> Self {
        Builder {
            s,
            w: start,
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, op: Op, note: &str) -> Result<(), McgError> {
        self.w = apply(self.s, &self.w, &op)?;
        self.steps.push(Step {
            op,
            note: note.to_string(),
        });
        Ok(())
    }

    pub fn hurwitz(&mut self, i: usize, dir: Dir, note: &str) -> Result<(), McgError> {
        self.push(Op::Hurwitz { i, dir }, note)
    }

    pub fn mv(&mut self, from: usize, to: usize, note: &str) -> Result<(), McgError> {
        if from == to {
            return Ok(());
        }
        self.push(
            Op::Move {
                from,
                to,
                keep: true,
            },
            note,
        )
    }

    pub fn mv_twisting(&mut self, from: usize, to: usize, note: &str) -> Result<(), McgError> {
        if from == to {
            return Ok(());
        }
        self.push(
            Op::Move {
                from,
                to,
                keep: false,
            },
            note,
        )
    }

    pub fn insert_cancel(
        &mut self,
        at: usize,
        curve: &CurveRef,
        first: i32,
        note: &str,
    ) -> Result<(), McgError> {
        self.push(
            Op::InsertCancel {
                at,
                curve: curve.clone(),
                first,
            },
            note,
        )
    }

    pub fn cancel(&mut self, at: usize, note: &str) -> Result<(), McgError> {
        self.push(Op::CancelPair { at }, note)
    }

    /// Rewrites after checking the span product here as well, so a bad
    /// rewrite fails at build time.
    pub fn rewrite(
        &mut self,
        at: usize,
        len: usize,
        new: Vec<Factor>,
        reason: Reason,
        note: &str,
    ) -> Result<(), McgError> {
        rewrite(self.s, &self.w, at, len, new.clone())?;
        self.push(
            Op::Rewrite {
                at,
                len,
                new,
                reason,
            },
            note,
        )
    }

    pub fn substitute(
        &mut self,
        at: usize,
        instance: RelationInstance,
        note: &str,
    ) -> Result<(), McgError> {
        self.push(
            Op::Substitute {
                at,
                instance,
                dir: SubstituteDir::LhsToRhs,
            },
            note,
        )
    }

    pub fn check(&mut self, label: &str, expect: Vec<Factor>) -> Result<(), McgError> {
        self.push(
            Op::Check {
                label: label.to_string(),
                expect,
            },
            label,
        )
    }

    /// First index at or after `start` holding a twist along `c` with
    /// exponent `exp`.
    pub fn find(&self, c: &CurveRef, exp: i32, start: usize) -> Result<usize, McgError> {
        (start..self.w.len())
            .find(|&k| self.w[k].exp == exp && self.w[k].curve.same_curve(c))
            .ok_or_else(|| McgError::SpanMismatch {
                index: start,
                detail: format!("no {c}^{exp} from here"),
            })
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn finish(self) -> (Script, Vec<Factor>) {
        (Script { steps: self.steps }, self.w)
    }
}
