//! Serializable form of derivation scripts.
//!
//! Curves are stored as loop words with an optional display name, so a
//! document can be replayed without the expressions that produced it.

use serde::{Deserialize, Serialize};

use super::script::{Op, Reason, Script, Step};
use super::{FamilyError, Instance};
use crate::fatgroup::Word;
use crate::mcgword::{Dir, Factor, RelationInstance, SubstituteDir};
use crate::surfaces::{CurveRef, Surface};

pub const SCRIPT_FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDoc {
    #[serde(rename = "loop")]
    pub letters: Vec<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDoc {
    #[serde(flatten)]
    pub curve: CurveDoc,
    pub exp: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum OpDoc {
    Hurwitz {
        i: usize,
        dir: Dir,
    },
    Move {
        from: usize,
        to: usize,
        keep: bool,
    },
    InsertCancel {
        at: usize,
        curve: CurveDoc,
        first: i32,
    },
    CancelPair {
        at: usize,
    },
    GlobalConj {
        curve: CurveDoc,
        sign: i32,
    },
    Rewrite {
        at: usize,
        len: usize,
        new: Vec<FactorDoc>,
        reason: Reason,
    },
    Substitute {
        at: usize,
        relation: String,
        lhs: Vec<FactorDoc>,
        rhs: Vec<FactorDoc>,
        dir: SubstituteDir,
    },
    Check {
        label: String,
        expect: Vec<FactorDoc>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    #[serde(flatten)]
    pub op: OpDoc,
    #[serde(default)]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptDoc {
    pub format: u32,
    pub instance: String,
    pub steps: Vec<StepDoc>,
}

fn curve_doc(c: &CurveRef) -> CurveDoc {
    let shown = c.to_string();
    let plain = c.to_loop().to_string();
    CurveDoc {
        letters: c.word().letters().to_vec(),
        name: (shown != plain).then_some(shown),
    }
}

fn factor_doc(f: &Factor) -> FactorDoc {
    FactorDoc {
        curve: curve_doc(&f.curve),
        exp: f.exp,
    }
}

fn factors_doc(w: &[Factor]) -> Vec<FactorDoc> {
    w.iter().map(factor_doc).collect()
}

fn curve_from(s: &Surface, d: &CurveDoc) -> Result<CurveRef, FamilyError> {
    let c = CurveRef::from_loop(s, Word::from(d.letters.clone()))?;
    Ok(match &d.name {
        Some(n) => c.named(n.clone()),
        None => c,
    })
}

fn factors_from(s: &Surface, ds: &[FactorDoc]) -> Result<Vec<Factor>, FamilyError> {
    ds.iter()
        .map(|d| Ok(Factor::new(curve_from(s, &d.curve)?, d.exp)))
        .collect()
}

impl ScriptDoc {
    pub fn new(inst: &Instance, script: &Script) -> ScriptDoc {
        let steps = script
            .steps
            .iter()
            .map(|st| {
                let op = match &st.op {
                    Op::Hurwitz { i, dir } => OpDoc::Hurwitz { i: *i, dir: *dir },
                    Op::Move { from, to, keep } => OpDoc::Move {
                        from: *from,
                        to: *to,
                        keep: *keep,
                    },
                    Op::InsertCancel { at, curve, first } => OpDoc::InsertCancel {
                        at: *at,
                        curve: curve_doc(curve),
                        first: *first,
                    },
                    Op::CancelPair { at } => OpDoc::CancelPair { at: *at },
                    Op::GlobalConj { curve, sign } => OpDoc::GlobalConj {
                        curve: curve_doc(curve),
                        sign: *sign,
                    },
                    Op::Rewrite {
                        at,
                        len,
                        new,
                        reason,
                    } => OpDoc::Rewrite {
                        at: *at,
                        len: *len,
                        new: factors_doc(new),
                        reason: *reason,
                    },
                    Op::Substitute { at, instance, dir } => OpDoc::Substitute {
                        at: *at,
                        relation: instance.id.to_string(),
                        lhs: factors_doc(&instance.lhs),
                        rhs: factors_doc(&instance.rhs),
                        dir: *dir,
                    },
                    Op::Check { label, expect } => OpDoc::Check {
                        label: label.clone(),
                        expect: factors_doc(expect),
                    },
                };
                StepDoc {
                    op,
                    note: st.note.clone(),
                }
            })
            .collect();
        ScriptDoc {
            format: SCRIPT_FORMAT,
            instance: inst.label(),
            steps,
        }
    }

    /// Rebuilds the script over `s`; curves become named loops.
    pub fn to_script(&self, s: &Surface) -> Result<Script, FamilyError> {
        if self.format != SCRIPT_FORMAT {
            return Err(FamilyError::Params(format!(
                "unsupported script format {}",
                self.format
            )));
        }
        let steps = self
            .steps
            .iter()
            .map(|st| {
                let op = match &st.op {
                    OpDoc::Hurwitz { i, dir } => Op::Hurwitz { i: *i, dir: *dir },
                    OpDoc::Move { from, to, keep } => Op::Move {
                        from: *from,
                        to: *to,
                        keep: *keep,
                    },
                    OpDoc::InsertCancel { at, curve, first } => Op::InsertCancel {
                        at: *at,
                        curve: curve_from(s, curve)?,
                        first: *first,
                    },
                    OpDoc::CancelPair { at } => Op::CancelPair { at: *at },
                    OpDoc::GlobalConj { curve, sign } => Op::GlobalConj {
                        curve: curve_from(s, curve)?,
                        sign: *sign,
                    },
                    OpDoc::Rewrite {
                        at,
                        len,
                        new,
                        reason,
                    } => Op::Rewrite {
                        at: *at,
                        len: *len,
                        new: factors_from(s, new)?,
                        reason: *reason,
                    },
                    OpDoc::Substitute {
                        at,
                        relation,
                        lhs,
                        rhs,
                        dir,
                    } => Op::Substitute {
                        at: *at,
                        instance: RelationInstance {
                            id: relation.parse()?,
                            phi: None,
                            lhs: factors_from(s, lhs)?,
                            rhs: factors_from(s, rhs)?,
                        },
                        dir: *dir,
                    },
                    OpDoc::Check { label, expect } => Op::Check {
                        label: label.clone(),
                        expect: factors_from(s, expect)?,
                    },
                };
                Ok(Step {
                    op,
                    note: st.note.clone(),
                })
            })
            .collect::<Result<Vec<_>, FamilyError>>()?;
        Ok(Script { steps })
    }
}
