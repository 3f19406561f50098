//! Twist words and the moves that preserve their product.
//!
//! A word `c₁ c₂ ⋯ cₘ` is evaluated right to left: `c₁` is applied last.

mod relations;
mod syntax;

use std::fmt;

use thiserror::Error;

pub use relations::{
    daisy_petals, lq_eg_lhs, lq_eg_rhs, lq_h_lhs, lq_h_rhs, lq_i_lhs, lq_i_rhs, pcurve, substitute,
    Relation, RelationId, RelationInstance, SubstituteDir, VerifiedInstance, LANTERN_TRIPLES,
};
pub use syntax::{parse_factor, parse_word, Params};

use crate::fatgroup::{Difference, FatGroupError, MarkedClass, Word};
use crate::surfaces::{CurveRef, Surface, SurfaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McgError {
    #[error("position {index} out of range for a word of length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("factors {index} and {next} are not a cancelling pair")]
    NotCancelling { index: usize, next: usize },
    #[error("span mismatch at factor {index}: {detail}")]
    SpanMismatch { index: usize, detail: String },
    #[error("relation does not hold: {0}")]
    RelationFailed(String),
    #[error("rewrite changes the product: {0}")]
    NotEqual(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Group(#[from] FatGroupError),
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
}

impl From<Difference> for McgError {
    fn from(d: Difference) -> Self {
        McgError::RelationFailed(d.to_string())
    }
}

/// One Dehn twist power `t_c^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub curve: CurveRef,
    pub exp: i32,
}

impl Factor {
    pub fn new(curve: CurveRef, exp: i32) -> Self {
        Factor { curve, exp }
    }

    pub fn pos(curve: CurveRef) -> Self {
        Factor { curve, exp: 1 }
    }

    pub fn word(&self) -> &Word {
        self.curve.word()
    }

    pub fn inverse(&self) -> Self {
        Factor {
            curve: self.curve.clone(),
            exp: -self.exp,
        }
    }

    /// Same twist power: equal exponents and the same curve.
    pub fn same_twist(&self, other: &Factor) -> bool {
        self.exp == other.exp && self.curve.same_curve(&other.curve)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            write!(f, "{}", self.curve)
        } else {
            write!(f, "{}^{}", self.curve, self.exp)
        }
    }
}

/// An ordered product of twist powers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TwistWord(pub Vec<Factor>);

impl TwistWord {
    pub fn new(factors: Vec<Factor>) -> Self {
        TwistWord(factors)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|f| f.exp > 0)
    }

    /// The word whose product is the inverse.
    pub fn inverse(&self) -> TwistWord {
        TwistWord(self.0.iter().rev().map(Factor::inverse).collect())
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Product `t_{c₁}^{e₁} ∘ ⋯ ∘ t_{cₘ}^{eₘ}`.
pub fn evaluate(s: &Surface, w: &[Factor]) -> MarkedClass {
    let mut m = s.identity();
    for f in w {
        let sign = f.exp.signum();
        let t = s.twist(f.word(), sign);
        for _ in 0..f.exp.unsigned_abs() {
            m = m.compose(&t).expect("factors live on the same model");
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    /// `a b ↦ b t_b^{-e_b}(a)`: the left factor moves right and changes.
    Right,
    /// `a b ↦ t_a^{e_a}(b) a`: the right factor moves left and changes.
    Left,
}

fn check_pair(w: &[Factor], i: usize) -> Result<(), McgError> {
    if i + 1 >= w.len() {
        return Err(McgError::OutOfRange {
            index: i,
            len: w.len(),
        });
    }
    Ok(())
}

/// Elementary Hurwitz move on positions `i, i+1`.
pub fn hurwitz_move(
    s: &Surface,
    w: &[Factor],
    i: usize,
    dir: Dir,
) -> Result<Vec<Factor>, McgError> {
    check_pair(w, i)?;
    let (a, b) = (&w[i], &w[i + 1]);
    let mut out = w.to_vec();
    match dir {
        Dir::Right => {
            let moved = CurveRef::image(s, vec![Factor::new(b.curve.clone(), -b.exp)], &a.curve);
            out[i] = b.clone();
            out[i + 1] = Factor::new(moved, a.exp);
        }
        Dir::Left => {
            let moved = CurveRef::image(s, vec![a.clone()], &b.curve);
            out[i] = Factor::new(moved, b.exp);
            out[i + 1] = a.clone();
        }
    }
    Ok(out)
}

/// Inserts `t_c^{first} t_c^{-first}` before position `i`.
pub fn insert_cancel(
    w: &[Factor],
    i: usize,
    c: &CurveRef,
    first: i32,
) -> Result<Vec<Factor>, McgError> {
    if i > w.len() || first.abs() != 1 {
        return Err(McgError::OutOfRange {
            index: i,
            len: w.len(),
        });
    }
    let mut out = w.to_vec();
    out.splice(
        i..i,
        [
            Factor::new(c.clone(), first),
            Factor::new(c.clone(), -first),
        ],
    );
    Ok(out)
}

/// Deletes the cancelling pair at `i, i+1`.
pub fn cancel_pair(w: &[Factor], i: usize) -> Result<Vec<Factor>, McgError> {
    check_pair(w, i)?;
    let (a, b) = (&w[i], &w[i + 1]);
    if a.exp != -b.exp || !a.curve.same_curve(&b.curve) {
        return Err(McgError::NotCancelling {
            index: i,
            next: i + 1,
        });
    }
    let mut out = w.to_vec();
    out.drain(i..i + 2);
    Ok(out)
}

/// Replaces every factor curve `κ` by `t_c^{sign}(κ)`.
pub fn global_conjugate(s: &Surface, w: &[Factor], c: &CurveRef, sign: i32) -> Vec<Factor> {
    let pre = vec![Factor::new(c.clone(), sign)];
    w.iter()
        .map(|f| Factor::new(CurveRef::image(s, pre.clone(), &f.curve), f.exp))
        .collect()
}

/// Replaces `w[start..start+len]` by `new` after checking equal products.
pub fn rewrite(
    s: &Surface,
    w: &[Factor],
    start: usize,
    len: usize,
    new: Vec<Factor>,
) -> Result<Vec<Factor>, McgError> {
    if start + len > w.len() {
        return Err(McgError::OutOfRange {
            index: start + len,
            len: w.len(),
        });
    }
    let old = evaluate(s, &w[start..start + len]);
    let nw = evaluate(s, &new);
    if let Some(d) = old.first_difference(&nw) {
        return Err(McgError::NotEqual(d.to_string()));
    }
    let mut out = w.to_vec();
    out.splice(start..start + len, new);
    Ok(out)
}

/// Transvection product acting on column vectors of H₁.
pub fn h1_action(s: &Surface, w: &[Factor]) -> Vec<Vec<i64>> {
    let k = s.rank();
    let pm = s.pairing_matrix();
    let mut m: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect();
    for f in w {
        let c = s.homology(f.word());
        // T x = x + e ⟨x, c⟩ c with ⟨x, c⟩ = xᵀ P c
        let pc: Vec<i64> = (0..k)
            .map(|i| (0..k).map(|j| pm[i][j] * c[j]).sum())
            .collect();
        let t: Vec<Vec<i64>> = (0..k)
            .map(|r| {
                (0..k)
                    .map(|col| i64::from(r == col) + f.exp as i64 * c[r] * pc[col])
                    .collect()
            })
            .collect();
        m = matmul(&m, &t);
    }
    m
}

pub(crate) fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let p = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0i64; p]; n];
    for i in 0..n {
        for (l, bl) in b.iter().enumerate() {
            let x = a[i][l];
            if x == 0 {
                continue;
            }
            for j in 0..p {
                out[i][j] += x * bl[j];
            }
        }
    }
    out
}
