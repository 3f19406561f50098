//! Relation library and verified relation instances.
//!
//! A relation lives on a small model surface. An instance transports it into
//! a target surface through a map `φ` from model generators to based loops in
//! the target; it becomes usable only after both sides have been evaluated in
//! the target and found equal.

use std::fmt;
use std::sync::Arc;

use super::{evaluate, Factor, McgError};
use crate::fatgroup::Word;
use crate::surfaces::{CurveRef, Surface};

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum RelationId {
    Braid,
    Lantern,
    /// `m + 1` boundary holes, `m + 1` petals; `Daisy(2)` is the lantern.
    Daisy(usize),
    /// Linear plumbing `-2 (q+2 times), -5, -(q+4)`, used by families (e), (g).
    LinearEG(usize),
    /// Linear-plumbing relation used by family (h).
    LinearH(usize),
    /// Linear-plumbing relation used by family (i).
    LinearI(usize),
    /// A certified family relation reused as a substitution.
    Embedded(String),
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationId::Braid => write!(f, "braid"),
            RelationId::Lantern => write!(f, "lantern"),
            RelationId::Daisy(m) => write!(f, "daisy({m})"),
            RelationId::LinearEG(q) => write!(f, "linear-eg({q})"),
            RelationId::LinearH(q) => write!(f, "linear-h({q})"),
            RelationId::LinearI(q) => write!(f, "linear-i({q})"),
            RelationId::Embedded(s) => write!(f, "embedded({s})"),
        }
    }
}

impl std::str::FromStr for RelationId {
    type Err = McgError;

    /// Inverse of `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || McgError::Parse {
            at: 0,
            msg: format!("unknown relation '{s}'"),
        };
        match s {
            "braid" => return Ok(RelationId::Braid),
            "lantern" => return Ok(RelationId::Lantern),
            _ => {}
        }
        let (head, arg) = s
            .strip_suffix(')')
            .and_then(|t| t.split_once('('))
            .ok_or_else(bad)?;
        let num = || arg.parse::<usize>().map_err(|_| bad());
        Ok(match head {
            "daisy" => RelationId::Daisy(num()?),
            "linear-eg" => RelationId::LinearEG(num()?),
            "linear-h" => RelationId::LinearH(num()?),
            "linear-i" => RelationId::LinearI(num()?),
            "embedded" => RelationId::Embedded(arg.to_string()),
            _ => return Err(bad()),
        })
    }
}

/// Lantern right-hand sides on the 3-holed disk with outer boundary `x3 x2 x1`.
pub const LANTERN_TRIPLES: [[&[i32]; 3]; 3] = [
    [&[2, 1], &[3, 1], &[3, 2]],
    [&[2, 1], &[3, 2], &[3, 2, 1, -2]],
    [&[2, 1], &[3, 2], &[-2, 3, 2, 1]],
];

/// Counterclockwise curve around the `enclosed` holes of a planar model,
/// passing above (away from the basepoint) the holes in `above`.
pub fn pcurve(enclosed: &[usize], above: &[usize]) -> Word {
    let mut enc: Vec<usize> = enclosed.to_vec();
    enc.sort_unstable();
    let lo = enc[0];
    let mut out = Word::empty();
    for &k in enc.iter().rev() {
        let w = Word::reduced(
            (1..k)
                .rev()
                .filter(|h| above.contains(h) && *h > lo)
                .map(|h| h as i32),
        );
        out = out.mul(&w.inverse()).mul(&Word::gen(k as i32)).mul(&w);
    }
    out
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..=b).collect()
}

/// Daisy petals on the disk with holes `1..=n`, central hole 1.
pub fn daisy_petals(n: usize) -> Vec<Word> {
    let mut ys = vec![Word::from([2, 1]), Word::reduced((2..=n as i32).rev())];
    for i in 3..=n {
        let k = n + 3 - i;
        let g = Word::reduced((2..k as i32).rev()).inverse();
        ys.push(
            g.mul(&Word::gen(k as i32))
                .mul(&g.inverse())
                .mul(&Word::gen(1)),
        );
    }
    ys
}

fn gens(n: usize) -> Vec<Word> {
    (1..=n as i32).map(Word::gen).collect()
}

pub fn lq_eg_lhs(q: usize) -> Vec<Word> {
    let n = q + 6;
    let mut v = vec![Word::gen(1); q + 3];
    v.extend([
        Word::gen(2),
        Word::gen(3),
        Word::gen(4),
        pcurve(&[1, 2, 3, 4], &[]),
    ]);
    v.extend((5..=n as i32).map(Word::gen));
    v.push(pcurve(&range(1, n), &[]));
    v
}

pub fn lq_eg_rhs(q: usize) -> Vec<Word> {
    let n = q + 6;
    let mut ys = vec![pcurve(&[1, 2, 3], &[]), pcurve(&range(2, n), &[])];
    for i in 3..=q + 4 {
        let k = q + 9 - i;
        ys.push(pcurve(&[1, k], &range(2, k - 1)));
    }
    ys.push(pcurve(&[1, 3, 4], &[2]));
    ys.push(pcurve(&[1, 2, 4], &[3]));
    ys
}

pub fn lq_h_lhs(q: usize) -> Vec<Word> {
    let n = q + 6;
    let mut v = gens(q + 2);
    v.push(pcurve(&range(1, q + 2), &[]));
    v.extend([
        Word::gen(q as i32 + 3),
        Word::gen(q as i32 + 4),
        Word::gen(q as i32 + 5),
    ]);
    v.push(pcurve(&range(1, q + 5), &[]));
    v.extend(std::iter::repeat_n(Word::gen(n as i32), q + 2));
    v.push(pcurve(&range(1, n), &[]));
    v
}

pub fn lq_h_rhs(q: usize) -> Vec<Word> {
    let n = q + 6;
    let mut ys = vec![pcurve(&range(q + 3, n), &[])];
    for i in 2..=q + 3 {
        let k = q + 4 - i;
        ys.push(pcurve(&[k, n], &range(k + 1, n - 1)));
    }
    let mut e = range(1, q + 2);
    e.extend([q + 4, q + 5]);
    ys.push(pcurve(&e, &[q + 3]));
    let mut e = range(1, q + 3);
    e.push(q + 5);
    ys.push(pcurve(&e, &[q + 4]));
    ys.push(pcurve(&range(1, q + 4), &[]));
    ys
}

pub fn lq_i_lhs(q: usize) -> Vec<Word> {
    let n = q + 6;
    let mut v = gens(4);
    v.extend(std::iter::repeat_n(Word::gen(5), q + 2));
    v.extend([pcurve(&range(1, 5), &[]), pcurve(&range(1, 5), &[])]);
    v.extend((6..=n as i32).map(Word::gen));
    v.push(pcurve(&range(1, n), &[]));
    v
}

pub fn lq_i_rhs(q: usize) -> Vec<Word> {
    let n = q + 6;
    let mut ys = vec![
        pcurve(&[2, 3, 4, 5], &[]),
        pcurve(&[1, 3, 4, 5], &[2]),
        pcurve(&[1, 2, 4, 5], &[3]),
        pcurve(&[1, 2, 3, 5], &[4]),
    ];
    for i in 5..=q + 4 {
        let k = q + 11 - i;
        ys.push(pcurve(&[5, k], &range(6, k - 1)));
    }
    ys.push(pcurve(&[5, 6], &[]));
    let mut e = range(1, 4);
    e.extend(range(6, n));
    ys.push(pcurve(&e, &[5]));
    ys
}

/// A relation `lhs = rhs` between positive twist words on a model surface.
#[derive(Clone, Debug)]
pub struct Relation {
    pub id: RelationId,
    pub model: Arc<Surface>,
    pub lhs: Vec<Word>,
    pub rhs: Vec<Word>,
}

impl Relation {
    fn planar(id: RelationId, n: usize, lhs: Vec<Word>, rhs: Vec<Word>) -> Self {
        let model = Arc::new(Surface::planar(n).expect("n >= 1"));
        Relation {
            id,
            model,
            lhs,
            rhs,
        }
    }

    /// `t_{x1} t_{x2} t_{x3} t_∂ = t_{x2x1} t_{x3x1} t_{x3x2}` on the 3-holed disk.
    pub fn lantern() -> Self {
        Self::lantern_with(0)
    }

    /// Lantern with one of the [`LANTERN_TRIPLES`] on the right.
    pub fn lantern_with(k: usize) -> Self {
        let lhs = vec![
            Word::gen(1),
            Word::gen(2),
            Word::gen(3),
            Word::from([3, 2, 1]),
        ];
        let rhs = LANTERN_TRIPLES[k].iter().map(|w| Word::from(*w)).collect();
        Self::planar(RelationId::Lantern, 3, lhs, rhs)
    }

    /// `t_{x1}^{m-1} t_{x2} ⋯ t_{x_{m+1}} t_∂ = petals` on the `(m+1)`-holed disk.
    /// `m = 1` degenerates to two commuting boundary twists.
    pub fn daisy(m: usize) -> Self {
        assert!(m >= 1, "daisy needs m >= 1");
        let n = m + 1;
        let mut lhs = vec![Word::gen(1); m - 1];
        lhs.extend((2..=n as i32).map(Word::gen));
        lhs.push(Word::reduced((1..=n as i32).rev()));
        Self::planar(RelationId::Daisy(m), n, lhs, daisy_petals(n))
    }

    pub fn linear_eg(q: usize) -> Self {
        Self::planar(RelationId::LinearEG(q), q + 6, lq_eg_lhs(q), lq_eg_rhs(q))
    }

    pub fn linear_h(q: usize) -> Self {
        Self::planar(RelationId::LinearH(q), q + 6, lq_h_lhs(q), lq_h_rhs(q))
    }

    pub fn linear_i(q: usize) -> Self {
        Self::planar(RelationId::LinearI(q), q + 6, lq_i_lhs(q), lq_i_rhs(q))
    }

    pub fn embedded(
        name: impl Into<String>,
        model: Arc<Surface>,
        lhs: Vec<Word>,
        rhs: Vec<Word>,
    ) -> Self {
        Relation {
            id: RelationId::Embedded(name.into()),
            model,
            lhs,
            rhs,
        }
    }

    /// Reorders the left side; only sensible for commuting boundary twists,
    /// and checked again on every instance anyway.
    pub fn with_lhs_order(mut self, perm: &[usize]) -> Self {
        self.lhs = perm.iter().map(|&i| self.lhs[i].clone()).collect();
        self
    }

    /// Evaluates both sides in the model itself.
    pub fn holds_in_model(&self) -> Result<(), McgError> {
        let s = &*self.model;
        let side = |ws: &[Word]| -> Result<Vec<Factor>, McgError> {
            ws.iter()
                .map(|w| Ok(Factor::pos(CurveRef::from_loop(s, w.clone())?)))
                .collect()
        };
        let l = evaluate(s, &side(&self.lhs)?);
        let r = evaluate(s, &side(&self.rhs)?);
        match l.first_difference(&r) {
            None => Ok(()),
            Some(d) => Err(d.into()),
        }
    }

    /// Transports the relation into `target` along `phi`; right-hand curves
    /// are named `{rhs_name}1, {rhs_name}2, …`.
    pub fn instance(
        &self,
        target: &Surface,
        phi: &[Word],
        rhs_name: &str,
    ) -> Result<RelationInstance, McgError> {
        let names: Vec<String> = (1..=self.rhs.len())
            .map(|i| format!("{rhs_name}{i}"))
            .collect();
        self.instance_named(target, phi, &names)
    }

    pub fn instance_named(
        &self,
        target: &Surface,
        phi: &[Word],
        names: &[String],
    ) -> Result<RelationInstance, McgError> {
        assert_eq!(
            phi.len(),
            self.model.rank(),
            "phi must give one loop per model generator"
        );
        assert_eq!(names.len(), self.rhs.len(), "one name per right-hand curve");
        let carry = |w: &Word| CurveRef::from_loop(target, w.substitute(phi));
        let lhs = self
            .lhs
            .iter()
            .map(|w| Ok(Factor::pos(carry(w)?)))
            .collect::<Result<Vec<_>, McgError>>()?;
        let rhs = self
            .rhs
            .iter()
            .zip(names)
            .map(|(w, name)| Ok(Factor::pos(carry(w)?.named(name.clone()))))
            .collect::<Result<Vec<_>, McgError>>()?;
        Ok(RelationInstance {
            id: self.id.clone(),
            phi: Some(phi.to_vec()),
            lhs,
            rhs,
        })
    }
}

/// Both sides of a relation, as factors in a target surface.
#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub id: RelationId,
    pub phi: Option<Vec<Word>>,
    pub lhs: Vec<Factor>,
    pub rhs: Vec<Factor>,
}

/// An instance whose two sides were found equal in its target.
#[derive(Clone, Debug)]
pub struct VerifiedInstance(RelationInstance);

impl VerifiedInstance {
    pub fn instance(&self) -> &RelationInstance {
        &self.0
    }
}

impl RelationInstance {
    /// `t_a t_b t_a = t_b t_a t_b`.
    pub fn braid(a: &CurveRef, b: &CurveRef) -> Self {
        let (fa, fb) = (Factor::pos(a.clone()), Factor::pos(b.clone()));
        RelationInstance {
            id: RelationId::Braid,
            phi: None,
            lhs: vec![fa.clone(), fb.clone(), fa.clone()],
            rhs: vec![fb.clone(), fa, fb],
        }
    }

    /// Cyclically rotates the right side left by `k`. Sound when the left
    /// side is central, as for products of boundary twists; `verify` decides.
    pub fn rotate_rhs(mut self, k: usize) -> Self {
        let n = self.rhs.len();
        if n > 0 {
            self.rhs.rotate_left(k % n);
        }
        self
    }

    /// Reorders the left side to agree with `span` twist by twist. Sound
    /// when the left side consists of commuting twists; `verify` decides.
    pub fn match_lhs(mut self, s: &Surface, span: &[Factor]) -> Result<Self, McgError> {
        if span.len() != self.lhs.len() {
            return Err(McgError::SpanMismatch {
                index: 0,
                detail: format!(
                    "span has {} factors, relation side {}",
                    span.len(),
                    self.lhs.len()
                ),
            });
        }
        let mut pool: Vec<Option<Factor>> = self.lhs.drain(..).map(Some).collect();
        let mut out = Vec::with_capacity(span.len());
        for (k, have) in span.iter().enumerate() {
            let slot = pool
                .iter()
                .position(|p| p.as_ref().is_some_and(|f| same_twist(s, f, have)));
            match slot {
                Some(j) => out.push(pool[j].take().unwrap()),
                None => {
                    return Err(McgError::SpanMismatch {
                        index: k,
                        detail: format!("no relation curve matches {} = {}", have, have.word()),
                    })
                }
            }
        }
        self.lhs = out;
        Ok(self)
    }

    pub fn verify(self, target: &Surface) -> Result<VerifiedInstance, McgError> {
        let l = evaluate(target, &self.lhs);
        let r = evaluate(target, &self.rhs);
        match l.first_difference(&r) {
            None => Ok(VerifiedInstance(self)),
            Some(d) => Err(McgError::RelationFailed(format!("{}: {}", self.id, d))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubstituteDir {
    LhsToRhs,
    RhsToLhs,
}

fn same_twist(s: &Surface, a: &Factor, b: &Factor) -> bool {
    if a.exp != b.exp {
        return false;
    }
    if a.curve.same_curve(&b.curve) {
        return true;
    }
    s.twist(a.word(), 1) == s.twist(b.word(), 1)
}

/// Replaces the span starting at `start` that matches one side of `inst`
/// with the other side.
pub fn substitute(
    s: &Surface,
    w: &[Factor],
    start: usize,
    inst: &VerifiedInstance,
    dir: SubstituteDir,
) -> Result<Vec<Factor>, McgError> {
    let inst = &inst.0;
    let (from, to) = match dir {
        SubstituteDir::LhsToRhs => (&inst.lhs, &inst.rhs),
        SubstituteDir::RhsToLhs => (&inst.rhs, &inst.lhs),
    };
    if start + from.len() > w.len() {
        return Err(McgError::OutOfRange {
            index: start + from.len(),
            len: w.len(),
        });
    }
    for (k, (have, want)) in w[start..start + from.len()].iter().zip(from).enumerate() {
        if !same_twist(s, have, want) {
            return Err(McgError::SpanMismatch {
                index: start + k,
                detail: format!(
                    "have {} = {}, relation side has {}",
                    have,
                    have.word(),
                    want.word()
                ),
            });
        }
    }
    let mut out = w.to_vec();
    out.splice(start..start + from.len(), to.iter().cloned());
    Ok(out)
}
