//! The families (d)–(j): plumbing graphs, global monodromies and certified
//! derivations of positive factorizations of length `b₁` of the fiber.

pub mod derive;
mod doc;
mod script;
mod template;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use doc::{CurveDoc, FactorDoc, OpDoc, ScriptDoc, StepDoc, SCRIPT_FORMAT};
pub use script::{
    apply, apply_checked, canonical, first_mismatch, Builder, FinalChecks, Op, Reason, Replay,
    Script, Step, StepLog,
};
pub use template::{gay_mark_word, monodromy_for_graph, three_leg, Legs, Monodromy};

use crate::fourman::{
    h1_fibration, plumbing_det, plumbing_matrix, report, Fibration, FourmanError, InvariantReport,
    ResolutionGraph,
};
use crate::mcgword::{Factor, McgError, Params};
use crate::surfaces::SurfaceError;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("template: {0}")]
    Template(String),
    #[error("parameters: {0}")]
    Params(String),
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("embedding search: {0}")]
    Search(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Fourman(#[from] FourmanError),
    #[error(transparent)]
    Mcg(#[from] McgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    D,
    E,
    F,
    G,
    H,
    I,
    J,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::D,
        Family::E,
        Family::F,
        Family::G,
        Family::H,
        Family::I,
        Family::J,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::D => "d",
            Family::E => "e",
            Family::F => "f",
            Family::G => "g",
            Family::H => "h",
            Family::I => "i",
            Family::J => "j",
        }
    }

    /// Which of `p`, `q`, `r` the family reads.
    pub fn uses(self) -> [bool; 3] {
        match self {
            Family::D => [false, true, true],
            Family::E => [true, true, false],
            Family::G => [true, true, true],
            Family::F | Family::H | Family::I | Family::J => [false, true, false],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| FamilyError::UnknownFamily(s.to_string()))
    }
}

/// A family member with normalized parameters.
///
/// `(d)` with `r = −1` is `(f)` and `(g)` with `r = −1` is `(e)`; unused
/// parameters are zero, except `r = −1` for `(e)` and `(f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Instance {
    pub family: Family,
    pub params: Params,
}

impl Instance {
    pub fn new(family: Family, params: Params) -> Result<Instance, FamilyError> {
        let Params { p, q, r } = params;
        let [up, _, ur] = family.uses();
        if q < 0 || (up && p < 0) {
            return Err(FamilyError::Params(format!(
                "p and q must be nonnegative, got p={p}, q={q}"
            )));
        }
        if ur && r < -1 {
            return Err(FamilyError::Params(format!(
                "r must be at least −1, got {r}"
            )));
        }
        let family = match (family, r) {
            (Family::D, -1) => Family::F,
            (Family::G, -1) => Family::E,
            (f, _) => f,
        };
        let params = match family {
            Family::D => Params { p: 0, q, r },
            Family::F => Params { p: 0, q, r: -1 },
            Family::G => Params { p, q, r },
            Family::E => Params { p, q, r: -1 },
            Family::H | Family::I | Family::J => Params { p: 0, q, r: 0 },
        };
        Ok(Instance { family, params })
    }

    /// Short label such as `g(p=1,q=0,r=2)`.
    pub fn label(&self) -> String {
        let Params { p, q, r } = self.params;
        match self.family {
            Family::D => format!("d(q={q},r={r})"),
            Family::G => format!("g(p={p},q={q},r={r})"),
            Family::E => format!("e(p={p},q={q})"),
            f => format!("{f}(q={q})"),
        }
    }

    /// Leg degrees around the central −2 vertex.
    pub fn legs(&self) -> Legs {
        let Params { p, q, r } = self.params;
        let (p, q) = (p as usize, q as usize);
        let two = |n: usize| vec![2i64; n];
        let cat = |parts: &[Vec<i64>]| parts.concat();
        let (qi, pi) = (q as i64, p as i64);
        let (a, c, b) = match self.family {
            Family::D => (
                vec![2],
                vec![r + 4],
                cat(&[two(q), vec![3], two(r as usize), vec![qi + 5]]),
            ),
            Family::F => (vec![2], vec![3], cat(&[two(q), vec![qi + 6]])),
            Family::G => (
                vec![r + 4],
                vec![pi + 3],
                cat(&[
                    two(q),
                    vec![3],
                    two(r as usize),
                    vec![3],
                    two(p),
                    vec![qi + 4],
                ]),
            ),
            Family::E => (
                vec![3],
                vec![pi + 3],
                cat(&[two(q), vec![4], two(p), vec![qi + 4]]),
            ),
            Family::H => (cat(&[vec![qi + 3, 3], two(q)]), vec![4], vec![4]),
            Family::I => (vec![6], vec![3], cat(&[two(q + 1), vec![qi + 3]])),
            Family::J => (vec![2], cat(&[two(q + 1), vec![qi + 4]]), vec![6]),
        };
        Legs { a, c, b }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn family_graph(inst: &Instance) -> ResolutionGraph {
    inst.legs().graph()
}

/// The global monodromy `W_Γ` with vertex ownership.
pub fn family_w(inst: &Instance) -> Result<Monodromy, FamilyError> {
    three_leg(&inst.legs())
}

/// A recorded derivation from `W_Γ` to `W'_Γ`.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub instance: Instance,
    pub monodromy: Monodromy,
    pub script: Script,
    pub w_prime: Vec<Factor>,
}

/// Builds the derivation script. Every step is applied while recording;
/// verification happens on replay.
pub fn derive_wprime(inst: &Instance) -> Result<Derivation, FamilyError> {
    let mono = family_w(inst)?;
    let s = &*mono.surface;
    let w = mono.word.clone();
    let Params { p, q, r } = inst.params;
    let (p, q) = (p as usize, q as usize);
    let (script, w_prime) = match inst.family {
        Family::D | Family::F => derive::family_d(s, w, q, r)?,
        Family::G | Family::E => derive::family_g(s, w, p, q, r)?,
        Family::H => derive::family_h(s, w, q)?,
        Family::I => derive::family_i(s, w, q)?,
        Family::J => {
            let f0 = derive_wprime(&Instance::new(Family::F, Params::default())?)?;
            let fs = f0.monodromy.surface.clone();
            derive::family_j(s, w, q, (fs, &f0.monodromy.word, &f0.w_prime))?
        }
    };
    Ok(Derivation {
        instance: *inst,
        monodromy: mono,
        script,
        w_prime,
    })
}

/// Pass/fail of every certificate check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub script_replays: bool,
    pub faithful_equal: bool,
    pub h1_equal: bool,
    pub positive: bool,
    pub length_is_b1: bool,
    pub qhb: bool,
    pub h1_x_trivial: bool,
    pub lattice_match: bool,
    pub vertices_span: bool,
    pub det_square: bool,
    pub adjunction: bool,
}

impl Checks {
    pub fn pass(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let all = [
            ("script-replays", self.script_replays),
            ("faithful-equal", self.faithful_equal),
            ("h1-equal", self.h1_equal),
            ("positive", self.positive),
            ("length-is-b1", self.length_is_b1),
            ("qhb", self.qhb),
            ("h1-x-trivial", self.h1_x_trivial),
            ("lattice-match", self.lattice_match),
            ("vertices-span", self.vertices_span),
            ("det-square", self.det_square),
            ("adjunction", self.adjunction),
        ];
        all.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberSummary {
    pub genus: usize,
    pub boundary: usize,
    pub b1: usize,
}

/// The outcome of replaying a script and computing both sides' invariants.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub instance: Instance,
    pub graph: ResolutionGraph,
    pub fiber: FiberSummary,
    pub w_len: usize,
    pub wprime_len: Option<usize>,
    pub replay: Replay,
    pub finals: Option<FinalChecks>,
    pub x: InvariantReport,
    pub y: Option<InvariantReport>,
    pub plumbing_det: String,
    pub checks: Checks,
}

fn word_len(w: &[Factor]) -> usize {
    w.iter().map(|f| f.exp.unsigned_abs() as usize).sum()
}

/// Replays `script` from `W_Γ` and certifies the result.
pub fn certify_script(
    inst: &Instance,
    mono: &Monodromy,
    script: &Script,
) -> Result<Certificate, FamilyError> {
    certify_from(inst, mono, &mono.word, script)
}

/// As [`certify_script`], starting from an arbitrary word in place of `W_Γ`.
/// The invariants of `X_Γ` are still those of `W_Γ`.
pub fn certify_from(
    inst: &Instance,
    mono: &Monodromy,
    start: &[Factor],
    script: &Script,
) -> Result<Certificate, FamilyError> {
    let s = &*mono.surface;
    let replay = script.replay(s, start);
    let xf = mono.fibration()?;
    let x = report(&xf)?;
    let graph = mono.graph.clone();
    let det = plumbing_det(&graph)?;
    let finals = replay
        .result
        .as_ref()
        .map(|wp| FinalChecks::new(s, &mono.word, wp));
    let y = match &replay.result {
        Some(wp) if wp.iter().all(|f| f.exp > 0) => {
            Some(report(&Fibration::new(mono.surface.clone(), wp.clone())?)?)
        }
        _ => None,
    };
    let h1x = h1_fibration(&xf)?;
    let lattice_match =
        x.vertex_lattice.as_ref().map(|l| l.gram()) == Some(plumbing_matrix(&graph)?.gram());
    let det_square = y.as_ref().is_some_and(|y| {
        y.h1_order
            .is_some_and(|o| BigInt::from(o) * BigInt::from(o) == det)
            && det != BigInt::from(0)
    });
    let checks = Checks {
        script_replays: replay.failed_at.is_none(),
        faithful_equal: finals.as_ref().is_some_and(|f| f.faithful_equal),
        h1_equal: finals.as_ref().is_some_and(|f| f.h1_equal),
        positive: finals.as_ref().is_some_and(|f| f.positive),
        length_is_b1: finals.as_ref().is_some_and(|f| f.length == f.b1),
        qhb: y
            .as_ref()
            .is_some_and(|y| y.is_qhb && y.chi == 1 && y.betti == (1, 0, 0) && y.consistent()),
        h1_x_trivial: h1x.betti == 0 && h1x.torsion.is_empty(),
        lattice_match,
        vertices_span: x.vertices_span_kernel == Some(true),
        det_square,
        adjunction: !x.adjunction.is_empty()
            && x.adjunction.iter().all(|a| a.pass)
            && x.rotations.iter().all(|r| *r == Some(1)),
    };
    Ok(Certificate {
        instance: *inst,
        graph,
        fiber: FiberSummary {
            genus: s.genus(),
            boundary: s.boundary_count(),
            b1: s.b1(),
        },
        w_len: word_len(&mono.word),
        wprime_len: replay.result.as_ref().map(|w| word_len(w)),
        replay,
        finals,
        x,
        y,
        plumbing_det: det.to_string(),
        checks,
    })
}

/// Derives and certifies one instance.
pub fn certify(inst: &Instance) -> Result<(Derivation, Certificate), FamilyError> {
    let d = derive_wprime(inst)?;
    let c = certify_script(inst, &d.monodromy, &d.script)?;
    Ok((d, c))
}

/// All instances with used parameters in `0..=n`, plus `(e)` and `(f)`.
pub fn grid(n: i64) -> Vec<Instance> {
    let mut out = Vec::new();
    for fam in Family::ALL {
        let [up, _, ur] = fam.uses();
        let ps: Vec<i64> = if up { (0..=n).collect() } else { vec![0] };
        let rs: Vec<i64> = if ur { (0..=n).collect() } else { vec![0] };
        for &p in &ps {
            for q in 0..=n {
                for &r in &rs {
                    let inst = Instance::new(fam, Params { p, q, r })
                        .expect("grid parameters are in range");
                    out.push(inst);
                }
            }
        }
    }
    out
}

/// Certifies every instance in parallel, preserving order.
pub fn certify_all(insts: &[Instance]) -> Vec<Result<Certificate, FamilyError>> {
    insts
        .par_iter()
        .map(|i| certify(i).map(|(_, c)| c))
        .collect()
}
