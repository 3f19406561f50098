//! JSON certificates: the checked replay with content hashes of every
//! intermediate word.

use monodromy_core::families::{canonical, Certificate, Checks, FiberSummary, Instance};
use monodromy_core::fatgroup::Word;
use monodromy_core::fourman::InvariantReport;
use monodromy_core::mcgword::{Factor, Params};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "monodromy-certificate/1";

/// SHA-256 of the canonical text `l,l,l^e;l,l^e;…` of a word.
pub fn word_hash(w: &[(Word, i32)]) -> String {
    let text: Vec<String> = w
        .iter()
        .map(|(c, e)| {
            let letters: Vec<String> = c.letters().iter().map(i32::to_string).collect();
            format!("{}^{e}", letters.join(","))
        })
        .collect();
    hex::encode(Sha256::digest(text.join(";").as_bytes()))
}

#[derive(Serialize)]
pub struct StepRecord {
    pub index: usize,
    pub kind: &'static str,
    pub detail: String,
    pub note: String,
    pub pre: String,
    pub post: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Serialize)]
pub struct FinalChecks {
    pub faithful_equal: bool,
    pub h1_equal: bool,
    pub positive: bool,
    pub length_is_b1: bool,
    pub qhb: bool,
    pub lattice_match: bool,
    pub det_square: bool,
    pub adjunction: bool,
    pub h1_x_trivial: bool,
    pub vertices_span: bool,
    pub script_replays: bool,
}

impl From<&Checks> for FinalChecks {
    fn from(c: &Checks) -> Self {
        FinalChecks {
            faithful_equal: c.faithful_equal,
            h1_equal: c.h1_equal,
            positive: c.positive,
            length_is_b1: c.length_is_b1,
            qhb: c.qhb,
            lattice_match: c.lattice_match,
            det_square: c.det_square,
            adjunction: c.adjunction,
            h1_x_trivial: c.h1_x_trivial,
            vertices_span: c.vertices_span,
            script_replays: c.script_replays,
        }
    }
}

#[derive(Serialize)]
pub struct Versions {
    pub schema: &'static str,
    pub core: &'static str,
    pub cli: &'static str,
}

pub fn versions() -> Versions {
    Versions {
        schema: SCHEMA,
        core: monodromy_core::VERSION,
        cli: env!("CARGO_PKG_VERSION"),
    }
}

#[derive(Serialize)]
pub struct Invariants<'a> {
    pub x: &'a InvariantReport,
    pub y: Option<&'a InvariantReport>,
    pub plumbing_det: &'a str,
}

#[derive(Serialize)]
pub struct CertificateDoc<'a> {
    pub family: String,
    pub params: Params,
    pub instance: String,
    pub fiber: &'a FiberSummary,
    pub w_len: usize,
    pub wprime_len: Option<usize>,
    pub w_hash: String,
    pub wprime_hash: Option<String>,
    pub wprime: Option<Vec<String>>,
    pub steps: Vec<StepRecord>,
    pub failed_step: Option<usize>,
    pub final_checks: FinalChecks,
    pub invariants: Invariants<'a>,
    pub pass: bool,
    pub versions: Versions,
}

fn instance_fields(i: &Instance) -> (String, Params, String) {
    (i.family.tag().to_string(), i.params, i.label())
}

pub fn document<'a>(c: &'a Certificate, start: &[Factor]) -> CertificateDoc<'a> {
    let mut pre = word_hash(&canonical(start));
    let w_hash = pre.clone();
    let steps = c
        .replay
        .steps
        .iter()
        .map(|s| {
            let post = word_hash(&s.after);
            let rec = StepRecord {
                index: s.index,
                kind: s.kind,
                detail: s.detail.clone(),
                note: s.note.clone(),
                pre: pre.clone(),
                post: post.clone(),
                pass: s.pass,
                error: s.error.clone(),
            };
            pre = post;
            rec
        })
        .collect();
    let (family, params, instance) = instance_fields(&c.instance);
    let wp = c.replay.result.as_deref();
    CertificateDoc {
        family,
        params,
        instance,
        fiber: &c.fiber,
        w_len: c.w_len,
        wprime_len: c.wprime_len,
        w_hash,
        wprime_hash: wp.map(|w| word_hash(&canonical(w))),
        wprime: wp.map(|w| {
            w.iter()
                .map(|f| format!("{} = L[{}]^{}", f.curve, letters(f), f.exp))
                .collect()
        }),
        steps,
        failed_step: c.replay.failed_at,
        final_checks: FinalChecks::from(&c.checks),
        invariants: Invariants {
            x: &c.x,
            y: c.y.as_ref(),
            plumbing_det: &c.plumbing_det,
        },
        pass: c.checks.pass(),
        versions: versions(),
    }
}

fn letters(f: &Factor) -> String {
    f.word()
        .letters()
        .iter()
        .map(i32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}
