//! Human-readable output and the JSON documents of `build` and `invariants`.

use std::fmt::Write as _;

use monodromy_core::families::{Certificate, FamilyError, Instance};
use monodromy_core::fourman::{plumbing_matrix, Adjunction, InvariantReport, ResolutionGraph};
use monodromy_core::mcgword::{Factor, TwistWord};
use monodromy_core::surfaces::Surface;
use serde::Serialize;

use crate::certificate::{versions, word_hash, Versions};
use monodromy_core::families::canonical;

/// `Z^b ⊕ Z/t₁ ⊕ …`, or `0`.
pub fn h1_string(betti: usize, torsion: &[u64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    match betti {
        0 => {}
        1 => parts.push("Z".into()),
        b => parts.push(format!("Z^{b}")),
    }
    parts.extend(torsion.iter().filter(|&&t| t > 1).map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn matrix(m: &[Vec<i64>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| {
            format!(
                "[{}]",
                r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
            )
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn fiber_line(s: &Surface) -> String {
    format!(
        "genus {}, {} boundary components, b1 = {}",
        s.genus(),
        s.boundary_count(),
        s.b1()
    )
}

pub fn build_text(
    s: &Surface,
    w: &[Factor],
    inst: Option<&Instance>,
    g: Option<&ResolutionGraph>,
) -> String {
    let mut out = String::new();
    if let Some(i) = inst {
        writeln!(out, "instance: {}", i.label()).unwrap();
    }
    if let Some(g) = g {
        writeln!(
            out,
            "graph:    weights {:?}, edges {:?}",
            g.weights, g.edges
        )
        .unwrap();
    }
    writeln!(out, "fiber:    {}", fiber_line(s)).unwrap();
    writeln!(out, "length:   {}", w.len()).unwrap();
    writeln!(out, "W:        {}", TwistWord::new(w.to_vec())).unwrap();
    out
}

#[derive(Serialize)]
pub struct FiberDoc {
    pub genus: usize,
    pub boundary: usize,
    pub b1: usize,
}

#[derive(Serialize)]
pub struct BuildDoc<'a> {
    pub instance: Option<String>,
    pub graph: Option<&'a ResolutionGraph>,
    pub fiber: FiberDoc,
    pub length: usize,
    pub word: String,
    pub hash: String,
    pub versions: Versions,
}

impl<'a> BuildDoc<'a> {
    pub fn new(
        s: &Surface,
        w: &[Factor],
        inst: Option<&Instance>,
        g: Option<&'a ResolutionGraph>,
    ) -> Self {
        BuildDoc {
            instance: inst.map(Instance::label),
            graph: g,
            fiber: FiberDoc {
                genus: s.genus(),
                boundary: s.boundary_count(),
                b1: s.b1(),
            },
            length: w.len(),
            word: TwistWord::new(w.to_vec()).to_string(),
            hash: word_hash(&canonical(w)),
            versions: versions(),
        }
    }
}

#[derive(Serialize)]
pub struct InvariantDoc {
    pub chi: i64,
    pub betti: (usize, usize, usize),
    pub h1: String,
    pub h1_order: Option<u64>,
    pub qhb: bool,
    pub form: Vec<Vec<i64>>,
    pub vertex_form: Option<Vec<Vec<i64>>>,
    pub plumbing: Option<Vec<Vec<i64>>>,
    pub lattice_match: Option<bool>,
    pub vertices_span: Option<bool>,
    pub adjunction: Vec<Adjunction>,
    pub rotations: Vec<Option<i64>>,
    pub consistent: bool,
    pub versions: Versions,
}

impl InvariantDoc {
    pub fn new(r: &InvariantReport, g: Option<&ResolutionGraph>) -> Result<Self, FamilyError> {
        let vertex_form = r.vertex_lattice.as_ref().map(|l| l.gram().to_vec());
        let plumbing = g
            .map(plumbing_matrix)
            .transpose()?
            .map(|l| l.gram().to_vec());
        let lattice_match = match (&vertex_form, &plumbing) {
            (Some(v), Some(p)) => Some(v == p),
            _ => None,
        };
        Ok(InvariantDoc {
            chi: r.chi,
            betti: r.betti,
            h1: h1_string(r.betti.1, &r.torsion),
            h1_order: r.h1_order,
            qhb: r.is_qhb,
            form: r
                .lattice
                .as_ref()
                .map(|l| l.gram().to_vec())
                .unwrap_or_default(),
            vertex_form,
            plumbing,
            lattice_match,
            vertices_span: r.vertices_span_kernel,
            adjunction: r.adjunction.clone(),
            rotations: r.rotations.clone(),
            consistent: r.consistent(),
            versions: versions(),
        })
    }

    /// Internal consistency, plus the vertex checks when a graph is known.
    pub fn pass(&self) -> bool {
        self.consistent
            && self.lattice_match != Some(false)
            && self.vertices_span != Some(false)
            && self.adjunction.iter().all(|a| a.pass)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let (b0, b1, b2) = self.betti;
        writeln!(out, "chi:         {}", self.chi).unwrap();
        writeln!(out, "betti:       ({b0}, {b1}, {b2})").unwrap();
        writeln!(out, "H1:          {}", self.h1).unwrap();
        writeln!(out, "qhb:         {}", self.qhb).unwrap();
        writeln!(out, "form:        {}", matrix(&self.form)).unwrap();
        if let Some(v) = &self.vertex_form {
            writeln!(out, "vertex form: {}", matrix(v)).unwrap();
        }
        if let Some(m) = self.lattice_match {
            writeln!(out, "plumbing:    {}", if m { "match" } else { "MISMATCH" }).unwrap();
        }
        if let Some(s) = self.vertices_span {
            writeln!(out, "vertices span ker: {s}").unwrap();
        }
        if !self.adjunction.is_empty() {
            let ok = self.adjunction.iter().filter(|a| a.pass).count();
            writeln!(out, "adjunction:  {ok}/{} vertices", self.adjunction.len()).unwrap();
            for a in self.adjunction.iter().filter(|a| !a.pass) {
                writeln!(
                    out,
                    "  {} fails: c1 = {}, square = {}",
                    a.vertex, a.c1, a.square
                )
                .unwrap();
            }
        }
        let rot: Vec<String> = self
            .rotations
            .iter()
            .map(|r| r.map_or_else(|| "?".into(), |x| x.to_string()))
            .collect();
        writeln!(out, "rotations:   [{}]", rot.join(",")).unwrap();
        out
    }
}

pub fn verify_text(c: &Certificate) -> String {
    let mut out = String::new();
    writeln!(out, "instance: {}", c.instance.label()).unwrap();
    writeln!(
        out,
        "fiber:    genus {}, {} boundary components, b1 = {}",
        c.fiber.genus, c.fiber.boundary, c.fiber.b1
    )
    .unwrap();
    let wp = c.wprime_len.map_or_else(|| "-".into(), |n| n.to_string());
    writeln!(
        out,
        "len W = {}, len W' = {wp}, steps = {}",
        c.w_len,
        c.replay.steps.len()
    )
    .unwrap();
    if let Some(i) = c.replay.failed_at {
        let s = &c.replay.steps[i];
        writeln!(out, "FAILED at step {i} [{}]: {}", s.kind, s.detail).unwrap();
        if !s.note.is_empty() {
            writeln!(out, "  note:  {}", s.note).unwrap();
        }
        if let Some(e) = &s.error {
            writeln!(out, "  error: {e}").unwrap();
        }
    }
    if let Some(y) = &c.y {
        writeln!(
            out,
            "Y:        chi = {}, H1 = {}",
            y.chi,
            h1_string(y.betti.1, &y.torsion)
        )
        .unwrap();
    }
    writeln!(
        out,
        "X:        H1 = {}, |det| = {}",
        h1_string(c.x.betti.1, &c.x.torsion),
        c.plumbing_det
    )
    .unwrap();
    let fails = c.checks.failures();
    if fails.is_empty() {
        writeln!(out, "result:   PASS").unwrap();
    } else {
        writeln!(out, "result:   FAIL ({})", fails.join(", ")).unwrap();
    }
    out
}

pub fn grid_text(insts: &[Instance], certs: &[Result<Certificate, FamilyError>]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<20} {:>5} {:>6} {:>4} {:>8} {:>8}  result",
        "instance", "steps", "len W'", "b1", "|H1(Y)|", "det"
    )
    .unwrap();
    let mut passed = 0;
    for (i, c) in insts.iter().zip(certs) {
        match c {
            Ok(c) => {
                let wp = c.wprime_len.map_or_else(|| "-".into(), |n| n.to_string());
                let h1 =
                    c.y.as_ref()
                        .and_then(|y| y.h1_order)
                        .map_or_else(|| "-".into(), |n| n.to_string());
                let ok = c.checks.pass();
                passed += usize::from(ok);
                let verdict = if ok {
                    "pass".to_string()
                } else {
                    format!("FAIL {}", c.checks.failures().join(","))
                };
                writeln!(
                    out,
                    "{:<20} {:>5} {:>6} {:>4} {:>8} {:>8}  {verdict}",
                    i.label(),
                    c.replay.steps.len(),
                    wp,
                    c.fiber.b1,
                    h1,
                    c.plumbing_det
                )
                .unwrap();
            }
            Err(e) => writeln!(out, "{:<20} error: {e}", i.label()).unwrap(),
        }
    }
    writeln!(out, "{passed}/{} instances pass", insts.len()).unwrap();
    out
}
