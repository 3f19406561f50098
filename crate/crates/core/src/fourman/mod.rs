//! Invariants of a Lefschetz fibration over the disk with bounded fiber.
//!
//! The total space is the fiber times a disk with one 2-handle per
//! vanishing cycle. Homology comes from the boundary map
//! `∂: Z^len → H₁(Σ)` sending each handle to its cycle's class.

mod lattice;
mod snf;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

pub use lattice::{coker_order, plumbing_matrix, IntLattice, ResolutionGraph};
pub use snf::Snf;

use crate::fatgroup::Word;
use crate::mcgword::Factor;
use crate::surfaces::Surface;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FourmanError {
    #[error("factor {0} has a non-positive exponent")]
    NotPositive(usize),
    #[error("fibration carries no vertex metadata")]
    MissingMetadata,
    #[error("vertex coefficients have length {got}, expected {expected}")]
    MetadataShape { got: usize, expected: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("bad graph: {0}")]
    BadGraph(String),
    #[error("integer does not fit in 64 bits")]
    Overflow,
}

/// Vertex classes attached by a constructor: one coefficient per
/// vanishing cycle (after expanding powers) for each graph vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexData {
    pub labels: Vec<String>,
    pub coefficients: Vec<Vec<i64>>,
}

/// A positive factorization over a fiber.
#[derive(Clone, Debug)]
pub struct Fibration {
    surface: Arc<Surface>,
    word: Vec<Factor>,
    cycles: Vec<Word>,
    rotations: Vec<Option<i64>>,
    vertices: Option<VertexData>,
}

impl Fibration {
    /// Powers are expanded into repeated cycles. Each cycle is oriented so
    /// that its rotation number is nonnegative.
    pub fn new(surface: Arc<Surface>, word: Vec<Factor>) -> Result<Self, FourmanError> {
        let mut cycles = Vec::new();
        let mut rotations = Vec::new();
        for (i, f) in word.iter().enumerate() {
            if f.exp <= 0 {
                return Err(FourmanError::NotPositive(i));
            }
            let rot = surface.winding(f.word());
            let c = match rot {
                Some(r) if r < 0 => f.word().inverse(),
                _ => f.word().clone(),
            };
            for _ in 0..f.exp {
                cycles.push(c.clone());
                rotations.push(rot.map(i64::abs));
            }
        }
        Ok(Fibration {
            surface,
            word,
            cycles,
            rotations,
            vertices: None,
        })
    }

    pub fn with_vertices(mut self, v: VertexData) -> Result<Self, FourmanError> {
        for c in &v.coefficients {
            if c.len() != self.cycles.len() {
                return Err(FourmanError::MetadataShape {
                    got: c.len(),
                    expected: self.cycles.len(),
                });
            }
        }
        self.vertices = Some(v);
        Ok(self)
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn word(&self) -> &[Factor] {
        &self.word
    }

    /// Oriented vanishing cycles, powers expanded.
    pub fn cycles(&self) -> &[Word] {
        &self.cycles
    }

    pub fn rotations(&self) -> &[Option<i64>] {
        &self.rotations
    }

    pub fn vertices(&self) -> Option<&VertexData> {
        self.vertices.as_ref()
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// `K × len` matrix whose columns are the cycle classes.
    pub fn boundary_matrix(&self) -> Vec<Vec<i64>> {
        let k = self.surface.rank();
        let cols: Vec<Vec<i64>> = self
            .cycles
            .iter()
            .map(|c| self.surface.homology(c))
            .collect();
        (0..k)
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect()
    }

    /// Intersection pairing of two 2-chains: each handle contributes −1 on
    /// the diagonal, and each ordered pair `i < j` contributes the negated
    /// algebraic intersection of `cᵢ` with `cⱼ`.
    pub fn pairing(&self, x: &[i64], y: &[i64]) -> i64 {
        let k = self.surface.rank();
        let pm = self.surface.pairing_matrix();
        let h: Vec<Vec<i64>> = self
            .cycles
            .iter()
            .map(|c| self.surface.homology(c))
            .collect();
        let ph: Vec<Vec<i64>> = h
            .iter()
            .map(|c| {
                (0..k)
                    .map(|i| (0..k).map(|j| pm[i][j] * c[j]).sum())
                    .collect()
            })
            .collect();
        let m = self.cycles.len();
        let mut s = 0i64;
        for i in 0..m {
            if x[i] == 0 {
                continue;
            }
            s -= x[i] * y[i];
            for j in i + 1..m {
                if y[j] != 0 {
                    let ij: i64 = (0..k).map(|l| h[i][l] * ph[j][l]).sum();
                    s -= x[i] * y[j] * ij;
                }
            }
        }
        s
    }

    fn gram(&self, basis: &[Vec<i64>]) -> Vec<Vec<i64>> {
        basis
            .iter()
            .map(|u| basis.iter().map(|v| self.pairing(u, v)).collect())
            .collect()
    }
}

/// `χ(Σ) + len`.
pub fn euler_char(f: &Fibration) -> i64 {
    f.surface.euler_char() + f.len() as i64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H1 {
    pub betti: usize,
    pub torsion: Vec<u64>,
}

impl H1 {
    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        (self.betti == 0).then(|| self.torsion.iter().product())
    }
}

fn snf_of(f: &Fibration) -> Snf {
    Snf::new(&f.boundary_matrix())
}

/// `H₁` of the total space: `H₁(Σ)` modulo the cycle classes.
pub fn h1_fibration(f: &Fibration) -> Result<H1, FourmanError> {
    let s = snf_of(f);
    let torsion = s
        .torsion()
        .iter()
        .map(|x| x.to_u64().ok_or(FourmanError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(H1 {
        betti: f.surface.rank() - s.rank,
        torsion,
    })
}

/// `b₂ = rank ker ∂`.
pub fn b2(f: &Fibration) -> usize {
    f.len() - snf_of(f).rank
}

/// Length equals `b₁(Σ)` and `H₁` is finite.
pub fn is_qhb(f: &Fibration) -> bool {
    f.len() == f.surface.b1() && snf_of(f).rank == f.surface.rank()
}

/// Lattice basis of `ker ∂ ⊂ Z^len`.
pub fn kernel_basis(f: &Fibration) -> Result<Vec<Vec<i64>>, FourmanError> {
    snf_of(f)
        .kernel_basis()
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| x.to_i64().ok_or(FourmanError::Overflow))
                .collect()
        })
        .collect()
}

/// The intersection form on the SNF lattice basis of `ker ∂`.
pub fn intersection_form(f: &Fibration) -> Result<IntLattice, FourmanError> {
    let basis = kernel_basis(f)?;
    IntLattice::new(f.gram(&basis))
}

/// Vertex classes from construction metadata.
pub fn vertex_classes(f: &Fibration) -> Result<&[Vec<i64>], FourmanError> {
    f.vertices
        .as_ref()
        .map(|v| v.coefficients.as_slice())
        .ok_or(FourmanError::MissingMetadata)
}

/// Gram matrix of the vertex classes.
pub fn vertex_form(f: &Fibration) -> Result<IntLattice, FourmanError> {
    IntLattice::new(f.gram(vertex_classes(f)?))
}

/// Whether the vertex classes lie in `ker ∂` and form a lattice basis of it.
pub fn vertices_span_kernel(f: &Fibration) -> Result<bool, FourmanError> {
    let vs = vertex_classes(f)?;
    let bd = f.boundary_matrix();
    let in_kernel = vs.iter().all(|v| {
        bd.iter()
            .all(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() == 0)
    });
    if !in_kernel || vs.len() != b2(f) {
        return Ok(false);
    }
    if vs.is_empty() {
        return Ok(true);
    }
    // a basis of a saturated sublattice of full rank has unit invariant factors
    let rows: Vec<Vec<i64>> = vs.to_vec();
    let s = Snf::new(&rows);
    Ok(s.rank == vs.len() && s.diagonal().iter().all(|d| d.is_one()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Adjunction {
    pub vertex: String,
    /// `Σ coefficient · rotation`
    pub c1: i64,
    pub square: i64,
    pub pass: bool,
}

/// `c₁(v) = v·v + 2` per vertex, with `c₁` evaluated through rotation
/// numbers. A cycle without an integral rotation number fails its vertex.
pub fn adjunction_check(f: &Fibration) -> Result<Vec<Adjunction>, FourmanError> {
    let vd = f.vertices.as_ref().ok_or(FourmanError::MissingMetadata)?;
    Ok(vd
        .coefficients
        .iter()
        .zip(&vd.labels)
        .map(|(v, label)| {
            let mut c1 = Some(0i64);
            for (co, rot) in v.iter().zip(&f.rotations) {
                if *co != 0 {
                    c1 = match (c1, rot) {
                        (Some(a), Some(r)) => Some(a + co * r),
                        _ => None,
                    };
                }
            }
            let square = f.pairing(v, v);
            Adjunction {
                vertex: label.clone(),
                c1: c1.unwrap_or(i64::MIN),
                square,
                pass: c1 == Some(square + 2),
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub chi: i64,
    pub betti: (usize, usize, usize),
    pub torsion: Vec<u64>,
    pub h1_order: Option<u64>,
    pub is_qhb: bool,
    pub lattice: Option<IntLattice>,
    pub vertex_lattice: Option<IntLattice>,
    pub vertices_span_kernel: Option<bool>,
    pub adjunction: Vec<Adjunction>,
    pub rotations: Vec<Option<i64>>,
}

impl InvariantReport {
    /// `χ = 1 − b₁ + b₂`.
    pub fn consistent(&self) -> bool {
        self.chi == 1 - self.betti.1 as i64 + self.betti.2 as i64
    }
}

pub fn report(f: &Fibration) -> Result<InvariantReport, FourmanError> {
    let h1 = h1_fibration(f)?;
    let lattice = intersection_form(f)?;
    let (vertex_lattice, span, adjunction) = if f.vertices.is_some() {
        (
            Some(vertex_form(f)?),
            Some(vertices_span_kernel(f)?),
            adjunction_check(f)?,
        )
    } else {
        (None, None, Vec::new())
    };
    Ok(InvariantReport {
        chi: euler_char(f),
        betti: (1, h1.betti, lattice.rank()),
        h1_order: h1.order(),
        torsion: h1.torsion,
        is_qhb: is_qhb(f),
        lattice: Some(lattice),
        vertex_lattice,
        vertices_span_kernel: span,
        adjunction,
        rotations: f.rotations.clone(),
    })
}

/// `|coker Q_Γ|` of a plumbing graph, as an integer.
pub fn plumbing_det(g: &ResolutionGraph) -> Result<BigInt, FourmanError> {
    Ok(plumbing_matrix(g)?.coker_order())
}
