use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::snf::Snf;
use super::FourmanError;

/// Symmetric integer Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntLattice {
    gram: Vec<Vec<i64>>,
}

impl IntLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, FourmanError> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(FourmanError::NotSquare);
            }
            for (j, x) in row.iter().enumerate().take(i) {
                if *x != gram[j][i] {
                    return Err(FourmanError::NotSymmetric(i, j));
                }
            }
        }
        Ok(IntLattice { gram })
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// `|det|`, or zero when singular.
    pub fn coker_order(&self) -> BigInt {
        if self.gram.is_empty() {
            return BigInt::from(1);
        }
        Snf::new(&self.gram).coker_order()
    }
}

/// Plumbing graph. Weights are self-intersection numbers (negative for
/// resolution graphs).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionGraph {
    pub weights: Vec<i64>,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub labels: Vec<String>,
}

impl ResolutionGraph {
    pub fn new(weights: Vec<i64>, edges: Vec<(usize, usize)>) -> Self {
        let labels = (0..weights.len()).map(|i| format!("v{i}")).collect();
        ResolutionGraph {
            weights,
            edges,
            labels,
        }
    }

    pub fn linear(weights: &[i64]) -> Self {
        let edges = (1..weights.len()).map(|i| (i - 1, i)).collect();
        Self::new(weights.to_vec(), edges)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn label(&self, i: usize) -> String {
        self.labels
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("v{i}"))
    }

    pub fn check(&self) -> Result<(), FourmanError> {
        let n = self.len();
        for &(a, b) in &self.edges {
            if a >= n || b >= n || a == b {
                return Err(FourmanError::BadGraph(format!("edge ({a}, {b})")));
            }
        }
        Ok(())
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Vertices with `|weight| < valence`.
    pub fn bad_vertices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| (self.weights[v].unsigned_abs() as usize) < self.neighbors(v).len())
            .collect()
    }
}

/// Weights on the diagonal, one per edge off it.
pub fn plumbing_matrix(g: &ResolutionGraph) -> Result<IntLattice, FourmanError> {
    g.check()?;
    let n = g.len();
    let mut m = vec![vec![0i64; n]; n];
    for (i, w) in g.weights.iter().enumerate() {
        m[i][i] = *w;
    }
    for &(a, b) in &g.edges {
        m[a][b] += 1;
        m[b][a] += 1;
    }
    IntLattice::new(m)
}

pub fn coker_order(l: &IntLattice) -> BigInt {
    l.coker_order()
}
