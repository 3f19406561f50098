//! Gay–Mark monodromies of linear and three-legged plumbing graphs.
//!
//! Each factor records which graph vertices own it and with what
//! coefficient; the vertex class of `v` is the sum of its owned factors.

use std::sync::Arc;

use super::FamilyError;
use crate::fourman::{plumbing_matrix, vertex_form, Fibration, ResolutionGraph, VertexData};
use crate::mcgword::Factor;
use crate::surfaces::{CurveRef, Seed, Surface};

/// Three legs around a central −2 vertex, given as positive degrees.
/// `a` runs from its far end toward the center; `c` and `b` run outward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Legs {
    pub a: Vec<i64>,
    pub c: Vec<i64>,
    pub b: Vec<i64>,
}

impl Legs {
    /// Vertex order: `a` legs, center, `c` legs, `b` legs.
    pub fn graph(&self) -> ResolutionGraph {
        let (na, nc) = (self.a.len(), self.c.len());
        let ctr = na;
        let mut weights: Vec<i64> = self.a.iter().map(|x| -x).collect();
        weights.push(-2);
        weights.extend(self.c.iter().map(|x| -x));
        weights.extend(self.b.iter().map(|x| -x));
        let mut labels: Vec<String> = (0..na).map(|i| format!("a{i}")).collect();
        labels.push("ctr".into());
        labels.extend((0..nc).map(|i| format!("c{i}")));
        labels.extend((0..self.b.len()).map(|i| format!("b{i}")));
        let mut edges: Vec<(usize, usize)> = (1..na).map(|i| (i - 1, i)).collect();
        edges.push((na - 1, ctr));
        edges.push((ctr, ctr + 1));
        edges.push((ctr, ctr + 1 + nc));
        edges.extend((1..nc).map(|i| (ctr + i, ctr + i + 1)));
        edges.extend((1..self.b.len()).map(|i| (ctr + nc + i, ctr + nc + i + 1)));
        ResolutionGraph {
            weights,
            edges,
            labels,
        }
    }

    fn check(&self) -> Result<(), FamilyError> {
        if self.a.is_empty() || self.c.is_empty() || self.b.is_empty() {
            return Err(FamilyError::Template("every leg needs a vertex".into()));
        }
        if self.a.iter().chain(&self.c).chain(&self.b).any(|&x| x < 2) {
            return Err(FamilyError::Template("degrees must be at most −2".into()));
        }
        Ok(())
    }
}

/// A monodromy word with vertex ownership.
#[derive(Clone, Debug)]
pub struct Monodromy {
    pub surface: Arc<Surface>,
    pub graph: ResolutionGraph,
    pub word: Vec<Factor>,
    /// `owners[i]` lists `(vertex, coefficient)` for factor `i`.
    pub owners: Vec<Vec<(usize, i64)>>,
}

impl Monodromy {
    pub fn vertex_data(&self) -> VertexData {
        let n = self.graph.len();
        let mut coefficients = vec![vec![0i64; self.word.len()]; n];
        for (i, own) in self.owners.iter().enumerate() {
            for &(v, c) in own {
                coefficients[v][i] += c;
            }
        }
        VertexData {
            labels: self.graph.labels.clone(),
            coefficients,
        }
    }

    pub fn fibration(&self) -> Result<Fibration, FamilyError> {
        Ok(Fibration::new(self.surface.clone(), self.word.clone())?
            .with_vertices(self.vertex_data())?)
    }
}

fn curve(s: &Surface, seed: Seed) -> Result<Factor, FamilyError> {
    Ok(Factor::pos(CurveRef::seed(s, seed)?))
}

/// The genus-1 word `β₁⋯β_{c₁−1} W_a γ_N δ_{c₁−1} W_c γ_N W_b`.
pub fn three_leg(legs: &Legs) -> Result<Monodromy, FamilyError> {
    legs.check()?;
    let Legs { a, c, b } = legs;
    let (na, nc) = (a.len(), c.len());
    let ctr = na;
    let cv = |l: usize| ctr + 1 + l;
    let bv = |l: usize| ctr + 1 + nc + l;
    let n = (a.iter().sum::<i64>() - 2 * na as i64 + 1) as usize;

    let mut seeds: Vec<(Seed, Vec<(usize, i64)>)> = Vec::new();
    let mut nb = c[0] as usize - 1;
    for j in 1..=nb {
        seeds.push((Seed::Beta(j), vec![(cv(0), -1)]));
    }
    let mut h = 0;
    for (i, &ai) in a.iter().enumerate() {
        let k = if i == 0 { ai - 1 } else { ai - 2 };
        for _ in 0..k {
            h += 1;
            seeds.push((Seed::Alpha(h), vec![(i, -1)]));
        }
        if i + 1 < na {
            seeds.push((Seed::Gamma(h), vec![(i, 1), (i + 1, -1)]));
        }
    }
    debug_assert_eq!(h, n);
    seeds.push((Seed::Gamma(n), vec![(na - 1, 1), (ctr, -1)]));
    let mut d1 = vec![(cv(0), 1)];
    if nc > 1 {
        d1.push((cv(1), -1));
    }
    seeds.push((Seed::Delta(nb), d1));
    for (l, &cl) in c.iter().enumerate().take(nc).skip(1) {
        for _ in 0..cl - 2 {
            nb += 1;
            seeds.push((Seed::Beta(nb), vec![(cv(l), -1)]));
        }
        let mut own = vec![(cv(l), 1)];
        if l + 1 < nc {
            own.push((cv(l + 1), -1));
        }
        seeds.push((Seed::Delta(nb), own));
    }
    seeds.push((Seed::Gamma(n), vec![(ctr, 1), (bv(0), -1)]));
    let mut hh = n;
    for (l, &bl) in b.iter().enumerate() {
        for _ in 0..bl - 2 {
            hh += 1;
            seeds.push((Seed::Alpha(hh), vec![(bv(l), -1)]));
        }
        let mut own = vec![(bv(l), 1)];
        if l + 1 < b.len() {
            own.push((bv(l + 1), -1));
        }
        seeds.push((Seed::Gamma(hh), own));
    }
    if n == 0 || n >= hh {
        return Err(FamilyError::Template(format!(
            "neck {n} must lie strictly inside 1..{hh}"
        )));
    }
    let surface = Arc::new(Surface::fiber(hh, n, nb - 1)?);
    let mut word = Vec::with_capacity(seeds.len());
    let mut owners = Vec::with_capacity(seeds.len());
    for (seed, own) in seeds {
        word.push(curve(&surface, seed)?);
        owners.push(own);
    }
    Ok(Monodromy {
        surface,
        graph: legs.graph(),
        word,
        owners,
    })
}

/// Planar Gay–Mark word of a linear graph, weights listed along the chain.
pub fn gay_mark_word(weights: &[i64]) -> Result<Monodromy, FamilyError> {
    if weights.is_empty() {
        return Err(FamilyError::Template("empty graph".into()));
    }
    if let Some(w) = weights.iter().find(|&&w| w > -2) {
        return Err(FamilyError::Template(format!("degree {w} is above −2")));
    }
    let a: Vec<i64> = weights.iter().map(|w| -w).collect();
    let n = (a.iter().sum::<i64>() - 2 * a.len() as i64 + 1) as usize;
    let surface = Arc::new(Surface::planar(n)?);
    let mut word = Vec::new();
    let mut owners = Vec::new();
    let mut h = 0;
    for (i, &ai) in a.iter().enumerate() {
        let k = if i == 0 { ai - 1 } else { ai - 2 };
        for _ in 0..k {
            h += 1;
            word.push(curve(&surface, Seed::Alpha(h))?);
            owners.push(vec![(i, -1)]);
        }
        let mut own = vec![(i, 1)];
        if i + 1 < a.len() {
            own.push((i + 1, -1));
        }
        word.push(curve(&surface, Seed::Gamma(h))?);
        owners.push(own);
    }
    Ok(Monodromy {
        surface,
        graph: ResolutionGraph::linear(weights),
        word,
        owners,
    })
}

/// Vertices along the path starting at `start`, not stepping back to `prev`.
fn walk(g: &ResolutionGraph, start: usize, prev: Option<usize>) -> Vec<usize> {
    let mut out = vec![start];
    let (mut last, mut cur) = (prev, start);
    while let Some(next) = g.neighbors(cur).into_iter().find(|&v| Some(v) != last) {
        out.push(next);
        (last, cur) = (Some(cur), next);
    }
    out
}

/// Moves ownership from template vertex `i` to `order[i]` of `g`.
fn relabel(mut m: Monodromy, order: &[usize], g: &ResolutionGraph) -> Monodromy {
    for own in &mut m.owners {
        for (v, _) in own.iter_mut() {
            *v = order[*v];
        }
    }
    let mut graph = g.clone();
    if graph.labels.len() != graph.len() {
        graph.labels = (0..graph.len()).map(|i| format!("v{i}")).collect();
    }
    m.graph = graph;
    m
}

fn lattice_matches(m: &Monodromy) -> Result<bool, FamilyError> {
    let f = m.fibration()?;
    Ok(vertex_form(&f)?.gram() == plumbing_matrix(&m.graph)?.gram())
}

/// A monodromy for a tree: a chain gets the planar word, a tree with one
/// trivalent −2 vertex the genus-1 three-leg word. Ownership refers to the
/// vertices of `g`.
pub fn monodromy_for_graph(g: &ResolutionGraph) -> Result<Monodromy, FamilyError> {
    g.check()?;
    let n = g.len();
    if n == 0 {
        return Err(FamilyError::Template("empty graph".into()));
    }
    let connected = walk_all(g) == n;
    if g.edges.len() != n - 1 || !connected {
        return Err(FamilyError::Template("graph must be a tree".into()));
    }
    let val: Vec<usize> = (0..n).map(|v| g.neighbors(v).len()).collect();
    if val.iter().all(|&d| d <= 2) {
        let start = (0..n).find(|&v| val[v] <= 1).expect("a tree has a leaf");
        let order = walk(g, start, None);
        let weights: Vec<i64> = order.iter().map(|&v| g.weights[v]).collect();
        return Ok(relabel(gay_mark_word(&weights)?, &order, g));
    }
    let centers: Vec<usize> = (0..n).filter(|&v| val[v] >= 3).collect();
    let c = match centers.as_slice() {
        [c] if val[*c] == 3 => *c,
        _ => {
            return Err(FamilyError::Template(
                "only chains and three-legged trees are supported".into(),
            ))
        }
    };
    if g.weights[c] != -2 {
        return Err(FamilyError::Template(format!(
            "central vertex has degree {}, expected −2",
            g.weights[c]
        )));
    }
    let legs: Vec<Vec<usize>> = g
        .neighbors(c)
        .into_iter()
        .map(|v| walk(g, v, Some(c)))
        .collect();
    let deg = |l: &[usize]| l.iter().map(|&v| -g.weights[v]).collect::<Vec<i64>>();
    for [ia, ic, ib] in [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ] {
        let far_first: Vec<usize> = legs[ia].iter().rev().copied().collect();
        let t = Legs {
            a: deg(&far_first),
            c: deg(&legs[ic]),
            b: deg(&legs[ib]),
        };
        let Ok(m) = three_leg(&t) else { continue };
        let mut order = far_first;
        order.push(c);
        order.extend(&legs[ic]);
        order.extend(&legs[ib]);
        let m = relabel(m, &order, g);
        if lattice_matches(&m)? {
            return Ok(m);
        }
    }
    Err(FamilyError::Template(
        "no leg assignment yields a three-leg word".into(),
    ))
}

fn walk_all(g: &ResolutionGraph) -> usize {
    let mut seen = vec![false; g.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for u in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.iter().filter(|&&x| x).count()
}
