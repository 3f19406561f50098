use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::rose::Rose;
use super::SurfaceError;
use crate::fatgroup::{MarkedClass, Word};

/// Hole layout of a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Layout {
    /// Disk with `holes` holes in a row.
    Planar { holes: usize },
    /// Disk with `horizontal` holes in a row, a band attached across holes
    /// `neck` and `neck + 1`, and `upper` holes in the band.
    Fiber {
        horizontal: usize,
        neck: usize,
        upper: usize,
    },
}

/// Named curves of a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Seed {
    /// Around hole `i` of the horizontal run.
    Alpha(usize),
    /// Around holes `1..=i` (and the whole band once `i > N`).
    Gamma(usize),
    /// `Beta(1)` runs through the band; `Beta(j)` circles upper hole `j - 1`.
    Beta(usize),
    /// Around `Beta(1..=j)` inside the band.
    Delta(usize),
    /// Around all upper holes.
    BigBeta,
    Outer,
    /// Boundary of inner face `j` (0-based, face order of the rose).
    Inner(usize),
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seed::Alpha(i) => write!(f, "a{i}"),
            Seed::Gamma(i) => write!(f, "g{i}"),
            Seed::Beta(j) => write!(f, "b{j}"),
            Seed::Delta(j) => write!(f, "d{j}"),
            Seed::BigBeta => write!(f, "B"),
            Seed::Outer => write!(f, "out"),
            Seed::Inner(j) => write!(f, "in{j}"),
        }
    }
}

/// A surface model: a rose with its basepoint, arcs and seed catalog.
///
/// Twists are memoized; the cache is invisible to callers.
pub struct Surface {
    layout: Layout,
    rose: Rose,
    inner: Vec<usize>,
    cache: Mutex<HashMap<(Word, i32), Arc<MarkedClass>>>,
}

impl fmt::Debug for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Surface")
            .field("layout", &self.layout)
            .field("order", &self.rose.order())
            .finish()
    }
}

impl Surface {
    fn from_rose(layout: Layout, rose: Rose) -> Self {
        let inner = rose.inner_corners();
        Surface {
            layout,
            rose,
            inner,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Disk with `n` holes; generator `i` loops around hole `i`.
    pub fn planar(n: usize) -> Result<Self, SurfaceError> {
        if n == 0 {
            return Err(SurfaceError::Empty);
        }
        let order = (1..=n as i32).rev().flat_map(|i| [i, -i]).collect();
        Ok(Self::from_rose(
            Layout::Planar { holes: n },
            Rose::new(n, order),
        ))
    }

    /// Genus-1 fiber. Generators: `1..=h` hole loops, `h+1` the band core
    /// `t`, then one loop per upper hole.
    pub fn fiber(h: usize, neck: usize, upper: usize) -> Result<Self, SurfaceError> {
        if neck == 0 || neck >= h {
            return Err(SurfaceError::BadLayout(format!(
                "neck {neck} must lie in 1..{h}"
            )));
        }
        let k = h + 1 + upper;
        let t = h as i32 + 1;
        let mut order = Vec::with_capacity(2 * k);
        for i in (1..=h).rev() {
            let i32_ = i as i32;
            if i == neck + 1 {
                order.extend([i32_, -t, -i32_]);
            } else if i == neck {
                order.extend([i32_, t]);
                for j in 0..upper {
                    let u = t + 1 + j as i32;
                    order.extend([u, -u]);
                }
                order.push(-i32_);
            } else {
                order.extend([i32_, -i32_]);
            }
        }
        let rose = Rose::new(k, order).with_clockwise(&[t]);
        Ok(Self::from_rose(
            Layout::Fiber {
                horizontal: h,
                neck,
                upper,
            },
            rose,
        ))
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn rose(&self) -> &Rose {
        &self.rose
    }

    /// Rank of π₁ (= b₁).
    pub fn rank(&self) -> usize {
        self.rose.rank()
    }

    pub fn b1(&self) -> usize {
        self.rank()
    }

    pub fn genus(&self) -> usize {
        (self.rank() + 1 - self.boundary_count()) / 2
    }

    pub fn boundary_count(&self) -> usize {
        self.rose.faces().len()
    }

    pub fn euler_char(&self) -> i64 {
        1 - self.rank() as i64
    }

    pub fn inner_corners(&self) -> &[usize] {
        &self.inner
    }

    pub fn outer_word(&self) -> Word {
        self.rose.face_word_from(self.rose.base_corner())
    }

    /// Inner boundary loops, each conjugated to the basepoint along its arc.
    pub fn inner_words(&self) -> Vec<Word> {
        self.inner
            .iter()
            .map(|&c| self.rose.face_word_from(c))
            .collect()
    }

    fn horizontal(&self) -> usize {
        match self.layout {
            Layout::Planar { holes } => holes,
            Layout::Fiber { horizontal, .. } => horizontal,
        }
    }

    fn band(&self) -> Option<(usize, usize)> {
        match self.layout {
            Layout::Planar { .. } => None,
            Layout::Fiber { neck, upper, .. } => Some((neck, upper)),
        }
    }

    /// Band core generator `t`.
    pub fn band_core(&self) -> Option<i32> {
        self.band().map(|_| self.horizontal() as i32 + 1)
    }

    /// Upper hole generators.
    pub fn upper_gens(&self) -> Vec<i32> {
        match self.band() {
            None => Vec::new(),
            Some((_, s)) => (0..s)
                .map(|j| self.horizontal() as i32 + 2 + j as i32)
                .collect(),
        }
    }

    fn subrose_outer(&self, gens: &[usize]) -> Word {
        let (sr, back) = self.rose.subrose(gens);
        let w = sr.face_word_from(sr.base_corner());
        unrename(&w, &back)
    }

    fn check(&self, seed: Seed, ok: bool) -> Result<(), SurfaceError> {
        if ok {
            Ok(())
        } else {
            Err(SurfaceError::UnknownSeed(seed.to_string()))
        }
    }

    /// Based loop word of a seed curve.
    pub fn seed_word(&self, seed: Seed) -> Result<Word, SurfaceError> {
        let h = self.horizontal();
        match seed {
            Seed::Alpha(i) => {
                self.check(seed, (1..=h).contains(&i))?;
                Ok(Word::gen(i as i32))
            }
            Seed::Gamma(i) => {
                self.check(seed, (1..=h).contains(&i))?;
                let mut gens: Vec<usize> = (1..=i).collect();
                if let Some((neck, _)) = self.band() {
                    if i > neck {
                        gens.extend((h + 1)..=self.rank());
                    }
                }
                Ok(self.subrose_outer(&gens))
            }
            Seed::Beta(j) => {
                let (_, s) = self
                    .band()
                    .ok_or(SurfaceError::UnknownSeed(seed.to_string()))?;
                self.check(seed, (1..=s + 1).contains(&j))?;
                Ok(Word::gen((h + j) as i32))
            }
            Seed::Delta(j) => {
                let (_, s) = self
                    .band()
                    .ok_or(SurfaceError::UnknownSeed(seed.to_string()))?;
                self.check(seed, (1..=s + 1).contains(&j))?;
                let gens: Vec<usize> = (h + 1..=h + j).collect();
                let (sr, back) = self.rose.subrose(&gens);
                let t = (h + 1) as i32;
                let face = sr
                    .faces()
                    .iter()
                    .map(|f| unrename(&Word::reduced(f.word.iter().copied()), &back))
                    .find(|w| j == 1 || (w.len() == j && w.letters().iter().any(|x| x.abs() == t)))
                    .ok_or_else(|| SurfaceError::UnknownSeed(seed.to_string()))?;
                Ok(face)
            }
            Seed::BigBeta => {
                let ups = self.upper_gens();
                self.check(seed, !ups.is_empty())?;
                let gens: Vec<usize> = ups.iter().map(|&u| u as usize).collect();
                Ok(self.subrose_outer(&gens))
            }
            Seed::Outer => Ok(self.outer_word()),
            Seed::Inner(j) => {
                self.check(seed, j < self.inner.len())?;
                Ok(self.rose.face_word_from(self.inner[j]))
            }
        }
    }

    /// Every seed of the model, for catalog-wide checks.
    pub fn catalog(&self) -> Vec<Seed> {
        let h = self.horizontal();
        let mut out: Vec<Seed> = (1..=h).map(Seed::Alpha).collect();
        out.extend((1..=h).map(Seed::Gamma));
        if let Some((_, s)) = self.band() {
            out.extend((1..=s + 1).map(Seed::Beta));
            out.extend((1..=s + 1).map(Seed::Delta));
            if s > 0 {
                out.push(Seed::BigBeta);
            }
        }
        out.push(Seed::Outer);
        out
    }

    /// Twist along the loop `c` with exponent `sign = ±1`.
    pub fn twist(&self, c: &Word, sign: i32) -> Arc<MarkedClass> {
        assert!(sign == 1 || sign == -1);
        let core = c.cyclic_core();
        let a = core.canonical_cyclic();
        let b = core.inverse().canonical_cyclic();
        let key = (a.min(b), sign);
        if let Some(m) = self.cache.lock().unwrap().get(&key) {
            return m.clone();
        }
        let m = Arc::new(self.rose.twist(&core, sign, &self.inner));
        self.cache.lock().unwrap().insert(key, m.clone());
        m
    }

    /// `t_c^e`.
    pub fn twist_pow(&self, c: &Word, e: i32) -> MarkedClass {
        let s = if e < 0 { -1 } else { 1 };
        let one = self.twist(c, s);
        let mut out = self.identity();
        for _ in 0..e.unsigned_abs() {
            out = out.compose(&one).expect("same model");
        }
        out
    }

    pub fn identity(&self) -> MarkedClass {
        MarkedClass::identity(self.rank(), self.inner.len())
    }

    /// Cyclic core of `f(c)`.
    pub fn image(&self, f: &MarkedClass, c: &Word) -> Word {
        f.apply(c).cyclic_core()
    }

    pub fn homology(&self, c: &Word) -> Vec<i64> {
        c.abelianize(self.rank())
    }

    pub fn pairing_matrix(&self) -> Vec<Vec<i64>> {
        self.rose.pairing_matrix()
    }

    /// Algebraic intersection of two classes.
    pub fn pairing(&self, x: &[i64], y: &[i64]) -> i64 {
        let m = self.pairing_matrix();
        let mut s = 0;
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                s += xi * m[i][j] * yj;
            }
        }
        s
    }

    pub fn winding(&self, c: &Word) -> Option<i64> {
        self.rose.winding(c)
    }

    pub fn self_crossings(&self, c: &Word) -> Option<usize> {
        self.rose.self_crossings(c)
    }

    pub fn is_simple(&self, c: &Word) -> bool {
        self.self_crossings(c) == Some(0)
    }
}

fn unrename(w: &Word, back: &[i32]) -> Word {
    Word::reduced(w.letters().iter().map(|&d| {
        let g = back[d.unsigned_abs() as usize - 1];
        if d > 0 {
            g
        } else {
            -g
        }
    }))
}
