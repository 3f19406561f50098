//! Free-group words, automorphisms and mapping classes rel boundary.
//!
//! Letters are nonzero `i32`s: `g` is the generator `x_g`, `-g` its inverse.
//! A [`MarkedClass`] is an automorphism of the fundamental group of a surface
//! together with one arc prefix per inner boundary component, which is what
//! separates boundary-parallel twists from the identity.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FatGroupError {
    #[error("letter {letter} is outside the alphabet of rank {rank}")]
    InvalidGenerator { letter: i32, rank: usize },
    #[error("alphabet mismatch: rank {left} vs rank {right}")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("arc count mismatch: {left} vs {right}")]
    ArcMismatch { left: usize, right: usize },
    #[error("automorphism could not be inverted by Nielsen reduction")]
    NotInvertible,
}

/// A freely reduced word.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: i32) -> Self {
        assert!(g != 0, "zero is not a letter");
        Word(vec![g])
    }

    /// Reduces `raw` without checking the alphabet.
    pub fn reduced<I: IntoIterator<Item = i32>>(raw: I) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for x in raw {
            assert!(x != 0, "zero is not a letter");
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Word(out)
    }

    /// Reduces `raw`, rejecting letters outside `1..=rank`.
    pub fn from_letters(raw: &[i32], rank: usize) -> Result<Self, FatGroupError> {
        for &x in raw {
            if x == 0 || x.unsigned_abs() as usize > rank {
                return Err(FatGroupError::InvalidGenerator { letter: x, rank });
            }
        }
        Ok(Word::reduced(raw.iter().copied()))
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_generator(&self) -> usize {
        self.0
            .iter()
            .map(|x| x.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|x| -x).collect())
    }

    pub fn mul(&self, other: &Word) -> Self {
        let mut out = self.0.clone();
        for &x in &other.0 {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Word(out)
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Word>>(ws: I) -> Self {
        ws.into_iter().fold(Word::empty(), |acc, w| acc.mul(w))
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Word::empty(), |acc, _| acc.mul(&base))
    }

    /// Splits `self = p · core · p⁻¹` with `core` cyclically reduced.
    pub fn cyclic_split(&self) -> (Word, Word) {
        let w = &self.0;
        let n = w.len();
        let mut i = 0;
        while n >= 2 * i + 2 && w[i] == -w[n - 1 - i] {
            i += 1;
        }
        (Word(w[..i].to_vec()), Word(w[i..n - i].to_vec()))
    }

    pub fn cyclic_core(&self) -> Word {
        self.cyclic_split().1
    }

    /// Least rotation of the cyclic core.
    pub fn canonical_cyclic(&self) -> Word {
        let c = self.cyclic_core().0;
        if c.is_empty() {
            return Word(c);
        }
        let best = (0..c.len())
            .map(|i| {
                let mut r = c[i..].to_vec();
                r.extend_from_slice(&c[..i]);
                r
            })
            .min()
            .unwrap();
        Word(best)
    }

    /// Equality of free homotopy classes of unoriented loops.
    pub fn same_curve(&self, other: &Word) -> bool {
        let a = self.canonical_cyclic();
        a == other.canonical_cyclic() || a == other.inverse().canonical_cyclic()
    }

    pub fn abelianize(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for &x in &self.0 {
            v[x.unsigned_abs() as usize - 1] += x.signum() as i64;
        }
        v
    }

    /// Substitutes `images[g-1]` for every letter `g`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out: Vec<i32> = Vec::new();
        for &x in &self.0 {
            let img = &images[x.unsigned_abs() as usize - 1];
            if x > 0 {
                for &y in &img.0 {
                    push_reduce(&mut out, y);
                }
            } else {
                for &y in img.0.iter().rev() {
                    push_reduce(&mut out, -y);
                }
            }
        }
        Word(out)
    }
}

fn push_reduce(out: &mut Vec<i32>, y: i32) {
    if out.last() == Some(&-y) {
        out.pop();
    } else {
        out.push(y);
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl From<&[i32]> for Word {
    fn from(raw: &[i32]) -> Self {
        Word::reduced(raw.iter().copied())
    }
}

impl<const N: usize> From<[i32; N]> for Word {
    fn from(raw: [i32; N]) -> Self {
        Word::reduced(raw)
    }
}

impl From<Vec<i32>> for Word {
    fn from(raw: Vec<i32>) -> Self {
        Word::reduced(raw)
    }
}

/// An endomorphism of the free group, given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeAut {
    images: Vec<Word>,
}

type LetterKey = (u32, bool);

/// Well-order for Nielsen reduction: length, then the smaller and the larger
/// of the initial halves of `w` and `w⁻¹` (letters ordered `x₁ < x₁⁻¹ < x₂ …`).
fn nielsen_key(w: &Word) -> (usize, Vec<LetterKey>, Vec<LetterKey>) {
    let half = |v: &Word| -> Vec<LetterKey> {
        v.letters()[..v.len().div_ceil(2)]
            .iter()
            .map(|&x| (x.unsigned_abs(), x < 0))
            .collect()
    };
    let (a, b) = (half(w), half(&w.inverse()));
    if a <= b {
        (w.len(), a, b)
    } else {
        (w.len(), b, a)
    }
}

impl FreeAut {
    pub fn identity(rank: usize) -> Self {
        FreeAut {
            images: (1..=rank as i32).map(Word::gen).collect(),
        }
    }

    pub fn from_images(images: Vec<Word>) -> Result<Self, FatGroupError> {
        let rank = images.len();
        for w in &images {
            Word::from_letters(w.letters(), rank)?;
        }
        Ok(FreeAut { images })
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &FreeAut) -> Result<FreeAut, FatGroupError> {
        if self.rank() != other.rank() {
            return Err(FatGroupError::AlphabetMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        Ok(FreeAut {
            images: other.images.iter().map(|w| self.apply(w)).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [i as i32 + 1])
    }

    /// Inverse by Nielsen reduction of the image basis.
    ///
    /// Each move replaces one image by a product with another that is
    /// strictly smaller in [`nielsen_key`]; a basis reduces to letters.
    pub fn inverse(&self) -> Result<FreeAut, FatGroupError> {
        let n = self.rank();
        let mut z = self.images.clone();
        // e[i] records z[i] as a word in the original images
        let mut e: Vec<Word> = (1..=n as i32).map(Word::gen).collect();
        loop {
            let mut improved = false;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    for s in [1, -1] {
                        let zj = z[j].pow(s);
                        let ej = e[j].pow(s);
                        let right = z[i].mul(&zj);
                        if nielsen_key(&right) < nielsen_key(&z[i]) {
                            z[i] = right;
                            e[i] = e[i].mul(&ej);
                            improved = true;
                            continue;
                        }
                        let left = zj.mul(&z[i]);
                        if nielsen_key(&left) < nielsen_key(&z[i]) {
                            z[i] = left;
                            e[i] = ej.mul(&e[i]);
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
        let mut inv = vec![Word::empty(); n];
        let mut seen = vec![false; n];
        for i in 0..n {
            if z[i].len() != 1 {
                return Err(FatGroupError::NotInvertible);
            }
            let x = z[i].letters()[0];
            let g = x.unsigned_abs() as usize - 1;
            if seen[g] {
                return Err(FatGroupError::NotInvertible);
            }
            seen[g] = true;
            inv[g] = e[i].pow(x.signum());
        }
        Ok(FreeAut { images: inv })
    }

    /// Induced map on the abelianization; column `g` is the class of the image of `x_g`.
    pub fn abelianize(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let cols: Vec<Vec<i64>> = self.images.iter().map(|w| w.abelianize(n)).collect();
        (0..n)
            .map(|r| (0..n).map(|c| cols[c][r]).collect())
            .collect()
    }
}

/// A mapping class rel boundary: automorphism plus arc prefixes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedClass {
    aut: FreeAut,
    arcs: Vec<Word>,
}

/// Where two marked classes first disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Difference {
    Generator {
        index: usize,
        left: Word,
        right: Word,
    },
    Arc {
        index: usize,
        left: Word,
        right: Word,
    },
    Shape,
}

impl fmt::Display for Difference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Difference::Generator { index, left, right } => {
                write!(f, "image of x{} differs: {} vs {}", index + 1, left, right)
            }
            Difference::Arc { index, left, right } => {
                write!(f, "arc prefix {} differs: {} vs {}", index, left, right)
            }
            Difference::Shape => write!(f, "alphabet or arc count differs"),
        }
    }
}

impl MarkedClass {
    pub fn identity(rank: usize, arcs: usize) -> Self {
        MarkedClass {
            aut: FreeAut::identity(rank),
            arcs: vec![Word::empty(); arcs],
        }
    }

    pub fn new(aut: FreeAut, arcs: Vec<Word>) -> Result<Self, FatGroupError> {
        for w in &arcs {
            Word::from_letters(w.letters(), aut.rank())?;
        }
        Ok(MarkedClass { aut, arcs })
    }

    pub fn aut(&self) -> &FreeAut {
        &self.aut
    }

    pub fn arcs(&self) -> &[Word] {
        &self.arcs
    }

    pub fn rank(&self) -> usize {
        self.aut.rank()
    }

    pub fn apply(&self, w: &Word) -> Word {
        self.aut.apply(w)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MarkedClass) -> Result<MarkedClass, FatGroupError> {
        let aut = self.aut.compose(&other.aut)?;
        if self.arcs.len() != other.arcs.len() {
            return Err(FatGroupError::ArcMismatch {
                left: self.arcs.len(),
                right: other.arcs.len(),
            });
        }
        let arcs = other
            .arcs
            .iter()
            .zip(&self.arcs)
            .map(|(pg, pf)| self.aut.apply(pg).mul(pf))
            .collect();
        Ok(MarkedClass { aut, arcs })
    }

    pub fn inverse(&self) -> Result<MarkedClass, FatGroupError> {
        let aut = self.aut.inverse()?;
        let arcs = self.arcs.iter().map(|a| aut.apply(&a.inverse())).collect();
        Ok(MarkedClass { aut, arcs })
    }

    pub fn pow(&self, e: i32) -> Result<MarkedClass, FatGroupError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = MarkedClass::identity(self.rank(), self.arcs.len());
        for _ in 0..e.unsigned_abs() {
            out = out.compose(&base)?;
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.aut.is_identity() && self.arcs.iter().all(Word::is_empty)
    }

    pub fn first_difference(&self, other: &MarkedClass) -> Option<Difference> {
        if self.rank() != other.rank() || self.arcs.len() != other.arcs.len() {
            return Some(Difference::Shape);
        }
        for (i, (a, b)) in self.aut.images.iter().zip(&other.aut.images).enumerate() {
            if a != b {
                return Some(Difference::Generator {
                    index: i,
                    left: a.clone(),
                    right: b.clone(),
                });
            }
        }
        for (i, (a, b)) in self.arcs.iter().zip(&other.arcs).enumerate() {
            if a != b {
                return Some(Difference::Arc {
                    index: i,
                    left: a.clone(),
                    right: b.clone(),
                });
            }
        }
        None
    }

    pub fn abelianize(&self) -> Vec<Vec<i64>> {
        self.aut.abelianize()
    }

    /// Total letter count of images and arcs.
    pub fn size(&self) -> usize {
        self.aut
            .images
            .iter()
            .chain(&self.arcs)
            .map(Word::len)
            .sum()
    }
}
