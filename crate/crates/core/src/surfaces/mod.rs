//! Surface models and curve references.

mod model;
mod rose;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use model::{Layout, Seed, Surface};
pub use rose::{Face, Rose};

use crate::fatgroup::Word;
use crate::mcgword::{evaluate, Factor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("a model needs at least one hole")]
    Empty,
    #[error("bad layout: {0}")]
    BadLayout(String),
    #[error("seed {0} does not exist in this model")]
    UnknownSeed(String),
    #[error("loop {0} uses letters outside the model alphabet")]
    BadLoop(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Expr {
    Seed(Seed),
    Loop,
    Image(Vec<Factor>, CurveRef),
    Named(String, CurveRef),
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Node {
    expr: Expr,
    word: Word,
}

/// A curve given symbolically, carrying its resolved loop word.
///
/// `Image(f, c)` is the curve `f(c)` where `f` is a twist word evaluated
/// right to left. Construction resolves the loop once; afterwards the curve
/// no longer needs its model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveRef(Arc<Node>);

impl CurveRef {
    pub fn seed(s: &Surface, seed: Seed) -> Result<Self, SurfaceError> {
        let word = s.seed_word(seed)?.cyclic_core();
        Ok(CurveRef(Arc::new(Node {
            expr: Expr::Seed(seed),
            word,
        })))
    }

    /// An explicit loop; stored as its cyclic core.
    pub fn from_loop(s: &Surface, w: Word) -> Result<Self, SurfaceError> {
        if w.max_generator() > s.rank() {
            return Err(SurfaceError::BadLoop(w.to_string()));
        }
        Ok(CurveRef(Arc::new(Node {
            expr: Expr::Loop,
            word: w.cyclic_core(),
        })))
    }

    /// `f(base)` for the twist word `prefix`.
    pub fn image(s: &Surface, prefix: Vec<Factor>, base: &CurveRef) -> Self {
        if prefix.is_empty() {
            return base.clone();
        }
        let f = evaluate(s, &prefix);
        let word = s.image(&f, base.word());
        let (prefix, base) = match &base.0.expr {
            Expr::Image(inner, b) => {
                let mut p = prefix;
                p.extend(inner.iter().cloned());
                (p, b.clone())
            }
            _ => (prefix, base.clone()),
        };
        CurveRef(Arc::new(Node {
            expr: Expr::Image(prefix, base),
            word,
        }))
    }

    /// Attaches a display name; the loop is unchanged.
    pub fn named(&self, name: impl Into<String>) -> Self {
        CurveRef(Arc::new(Node {
            expr: Expr::Named(name.into(), self.clone()),
            word: self.word().clone(),
        }))
    }

    /// Cyclically reduced loop word.
    pub fn word(&self) -> &Word {
        &self.0.word
    }

    pub fn as_seed(&self) -> Option<Seed> {
        match &self.0.expr {
            Expr::Seed(s) => Some(*s),
            Expr::Named(_, c) => c.as_seed(),
            _ => None,
        }
    }

    /// Same unoriented free homotopy class.
    pub fn same_curve(&self, other: &CurveRef) -> bool {
        self.word().same_curve(other.word())
    }

    /// Drops names and image expressions, keeping only the loop.
    pub fn to_loop(&self) -> CurveRef {
        CurveRef(Arc::new(Node {
            expr: Expr::Loop,
            word: self.word().clone(),
        }))
    }
}

impl fmt::Display for CurveRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.expr {
            Expr::Seed(s) => write!(f, "{s}"),
            Expr::Loop => {
                write!(f, "L[")?;
                for (i, x) in self.word().letters().iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Expr::Image(prefix, base) => {
                write!(f, "I[")?;
                for (i, x) in prefix.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]({base})")
            }
            Expr::Named(name, _) => write!(f, "{name}"),
        }
    }
}
