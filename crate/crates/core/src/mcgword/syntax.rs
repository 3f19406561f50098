//! Text syntax for twist words.
//!
//! ```text
//! word   := factor (sep factor)*          sep: whitespace, '*' or '·'
//! factor := curve ('^' int)?
//! curve  := 'a' idx | 'g' idx | 'b' idx | 'd' idx | 'B' | 'out' | 'in' idx
//!         | 'L[' int (',' int)* ']'        explicit based loop
//!         | 'I[' word ']' '(' curve ')'    image of a curve under a word
//! idx    := digits | '{' expr '}'          expr: sums of digits and p, q, r
//! ```
//!
//! `I[b1](g{q+3})` is the image of γ_{q+3} under the twist along β₁.

use super::{Factor, McgError};
use crate::fatgroup::Word;
use crate::surfaces::{CurveRef, Seed, Surface};

/// Values substituted for `p`, `q`, `r` inside braces.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize,
)]
pub struct Params {
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

struct Parser<'a> {
    src: &'a [u8],
    at: usize,
    params: Params,
    surface: &'a Surface,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, McgError> {
        Err(McgError::Parse {
            at: self.at,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.at).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.src[self.at..].starts_with(s.as_bytes()) {
            self.at += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), McgError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}'"))
        }
    }

    fn skip_sep(&mut self) {
        loop {
            match self.peek() {
                Some(b' ' | b'\t' | b'\n' | b'\r' | b'*') => self.at += 1,
                _ if self.eat("·") => {}
                _ => break,
            }
        }
    }

    fn int(&mut self) -> Result<i64, McgError> {
        let neg = self.eat("-");
        let start = self.at;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.at += 1;
        }
        if start == self.at {
            return self.err("expected an integer");
        }
        let v: i64 = std::str::from_utf8(&self.src[start..self.at])
            .unwrap()
            .parse()
            .unwrap();
        Ok(if neg { -v } else { v })
    }

    fn term(&mut self) -> Result<i64, McgError> {
        match self.peek() {
            Some(b'p') => {
                self.at += 1;
                Ok(self.params.p)
            }
            Some(b'q') => {
                self.at += 1;
                Ok(self.params.q)
            }
            Some(b'r') => {
                self.at += 1;
                Ok(self.params.r)
            }
            _ => self.int(),
        }
    }

    fn idx(&mut self) -> Result<usize, McgError> {
        let v = if self.eat("{") {
            let mut v = self.term()?;
            loop {
                if self.eat("+") {
                    v += self.term()?;
                } else if self.eat("-") {
                    v -= self.term()?;
                } else {
                    break;
                }
            }
            self.expect("}")?;
            v
        } else {
            self.int()?
        };
        if v < 0 {
            return self.err("negative index");
        }
        Ok(v as usize)
    }

    fn curve(&mut self) -> Result<CurveRef, McgError> {
        let seed = if self.eat("out") {
            Seed::Outer
        } else if self.eat("in") {
            Seed::Inner(self.idx()?)
        } else if self.eat("L[") {
            let mut letters = vec![self.int()? as i32];
            while self.eat(",") {
                letters.push(self.int()? as i32);
            }
            self.expect("]")?;
            let w = Word::from_letters(&letters, self.surface.rank())
                .or_else(|e| self.err(e.to_string()))?;
            return Ok(CurveRef::from_loop(self.surface, w)?);
        } else if self.eat("I[") {
            let prefix = self.word(Some(b']'))?;
            self.expect("](")?;
            let base = self.curve()?;
            self.expect(")")?;
            return Ok(CurveRef::image(self.surface, prefix, &base));
        } else {
            match self.peek() {
                Some(b'a') => {
                    self.at += 1;
                    Seed::Alpha(self.idx()?)
                }
                Some(b'g') => {
                    self.at += 1;
                    Seed::Gamma(self.idx()?)
                }
                Some(b'b') => {
                    self.at += 1;
                    Seed::Beta(self.idx()?)
                }
                Some(b'd') => {
                    self.at += 1;
                    Seed::Delta(self.idx()?)
                }
                Some(b'B') => {
                    self.at += 1;
                    Seed::BigBeta
                }
                _ => return self.err("expected a curve"),
            }
        };
        Ok(CurveRef::seed(self.surface, seed)?)
    }

    fn factor(&mut self) -> Result<Factor, McgError> {
        let c = self.curve()?;
        let exp = if self.eat("^") { self.int()? as i32 } else { 1 };
        if exp == 0 {
            return self.err("zero exponent");
        }
        Ok(Factor::new(c, exp))
    }

    fn word(&mut self, stop: Option<u8>) -> Result<Vec<Factor>, McgError> {
        let mut out = Vec::new();
        self.skip_sep();
        while self.at < self.src.len() && self.peek() != stop {
            out.push(self.factor()?);
            self.skip_sep();
        }
        Ok(out)
    }
}

pub fn parse_word(s: &Surface, text: &str, params: Params) -> Result<Vec<Factor>, McgError> {
    let mut p = Parser {
        src: text.as_bytes(),
        at: 0,
        params,
        surface: s,
    };
    let w = p.word(None)?;
    if p.at != p.src.len() {
        return p.err("trailing input");
    }
    Ok(w)
}

pub fn parse_factor(s: &Surface, text: &str, params: Params) -> Result<Factor, McgError> {
    let w = parse_word(s, text, params)?;
    if w.len() != 1 {
        return Err(McgError::Parse {
            at: 0,
            msg: format!("expected one factor, found {}", w.len()),
        });
    }
    Ok(w.into_iter().next().unwrap())
}
