//! Smith normal form over arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

type Mat = Vec<Vec<BigInt>>;

fn ident(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn mul(a: &Mat, b: &Mat) -> Mat {
    let p = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..p)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for (l, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[l][j].is_zero() {
                            s += x * &b[l][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | ⋯`.
///
/// The inverses of `U` and `V` are tracked alongside so unimodularity can
/// be checked by multiplication.
#[derive(Clone, Debug)]
pub struct Snf {
    pub a: Mat,
    pub d: Mat,
    pub u: Mat,
    pub v: Mat,
    u_inv: Mat,
    v_inv: Mat,
    pub rank: usize,
}

struct Work {
    d: Mat,
    u: Mat,
    v: Mat,
    u_inv: Mat,
    v_inv: Mat,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.d.swap(i, j);
            self.u.swap(i, j);
            for row in &mut self.u_inv {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in self.d.iter_mut().chain(self.v.iter_mut()) {
                row.swap(i, j);
            }
            self.v_inv.swap(i, j);
        }
    }

    /// row i -= c · row j
    fn row_sub(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for m in [&mut self.d, &mut self.u] {
            let rj = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(rj.iter()) {
                *x -= c * y;
            }
        }
        for row in &mut self.u_inv {
            let t = c * &row[i];
            row[j] += t;
        }
    }

    /// col i -= c · col j
    fn col_sub(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for m in [&mut self.d, &mut self.v] {
            for row in m.iter_mut() {
                let t = c * &row[j];
                row[i] -= t;
            }
        }
        let ri = self.v_inv[i].clone();
        for (x, y) in self.v_inv[j].iter_mut().zip(ri.iter()) {
            *x += c * y;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.d[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -&*x;
        }
        for row in &mut self.u_inv {
            row[i] = -&row[i];
        }
    }
}

impl Snf {
    pub fn new(a: &[Vec<i64>]) -> Snf {
        let big: Mat = a
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Snf::new_big(big)
    }

    pub fn new_big(a: Mat) -> Snf {
        let m = a.len();
        let n = a.first().map_or(0, Vec::len);
        let mut w = Work {
            d: a.clone(),
            u: ident(m),
            v: ident(n),
            u_inv: ident(m),
            v_inv: ident(n),
        };
        let mut t = 0;
        while t < m.min(n) {
            // smallest nonzero |entry|, row-major on ties
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &w.d[i][j];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..m {
                    if !w.d[i][t].is_zero() {
                        let q = w.d[i][t].div_floor(&w.d[t][t]);
                        w.row_sub(i, t, &q);
                        if !w.d[i][t].is_zero() {
                            dirty = true;
                        }
                    }
                }
                for j in t + 1..n {
                    if !w.d[t][j].is_zero() {
                        let q = w.d[t][j].div_floor(&w.d[t][t]);
                        w.col_sub(j, t, &q);
                        if !w.d[t][j].is_zero() {
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    // bring the smallest remainder in row/column t to the pivot
                    let mut best = (t, t);
                    for i in t + 1..m {
                        let x = &w.d[i][t];
                        if !x.is_zero() && x.abs() < w.d[best.0][best.1].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..n {
                        let x = &w.d[t][j];
                        if !x.is_zero() && x.abs() < w.d[best.0][best.1].abs() {
                            best = (t, j);
                        }
                    }
                    w.swap_rows(t, best.0);
                    w.swap_cols(t, best.1);
                    continue;
                }
                let p = w.d[t][t].clone();
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.d[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => w.row_sub(t, i, &BigInt::from(-1)),
                    None => break,
                }
            }
            if w.d[t][t].is_negative() {
                w.negate_row(t);
            }
            t += 1;
        }
        let out = Snf {
            a,
            d: w.d,
            u: w.u,
            v: w.v,
            u_inv: w.u_inv,
            v_inv: w.v_inv,
            rank: t,
        };
        if cfg!(debug_assertions) {
            out.verify().expect("Smith normal form reconstruction");
        }
        out
    }

    /// Reconstruction, unimodularity and divisibility checks.
    pub fn verify(&self) -> Result<(), String> {
        if mul(&mul(&self.u, &self.a), &self.v) != self.d {
            return Err("U·A·V ≠ D".into());
        }
        if mul(&self.u, &self.u_inv) != ident(self.u.len())
            || mul(&self.v, &self.v_inv) != ident(self.v.len())
        {
            return Err("transform not unimodular".into());
        }
        for (i, row) in self.d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j && !x.is_zero() {
                    return Err(format!("off-diagonal entry at ({i}, {j})"));
                }
            }
        }
        let diag = self.diagonal();
        for k in 0..diag.len() {
            if k < self.rank {
                if !diag[k].is_positive() {
                    return Err(format!("nonpositive invariant factor {}", diag[k]));
                }
                if k + 1 < self.rank && !diag[k + 1].is_multiple_of(&diag[k]) {
                    return Err(format!("{} does not divide {}", diag[k], diag[k + 1]));
                }
            } else if !diag[k].is_zero() {
                return Err("nonzero entry past the rank".into());
            }
        }
        Ok(())
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len)))
            .map(|i| self.d[i][i].clone())
            .collect()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .take(self.rank)
            .filter(|x| !x.is_one())
            .collect()
    }

    /// Lattice basis of the right kernel: the last columns of `V`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let n = self.v.len();
        (self.rank..n)
            .map(|j| (0..n).map(|i| self.v[i][j].clone()).collect())
            .collect()
    }

    /// Order of the cokernel of a square matrix; zero when singular.
    pub fn coker_order(&self) -> BigInt {
        let n = self.a.len();
        if self.a.first().map_or(0, Vec::len) != n || self.rank < n {
            return BigInt::zero();
        }
        self.diagonal().iter().product()
    }
}
