//! One-vertex ribbon graphs and the Dehn twist engine.
//!
//! A rose of rank `k` is a single vertex with `k` petals; the ribbon structure
//! is the counterclockwise order of the `2k` half-edges (`g` leaves along
//! petal `g`, `-g` comes back along it). Corner `i` sits between `order[i]`
//! and `order[i+1]`. On a circle of `4k` slots half-edge `order[i]` sits at
//! slot `2i` and corner `i` at slot `2i+1`. The basepoint is in corner `2k-1`,
//! which lies on the outer boundary face.
//!
//! A twist is computed by lifting the curve to lines through the vertex and
//! recording, for every generator loop and every inner-boundary arc, the
//! crossings with those lines in order along the path.

use std::cmp::Ordering;

use crate::fatgroup::{MarkedClass, Word};

#[derive(Clone, Debug)]
pub struct Face {
    pub corners: Vec<usize>,
    pub word: Vec<i32>,
}

#[derive(Clone, Debug)]
pub struct Rose {
    rank: usize,
    order: Vec<i32>,
    pos: Vec<usize>,
    base: usize,
    faces: Vec<Face>,
    clockwise: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Seg {
    s: usize,
    t: usize,
    ks: usize,
    eps: i32,
}

fn slot(rank: usize, d: i32) -> usize {
    if d > 0 {
        d as usize - 1
    } else {
        rank + (-d) as usize - 1
    }
}

impl Rose {
    /// Builds a rose from the ccw order of half-edges.
    ///
    /// Panics unless `order` lists each of `±1..=±rank` exactly once.
    pub fn new(rank: usize, order: Vec<i32>) -> Self {
        assert_eq!(order.len(), 2 * rank, "order must list 2k half-edges");
        let mut pos = vec![usize::MAX; 2 * rank];
        for (i, &d) in order.iter().enumerate() {
            assert!(
                d != 0 && d.unsigned_abs() as usize <= rank,
                "bad half-edge {d}"
            );
            let s = slot(rank, d);
            assert!(pos[s] == usize::MAX, "half-edge {d} repeated");
            pos[s] = i;
        }
        let mut r = Rose {
            rank,
            order,
            pos,
            base: 2 * rank - 1,
            faces: Vec::new(),
            clockwise: vec![false; rank],
        };
        r.faces = r.trace_faces();
        r
    }

    /// Marks petals drawn as clockwise loops in the planar immersion.
    pub fn with_clockwise(mut self, petals: &[i32]) -> Self {
        for &g in petals {
            self.clockwise[g as usize - 1] = true;
        }
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> &[i32] {
        &self.order
    }

    pub fn base_corner(&self) -> usize {
        self.base
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn pos(&self, d: i32) -> usize {
        self.pos[slot(self.rank, d)]
    }

    fn n(&self) -> usize {
        2 * self.rank
    }

    fn dpos(&self, d: i32) -> usize {
        2 * self.pos(d)
    }

    fn cpos(c: usize) -> usize {
        2 * c + 1
    }

    /// `x` strictly inside the ccw arc of slots from `b` to `a`.
    fn between(&self, b: usize, a: usize, x: usize) -> bool {
        let m = 4 * self.rank;
        let xb = (x + m - b) % m;
        let ab = (a + m - b) % m;
        0 < xb && xb < ab
    }

    fn trace_faces(&self) -> Vec<Face> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut faces = Vec::new();
        for c0 in 0..n {
            if seen[c0] {
                continue;
            }
            let mut c = c0;
            let mut corners = Vec::new();
            let mut word = Vec::new();
            while !seen[c] {
                seen[c] = true;
                corners.push(c);
                let d = self.order[(c + 1) % n];
                word.push(d);
                c = self.pos(-d);
            }
            faces.push(Face { corners, word });
        }
        faces
    }

    pub fn face_of_corner(&self, c: usize) -> usize {
        self.faces
            .iter()
            .position(|f| f.corners.contains(&c))
            .expect("corner out of range")
    }

    /// Boundary word of the face containing corner `c`, read from `c`.
    pub fn face_word_from(&self, c: usize) -> Word {
        let f = &self.faces[self.face_of_corner(c)];
        let i = f.corners.iter().position(|&x| x == c).unwrap();
        let mut w = f.word[i..].to_vec();
        w.extend_from_slice(&f.word[..i]);
        Word::reduced(w)
    }

    /// First corner of every face other than the base face.
    pub fn inner_corners(&self) -> Vec<usize> {
        self.faces
            .iter()
            .filter(|f| !f.corners.contains(&self.base))
            .map(|f| f.corners[0])
            .collect()
    }

    /// The rose on a subset of petals, renumbered `1..`, with the map back.
    pub fn subrose(&self, gens: &[usize]) -> (Rose, Vec<i32>) {
        let mut sorted: Vec<usize> = gens.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let ren = |d: i32| {
            let i = sorted
                .iter()
                .position(|&g| g == d.unsigned_abs() as usize)
                .unwrap() as i32
                + 1;
            if d > 0 {
                i
            } else {
                -i
            }
        };
        let order: Vec<i32> = self
            .order
            .iter()
            .copied()
            .filter(|d| sorted.contains(&(d.unsigned_abs() as usize)))
            .map(ren)
            .collect();
        let back = sorted.iter().map(|&g| g as i32).collect();
        (Rose::new(sorted.len(), order), back)
    }

    fn lines(c: &[i32]) -> Vec<(i32, i32)> {
        let n = c.len();
        (0..n).map(|k| (c[k], -c[(k + n - 1) % n])).collect()
    }

    /// Crossings of the path `w` (from corner `start` to corner `end`)
    /// with the lifts of the cyclically reduced loop `c`, sorted along the path.
    fn path_insertions(&self, c: &[i32], w: &[i32], start: usize, end: usize) -> Vec<Seg> {
        let n = c.len();
        let m = w.len();
        let l = Self::lines(c);
        let p = |d: i32| self.dpos(d);
        let mut ain = vec![Self::cpos(start)];
        ain.extend((1..=m).map(|j| p(-w[j - 1])));
        let mut bout: Vec<usize> = (0..m).map(|j| p(w[j])).collect();
        bout.push(Self::cpos(end));
        let mut visited = vec![false; (m + 1) * n];
        let mut segs = Vec::new();
        for j in 0..=m {
            for k in 0..n {
                if visited[j * n + k] {
                    continue;
                }
                let (f, b) = l[k];
                if j > 0 && (f == -w[j - 1] || b == -w[j - 1]) {
                    continue;
                }
                let s = j;
                let ks = k;
                let mut kk = k;
                visited[j * n + kk] = true;
                let mut jj = j;
                while jj < m {
                    let (f, b) = l[kk];
                    let g = w[jj];
                    if f == g {
                        kk = (kk + 1) % n;
                    } else if b == g {
                        kk = (kk + n - 1) % n;
                    } else {
                        break;
                    }
                    jj += 1;
                    visited[jj * n + kk] = true;
                }
                let (t, kt) = (jj, kk);
                let (fs, bs) = l[ks];
                let (ft, bt) = l[kt];
                let cross = if s == t {
                    let (a, bb) = (ain[s], bout[s]);
                    self.between(bb, a, p(fs)) != self.between(bb, a, p(bs))
                } else {
                    let g = w[s];
                    let es = if fs == g { bs } else { fs };
                    let gb = -w[t - 1];
                    let et = if ft == gb { bt } else { ft };
                    self.between(p(g), ain[s], p(es)) != self.between(bout[t], p(gb), p(et))
                };
                if !cross {
                    continue;
                }
                let p_left = self.between(p(fs), p(bs), ain[s]);
                segs.push(Seg {
                    s,
                    t,
                    ks,
                    eps: if p_left { -1 } else { 1 },
                });
            }
        }
        let cmp = |x: &Seg, y: &Seg| -> Ordering {
            if x.t < y.s {
                return Ordering::Less;
            }
            if y.t < x.s {
                return Ordering::Greater;
            }
            let j = x.s.max(y.s);
            let k1 = Self::rot_at(&l, w, x, j);
            let k2 = Self::rot_at(&l, w, y, j);
            let sd = self.side(&l, k1, k2);
            let (f2s, b2s) = l[y.ks];
            let pside = self.between(p(f2s), p(b2s), ain[y.s]);
            if sd == pside {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        };
        // insertion sort: the comparator is only meaningful on crossing sets
        let mut sorted: Vec<Seg> = Vec::with_capacity(segs.len());
        for sg in segs {
            let at = sorted
                .iter()
                .position(|x| cmp(&sg, x) == Ordering::Less)
                .unwrap_or(sorted.len());
            sorted.insert(at, sg);
        }
        sorted
    }

    fn rot_at(l: &[(i32, i32)], w: &[i32], seg: &Seg, j: usize) -> usize {
        let n = l.len();
        let mut kk = seg.ks;
        for &g in &w[seg.s..j] {
            let (f, _) = l[kk];
            kk = if f == g {
                (kk + 1) % n
            } else {
                (kk + n - 1) % n
            };
        }
        kk
    }

    /// Side of the line `k1` relative to the line `k2` through a common vertex.
    fn side(&self, l: &[(i32, i32)], k1: usize, k2: usize) -> bool {
        let n = l.len();
        let (mut a, mut b) = (k2, k1);
        for _ in 0..2 * n + 2 {
            let (f2, b2) = l[a];
            let (f1, b1) = l[b];
            let offs: Vec<i32> = [f1, b1]
                .into_iter()
                .filter(|&d| d != f2 && d != b2)
                .collect();
            if !offs.is_empty() {
                let s0 = self.between(self.dpos(f2), self.dpos(b2), self.dpos(offs[0]));
                assert!(
                    offs.iter()
                        .all(|&d| self.between(self.dpos(f2), self.dpos(b2), self.dpos(d)) == s0),
                    "lifted lines cross"
                );
                return s0;
            }
            b = if f1 == f2 {
                (b + 1) % n
            } else {
                (b + n - 1) % n
            };
            a = (a + 1) % n;
        }
        panic!("identical lifted lines");
    }

    fn apply_insertions(c: &[i32], w: &[i32], segs: &[Seg], sign: i32) -> Word {
        let mut out = Word::empty();
        for sg in segs {
            let e = sg.eps * sign;
            let mut rotc = c[sg.ks..].to_vec();
            rotc.extend_from_slice(&c[..sg.ks]);
            let rotc = Word::reduced(rotc);
            let pre = Word::reduced(w[..sg.s].iter().copied());
            out = out.mul(&pre).mul(&rotc.pow(e)).mul(&pre.inverse());
        }
        out
    }

    /// Right-handed (`sign = 1`) or left-handed (`sign = -1`) twist along
    /// the loop `c`, with arcs to the given inner corners.
    pub fn twist(&self, c: &Word, sign: i32, inner: &[usize]) -> MarkedClass {
        let c = c.cyclic_core();
        let cl = c.letters();
        let mut imgs = Vec::with_capacity(self.rank);
        for g in 1..=self.rank as i32 {
            let segs = self.path_insertions(cl, &[g], self.base, self.base);
            imgs.push(Self::apply_insertions(cl, &[g], &segs, sign).mul(&Word::gen(g)));
        }
        let arcs = inner
            .iter()
            .map(|&q| {
                let segs = self.path_insertions(cl, &[], self.base, q);
                Self::apply_insertions(cl, &[], &segs, sign)
            })
            .collect();
        let aut =
            crate::fatgroup::FreeAut::from_images(imgs).expect("twist images stay in the alphabet");
        MarkedClass::new(aut, arcs).expect("arcs stay in the alphabet")
    }

    fn side_walk(
        &self,
        l: &[(i32, i32)],
        k1: usize,
        k2: usize,
        forward: bool,
    ) -> Option<Vec<bool>> {
        let n = l.len();
        let (mut a, mut b) = (k2, k1);
        for _ in 0..2 * n + 2 {
            let (f2, b2) = l[a];
            let (f1, b1) = l[b];
            let offs: Vec<i32> = [f1, b1]
                .into_iter()
                .filter(|&d| d != f2 && d != b2)
                .collect();
            if !offs.is_empty() {
                return Some(
                    offs.iter()
                        .map(|&d| self.between(self.dpos(f2), self.dpos(b2), self.dpos(d)))
                        .collect(),
                );
            }
            if forward {
                b = if f1 == f2 {
                    (b + 1) % n
                } else {
                    (b + n - 1) % n
                };
                a = (a + 1) % n;
            } else {
                b = if b1 == b2 {
                    (b + n - 1) % n
                } else {
                    (b + 1) % n
                };
                a = (a + n - 1) % n;
            }
        }
        None
    }

    /// Number of transverse self-crossings of the loop drawn on the ribbon
    /// surface; `None` for proper powers or degenerate words.
    pub fn self_crossings(&self, c: &Word) -> Option<usize> {
        let c = c.cyclic_core();
        let cl = c.letters();
        let n = cl.len();
        if n == 0 {
            return Some(0);
        }
        for d in 1..n {
            if n.is_multiple_of(d) && (0..n).all(|i| cl[(i + d) % n] == cl[i]) {
                return None;
            }
        }
        let l = Self::lines(cl);
        let mut cnt = 0;
        for k1 in 0..n {
            for k2 in k1 + 1..n {
                let f = self.side_walk(&l, k1, k2, true)?;
                let bk = self.side_walk(&l, k1, k2, false)?;
                let (f2, b2) = l[k2];
                let (f1, b1) = l[k1];
                let shared = [f1, b1].iter().any(|d| *d == f2 || *d == b2);
                if !shared {
                    if f[0] != f[1] {
                        cnt += 1;
                    }
                } else if f.len() == 1 && bk.len() == 1 && f[0] != bk[0] {
                    cnt += 1;
                }
            }
        }
        Some(cnt)
    }

    /// Turning number of the loop in the planar immersion where half-edges
    /// are evenly spaced rays and each petal is a teardrop, counterclockwise
    /// unless marked clockwise. `None` if the total is not an integer.
    pub fn winding(&self, c: &Word) -> Option<i64> {
        let c = c.cyclic_core();
        let cl = c.letters();
        if cl.is_empty() {
            return Some(0);
        }
        // angles in units of 1/(2n) of a full turn
        let n = self.n() as i64;
        let full = 2 * n;
        let th = |d: i32| 2 * self.pos(d) as i64;
        let petal = |g: i32| -> i64 {
            if self.clockwise[g as usize - 1] {
                -n - (th(g) - th(-g)).rem_euclid(full)
            } else {
                n + (th(-g) - th(g)).rem_euclid(full)
            }
        };
        let mut tot = 0i64;
        let m = cl.len();
        for i in 0..m {
            let x = cl[i];
            tot += if x > 0 { petal(x) } else { -petal(-x) };
            let y = cl[(i + 1) % m];
            let head_in = th(-x) + n;
            let mut d = (th(y) - head_in).rem_euclid(full);
            if d > n {
                d -= full;
            }
            if d == n || d == -n {
                return None;
            }
            tot += d;
        }
        if tot % full != 0 {
            return None;
        }
        Some(tot / full)
    }

    /// Skew pairing of petal classes: entry `(g, h)` is the algebraic
    /// intersection of `x_g` with `x_h`, nonzero exactly when the half-edge
    /// pairs interleave.
    pub fn pairing_matrix(&self) -> Vec<Vec<i64>> {
        let k = self.rank;
        let mut m = vec![vec![0i64; k]; k];
        for g in 1..=k as i32 {
            for h in 1..=k as i32 {
                if g == h {
                    continue;
                }
                let (a, b) = (self.dpos(g), self.dpos(-g));
                let i0 = self.between(a, b, self.dpos(h));
                let i1 = self.between(a, b, self.dpos(-h));
                if i0 != i1 {
                    m[g as usize - 1][h as usize - 1] = if i0 { -1 } else { 1 };
                }
            }
        }
        m
    }
}
