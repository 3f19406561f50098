//! Derivation scripts from `W_Γ` to a positive word of length `b₁(Σ_Γ)`.
//!
//! Each builder mirrors one displayed chain of rewrites. Curves that only
//! appear in pictures are produced as images or as relation right-hand
//! sides, never typed in.

use std::sync::Arc;

use super::script::{first_mismatch, Builder, Reason, Script};
use super::FamilyError;
use crate::fatgroup::{MarkedClass, Word};
use crate::mcgword::{evaluate, Dir, Factor, Relation, RelationInstance};
use crate::surfaces::{CurveRef, Seed, Surface};

fn tw(c: &CurveRef, e: i32) -> Factor {
    Factor::new(c.clone(), e)
}

fn pos(c: &CurveRef) -> Factor {
    Factor::pos(c.clone())
}

fn rep(c: &CurveRef, n: usize) -> Vec<Factor> {
    vec![pos(c); n]
}

struct Ctx<'a> {
    s: &'a Surface,
}

impl<'a> Ctx<'a> {
    fn seed(&self, seed: Seed) -> Result<CurveRef, FamilyError> {
        Ok(CurveRef::seed(self.s, seed)?)
    }
    fn a(&self, i: usize) -> Result<CurveRef, FamilyError> {
        self.seed(Seed::Alpha(i))
    }
    fn g(&self, i: usize) -> Result<CurveRef, FamilyError> {
        self.seed(Seed::Gamma(i))
    }
    fn b(&self, j: usize) -> Result<CurveRef, FamilyError> {
        self.seed(Seed::Beta(j))
    }
    fn d(&self, j: usize) -> Result<CurveRef, FamilyError> {
        self.seed(Seed::Delta(j))
    }
    fn bb(&self) -> Result<CurveRef, FamilyError> {
        self.seed(Seed::BigBeta)
    }
    /// `(t_{c₁}^{e₁} ∘ ⋯)(c)`.
    fn img(&self, pre: &[Factor], c: &CurveRef) -> CurveRef {
        CurveRef::image(self.s, pre.to_vec(), c)
    }
    fn class(&self, pre: &[Factor]) -> MarkedClass {
        evaluate(self.s, pre)
    }
}

fn reduced_words(k: usize, max_len: usize) -> Vec<Word> {
    let letters: Vec<i32> = (1..=k as i32).flat_map(|g| [g, -g]).collect();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Vec::<i32>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &x in &letters {
                if w.last() != Some(&-x) {
                    let mut v = w.clone();
                    v.push(x);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().map(|v| Word::reduced(v.iter().copied())));
        layer = next;
    }
    out
}

/// A conjugate `h = g·c^{±1}·g⁻¹` with `prefix·h` freely homotopic to `target`.
fn find_conj(s: &Surface, c: &Word, prefix: &Word, target: &Word) -> Option<Word> {
    for g in reduced_words(s.rank(), 3) {
        for e in [1, -1] {
            let h = g.mul(&c.pow(e)).mul(&g.inverse());
            if prefix.mul(&h).same_curve(target) {
                return Some(h);
            }
        }
    }
    None
}

/// A daisy transported so that holes `n, n−1, …, 2` go to `seq` in order,
/// hole 1 to a conjugate of `center`, and the outer boundary to `last`.
/// Right-hand curves are rotated so that the last one closes the block.
fn daisy_instance(
    s: &Surface,
    center: &CurveRef,
    seq: &[Word],
    last: &CurveRef,
    prefix: &str,
) -> Result<RelationInstance, FamilyError> {
    let n = seq.len() + 1;
    let base = Word::product(seq.iter());
    let h1 = find_conj(s, center.word(), &base, last.word())
        .ok_or_else(|| FamilyError::Search(format!("no daisy embedding with last curve {last}")))?;
    let mut phi = vec![h1];
    phi.extend((2..=n).map(|i| seq[n - i].clone()));
    let names: Vec<String> = (0..n)
        .map(|i| format!("{prefix}{}", (i + n - 2) % n + 1))
        .collect();
    Ok(Relation::daisy(n - 1)
        .instance_named(s, &phi, &names)?
        .rotate_rhs(2))
}

fn matched(
    inst: RelationInstance,
    s: &Surface,
    w: &[Factor],
    at: usize,
) -> Result<RelationInstance, FamilyError> {
    let len = inst.lhs.len();
    if at + len > w.len() {
        return Err(FamilyError::Search(
            "relation span runs past the word".into(),
        ));
    }
    Ok(inst.match_lhs(s, &w[at..at + len])?)
}

/// Rewrites the smallest span on which the word and `display` differ,
/// provided both have the same length; span equality is checked.
fn regroup(b: &mut Builder<'_>, display: &[Factor], note: &str) -> Result<(), FamilyError> {
    let Some(lo) = first_mismatch(&b.w, display) else {
        return Ok(());
    };
    if b.len() != display.len() {
        return Err(FamilyError::Search(format!(
            "display has {} factors, word {}",
            display.len(),
            b.len()
        )));
    }
    let hi = (lo..b.len())
        .rev()
        .find(|&k| !b.w[k].same_twist(&display[k]))
        .unwrap_or(lo);
    Ok(b.rewrite(
        lo,
        hi - lo + 1,
        display[lo..=hi].to_vec(),
        Reason::Display,
        note,
    )?)
}

fn names(prefix: &str, from: usize, n: usize) -> Vec<String> {
    (from..from + n).map(|i| format!("{prefix}{i}")).collect()
}

fn word_loops(w: &[Factor]) -> Vec<Word> {
    w.iter().map(|f| f.word().clone()).collect()
}

/// Families (d) and, with `r = −1`, (f).
pub fn family_d(
    s: &Surface,
    w: Vec<Factor>,
    q: usize,
    r: i64,
) -> Result<(Script, Vec<Factor>), FamilyError> {
    let c = Ctx { s };
    let rr = (r + 1) as usize; // number of γ₂ necks
    let nb = rr + 2; // β₁ ⋯ β_{r+3}
    let dl = c.d(nb)?;
    let (a1, a2, g2) = (c.a(1)?, c.a(2)?, c.g(2)?);
    let cr = c.img(&[tw(&a2, -1)], &dl).named("c");
    let cm = c.img(&[tw(&a1, -1)], &cr);
    let cp = c.img(&[tw(&a1, 1)], &cr);
    let betas: Vec<Factor> = (1..=nb)
        .map(|j| Ok(pos(&c.b(j)?)))
        .collect::<Result<_, FamilyError>>()?;

    let mut disp = betas.clone();
    disp.extend(rep(&a1, 2));
    disp.push(pos(&dl));
    disp.extend(rep(&a1, q + 1));
    disp.push(pos(&a2));
    disp.extend(rep(&g2, rr));
    for i in 3..=q + 5 {
        disp.push(pos(&c.a(i)?));
    }
    let gq5 = c.g(q + 5)?;
    disp.push(pos(&gq5));

    let mut b = Builder::new(s, w);
    b.check("global monodromy", disp)?;
    b.insert_cancel(nb, &dl, -1, "insert δ⁻¹δ after the β block")?;
    if rr > 0 {
        let ig = b.find(&g2, 1, 0)?;
        for k in 0..rr {
            b.mv(ig + k, nb + k, "γ₂ left past disjoint factors")?;
        }
    }
    let i2 = b.find(&dl, 1, nb + rr + 2)?;
    let end = b.len() - 1;
    b.mv_twisting(i2, end, "second δ to the end")?;
    let i1 = b.find(&dl, 1, nb + rr)?;
    let end = b.len() - 2;
    b.mv_twisting(i1, end, "first δ to the end")?;

    let d1 = c.img(&[tw(&a1, -(q as i32 + 3)), tw(&a2, -1)], &dl);
    let d2 = c.img(&[tw(&a1, -(q as i32 + 1)), tw(&a2, -1)], &dl);
    let mut disp = betas.clone();
    disp.extend(rep(&g2, rr));
    disp.push(tw(&dl, -1));
    disp.extend(rep(&a1, q + 3));
    for i in 2..=q + 5 {
        disp.push(pos(&c.a(i)?));
    }
    disp.push(pos(&gq5));
    disp.push(pos(&d1));
    disp.push(pos(&d2));
    b.check("δ block moved to the end", disp)?;

    let n = b.len();
    b.rewrite(
        n - 2,
        2,
        vec![pos(&cm), pos(&cp)],
        Reason::Braid,
        "braid: pair becomes t_{α₁}^{∓1}(c)",
    )?;

    let i0 = nb + rr + 1;
    let phi: Vec<Word> = (1..=q as i32 + 5).map(Word::gen).collect();
    let ys = Relation::daisy(q + 4).instance_named(s, &phi, &names("y", 1, q + 5))?;
    let ys_rhs = ys.rhs.clone();
    let ys = matched(ys, s, &b.w, i0)?;
    b.substitute(i0, ys, "daisy on α₁^{q+3} α₂ ⋯ α_{q+5} γ_{q+5}")?;
    b.mv(i0, i0 - 1, "y₁ = γ₂ left past δ⁻¹")?;
    for k in 0..q + 5 {
        b.mv_twisting(i0 + 1 + k, k, "to the front")?;
    }

    let conj = [tw(&c.b(1)?, 1), tw(&dl, -1)];
    let big_y: Vec<Factor> = ys_rhs[1..]
        .iter()
        .enumerate()
        .map(|(i, y)| pos(&c.img(&conj, &y.curve).named(format!("Y{}", i + 2))))
        .collect();
    let x = c
        .img(&[tw(&c.b(1)?, 1), tw(&dl, -1), tw(&a1, -1)], &cr)
        .named("X");
    b.rewrite(
        0,
        q + 4,
        big_y.clone(),
        Reason::Display,
        "Y block as (t_{β₁} t_δ⁻¹)(y_i)",
    )?;
    let mut disp = big_y.clone();
    disp.push(pos(&x));
    disp.extend(betas.iter().cloned());
    disp.extend(rep(&g2, rr + 1));
    disp.push(tw(&dl, -1));
    disp.push(pos(&cp));
    b.check("Y block in front", disp)?;

    let n = b.len();
    b.mv(
        n - 1,
        n - 1 - (rr + 2),
        "t_{α₁}(c) left past disjoint γ₂ and δ⁻¹",
    )?;
    let at = q + 5;
    let mut seq: Vec<Word> = s.upper_gens().iter().map(|&u| Word::gen(u)).collect();
    seq.push(Word::gen(-s.band_core().expect("fiber")));
    let zs = daisy_instance(s, &g2, &seq, &cp, "z")?;
    let zs_rhs = zs.rhs.clone();
    if !zs_rhs.last().unwrap().curve.same_curve(&dl) {
        return Err(FamilyError::Search("last daisy petal is not δ".into()));
    }
    let zs = matched(zs, s, &b.w, at)?;
    b.substitute(at, zs, "daisy on β₁ ⋯ β_{r+3} t_{α₁}(c) γ₂^{r+2}")?;
    b.cancel(at + nb, "z_{r+4} = δ cancels δ⁻¹")?;

    let mut fin = big_y;
    fin.push(pos(&x));
    fin.extend(zs_rhs[..zs_rhs.len() - 1].iter().cloned());
    b.check("final word", fin)?;
    Ok(b.finish())
}

/// Family (j); reuses the certified (f) relation at `q = 0`.
pub fn family_j(
    s: &Surface,
    w: Vec<Factor>,
    q: usize,
    f0: (Arc<Surface>, &[Factor], &[Factor]),
) -> Result<(Script, Vec<Factor>), FamilyError> {
    let c = Ctx { s };
    let (a1, a2, b1, bb) = (c.a(1)?, c.a(2)?, c.b(1)?, c.bb()?);
    let dl = c.d(q + 3)?;
    let g5 = c.g(5)?;
    let mut disp = vec![pos(&b1)];
    disp.extend(rep(&a1, 2));
    disp.extend(rep(&b1, q + 1));
    for j in 2..=q + 3 {
        disp.push(pos(&c.b(j)?));
    }
    disp.push(pos(&dl));
    for i in 1..=5 {
        disp.push(pos(&c.a(i)?));
    }
    disp.push(pos(&g5));

    let mut b = Builder::new(s, w);
    b.check("global monodromy", disp)?;
    b.insert_cancel(1, &bb, -1, "insert β⁻¹β after β₁")?;
    for k in 0..q + 1 {
        let end = b.len() - 1 - k;
        b.mv_twisting(5, end, "β₁ to the end")?;
    }
    for k in 0..q + 2 {
        b.mv(5 + k, k, "β_j to the front")?;
    }
    b.mv(q + 3, q + 2, "β⁻¹ left past β₁")?;
    let bc = c.img(&[tw(&a1, -1), tw(&a2, -1)], &b1).named("B");
    let mut disp: Vec<Factor> = (2..=q + 3)
        .map(|j| Ok(pos(&c.b(j)?)))
        .collect::<Result<_, FamilyError>>()?;
    disp.extend([tw(&bb, -1), pos(&b1), pos(&bb)]);
    disp.extend(rep(&a1, 2));
    disp.push(pos(&dl));
    for i in 1..=5 {
        disp.push(pos(&c.a(i)?));
    }
    disp.push(pos(&g5));
    disp.extend(rep(&bc, q + 1));
    b.check("bracket isolated", disp)?;

    let (fs, fw, fwp) = f0;
    let rel = Relation::embedded("f(q=0)", fs, word_loops(fw), word_loops(fwp));
    let mut phi: Vec<Word> = (1..=5).map(Word::gen).collect();
    phi.push(Word::gen(s.band_core().expect("fiber")));
    phi.push(bb.word().clone());
    let mut fnames = names("Y", 2, 4);
    fnames.push("X".into());
    fnames.extend(names("z", 1, fwp.len() - 5));
    let inst = rel.instance_named(s, &phi, &fnames)?;
    let f_rhs = inst.rhs.clone();
    let inst = matched(inst, s, &b.w, q + 3)?;
    b.substitute(q + 3, inst, "embedded (f) relation on the bracket")?;
    for k in 0..4 {
        b.mv_twisting(q + 3 + k, k, "Y to the front")?;
    }
    let n = b.len();
    b.mv_twisting(n - q - 2, n - 1, "z past B^{q+1}")?;
    b.mv_twisting(n - q - 3, n - 2, "z past B^{q+1}")?;
    let ib = q + 6;
    b.mv(ib, ib + q + 2, "β⁻¹ right past X and B^{q+1}")?;

    let xq = &f_rhs[4].curve;
    let seq: Vec<Word> = s.upper_gens().iter().map(|&u| Word::gen(u)).collect();
    let xs = daisy_instance(s, &bc, &seq, xq, "x")?;
    let xs_rhs = xs.rhs.clone();
    if !xs_rhs.last().unwrap().curve.same_curve(&bb) {
        return Err(FamilyError::Search("last daisy petal is not β".into()));
    }
    let xs = matched(xs, s, &b.w, 4)?;
    b.substitute(4, xs, "daisy on β₂ ⋯ β_{q+3} X B^{q+1}")?;
    b.cancel(4 + q + 2, "x_{q+3} = β cancels β⁻¹")?;

    let tb = vec![tw(&bc, -(q as i32 + 1))];
    let mut fin: Vec<Factor> = f_rhs[..4].to_vec();
    fin.extend(xs_rhs[..xs_rhs.len() - 1].iter().cloned());
    for z in &f_rhs[5..] {
        fin.push(pos(&c.img(&tb, &z.curve)));
    }
    b.check("final word", fin)?;
    Ok(b.finish())
}

/// Families (g) and, with `r = −1`, (e).
pub fn family_g(
    s: &Surface,
    w: Vec<Factor>,
    p: usize,
    q: usize,
    r: i64,
) -> Result<(Script, Vec<Factor>), FamilyError> {
    let c = Ctx { s };
    let ri = r + 1; // γ_{r+4} neck count
    let rr = |k: i64| (r + k) as usize;
    let nb = p + 2;
    let (b1, bb, dl) = (c.b(1)?, c.bb()?, c.d(p + 2)?);
    let (g2, g3, g4, g5) = (c.g(rr(2))?, c.g(rr(3))?, c.g(rr(4))?, c.g(rr(5))?);
    let (a3, a4, a5) = (c.a(rr(3))?, c.a(rr(4))?, c.a(rr(5))?);
    let gl = c.g(rr(q as i64 + 7))?;

    let betas: Vec<Factor> = (1..=nb)
        .map(|j| Ok(pos(&c.b(j)?)))
        .collect::<Result<_, FamilyError>>()?;
    let a_lo: Vec<Factor> = (1..=rr(2))
        .map(|i| Ok(pos(&c.a(i)?)))
        .collect::<Result<_, FamilyError>>()?;
    let a_hi: Vec<Factor> = (rr(6)..=rr(q as i64 + 7))
        .map(|i| Ok(pos(&c.a(i)?)))
        .collect::<Result<_, FamilyError>>()?;
    let mut disp = betas.clone();
    disp.extend(a_lo.iter().cloned());
    disp.extend([pos(&a3), pos(&g3), pos(&dl)]);
    disp.extend(rep(&g3, q + 1));
    disp.push(pos(&a4));
    disp.extend(rep(&g4, ri as usize));
    disp.push(pos(&a5));
    disp.extend(rep(&g5, p + 1));
    disp.extend(a_hi.iter().cloned());
    disp.push(pos(&gl));

    let mut b = Builder::new(s, w);
    b.check("global monodromy", disp)?;
    b.insert_cancel(nb, &bb, -1, "insert β⁻¹β after the β block")?;
    b.insert_cancel(nb + 2 + rr(2), &g2, -1, "insert γ_{r+2}⁻¹γ_{r+2}")?;
    b.insert_cancel(nb + 2 + rr(2) + 3, &g3, -1, "insert γ_{r+3}⁻¹γ_{r+3}")?;
    b.mv(nb + 1, nb + 1 + rr(3), "β after γ_{r+2}⁻¹")?;
    b.mv(nb + 2 + rr(2) + 3, nb + 1 + rr(3), "γ_{r+3}⁻¹ before β")?;
    let mut disp = betas.clone();
    disp.push(tw(&bb, -1));
    disp.extend(a_lo.iter().cloned());
    disp.extend([tw(&g2, -1), tw(&g3, -1), pos(&bb), pos(&g2), pos(&a3)]);
    disp.extend(rep(&g3, 2));
    disp.push(pos(&dl));
    disp.extend(rep(&g3, q + 1));
    disp.push(pos(&a4));
    disp.extend(rep(&g4, ri as usize));
    disp.push(pos(&a5));
    disp.extend(rep(&g5, p + 1));
    disp.extend(a_hi.iter().cloned());
    disp.push(pos(&gl));
    b.check("cancelling pairs placed", disp)?;

    let k = nb + rr(5);
    for j in 0..ri as usize {
        let at = b.find(&g4, 1, k + j)?;
        b.mv(at, k + j, "γ_{r+4} left")?;
    }
    for j in 0..p {
        let at = b.find(&g5, 1, k + ri as usize + j)?;
        b.mv(at, k + ri as usize + j, "γ_{r+5} left")?;
    }
    let ia4 = b.find(&a4, 1, 0)?;
    b.mv(0, ia4 - 1, "β₁ to just before α_{r+4}")?;
    let tb = |x: &CurveRef| c.img(&[pos(&b1)], x);
    let gam = tb(&g3).named("γ'");
    let ig = b.find(&gam, -1, 0)?;
    b.mv(ig, ig + ri as usize + p, "t_{β₁}(γ_{r+3})⁻¹ right")?;
    let ia4 = b.find(&a4, 1, 0)?;
    b.hurwitz(ia4 - 1, Dir::Right, "β₁ past α_{r+4}")?;
    let b1p = c.img(&[tw(&a4, -1)], &b1).named("β₁'");
    let mut disp: Vec<Factor> = betas[1..].to_vec();
    disp.push(tw(&bb, -1));
    disp.extend(a_lo.iter().cloned());
    disp.push(tw(&g2, -1));
    disp.extend(rep(&g4, ri as usize));
    disp.extend(rep(&g5, p));
    disp.extend([tw(&gam, -1), pos(&bb), pos(&g2), pos(&tb(&a3))]);
    disp.extend(rep(&gam, 2));
    disp.push(pos(&dl));
    disp.extend(rep(&gam, q + 1));
    disp.extend([pos(&a4), pos(&b1p), pos(&a5), pos(&g5)]);
    disp.extend(a_hi.iter().cloned());
    disp.push(pos(&gl));
    b.check("β₁ carried past α_{r+4}", disp)?;

    let i0 = b.find(&gam, 1, 0)?;
    let tgd = c.img(&[pos(&gam)], &dl).named("t_γ'(δ)");
    let xg = c
        .img(&[tw(&dl, -1), tw(&gam, -1), pos(&dl)], &gam)
        .named("x_γ");
    let mut new = rep(&tgd, q + 3);
    new.push(pos(&xg));
    b.rewrite(
        i0,
        q + 4,
        new,
        Reason::Braid,
        "braid: γ'² δ γ'^{q+1} regrouped",
    )?;
    b.hurwitz(i0 + q + 3, Dir::Right, "x_γ past α_{r+4}")?;
    let ibb = b.find(&bb, 1, p + 2)?;
    b.mv(ibb, i0 - 1, "β to just before t_γ'(δ)")?;
    let n = b.len();
    let ix = b.find(&a4, 1, 0)? + 1;
    b.mv(ix + 1, n - 1, "β₁' to the end")?;
    b.mv(ix, n - 2, "x_γ to the end")?;
    let xg2 = c.img(&[tw(&a4, -1)], &xg);
    let mut disp: Vec<Factor> = betas[1..].to_vec();
    disp.push(tw(&bb, -1));
    disp.extend(a_lo.iter().cloned());
    disp.push(tw(&g2, -1));
    disp.extend(rep(&g4, ri as usize));
    disp.extend(rep(&g5, p));
    disp.extend([tw(&gam, -1), pos(&g2), pos(&tb(&a3)), pos(&bb)]);
    disp.extend(rep(&tgd, q + 3));
    disp.extend([pos(&a4), pos(&a5), pos(&g5)]);
    disp.extend(a_hi.iter().cloned());
    disp.extend([pos(&gl), pos(&xg2), pos(&b1p)]);
    b.check("linear block assembled", disp)?;

    // linear plumbing relation on β t_γ'(δ)^{q+3} α_{r+4} α_{r+5} γ_{r+5} ⋯ γ_{r+q+7}
    let need = Word::from([rr(5) as i32, rr(4) as i32])
        .inverse()
        .mul(g5.word());
    let (h2, h1) = (|| {
        for g in reduced_words(s.rank(), 3) {
            for e in [1, -1] {
                let h2 = g.mul(&bb.word().pow(e)).mul(&g.inverse());
                let h1 = h2.inverse().mul(&need);
                if h1.same_curve(tgd.word()) {
                    return Some((h2, h1));
                }
            }
        }
        None
    })()
    .ok_or_else(|| FamilyError::Search("no embedding of the linear relation".into()))?;
    let mut phi = vec![h1, h2];
    phi.extend((3..q + 7).map(|i| Word::gen(rr(i as i64 + 1) as i32)));
    let lq = Relation::linear_eg(q).instance_named(s, &phi, &names("Y", 1, q + 6))?;
    let ys = lq.rhs.clone();
    let i0 = b.find(&bb, 1, p + 2)?;
    let lq = matched(lq, s, &b.w, i0)?;
    b.substitute(i0, lq, "linear plumbing relation")?;

    let n = b.len();
    let from_a3 = b.find(&tb(&a3), 1, 0)?;
    let iy1 = b.find(&ys[0].curve, 1, from_a3)?;
    b.mv(n - 1, iy1, "β₁' to just before Y₁")?;
    let conj = [tw(&b1p, -1)];
    let yp: Vec<CurveRef> = ys
        .iter()
        .enumerate()
        .map(|(i, y)| c.img(&conj, &y.curve).named(format!("Y{}'", i + 1)))
        .collect();
    let xg3 = c.img(&conj, &xg2).named("x_γ'");

    // lantern on γ_{r+2}, t_{β₁}(α_{r+3}), β₁', Y₁', carried by t_{β₁}
    let tb1 = c.class(&[pos(&b1)]);
    let phi0 = [
        g2.word().clone(),
        Word::gen(rr(3) as i32),
        Word::gen(rr(4) as i32),
    ];
    let phi: Vec<Word> = phi0.iter().map(|x| tb1.apply(x)).collect();
    let i = b.find(&gam, -1, 0)? + 1;
    let lan = Relation::lantern_with(1).instance_named(
        s,
        &phi,
        &["γ''".into(), "a".into(), "b".into()],
    )?;
    let (la, lb) = (lan.rhs[1].curve.clone(), lan.rhs[2].curve.clone());
    let lan = matched(lan, s, &b.w, i)?;
    b.substitute(i, lan, "lantern")?;
    b.cancel(i - 1, "t_{β₁}(γ_{r+3})^{∓1} cancel")?;

    b.mv(p + 1, b.find(&yp[q + 4], 1, 0)?, "β⁻¹ after Y_{q+5}")?;
    for _ in 0..p + 1 {
        let iy = b.find(&yp[q + 4], 1, 0)?;
        b.mv(0, iy - 1, "β_j before Y_{q+5}")?;
    }
    for _ in 0..p {
        let i5 = b.find(&g5, 1, 0)?;
        let iy = b.find(&yp[q + 4], 1, 0)?;
        b.mv(i5, iy, "γ_{r+5} after Y_{q+5}")?;
    }
    let ia = b.find(&la, 1, 0)?;
    b.mv(ia, rr(2), "a after α_{r+2}")?;
    let i2 = b.find(&g2, -1, 0)?;
    b.mv(i2, rr(3) + ri as usize, "γ_{r+2}⁻¹ after γ_{r+4}^{r+1}")?;

    let mut target = a_lo.clone();
    target.push(pos(&la));
    target.extend(rep(&g4, ri as usize));
    target.extend([tw(&g2, -1), pos(&lb)]);
    target.extend(yp[1..q + 4].iter().map(pos));
    target.extend(betas[1..].iter().cloned());
    target.push(pos(&ys[q + 4].curve));
    target.extend(rep(&g5, p));
    target.extend([tw(&bb, -1), pos(&yp[q + 5]), pos(&xg3)]);
    regroup(&mut b, &target, "γ_{r+5}^p past the Y' block as displayed")?;
    b.check("rearranged", target)?;

    // daisy around α₁ ⋯ α_{r+2} a γ_{r+4}^{r+1}
    let seq_a: Vec<Word> = (1..=rr(2) as i32).rev().map(Word::gen).collect();
    let za = daisy_instance(s, &g4, &seq_a, &la, "z")?;
    let za_rhs = za.rhs.clone();
    if !za_rhs.last().unwrap().curve.same_curve(&g2) {
        return Err(FamilyError::Search(
            "last daisy petal is not γ_{r+2}".into(),
        ));
    }
    let za = matched(za, s, &b.w, 0)?;
    b.substitute(0, za, "daisy on α₁ ⋯ α_{r+2} a γ_{r+4}^{r+1}")?;
    b.cancel(rr(2), "γ_{r+2} cancels")?;

    let seq_b: Vec<Word> = s.upper_gens().iter().map(|&u| Word::gen(u)).collect();
    let xb = daisy_instance(s, &g5, &seq_b, &ys[q + 4].curve, "x")?;
    let xb_rhs = xb.rhs.clone();
    if !xb_rhs.last().unwrap().curve.same_curve(&bb) {
        return Err(FamilyError::Search("last daisy petal is not β".into()));
    }
    let i = b.find(&c.b(2)?, 1, 0)?;
    let xb = matched(xb, s, &b.w, i)?;
    b.substitute(i, xb, "daisy on β₂ ⋯ β_{p+2} Y_{q+5} γ_{r+5}^p")?;
    b.cancel(i + p + 1, "β cancels")?;

    let mut fin: Vec<Factor> = za_rhs[..za_rhs.len() - 1].to_vec();
    fin.push(pos(&lb));
    fin.extend(yp[1..q + 4].iter().map(pos));
    fin.extend(xb_rhs[..xb_rhs.len() - 1].iter().cloned());
    fin.extend([pos(&yp[q + 5]), pos(&xg3)]);
    b.check("final word", fin)?;
    Ok(b.finish())
}

/// Family (h).
pub fn family_h(
    s: &Surface,
    w: Vec<Factor>,
    q: usize,
) -> Result<(Script, Vec<Factor>), FamilyError> {
    let c = Ctx { s };
    let (b1, b2, b3, d3) = (c.b(1)?, c.b(2)?, c.b(3)?, c.d(3)?);
    let (g2, g3, g4, g5) = (c.g(q + 2)?, c.g(q + 3)?, c.g(q + 4)?, c.g(q + 5)?);
    let (a3, a4, a5) = (c.a(q + 3)?, c.a(q + 4)?, c.a(q + 5)?);
    let a_lo: Vec<Factor> = (1..=q + 2)
        .map(|i| Ok(pos(&c.a(i)?)))
        .collect::<Result<_, FamilyError>>()?;
    let mut disp = vec![pos(&b1), pos(&b2), pos(&b3)];
    disp.extend(a_lo.iter().cloned());
    disp.extend([pos(&g2), pos(&a3)]);
    disp.extend(rep(&g3, q + 1));
    disp.extend([pos(&d3), pos(&g3), pos(&a4), pos(&a5), pos(&g5)]);

    let mut b = Builder::new(s, w);
    b.check("global monodromy", disp)?;
    b.mv(q + 6, 2 * q + 9, "α_{q+3} after γ_{q+3}")?;
    let ia4 = b.find(&a4, 1, 0)?;
    b.mv(ia4, ia4 - 3, "α_{q+4} before δ")?;
    let dp = c.img(&[pos(&a3), tw(&a4, -1)], &d3).named("δ'");
    let mut disp = vec![pos(&b1), pos(&b2), pos(&b3)];
    disp.extend(a_lo.iter().cloned());
    disp.push(pos(&g2));
    disp.extend(rep(&g3, q + 1));
    disp.extend([pos(&a4), pos(&dp), pos(&g3), pos(&a3), pos(&a5), pos(&g5)]);
    b.check("α_{q+3}, α_{q+4} placed", disp)?;

    let idp = b.find(&dp, 1, 0)?;
    b.mv(0, idp - 1, "β₁ before δ'")?;
    let ig = b.find(&dp, 1, 0)? + 1;
    b.mv(ig, ig - 1, "γ_{q+3} before δ'")?;
    let dl = c.img(&[tw(&g3, -1)], &dp).named("δ''");
    let ib = b.find(&b1, 1, 0)?;
    b.mv(ib, ib + 1, "β₁ past γ_{q+3}")?;
    b.mv_twisting(ib + 1, ib + 2, "β₁ past δ''")?;
    let tb = |x: &CurveRef| c.img(&[pos(&b1)], x);
    let ig = b.find(&tb(&g3), 1, ib - 1)?;
    b.mv(ig, ig - 1, "t_{β₁}(γ_{q+3}) left")?;
    let b1d = c.img(&[tw(&dl, -1)], &b1);
    let mut disp = vec![pos(&b2), pos(&b3)];
    disp.extend(a_lo.iter().cloned());
    disp.push(pos(&g2));
    disp.extend(rep(&tb(&g3), q + 2));
    disp.extend([
        pos(&tb(&a4)),
        pos(&dl),
        pos(&b1d),
        pos(&a3),
        pos(&a5),
        pos(&g5),
    ]);
    b.check("β₁ carried past δ''", disp)?;

    let idl = b.find(&dl, 1, 0)?;
    b.insert_cancel(idl + 1, &g4, 1, "insert γ_{q+4}γ_{q+4}⁻¹ after δ''")?;

    // linear relation, embedded and then carried by t_{γ_{q+3}}⁻¹
    let tg = c.class(&[pos(&g3)]);
    let tgi = c.class(&[tw(&g3, -1)]);
    let c3 = tg.apply(dl.word()).cyclic_core();
    let b5 = tg.apply(tb(&a4).word()).cyclic_core();
    let ups = s.upper_gens();
    let (h4, h5) = (Word::gen(ups[1]), Word::gen(ups[0]));
    let mut phi = None;
    'search: for g in reduced_words(s.rank(), 2) {
        for e in [1, -1] {
            let h6 = g.mul(&b1.word().pow(e)).mul(&g.inverse());
            let h3 = h6
                .mul(&h5)
                .mul(&h4)
                .inverse()
                .mul(g4.word())
                .mul(&g2.word().inverse());
            if !h3.same_curve(&c3) {
                continue;
            }
            let mut cand: Vec<Word> = (1..=q as i32 + 2).map(Word::gen).collect();
            cand.extend([h3, h4.clone(), h5.clone(), h6]);
            let outer = Word::reduced((1..=q as i32 + 5).rev()).substitute(&cand);
            if outer.same_curve(&b5) {
                phi = Some(cand);
                break 'search;
            }
        }
    }
    let phi =
        phi.ok_or_else(|| FamilyError::Search("no embedding of the linear relation".into()))?;
    let phi: Vec<Word> = phi.iter().map(|x| tgi.apply(x)).collect();
    let lq = Relation::linear_h(q).instance_named(s, &phi, &names("X", 1, q + 6))?;
    let xs = lq.rhs.clone();
    let lq = matched(lq, s, &b.w, 0)?;
    b.substitute(0, lq, "linear plumbing relation")?;

    let ig = b.find(&g4, -1, 0)?;
    let end = b.len() - 1;
    b.mv(ig, end, "γ_{q+4}⁻¹ to the end")?;
    b.mv_twisting(q + 6, q + 4, "β₁'' left past X_{q+6}, X_{q+5}")?;
    let n = b.len();
    b.mv_twisting(q + 6, n - 1, "X_{q+6} to the end")?;
    b.mv_twisting(q + 5, n - 2, "X_{q+5} to the end")?;
    let b1t = c
        .img(&[pos(&xs[q + 4].curve), pos(&xs[q + 5].curve)], &b1d)
        .named("β̃₁");
    let ta = |x: &CurveRef| c.img(&[tw(&a3, -1)], x);
    let mut disp: Vec<Factor> = xs[..q + 4].to_vec();
    disp.extend([pos(&b1t), pos(&a3), pos(&a5), pos(&g5), tw(&g4, -1)]);
    disp.push(pos(&ta(&xs[q + 4].curve)));
    disp.push(pos(&ta(&xs[q + 5].curve)));
    b.check("before the lantern", disp)?;

    let hq = Word::gen(q as i32 + 4).mul(&Word::reduced((1..=q as i32 + 2).rev()));
    let phi0 = [
        hq,
        Word::from([q as i32 + 4, q as i32 + 3, -(q as i32 + 4)]),
        Word::gen(q as i32 + 5),
    ];
    let lan = Relation::lantern_with(1)
        .instance_named(s, &phi0, &["γ".into(), "a".into(), "b".into()])?
        .rotate_rhs(1);
    let lan_rhs = lan.rhs.clone();
    let lan = matched(lan, s, &b.w, q + 4)?;
    b.substitute(q + 4, lan, "lantern")?;
    b.cancel(q + 6, "γ_{q+4} cancels")?;

    let mut fin: Vec<Factor> = xs[..q + 4].to_vec();
    fin.extend(lan_rhs[..2].iter().cloned());
    fin.push(pos(&ta(&xs[q + 4].curve)));
    fin.push(pos(&ta(&xs[q + 5].curve)));
    b.check("final word", fin)?;
    Ok(b.finish())
}

/// Family (i).
pub fn family_i(
    s: &Surface,
    w: Vec<Factor>,
    q: usize,
) -> Result<(Script, Vec<Factor>), FamilyError> {
    let c = Ctx { s };
    let (b1, b2, d2) = (c.b(1)?, c.b(2)?, c.d(2)?);
    let (a5, a6, g5, gl) = (c.a(5)?, c.a(6)?, c.g(5)?, c.g(q + 6)?);
    let mut disp = vec![pos(&b1), pos(&b2)];
    for i in 1..=5 {
        disp.push(pos(&c.a(i)?));
    }
    disp.extend([pos(&g5), pos(&d2)]);
    disp.extend(rep(&g5, q + 2));
    for i in 6..=q + 6 {
        disp.push(pos(&c.a(i)?));
    }
    disp.push(pos(&gl));

    let mut b = Builder::new(s, w);
    b.check("global monodromy", disp)?;
    b.insert_cancel(2, &d2, -1, "insert δ⁻¹δ after β₂")?;
    b.mv(3, 7, "δ before α₅")?;
    let ta5 = c.img(&[tw(&a5, -1)], &d2);
    let tg5 = c.img(&[tw(&g5, -1)], &d2);
    let mut new = rep(&a5, q + 2);
    new.extend([pos(&ta5), pos(&g5), pos(&g5), pos(&tg5)]);
    b.rewrite(
        7,
        q + 6,
        new,
        Reason::Braid,
        "braid: δ α₅ γ₅ δ γ₅^{q+2} regrouped",
    )?;
    let n = b.len();
    b.mv_twisting(7 + q + 5, n - 1, "to the end")?;
    b.mv_twisting(7 + q + 2, n - 2, "to the end")?;
    let c1 = c
        .img(&[tw(&a6, -1), tw(&g5, -2), tw(&a5, -1)], &d2)
        .named("c₁");
    let c2 = c.img(&[tw(&a6, -1), tw(&g5, -1)], &d2).named("c₂");
    let n = b.len();
    let mut disp = b.w[..n - 2].to_vec();
    disp.extend([pos(&c1), pos(&c2)]);
    b.check("two curves at the end", disp)?;

    let phi: Vec<Word> = (1..=q as i32 + 6).map(Word::gen).collect();
    let lq = Relation::linear_i(q).instance_named(s, &phi, &names("Y", 1, q + 6))?;
    let ys = lq.rhs.clone();
    let lq = matched(lq, s, &b.w, 3)?;
    b.substitute(3, lq, "linear plumbing relation")?;
    let c3 = c.img(&[tw(&a6, -1), pos(&a5)], &d2).named("c₃");
    let n = b.len();
    b.rewrite(
        n - 2,
        2,
        vec![pos(&c2), pos(&c3)],
        Reason::Braid,
        "braid: c₁ c₂ = c₂ c₃",
    )?;
    let iy5 = q + 7;
    b.mv(iy5, iy5 + 2, "Y_{q+5} right past Y_{q+6} and c₂")?;
    for _ in 0..3 {
        b.mv(0, q + 8, "β₁ β₂ δ⁻¹ before Y_{q+5}")?;
    }
    b.mv(q + 8, q + 6, "Y_{q+6}, c₂ ahead")?;
    let pd: Vec<Factor> = ys[..q + 4]
        .iter()
        .map(|y| pos(&c.img(&[tw(&d2, -1), pos(&b1)], &y.curve)))
        .collect();
    let mut disp = pd.clone();
    disp.extend(b.w[q + 4..].iter().cloned());
    b.check("β₁ β₂ δ⁻¹ moved", disp)?;

    let phi0 = [
        Word::gen(s.upper_gens()[0]),
        Word::gen(-s.band_core().expect("fiber")),
        Word::from([-5, -6]),
    ];
    let lan = Relation::lantern_with(0).instance_named(
        s,
        &phi0,
        &["δ".into(), "a".into(), "b".into()],
    )?;
    let lan_rhs = lan.rhs.clone();
    if !lan_rhs[0].curve.same_curve(&d2) {
        return Err(FamilyError::Search("lantern does not produce δ".into()));
    }
    let lan = matched(lan, s, &b.w, q + 7)?;
    b.substitute(q + 7, lan, "lantern")?;
    b.cancel(q + 6, "δ cancels")?;
    let fin = b.w.clone();
    let mut disp = pd;
    disp.extend(fin[q + 4..].iter().cloned());
    b.check("final word", disp)?;
    Ok(b.finish())
}
