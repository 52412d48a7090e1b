//! Products of two involutions and of two unipotents of index 2.

use super::pieces::{assemble, layout, Piece, PieceKind};
use super::{
    decide_product_two_involutions, decide_product_two_unipotent2, empty_witness, DecompKind, DecompWitness,
};
use crate::algebra::{r1_preimage, reciprocal, FactorHint, Poly, Scalar};
use crate::blocks::{block_l, factor_diag_inverse, factor_l, FactorMode};
use crate::error::{Error, Result};
use crate::kaplansky::{kaplansky_invariants_with_hint, realize_invariants};
use crate::linalg::{adapted_basis, similarity_witness, Link, Mat};

fn sharp_partner(p: &Poly) -> Result<Option<Poly>> {
    let q = reciprocal(p)?;
    Ok(if q == *p { None } else { Some(q) })
}

fn conj(s: &Mat, m: &Mat) -> Result<Mat> {
    Ok(&(s * m) * &s.inverse()?)
}

/// Moves a factorization of `m` onto `target` through a similarity `s m s^{-1} = target`.
fn transport(pair: (Mat, Mat), m: &Mat, target: &Mat, what: &str) -> Result<(Mat, Mat)> {
    let s = similarity_witness(m, target)?
        .ok_or_else(|| Error::Internal(format!("{what}: model is not similar to the primary part")))?;
    Ok((conj(&s, &pair.0)?, conj(&s, &pair.1)?))
}

/// The two factors attached to a unipotent `1 + N`, built on an adapted basis of `N`.
///
/// For a basis vector `x` of height `nu`:
/// involutions: `a x = x` (nu odd), `-x + N x` (nu even); `b x = x + N x` (nu odd), `-x` (nu even);
/// unipotents: `a x = x` (nu odd), `x + N x` (nu even); `b x = x + N x` (nu odd), `x` (nu even).
/// The product is `1 + v` with `v` similar to `N`, and a similarity carries it onto `1 + N`.
fn unipotent_part(u: &Mat, mode: FactorMode) -> Result<(Mat, Mat)> {
    let f = u.field();
    let n = u.rows();
    let id = Mat::identity(f, n);
    let nil = u - &id;
    let ab = adapted_basis(&nil, &Poly::t(f))?;
    let g = ab.basis(&nil);
    let k = ab.generators.len();
    let one = f.one();
    let m1 = f.int(-1);
    let mut ma = Mat::zeros(f, k, k);
    let mut mb = Mat::zeros(f, k, k);
    let put = |m: &mut Mat, i: usize, j: usize, v: &Scalar| {
        let cur = m.get(i, j) + v;
        m.set(i, j, cur);
    };
    for (i, x) in ab.generators.iter().enumerate() {
        let link = match x.link {
            Link::Index(j) => Some(j),
            Link::Zero => None,
        };
        let odd = x.height % 2 == 1;
        let sign = match mode {
            FactorMode::Involutions => &m1,
            FactorMode::Unipotent2 => &one,
        };
        if odd {
            put(&mut ma, i, i, &one);
            put(&mut mb, i, i, &one);
            if let Some(j) = link {
                put(&mut mb, j, i, &one);
            }
        } else {
            put(&mut ma, i, i, sign);
            put(&mut ma, link.expect("even height has a successor"), i, &one);
            put(&mut mb, i, i, sign);
        }
    }
    let gi = g.inverse()?;
    let a = &(&g * &ma) * &gi;
    let b = &(&g * &mb) * &gi;
    let prod = &a * &b;
    transport((a, b), &prod, u, "unipotent part")
}

fn sharp_fixed_part(ap: &Mat, p: &Poly, eps: i64, hint: &FactorHint) -> Result<(Mat, Mat)> {
    // p = R_1(q) and L(w) has the same table at p as w at q
    let q = r1_preimage(p)?;
    let tab = kaplansky_invariants_with_hint(ap, p, hint)?;
    let w = realize_invariants(&q, &tab.kappa)?;
    let pair = factor_l(&w, eps)?;
    transport(pair, &block_l(&w), ap, "L(w) model")
}

fn sharp_pair_part(piece: &Piece, mode: FactorMode) -> Result<(Mat, Mat)> {
    let f = piece.local.field();
    let PieceKind::Pair { p, q, .. } = &piece.kind else {
        return Err(Error::Internal("expected a paired piece".into()));
    };
    let (ap, aq) = piece.halves();
    // s A_p^{-1} s^{-1} = A_q
    let s = similarity_witness(&ap.inverse()?, &aq)?
        .ok_or_else(|| Error::CriterionFails(format!("{p}-part and {q}-part are not matched by inversion")))?;
    let (x, y) = factor_diag_inverse(&ap, mode)?;
    let phi = Mat::block_diag(f, &[Mat::identity(f, ap.rows()), s]);
    Ok((conj(&phi, &x)?, conj(&phi, &y)?))
}

fn tplus1_unipotent_part(ap: &Mat, hint: &FactorHint) -> Result<(Mat, Mat)> {
    let f = ap.field();
    let tp1 = Poly::linear(f.one());
    let tab = kaplansky_invariants_with_hint(ap, &tp1, hint)?;
    let m: Vec<usize> = (0..tab.kappa.len().div_ceil(2)).map(|k| tab.kappa(2 * k + 1)).collect();
    let z = realize_invariants(&Poly::linear(f.int(2)), &m)?;
    let pair = factor_l(&z, 1)?;
    transport(pair, &block_l(&z), ap, "L(z) model")
}

fn local_factors(piece: &Piece, mode: FactorMode, hint: &FactorHint) -> Result<(Mat, Mat)> {
    let f = piece.local.field();
    let a = &piece.local;
    let tm1 = Poly::linear(f.int(-1));
    let tp1 = Poly::linear(f.one());
    match (&piece.kind, mode) {
        (PieceKind::Single(p), _) if *p == tm1 => unipotent_part(a, mode),
        (PieceKind::Single(p), FactorMode::Involutions) if *p == tp1 => {
            let (x, y) = unipotent_part(&-a, mode)?;
            Ok((-&x, y))
        }
        (PieceKind::Single(p), FactorMode::Unipotent2) if *p == tp1 => tplus1_unipotent_part(a, hint),
        (PieceKind::Single(p), FactorMode::Involutions) => sharp_fixed_part(a, p, -1, hint),
        (PieceKind::Single(p), FactorMode::Unipotent2) => sharp_fixed_part(a, p, 1, hint),
        (PieceKind::Pair { .. }, _) => sharp_pair_part(piece, mode),
    }
}

fn product_pair(a: &Mat, mode: FactorMode, kind: DecompKind, hint: &FactorHint) -> Result<DecompWitness> {
    let f = a.field();
    let n = a.rows();
    if n == 0 {
        return Ok(empty_witness(kind, f));
    }
    let pieces = layout(a, hint, sharp_partner)?;
    let mut firsts = Vec::new();
    let mut seconds = Vec::new();
    for piece in &pieces {
        let (x, y) = local_factors(piece, mode, hint)?;
        firsts.push(x);
        seconds.push(y);
    }
    let first = assemble(f, n, &pieces, &firsts)?;
    let second = assemble(f, n, &pieces, &seconds)?;
    DecompWitness::verified(kind, first, second, a)
}

pub fn involution_pair(a: &Mat) -> Result<DecompWitness> {
    involution_pair_with_hint(a, &FactorHint::none())
}

pub fn involution_pair_with_hint(a: &Mat, hint: &FactorHint) -> Result<DecompWitness> {
    let d = decide_product_two_involutions(a)?;
    if !d.holds {
        return Err(Error::CriterionFails(d.reason));
    }
    product_pair(a, FactorMode::Involutions, DecompKind::InvolutionProduct, hint)
}

pub fn unipotent2_pair(a: &Mat) -> Result<DecompWitness> {
    unipotent2_pair_with_hint(a, &FactorHint::none())
}

pub fn unipotent2_pair_with_hint(a: &Mat, hint: &FactorHint) -> Result<DecompWitness> {
    let d = decide_product_two_unipotent2(a)?;
    if !d.holds {
        return Err(Error::CriterionFails(d.reason));
    }
    if a.field().characteristic() == 2 {
        let w = product_pair(a, FactorMode::Involutions, DecompKind::InvolutionProduct, hint)?;
        return DecompWitness::verified(DecompKind::Unipotent2Product, w.first, w.second, a);
    }
    product_pair(a, FactorMode::Unipotent2, DecompKind::Unipotent2Product, hint)
}

fn check_pm1_triangular(a: &Mat) -> Result<()> {
    a.require_square("upper_triangular_pm1_involutions")?;
    let f = a.field();
    let ok = a.is_upper_triangular()
        && (0..a.rows()).all(|i| *a.get(i, i) == f.one() || *a.get(i, i) == f.int(-1));
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition("expected an upper-triangular matrix with diagonal entries 1 or -1".into()))
    }
}

pub fn upper_triangular_pm1_involutions(a: &Mat) -> Result<DecompWitness> {
    upper_triangular_pm1_involutions_with_hint(a, &FactorHint::none())
}

pub fn upper_triangular_pm1_involutions_with_hint(a: &Mat, hint: &FactorHint) -> Result<DecompWitness> {
    check_pm1_triangular(a)?;
    involution_pair_with_hint(a, hint)
}
