//! The block operators `K(a)`, `L(a)`, `diag(a, -a)`, `diag(a, a^{-1})` and their
//! factorizations into quadratic elements.

use serde::{Deserialize, Serialize};

use crate::algebra::{factor_irreducibles, is_irreducible, parity_class, r_transform, trace, Parity, Poly};
use crate::error::{Error, Result};
use crate::kaplansky::kaplansky_invariants;
use crate::linalg::{subspace, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    K,
    L,
    DiagOpposite,
    DiagInverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockOp {
    pub kind: BlockKind,
    pub a: Mat,
    pub assembled: Mat,
}

pub fn block_k(a: &Mat) -> Mat {
    let f = a.field();
    let n = a.rows();
    Mat::blocks2(&Mat::zeros(f, n, n), a, &Mat::identity(f, n), &Mat::zeros(f, n, n))
}

pub fn block_l(a: &Mat) -> Mat {
    let f = a.field();
    let n = a.rows();
    Mat::blocks2(&Mat::zeros(f, n, n), &-&Mat::identity(f, n), &Mat::identity(f, n), a)
}

pub fn build_block(kind: BlockKind, a: &Mat) -> Result<BlockOp> {
    a.require_square("build_block")?;
    let f = a.field();
    let assembled = match kind {
        BlockKind::K => block_k(a),
        BlockKind::L => block_l(a),
        BlockKind::DiagOpposite => Mat::block_diag(f, &[a.clone(), -a]),
        BlockKind::DiagInverse => Mat::block_diag(f, &[a.clone(), a.inverse()?]),
    };
    Ok(BlockOp { kind, a: a.clone(), assembled })
}

/// `W_1 = {(x, x)}` and `W_2 = {(x, -x)}`, swapped by `diag(a, -a)`.
pub fn exchange_split_diag_opposite(a: &Mat) -> Result<(Mat, Mat)> {
    a.require_square("exchange_split_diag_opposite")?;
    let f = a.field();
    if f.characteristic() == 2 {
        return Err(Error::Precondition("exchange_split_diag_opposite needs characteristic != 2".into()));
    }
    let n = a.rows();
    let id = Mat::identity(f, n);
    let w1 = id.vstack(&id);
    let w2 = id.vstack(&-&id);
    let u = Mat::block_diag(f, &[a.clone(), -a]);
    if !subspace::contains_all(&w2, &(&u * &w1)) || !subspace::contains_all(&w1, &(&u * &w2)) {
        return Err(Error::VerificationFailed("diag(a, -a) split".into()));
    }
    Ok((w1, w2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorMode {
    Involutions,
    Unipotent2,
}

/// `(t - 1)(t - eps)` evaluated at `m` vanishes.
pub fn annihilated_by(m: &Mat, eps: i64) -> bool {
    let f = m.field();
    let n = m.rows();
    let x = m - &Mat::identity(f, n);
    let y = m - &Mat::scalar(&f.int(eps), n);
    (&x * &y).is_zero()
}

fn check_pair(f: &Mat, g: &Mat, target: &Mat, eps: i64, what: &str) -> Result<()> {
    if &(f * g) != target || !annihilated_by(f, eps) || !annihilated_by(g, eps) {
        return Err(Error::VerificationFailed(what.into()));
    }
    Ok(())
}

/// Factors `diag(a, a^{-1})` into two involutions or two unipotents of index 2.
pub fn factor_diag_inverse(a: &Mat, mode: FactorMode) -> Result<(Mat, Mat)> {
    a.require_square("factor_diag_inverse")?;
    let fld = a.field();
    let n = a.rows();
    let ai = a.inverse()?;
    let id = Mat::identity(fld, n);
    let z = Mat::zeros(fld, n, n);
    let target = Mat::block_diag(fld, &[a.clone(), ai.clone()]);
    let (f, g, eps) = match mode {
        FactorMode::Involutions => {
            let f = Mat::blocks2(&z, &id, &id, &z);
            let g = Mat::blocks2(&z, &ai, a, &z);
            (f, g, -1)
        }
        FactorMode::Unipotent2 => {
            if !(&(a * a) - &id).is_invertible() {
                return Err(Error::Precondition("factor_diag_inverse: a^2 - 1 is not invertible".into()));
            }
            let t = Mat::blocks2(&id, &(a - &id), &id, &(&ai - &id));
            let ti = t.inverse()?;
            let c = &(a + &ai) - &id.scale(&fld.int(2));
            let x = Mat::blocks2(&id, &z, &id, &id);
            let y = Mat::blocks2(&id, &c, &z, &id);
            (&(&t * &x) * &ti, &(&t * &y) * &ti, 1)
        }
    };
    check_pair(&f, &g, &target, eps, "factor_diag_inverse")?;
    Ok((f, g))
}

/// Factors `L(a)` into two elements annihilated by `(t - 1)(t - eps)`.
///
/// With `c = 2 - a`, `F = [[1, -eps c], [0, eps]]`, `G = [[1, 0], [eps, eps]]` and
/// `T = [[1, 1 - a], [0, 1]]`, the pair is `(T F T^{-1}, T G T^{-1})`. For `eps = -1`
/// both factors square to the identity as they stand.
pub fn factor_l(a: &Mat, eps: i64) -> Result<(Mat, Mat)> {
    a.require_square("factor_l")?;
    if eps != 1 && eps != -1 {
        return Err(Error::Precondition("factor_l: eps must be 1 or -1".into()));
    }
    let fld = a.field();
    let n = a.rows();
    let id = Mat::identity(fld, n);
    let z = Mat::zeros(fld, n, n);
    let e = fld.int(eps);
    let c = &id.scale(&fld.int(2)) - a;
    let big_f = Mat::blocks2(&id, &c.scale(&-&e), &z, &id.scale(&e));
    let big_g = Mat::blocks2(&id, &z, &id.scale(&e), &id.scale(&e));
    let t = Mat::blocks2(&id, &(&id - a), &z, &id);
    let ti = Mat::blocks2(&id, &(a - &id), &z, &id);
    let f = &(&t * &big_f) * &ti;
    let g = &(&t * &big_g) * &ti;
    check_pair(&f, &g, &block_l(a), eps, "factor_l")?;
    Ok((f, g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransportLemma {
    KEven,
    KChar2,
    LR1,
    LTplus1,
}

fn transport_err(lemma: &'static str, reason: impl Into<String>) -> Error {
    Error::TransportPrecondition { lemma, reason: reason.into() }
}

/// The single irreducible `q` with `a` being `q`-primary.
pub fn primary_prime(a: &Mat) -> Result<Poly> {
    a.require_square("primary_prime")?;
    if a.rows() == 0 {
        return Err(Error::Precondition("empty matrix has no primary polynomial".into()));
    }
    let fac = factor_irreducibles(&a.charpoly()?)?;
    if fac.len() != 1 {
        return Err(Error::NotPrimary(format!("characteristic polynomial has {} prime factors", fac.len())));
    }
    Ok(fac.into_iter().next().unwrap().0)
}

fn table_len(a: usize, b: usize) -> usize {
    a.max(b) + 2
}

/// Checks the Kaplansky index correspondence between a block operator and its parameter.
pub fn transport_check(lemma: TransportLemma, a: &Mat) -> Result<bool> {
    let fld = a.field();
    let name = match lemma {
        TransportLemma::KEven => "K_even",
        TransportLemma::KChar2 => "K_char2",
        TransportLemma::LR1 => "L_R1",
        TransportLemma::LTplus1 => "L_tplus1",
    };
    let q = primary_prime(a).map_err(|e| transport_err(name, e.to_string()))?;
    match lemma {
        TransportLemma::KEven => {
            // p(t) = q(t^2)
            let p = q.compose(&Poly::monomial(fld.one(), 2));
            if !is_irreducible(&p).map_err(|e| transport_err(name, e.to_string()))? {
                return Err(transport_err(name, format!("{p} is not irreducible")));
            }
            let tb = kaplansky_invariants(&block_k(a), &p)?;
            let ta = kaplansky_invariants(a, &q)?;
            let len = table_len(tb.kappa.len(), ta.kappa.len());
            Ok((0..len).all(|k| tb.kappa(k) == ta.kappa(k)) && tb.kappa_inf == ta.kappa_inf)
        }
        TransportLemma::KChar2 => {
            if fld.characteristic() != 2 {
                return Err(transport_err(name, "characteristic 2 required"));
            }
            // over F_2, q(t^2) = p(t)^2 forces p = q
            let p = q.clone();
            if parity_class(&p) == Parity::Even {
                return Err(transport_err(name, format!("{p} is even")));
            }
            let tb = kaplansky_invariants(&block_k(a), &p)?;
            let ta = kaplansky_invariants(a, &q)?;
            let len = table_len(tb.kappa.len(), 2 * ta.kappa.len());
            let odd = (0..len).all(|k| tb.kappa(2 * k + 1) == ta.kappa(k));
            let even = (0..len).all(|k| tb.kappa(2 * k) == 0);
            Ok(odd && even)
        }
        TransportLemma::LR1 => {
            let r = r_transform(&q, &fld.one())?;
            if !is_irreducible(&r).map_err(|e| transport_err(name, e.to_string()))? {
                return Err(transport_err(name, format!("R_1({q}) = {r} is not irreducible")));
            }
            let tb = kaplansky_invariants(&block_l(a), &r)?;
            let ta = kaplansky_invariants(a, &q)?;
            let len = table_len(tb.kappa.len(), ta.kappa.len());
            Ok((0..len).all(|k| tb.kappa(k) == ta.kappa(k)))
        }
        TransportLemma::LTplus1 => {
            if fld.characteristic() == 2 {
                return Err(transport_err(name, "characteristic != 2 required"));
            }
            let t2 = Poly::linear(fld.int(2));
            if q != t2 {
                return Err(transport_err(name, format!("a is {q}-primary, not (t+2)-primary")));
            }
            let p = Poly::linear(fld.one());
            let tb = kaplansky_invariants(&block_l(a), &p)?;
            let ta = kaplansky_invariants(a, &t2)?;
            let len = table_len(tb.kappa.len(), 2 * ta.kappa.len());
            let odd = (0..len).all(|k| tb.kappa(2 * k + 1) == ta.kappa(k));
            let even = (0..len).all(|k| tb.kappa(2 * k) == 0);
            Ok(odd && even)
        }
    }
}

/// `a* = tr(p) - a` for `a` annihilated by the monic quadratic `p`; asserts `a a* = p(0)`.
pub fn p_conjugate(a: &Mat, p: &Poly) -> Result<Mat> {
    a.require_square("p_conjugate")?;
    let tr = trace(p)?;
    if !a.eval_poly(p)?.is_zero() {
        return Err(Error::Precondition(format!("p_conjugate: {p} does not annihilate a")));
    }
    let n = a.rows();
    let star = &Mat::scalar(&tr, n) - a;
    if (a * &star) != Mat::scalar(&p.coeff(0), n) {
        return Err(Error::Internal("a a* != p(0)".into()));
    }
    Ok(star)
}

/// `a b* + b a*` for `p(a) = 0` and `q(b) = 0`.
pub fn commutation_element(a: &Mat, b: &Mat, p: &Poly, q: &Poly) -> Result<Mat> {
    let a_star = p_conjugate(a, p)?;
    let b_star = p_conjugate(b, q)?;
    Ok(&(a * &b_star) + &(b * &a_star))
}

/// Whether `a` and `b` both commute with `a b* + b a*`.
pub fn check_commutation(a: &Mat, b: &Mat, p: &Poly, q: &Poly) -> Result<bool> {
    let c = commutation_element(a, b, p, q)?;
    Ok((a * &c) == (&c * a) && (b * &c) == (&c * b))
}
