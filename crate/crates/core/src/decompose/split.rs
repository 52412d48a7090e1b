//! Exchange splits `V = V_1 (+) V_2` with `u(V_1) ⊂ V_2`, `u(V_2) ⊂ V_1`, and the square-zero pair.

use super::pieces::{layout, Piece, PieceKind};
use super::{decide_sum_two_squarezero, empty_witness, DecompKind, DecompWitness};
use crate::algebra::{h_transform, parity_class, FactorHint, Parity, Poly};
use crate::blocks::{block_k, exchange_split_diag_opposite};
use crate::error::{Error, Result};
use crate::kaplansky::{kaplansky_invariants_with_hint, realize_invariants};
use crate::linalg::{adapted_basis, similarity_witness, subspace, Mat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeSplit {
    pub basis1: Mat,
    pub basis2: Mat,
}

impl ExchangeSplit {
    pub fn check(&self, u: &Mat) -> bool {
        let all = self.basis1.hstack(&self.basis2);
        all.is_invertible()
            && subspace::contains_all(&self.basis2, &(u * &self.basis1))
            && subspace::contains_all(&self.basis1, &(u * &self.basis2))
    }

    /// Projections `(pi_1, pi_2)` attached to the decomposition.
    pub fn projections(&self) -> Result<(Mat, Mat)> {
        let f = self.basis1.field();
        let k = self.basis1.cols();
        let l = self.basis2.cols();
        let p = self.basis1.hstack(&self.basis2);
        let pi = p.inverse()?;
        let d1 = Mat::block_diag(f, &[Mat::identity(f, k), Mat::zeros(f, l, l)]);
        let d2 = Mat::block_diag(f, &[Mat::zeros(f, k, k), Mat::identity(f, l)]);
        Ok((&(&p * &d1) * &pi, &(&p * &d2) * &pi))
    }
}

fn opposite_partner(p: &Poly) -> Result<Option<Poly>> {
    let f = p.field();
    if f.characteristic() == 2 || *p == Poly::t(f) || parity_class(p) == Parity::Even {
        return Ok(None);
    }
    Ok(Some(h_transform(p, &f.int(-1))?))
}

fn split_columns(m: &Mat, in_first: impl Fn(usize) -> bool) -> (Mat, Mat) {
    let (a, b): (Vec<usize>, Vec<usize>) = (0..m.cols()).partition(|&j| in_first(j));
    (m.select_columns(&a), m.select_columns(&b))
}

fn local_split(piece: &Piece, hint: &FactorHint) -> Result<(Mat, Mat)> {
    let f = piece.local.field();
    let a = &piece.local;
    match &piece.kind {
        PieceKind::Single(p) if *p == Poly::t(f) => {
            // heights of the Jordan chains: even ones to V_1
            let ab = adapted_basis(a, p)?;
            let g = ab.basis(a);
            let heights: Vec<usize> = ab.generators.iter().map(|x| x.height).collect();
            Ok(split_columns(&g, |j| heights[j].is_multiple_of(2)))
        }
        PieceKind::Single(p) if parity_class(p) == Parity::Even => {
            let ab = adapted_basis(a, p)?;
            let d = ab.d;
            Ok(split_columns(&ab.basis(a), |j| (j % d) % 2 == 0))
        }
        PieceKind::Single(p) if f.characteristic() == 2 => {
            // A_p is similar to K(w) with kappa_k(w) = kappa_{2k+1}(A_p)
            let tab = kaplansky_invariants_with_hint(a, p, hint)?;
            let m: Vec<usize> = (0..tab.kappa.len().div_ceil(2)).map(|k| tab.kappa(2 * k + 1)).collect();
            let w = realize_invariants(p, &m)?;
            let kw = block_k(&w);
            let s = similarity_witness(&kw, a)?
                .ok_or_else(|| Error::CriterionFails(format!("{p}-part is not of the form K(w)")))?;
            let h = w.rows();
            let id = Mat::identity(f, 2 * h);
            Ok((&s * &id.select_columns(&(0..h).collect::<Vec<_>>()), &s * &id.select_columns(&(h..2 * h).collect::<Vec<_>>())))
        }
        PieceKind::Single(p) => Err(Error::Internal(format!("no split rule for {p}"))),
        PieceKind::Pair { p, .. } => {
            let (ap, aq) = piece.halves();
            // s A_q s^{-1} = -A_p, then diag(1, s^{-1}) carries diag(A_p, -A_p) to the piece
            let s = similarity_witness(&aq, &-&ap)?
                .ok_or_else(|| Error::CriterionFails(format!("{p}-part and its opposite partner differ")))?;
            let (w1, w2) = exchange_split_diag_opposite(&ap)?;
            let phi = Mat::block_diag(f, &[Mat::identity(f, ap.rows()), s.inverse()?]);
            Ok((&phi * &w1, &phi * &w2))
        }
    }
}

pub fn exchange_split(a: &Mat) -> Result<ExchangeSplit> {
    exchange_split_with_hint(a, &FactorHint::none())
}

pub fn exchange_split_with_hint(a: &Mat, hint: &FactorHint) -> Result<ExchangeSplit> {
    let d = decide_sum_two_squarezero(a)?;
    if !d.holds {
        return Err(Error::CriterionFails(d.reason));
    }
    let f = a.field();
    let n = a.rows();
    let pieces = layout(a, hint, opposite_partner)?;
    let mut basis1 = Mat::zeros(f, n, 0);
    let mut basis2 = Mat::zeros(f, n, 0);
    for piece in &pieces {
        let (x1, x2) = local_split(piece, hint)?;
        basis1 = basis1.hstack(&(&piece.basis * &x1));
        basis2 = basis2.hstack(&(&piece.basis * &x2));
    }
    let split = ExchangeSplit { basis1, basis2 };
    if !split.check(a) {
        return Err(Error::VerificationFailed("exchange split".into()));
    }
    Ok(split)
}

pub fn squarezero_pair(a: &Mat) -> Result<DecompWitness> {
    squarezero_pair_with_hint(a, &FactorHint::none())
}

/// `(A pi_1, A pi_2)` for the projections of an exchange split.
pub fn squarezero_pair_with_hint(a: &Mat, hint: &FactorHint) -> Result<DecompWitness> {
    a.require_square("squarezero_pair")?;
    if a.rows() == 0 {
        return Ok(empty_witness(DecompKind::SquareZeroSum, a.field()));
    }
    let split = exchange_split_with_hint(a, hint)?;
    let (p1, p2) = split.projections()?;
    DecompWitness::verified(DecompKind::SquareZeroSum, a * &p1, a * &p2, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    #[test]
    fn zero_matrix_split() {
        let f = Field::Q;
        let s = exchange_split(&Mat::zeros(f, 3, 3)).unwrap();
        assert_eq!(s.basis1.cols() + s.basis2.cols(), 3);
        assert!(s.check(&Mat::zeros(f, 3, 3)));
        let w = squarezero_pair(&Mat::zeros(f, 2, 2)).unwrap();
        assert!(w.first.is_zero() && w.second.is_zero());
    }

    #[test]
    fn jordan_three_split_by_height() {
        let f = Field::Q;
        let j = Mat::jordan(&f.zero(), 3);
        let s = exchange_split(&j).unwrap();
        // height 2 vector is e_2 in 1-based terms
        assert_eq!(s.basis1, Mat::from_ints(f, &[&[0], &[1], &[0]]));
        assert_eq!(s.basis2.cols(), 2);
        let w = squarezero_pair(&j).unwrap();
        assert!(w.verified);
    }

    #[test]
    fn even_companion_split() {
        let f = Field::Q;
        let c = Mat::companion(&Poly::from_ints(f, &[1, 0, 1])).unwrap();
        let s = exchange_split(&c).unwrap();
        assert_eq!(s.basis1.cols(), 1);
        // u(V_2) = span{-x}
        let x = s.basis1.column(0);
        let ux = c.mul_vec(&x);
        assert_eq!(c.mul_vec(&ux), x.iter().map(|v| -v).collect::<Vec<_>>());
    }

    #[test]
    fn swap_matrix_pair() {
        let f = Field::Q;
        let u = Mat::from_ints(f, &[&[0, 1], &[1, 0]]);
        let w = squarezero_pair(&u).unwrap();
        assert!(w.check(&u));
    }

    #[test]
    fn opposite_pair_and_char_two() {
        let f = Field::Q;
        let u = Mat::diag(f, &[f.int(3), f.int(-3), f.int(1), f.int(-1)]);
        assert!(squarezero_pair(&u).unwrap().verified);
        let f2 = Field::Prime(2);
        let p = Poly::from_ints(f2, &[1, 1, 1]);
        let u = Mat::companion(&p.pow(2)).unwrap();
        assert!(squarezero_pair(&u).unwrap().verified);
        assert!(squarezero_pair(&Mat::companion(&p).unwrap()).is_err());
    }
}
