//! Primary pieces, optionally paired with a partner prime, laid out in canonical order.

use crate::algebra::{FactorHint, Field, Poly};
use crate::error::{Error, Result};
use crate::linalg::{primary_decomposition, Mat};

pub(crate) enum PieceKind {
    Single(Poly),
    /// `p` and its partner; the first `dim_p` local coordinates belong to `p`.
    Pair { p: Poly, q: Poly, dim_p: usize },
}

pub(crate) struct Piece {
    pub kind: PieceKind,
    pub basis: Mat,
    pub local: Mat,
}

impl Piece {
    /// Diagonal blocks `(A_p, A_q)` of a paired piece.
    pub fn halves(&self) -> (Mat, Mat) {
        let PieceKind::Pair { dim_p, .. } = self.kind else {
            panic!("halves of a single piece");
        };
        let k = self.local.rows();
        (
            self.local.submatrix(0, 0, dim_p, dim_p),
            self.local.submatrix(dim_p, dim_p, k - dim_p, k - dim_p),
        )
    }
}

/// Primes are visited in canonical order; a prime whose partner has been seen is skipped.
pub(crate) fn layout(
    a: &Mat,
    hint: &FactorHint,
    partner: impl Fn(&Poly) -> Result<Option<Poly>>,
) -> Result<Vec<Piece>> {
    let parts = primary_decomposition(a, hint)?;
    let mut used = vec![false; parts.len()];
    let mut out = Vec::new();
    for i in 0..parts.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let pi = &parts[i];
        match partner(&pi.p)? {
            None => out.push(Piece { kind: PieceKind::Single(pi.p.clone()), basis: pi.basis.clone(), local: pi.restricted.clone() }),
            Some(q) => {
                let j = parts
                    .iter()
                    .position(|x| x.p == q)
                    .ok_or_else(|| Error::CriterionFails(format!("{} has no partner component {q}", pi.p)))?;
                used[j] = true;
                let pj = &parts[j];
                let dim_p = pi.basis.cols();
                out.push(Piece {
                    kind: PieceKind::Pair { p: pi.p.clone(), q, dim_p },
                    basis: pi.basis.hstack(&pj.basis),
                    local: Mat::block_diag(a.field(), &[pi.restricted.clone(), pj.restricted.clone()]),
                });
            }
        }
    }
    Ok(out)
}

/// `P diag(blocks) P^{-1}`, where `P` concatenates the piece bases.
pub(crate) fn assemble(field: Field, n: usize, pieces: &[Piece], blocks: &[Mat]) -> Result<Mat> {
    let mut p = Mat::zeros(field, n, 0);
    for piece in pieces {
        p = p.hstack(&piece.basis);
    }
    let d = Mat::block_diag(field, blocks);
    Ok(&(&p * &d) * &p.inverse()?)
}
