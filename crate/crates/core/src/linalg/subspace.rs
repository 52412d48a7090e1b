//! Subspaces represented by matrices whose columns form a basis.

use super::mat::Mat;
use crate::algebra::Scalar;
use crate::error::{Error, Result};

/// An independent subset of the columns spanning the same space.
pub fn column_space(m: &Mat) -> Mat {
    let (_, pivots) = m.rref();
    m.select_columns(&pivots)
}

pub fn sum(u: &Mat, w: &Mat) -> Mat {
    column_space(&u.hstack(w))
}

pub fn intersect(u: &Mat, w: &Mat) -> Mat {
    let u = column_space(u);
    let w = column_space(w);
    let k = u.hstack(&-&w).kernel();
    let coeffs = k.submatrix(0, 0, u.cols(), k.cols());
    column_space(&(&u * &coeffs))
}

pub fn contains(u: &Mat, v: &[Scalar]) -> bool {
    let vm = Mat::from_columns(u.field(), u.rows(), &[v.to_vec()]);
    u.rank() == u.hstack(&vm).rank()
}

pub fn contains_all(u: &Mat, w: &Mat) -> bool {
    u.rank() == u.hstack(w).rank()
}

/// Image `A U` of the subspace spanned by the columns of `u`.
pub fn image(a: &Mat, u: &Mat) -> Mat {
    column_space(&(a * u))
}

/// `{x in U : A x in W}`.
pub fn preimage_within(a: &Mat, u: &Mat, w: &Mat) -> Mat {
    // x = U c with A U c = W d
    let u = column_space(u);
    let au = a * &u;
    let k = au.hstack(&-w).kernel();
    let coeffs = k.submatrix(0, 0, u.cols(), k.cols());
    column_space(&(&u * &coeffs))
}

/// Matrix of `A` restricted to the invariant subspace with basis `b`: the `R` with `A B = B R`.
pub fn restrict(a: &Mat, b: &Mat) -> Result<Mat> {
    let ab = a * b;
    b.solve(&ab)?
        .ok_or_else(|| Error::Precondition("restrict: subspace is not invariant".into()))
}

/// Extends the columns of `b` (independent) to a basis of the whole space with standard vectors.
pub fn complete_basis(b: &Mat) -> Mat {
    let n = b.rows();
    let mut cur = b.clone();
    let id = Mat::identity(b.field(), n);
    for j in 0..n {
        if cur.cols() == n {
            break;
        }
        let cand = cur.hstack(&id.select_columns(&[j]));
        if cand.rank() == cand.cols() {
            cur = cand;
        }
    }
    cur
}
