//! Rational canonical form with an explicit change of basis.

use super::mat::Mat;
use super::subspace;
use crate::algebra::{h_transform, reciprocal, Field, Poly, Scalar};
use crate::error::{Error, Result};

/// `P` and `f_1 | ... | f_r` with `P^{-1} A P = diag(C(f_1), ..., C(f_r))`.
#[derive(Clone, Debug)]
pub struct Frobenius {
    pub factors: Vec<Poly>,
    pub transform: Mat,
}

impl Frobenius {
    pub fn canonical(&self, field: Field) -> Mat {
        let blocks: Vec<Mat> = self.factors.iter().map(|f| Mat::companion(f).unwrap()).collect();
        Mat::block_diag(field, &blocks)
    }

    /// Column offset of each companion block.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.factors
            .iter()
            .map(|f| {
                let o = acc;
                acc += f.deg();
                o
            })
            .collect()
    }
}

/// Minimal polynomial of `v` under `A`.
pub fn vector_minpoly(a: &Mat, v: &[Scalar]) -> Poly {
    let f = a.field();
    // rows of reduced Krylov vectors, each with its pivot and the polynomial producing it
    let mut reduced: Vec<(Vec<Scalar>, usize, Poly)> = Vec::new();
    let mut w = v.to_vec();
    let mut k = 0;
    loop {
        let mut x = w.clone();
        let mut poly = Poly::monomial(f.one(), k);
        for (r, piv, c) in &reduced {
            let coef = x[*piv].clone();
            if coef.is_zero() {
                continue;
            }
            for (xi, ri) in x.iter_mut().zip(r) {
                if !ri.is_zero() {
                    *xi = &*xi - &(&coef * ri);
                }
            }
            poly = &poly - &c.scale(&coef);
        }
        match x.iter().position(|s| !s.is_zero()) {
            None => return poly,
            Some(piv) => {
                let inv = x[piv].inv().unwrap();
                let x: Vec<Scalar> = x.iter().map(|s| s * &inv).collect();
                reduced.push((x, piv, poly.scale(&inv)));
            }
        }
        w = a.mul_vec(&w);
        k += 1;
    }
}

fn add_vecs(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn apply_poly(a: &Mat, p: &Poly, v: &[Scalar]) -> Vec<Scalar> {
    let mut acc = vec![a.field().zero(); v.len()];
    for c in p.coeffs().iter().rev() {
        acc = a.mul_vec(&acc);
        for (x, y) in acc.iter_mut().zip(v) {
            *x = &*x + &(c * y);
        }
    }
    acc
}

/// A vector whose minimal polynomial is the minimal polynomial of `A`.
pub fn maximal_vector(a: &Mat) -> (Vec<Scalar>, Poly) {
    let f = a.field();
    let n = a.rows();
    let mut v = vec![f.zero(); n];
    let mut mu = Poly::one(f);
    for j in 0..n {
        let mut e = vec![f.zero(); n];
        e[j] = f.one();
        let mw = vector_minpoly(a, &e);
        if mw.divides(&mu) {
            continue;
        }
        if mu.divides(&mw) {
            v = e;
            mu = mw;
            continue;
        }
        // coprime split of the lcm into a | mu, b | mw
        let g = mu.gcd(&mw).unwrap();
        let mut x = mu.clone();
        let mut y = mw.exact_div(&g).unwrap();
        loop {
            let g = x.gcd(&y).unwrap();
            if g.is_one() {
                break;
            }
            x = x.exact_div(&g).unwrap();
            y = &y * &g;
        }
        let vx = apply_poly(a, &mu.exact_div(&x).unwrap(), &v);
        let wy = apply_poly(a, &mw.exact_div(&y).unwrap(), &e);
        v = add_vecs(&vx, &wy);
        mu = &x * &y;
        debug_assert_eq!(vector_minpoly(a, &v), mu);
    }
    (v, mu)
}

pub fn minimal_polynomial(a: &Mat) -> Result<Poly> {
    a.require_square("minimal_polynomial")?;
    Ok(maximal_vector(a).1)
}

fn krylov(a: &Mat, v: &[Scalar], k: usize) -> Mat {
    let mut cols = Vec::with_capacity(k);
    let mut w = v.to_vec();
    for _ in 0..k {
        let next = a.mul_vec(&w);
        cols.push(w);
        w = next;
    }
    Mat::from_columns(a.field(), a.rows(), &cols)
}

pub fn frobenius(a: &Mat) -> Result<Frobenius> {
    a.require_square("frobenius")?;
    let f = a.field();
    let n = a.rows();
    if n == 0 {
        return Ok(Frobenius { factors: vec![], transform: Mat::zeros(f, 0, 0) });
    }
    let (v, mu) = maximal_vector(a);
    let k = mu.deg();
    let kr = krylov(a, &v, k);
    if k == n {
        return Ok(Frobenius { factors: vec![mu], transform: kr });
    }
    // functional with f(A^i v) = [i == k-1]
    let mut e = Mat::zeros(f, k, 1);
    e.set(k - 1, 0, f.one());
    let phi = kr
        .transpose()
        .solve(&e)?
        .ok_or_else(|| Error::Internal("Krylov basis not independent".into()))?
        .transpose();
    let mut rows = phi.clone();
    let mut cur = phi;
    for _ in 1..k {
        cur = &cur * a;
        rows = rows.vstack(&cur);
    }
    let w = rows.kernel();
    let aw = subspace::restrict(a, &w)?;
    let sub = frobenius(&aw)?;
    let mut factors = sub.factors;
    factors.push(mu);
    let transform = (&w * &sub.transform).hstack(&kr);
    Ok(Frobenius { factors, transform })
}

/// `s` with `s A s^{-1} = B`, or `None` when `A` and `B` are not similar.
pub fn similarity_witness(a: &Mat, b: &Mat) -> Result<Option<Mat>> {
    a.field().check(b.field())?;
    a.require_square("similarity_witness")?;
    b.require_square("similarity_witness")?;
    if a.rows() != b.rows() {
        return Ok(None);
    }
    let fa = frobenius(a)?;
    let fb = frobenius(b)?;
    if fa.factors != fb.factors {
        return Ok(None);
    }
    let s = &fb.transform * &fa.transform.inverse()?;
    if (&s * a) != (b * &s) {
        return Err(Error::VerificationFailed("similarity witness".into()));
    }
    Ok(Some(s))
}

/// Whether `A` is similar to `-A`: the invariant factors are stable under `H_{-1}`.
pub fn similar_to_opposite(a: &Mat) -> Result<bool> {
    let fs = super::smith::invariant_factors(a)?;
    let m1 = a.field().int(-1);
    let mapped: Result<Vec<Poly>> = fs.iter().map(|p| h_transform(p, &m1)).collect();
    Ok(mapped? == fs)
}

/// Whether invertible `A` is similar to `A^{-1}`: the invariant factors are stable under `♯`.
pub fn similar_to_inverse(a: &Mat) -> Result<bool> {
    a.require_square("similar_to_inverse")?;
    if !a.is_invertible() {
        return Err(Error::Singular);
    }
    let fs = super::smith::invariant_factors(a)?;
    let mapped: Result<Vec<Poly>> = fs.iter().map(reciprocal).collect();
    Ok(mapped? == fs)
}
