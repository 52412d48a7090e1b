//! Elementary divisors, primary components and adapted bases.

use serde::Serialize;

use super::frobenius::frobenius;
use super::mat::Mat;
use super::smith::invariant_factors;
use super::subspace;
use crate::algebra::{factor_with_hint, is_irreducible_with_hint, FactorHint, Poly, Scalar};
use crate::error::{Error, Result};

/// Prime powers `(p, k)`, sorted by `p` in canonical order then by `k`.
pub fn elementary_divisors(a: &Mat) -> Result<Vec<(Poly, usize)>> {
    elementary_divisors_with_hint(a, &FactorHint::none())
}

pub fn elementary_divisors_with_hint(a: &Mat, hint: &FactorHint) -> Result<Vec<(Poly, usize)>> {
    let mut out = Vec::new();
    for f in invariant_factors(a)? {
        out.extend(factor_with_hint(&f, hint)?);
    }
    out.sort_by(|x, y| x.0.canonical_cmp(&y.0).then(x.1.cmp(&y.1)));
    Ok(out)
}

/// Distinct irreducible factors of the characteristic polynomial in canonical order.
pub fn primes_of(a: &Mat, hint: &FactorHint) -> Result<Vec<Poly>> {
    let cp = a.charpoly()?;
    if cp.is_one() {
        return Ok(vec![]);
    }
    Ok(factor_with_hint(&cp, hint)?.into_iter().map(|(p, _)| p).collect())
}

fn require_irreducible(p: &Poly) -> Result<()> {
    if is_irreducible_with_hint(p, &FactorHint::none()).unwrap_or(true) {
        Ok(())
    } else {
        Err(Error::NotIrreducible(p.to_string()))
    }
}

/// `p(A)^m` with `m = floor(n / deg p)`, enough for the kernel chain of `p(A)` to stabilize.
fn stable_power(a: &Mat, p: &Poly) -> Result<Mat> {
    let pa = a.eval_poly(p)?;
    Ok(pa.pow(a.rows() / p.deg().max(1)))
}

/// Basis of `Tor_{p^inf}(A) = Ker p(A)^m`.
pub fn primary_component(a: &Mat, p: &Poly) -> Result<Mat> {
    a.require_square("primary_component")?;
    a.field().check(p.field())?;
    if !p.is_monic() || p.is_constant() {
        return Err(Error::Precondition(format!("{p} is not monic nonconstant")));
    }
    Ok(stable_power(a, p)?.kernel())
}

pub fn is_primary(a: &Mat, p: &Poly) -> Result<bool> {
    Ok(a.rows() == 0 || stable_power(a, p)?.is_zero())
}

/// Primary decomposition: the `p`, the basis of its component, and the restricted matrix.
pub struct PrimaryPart {
    pub p: Poly,
    pub basis: Mat,
    pub restricted: Mat,
}

pub fn primary_decomposition(a: &Mat, hint: &FactorHint) -> Result<Vec<PrimaryPart>> {
    let mut parts = Vec::new();
    for p in primes_of(a, hint)? {
        let basis = primary_component(a, &p)?;
        let restricted = subspace::restrict(a, &basis)?;
        parts.push(PrimaryPart { p, basis, restricted });
    }
    Ok(parts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Link {
    Zero,
    Index(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub vector: Vec<Scalar>,
    pub link: Link,
    /// Number of applications of `p(A)` needed to kill the vector.
    pub height: usize,
}

/// Generators with `p(A) x_i` equal to a generator or to zero.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub p: Poly,
    pub d: usize,
    pub generators: Vec<Generator>,
}

impl AdaptedBasis {
    /// Columns `A^j x_i` for each generator `i` and `0 <= j < d`.
    pub fn basis(&self, a: &Mat) -> Mat {
        let mut cols = Vec::new();
        for g in &self.generators {
            let mut w = g.vector.clone();
            for _ in 0..self.d {
                let next = a.mul_vec(&w);
                cols.push(w);
                w = next;
            }
        }
        Mat::from_columns(a.field(), a.rows(), &cols)
    }

    pub fn verify(&self, a: &Mat) -> Result<bool> {
        let pa = a.eval_poly(&self.p)?;
        for g in &self.generators {
            let img = pa.mul_vec(&g.vector);
            let ok = match g.link {
                Link::Zero => img.iter().all(Scalar::is_zero),
                Link::Index(j) => img == self.generators[j].vector,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(self.basis(a).is_invertible())
    }
}

/// Adapted basis of a `p`-primary matrix, cyclic summands taken by decreasing exponent.
pub fn adapted_basis(a: &Mat, p: &Poly) -> Result<AdaptedBasis> {
    a.require_square("adapted_basis")?;
    require_irreducible(p)?;
    if !is_primary(a, p)? {
        return Err(Error::NotPrimary(p.to_string()));
    }
    let d = p.deg();
    let fr = frobenius(a)?;
    let pa = a.eval_poly(p)?;
    let mut generators: Vec<Generator> = Vec::new();
    let offsets = fr.offsets();
    for (f, off) in fr.factors.iter().zip(offsets).rev() {
        let k = f.deg() / d;
        let mut x = fr.transform.column(off);
        for i in 0..k {
            let link = if i + 1 < k { Link::Index(generators.len() + 1) } else { Link::Zero };
            let next = pa.mul_vec(&x);
            generators.push(Generator { vector: x, link, height: k - i });
            x = next;
        }
    }
    let ab = AdaptedBasis { p: p.clone(), d, generators };
    if !ab.verify(a)? {
        return Err(Error::Internal("adapted basis failed verification".into()));
    }
    Ok(ab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn poly(c: &[i64]) -> Poly {
        Poly::from_ints(Field::Q, c)
    }

    #[test]
    fn divisors_examples() {
        let f = Field::Q;
        let d = Mat::diag(f, &[f.zero(), f.one()]);
        assert_eq!(elementary_divisors(&d).unwrap(), vec![(poly(&[-1, 1]), 1), (poly(&[0, 1]), 1)]);
        let j = Mat::jordan(&f.zero(), 3);
        assert_eq!(elementary_divisors(&j).unwrap(), vec![(poly(&[0, 1]), 3)]);
        let c = Mat::companion(&poly(&[1, 0, 1]).pow(2)).unwrap();
        assert_eq!(elementary_divisors(&c).unwrap(), vec![(poly(&[1, 0, 1]), 2)]);
    }

    #[test]
    fn primary_components() {
        let f = Field::Q;
        let d = Mat::diag(f, &[f.zero(), f.one()]);
        assert_eq!(primary_component(&d, &poly(&[0, 1])).unwrap(), Mat::from_ints(f, &[&[1], &[0]]));
        assert_eq!(primary_component(&d, &poly(&[1, 0, 1])).unwrap().cols(), 0);
        let a = Mat::block_diag(f, &[Mat::jordan(&f.zero(), 2), Mat::identity(f, 1)]);
        assert_eq!(primary_component(&a, &poly(&[0, 1])).unwrap().cols(), 2);
    }

    #[test]
    fn adapted_bases() {
        let f = Field::Q;
        let j = Mat::jordan(&f.zero(), 3);
        let ab = adapted_basis(&j, &poly(&[0, 1])).unwrap();
        let e = |i: usize| (0..3).map(|k| if k == i { f.one() } else { f.zero() }).collect::<Vec<_>>();
        assert_eq!(ab.generators.iter().map(|g| g.vector.clone()).collect::<Vec<_>>(), vec![e(2), e(1), e(0)]);
        assert_eq!(ab.generators[2].link, Link::Zero);

        let c = Mat::companion(&poly(&[1, 0, 1])).unwrap();
        let ab = adapted_basis(&c, &poly(&[1, 0, 1])).unwrap();
        assert_eq!(ab.generators.len(), 1);
        assert_eq!(ab.generators[0].link, Link::Zero);

        let z = Mat::zeros(f, 3, 3);
        let ab = adapted_basis(&z, &poly(&[0, 1])).unwrap();
        assert_eq!(ab.generators.len(), 3);
        assert!(ab.generators.iter().all(|g| g.link == Link::Zero));

        assert!(matches!(adapted_basis(&Mat::identity(f, 2), &poly(&[0, 1])), Err(Error::NotPrimary(_))));
    }
}
