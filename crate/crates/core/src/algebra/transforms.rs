//! Polynomial transforms that the decomposition criteria are phrased in.

use serde::Serialize;

use super::field::Scalar;
use super::poly::Poly;
use crate::error::{Error, Result};

fn require_monic(p: &Poly, what: &str) -> Result<()> {
    if p.is_monic() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what}: {p} is not monic")))
    }
}

/// Reciprocal polynomial `p(0)^{-1} t^d p(1/t)`.
pub fn reciprocal(p: &Poly) -> Result<Poly> {
    require_monic(p, "reciprocal")?;
    let c0 = p.coeff(0);
    let inv = c0
        .inv()
        .ok_or_else(|| Error::Precondition(format!("reciprocal: {p} vanishes at 0")))?;
    let coeffs = p.coeffs().iter().rev().map(|c| c * &inv).collect();
    Ok(Poly::new(p.field(), coeffs))
}

/// `lambda^{-d} p(lambda t)`.
pub fn h_transform(p: &Poly, lambda: &Scalar) -> Result<Poly> {
    require_monic(p, "h_transform")?;
    let li = lambda
        .inv()
        .ok_or_else(|| Error::Precondition("h_transform: lambda = 0".into()))?;
    let d = p.deg();
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c * &li.pow((d - k) as u64))
        .collect();
    Ok(Poly::new(p.field(), coeffs))
}

/// `t^d p(t + delta/t)`, monic of degree `2d`.
pub fn r_transform(p: &Poly, delta: &Scalar) -> Result<Poly> {
    require_monic(p, "r_transform")?;
    if delta.is_zero() {
        return Err(Error::Precondition("r_transform: delta = 0".into()));
    }
    let f = p.field();
    let d = p.deg();
    let shift = Poly::new(f, vec![delta.clone(), f.zero(), f.one()]);
    let mut acc = Poly::zero(f);
    let mut power = Poly::one(f);
    for (k, c) in p.coeffs().iter().enumerate() {
        acc = &acc + &(&Poly::monomial(c.clone(), d - k) * &power);
        power = &power * &shift;
    }
    Ok(acc)
}

/// Inverts `r_transform(·, 1)`: finds monic `q` with `t^d q(t + 1/t) = p`.
///
/// Writes `p = sum_k c_k t^{d-k} (t^2+1)^k` and peels the coefficients off from
/// the top degree down; a nonzero residual means `p` is not in the image.
pub fn r1_preimage(p: &Poly) -> Result<Poly> {
    require_monic(p, "r1_preimage")?;
    let f = p.field();
    let n = p.deg();
    if n % 2 == 1 {
        return Err(Error::Precondition(format!("r1_preimage: {p} has odd degree")));
    }
    let d = n / 2;
    let shift = Poly::from_ints(f, &[1, 0, 1]);
    let mut residual = p.clone();
    let mut q = vec![f.zero(); d + 1];
    for k in (0..=d).rev() {
        let c = residual.coeff(d + k);
        if c.is_zero() {
            continue;
        }
        let basis = &Poly::monomial(f.one(), d - k) * &shift.pow(k);
        residual = &residual - &basis.scale(&c);
        q[k] = c;
    }
    if !residual.is_zero() {
        return Err(Error::Precondition(format!("r1_preimage: {p} is not an R_1 image")));
    }
    Ok(Poly::new(f, q))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
    Neither,
}

/// Even: `p(t) = q(t^2)`; odd: `p(t) = t q(t^2)`. The zero polynomial counts as even.
pub fn parity_class(p: &Poly) -> Parity {
    let vanish = |r: usize| p.coeffs().iter().skip(r).step_by(2).all(Scalar::is_zero);
    if vanish(1) {
        Parity::Even
    } else if vanish(0) {
        Parity::Odd
    } else {
        Parity::Neither
    }
}

pub fn is_quasi_palindromial(p: &Poly) -> Result<bool> {
    Ok(&reciprocal(p)? == p)
}

/// `q` with `p(t) = q(t^2)`, for even `p`.
pub fn even_part(p: &Poly) -> Option<Poly> {
    if parity_class(p) != Parity::Even {
        return None;
    }
    Some(Poly::new(p.field(), p.coeffs().iter().step_by(2).cloned().collect()))
}

/// In characteristic 2, the `q` with `q(t^2) = p(t)^2`.
pub fn char2_square_companion(p: &Poly) -> Result<Poly> {
    if p.field().characteristic() != 2 {
        return Err(Error::Precondition("characteristic 2 required".into()));
    }
    Ok(Poly::new(p.field(), p.coeffs().iter().map(|c| c * c).collect()))
}

/// `tr(p)`: minus the linear coefficient of a monic quadratic.
pub fn trace(p: &Poly) -> Result<Scalar> {
    if p.degree() != Some(2) || !p.is_monic() {
        return Err(Error::Precondition(format!("trace: {p} is not a monic quadratic")));
    }
    Ok(-&p.coeff(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn q(c: &[i64]) -> Poly {
        Poly::from_ints(Field::Q, c)
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(reciprocal(&q(&[1, 1])).unwrap(), q(&[1, 1]));
        let half = Field::Q.ratio(-1, 2).unwrap();
        assert_eq!(reciprocal(&q(&[-2, 1])).unwrap(), Poly::new(Field::Q, vec![half, Field::Q.one()]));
        assert!(reciprocal(&q(&[0, 1])).is_err());
        assert!(reciprocal(&q(&[1, 2])).is_err());
    }

    #[test]
    fn h_transform_examples() {
        let m1 = Field::Q.int(-1);
        assert_eq!(h_transform(&q(&[-1, 1]), &m1).unwrap(), q(&[1, 1]));
        assert_eq!(h_transform(&q(&[1, 1, 1]), &m1).unwrap(), q(&[1, -1, 1]));
        assert_eq!(h_transform(&q(&[5, 3, 1]), &Field::Q.one()).unwrap(), q(&[5, 3, 1]));
        assert!(h_transform(&q(&[1, 1]), &Field::Q.zero()).is_err());
    }

    #[test]
    fn r_transform_examples() {
        let one = Field::Q.one();
        assert_eq!(r_transform(&q(&[2, 1]), &one).unwrap(), q(&[1, 2, 1]));
        assert_eq!(r_transform(&q(&[-2, 1]), &one).unwrap(), q(&[1, -2, 1]));
        let prod = r_transform(&q(&[-4, 0, 1]), &one).unwrap();
        assert_eq!(prod, &q(&[1, 2, 1]) * &q(&[1, -2, 1]));
        assert!(r_transform(&q(&[1, 1]), &Field::Q.zero()).is_err());
    }

    #[test]
    fn r1_preimage_examples() {
        assert_eq!(r1_preimage(&q(&[1, 2, 1])).unwrap(), q(&[2, 1]));
        assert_eq!(r1_preimage(&q(&[1, 1, 1])).unwrap(), q(&[1, 1]));
        assert!(r1_preimage(&q(&[-1, 0, 0, 1])).is_err());
        // not palindromic, so no preimage
        assert!(r1_preimage(&q(&[2, 0, 1])).is_err());
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity_class(&q(&[1, 0, 3, 0, 1])), Parity::Even);
        assert_eq!(parity_class(&q(&[0, 2, 0, 1])), Parity::Odd);
        assert_eq!(parity_class(&q(&[1, 1, 1])), Parity::Neither);
    }

    #[test]
    fn palindromial_examples() {
        assert!(is_quasi_palindromial(&q(&[1, 1, 1])).unwrap());
        assert!(!is_quasi_palindromial(&q(&[-2, 1])).unwrap());
        assert!(is_quasi_palindromial(&q(&[1, 1])).unwrap());
        assert!(is_quasi_palindromial(&q(&[0, 1])).is_err());
    }

    #[test]
    fn char2_companion() {
        let f2 = Field::Prime(2);
        let p = Poly::from_ints(f2, &[1, 1]);
        let sq = char2_square_companion(&p).unwrap();
        assert_eq!(sq.compose(&Poly::from_ints(f2, &[0, 0, 1])), &p * &p);
    }
}
