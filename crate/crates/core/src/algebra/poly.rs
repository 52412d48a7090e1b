use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, Scalar};
use crate::error::{Error, Result};

/// Univariate polynomial, coefficients lowest degree first, trailing zeros stripped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Poly {
        for c in &coeffs {
            assert_eq!(c.field(), field, "coefficient from a different field");
        }
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    pub fn from_ints(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.int(c)).collect())
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    /// The indeterminate `t`.
    pub fn t(field: Field) -> Poly {
        Poly::monomial(field.one(), 1)
    }

    /// `t + c`.
    pub fn linear(c: Scalar) -> Poly {
        let f = c.field();
        Poly::new(f, vec![c, f.one()])
    }

    pub fn monomial(c: Scalar, k: usize) -> Poly {
        let f = c.field();
        let mut coeffs = vec![f.zero(); k];
        coeffs.push(c);
        Poly::new(f, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// `None` stands for the degree of the zero polynomial (minus infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; for callers that already excluded it.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(Scalar::is_one)
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `self(q(t))`.
    pub fn compose(&self, q: &Poly) -> Poly {
        let mut acc = Poly::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, mut e: usize) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        Poly::new(
            f,
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &f.int(k as i64)).collect(),
        )
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.field.check(other.field)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.field.check(other.field)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.field.check(other.field)?;
        Ok(self * other)
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.field.check(divisor.field)?;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.lead().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return Ok((Poly::zero(self.field), Poly::zero(self.field)));
        };
        if sd < dd {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * dc);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(self.field, quot), Poly::new(self.field, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact quotient; errors when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        match other.rem(self) {
            Ok(r) => r.is_zero(),
            Err(_) => other.is_zero(),
        }
    }

    /// Monic greatest common divisor (zero for two zero inputs).
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.field.check(other.field)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Returns `(g, u, v)` with `g` monic and `u*self + v*other = g`.
    pub fn xgcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.field.check(other.field)?;
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead().cloned() {
            None => Ok((r0, s0, t0)),
            Some(l) => {
                let li = l.inv().unwrap();
                Ok((r0.scale(&li), s0.scale(&li), t0.scale(&li)))
            }
        }
    }

    pub fn lcm(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.field));
        }
        let g = self.gcd(other)?;
        Ok((self * &other.exact_div(&g)?).monic())
    }

    /// `self^e mod m` for a large exponent given in binary (little endian bits).
    pub fn pow_mod_bits(&self, bits: &[bool], m: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(self.field).rem(m)?;
        let base = self.rem(m)?;
        for &bit in bits.iter().rev() {
            acc = (&acc * &acc).rem(m)?;
            if bit {
                acc = (&acc * &base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// Multiplicity of `p` as a divisor of `self` (self nonzero, p nonconstant).
    pub fn multiplicity(&self, p: &Poly) -> usize {
        let mut k = 0;
        let mut cur = self.clone();
        loop {
            match cur.div_rem(p) {
                Ok((q, r)) if r.is_zero() && !cur.is_zero() => {
                    cur = q;
                    k += 1;
                }
                _ => return k,
            }
        }
    }

    /// Canonical order: degree first, then coefficient lists lowest degree first.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    /// Coefficient literals lowest degree first, the CLI text format.
    pub fn to_literals(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field.cmp(&other.field).then_with(|| self.canonical_cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let lit = c.to_string();
            match (k, c.is_one()) {
                (0, _) => write!(f, "{lit}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{lit}t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{lit}t^{k}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "polynomial field mismatch");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect();
        Poly::new(self.field, coeffs)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "polynomial field mismatch");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect();
        Poly::new(self.field, coeffs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "polynomial field mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}
