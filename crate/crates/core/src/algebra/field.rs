use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field: a prime field `F_p` or the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Prime(u64),
    Rationals,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub const Q: Field = Field::Rationals;

    pub fn prime(p: u64) -> Result<Field> {
        // u32-sized moduli keep residue products inside u64
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::Precondition(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Prime(p) => p,
            Field::Rationals => 0,
        }
    }

    /// Number of elements for prime fields.
    pub fn order(self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(p),
            Field::Rationals => None,
        }
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, x: i64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Mod { v: x.rem_euclid(p as i64) as u64, p },
            Field::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(x))),
        }
    }

    pub fn ratio(self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.int(den);
        d.inv()
            .map(|di| self.int(num) * di)
            .ok_or_else(|| Error::Precondition("zero denominator".into()))
    }

    /// The elements of a prime field in increasing residue order.
    pub fn elements(self) -> Option<impl Iterator<Item = Scalar>> {
        match self {
            Field::Prime(p) => Some((0..p).map(move |v| Scalar::Mod { v, p })),
            Field::Rationals => None,
        }
    }

    pub fn check(self, other: Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self, other))
        }
    }

    /// Parses a scalar literal: an integer, or `a/b` over Q.
    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad scalar literal {s:?}"));
        match s.split_once('/') {
            Some((a, b)) => {
                let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                if b.is_zero() {
                    return Err(bad());
                }
                match self {
                    Field::Rationals => Ok(Scalar::Rat(BigRational::new(a, b))),
                    Field::Prime(_) => {
                        let d = self.big(&b);
                        Ok(self.big(&a) * d.inv().ok_or_else(bad)?)
                    }
                }
            }
            None => {
                let a: BigInt = s.parse().map_err(|_| bad())?;
                Ok(self.big(&a))
            }
        }
    }

    pub fn big(self, x: &BigInt) -> Scalar {
        match self {
            Field::Prime(p) => {
                let r = x % BigInt::from(p);
                let r = if r.is_negative() { r + BigInt::from(p) } else { r };
                Scalar::Mod { v: r.to_u64().unwrap(), p }
            }
            Field::Rationals => Scalar::Rat(BigRational::from_integer(x.clone())),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F{p}"),
            Field::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        match s.trim() {
            "Q" => Ok(Field::Rationals),
            t if t.starts_with('F') => {
                let p: u64 = t[1..].parse().map_err(|_| Error::Parse(format!("unknown field {s:?}")))?;
                Field::prime(p)
            }
            _ => Err(Error::Parse(format!("unknown field {s:?}"))),
        }
    }
}

/// An exact field element. Residues are kept in `[0, p)`; rationals are always reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { v: u64, p: u64 },
    Rat(BigRational),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod { p, .. } => Field::Prime(*p),
            Scalar::Rat(_) => Field::Rationals,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { v, .. } => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { v, .. } => *v == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Mod { v, p } => Scalar::Mod { v: pow_mod(*v, *p - 2, *p), p: *p },
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Residue for prime fields.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod { v, .. } => Some(*v),
            Scalar::Rat(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Mod { .. } => None,
        }
    }

    fn same(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "scalar field mismatch");
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { v, .. } => write!(f, "{v}"),
            Scalar::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Mod { v: a, p: pa }, Scalar::Mod { v: b, p: pb }) => (pa, a).cmp(&(pb, b)),
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Mod { .. }, Scalar::Rat(_)) => Ordering::Less,
            (Scalar::Rat(_), Scalar::Mod { .. }) => Ordering::Greater,
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.same(rhs);
        match (self, rhs) {
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, .. }) => Scalar::Mod { v: (a + b) % p, p: *p },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.same(rhs);
        match (self, rhs) {
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, .. }) => Scalar::Mod { v: (a + p - b) % p, p: *p },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.same(rhs);
        match (self, rhs) {
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, .. }) => Scalar::Mod { v: a * b % p, p: *p },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { v, p } => Scalar::Mod { v: (p - v) % p, p: *p },
            Scalar::Rat(a) => Scalar::Rat(-a),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
