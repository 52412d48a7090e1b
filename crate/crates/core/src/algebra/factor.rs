//! Factorization into monic irreducibles.
//!
//! Over `F_p`: distinct-degree splitting by `gcd(f, t^{p^d} - t)`, then trial
//! division by enumerated monic polynomials of that degree when several
//! irreducibles share a degree. Over `Q`: squarefree decomposition, rational
//! roots, then quadratic factors by Kronecker's method. Whatever remains has no
//! factor of degree at most 2, hence is irreducible when its degree is below 6;
//! anything larger needs a caller-supplied hint.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{Field, Scalar};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Monic polynomials the caller asserts to be irreducible over `Q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactorHint(pub Vec<Poly>);

impl FactorHint {
    pub fn none() -> FactorHint {
        FactorHint(Vec::new())
    }
}

pub type Factorization = Vec<(Poly, usize)>;

pub fn factor_irreducibles(p: &Poly) -> Result<Factorization> {
    factor_with_hint(p, &FactorHint::none())
}

pub fn factor_with_hint(p: &Poly, hint: &FactorHint) -> Result<Factorization> {
    if !p.is_monic() || p.is_constant() {
        return Err(Error::Precondition(format!("factor: {p} must be monic and nonconstant")));
    }
    let mut out = match p.field() {
        Field::Prime(q) => factor_fp(p, q)?,
        Field::Rationals => factor_q(p, hint)?,
    };
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    let mut check = Poly::one(p.field());
    for (f, e) in &out {
        check = &check * &f.pow(*e);
    }
    if &check != p {
        return Err(Error::Internal(format!("factorization of {p} does not multiply back")));
    }
    Ok(out)
}

pub fn is_irreducible(p: &Poly) -> Result<bool> {
    is_irreducible_with_hint(p, &FactorHint::none())
}

pub fn is_irreducible_with_hint(p: &Poly, hint: &FactorHint) -> Result<bool> {
    if !p.is_monic() || p.is_constant() {
        return Ok(false);
    }
    if hint.0.contains(p) {
        return Ok(true);
    }
    let f = factor_with_hint(p, hint)?;
    Ok(f.len() == 1 && f[0].1 == 1)
}

fn bits_of(mut n: u64) -> Vec<bool> {
    let mut bits = Vec::new();
    while n > 0 {
        bits.push(n & 1 == 1);
        n >>= 1;
    }
    bits
}

fn factor_fp(p: &Poly, q: u64) -> Result<Factorization> {
    let field = p.field();
    let t = Poly::t(field);
    let q_bits = bits_of(q);
    let mut f = p.clone();
    let mut out = Vec::new();
    // frob = t^{q^d} mod f, refreshed whenever f shrinks
    let mut d = 0usize;
    let mut frob = t.rem(&f)?;
    while f.deg() >= 2 * (d + 1) {
        d += 1;
        frob = frob.pow_mod_bits(&q_bits, &f)?;
        let g = f.gcd(&(&frob - &t))?;
        if g.is_one() {
            continue;
        }
        for h in split_equal_degree(&g, d, field)? {
            let e = f.multiplicity(&h);
            f = f.exact_div(&h.pow(e))?;
            out.push((h, e));
        }
        if f.is_one() {
            break;
        }
        frob = frob.rem(&f)?;
    }
    if !f.is_constant() {
        out.push((f, 1));
    }
    Ok(out)
}

/// Splits a product of distinct irreducibles, all of degree `d`.
fn split_equal_degree(g: &Poly, d: usize, field: Field) -> Result<Vec<Poly>> {
    let mut g = g.clone();
    let mut out = Vec::new();
    if g.deg() == d {
        out.push(g);
        return Ok(out);
    }
    let q = field.order().unwrap();
    let mut digits = vec![0u64; d];
    loop {
        let mut coeffs: Vec<Scalar> = digits.iter().map(|&v| field.int(v as i64)).collect();
        coeffs.push(field.one());
        let h = Poly::new(field, coeffs);
        let (quot, rem) = g.div_rem(&h)?;
        if rem.is_zero() {
            out.push(h);
            g = quot;
            if g.deg() == d {
                out.push(g);
                return Ok(out);
            }
        }
        // next digit vector
        let mut i = 0;
        loop {
            if i == d {
                return Err(Error::Internal("equal-degree split ran out of candidates".into()));
            }
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn factor_q(p: &Poly, hint: &FactorHint) -> Result<Factorization> {
    let mut f = p.clone();
    let mut out: Factorization = Vec::new();
    for h in &hint.0 {
        if h.field() != Field::Q || !h.is_monic() || h.is_constant() {
            return Err(Error::Precondition(format!("bad factorization hint {h}")));
        }
        let e = f.multiplicity(h);
        if e > 0 {
            f = f.exact_div(&h.pow(e))?;
            out.push((h.clone(), e));
        }
    }
    if f.is_constant() {
        return Ok(out);
    }
    for (part, mult) in squarefree_q(&f)? {
        for g in factor_squarefree_q(&part)? {
            out.push((g, mult));
        }
    }
    Ok(out)
}

fn squarefree_q(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let mut out = Vec::new();
    let mut c = f.gcd(&f.derivative())?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c)?;
        let z = w.exact_div(&y)?;
        if !z.is_constant() {
            out.push((z.monic(), i));
        }
        c = c.exact_div(&y)?;
        w = y;
        i += 1;
    }
    Ok(out)
}

/// Primitive integer coefficients proportional to `f`.
fn primitive_integer(f: &Poly) -> Vec<BigInt> {
    let rats: Vec<&BigRational> = f.coeffs().iter().map(|c| c.as_rational().unwrap()).collect();
    let den = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (*r * &den).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| x / &content).collect()
}

fn eval_int(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    if let Some(m) = n.to_u64() {
        let mut d = 1u64;
        while d.saturating_mul(d) <= m {
            if m % d == 0 {
                small.push(BigInt::from(d));
                if d * d != m {
                    large.push(BigInt::from(m / d));
                }
            }
            d += 1;
        }
    } else {
        // beyond u64 only the trivial divisors are tried
        small.push(BigInt::one());
        large.push(n);
    }
    small.extend(large.into_iter().rev());
    small
}

fn factor_squarefree_q(f: &Poly) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    let mut g = f.clone();
    // rational roots
    if g.coeff(0).is_zero() {
        out.push(Poly::t(Field::Q));
        g = g.exact_div(&Poly::t(Field::Q))?;
    }
    if g.deg() >= 1 {
        let ints = primitive_integer(&g);
        let nums = positive_divisors(&ints[0]);
        let dens = positive_divisors(ints.last().unwrap());
        'outer: for a in &nums {
            for b in &dens {
                for sign in [1, -1] {
                    let r = BigRational::new(a * BigInt::from(sign), b.clone());
                    let s = Scalar::Rat(r);
                    if g.deg() >= 1 && g.eval(&s).is_zero() {
                        let lin = Poly::linear(-&s);
                        g = g.exact_div(&lin)?;
                        out.push(lin);
                        if g.deg() < 1 {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    // quadratic factors
    while g.deg() >= 4 {
        match kronecker_quadratic(&g)? {
            Some(h) => {
                g = g.exact_div(&h)?;
                out.push(h);
            }
            None => break,
        }
    }
    match g.deg() {
        0 => {}
        1..=5 => out.push(g),
        d => {
            return Err(Error::FactorizationUnavailable(format!(
                "{g} (degree {d}, no factor of degree <= 2)"
            )))
        }
    }
    Ok(out)
}

/// Searches a quadratic divisor through the values at 0, 1 and -1.
fn kronecker_quadratic(g: &Poly) -> Result<Option<Poly>> {
    let ints = primitive_integer(g);
    let pts = [BigInt::zero(), BigInt::one(), -BigInt::one(), BigInt::from(2)];
    let vals: Vec<BigInt> = pts.iter().map(|x| eval_int(&ints, x)).collect();
    let d0s = positive_divisors(&vals[0]);
    let d1s = positive_divisors(&vals[1]);
    let dms = positive_divisors(&vals[2]);
    let lead = ints.last().unwrap().clone();
    let two = BigInt::from(2);
    for d0 in &d0s {
        for d1 in d1s.iter().flat_map(|d| [d.clone(), -d]) {
            for dm in dms.iter().flat_map(|d| [d.clone(), -d]) {
                let s = &d1 + &dm;
                if s.is_odd() {
                    continue;
                }
                let alpha = &s / &two - d0;
                let beta = (&d1 - &dm) / &two;
                if alpha.is_zero() || !(&lead % &alpha).is_zero() {
                    continue;
                }
                let h2 = &alpha * BigInt::from(4) + &beta * &two + d0;
                if h2.is_zero() || !(&vals[3] % &h2).is_zero() {
                    continue;
                }
                let h = Poly::new(
                    Field::Q,
                    [d0.clone(), beta, alpha]
                        .into_iter()
                        .map(|x| Scalar::Rat(BigRational::from_integer(x)))
                        .collect(),
                )
                .monic();
                if h.divides(g) {
                    return Ok(Some(h));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, c: &[i64]) -> Poly {
        Poly::from_ints(Field::Prime(p), c)
    }

    fn q(c: &[i64]) -> Poly {
        Poly::from_ints(Field::Q, c)
    }

    /// Trial division by every monic polynomial of degree 1..=deg/2.
    fn brute_irreducible(f: &Poly) -> bool {
        let field = f.field();
        let p = field.order().unwrap();
        let n = f.deg();
        for d in 1..=n / 2 {
            let total = p.pow(d as u32);
            for code in 0..total {
                let mut c = code;
                let mut coeffs = Vec::new();
                for _ in 0..d {
                    coeffs.push(field.int((c % p) as i64));
                    c /= p;
                }
                coeffs.push(field.one());
                if Poly::new(field, coeffs).divides(f) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn small_examples() {
        assert_eq!(factor_irreducibles(&q(&[-1, 0, 1])).unwrap(), vec![(q(&[-1, 1]), 1), (q(&[1, 1]), 1)]);
        assert_eq!(factor_irreducibles(&fp(2, &[1, 1, 1])).unwrap(), vec![(fp(2, &[1, 1, 1]), 1)]);
        assert_eq!(factor_irreducibles(&fp(2, &[1, 0, 1, 0, 1])).unwrap(), vec![(fp(2, &[1, 1, 1]), 2)]);
    }

    #[test]
    fn rational_quadratics_and_quartics() {
        let f = &q(&[1, 0, 1]) * &q(&[2, 0, 1]);
        assert_eq!(factor_irreducibles(&f).unwrap(), vec![(q(&[1, 0, 1]), 1), (q(&[2, 0, 1]), 1)]);
        let g = &(&q(&[1, 0, 1]).pow(2) * &q(&[-3, 2])).monic() * &q(&[0, 1]);
        let fac = factor_irreducibles(&g).unwrap();
        assert_eq!(fac.len(), 3);
        // irreducible quartic t^4 + 1 and quintic t^5 - t - 1 are certified
        assert_eq!(factor_irreducibles(&q(&[1, 0, 0, 0, 1])).unwrap().len(), 1);
        assert!(is_irreducible(&q(&[-1, -1, 0, 0, 0, 1])).unwrap());
    }

    #[test]
    fn big_rational_needs_hint() {
        let cyc7 = q(&[1, 1, 1, 1, 1, 1, 1]);
        assert!(matches!(factor_irreducibles(&cyc7), Err(Error::FactorizationUnavailable(_))));
        let hint = FactorHint(vec![cyc7.clone()]);
        let f = &cyc7 * &q(&[-1, 1]);
        assert_eq!(factor_with_hint(&f, &hint).unwrap(), vec![(q(&[-1, 1]), 1), (cyc7, 1)]);
    }

    #[test]
    fn matches_trial_division_over_small_fields() {
        for p in [2u64, 3] {
            let field = Field::Prime(p);
            for deg in 1..=5u32 {
                for code in 0..p.pow(deg) {
                    let mut c = code;
                    let mut coeffs = Vec::new();
                    for _ in 0..deg {
                        coeffs.push(field.int((c % p) as i64));
                        c /= p;
                    }
                    coeffs.push(field.one());
                    let f = Poly::new(field, coeffs);
                    let fac = factor_irreducibles(&f).unwrap();
                    for (g, _) in &fac {
                        assert!(brute_irreducible(g), "{g} over F{p}");
                    }
                    assert_eq!(is_irreducible(&f).unwrap(), brute_irreducible(&f));
                }
            }
        }
    }

    #[test]
    fn equal_degree_products_split() {
        // (t^2+1)(t^2+t+2)(t^2+2t+2) over F3: three distinct irreducible quadratics
        let f = &(&fp(3, &[1, 0, 1]) * &fp(3, &[2, 1, 1])) * &fp(3, &[2, 2, 1]);
        let fac = factor_irreducibles(&f).unwrap();
        assert_eq!(fac.len(), 3);
        assert!(fac.iter().all(|(g, e)| g.deg() == 2 && *e == 1));
    }
}
