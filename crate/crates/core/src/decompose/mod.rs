//! Decision procedures and verified witnesses for the three decomposition problems.

mod pieces;
mod products;
mod split;

use serde::{Deserialize, Serialize};

use crate::algebra::{is_quasi_palindromial, parity_class, Field, Parity, Poly};
use crate::error::{Error, Result};
use crate::kaplansky::kaplansky_invariants;
use crate::linalg::{elementary_divisors, invariant_factors, similar_to_inverse, similar_to_opposite, Mat};

pub use products::{
    involution_pair, involution_pair_with_hint, unipotent2_pair, unipotent2_pair_with_hint,
    upper_triangular_pm1_involutions, upper_triangular_pm1_involutions_with_hint,
};
pub use split::{exchange_split, exchange_split_with_hint, squarezero_pair, squarezero_pair_with_hint, ExchangeSplit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecompKind {
    SquareZeroSum,
    InvolutionProduct,
    Unipotent2Product,
}

impl DecompKind {
    pub fn short_name(self) -> &'static str {
        match self {
            DecompKind::SquareZeroSum => "sum2sz",
            DecompKind::InvolutionProduct => "inv2",
            DecompKind::Unipotent2Product => "unip2",
        }
    }

    pub fn from_short(s: &str) -> Option<DecompKind> {
        match s {
            "sum2sz" | "SquareZeroSum" => Some(DecompKind::SquareZeroSum),
            "inv2" | "InvolutionProduct" => Some(DecompKind::InvolutionProduct),
            "unip2" | "Unipotent2Product" => Some(DecompKind::Unipotent2Product),
            _ => None,
        }
    }

    /// Whether `m` is a single quadratic element of this kind.
    pub fn is_factor(self, m: &Mat) -> bool {
        let id = Mat::identity(m.field(), m.rows());
        match self {
            DecompKind::SquareZeroSum => (m * m).is_zero(),
            DecompKind::InvolutionProduct => (m * m).is_identity(),
            DecompKind::Unipotent2Product => {
                let x = m - &id;
                (&x * &x).is_zero()
            }
        }
    }

    pub fn combine(self, a: &Mat, b: &Mat) -> Mat {
        match self {
            DecompKind::SquareZeroSum => a + b,
            _ => a * b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompWitness {
    pub kind: DecompKind,
    pub first: Mat,
    pub second: Mat,
    pub verified: bool,
}

impl DecompWitness {
    pub fn check(&self, u: &Mat) -> bool {
        self.first.field() == u.field()
            && self.first.rows() == u.rows()
            && self.second.rows() == u.rows()
            && self.first.is_square()
            && self.second.is_square()
            && self.kind.is_factor(&self.first)
            && self.kind.is_factor(&self.second)
            && &self.kind.combine(&self.first, &self.second) == u
    }

    /// Builds a witness and recomputes the defining identities; failure is an error.
    pub fn verified(kind: DecompKind, first: Mat, second: Mat, u: &Mat) -> Result<DecompWitness> {
        let mut w = DecompWitness { kind, first, second, verified: false };
        if !w.check(u) {
            return Err(Error::VerificationFailed(format!("{kind:?} witness")));
        }
        w.verified = true;
        Ok(w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub holds: bool,
    pub reason: String,
    /// Invariant factors (or prime powers) that violate the criterion.
    pub offending: Vec<Poly>,
}

fn list(ps: &[Poly]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn decide_sum_two_squarezero(a: &Mat) -> Result<Decision> {
    a.require_square("decide_sum_two_squarezero")?;
    let fs = invariant_factors(a)?;
    let offending: Vec<Poly> = fs.iter().filter(|p| parity_class(p) == Parity::Neither).cloned().collect();
    let holds = offending.is_empty();
    let cross = if a.field().characteristic() == 2 {
        // every prime p != t (none is even over F_2) occurs with even exponents only
        elementary_divisors(a)?
            .iter()
            .all(|(p, k)| *p == Poly::t(a.field()) || parity_class(p) == Parity::Even || k % 2 == 0)
    } else {
        similar_to_opposite(a)?
    };
    if cross != holds {
        return Err(Error::Internal("sum criterion disagrees with its cross-check".into()));
    }
    let reason = if holds {
        "every invariant factor is even or odd".to_string()
    } else {
        format!("invariant factors neither even nor odd: {}", list(&offending))
    };
    Ok(Decision { holds, reason, offending })
}

fn require_invertible(a: &Mat, what: &str) -> Result<()> {
    a.require_square(what)?;
    if a.is_invertible() {
        Ok(())
    } else {
        Err(Error::Singular)
    }
}

pub fn decide_product_two_involutions(a: &Mat) -> Result<Decision> {
    require_invertible(a, "decide_product_two_involutions")?;
    let fs = invariant_factors(a)?;
    let mut offending = Vec::new();
    for p in &fs {
        if !is_quasi_palindromial(p)? {
            offending.push(p.clone());
        }
    }
    let holds = offending.is_empty();
    let inverse_similar = invariant_factors(&a.inverse()?)? == fs;
    if inverse_similar != holds || similar_to_inverse(a)? != holds {
        return Err(Error::Internal("involution criterion disagrees with similarity to the inverse".into()));
    }
    let reason = if holds {
        "every invariant factor is a quasi-palindromial".to_string()
    } else {
        format!("invariant factors not fixed by the reciprocal: {}", list(&offending))
    };
    Ok(Decision { holds, reason, offending })
}

pub fn decide_product_two_unipotent2(a: &Mat) -> Result<Decision> {
    require_invertible(a, "decide_product_two_unipotent2")?;
    let field = a.field();
    if field.characteristic() == 2 {
        let mut d = decide_product_two_involutions(a)?;
        d.reason = format!("characteristic 2, index-2 unipotents are involutions: {}", d.reason);
        return Ok(d);
    }
    let inv = decide_product_two_involutions(a)?;
    let tp1 = Poly::linear(field.one());
    let fs = invariant_factors(a)?;
    let odd_powers: Vec<Poly> =
        fs.iter().map(|f| f.multiplicity(&tp1)).filter(|k| k % 2 == 1).map(|k| tp1.pow(k)).collect();
    let kap = kaplansky_invariants(a, &tp1)?;
    let even_vanish = kap.kappa.iter().step_by(2).all(|&k| k == 0);
    if even_vanish != odd_powers.is_empty() {
        return Err(Error::Internal("(t+1)-exponents disagree with the Kaplansky table".into()));
    }
    let holds = inv.holds && odd_powers.is_empty();
    let reason = if !inv.holds {
        inv.reason.clone()
    } else if !odd_powers.is_empty() {
        format!("odd powers of t+1 among the elementary divisors: {}", list(&odd_powers))
    } else {
        "similar to its inverse, and every power of t+1 is even".to_string()
    };
    let mut offending = inv.offending;
    offending.extend(odd_powers);
    Ok(Decision { holds, reason, offending })
}

pub fn decide(kind: DecompKind, a: &Mat) -> Result<Decision> {
    match kind {
        DecompKind::SquareZeroSum => decide_sum_two_squarezero(a),
        DecompKind::InvolutionProduct => decide_product_two_involutions(a),
        DecompKind::Unipotent2Product => decide_product_two_unipotent2(a),
    }
}

pub fn construct(kind: DecompKind, a: &Mat) -> Result<DecompWitness> {
    construct_with_hint(kind, a, &crate::algebra::FactorHint::none())
}

pub fn construct_with_hint(kind: DecompKind, a: &Mat, hint: &crate::algebra::FactorHint) -> Result<DecompWitness> {
    match kind {
        DecompKind::SquareZeroSum => squarezero_pair_with_hint(a, hint),
        DecompKind::InvolutionProduct => involution_pair_with_hint(a, hint),
        DecompKind::Unipotent2Product => unipotent2_pair_with_hint(a, hint),
    }
}

/// Empty witness for the 0x0 matrix.
pub(crate) fn empty_witness(kind: DecompKind, field: Field) -> DecompWitness {
    let z = Mat::zeros(field, 0, 0);
    DecompWitness { kind, first: z.clone(), second: z, verified: true }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_decisions() {
        let q = Field::Q;
        assert!(decide_sum_two_squarezero(&Mat::jordan(&q.zero(), 2)).unwrap().holds);
        let f2 = Field::Prime(2);
        let c = Mat::companion(&Poly::from_ints(f2, &[1, 1, 1])).unwrap();
        assert!(!decide_sum_two_squarezero(&c).unwrap().holds);
        let d = decide_sum_two_squarezero(&Mat::identity(q, 2)).unwrap();
        assert!(!d.holds);
        assert_eq!(d.offending.len(), 2);
    }

    #[test]
    fn product_decisions() {
        let q = Field::Q;
        assert!(decide_product_two_involutions(&Mat::identity(q, 3)).unwrap().holds);
        let f5 = Field::Prime(5);
        assert!(!decide_product_two_involutions(&Mat::diag(f5, &[f5.int(2), f5.int(1)])).unwrap().holds);
        let c = Mat::companion(&Poly::from_ints(q, &[1, 1, 1])).unwrap();
        assert!(decide_product_two_involutions(&c).unwrap().holds);
        assert_eq!(decide_product_two_involutions(&Mat::zeros(q, 1, 1)), Err(Error::Singular));
    }

    #[test]
    fn unipotent_decisions() {
        let f3 = Field::Prime(3);
        assert!(decide_product_two_unipotent2(&Mat::jordan(&f3.int(-1), 2)).unwrap().holds);
        assert!(!decide_product_two_unipotent2(&Mat::scalar(&f3.int(-1), 2)).unwrap().holds);
        assert!(decide_product_two_unipotent2(&Mat::identity(f3, 2)).unwrap().holds);
    }
}
