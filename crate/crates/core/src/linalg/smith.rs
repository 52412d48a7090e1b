//! Smith normal form of `tI - A` over `F[t]`.

use super::mat::Mat;
use crate::algebra::{Field, Poly};
use crate::error::Result;

/// Invariant factors `f_1 | f_2 | ... | f_r`, all monic and nonconstant.
pub fn invariant_factors(a: &Mat) -> Result<Vec<Poly>> {
    a.require_square("invariant_factors")?;
    let f = a.field();
    let n = a.rows();
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -a.get(i, j);
                    if i == j {
                        Poly::linear(c)
                    } else {
                        Poly::constant(c)
                    }
                })
                .collect()
        })
        .collect();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            // minimal degree pivot, lowest (row, col) on ties
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(k) {
                for (j, e) in row.iter().enumerate().skip(k) {
                    if let Some(d) = e.degree() {
                        if best.is_none_or(|(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                // remaining block is zero; cannot happen for tI - A
                diag.push(Poly::zero(f));
                break;
            };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let lc = m[k][k].lead().unwrap().inv().unwrap();
            for e in m[k].iter_mut().skip(k) {
                *e = e.scale(&lc);
            }
            let mut dirty = false;
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let (q, r) = m[i][k].div_rem(&m[k][k])?;
                for j in k..n {
                    let t = &m[i][j] - &(&q * &m[k][j]);
                    m[i][j] = t;
                }
                debug_assert_eq!(m[i][k], r);
                dirty |= !r.is_zero();
            }
            for j in k + 1..n {
                if m[k][j].is_zero() {
                    continue;
                }
                let (q, r) = m[k][j].div_rem(&m[k][k])?;
                for i in k..n {
                    let t = &m[i][j] - &(&q * &m[i][k]);
                    m[i][j] = t;
                }
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            // pivot must divide the rest of the block
            let bad = (k + 1..n).find_map(|i| {
                (k + 1..n).find(|&j| !m[k][k].divides(&m[i][j])).map(|_| i)
            });
            match bad {
                Some(i) => {
                    for j in k..n {
                        let t = &m[k][j] + &m[i][j];
                        m[k][j] = t;
                    }
                }
                None => {
                    diag.push(m[k][k].clone());
                    break;
                }
            }
        }
    }
    Ok(diag.into_iter().filter(|p| !p.is_constant()).collect())
}

/// Product of the invariant factors, which is the characteristic polynomial.
pub fn product(factors: &[Poly], field: Field) -> Poly {
    factors.iter().fold(Poly::one(field), |acc, p| &acc * p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(Field::Q, c)
    }

    #[test]
    fn zero_two_by_two() {
        let z = Mat::zeros(Field::Q, 2, 2);
        assert_eq!(invariant_factors(&z).unwrap(), vec![p(&[0, 1]), p(&[0, 1])]);
    }

    #[test]
    fn single_jordan_block() {
        let j = Mat::jordan(&Field::Q.zero(), 3);
        assert_eq!(invariant_factors(&j).unwrap(), vec![p(&[0, 0, 0, 1])]);
    }

    #[test]
    fn identity_and_empty() {
        let i = Mat::identity(Field::Q, 2);
        assert_eq!(invariant_factors(&i).unwrap(), vec![p(&[-1, 1]), p(&[-1, 1])]);
        assert!(invariant_factors(&Mat::zeros(Field::Q, 0, 0)).unwrap().is_empty());
    }

    #[test]
    fn diagonal_merges_coprime_parts() {
        let a = Mat::diag(Field::Q, &[Field::Q.int(1), Field::Q.int(2), Field::Q.int(1)]);
        assert_eq!(
            invariant_factors(&a).unwrap(),
            vec![p(&[-1, 1]), &p(&[-1, 1]) * &p(&[-2, 1])]
        );
    }
}
