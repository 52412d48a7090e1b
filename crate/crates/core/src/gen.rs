//! Random instances for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{h_transform, is_irreducible, parity_class, reciprocal, r_transform, Field, Parity, Poly, Scalar};
use crate::decompose::DecompKind;
use crate::kaplansky::realize_invariants;
use crate::linalg::Mat;

/// Uniform over a prime field; small numerators and denominators over Q.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R, f: Field) -> Scalar {
    match f {
        Field::Prime(p) => f.int(rng.gen_range(0..p) as i64),
        Field::Rationals => {
            if rng.gen_bool(0.7) {
                f.int(rng.gen_range(-3..=3))
            } else {
                f.ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3)).expect("nonzero denominator")
            }
        }
    }
}

pub fn nonzero_scalar<R: Rng + ?Sized>(rng: &mut R, f: Field) -> Scalar {
    loop {
        let x = scalar(rng, f);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, f: Field, rows: usize, cols: usize) -> Mat {
    let mut m = Mat::zeros(f, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, scalar(rng, f));
        }
    }
    m
}

/// Random invertible matrix as `P L U` with unit-free triangular factors.
pub fn invertible<R: Rng + ?Sized>(rng: &mut R, f: Field, n: usize) -> Mat {
    let mut l = Mat::identity(f, n);
    let mut u = Mat::zeros(f, n, n);
    for i in 0..n {
        u.set(i, i, nonzero_scalar(rng, f));
        for j in 0..n {
            if j < i {
                l.set(i, j, scalar(rng, f));
            } else if j > i {
                u.set(i, j, scalar(rng, f));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let p = Mat::identity(f, n).select_columns(&perm);
    &(&p * &l) * &u
}

pub fn conjugate<R: Rng + ?Sized>(rng: &mut R, a: &Mat) -> Mat {
    let s = invertible(rng, a.field(), a.rows());
    &(&s * a) * &s.inverse().expect("invertible")
}

/// Random monic irreducible of degree `d`. Over Q only degrees 1 and 2 are produced.
pub fn irreducible<R: Rng + ?Sized>(rng: &mut R, f: Field, d: usize) -> Poly {
    let d = if f == Field::Q { d.clamp(1, 2) } else { d.max(1) };
    loop {
        let mut cs: Vec<Scalar> = (0..d).map(|_| scalar(rng, f)).collect();
        cs.push(f.one());
        let p = Poly::new(f, cs);
        if is_irreducible(&p).unwrap_or(false) {
            return p;
        }
    }
}

/// Table `kappa` with `sum (k+1) kappa_k d <= budget`, using only the indices `allowed(k)`.
pub fn table<R: Rng + ?Sized>(rng: &mut R, d: usize, budget: usize, allowed: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut kappa = Vec::new();
    let mut left = budget;
    for _ in 0..4 {
        let ks: Vec<usize> = (0..left / d.max(1)).filter(|&k| allowed(k) && (k + 1) * d <= left).collect();
        let Some(&k) = ks.choose(rng) else { break };
        if kappa.len() <= k {
            kappa.resize(k + 1, 0);
        }
        kappa[k] += 1;
        left -= (k + 1) * d;
        if rng.gen_bool(0.4) {
            break;
        }
    }
    kappa
}

fn dim_of(kappa: &[usize], d: usize) -> usize {
    kappa.iter().enumerate().map(|(k, m)| (k + 1) * m * d).sum()
}

/// A matrix of size `<= max_n` satisfying the criterion of `kind`, assembled from realized tables
/// and conjugated at random.
pub fn yes_instance<R: Rng + ?Sized>(rng: &mut R, f: Field, kind: DecompKind, max_n: usize) -> Mat {
    let char2 = f.characteristic() == 2;
    let mut blocks: Vec<Mat> = Vec::new();
    let mut left = max_n;
    let mut attempts = 0;
    while left > 0 && attempts < 12 {
        attempts += 1;
        let deg = rng.gen_range(1..=left.min(3));
        let p = irreducible(rng, f, deg);
        let d = p.deg();
        let push = |q: &Poly, kappa: &[usize], blocks: &mut Vec<Mat>| {
            blocks.push(realize_invariants(q, kappa).expect("valid table"));
        };
        match kind {
            DecompKind::SquareZeroSum => {
                let even_or_t = p == Poly::t(f) || parity_class(&p) == Parity::Even;
                if even_or_t {
                    let k = table(rng, d, left, |_| true);
                    left -= dim_of(&k, d);
                    push(&p, &k, &mut blocks);
                } else if char2 {
                    let k = table(rng, d, left, |k| k % 2 == 1);
                    left -= dim_of(&k, d);
                    push(&p, &k, &mut blocks);
                } else {
                    let q = h_transform(&p, &f.int(-1)).expect("monic");
                    let k = table(rng, d, left / 2, |_| true);
                    left -= 2 * dim_of(&k, d);
                    push(&p, &k, &mut blocks);
                    push(&q, &k, &mut blocks);
                }
            }
            DecompKind::InvolutionProduct | DecompKind::Unipotent2Product => {
                if p == Poly::t(f) {
                    continue;
                }
                let q = reciprocal(&p).expect("p(0) != 0");
                let tp1 = Poly::linear(f.one());
                if q == p {
                    let restrict = kind == DecompKind::Unipotent2Product && p == tp1 && !char2;
                    let k = table(rng, d, left, |k| !restrict || k % 2 == 1);
                    left -= dim_of(&k, d);
                    push(&p, &k, &mut blocks);
                } else {
                    let k = table(rng, d, left / 2, |_| true);
                    left -= 2 * dim_of(&k, d);
                    push(&p, &k, &mut blocks);
                    push(&q, &k, &mut blocks);
                }
            }
        }
    }
    let a = Mat::block_diag(f, &blocks);
    conjugate(rng, &a)
}

/// A self-reciprocal prime other than `t +- 1`, as `R_1(q)` for an irreducible `q`.
pub fn r1_image_prime<R: Rng + ?Sized>(rng: &mut R, f: Field, d: usize) -> Option<Poly> {
    for _ in 0..50 {
        let q = irreducible(rng, f, d);
        let p = r_transform(&q, &f.one()).ok()?;
        if is_irreducible(&p).unwrap_or(false) {
            return Some(p);
        }
    }
    None
}

pub fn upper_triangular_pm1<R: Rng + ?Sized>(rng: &mut R, f: Field, n: usize) -> Mat {
    let mut m = Mat::zeros(f, n, n);
    for i in 0..n {
        m.set(i, i, if rng.gen_bool(0.5) { f.one() } else { f.int(-1) });
        for j in i + 1..n {
            m.set(i, j, scalar(rng, f));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::decide;
    use rand::SeedableRng;

    #[test]
    fn yes_instances_satisfy_criteria() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for f in [Field::Prime(2), Field::Prime(3), Field::Prime(5), Field::Q] {
            for kind in [DecompKind::SquareZeroSum, DecompKind::InvolutionProduct, DecompKind::Unipotent2Product] {
                for _ in 0..5 {
                    let a = yes_instance(&mut rng, f, kind, 6);
                    assert!(a.rows() <= 6);
                    assert!(decide(kind, &a).unwrap().holds, "{kind:?} over {f}: {a}");
                }
            }
        }
    }

    #[test]
    fn invertible_is_invertible() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for n in 0..6 {
            assert!(invertible(&mut rng, Field::Prime(2), n).is_invertible());
        }
    }
}
