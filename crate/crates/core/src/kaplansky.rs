//! Kaplansky invariants at finite indices.
//!
//! With `P = p(A)` and `W_k = P^k V`, the invariant `kappa_k` is the dimension over
//! `F[t]/(p)` of the kernel of `W_k / W_{k+1} -> W_{k+1} / W_{k+2}` induced by `P`.
//! Every quotient is handled through explicit bases and dimension counts.

use serde::Serialize;

use crate::algebra::{is_irreducible_with_hint, FactorHint, Poly};
use crate::error::{Error, Result};
use crate::linalg::{subspace, Mat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KaplanskyTable {
    #[serde(skip)]
    pub p: Poly,
    pub kappa: Vec<usize>,
    pub kappa_inf: usize,
}

impl KaplanskyTable {
    pub fn kappa(&self, k: usize) -> usize {
        self.kappa.get(k).copied().unwrap_or(0)
    }

    /// Dimension of the `p`-primary part the table describes.
    pub fn primary_dim(&self) -> usize {
        let d = self.p.deg();
        self.kappa.iter().enumerate().map(|(k, m)| (k + 1) * m * d).sum()
    }
}

/// Image chain `W_0 = V, W_1, ...` up to and including the first repeated dimension.
pub struct ImageChain {
    pub pa: Mat,
    pub chain: Vec<Mat>,
}

impl ImageChain {
    pub fn new(a: &Mat, p: &Poly) -> Result<ImageChain> {
        let pa = a.eval_poly(p)?;
        let mut chain = vec![Mat::identity(a.field(), a.rows())];
        loop {
            let next = subspace::image(&pa, chain.last().unwrap());
            let stable = next.cols() == chain.last().unwrap().cols();
            chain.push(next);
            if stable {
                break;
            }
        }
        Ok(ImageChain { pa, chain })
    }

    /// `W_k`; the chain is constant past its stabilization point.
    pub fn w(&self, k: usize) -> &Mat {
        &self.chain[k.min(self.chain.len() - 1)]
    }

    pub fn stable(&self) -> &Mat {
        self.chain.last().unwrap()
    }

    /// Index from which `W_k` no longer changes.
    pub fn length(&self) -> usize {
        self.chain.len() - 1
    }

    /// `dim {x in W_alpha : M x in W_beta}` for `M = P^l`.
    fn pulled_back_dim(&self, l: usize, alpha: usize, beta: usize) -> usize {
        let m = self.pa.pow(l);
        subspace::preimage_within(&m, self.w(alpha), self.w(beta)).cols()
    }
}

fn require_irreducible(p: &Poly, hint: &FactorHint) -> Result<()> {
    if p.is_monic() && !p.is_constant() && is_irreducible_with_hint(p, hint)? {
        Ok(())
    } else {
        Err(Error::NotIrreducible(p.to_string()))
    }
}

pub fn kaplansky_invariants(a: &Mat, p: &Poly) -> Result<KaplanskyTable> {
    kaplansky_invariants_with_hint(a, p, &FactorHint::none())
}

pub fn kaplansky_invariants_with_hint(a: &Mat, p: &Poly, hint: &FactorHint) -> Result<KaplanskyTable> {
    a.require_square("kaplansky_invariants")?;
    a.field().check(p.field())?;
    require_irreducible(p, hint)?;
    let d = p.deg();
    let ch = ImageChain::new(a, p)?;
    let mut kappa = Vec::new();
    for k in 0..ch.length() {
        let ker = ch.pulled_back_dim(1, k, k + 2) - ch.w(k + 1).cols();
        if ker % d != 0 {
            return Err(Error::Internal(format!("kernel dimension {ker} not a multiple of {d}")));
        }
        kappa.push(ker / d);
    }
    while kappa.last() == Some(&0) {
        kappa.pop();
    }
    let ker_p = ch.pa.kernel();
    let kappa_inf = subspace::intersect(&ker_p, ch.stable()).cols() / d;
    Ok(KaplanskyTable { p: p.clone(), kappa, kappa_inf })
}

/// `kappa_k` copies of the companion matrix of `p^{k+1}` for each `k`.
pub fn realize_invariants(p: &Poly, kappa: &[usize]) -> Result<Mat> {
    if !p.is_monic() || p.is_constant() {
        return Err(Error::Precondition(format!("realize_invariants: {p} is not monic nonconstant")));
    }
    let mut blocks = Vec::new();
    for (k, &m) in kappa.iter().enumerate() {
        let c = Mat::companion(&p.pow(k + 1))?;
        for _ in 0..m {
            blocks.push(c.clone());
        }
    }
    Ok(Mat::block_diag(p.field(), &blocks))
}

/// Companion matrix of a monic polynomial.
pub fn companion(p: &Poly) -> Result<Mat> {
    Mat::companion(p)
}

/// Kernel of `W_alpha / W_{alpha+k} -> W_{alpha+1} / W_{alpha+k+1}` against `d * sum_{j<k} kappa_{alpha+j}`.
pub fn check_sumdim(a: &Mat, p: &Poly, alpha: usize, k: usize) -> Result<bool> {
    check_supersumdim(a, p, alpha, k, 1)
}

/// The same identity for the map induced by `p(A)^l`, with the double sum over `i < l`, `j < k`.
pub fn check_supersumdim(a: &Mat, p: &Poly, alpha: usize, k: usize, l: usize) -> Result<bool> {
    a.require_square("check_supersumdim")?;
    if a.rows() == 0 {
        return Ok(true);
    }
    let table = kaplansky_invariants(a, p)?;
    let ch = ImageChain::new(a, p)?;
    let lhs = ch.pulled_back_dim(l, alpha, alpha + l + k) - ch.w(alpha + k).cols();
    let mut rhs = 0;
    for i in 0..l {
        for j in 0..k {
            rhs += table.kappa(alpha + i + j);
        }
    }
    Ok(lhs == p.deg() * rhs)
}

/// Rank formula `(r_k - 2 r_{k+1} + r_{k+2}) / d` with `r_k = rank p(A)^k`.
pub fn kappa_from_ranks(a: &Mat, p: &Poly, k: usize) -> Result<usize> {
    let pa = a.eval_poly(p)?;
    let r = |e: usize| pa.pow(e).rank();
    Ok((r(k) + r(k + 2) - 2 * r(k + 1)) / p.deg())
}
