//! Exhaustive oracles over small prime fields.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Field, Poly};
use crate::decompose::{decide, DecompKind};
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Largest scan allowed without an override, `3^9`.
pub const DEFAULT_BUDGET: u64 = 19_683;
/// Hard cap on `q^{n^2}`.
pub const HARD_CAP: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_matrices: u64,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { max_matrices: DEFAULT_BUDGET }
    }
}

impl Budget {
    pub fn with_override(max: u64) -> Budget {
        Budget { max_matrices: max.min(HARD_CAP) }
    }
}

fn space_size(field: Field, n: usize, budget: Budget) -> Result<u64> {
    let q = field
        .order()
        .ok_or_else(|| Error::Precondition("oracles need a finite prime field".into()))?;
    let cells = u32::try_from(n * n).map_err(|_| Error::Budget("matrix size too large".into()))?;
    let size = q.checked_pow(cells).filter(|&s| s <= HARD_CAP.min(budget.max_matrices));
    size.ok_or_else(|| {
        Error::Budget(format!("{field}: {q}^{} matrices exceed the budget of {}", n * n, budget.max_matrices))
    })
}

/// The `idx`-th matrix in lexicographic row-major order.
pub fn matrix_at(field: Field, n: usize, idx: u64) -> Mat {
    let q = field.order().expect("finite field");
    let mut digits = vec![0u64; n * n];
    let mut x = idx;
    for d in digits.iter_mut().rev() {
        *d = x % q;
        x /= q;
    }
    let mut m = Mat::zeros(field, n, n);
    for (k, d) in digits.into_iter().enumerate() {
        m.set(k / n, k % n, field.int(d as i64));
    }
    m
}

/// All matrices (lexicographic order) satisfying `pred`, scanned in parallel.
fn scan(field: Field, n: usize, budget: Budget, pred: impl Fn(&Mat) -> bool + Sync) -> Result<Vec<Mat>> {
    let size = space_size(field, n, budget)?;
    Ok((0..size).into_par_iter().map(|i| matrix_at(field, n, i)).filter(|m| pred(m)).collect())
}

pub fn enumerate_quadratic(field: Field, n: usize, p: &Poly) -> Result<Vec<Mat>> {
    enumerate_quadratic_with_budget(field, n, p, Budget::default())
}

pub fn enumerate_quadratic_with_budget(field: Field, n: usize, p: &Poly, budget: Budget) -> Result<Vec<Mat>> {
    if p.degree() != Some(2) {
        return Err(Error::Precondition(format!("{p} does not have degree 2")));
    }
    field.check(p.field())?;
    scan(field, n, budget, |m| m.eval_poly(p).map(|x| x.is_zero()).unwrap_or(false))
}

pub fn annihilator(kind: DecompKind, field: Field) -> Poly {
    match kind {
        DecompKind::SquareZeroSum => Poly::monomial(field.one(), 2),
        DecompKind::InvolutionProduct => Poly::from_ints(field, &[-1, 0, 1]),
        DecompKind::Unipotent2Product => Poly::from_ints(field, &[1, -2, 1]),
    }
}

pub fn oracle_set(field: Field, n: usize, kind: DecompKind) -> Result<BTreeSet<Mat>> {
    oracle_set_with_budget(field, n, kind, Budget::default())
}

pub fn oracle_set_with_budget(field: Field, n: usize, kind: DecompKind, budget: Budget) -> Result<BTreeSet<Mat>> {
    let quad = enumerate_quadratic_with_budget(field, n, &annihilator(kind, field), budget)?;
    let pieces: Vec<BTreeSet<Mat>> =
        quad.par_iter().map(|a| quad.iter().map(|b| kind.combine(a, b)).collect()).collect();
    Ok(pieces.into_iter().flatten().collect())
}

/// Whether `set` is stable under conjugation by the elementary generators of `GL_n`.
pub fn conjugation_closed(set: &BTreeSet<Mat>, field: Field, n: usize) -> bool {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut e = Mat::identity(field, n);
                e.set(i, j, field.one());
                gens.push(e);
            }
        }
        if let Some(elts) = field.elements() {
            for c in elts.filter(|c| !c.is_zero() && !c.is_one()) {
                let mut d = Mat::identity(field, n);
                d.set(i, i, c);
                gens.push(d);
            }
        }
    }
    set.iter().all(|m| {
        gens.iter().all(|g| {
            let gi = g.inverse().expect("generators are invertible");
            set.contains(&(&(g * m) * &gi))
        })
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub kind: DecompKind,
    pub matrix: Vec<Vec<String>>,
    pub oracle: bool,
    pub decision: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassCount {
    pub kind: DecompKind,
    /// Matrices the decision procedure was run on.
    pub candidates: usize,
    pub oracle_size: usize,
    pub decided_true: usize,
    /// trace 0 / det = +-1 / det = 1 on every oracle member.
    pub screen_passes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub field: String,
    pub n: usize,
    pub class_counts: Vec<ClassCount>,
    pub mismatches: Vec<Mismatch>,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn screen(kind: DecompKind, m: &Mat) -> bool {
    let f = m.field();
    match kind {
        DecompKind::SquareZeroSum => m.trace().is_zero(),
        DecompKind::InvolutionProduct => m.det().is_ok_and(|d| d.is_one() || d == f.int(-1)),
        DecompKind::Unipotent2Product => m.det().is_ok_and(|d| d.is_one()),
    }
}

fn literal_rows(m: &Mat) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

/// Compares each decision procedure with its oracle on every matrix (invertible ones for products).
pub fn cross_check(field: Field, n: usize) -> Result<OracleReport> {
    cross_check_kinds(field, n, &[DecompKind::SquareZeroSum, DecompKind::InvolutionProduct, DecompKind::Unipotent2Product], Budget::default())
}

pub fn cross_check_kinds(field: Field, n: usize, kinds: &[DecompKind], budget: Budget) -> Result<OracleReport> {
    let all = scan(field, n, budget, |_| true)?;
    let mut class_counts = Vec::new();
    let mut mismatches = Vec::new();
    for &kind in kinds {
        let set = oracle_set_with_budget(field, n, kind, budget)?;
        let candidates: Vec<&Mat> = match kind {
            DecompKind::SquareZeroSum => all.iter().collect(),
            _ => all.iter().filter(|m| m.is_invertible()).collect(),
        };
        let decided: Vec<Result<bool>> = candidates.par_iter().map(|m| decide(kind, m).map(|d| d.holds)).collect();
        let mut decided_true = 0;
        for (m, d) in candidates.iter().zip(decided) {
            let d = d?;
            decided_true += usize::from(d);
            let o = set.contains(*m);
            if o != d {
                mismatches.push(Mismatch { kind, matrix: literal_rows(m), oracle: o, decision: d });
            }
        }
        class_counts.push(ClassCount {
            kind,
            candidates: candidates.len(),
            oracle_size: set.len(),
            decided_true,
            screen_passes: set.iter().all(|m| screen(kind, m)),
        });
    }
    Ok(OracleReport { field: field.to_string(), n, class_counts, mismatches })
}
