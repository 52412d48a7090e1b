//! Lazily presented column-finite operators on a space with basis `(e_j)_{j >= 0}`.
//!
//! Operators are column generators; all checks are exact identities on leading windows.
//! For upper-triangular operators `span(e_0..e_{N-1})` is invariant, so a window is the
//! restriction to that subspace.

mod graph;
mod pattern;
mod sparse;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Field, Scalar};
use crate::decompose::{involution_pair, squarezero_pair, unipotent2_pair, DecompKind, DecompWitness};
use crate::error::{Error, Result};
use crate::linalg::Mat;

pub use graph::{
    core_stability_check, core_report, jordan_graph_exchange_split, jordan_graph_involution_pair,
    jordan_graph_squarezero_pair, jordan_graph_unipotent_pair, graph_window_report, Cell, CellSpec, CoreReport,
    Enumeration, GraphPair, JordanGraph, Node, Part,
};
pub use pattern::{appendix_core_trend, sparse_pattern_jordan_check, CoreSample, PatternVerdict};

/// Sparse column: `(row, value)` pairs, rows increasing, values nonzero.
pub type Column = Vec<(usize, Scalar)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Certificate {
    StrictlyUpperTriangular,
    /// Upper-triangular, diagonal allowed. Windows are still invariant.
    UpperTriangular,
    /// Nonzero entries satisfy `j - w <= i <= j`.
    Band(usize),
    JordanGraphForm,
}

type Generator = dyn Fn(usize) -> Column + Send + Sync;

#[derive(Clone)]
pub struct ColumnFiniteOp {
    field: Field,
    name: String,
    gen: Arc<Generator>,
    memo: Arc<Mutex<HashMap<usize, Arc<Column>>>>,
    certificates: Vec<Certificate>,
    /// `Some(d)` when the space is `span(e_0..e_{d-1})`.
    dim: Option<usize>,
}

impl fmt::Debug for ColumnFiniteOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColumnFiniteOp")
            .field("name", &self.name)
            .field("field", &self.field)
            .field("certificates", &self.certificates)
            .field("dim", &self.dim)
            .finish()
    }
}

fn normalize(field: Field, mut col: Column) -> Column {
    for (_, v) in col.iter() {
        debug_assert_eq!(v.field(), field);
    }
    col.sort_by_key(|(i, _)| *i);
    let mut out: Column = Vec::with_capacity(col.len());
    for (i, v) in col {
        match out.last_mut() {
            Some((j, w)) if *j == i => *w = &*w + &v,
            _ => out.push((i, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

impl ColumnFiniteOp {
    pub fn new<F>(field: Field, name: impl Into<String>, certificates: Vec<Certificate>, gen: F) -> ColumnFiniteOp
    where
        F: Fn(usize) -> Column + Send + Sync + 'static,
    {
        ColumnFiniteOp {
            field,
            name: name.into(),
            gen: Arc::new(gen),
            memo: Arc::new(Mutex::new(HashMap::new())),
            certificates,
            dim: None,
        }
    }

    pub fn with_dim(mut self, dim: Option<usize>) -> ColumnFiniteOp {
        self.dim = dim;
        self
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn certificates(&self) -> &[Certificate] {
        &self.certificates
    }

    pub fn has(&self, c: Certificate) -> bool {
        self.certificates.contains(&c)
    }

    pub fn is_strictly_upper_triangular(&self) -> bool {
        self.has(Certificate::StrictlyUpperTriangular) || self.has(Certificate::JordanGraphForm)
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.is_strictly_upper_triangular() || self.has(Certificate::UpperTriangular)
    }

    pub fn require_strict_ut(&self, what: &str) -> Result<()> {
        if self.is_strictly_upper_triangular() {
            Ok(())
        } else {
            Err(Error::MissingCertificate(format!("{what}: {} is not certified strictly upper-triangular", self.name)))
        }
    }

    /// Column `j`, memoized.
    pub fn column(&self, j: usize) -> Arc<Column> {
        if let Some(c) = self.memo.lock().expect("memo lock").get(&j) {
            return c.clone();
        }
        let col = match self.dim {
            Some(d) if j >= d => Vec::new(),
            _ => normalize(self.field, (self.gen)(j)),
        };
        let col = Arc::new(col);
        self.memo.lock().expect("memo lock").entry(j).or_insert(col).clone()
    }

    /// `u(v)` for a sparse vector `v`.
    pub fn apply(&self, v: &[(usize, Scalar)]) -> Column {
        let mut out = Vec::new();
        for (j, c) in v {
            for (i, x) in self.column(*j).iter() {
                out.push((*i, c * x));
            }
        }
        normalize(self.field, out)
    }

    fn window_size(&self, n: usize) -> usize {
        self.dim.map_or(n, |d| d.min(n))
    }

    /// Leading `N x N` block. Columns are evaluated in parallel.
    pub fn window(&self, n: usize) -> Mat {
        let n = self.window_size(n);
        let cols: Vec<Arc<Column>> = (0..n).into_par_iter().map(|j| self.column(j)).collect();
        let mut m = Mat::zeros(self.field, n, n);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter() {
                if *i < n {
                    m.set(*i, j, v.clone());
                }
            }
        }
        m
    }

    /// `self ∘ other`, lazily.
    pub fn compose(&self, other: &ColumnFiniteOp) -> ColumnFiniteOp {
        let (a, b) = (self.clone(), other.clone());
        let certs = if self.is_upper_triangular() && other.is_upper_triangular() {
            vec![Certificate::UpperTriangular]
        } else {
            Vec::new()
        };
        ColumnFiniteOp::new(self.field, format!("({})*({})", self.name, other.name), certs, move |j| {
            a.apply(&b.column(j))
        })
        .with_dim(self.dim.or(other.dim))
    }

    /// `c I + self`.
    pub fn shifted(&self, c: Scalar) -> ColumnFiniteOp {
        let a = self.clone();
        let certs = if self.is_upper_triangular() { vec![Certificate::UpperTriangular] } else { Vec::new() };
        ColumnFiniteOp::new(self.field, format!("{}+({})", c, self.name), certs, move |j| {
            let mut col = (*a.column(j)).clone();
            col.push((j, c.clone()));
            col
        })
        .with_dim(self.dim)
    }
}

/// The column-finite matrix of the monomial space spanned by `1` and `s^i t^j`, `0 <= i < j`,
/// in the basis `(1, t, t^2, s t^2, t^3, s t^3, s^2 t^3, ...)`, with `u(1) = 0`,
/// `u(t^j) = 1` and `u(s^i t^j) = s^{i-1} t^j`.
pub fn appendix_operator(field: Field) -> ColumnFiniteOp {
    let one = field.one();
    ColumnFiniteOp::new(field, "appendix_M", vec![Certificate::StrictlyUpperTriangular], move |j| {
        if j == 0 {
            Vec::new()
        } else if appendix_block_start(j) {
            vec![(0, one.clone())]
        } else {
            vec![(j - 1, one.clone())]
        }
    })
}

/// Whether `j = n(n+1)/2 + 1` for some `n >= 0`.
fn appendix_block_start(j: usize) -> bool {
    let mut n = 0usize;
    loop {
        let v = n * (n + 1) / 2 + 1;
        if v == j {
            return true;
        }
        if v > j {
            return false;
        }
        n += 1;
    }
}

/// Basis index of `s^i t^j` (`i < j`); index 0 is the monomial `1`.
pub fn appendix_index(i: usize, j: usize) -> usize {
    assert!(i < j, "s^{i} t^{j} is not a basis monomial");
    j * (j - 1) / 2 + 1 + i
}

/// Inverse of [`appendix_index`]; `None` for index 0.
pub fn appendix_monomial(idx: usize) -> Option<(usize, usize)> {
    if idx == 0 {
        return None;
    }
    let mut j = 1;
    while appendix_index(0, j + 1) <= idx {
        j += 1;
    }
    Some((idx - appendix_index(0, j), j))
}

/// `e_j -> e_{j-1}`, `e_0 -> 0`: one infinite Jordan cell.
pub fn shift(field: Field) -> ColumnFiniteOp {
    let one = field.one();
    ColumnFiniteOp::new(field, "shift", vec![Certificate::StrictlyUpperTriangular, Certificate::JordanGraphForm], move |j| {
        if j == 0 {
            Vec::new()
        } else {
            vec![(j - 1, one.clone())]
        }
    })
}

pub fn zero(field: Field) -> ColumnFiniteOp {
    ColumnFiniteOp::new(field, "zero", vec![Certificate::StrictlyUpperTriangular, Certificate::JordanGraphForm], |_| {
        Vec::new()
    })
}

pub fn named_operator(name: &str, field: Field) -> Result<ColumnFiniteOp> {
    match name {
        "appendix_M" => Ok(appendix_operator(field)),
        "shift" => Ok(shift(field)),
        "zero" => Ok(zero(field)),
        _ => Err(Error::Parse(format!("unknown operator {name:?}"))),
    }
}

/// `rank(window(op, N)^n)`.
pub fn range_power_dim(op: &ColumnFiniteOp, n: usize, window: usize) -> Result<usize> {
    op.require_strict_ut("range_power_dim")?;
    Ok(op.window(window).pow(n).rank())
}

/// Counts for the spanning set of `u^n(V)`, namely `1` and `s^i t^j` with `0 <= i < j - n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanningCount {
    /// Spanning monomials whose index lies in the window.
    pub in_window: usize,
    /// Spanning monomials reached from inside the window, i.e. `s^{i+n} t^j` is in the window too
    /// (plus `1` when some `s^{n-1} t^j` is). This is what the windowed rank sees.
    pub interior: usize,
}

pub fn appendix_spanning_count(n: usize, window: usize) -> SpanningCount {
    if n == 0 {
        return SpanningCount { in_window: window, interior: window };
    }
    let mut in_window = usize::from(window > 0);
    let mut source_of_one = false;
    let mut interior = 0;
    for idx in 1..window {
        let (i, j) = appendix_monomial(idx).expect("nonzero index");
        if i + n < j {
            in_window += 1;
            if appendix_index(i + n, j) < window {
                interior += 1;
            }
        }
        if i + 1 == n {
            source_of_one = true;
        }
    }
    SpanningCount { in_window, interior: interior + usize::from(source_of_one) }
}

/// The finite pipeline on a window: `u` itself for sums, `I + u` for products.
///
/// The witness is exact on `span(e_0..e_{N-1})`; it need not be the restriction of a witness
/// for a larger window.
pub fn strict_ut_windowed_decomposition(op: &ColumnFiniteOp, n: usize, kind: DecompKind) -> Result<DecompWitness> {
    op.require_strict_ut("strict_ut_windowed_decomposition")?;
    let w = op.window(n);
    let f = op.field();
    match kind {
        DecompKind::SquareZeroSum => squarezero_pair(&w),
        DecompKind::InvolutionProduct => involution_pair(&(&w + &Mat::identity(f, w.rows()))),
        DecompKind::Unipotent2Product => unipotent2_pair(&(&w + &Mat::identity(f, w.rows()))),
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WindowReport {
    pub n: usize,
    pub identities: Vec<(String, bool)>,
    pub data: serde_json::Map<String, serde_json::Value>,
}

impl WindowReport {
    pub fn new(n: usize) -> WindowReport {
        WindowReport { n, ..Default::default() }
    }

    pub fn record(&mut self, name: impl Into<String>, ok: bool) {
        self.identities.push((name.into(), ok));
    }

    pub fn put(&mut self, key: &str, v: impl Serialize) {
        self.data.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn all_pass(&self) -> bool {
        self.identities.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.identities.iter().filter(|(_, ok)| !ok).map(|(s, _)| s.as_str()).collect()
    }
}

/// Windowed table at the prime `t`; without stabilization `kappa_inf` is only a lower bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowedKaplansky {
    pub n: usize,
    pub kappa: Vec<usize>,
    pub kappa_inf_lower_bound: usize,
    pub stabilized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marker: Option<&'static str>,
}

pub fn windowed_kaplansky(op: &ColumnFiniteOp, n: usize) -> Result<WindowedKaplansky> {
    op.require_strict_ut("windowed_kaplansky")?;
    let w = op.window(n);
    let tab = crate::kaplansky::kaplansky_invariants(&w, &crate::algebra::Poly::t(op.field()))?;
    let stabilized = op.dim().is_some_and(|d| d <= n);
    Ok(WindowedKaplansky {
        n: w.rows(),
        kappa: tab.kappa,
        kappa_inf_lower_bound: tab.kappa_inf,
        stabilized,
        marker: if stabilized { None } else { Some("not_stabilized") },
    })
}
