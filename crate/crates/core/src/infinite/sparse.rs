//! Sparse echelon bases, keyed by the highest nonzero row.

use std::collections::BTreeMap;

use super::{normalize, Column, ColumnFiniteOp};
use crate::algebra::{Field, Scalar};

pub(crate) fn axpy(field: Field, x: &Column, c: &Scalar, y: &Column) -> Column {
    // x + c y
    let mut out = x.clone();
    out.extend(y.iter().map(|(i, v)| (*i, c * v)));
    normalize(field, out)
}

#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    field: Field,
    rows: BTreeMap<usize, Column>,
}

impl Echelon {
    pub fn new(field: Field) -> Echelon {
        Echelon { field, rows: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Column) -> bool {
        loop {
            let Some((p, c)) = v.last().cloned() else {
                return false;
            };
            match self.rows.get(&p) {
                Some(b) => {
                    let lead = &b.last().expect("nonzero basis vector").1;
                    let factor = -&(&c * &lead.inv().expect("nonzero lead"));
                    v = axpy(self.field, &v, &factor, b);
                }
                None => {
                    self.rows.insert(p, v);
                    return true;
                }
            }
        }
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Column> {
        self.rows.values()
    }

    /// Basis of the intersection with `span(e_0..e_{n-1})`.
    pub fn below(&self, n: usize) -> Vec<Column> {
        self.rows.range(..n).map(|(_, v)| v.clone()).collect()
    }
}

pub(crate) fn span_of(field: Field, vs: impl IntoIterator<Item = Column>) -> Echelon {
    let mut e = Echelon::new(field);
    for v in vs {
        e.insert(v);
    }
    e
}

pub(crate) fn image(op: &ColumnFiniteOp, e: &Echelon) -> Echelon {
    span_of(op.field(), e.vectors().map(|v| op.apply(v)).collect::<Vec<_>>())
}

pub(crate) fn unit(field: Field, j: usize) -> Column {
    vec![(j, field.one())]
}

/// `dim op^k(span(e_0..e_{n-1}))` for `k = 0, 1, ...` until the sequence stops decreasing.
pub(crate) fn rank_sequence(op: &ColumnFiniteOp, n: usize) -> Vec<usize> {
    let f = op.field();
    let mut e = span_of(f, (0..n).map(|j| unit(f, j)));
    let mut out = vec![e.len()];
    while e.len() > 0 {
        let next = image(op, &e);
        let stuck = next.len() == e.len();
        out.push(next.len());
        if stuck {
            break;
        }
        e = next;
    }
    out
}
