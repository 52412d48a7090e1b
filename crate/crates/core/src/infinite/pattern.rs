//! Sparsity patterns with at most one nonzero per row and column, and windowed core data.

use serde::Serialize;

use super::sparse::{image, span_of, unit};
use super::ColumnFiniteOp;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PatternVerdict {
    /// Chain lengths, listed by bottom node. Chains may be truncated by the window.
    Cells(Vec<usize>),
    RowViolation(usize),
    ColViolation(usize),
    CycleDetected(Vec<usize>),
}

/// Reads the relation `i R j` iff `u(e_j)` is a nonzero multiple of `e_i` off the `n`-window.
///
/// Rows are inspected before columns.
pub fn sparse_pattern_jordan_check(op: &ColumnFiniteOp, n: usize) -> PatternVerdict {
    let n = op.dim().map_or(n, |d| d.min(n));
    let cols: Vec<Vec<usize>> =
        (0..n).map(|j| op.column(j).iter().map(|(i, _)| *i).filter(|&i| i < n).collect()).collect();
    let mut hit_by: Vec<Option<usize>> = vec![None; n];
    for (j, rows) in cols.iter().enumerate() {
        for &i in rows {
            if hit_by[i].is_some() {
                return PatternVerdict::RowViolation(i);
            }
            hit_by[i] = Some(j);
        }
    }
    if let Some(j) = cols.iter().position(|c| c.len() > 1) {
        return PatternVerdict::ColViolation(j);
    }
    let succ: Vec<Option<usize>> = cols.iter().map(|c| c.first().copied()).collect();
    // bottoms are the nodes with u(e_j) = 0; climb each chain through the unique predecessors
    let mut seen = vec![false; n];
    let mut cells = Vec::new();
    for b in 0..n {
        if succ[b].is_some() {
            continue;
        }
        let mut len = 0;
        let mut cur = Some(b);
        while let Some(x) = cur {
            seen[x] = true;
            len += 1;
            cur = hit_by[x];
        }
        cells.push(len);
    }
    // whatever is left lies on a cycle
    let rest: Vec<usize> = (0..n).filter(|&x| !seen[x]).collect();
    if !rest.is_empty() {
        let mut cycle = vec![rest[0]];
        let mut cur = succ[rest[0]].expect("nodes off every chain have successors");
        while cur != rest[0] {
            cycle.push(cur);
            cur = succ[cur].expect("cycle");
        }
        cycle.sort_unstable();
        return PatternVerdict::CycleDetected(cycle);
    }
    PatternVerdict::Cells(cells)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreSample {
    pub depth: usize,
    /// `dim(u^depth(V_N) ∩ V_probe)`.
    pub dim: usize,
    /// Dimension of the image of that subspace under `u`.
    pub image_dim: usize,
}

/// Windowed approximations of the core on the probe subspace `span(e_0..e_{probe-1})`.
pub fn appendix_core_trend(op: &ColumnFiniteOp, n: usize, probe: usize, max_depth: usize) -> Vec<CoreSample> {
    let f = op.field();
    let mut e = span_of(f, (0..n).map(|j| unit(f, j)));
    let mut out = Vec::new();
    for depth in 0..=max_depth {
        let low = span_of(f, e.below(probe));
        let img = image(op, &low);
        out.push(CoreSample { depth, dim: low.len(), image_dim: img.len() });
        e = image(op, &e);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::infinite::{appendix_operator, shift, Cell, JordanGraph};

    #[test]
    fn appendix_pattern_rejected() {
        let m = appendix_operator(Field::Q);
        assert_eq!(sparse_pattern_jordan_check(&m, 8), PatternVerdict::RowViolation(0));
    }

    #[test]
    fn cell_sums_accepted() {
        let g = JordanGraph::from_cells(Field::Q, &[Cell::Finite(2), Cell::Finite(1)]).unwrap();
        assert_eq!(sparse_pattern_jordan_check(&g.operator(), 3), PatternVerdict::Cells(vec![2, 1]));
        assert_eq!(sparse_pattern_jordan_check(&shift(Field::Q), 4), PatternVerdict::Cells(vec![4]));
    }

    #[test]
    fn swap_is_a_cycle() {
        let f = Field::Q;
        let one = f.one();
        let swap = ColumnFiniteOp::new(f, "swap", vec![], move |j| match j {
            0 => vec![(1, one.clone())],
            1 => vec![(0, one.clone())],
            _ => Vec::new(),
        });
        assert_eq!(sparse_pattern_jordan_check(&swap, 3), PatternVerdict::CycleDetected(vec![0, 1]));
        let two = f.int(2);
        let dense = ColumnFiniteOp::new(f, "dense", vec![], move |j| if j == 1 { vec![(0, two.clone()), (1, two.clone())] } else { Vec::new() });
        assert_eq!(sparse_pattern_jordan_check(&dense, 2), PatternVerdict::ColViolation(1));
    }

    #[test]
    fn appendix_core_obstruction() {
        let m = appendix_operator(Field::Q);
        let trend = appendix_core_trend(&m, 40, 10, 8);
        assert_eq!(trend[0].dim, 10);
        assert!(trend.windows(2).all(|w| w[1].dim <= w[0].dim));
        let last = trend.last().unwrap();
        assert_eq!((last.dim, last.image_dim), (1, 0));
        let s = appendix_core_trend(&shift(Field::Q), 40, 10, 8);
        assert!(s.iter().all(|x| x.dim == 10 && x.image_dim == 9));
    }
}
