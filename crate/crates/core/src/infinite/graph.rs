//! Direct sums of Jordan cells with an explicit node enumeration.

use serde::{Deserialize, Serialize};

use super::sparse::rank_sequence;
use super::{Certificate, Column, ColumnFiniteOp, WindowReport};
use crate::algebra::{Field, Poly, Scalar};
use crate::decompose::DecompKind;
use crate::error::{Error, Result};
use crate::linalg::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Finite(usize),
    Infinite,
}

impl Cell {
    fn len(self) -> Option<usize> {
        match self {
            Cell::Finite(n) => Some(n),
            Cell::Infinite => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCell", into = "RawCell")]
pub struct CellSpec {
    pub cell: Cell,
    pub count: usize,
}

#[derive(Serialize, Deserialize)]
struct RawCell {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    finite: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    infinite: Option<bool>,
    #[serde(default = "one")]
    count: usize,
}

fn one() -> usize {
    1
}

impl TryFrom<RawCell> for CellSpec {
    type Error = String;

    fn try_from(r: RawCell) -> std::result::Result<CellSpec, String> {
        let cell = match (r.finite, r.infinite) {
            (Some(0), _) => return Err("finite cells have positive size".into()),
            (Some(n), None | Some(false)) => Cell::Finite(n),
            (None, Some(true)) => Cell::Infinite,
            _ => return Err("a cell is either {\"finite\": n} or {\"infinite\": true}".into()),
        };
        Ok(CellSpec { cell, count: r.count })
    }
}

impl From<CellSpec> for RawCell {
    fn from(c: CellSpec) -> RawCell {
        match c.cell {
            Cell::Finite(n) => RawCell { finite: Some(n), infinite: None, count: c.count },
            Cell::Infinite => RawCell { finite: None, infinite: Some(true), count: c.count },
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Enumeration {
    /// Round `r` lists the position-`r` node of every cell longer than `r`, in cell order.
    #[default]
    RoundRobin,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub cells: Vec<CellSpec>,
    #[serde(default)]
    pub enumeration: Enumeration,
}

/// Position `pos` of cell `cell`; its height is `pos + 1` and `u` sends it to position `pos - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Node {
    pub cell: usize,
    pub pos: usize,
}

impl Node {
    pub fn height(self) -> usize {
        self.pos + 1
    }
}

#[derive(Clone, Debug)]
pub struct JordanGraph {
    field: Field,
    spec: GraphSpec,
    cells: Vec<Cell>,
    /// Longest finite cell.
    depth: usize,
    /// First index of each round `r < depth`, plus the total.
    starts: Vec<usize>,
    infinite: Vec<usize>,
}

impl JordanGraph {
    pub fn new(field: Field, spec: GraphSpec) -> Result<JordanGraph> {
        let mut cells = Vec::new();
        for c in &spec.cells {
            if c.cell == Cell::Finite(0) {
                return Err(Error::Precondition("finite cells have positive size".into()));
            }
            cells.extend(std::iter::repeat_n(c.cell, c.count));
        }
        let depth = cells.iter().filter_map(|c| c.len()).max().unwrap_or(0);
        let mut starts = vec![0];
        for r in 0..depth {
            let active = cells.iter().filter(|c| c.len().is_none_or(|n| n > r)).count();
            starts.push(starts[r] + active);
        }
        let infinite = (0..cells.len()).filter(|&i| cells[i] == Cell::Infinite).collect();
        Ok(JordanGraph { field, spec, cells, depth, starts, infinite })
    }

    pub fn from_cells(field: Field, cells: &[Cell]) -> Result<JordanGraph> {
        let spec = GraphSpec {
            cells: cells.iter().map(|&cell| CellSpec { cell, count: 1 }).collect(),
            enumeration: Enumeration::RoundRobin,
        };
        JordanGraph::new(field, spec)
    }

    pub fn from_json(field: Field, s: &str) -> Result<JordanGraph> {
        let spec: GraphSpec = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        JordanGraph::new(field, spec)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn infinite_cells(&self) -> usize {
        self.infinite.len()
    }

    /// Total number of nodes when every cell is finite.
    pub fn dim(&self) -> Option<usize> {
        if self.infinite.is_empty() {
            Some(*self.starts.last().expect("nonempty"))
        } else {
            None
        }
    }

    fn active(&self, c: usize, r: usize) -> bool {
        self.cells[c].len().is_none_or(|n| n > r)
    }

    pub fn node(&self, idx: usize) -> Option<Node> {
        let s = *self.starts.last().expect("nonempty");
        if idx < s {
            let r = self.starts.partition_point(|&x| x <= idx) - 1;
            let mut off = idx - self.starts[r];
            for c in 0..self.cells.len() {
                if self.active(c, r) {
                    if off == 0 {
                        return Some(Node { cell: c, pos: r });
                    }
                    off -= 1;
                }
            }
            unreachable!("round {r} has fewer nodes than counted")
        } else if self.infinite.is_empty() {
            None
        } else {
            let k = self.infinite.len();
            let q = idx - s;
            Some(Node { cell: self.infinite[q % k], pos: self.depth + q / k })
        }
    }

    pub fn index(&self, n: Node) -> Option<usize> {
        if n.cell >= self.cells.len() || !self.active(n.cell, n.pos) {
            return None;
        }
        if n.pos < self.depth {
            let before = (0..n.cell).filter(|&c| self.active(c, n.pos)).count();
            Some(self.starts[n.pos] + before)
        } else {
            let k = self.infinite.len();
            let before = self.infinite.iter().position(|&c| c == n.cell).expect("infinite cell");
            Some(self.starts[self.depth] + (n.pos - self.depth) * k + before)
        }
    }

    pub fn height(&self, idx: usize) -> Option<usize> {
        self.node(idx).map(Node::height)
    }

    /// `f(idx)`: the node `u` sends `idx` to, `None` for `⊥`.
    pub fn successor(&self, idx: usize) -> Option<usize> {
        let n = self.node(idx)?;
        if n.pos == 0 {
            None
        } else {
            self.index(Node { cell: n.cell, pos: n.pos - 1 })
        }
    }

    pub fn is_core_node(&self, idx: usize) -> bool {
        self.node(idx).is_some_and(|n| self.cells[n.cell] == Cell::Infinite)
    }

    pub fn operator(&self) -> ColumnFiniteOp {
        let g = self.clone();
        let one = self.field.one();
        ColumnFiniteOp::new(
            self.field,
            "jordan_graph",
            vec![Certificate::StrictlyUpperTriangular, Certificate::JordanGraphForm],
            move |j| g.successor(j).map(|i| vec![(i, one.clone())]).unwrap_or_default(),
        )
        .with_dim(self.dim())
    }

    /// Chain lengths inside the window `0..n`, listed by bottom node.
    pub fn window_cells(&self, n: usize) -> Vec<usize> {
        let n = self.dim().map_or(n, |d| d.min(n));
        let mut lens = vec![0usize; self.cells.len()];
        let mut order = Vec::new();
        for idx in 0..n {
            let node = self.node(idx).expect("in range");
            if node.pos == 0 {
                order.push(node.cell);
            }
            lens[node.cell] += 1;
        }
        order.into_iter().map(|c| lens[c]).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Part {
    V0,
    V1,
}

/// `V_0` = nodes of even height, `V_1` = odd height; `u` exchanges the two.
pub fn jordan_graph_exchange_split(g: &JordanGraph) -> impl Fn(usize) -> Option<Part> + Send + Sync + Clone {
    let g = g.clone();
    move |idx| g.height(idx).map(|h| if h % 2 == 0 { Part::V0 } else { Part::V1 })
}

#[derive(Clone, Debug)]
pub struct GraphPair {
    pub kind: DecompKind,
    pub graph: JordanGraph,
    pub first: ColumnFiniteOp,
    pub second: ColumnFiniteOp,
    /// `first * second` for the product kinds.
    pub product: Option<ColumnFiniteOp>,
}

fn graph_op<F>(g: &JordanGraph, name: &str, certs: Vec<Certificate>, rule: F) -> ColumnFiniteOp
where
    F: Fn(usize, usize, Option<usize>) -> Column + Send + Sync + 'static,
{
    // rule(j, height, successor)
    let gg = g.clone();
    ColumnFiniteOp::new(g.field(), name, certs, move |j| match gg.node(j) {
        Some(n) => rule(j, n.height(), gg.successor(j)),
        None => Vec::new(),
    })
    .with_dim(g.dim())
}

/// `(u pi_0, u pi_1)` over the parity split.
pub fn jordan_graph_squarezero_pair(g: &JordanGraph) -> GraphPair {
    let one = g.field().one();
    let mk = |even: bool, name: &str| {
        let one = one.clone();
        graph_op(g, name, vec![Certificate::StrictlyUpperTriangular], move |_, h, s| match s {
            Some(i) if (h % 2 == 0) == even => vec![(i, one.clone())],
            _ => Vec::new(),
        })
    };
    GraphPair {
        kind: DecompKind::SquareZeroSum,
        graph: g.clone(),
        first: mk(true, "u*pi0"),
        second: mk(false, "u*pi1"),
        product: None,
    }
}

fn product_pair(g: &JordanGraph, kind: DecompKind, minus: Scalar) -> GraphPair {
    // even-height diagonal sign: -1 for involutions, +1 for unipotents
    let one = g.field().one();
    let (o1, m1) = (one.clone(), minus.clone());
    let first = graph_op(g, "a", vec![Certificate::UpperTriangular], move |j, h, s| {
        if h % 2 == 1 {
            vec![(j, o1.clone())]
        } else {
            let mut c = vec![(j, m1.clone())];
            c.extend(s.map(|i| (i, o1.clone())));
            c
        }
    });
    let (o2, m2) = (one, minus);
    let second = graph_op(g, "b", vec![Certificate::UpperTriangular], move |j, h, s| {
        if h % 2 == 1 {
            let mut c = vec![(j, o2.clone())];
            c.extend(s.map(|i| (i, o2.clone())));
            c
        } else {
            vec![(j, m2.clone())]
        }
    });
    let product = first.compose(&second);
    GraphPair { kind, graph: g.clone(), first, second, product: Some(product) }
}

/// `a x = x` (odd height) or `-x + u x` (even); `b x = x + u x` (odd) or `-x` (even).
pub fn jordan_graph_involution_pair(g: &JordanGraph) -> GraphPair {
    product_pair(g, DecompKind::InvolutionProduct, g.field().int(-1))
}

/// `a x = x` (odd height) or `x + u x` (even); `b x = x + u x` (odd) or `x` (even).
pub fn jordan_graph_unipotent_pair(g: &JordanGraph) -> GraphPair {
    product_pair(g, DecompKind::Unipotent2Product, g.field().one())
}

/// Invariant factors of a unipotent `m`, read off the ranks of the powers of `m - I`.
pub(crate) fn unipotent_invariant_factors(ranks: &[usize], field: Field) -> Option<Vec<Poly>> {
    if *ranks.last()? != 0 {
        return None;
    }
    // blocks of size >= k: r_{k-1} - r_k
    let ge: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for k in 1..=ge.len() {
        let exact = ge[k - 1] - ge.get(k).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k, exact));
    }
    let tm1 = Poly::linear(field.int(-1));
    Some(sizes.into_iter().map(|k| tm1.pow(k)).collect())
}

fn minus_identity(op: &ColumnFiniteOp) -> ColumnFiniteOp {
    op.shifted(-op.field().one())
}

/// `(ab - I)(x) = lambda u(x) + (span of u^k x, k >= 2)` with `lambda != 0`, node by node.
fn perturbation_holds(g: &JordanGraph, v: &ColumnFiniteOp, n: usize) -> bool {
    (0..n).all(|j| {
        let col = v.column(j);
        let mut chain = Vec::new();
        let mut cur = g.successor(j);
        while let Some(i) = cur {
            chain.push(i);
            cur = g.successor(i);
        }
        let supported = col.iter().all(|(i, _)| chain.contains(i));
        let lead = match chain.first() {
            Some(i) => col.iter().any(|(r, _)| r == i),
            None => col.is_empty(),
        };
        supported && lead
    })
}

/// Recomputes every identity of the pair on the leading `n x n` window.
pub fn graph_window_report(p: &GraphPair, n: usize) -> WindowReport {
    let g = &p.graph;
    let f = g.field();
    let u = g.operator();
    let wu = u.window(n);
    let n = wu.rows();
    let id = Mat::identity(f, n);
    let (wa, wb) = (p.first.window(n), p.second.window(n));
    let mut r = WindowReport::new(n);
    r.put("kind", p.kind.short_name());
    r.put("cells", g.window_cells(n));
    match p.kind {
        DecompKind::SquareZeroSum => {
            r.record("first^2 = 0", (&wa * &wa).is_zero());
            r.record("second^2 = 0", (&wb * &wb).is_zero());
            r.record("first + second = u", &wa + &wb == wu);
            let part = jordan_graph_exchange_split(g);
            let exchanged = (0..n).all(|j| u.column(j).iter().all(|(i, _)| part(*i) != part(j)));
            r.record("u exchanges V0 and V1", exchanged);
        }
        kind => {
            let factor = |m: &Mat| {
                let x = m - &id;
                match kind {
                    DecompKind::InvolutionProduct => (m * m).is_identity(),
                    _ => (&x * &x).is_zero(),
                }
            };
            r.record("first is a factor", factor(&wa));
            r.record("second is a factor", factor(&wb));
            let prod = p.product.as_ref().expect("product kinds carry the product");
            let wp = prod.window(n);
            r.record("window(ab) = window(a) window(b)", wp == &wa * &wb);
            let v = minus_identity(prod);
            r.record("perturbation: (ab - I)x = lambda u(x) mod u^2", perturbation_holds(g, &v, n));
            let ranks_ab = rank_sequence(&v, n);
            let ranks_u = rank_sequence(&u, n);
            let if_ab = unipotent_invariant_factors(&ranks_ab, f);
            let if_u = unipotent_invariant_factors(&ranks_u, f);
            r.record("invariant factors of ab equal those of I + u", if_ab.is_some() && if_ab == if_u);
            r.put("ranks_ab_minus_i", ranks_ab);
            r.put("ranks_u", ranks_u);
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreReport {
    pub n: usize,
    /// Infinite-cell nodes among the first `n`.
    pub symbolic_dim: usize,
    /// `dim(u^d(V_M) ∩ V_n)` for a depth `d` past every finite cell and `M` covering the preimages.
    pub windowed_dim: usize,
    pub depth: usize,
    /// `u` maps the core into itself and every core node has a core preimage.
    pub stable: bool,
}

pub fn core_report(g: &JordanGraph, n: usize) -> CoreReport {
    use super::sparse::{image, span_of, unit};
    let f = g.field();
    let n = g.dim().map_or(n, |d| d.min(n));
    let core: Vec<usize> = (0..n).filter(|&j| g.is_core_node(j)).collect();
    let stable = core.iter().all(|&j| {
        let node = g.node(j).expect("in range");
        let into = g.successor(j).is_none_or(|i| g.is_core_node(i));
        let onto = g.index(Node { cell: node.cell, pos: node.pos + 1 }).is_some_and(|i| g.is_core_node(i));
        into && onto
    });
    let depth = g.depth + 1;
    let m = core
        .iter()
        .map(|&j| {
            let node = g.node(j).expect("in range");
            g.index(Node { cell: node.cell, pos: node.pos + depth }).expect("infinite cell") + 1
        })
        .max()
        .unwrap_or(0)
        .max(n);
    let u = g.operator();
    let mut e = span_of(f, (0..m).map(|j| unit(f, j)));
    for _ in 0..depth {
        e = image(&u, &e);
    }
    CoreReport { n, symbolic_dim: core.len(), windowed_dim: e.below(n).len(), depth, stable }
}

/// The core is the span of the infinite-cell nodes and `u` maps it onto itself;
/// the windowed core agrees with that span.
pub fn core_stability_check(g: &JordanGraph, n: usize) -> bool {
    let r = core_report(g, n);
    r.stable && r.windowed_dim == r.symbolic_dim
}
