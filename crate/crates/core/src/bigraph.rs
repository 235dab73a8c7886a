//! Bipartite graphs on at most 64 vertices per side, stored as one `u64`
//! neighborhood mask per left vertex, and 2-edge-colorings of `K_{b,b}`.
//!
//! Vertices are 0-based on both sides: `x_1 .. x_t` are left indices
//! `0 .. t-1` and `y_1 .. y_t` are right indices `0 .. t-1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_SIDE: usize = 64;

/// `(left, right)` vertex pair.
pub type Edge = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// A set of vertices on one side of a bipartition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    pub side: Side,
    pub mask: u64,
}

impl VertexSet {
    pub fn new(side: Side, mask: u64) -> Self {
        VertexSet { side, mask }
    }

    pub fn empty(side: Side) -> Self {
        VertexSet { side, mask: 0 }
    }

    /// Panics if an index is 64 or larger.
    pub fn from_indices(side: Side, indices: impl IntoIterator<Item = usize>) -> Self {
        let mask = indices.into_iter().fold(0u64, |m, i| {
            assert!(i < MAX_SIDE, "vertex index {i} out of range");
            m | (1u64 << i)
        });
        VertexSet { side, mask }
    }

    /// The first `n` vertices of a side.
    pub fn prefix(side: Side, n: usize) -> Self {
        VertexSet {
            side,
            mask: low_mask(n),
        }
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        v < MAX_SIDE && self.mask >> v & 1 == 1
    }

    /// Indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        bits(self.mask)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check_within(&self, g: &BipartiteGraph) -> Result<()> {
        let size = g.side_size(self.side);
        if self.mask & !low_mask(size) != 0 {
            return Err(Error::contract(format!(
                "{:?} vertex set {:#x} exceeds side size {size}",
                self.side, self.mask
            )));
        }
        Ok(())
    }
}

/// A bipartite graph with parts `X` (left) and `Y` (right).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BipartiteGraph {}x{} [", self.left, self.right)?;
        for row in &self.rows {
            let line: String = (0..self.right)
                .map(|j| if row >> j & 1 == 1 { '1' } else { '.' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        write!(f, "]")
    }
}

impl BipartiteGraph {
    fn check_dims(left: usize, right: usize) -> Result<()> {
        if left > MAX_SIDE || right > MAX_SIDE {
            return Err(Error::contract(format!(
                "graph {left}x{right} exceeds {MAX_SIDE} vertices per side"
            )));
        }
        Ok(())
    }

    pub fn empty(left: usize, right: usize) -> Result<Self> {
        Self::check_dims(left, right)?;
        Ok(BipartiteGraph {
            left,
            right,
            rows: vec![0; left],
        })
    }

    pub fn complete(left: usize, right: usize) -> Result<Self> {
        Self::check_dims(left, right)?;
        Ok(BipartiteGraph {
            left,
            right,
            rows: vec![low_mask(right); left],
        })
    }

    pub fn from_rows(left: usize, right: usize, rows: Vec<u64>) -> Result<Self> {
        Self::check_dims(left, right)?;
        if rows.len() != left {
            return Err(Error::contract(format!(
                "expected {left} rows, got {}",
                rows.len()
            )));
        }
        if let Some(i) = rows.iter().position(|r| r & !low_mask(right) != 0) {
            return Err(Error::contract(format!(
                "row {i} has a neighbor at index >= {right}"
            )));
        }
        Ok(BipartiteGraph { left, right, rows })
    }

    pub fn from_edges(
        left: usize,
        right: usize,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let mut g = Self::empty(left, right)?;
        for (i, j) in edges {
            if i >= left || j >= right {
                return Err(Error::contract(format!(
                    "edge ({i},{j}) outside {left}x{right}"
                )));
            }
            g.rows[i] |= 1 << j;
        }
        Ok(g)
    }

    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn side_size(&self, side: Side) -> usize {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// `N(x_i)` as a mask over right vertices.
    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    /// `N(y_j)` as a mask over left vertices.
    pub fn column(&self, j: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, r)| acc | ((r >> j & 1) << i))
    }

    pub fn columns(&self) -> Vec<u64> {
        let mut cols = vec![0u64; self.right];
        for (i, r) in self.rows.iter().enumerate() {
            for j in bits(*r) {
                cols[j] |= 1 << i;
            }
        }
        cols
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.left && j < self.right && self.rows[i] >> j & 1 == 1
    }

    pub fn insert_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i >= self.left || j >= self.right {
            return Err(Error::contract(format!(
                "edge ({i},{j}) outside {}x{}",
                self.left, self.right
            )));
        }
        self.rows[i] |= 1 << j;
        Ok(())
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        if i < self.left && j < self.right {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn without_edge(&self, i: usize, j: usize) -> Self {
        let mut g = self.clone();
        g.remove_edge(i, j);
        g
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| bits(*r).map(move |j| (i, j)))
    }

    pub fn neighbors(&self, side: Side, v: usize) -> VertexSet {
        match side {
            Side::Left => VertexSet::new(Side::Right, self.rows[v]),
            Side::Right => VertexSet::new(Side::Left, self.column(v)),
        }
    }

    pub fn degree(&self, side: Side, v: usize) -> usize {
        self.neighbors(side, v).len()
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.count_ones() as usize).collect()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        self.columns()
            .iter()
            .map(|c| c.count_ones() as usize)
            .collect()
    }

    /// Maximum degree over both sides (0 for a graph without vertices).
    pub fn max_degree(&self) -> usize {
        self.left_degrees()
            .into_iter()
            .chain(self.right_degrees())
            .max()
            .unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.left_degrees()
            .into_iter()
            .chain(self.right_degrees())
            .min()
            .unwrap_or(0)
    }

    /// The same graph with the roles of `X` and `Y` exchanged.
    pub fn transpose(&self) -> Self {
        BipartiteGraph {
            left: self.right,
            right: self.left,
            rows: self.columns(),
        }
    }

    /// Relabel vertices: left `i` becomes `left_perm[i]`, right `j` becomes `right_perm[j]`.
    pub fn permuted(&self, left_perm: &[usize], right_perm: &[usize]) -> Result<Self> {
        check_permutation(left_perm, self.left, "left")?;
        check_permutation(right_perm, self.right, "right")?;
        let mut rows = vec![0u64; self.left];
        for (i, r) in self.rows.iter().enumerate() {
            rows[left_perm[i]] = bits(*r).fold(0, |m, j| m | 1 << right_perm[j]);
        }
        Ok(BipartiteGraph {
            left: self.left,
            right: self.right,
            rows,
        })
    }

    pub fn to_json(&self, encoding: GraphEncoding) -> GraphJson {
        match encoding {
            GraphEncoding::Edges => GraphJson {
                left: self.left,
                right: self.right,
                edges: Some(self.edges().map(|(i, j)| [i, j]).collect()),
                rows_hex: None,
            },
            GraphEncoding::RowsHex => GraphJson {
                left: self.left,
                right: self.right,
                edges: None,
                rows_hex: Some(self.rows.iter().map(|r| format!("{r:x}")).collect()),
            },
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: GraphJson =
            serde_json::from_str(s).map_err(|e| Error::format("graph", e.to_string()))?;
        raw.try_into()
    }
}

fn check_permutation(perm: &[usize], n: usize, what: &str) -> Result<()> {
    if perm.len() != n {
        return Err(Error::contract(format!(
            "{what} permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    let seen = perm.iter().try_fold(0u64, |seen, &p| {
        if p >= n || seen >> p & 1 == 1 {
            None
        } else {
            Some(seen | 1 << p)
        }
    });
    match seen {
        Some(_) => Ok(()),
        None => Err(Error::contract(format!("{what} map is not a permutation"))),
    }
}

/// Bipartite complement within `K_{left,right}`.
pub fn complement(g: &BipartiteGraph) -> BipartiteGraph {
    let full = low_mask(g.right);
    BipartiteGraph {
        left: g.left,
        right: g.right,
        rows: g.rows.iter().map(|r| !r & full).collect(),
    }
}

/// `G<xs ∪ ys>`, relabelled to `0..|xs|` and `0..|ys|` in ascending index order.
pub fn induced(g: &BipartiteGraph, xs: VertexSet, ys: VertexSet) -> Result<BipartiteGraph> {
    if xs.side != Side::Left || ys.side != Side::Right {
        return Err(Error::contract(
            "induced expects a left vertex set and a right vertex set",
        ));
    }
    xs.check_within(g)?;
    ys.check_within(g)?;
    let right: Vec<usize> = ys.to_vec();
    let rows = xs
        .iter()
        .map(|i| {
            right
                .iter()
                .enumerate()
                .fold(0u64, |m, (t, &j)| m | ((g.rows[i] >> j & 1) << t))
        })
        .collect();
    Ok(BipartiteGraph {
        left: xs.len(),
        right: ys.len(),
        rows,
    })
}

/// Finds `a` left and `b` right vertices spanning a complete `K_{a,b}`.
///
/// The witness is the lexicographically first: smallest left set (as a sorted
/// index list), then the smallest right set for it.
pub fn contains_complete(g: &BipartiteGraph, a: usize, b: usize) -> Option<(VertexSet, VertexSet)> {
    if a > g.left || b > g.right {
        return None;
    }

    fn rec(
        g: &BipartiteGraph,
        start: usize,
        need: usize,
        chosen: u64,
        common: u64,
        b: usize,
    ) -> Option<(u64, u64)> {
        if (common.count_ones() as usize) < b {
            return None;
        }
        if need == 0 {
            let right = bits(common).take(b).fold(0u64, |m, j| m | 1 << j);
            return Some((chosen, right));
        }
        for i in start..=(g.left - need) {
            if let Some(found) = rec(g, i + 1, need - 1, chosen | 1 << i, common & g.rows[i], b) {
                return Some(found);
            }
        }
        None
    }

    rec(g, 0, a, 0, low_mask(g.right), b).map(|(l, r)| {
        (
            VertexSet::new(Side::Left, l),
            VertexSet::new(Side::Right, r),
        )
    })
}

/// Isomorphism test by permutation backtracking over left vertices.
///
/// Once the left side is mapped, a matching right permutation exists iff the
/// relabelled column masks agree as multisets, so only left maps are searched.
/// If the two graphs have swapped dimensions (or are square), mapping `X` onto
/// `Y` is also tried. Intended for small graphs (at most 8 per side).
pub fn are_isomorphic(g: &BipartiteGraph, h: &BipartiteGraph) -> bool {
    if g.edge_count() != h.edge_count() {
        return false;
    }
    if g.left == h.left && g.right == h.right && iso_same_orientation(g, h) {
        return true;
    }
    g.left == h.right && g.right == h.left && iso_same_orientation(&g.transpose(), h)
}

fn sorted(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v
}

fn iso_same_orientation(g: &BipartiteGraph, h: &BipartiteGraph) -> bool {
    let mut gd = g.left_degrees();
    let mut hd = h.left_degrees();
    gd.sort_unstable();
    hd.sort_unstable();
    if gd != hd {
        return false;
    }
    let mut gr = g.right_degrees();
    let mut hr = h.right_degrees();
    gr.sort_unstable();
    hr.sort_unstable();
    if gr != hr {
        return false;
    }

    let g_cols = g.columns();
    let h_cols = h.columns();
    let mut map = vec![usize::MAX; g.left];

    // Columns restricted to the mapped prefix must agree as multisets.
    fn consistent(g_cols: &[u64], h_cols: &[u64], map: &[usize], depth: usize) -> bool {
        let h_domain = map[..depth].iter().fold(0u64, |m, &p| m | 1 << p);
        let lhs = sorted(
            g_cols
                .iter()
                .map(|c| (0..depth).fold(0u64, |m, i| m | ((c >> i & 1) << map[i])))
                .collect(),
        );
        let rhs = sorted(h_cols.iter().map(|c| c & h_domain).collect());
        lhs == rhs
    }

    fn rec(
        g: &BipartiteGraph,
        h: &BipartiteGraph,
        g_cols: &[u64],
        h_cols: &[u64],
        map: &mut [usize],
        used: u64,
        depth: usize,
    ) -> bool {
        if depth == g.left {
            return true;
        }
        let deg = g.rows[depth].count_ones();
        for p in 0..h.left {
            if used >> p & 1 == 1 || h.rows[p].count_ones() != deg {
                continue;
            }
            map[depth] = p;
            if consistent(g_cols, h_cols, map, depth + 1)
                && rec(g, h, g_cols, h_cols, map, used | 1 << p, depth + 1)
            {
                return true;
            }
        }
        false
    }

    rec(g, h, &g_cols, &h_cols, &mut map, 0, 0)
}

/// How graph JSON encodes adjacency.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GraphEncoding {
    /// `"edges": [[i, j], ...]`
    #[default]
    Edges,
    /// `"rows_hex": ["1f", ...]`, bit `j` of row `i` set iff `(i, j)` is an edge.
    RowsHex,
}

/// Wire form of a [`BipartiteGraph`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub left: usize,
    pub right: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows_hex: Option<Vec<String>>,
}

impl From<BipartiteGraph> for GraphJson {
    fn from(g: BipartiteGraph) -> Self {
        g.to_json(GraphEncoding::Edges)
    }
}

impl TryFrom<GraphJson> for BipartiteGraph {
    type Error = Error;

    fn try_from(raw: GraphJson) -> Result<Self> {
        let (left, right) = (raw.left, raw.right);
        if left > MAX_SIDE {
            return Err(Error::format("left", format!("{left} exceeds {MAX_SIDE}")));
        }
        if right > MAX_SIDE {
            return Err(Error::format(
                "right",
                format!("{right} exceeds {MAX_SIDE}"),
            ));
        }

        let from_edges = match &raw.edges {
            None => None,
            Some(edges) => {
                let mut rows = vec![0u64; left];
                for (t, &[i, j]) in edges.iter().enumerate() {
                    if i >= left {
                        return Err(Error::format(
                            "edges",
                            format!("edge #{t} [{i},{j}]: left index {i} >= left size {left}"),
                        ));
                    }
                    if j >= right {
                        return Err(Error::format(
                            "edges",
                            format!("edge #{t} [{i},{j}]: right index {j} >= right size {right}"),
                        ));
                    }
                    if t > 0 && edges[t - 1] >= [i, j] {
                        return Err(Error::format(
                            "edges",
                            format!(
                                "edge #{t} [{i},{j}] is a duplicate or out of lexicographic order"
                            ),
                        ));
                    }
                    rows[i] |= 1 << j;
                }
                Some(rows)
            }
        };

        let from_hex = match &raw.rows_hex {
            None => None,
            Some(hex) => {
                if hex.len() != left {
                    return Err(Error::format(
                        "rows_hex",
                        format!("expected {left} rows, got {}", hex.len()),
                    ));
                }
                let mut rows = Vec::with_capacity(left);
                for (i, s) in hex.iter().enumerate() {
                    let r = u64::from_str_radix(s, 16)
                        .map_err(|e| Error::format("rows_hex", format!("row {i} `{s}`: {e}")))?;
                    if r & !low_mask(right) != 0 {
                        return Err(Error::format(
                            "rows_hex",
                            format!("row {i} `{s}` has a bit at index >= right size {right}"),
                        ));
                    }
                    rows.push(r);
                }
                Some(rows)
            }
        };

        let rows = match (from_edges, from_hex) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::format(
                    "rows_hex",
                    "disagrees with `edges` in the same file",
                ))
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => {
                return Err(Error::format(
                    "edges",
                    "missing (need `edges` or `rows_hex`)",
                ))
            }
        };
        Ok(BipartiteGraph { left, right, rows })
    }
}

/// A 2-edge-coloring of `K_{b_left,b_right}`: `red` is color 1, and the blue
/// graph is its bipartite complement.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TwoColoring {
    red: BipartiteGraph,
}

impl TwoColoring {
    pub fn from_red(red: BipartiteGraph) -> Self {
        TwoColoring { red }
    }

    pub fn from_blue(blue: &BipartiteGraph) -> Self {
        TwoColoring {
            red: complement(blue),
        }
    }

    pub fn board(&self) -> (usize, usize) {
        (self.red.left, self.red.right)
    }

    pub fn red(&self) -> &BipartiteGraph {
        &self.red
    }

    pub fn blue(&self) -> BipartiteGraph {
        complement(&self.red)
    }

    pub fn into_red(self) -> BipartiteGraph {
        self.red
    }

    /// Exchanges the two colors.
    pub fn swapped(&self) -> Self {
        TwoColoring {
            red: complement(&self.red),
        }
    }

    /// The sub-coloring on `K_{|xs|,|ys|}`.
    pub fn induced(&self, xs: VertexSet, ys: VertexSet) -> Result<Self> {
        Ok(TwoColoring {
            red: induced(&self.red, xs, ys)?,
        })
    }

    /// The sub-coloring on the first `left` and `right` vertices.
    pub fn restrict(&self, left: usize, right: usize) -> Result<Self> {
        if left > self.red.left || right > self.red.right {
            return Err(Error::contract(format!(
                "cannot restrict {}x{} board to {left}x{right}",
                self.red.left, self.red.right
            )));
        }
        self.induced(
            VertexSet::prefix(Side::Left, left),
            VertexSet::prefix(Side::Right, right),
        )
    }
}
