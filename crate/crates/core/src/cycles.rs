//! Exact-length even cycles in bipartite graphs.
//!
//! A cycle of half-length `k` is stored as two sequences `x_0 .. x_{k-1}` and
//! `y_0 .. y_{k-1}` describing `x_0 y_0 x_1 y_1 .. x_{k-1} y_{k-1} x_0`.

use std::collections::HashSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bigraph::{bits, induced, low_mask, BipartiteGraph, Edge, Side, VertexSet, MAX_SIDE};
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

/// Largest side size accepted by [`oracle_find_cycle`].
pub const ORACLE_MAX_SIDE: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WitnessJson", into = "WitnessJson")]
pub struct CycleWitness {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl CycleWitness {
    /// Checks the sequence invariants (equal lengths, `k >= 2`, distinct vertices).
    /// Adjacency is checked separately by [`CycleWitness::validate`].
    pub fn new(left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::contract("left and right sequences differ in length"));
        }
        if left.len() < 2 {
            return Err(Error::contract("a bipartite cycle needs k >= 2"));
        }
        for seq in [&left, &right] {
            if seq.iter().any(|&v| v >= MAX_SIDE) || !seq.iter().all_unique() {
                return Err(Error::contract(
                    "cycle sequence repeats or exceeds vertex range",
                ));
            }
        }
        Ok(CycleWitness { left, right })
    }

    pub fn half_length(&self) -> usize {
        self.left.len()
    }

    pub fn left_seq(&self) -> &[usize] {
        &self.left
    }

    pub fn right_seq(&self) -> &[usize] {
        &self.right
    }

    pub fn left_set(&self) -> VertexSet {
        VertexSet::from_indices(Side::Left, self.left.iter().copied())
    }

    pub fn right_set(&self) -> VertexSet {
        VertexSet::from_indices(Side::Right, self.right.iter().copied())
    }

    /// The `2k` edges, in cycle order starting at `x_0 y_0`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let k = self.left.len();
        (0..k).flat_map(move |i| {
            [
                (self.left[i], self.right[i]),
                (self.left[(i + 1) % k], self.right[i]),
            ]
        })
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges().any(|f| f == e)
    }

    pub fn validate(&self, g: &BipartiteGraph) -> Result<()> {
        match self.edges().find(|&(x, y)| !g.has_edge(x, y)) {
            None => Ok(()),
            Some((x, y)) => Err(Error::contract(format!(
                "witness uses ({x},{y}), which is not an edge"
            ))),
        }
    }

    pub fn is_valid_in(&self, g: &BipartiteGraph) -> bool {
        self.validate(g).is_ok()
    }

    /// Rotates so `x_0` is the smallest left vertex, then reflects if needed so
    /// that `y_0 < y_{k-1}`.
    pub fn normalized(&self) -> Self {
        let k = self.left.len();
        let r = (0..k).min_by_key(|&i| self.left[i]).unwrap_or(0);
        let left: Vec<usize> = (0..k).map(|i| self.left[(i + r) % k]).collect();
        let right: Vec<usize> = (0..k).map(|i| self.right[(i + r) % k]).collect();
        if right[0] < right[k - 1] {
            return CycleWitness { left, right };
        }
        // x_0 y_{k-1} x_{k-1} y_{k-2} .. x_1 y_0 x_0
        let rleft = std::iter::once(left[0])
            .chain(left[1..].iter().rev().copied())
            .collect();
        let rright = right.iter().rev().copied().collect();
        CycleWitness {
            left: rleft,
            right: rright,
        }
    }

    fn sorted_edges(&self) -> Vec<Edge> {
        let mut e: Vec<Edge> = self.edges().collect();
        e.sort_unstable();
        e
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    k: usize,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl From<CycleWitness> for WitnessJson {
    fn from(w: CycleWitness) -> Self {
        WitnessJson {
            k: w.left.len(),
            left: w.left,
            right: w.right,
        }
    }
}

impl TryFrom<WitnessJson> for CycleWitness {
    type Error = Error;

    fn try_from(raw: WitnessJson) -> Result<Self> {
        if raw.k != raw.left.len() || raw.k != raw.right.len() {
            return Err(Error::format("k", "does not match sequence lengths"));
        }
        CycleWitness::new(raw.left, raw.right).map_err(|e| Error::format("left", e.to_string()))
    }
}

/// Depth-first path extension shared by every detector. Works on raw
/// adjacency masks so the search can call it on partial colorings.
pub(crate) struct PathSearch<'a> {
    rows: &'a [u64],
    cols: &'a [u64],
    k: usize,
    allowed_left: u64,
    allowed_right: u64,
    left: [usize; MAX_SIDE],
    right: [usize; MAX_SIDE],
}

impl<'a> PathSearch<'a> {
    pub(crate) fn new(rows: &'a [u64], cols: &'a [u64], k: usize) -> Self {
        PathSearch {
            rows,
            cols,
            k,
            allowed_left: low_mask(rows.len()),
            allowed_right: low_mask(cols.len()),
            left: [0; MAX_SIDE],
            right: [0; MAX_SIDE],
        }
    }

    /// Is there a cycle of half-length `k` through edge `(x, y)`? On success
    /// the cycle is left in the internal sequences.
    pub(crate) fn through(&mut self, x: usize, y: usize) -> bool {
        if self.k < 2 || self.k > self.rows.len() || self.k > self.cols.len() {
            return false;
        }
        self.left[0] = x;
        self.right[0] = y;
        self.extend(1, 1 << x, 1 << y)
    }

    fn extend(&mut self, depth: usize, vis_l: u64, vis_r: u64) -> bool {
        let short = self.k - depth;
        if ((self.allowed_left & !vis_l).count_ones() as usize) < short
            || ((self.allowed_right & !vis_r).count_ones() as usize) < short
        {
            return false;
        }
        let x0 = self.left[0];
        let last_r = self.right[depth - 1];
        let mut cand = self.cols[last_r] & self.allowed_left & !vis_l;
        if depth == self.k - 1 {
            // The closing right vertex must see both the new left vertex and x_0.
            let close = self.rows[x0] & self.allowed_right & !vis_r;
            while cand != 0 {
                let xl = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                let ends = self.rows[xl] & close;
                if ends != 0 {
                    self.left[depth] = xl;
                    self.right[depth] = ends.trailing_zeros() as usize;
                    return true;
                }
            }
            return false;
        }
        while cand != 0 {
            let xl = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.left[depth] = xl;
            let mut next = self.rows[xl] & self.allowed_right & !vis_r;
            while next != 0 {
                let yr = next.trailing_zeros() as usize;
                next &= next - 1;
                self.right[depth] = yr;
                if self.extend(depth + 1, vis_l | 1 << xl, vis_r | 1 << yr) {
                    return true;
                }
            }
        }
        false
    }

    /// Any cycle of half-length `k`, anchored at its smallest left vertex.
    pub(crate) fn any(&mut self) -> bool {
        let (saved_left, saved_right) = (self.allowed_left, self.allowed_right);
        // Cycle vertices have at least two neighbors.
        let degree2 = |adj: &[u64], allowed: u64| {
            bits(allowed)
                .filter(|&v| adj[v].count_ones() >= 2)
                .fold(0u64, |m, v| m | 1 << v)
        };
        self.allowed_left = degree2(self.rows, saved_left);
        self.allowed_right = degree2(self.cols, saved_right);
        let found = self.any_anchored();
        self.allowed_left = saved_left;
        self.allowed_right = saved_right;
        found
    }

    fn any_anchored(&mut self) -> bool {
        if (self.allowed_right.count_ones() as usize) < self.k {
            return false;
        }
        let all_left = self.allowed_left;
        for s in bits(all_left) {
            self.allowed_left = all_left & !low_mask(s + 1);
            if (self.allowed_left.count_ones() as usize) < self.k - 1 {
                break;
            }
            for y in bits(self.rows[s] & self.allowed_right) {
                if self.through(s, y) {
                    self.allowed_left = all_left;
                    return true;
                }
            }
        }
        self.allowed_left = all_left;
        false
    }

    fn witness(&self) -> CycleWitness {
        CycleWitness {
            left: self.left[..self.k].to_vec(),
            right: self.right[..self.k].to_vec(),
        }
        .normalized()
    }
}

/// A cycle of length exactly `2k`, or `None`. Returns `None` for `k < 2`.
pub fn find_cycle(g: &BipartiteGraph, k: usize) -> Option<CycleWitness> {
    if k < 2 {
        return None;
    }
    let cols = g.columns();
    let mut search = PathSearch::new(g.rows(), &cols, k);
    search.any().then(|| search.witness())
}

/// A cycle of length exactly `2k` that uses edge `e`.
pub fn find_cycle_through_edge(
    g: &BipartiteGraph,
    k: usize,
    e: Edge,
) -> Result<Option<CycleWitness>> {
    if !g.has_edge(e.0, e.1) {
        return Err(Error::contract(format!("({},{}) is not an edge", e.0, e.1)));
    }
    if k < 2 {
        return Ok(None);
    }
    let cols = g.columns();
    let mut search = PathSearch::new(g.rows(), &cols, k);
    Ok(search.through(e.0, e.1).then(|| search.witness()))
}

fn oracle_check(g: &BipartiteGraph) -> Result<()> {
    if g.left_size() > ORACLE_MAX_SIDE || g.right_size() > ORACLE_MAX_SIDE {
        return Err(Error::OracleBound(format!(
            "{}x{} graph, oracle limit is {ORACLE_MAX_SIDE} per side",
            g.left_size(),
            g.right_size()
        )));
    }
    Ok(())
}

/// Calls `visit` on every ordered `(x_0..x_{k-1}, y_0..y_{k-1})` that closes
/// a cycle in `g`, stopping early if it returns `true`.
fn oracle_visit(g: &BipartiteGraph, k: usize, mut visit: impl FnMut(&[usize], &[usize]) -> bool) {
    let rights: Vec<Vec<usize>> = (0..g.right_size()).permutations(k).collect();
    for xs in (0..g.left_size()).permutations(k) {
        for ys in &rights {
            let closes =
                (0..k).all(|i| g.has_edge(xs[i], ys[i]) && g.has_edge(xs[(i + 1) % k], ys[i]));
            if closes && visit(&xs, ys) {
                return;
            }
        }
    }
}

/// Brute-force reference detector: tries every ordered selection of `k` left
/// and `k` right vertices. Refuses graphs above [`ORACLE_MAX_SIDE`] per side.
pub fn oracle_find_cycle(g: &BipartiteGraph, k: usize) -> Result<Option<CycleWitness>> {
    oracle_check(g)?;
    if k < 2 {
        return Ok(None);
    }
    let mut first = None;
    oracle_visit(g, k, |xs, ys| {
        first = Some(CycleWitness {
            left: xs.to_vec(),
            right: ys.to_vec(),
        });
        true
    });
    Ok(first.map(|w| w.normalized()))
}

/// Number of distinct `C_{2k}` subgraphs (distinct edge sets) of `g`.
pub fn oracle_count_cycles(g: &BipartiteGraph, k: usize) -> Result<usize> {
    oracle_check(g)?;
    if k < 2 {
        return Ok(0);
    }
    let mut distinct: HashSet<Vec<Edge>> = HashSet::new();
    oracle_visit(g, k, |xs, ys| {
        let w = CycleWitness {
            left: xs.to_vec(),
            right: ys.to_vec(),
        };
        distinct.insert(w.sorted_edges());
        false
    });
    Ok(distinct.len())
}

fn check_extension_input(g: &BipartiteGraph, c: &CycleWitness, x: usize, y: usize) -> Result<()> {
    c.validate(g)?;
    if x >= g.left_size() || y >= g.right_size() {
        return Err(Error::contract(format!("({x},{y}) outside the graph")));
    }
    if c.left.contains(&x) || c.right.contains(&y) {
        return Err(Error::contract("x and y must not lie on the cycle"));
    }
    Ok(())
}

/// Inserts `x` and `y` into `c` to get a cycle two vertices longer.
///
/// Scans `i` ascending for the four-neighbor pattern (`x_i, x_{i+1} ~ y` and
/// `y_i, y_{i+1} ~ x`, indices mod `k`), then, if `xy` is an edge, for the
/// pattern `x_i ~ y, y_i ~ x`. Returns `None` if neither applies.
pub fn extend_lemma1(
    g: &BipartiteGraph,
    c: &CycleWitness,
    x: usize,
    y: usize,
) -> Result<Option<CycleWitness>> {
    check_extension_input(g, c, x, y)?;
    let k = c.half_length();
    let nx = g.row(x);
    let ny = g.column(y);
    let adj_x = |j: usize| nx >> j & 1 == 1;
    let adj_y = |i: usize| ny >> i & 1 == 1;

    let rotated = |i: usize| -> (Vec<usize>, Vec<usize>) {
        let l = (0..k).map(|t| c.left[(i + t) % k]).collect();
        let r = (0..k).map(|t| c.right[(i + t) % k]).collect();
        (l, r)
    };

    for i in 0..k {
        let j = (i + 1) % k;
        if adj_y(c.left[i]) && adj_y(c.left[j]) && adj_x(c.right[i]) && adj_x(c.right[j]) {
            // .. x_i y x_{i+1} y_i x y_{i+1} x_{i+2} ..
            let (l, r) = rotated(i);
            let mut left = vec![l[0], l[1], x];
            left.extend_from_slice(&l[2..]);
            let mut right = vec![y];
            right.extend_from_slice(&r);
            return finish_extension(g, CycleWitness { left, right });
        }
    }

    if g.has_edge(x, y) {
        for i in 0..k {
            if adj_y(c.left[i]) && adj_x(c.right[i]) {
                // .. x_i y x y_i x_{i+1} ..
                let (l, r) = rotated(i);
                let mut left = vec![l[0], x];
                left.extend_from_slice(&l[1..]);
                let mut right = vec![y];
                right.extend_from_slice(&r);
                return finish_extension(g, CycleWitness { left, right });
            }
        }
    }
    Ok(None)
}

fn finish_extension(g: &BipartiteGraph, w: CycleWitness) -> Result<Option<CycleWitness>> {
    let w = w.normalized();
    w.validate(g)
        .map_err(|e| Error::Defect(format!("extension produced an invalid cycle: {e}")))?;
    Ok(Some(w))
}

/// Extends `c` (half-length `k >= 4`) by `x` and `y` when both see enough of
/// the cycle: at least `k-1` cycle neighbors each if `xy` is not an edge, at
/// least `ceil(k/2)+1` each if it is.
///
/// Tries the [`extend_lemma1`] patterns first. They do not cover every
/// placement when `xy` is not an edge, so the fallback searches for a
/// spanning cycle of `V(c) ∪ {x, y}`. Returns [`Error::HypothesisUnmet`] if
/// the degree condition fails and [`Error::Defect`] if no longer cycle exists
/// despite it.
pub fn extend_lemma2(
    g: &BipartiteGraph,
    c: &CycleWitness,
    x: usize,
    y: usize,
) -> Result<CycleWitness> {
    let k = c.half_length();
    if k < 4 {
        return Err(Error::contract(format!(
            "cycle extension needs k >= 4, got {k}"
        )));
    }
    if g.left_size() < k + 1 || g.right_size() < k + 1 {
        return Err(Error::contract(format!(
            "graph {}x{} cannot host a cycle of half-length {}",
            g.left_size(),
            g.right_size(),
            k + 1
        )));
    }
    check_extension_input(g, c, x, y)?;

    let x_hits = (g.row(x) & c.right_set().mask).count_ones() as usize;
    let y_hits = (g.column(y) & c.left_set().mask).count_ones() as usize;
    let adjacent = g.has_edge(x, y);
    let need = if adjacent { k.div_ceil(2) + 1 } else { k - 1 };
    if x_hits < need || y_hits < need {
        return Err(Error::HypothesisUnmet(format!(
            "x has {x_hits} and y has {y_hits} cycle neighbors, need {need} each (xy {})",
            if adjacent { "present" } else { "absent" }
        )));
    }

    if let Some(w) = extend_lemma1(g, c, x, y)? {
        return Ok(w);
    }

    let xs = VertexSet::new(Side::Left, c.left_set().mask | 1 << x);
    let ys = VertexSet::new(Side::Right, c.right_set().mask | 1 << y);
    let sub = induced(g, xs, ys)?;
    let (lmap, rmap) = (xs.to_vec(), ys.to_vec());
    match find_cycle(&sub, k + 1) {
        Some(w) => {
            let lifted = CycleWitness {
                left: w.left.iter().map(|&i| lmap[i]).collect(),
                right: w.right.iter().map(|&j| rmap[j]).collect(),
            };
            finish_extension(g, lifted).map(|w| w.expect("finish_extension returns Some"))
        }
        None => Err(Error::Defect(format!(
            "degree condition holds but no cycle of half-length {} spans the cycle plus ({x},{y})",
            k + 1
        ))),
    }
}

/// A cycle detector selectable by name.
pub trait CycleFinder: Named + Send + Sync {
    fn find(&self, g: &BipartiteGraph, k: usize) -> Result<Option<CycleWitness>>;
}

pub struct DfsFinder;

impl Named for DfsFinder {
    fn name(&self) -> &'static str {
        "dfs"
    }

    fn summary(&self) -> &'static str {
        "alternating path extension anchored at the smallest left vertex"
    }
}

impl CycleFinder for DfsFinder {
    fn find(&self, g: &BipartiteGraph, k: usize) -> Result<Option<CycleWitness>> {
        Ok(find_cycle(g, k))
    }
}

pub struct OracleFinder;

impl Named for OracleFinder {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn summary(&self) -> &'static str {
        "brute force over ordered vertex selections (at most 6 per side)"
    }
}

impl CycleFinder for OracleFinder {
    fn find(&self, g: &BipartiteGraph, k: usize) -> Result<Option<CycleWitness>> {
        oracle_find_cycle(g, k)
    }
}

pub fn cycle_finders() -> Registry<dyn CycleFinder> {
    let mut reg: Registry<dyn CycleFinder> = Registry::new("cycle finder");
    reg.register(Box::new(DfsFinder))
        .register(Box::new(OracleFinder));
    reg
}
