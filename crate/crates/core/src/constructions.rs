//! Extremal colorings that certify lower bounds on `BR(C_2m, C_2n)`, and the
//! `K_{3,4}` forcing check on `K_{8,8}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigraph::{contains_complete, BipartiteGraph, GraphEncoding, GraphJson, TwoColoring};
use crate::cycles::{find_cycle, CycleWitness};
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

fn check_half_lengths(m: usize, n: usize) -> Result<()> {
    if m < 2 || n < 2 {
        return Err(Error::contract(format!(
            "half-lengths must be at least 2, got m={m}, n={n}"
        )));
    }
    Ok(())
}

/// Splits the left side of `K_{m+n-2,m+n-2}`: rows `0..m-1` are complete in
/// red, rows `m-1..m+n-2` complete in blue.
pub fn theorem4_construction(m: usize, n: usize) -> Result<TwoColoring> {
    check_half_lengths(m, n)?;
    let b = m + n - 2;
    let mut red = BipartiteGraph::empty(b, b)?;
    for i in 0..m - 1 {
        for j in 0..b {
            red.insert_edge(i, j)?;
        }
    }
    Ok(TwoColoring::from_red(red))
}

/// The 7x7 coloring with no monochromatic `C_8`. Red is two `K_{3,3}` blocks
/// (`x_1..x_3` with `y_1..y_3`, `x_5..x_7` with `y_5..y_7`) joined by `x_4`,
/// which is red to every right vertex.
pub fn figure1_graph() -> TwoColoring {
    let adjacency: [&[usize]; 7] = [
        &[0, 1, 2],
        &[0, 1, 2],
        &[0, 1, 2],
        &[0, 1, 2, 3, 4, 5, 6],
        &[4, 5, 6],
        &[4, 5, 6],
        &[4, 5, 6],
    ];
    let edges = adjacency
        .iter()
        .enumerate()
        .flat_map(|(i, ns)| ns.iter().map(move |&j| (i, j)));
    TwoColoring::from_red(BipartiteGraph::from_edges(7, 7, edges).expect("7x7 fits"))
}

/// Board side of the strongest lower-bound coloring available for `(m, n)`.
pub fn lower_bound_board(m: usize, n: usize) -> usize {
    if (m, n) == (4, 4) {
        7
    } else {
        m + n - 2
    }
}

/// A generator of lower-bound colorings selectable by name.
pub trait Construction: Named + Send + Sync {
    fn coloring(&self, m: usize, n: usize) -> Result<TwoColoring>;

    /// Half-lengths used when the caller does not give any.
    fn default_half_lengths(&self) -> Option<(usize, usize)> {
        None
    }
}

pub struct Figure1;

impl Named for Figure1 {
    fn name(&self) -> &'static str {
        "figure1"
    }

    fn summary(&self) -> &'static str {
        "7x7 coloring without a monochromatic C8"
    }
}

impl Construction for Figure1 {
    fn coloring(&self, m: usize, n: usize) -> Result<TwoColoring> {
        if (m, n) != (4, 4) {
            return Err(Error::contract(format!(
                "figure1 is a (C8, C8) coloring, got m={m}, n={n}"
            )));
        }
        Ok(figure1_graph())
    }

    fn default_half_lengths(&self) -> Option<(usize, usize)> {
        Some((4, 4))
    }
}

pub struct Theorem4;

impl Named for Theorem4 {
    fn name(&self) -> &'static str {
        "theorem4"
    }

    fn summary(&self) -> &'static str {
        "K_{m-1,m+n-2} red beside K_{n-1,m+n-2} blue"
    }
}

impl Construction for Theorem4 {
    fn coloring(&self, m: usize, n: usize) -> Result<TwoColoring> {
        theorem4_construction(m, n)
    }
}

pub fn constructions() -> Registry<dyn Construction> {
    let mut reg: Registry<dyn Construction> = Registry::new("construction");
    reg.register(Box::new(Figure1)).register(Box::new(Theorem4));
    reg
}

/// A coloring together with the outcome of both cycle checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ReportJson", into = "ReportJson")]
pub struct ConstructionReport {
    pub construction_id: String,
    pub coloring: TwoColoring,
    pub checked_red_k: usize,
    pub checked_blue_k: usize,
    pub red_cycle_absent: bool,
    pub blue_cycle_absent: bool,
}

impl ConstructionReport {
    /// Runs both checks on `coloring`.
    pub fn check(id: &str, coloring: TwoColoring, red_k: usize, blue_k: usize) -> Self {
        let red_cycle_absent = find_cycle(coloring.red(), red_k).is_none();
        let blue_cycle_absent = find_cycle(&coloring.blue(), blue_k).is_none();
        ConstructionReport {
            construction_id: id.to_string(),
            coloring,
            checked_red_k: red_k,
            checked_blue_k: blue_k,
            red_cycle_absent,
            blue_cycle_absent,
        }
    }

    pub fn board(&self) -> usize {
        self.coloring.board().0
    }

    pub fn passed(&self) -> bool {
        self.red_cycle_absent && self.blue_cycle_absent
    }

    /// Recomputes both flags from the stored coloring and compares.
    pub fn recheck(&self) -> bool {
        let fresh = Self::check(
            &self.construction_id,
            self.coloring.clone(),
            self.checked_red_k,
            self.checked_blue_k,
        );
        fresh == *self
    }

    pub fn to_json(&self, encoding: GraphEncoding) -> ReportJson {
        ReportJson {
            id: self.construction_id.clone(),
            board: self.board(),
            red_k: self.checked_red_k,
            blue_k: self.checked_blue_k,
            coloring: self.coloring.red().to_json(encoding),
            red_absent: self.red_cycle_absent,
            blue_absent: self.blue_cycle_absent,
        }
    }
}

/// Wire form of a [`ConstructionReport`]. Graph indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub id: String,
    pub board: usize,
    pub red_k: usize,
    pub blue_k: usize,
    pub coloring: GraphJson,
    pub red_absent: bool,
    pub blue_absent: bool,
}

impl From<ConstructionReport> for ReportJson {
    fn from(r: ConstructionReport) -> Self {
        r.to_json(GraphEncoding::Edges)
    }
}

impl TryFrom<ReportJson> for ConstructionReport {
    type Error = Error;

    fn try_from(raw: ReportJson) -> Result<Self> {
        let red = BipartiteGraph::try_from(raw.coloring)?;
        if red.left_size() != raw.board || red.right_size() != raw.board {
            return Err(Error::format(
                "board",
                "does not match the coloring dimensions",
            ));
        }
        Ok(ConstructionReport {
            construction_id: raw.id,
            coloring: TwoColoring::from_red(red),
            checked_red_k: raw.red_k,
            checked_blue_k: raw.blue_k,
            red_cycle_absent: raw.red_absent,
            blue_cycle_absent: raw.blue_absent,
        })
    }
}

/// The checked lower-bound coloring for `(m, n)`: Figure 1 for `(4, 4)`, the
/// two-block split otherwise. Fails with [`Error::Defect`] if a check fails.
pub fn lower_bound_certificate(m: usize, n: usize) -> Result<ConstructionReport> {
    check_half_lengths(m, n)?;
    let (id, coloring) = if (m, n) == (4, 4) {
        (Figure1.name(), figure1_graph())
    } else {
        (Theorem4.name(), theorem4_construction(m, n)?)
    };
    let report = ConstructionReport::check(id, coloring, m, n);
    if !report.passed() {
        return Err(Error::Defect(format!(
            "{id} coloring for (m,n)=({m},{n}) has a monochromatic target cycle"
        )));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prop1Verdict {
    Red(CycleWitness),
    Blue(CycleWitness),
    /// No `C_8` in either color: the forcing claim is false for this graph.
    Neither,
}

/// For `g` on 8x8 containing `K_{3,4}`, finds a `C_8` in `g` or in its complement.
pub fn proposition1_check(g: &BipartiteGraph) -> Result<Prop1Verdict> {
    if g.left_size() != 8 || g.right_size() != 8 {
        return Err(Error::HypothesisUnmet(format!(
            "graph is {}x{}, not 8x8",
            g.left_size(),
            g.right_size()
        )));
    }
    if contains_complete(g, 3, 4).is_none() {
        return Err(Error::HypothesisUnmet("graph has no K_{3,4}".into()));
    }
    if let Some(w) = find_cycle(g, 4) {
        return Ok(Prop1Verdict::Red(w));
    }
    let coloring = TwoColoring::from_red(g.clone());
    Ok(match find_cycle(&coloring.blue(), 4) {
        Some(w) => Prop1Verdict::Blue(w),
        None => Prop1Verdict::Neither,
    })
}

/// Sample `index` of a seeded sweep: `K_{3,4}` planted on `{0,1,2} x {0,1,2,3}`,
/// every other pair an edge with probability 1/2.
pub fn proposition1_sample(seed: u64, index: u64) -> BipartiteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut g = BipartiteGraph::empty(8, 8).expect("8x8 fits");
    for i in 0..8 {
        for j in 0..8 {
            let planted = i < 3 && j < 4;
            if planted || rng.gen_bool(0.5) {
                g.insert_edge(i, j).expect("in range");
            }
        }
    }
    g
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop1Sweep {
    pub seed: u64,
    pub samples: u64,
    pub red: u64,
    pub blue: u64,
    /// Indices of samples with no `C_8` in either color.
    pub neither: Vec<u64>,
}

impl Prop1Sweep {
    pub fn holds(&self) -> bool {
        self.neither.is_empty() && self.red + self.blue == self.samples
    }
}

/// Checks `samples` seeded random supergraphs of `K_{3,4}` in parallel.
pub fn proposition1_sweep(samples: u64, seed: u64) -> Result<Prop1Sweep> {
    let verdicts: Vec<(u64, Prop1Verdict)> = (0..samples)
        .into_par_iter()
        .map(|i| proposition1_check(&proposition1_sample(seed, i)).map(|v| (i, v)))
        .collect::<Result<_>>()?;
    let mut sweep = Prop1Sweep {
        seed,
        samples,
        ..Default::default()
    };
    for (i, v) in verdicts {
        match v {
            Prop1Verdict::Red(_) => sweep.red += 1,
            Prop1Verdict::Blue(_) => sweep.blue += 1,
            Prop1Verdict::Neither => sweep.neither.push(i),
        }
    }
    Ok(sweep)
}
