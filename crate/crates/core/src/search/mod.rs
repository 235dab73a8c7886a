//! Deciding `b >= BR(C_2m, C_2n)`: does every red/blue coloring of `K_{b,b}`
//! contain a red `C_2m` or a blue `C_2n`?
//!
//! A `Holds` verdict is an attestation that the search completed; unlike a
//! counterexample it carries nothing a third party can recheck.

mod brute;
mod exhaustive;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bigraph::{BipartiteGraph, GraphEncoding, GraphJson, TwoColoring, MAX_SIDE};
use crate::constructions::{lower_bound_board, lower_bound_certificate};
use crate::cycles::find_cycle;
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

pub use brute::{BruteForceDecider, BRUTE_FORCE_MAX_CELLS};
pub use exhaustive::ExhaustiveDecider;

/// Timeout and cancellation are polled once per this many expanded nodes.
pub const POLL_INTERVAL: u64 = 1 << 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RamseyQuery {
    pub b: usize,
    pub m: usize,
    pub n: usize,
}

impl RamseyQuery {
    pub fn new(b: usize, m: usize, n: usize) -> Result<Self> {
        let q = RamseyQuery { b, m, n };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b < 1 || self.b > MAX_SIDE {
            return Err(Error::contract(format!(
                "board side must be in 1..=64, got {}",
                self.b
            )));
        }
        if self.m < 2 || self.n < 2 {
            return Err(Error::contract(format!(
                "half-lengths must be at least 2, got m={}, n={}",
                self.m, self.n
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Counterexample,
    Timeout,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes_red: u64,
    pub prunes_blue: u64,
    pub prunes_sym: u64,
    pub elapsed_ms: u64,
    pub workers: usize,
    /// The witness (if any) is the first one in search order.
    pub deterministic: bool,
    /// The node limit, not the clock, stopped the search.
    pub resource_exhausted: bool,
    /// The witness came from a known construction, not from search.
    pub seeded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub query: RamseyQuery,
    pub verdict: Verdict,
    pub witness: Option<TwoColoring>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    /// A counterexample must avoid both cycles; other verdicts carry no witness.
    pub fn check_invariants(&self) -> Result<()> {
        match (self.verdict, &self.witness) {
            (Verdict::Counterexample, Some(w)) => {
                if w.board() != (self.query.b, self.query.b) {
                    return Err(Error::format(
                        "witness",
                        "board size does not match the query",
                    ));
                }
                if let Some(c) = find_cycle(w.red(), self.query.m) {
                    return Err(Error::format(
                        "witness",
                        format!("red graph contains a C{}: {:?}", 2 * self.query.m, c),
                    ));
                }
                if let Some(c) = find_cycle(&w.blue(), self.query.n) {
                    return Err(Error::format(
                        "witness",
                        format!("blue graph contains a C{}: {:?}", 2 * self.query.n, c),
                    ));
                }
                Ok(())
            }
            (Verdict::Counterexample, None) => Err(Error::format(
                "witness",
                "counterexample verdict without a witness",
            )),
            (_, Some(_)) => Err(Error::format(
                "witness",
                "only counterexamples carry a witness",
            )),
            (_, None) => Ok(()),
        }
    }

    pub fn to_json(&self, encoding: GraphEncoding) -> OutcomeJson {
        OutcomeJson {
            query: self.query,
            verdict: self.verdict,
            witness: self.witness.as_ref().map(|w| w.red().to_json(encoding)),
            stats: StatsJson {
                nodes: self.stats.nodes,
                prunes_red: self.stats.prunes_red,
                prunes_blue: self.stats.prunes_blue,
                prunes_sym: self.stats.prunes_sym,
                elapsed_ms: self.stats.elapsed_ms,
                workers: self.stats.workers,
            },
        }
    }
}

/// Wire form of a [`SearchOutcome`]. The witness is the red graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeJson {
    pub query: RamseyQuery,
    pub verdict: Verdict,
    pub witness: Option<GraphJson>,
    pub stats: StatsJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsJson {
    pub nodes: u64,
    pub prunes_red: u64,
    pub prunes_blue: u64,
    pub prunes_sym: u64,
    pub elapsed_ms: u64,
    pub workers: usize,
}

impl TryFrom<OutcomeJson> for SearchOutcome {
    type Error = Error;

    fn try_from(raw: OutcomeJson) -> Result<Self> {
        raw.query
            .validate()
            .map_err(|e| Error::format("query", e.to_string()))?;
        let witness = raw
            .witness
            .map(BipartiteGraph::try_from)
            .transpose()?
            .map(TwoColoring::from_red);
        let outcome = SearchOutcome {
            query: raw.query,
            verdict: raw.verdict,
            witness,
            stats: SearchStats {
                nodes: raw.stats.nodes,
                prunes_red: raw.stats.prunes_red,
                prunes_blue: raw.stats.prunes_blue,
                prunes_sym: raw.stats.prunes_sym,
                elapsed_ms: raw.stats.elapsed_ms,
                workers: raw.stats.workers,
                ..Default::default()
            },
        };
        outcome.check_invariants()?;
        Ok(outcome)
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub budget: Duration,
    pub workers: usize,
    /// Return the first counterexample in search order regardless of worker
    /// count. Also disables seeding from known constructions.
    pub deterministic: bool,
    /// Answer from a known lower-bound construction when the board is small enough.
    pub use_seed: bool,
    pub node_limit: Option<u64>,
    /// Rows colored before the tree is split into parallel jobs.
    pub split_rows: usize,
    /// Apply the row, column and color symmetry rules. Turning this off
    /// leaves only cycle pruning, which is slower but trivially complete.
    pub symmetry: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: Duration::from_secs(300),
            workers: 1,
            deterministic: false,
            use_seed: true,
            node_limit: None,
            split_rows: 2,
            symmetry: true,
        }
    }
}

impl SearchOptions {
    pub fn with_budget(budget: Duration) -> Self {
        SearchOptions {
            budget,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget.is_zero() {
            return Err(Error::contract("search budget must be positive"));
        }
        if self.workers == 0 {
            return Err(Error::contract("need at least one worker"));
        }
        Ok(())
    }
}

/// A decision procedure selectable by name.
pub trait Decider: Named + Send + Sync {
    fn decide(&self, query: &RamseyQuery, opts: &SearchOptions) -> Result<SearchOutcome>;
}

pub fn deciders() -> Registry<dyn Decider> {
    let mut reg: Registry<dyn Decider> = Registry::new("decider");
    reg.register(Box::new(ExhaustiveDecider))
        .register(Box::new(BruteForceDecider));
    reg
}

/// Symmetry-reduced exhaustive search (see [`ExhaustiveDecider`]).
pub fn decide(query: &RamseyQuery, opts: &SearchOptions) -> Result<SearchOutcome> {
    ExhaustiveDecider.decide(query, opts)
}

/// The known lower-bound coloring cut down to `K_{b,b}`, if it is large enough.
/// Deleting vertices cannot create cycles, so the restriction still avoids both.
pub fn seeded_counterexample(query: &RamseyQuery) -> Option<TwoColoring> {
    query.validate().ok()?;
    if query.b > lower_bound_board(query.m, query.n) {
        return None;
    }
    let report = lower_bound_certificate(query.m, query.n).ok()?;
    let coloring = report.coloring.restrict(query.b, query.b).ok()?;
    let valid = find_cycle(coloring.red(), query.m).is_none()
        && find_cycle(&coloring.blue(), query.n).is_none();
    valid.then_some(coloring)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrComputation {
    pub m: usize,
    pub n: usize,
    /// `BR(C_2m, C_2n)` if it was pinned down within `max_b` and the budget.
    pub value: Option<usize>,
    /// One outcome per board side tried, in increasing order from 1.
    pub outcomes: Vec<SearchOutcome>,
}

/// Scans `b = 1, 2, ..` up to `max_b` for the first board where the search
/// holds. `opts.budget` bounds the whole scan. Larger boards are not searched
/// once one holds: a counterexample on `K_{b+1,b+1}` would restrict to one on
/// `K_{b,b}`.
pub fn compute_br(m: usize, n: usize, max_b: usize, opts: &SearchOptions) -> Result<BrComputation> {
    compute_br_with(&ExhaustiveDecider, m, n, max_b, opts)
}

pub fn compute_br_with(
    decider: &dyn Decider,
    m: usize,
    n: usize,
    max_b: usize,
    opts: &SearchOptions,
) -> Result<BrComputation> {
    if max_b > MAX_SIDE {
        return Err(Error::contract(format!("max_b must be at most {MAX_SIDE}")));
    }
    opts.validate()?;
    let deadline = Instant::now() + opts.budget;
    let mut result = BrComputation {
        m,
        n,
        value: None,
        outcomes: Vec::new(),
    };
    for b in 1..=max_b {
        let query = RamseyQuery::new(b, m, n)?;
        let remaining = deadline.saturating_duration_since(Instant::now());
        if remaining.is_zero() {
            break;
        }
        let outcome = decider.decide(
            &query,
            &SearchOptions {
                budget: remaining,
                ..opts.clone()
            },
        )?;
        let verdict = outcome.verdict;
        result.outcomes.push(outcome);
        match verdict {
            Verdict::Counterexample => continue,
            Verdict::Holds => {
                result.value = Some(b);
                break;
            }
            Verdict::Timeout => break,
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SearchOptions {
        SearchOptions::with_budget(Duration::from_secs(60))
    }

    #[test]
    fn query_validation() {
        assert!(RamseyQuery::new(0, 2, 2).is_err());
        assert!(RamseyQuery::new(65, 2, 2).is_err());
        assert!(RamseyQuery::new(3, 1, 2).is_err());
        assert!(RamseyQuery::new(3, 2, 2).is_ok());
    }

    #[test]
    fn seeded_examples() {
        let q = RamseyQuery::new(6, 4, 4).unwrap();
        let c = seeded_counterexample(&q).unwrap();
        assert_eq!(c.board(), (6, 6));
        assert!(find_cycle(c.red(), 4).is_none() && find_cycle(&c.blue(), 4).is_none());
        let c = seeded_counterexample(&RamseyQuery::new(7, 4, 4).unwrap()).unwrap();
        assert_eq!(c, crate::constructions::figure1_graph());
        assert_eq!(
            seeded_counterexample(&RamseyQuery::new(8, 4, 4).unwrap()),
            None
        );
        assert_eq!(
            seeded_counterexample(&RamseyQuery::new(5, 2, 2).unwrap()),
            None
        );
    }

    #[test]
    fn trivial_board() {
        let q = RamseyQuery::new(1, 2, 2).unwrap();
        let mut opts = quick();
        opts.use_seed = false;
        let out = decide(&q, &opts).unwrap();
        assert_eq!(out.verdict, Verdict::Counterexample);
        out.check_invariants().unwrap();
    }

    #[test]
    fn c4_c4_threshold() {
        let mut opts = quick();
        opts.use_seed = false;
        let out = decide(&RamseyQuery::new(4, 2, 2).unwrap(), &opts).unwrap();
        assert_eq!(out.verdict, Verdict::Counterexample);
        out.check_invariants().unwrap();
        let out = decide(&RamseyQuery::new(5, 2, 2).unwrap(), &opts).unwrap();
        assert_eq!(out.verdict, Verdict::Holds);
        assert!(out.witness.is_none());
    }

    #[test]
    fn compute_small_values() {
        let r = compute_br(2, 2, 6, &quick()).unwrap();
        assert_eq!(r.value, Some(5));
        assert_eq!(r.outcomes.len(), 5);
        assert!(r.outcomes[..4]
            .iter()
            .all(|o| o.verdict == Verdict::Counterexample));

        let r = compute_br(2, 2, 3, &quick()).unwrap();
        assert_eq!(r.value, None);
        assert_eq!(r.outcomes.len(), 3);
    }

    #[test]
    fn outcome_json_validates_witness() {
        let q = RamseyQuery::new(4, 4, 2).unwrap();
        let out = decide(&q, &quick()).unwrap();
        let json = serde_json::to_value(out.to_json(GraphEncoding::Edges)).unwrap();
        assert_eq!(json["verdict"], "counterexample");
        assert_eq!(json["query"]["b"], 4);
        let back =
            SearchOutcome::try_from(serde_json::from_value::<OutcomeJson>(json.clone()).unwrap())
                .unwrap();
        assert_eq!(back.witness, out.witness);

        let mut forged = json.clone();
        forged["witness"] = serde_json::to_value(BipartiteGraph::complete(4, 4).unwrap()).unwrap();
        let raw: OutcomeJson = serde_json::from_value(forged).unwrap();
        assert!(SearchOutcome::try_from(raw).is_err());

        let mut holds = json;
        holds["verdict"] = "holds".into();
        let raw: OutcomeJson = serde_json::from_value(holds).unwrap();
        assert!(SearchOutcome::try_from(raw).is_err());
    }
}
