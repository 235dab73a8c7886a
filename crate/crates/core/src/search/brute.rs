use std::time::Instant;

use crate::bigraph::{BipartiteGraph, TwoColoring};
use crate::cycles::find_cycle;
use crate::error::{Error, Result};
use crate::registry::Named;

use super::{Decider, RamseyQuery, SearchOptions, SearchOutcome, SearchStats, Verdict};

/// Largest `b * b` the brute-force decider accepts.
pub const BRUTE_FORCE_MAX_CELLS: usize = 20;

/// Tries all `2^(b*b)` colorings with no pruning or symmetry reduction.
/// Cell `(i, j)` is bit `i * b + j` of the enumeration counter.
pub struct BruteForceDecider;

impl Named for BruteForceDecider {
    fn name(&self) -> &'static str {
        "brute"
    }

    fn summary(&self) -> &'static str {
        "enumerate every coloring (b*b <= 20)"
    }
}

impl Decider for BruteForceDecider {
    fn decide(&self, query: &RamseyQuery, opts: &SearchOptions) -> Result<SearchOutcome> {
        query.validate()?;
        opts.validate()?;
        let b = query.b;
        if b * b > BRUTE_FORCE_MAX_CELLS {
            return Err(Error::OracleBound(format!(
                "{b}x{b} board has {} cells, brute force stops at {BRUTE_FORCE_MAX_CELLS}",
                b * b
            )));
        }
        let start = Instant::now();
        let row_mask = (1u64 << b) - 1;
        let mut stats = SearchStats {
            workers: 1,
            deterministic: true,
            ..Default::default()
        };
        let mut witness = None;
        let mut timed_out = false;
        for code in 0u64..(1u64 << (b * b)) {
            stats.nodes += 1;
            if stats.nodes.is_multiple_of(super::POLL_INTERVAL) && start.elapsed() >= opts.budget {
                timed_out = true;
                break;
            }
            let rows = (0..b).map(|i| (code >> (i * b)) & row_mask).collect();
            let red = BipartiteGraph::from_rows(b, b, rows)?;
            if find_cycle(&red, query.m).is_some() {
                stats.prunes_red += 1;
                continue;
            }
            let coloring = TwoColoring::from_red(red);
            if find_cycle(&coloring.blue(), query.n).is_some() {
                stats.prunes_blue += 1;
                continue;
            }
            witness = Some(coloring);
            break;
        }
        stats.elapsed_ms = start.elapsed().as_millis() as u64;
        let verdict = match (&witness, timed_out) {
            (Some(_), _) => Verdict::Counterexample,
            (None, true) => Verdict::Timeout,
            (None, false) => Verdict::Holds,
        };
        Ok(SearchOutcome {
            query: *query,
            verdict,
            witness,
            stats,
        })
    }
}
