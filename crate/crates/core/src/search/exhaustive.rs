//! Branch-and-prune over cell colorings of `K_{b,b}` in row-major order.
//!
//! Pruning:
//! * a cell is never colored if that closes a target cycle in its color; only
//!   cycles through the new cell need checking since colors are never undone;
//! * rows appear in non-increasing order of red degree (rows are interchangeable);
//! * columns that agree on all earlier rows are interchangeable, so inside
//!   each such class the current row is red on a prefix and blue after it;
//! * for `m == n`, colors are interchangeable, so only colorings with at least
//!   as many red cells as blue ones are visited.
//!
//! Every coloring can be brought to a form meeting all three symmetry rules
//! (sort rows by degree, optionally swap colors first, then sort columns class
//! by class, row by row), so no equivalence class is lost.
//!
//! For parallel runs the first `split_rows` rows are enumerated up front; each
//! partial coloring is an independent job, and jobs are numbered in search
//! order so the first counterexample is well defined.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::bigraph::{low_mask, BipartiteGraph, TwoColoring};
use crate::cycles::PathSearch;
use crate::error::Result;
use crate::registry::Named;

use super::{
    seeded_counterexample, Decider, RamseyQuery, SearchOptions, SearchOutcome, SearchStats,
    Verdict, POLL_INTERVAL,
};

pub struct ExhaustiveDecider;

impl Named for ExhaustiveDecider {
    fn name(&self) -> &'static str {
        "exhaustive"
    }

    fn summary(&self) -> &'static str {
        "symmetry-reduced branch and prune with incremental cycle checks"
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Flow {
    Continue,
    Found,
    Stop,
}

struct Shared {
    deadline: Instant,
    node_limit: Option<u64>,
    deterministic: bool,
    cancel: AtomicBool,
    timed_out: AtomicBool,
    exhausted: AtomicBool,
    total_nodes: AtomicU64,
    best_job: AtomicUsize,
    best: Mutex<Option<(usize, Vec<u64>)>>,
}

#[derive(Clone)]
struct Board {
    b: usize,
    m: usize,
    n: usize,
    symmetry: bool,
    red_rows: Vec<u64>,
    red_cols: Vec<u64>,
    blue_rows: Vec<u64>,
    blue_cols: Vec<u64>,
    row_red: Vec<usize>,
    red_total: usize,
}

impl Board {
    fn new(q: &RamseyQuery, symmetry: bool) -> Self {
        Board {
            b: q.b,
            m: q.m,
            n: q.n,
            symmetry,
            red_rows: vec![0; q.b],
            red_cols: vec![0; q.b],
            blue_rows: vec![0; q.b],
            blue_cols: vec![0; q.b],
            row_red: vec![0; q.b],
            red_total: 0,
        }
    }

    fn set(&mut self, i: usize, j: usize, red: bool) {
        if red {
            self.red_rows[i] |= 1 << j;
            self.red_cols[j] |= 1 << i;
            self.row_red[i] += 1;
            self.red_total += 1;
        } else {
            self.blue_rows[i] |= 1 << j;
            self.blue_cols[j] |= 1 << i;
        }
    }

    fn unset(&mut self, i: usize, j: usize, red: bool) {
        if red {
            self.red_rows[i] &= !(1 << j);
            self.red_cols[j] &= !(1 << i);
            self.row_red[i] -= 1;
            self.red_total -= 1;
        } else {
            self.blue_rows[i] &= !(1 << j);
            self.blue_cols[j] &= !(1 << i);
        }
    }

    /// Columns `j - 1` and `j` agree on rows `0..i`.
    fn same_class(&self, i: usize, j: usize) -> bool {
        j > 0 && (self.red_cols[j] ^ self.red_cols[j - 1]) & low_mask(i) == 0
    }

    fn symmetry_allows(&self, i: usize, j: usize, red: bool) -> bool {
        let b = self.b;
        if !self.symmetry {
            return true;
        }
        if red {
            if self.same_class(i, j) && self.blue_rows[i] >> (j - 1) & 1 == 1 {
                return false;
            }
            if i > 0 && self.row_red[i] + 1 > self.row_red[i - 1] {
                return false;
            }
            true
        } else {
            if self.m == self.n {
                let cells_after = b * b - (i * b + j) - 1;
                if 2 * (self.red_total + cells_after) < b * b {
                    return false;
                }
            }
            true
        }
    }

    /// Coloring `(i, j)` closed a target cycle in its color.
    fn closes_cycle(&self, i: usize, j: usize, red: bool) -> bool {
        let (rows, cols, k) = if red {
            (&self.red_rows, &self.red_cols, self.m)
        } else {
            (&self.blue_rows, &self.blue_cols, self.n)
        };
        // Rows 0..=i are the only ones with colored cells.
        if k > i + 1 {
            return false;
        }
        PathSearch::new(rows, cols, k).through(i, j)
    }
}

#[derive(Default)]
struct Counters {
    nodes: u64,
    pending: u64,
    prunes_red: u64,
    prunes_blue: u64,
    prunes_sym: u64,
}

struct Worker<'a> {
    shared: &'a Shared,
    board: Board,
    counters: Counters,
    job: usize,
    split: usize,
    frontier: Option<Vec<Board>>,
}

impl<'a> Worker<'a> {
    fn poll(&mut self) -> bool {
        let shared = self.shared;
        let total = shared
            .total_nodes
            .fetch_add(self.counters.pending, Ordering::Relaxed)
            + self.counters.pending;
        self.counters.pending = 0;
        if shared.cancel.load(Ordering::Relaxed) {
            return true;
        }
        if shared.deterministic && shared.best_job.load(Ordering::Relaxed) < self.job {
            return true;
        }
        if Instant::now() >= shared.deadline {
            shared.timed_out.store(true, Ordering::Relaxed);
            shared.cancel.store(true, Ordering::Relaxed);
            return true;
        }
        if shared.node_limit.is_some_and(|limit| total >= limit) {
            shared.exhausted.store(true, Ordering::Relaxed);
            shared.cancel.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }

    fn dfs(&mut self, pos: usize) -> Flow {
        let b = self.board.b;
        if pos == self.split {
            if let Some(frontier) = self.frontier.as_mut() {
                frontier.push(self.board.clone());
                return Flow::Continue;
            }
        }
        if pos == b * b {
            return Flow::Found;
        }
        self.counters.nodes += 1;
        self.counters.pending += 1;
        if self.counters.pending >= POLL_INTERVAL && self.poll() {
            return Flow::Stop;
        }

        let (i, j) = (pos / b, pos % b);
        for red in [true, false] {
            if !self.board.symmetry_allows(i, j, red) {
                self.counters.prunes_sym += 1;
                continue;
            }
            self.board.set(i, j, red);
            if self.board.closes_cycle(i, j, red) {
                if red {
                    self.counters.prunes_red += 1;
                } else {
                    self.counters.prunes_blue += 1;
                }
                self.board.unset(i, j, red);
                continue;
            }
            match self.dfs(pos + 1) {
                Flow::Continue => self.board.unset(i, j, red),
                // The board is left colored so the caller can read the witness.
                found_or_stop => return found_or_stop,
            }
        }
        Flow::Continue
    }

    fn fold_into(&self, stats: &mut SearchStats) {
        stats.nodes += self.counters.nodes;
        stats.prunes_red += self.counters.prunes_red;
        stats.prunes_blue += self.counters.prunes_blue;
        stats.prunes_sym += self.counters.prunes_sym;
    }
}

impl Decider for ExhaustiveDecider {
    fn decide(&self, query: &RamseyQuery, opts: &SearchOptions) -> Result<SearchOutcome> {
        query.validate()?;
        opts.validate()?;
        let start = Instant::now();
        let mut stats = SearchStats {
            workers: opts.workers,
            ..Default::default()
        };

        if opts.use_seed && !opts.deterministic {
            if let Some(witness) = seeded_counterexample(query) {
                stats.seeded = true;
                stats.elapsed_ms = start.elapsed().as_millis() as u64;
                return Ok(SearchOutcome {
                    query: *query,
                    verdict: Verdict::Counterexample,
                    witness: Some(witness),
                    stats,
                });
            }
        }

        let b = query.b;
        let shared = Shared {
            deadline: start + opts.budget,
            node_limit: opts.node_limit,
            deterministic: opts.deterministic,
            cancel: AtomicBool::new(false),
            timed_out: AtomicBool::new(false),
            exhausted: AtomicBool::new(false),
            total_nodes: AtomicU64::new(0),
            best_job: AtomicUsize::new(usize::MAX),
            best: Mutex::new(None),
        };
        let split = (opts.split_rows * b).min(b * b);

        let mut root = Worker {
            shared: &shared,
            board: Board::new(query, opts.symmetry),
            counters: Counters::default(),
            job: 0,
            split,
            frontier: Some(Vec::new()),
        };
        let root_flow = root.dfs(0);
        root.poll();
        root.fold_into(&mut stats);
        let jobs = root.frontier.take().unwrap_or_default();

        if root_flow != Flow::Stop {
            let next_job = AtomicUsize::new(0);
            let per_worker: Vec<Counters> = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..opts.workers)
                    .map(|_| {
                        let shared = &shared;
                        let jobs = &jobs;
                        let next_job = &next_job;
                        scope.spawn(move || run_jobs(shared, jobs, next_job, split))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("search worker panicked"))
                    .collect()
            });
            for c in per_worker {
                stats.nodes += c.nodes;
                stats.prunes_red += c.prunes_red;
                stats.prunes_blue += c.prunes_blue;
                stats.prunes_sym += c.prunes_sym;
            }
        }

        let timed_out = shared.timed_out.load(Ordering::Relaxed);
        let exhausted = shared.exhausted.load(Ordering::Relaxed);
        let best = shared.best.into_inner().expect("result lock poisoned");
        let witness = match best {
            Some((_, rows)) => Some(TwoColoring::from_red(BipartiteGraph::from_rows(
                b, b, rows,
            )?)),
            None => None,
        };
        let verdict = match (&witness, timed_out || exhausted) {
            (Some(_), _) => Verdict::Counterexample,
            (None, true) => Verdict::Timeout,
            (None, false) => Verdict::Holds,
        };
        stats.deterministic = opts.deterministic && !timed_out && !exhausted;
        stats.resource_exhausted = exhausted;
        stats.elapsed_ms = start.elapsed().as_millis() as u64;
        let outcome = SearchOutcome {
            query: *query,
            verdict,
            witness,
            stats,
        };
        debug_assert!(outcome.check_invariants().is_ok());
        Ok(outcome)
    }
}

fn run_jobs(shared: &Shared, jobs: &[Board], next_job: &AtomicUsize, split: usize) -> Counters {
    let mut worker: Option<Worker> = None;
    let mut totals = Counters::default();
    loop {
        let idx = next_job.fetch_add(1, Ordering::Relaxed);
        if idx >= jobs.len() || shared.cancel.load(Ordering::Relaxed) {
            break;
        }
        // Later jobs cannot beat a counterexample already found in an earlier one.
        if shared.deterministic && shared.best_job.load(Ordering::Relaxed) < idx {
            break;
        }
        let w = worker.get_or_insert_with(|| Worker {
            shared,
            board: jobs[idx].clone(),
            counters: Counters::default(),
            job: idx,
            split,
            frontier: None,
        });
        w.board = jobs[idx].clone();
        w.job = idx;
        let flow = w.dfs(split);
        if flow == Flow::Found {
            let mut best = shared.best.lock().expect("result lock poisoned");
            if best.as_ref().is_none_or(|(j, _)| idx < *j) {
                *best = Some((idx, w.board.red_rows.clone()));
                shared.best_job.fetch_min(idx, Ordering::Relaxed);
            }
            if !shared.deterministic {
                shared.cancel.store(true, Ordering::Relaxed);
            }
        }
    }
    if let Some(mut w) = worker {
        w.poll();
        totals = std::mem::take(&mut w.counters);
    }
    totals
}
