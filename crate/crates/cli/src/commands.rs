use std::fmt::Write as _;
use std::fs;

use anyhow::{bail, Context, Result};
use bramsey::bigraph::{BipartiteGraph, TwoColoring};
use bramsey::constructions::{
    constructions, lower_bound_certificate, proposition1_sweep, ConstructionReport,
};
use bramsey::cycles::cycle_finders;
use bramsey::search::{compute_br, deciders, RamseyQuery, SearchOutcome, Verdict};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, OutputFormat, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_TIMEOUT: u8 = 3;

pub fn run(cfg: &RunConfig) -> Result<u8> {
    match cfg.command.clone() {
        Command::VerifyConstruction { kind, m, n } => verify_construction(cfg, &kind, m, n),
        Command::Decide {
            b,
            m,
            n,
            strategy,
            no_seed,
        } => decide(cfg, b, m, n, &strategy, no_seed),
        Command::ComputeBr { m, n, max_b } => compute(cfg, m, n, max_b),
        Command::Table {
            max_n,
            search_up_to,
        } => table(cfg, max_n, search_up_to),
        Command::CheckCycle { file, k, detector } => check_cycle(cfg, &file, k, &detector),
        Command::Prop1Sweep { samples } => prop1(cfg, samples),
        Command::List => list(),
    }
}

fn emit(cfg: &RunConfig, pretty: &str, value: &Value) -> Result<()> {
    let text = match cfg.format {
        OutputFormat::Compact => serde_json::to_string(value)?,
        _ => serde_json::to_string_pretty(value)?,
    };
    match cfg.format {
        OutputFormat::Pretty => print!("{pretty}"),
        _ => println!("{text}"),
    }
    if let Some(path) = &cfg.out {
        fs::write(path, format!("{text}\n"))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn matrix(c: &TwoColoring) -> String {
    let (l, r) = c.board();
    let mut s = String::new();
    for i in 0..l {
        let line: String = (0..r)
            .map(|j| if c.red().has_edge(i, j) { 'R' } else { 'b' })
            .collect();
        let _ = writeln!(s, "  x{:<2} {line}", i + 1);
    }
    s
}

fn verify_construction(
    cfg: &RunConfig,
    kind: &str,
    m: Option<usize>,
    n: Option<usize>,
) -> Result<u8> {
    let registry = constructions();
    let construction = registry.get(kind)?;
    let (m, n) = match (m, n, construction.default_half_lengths()) {
        (Some(m), Some(n), _) => (m, n),
        (None, None, Some(d)) => d,
        _ => bail!("--kind {kind} needs both --m and --n"),
    };
    if m < 2 || n < 2 {
        bail!("half-lengths must be at least 2, got m={m}, n={n}");
    }
    let coloring = construction.coloring(m, n)?;
    let report = ConstructionReport::check(kind, coloring, m, n);
    let pretty = format!(
        "{kind}: board {b}x{b}, red C{} {}, blue C{} {}\n{}",
        2 * m,
        if report.red_cycle_absent {
            "absent"
        } else {
            "PRESENT"
        },
        2 * n,
        if report.blue_cycle_absent {
            "absent"
        } else {
            "PRESENT"
        },
        matrix(&report.coloring),
        b = report.board(),
    );
    emit(
        cfg,
        &pretty,
        &serde_json::to_value(report.to_json(cfg.format.encoding()))?,
    )?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn verdict_exit(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => EXIT_OK,
        Verdict::Counterexample => EXIT_NEGATIVE,
        Verdict::Timeout => EXIT_TIMEOUT,
    }
}

fn describe(out: &SearchOutcome) -> String {
    let q = out.query;
    let s = &out.stats;
    let mut text = match out.verdict {
        Verdict::Holds => format!(
            "holds: every 2-coloring of K_{{{b},{b}}} has a red C{} or a blue C{}\n",
            2 * q.m,
            2 * q.n,
            b = q.b
        ),
        Verdict::Counterexample => format!(
            "counterexample: K_{{{b},{b}}} coloring with no red C{} and no blue C{}{}\n",
            2 * q.m,
            2 * q.n,
            if s.seeded {
                " (from known construction)"
            } else {
                ""
            },
            b = q.b
        ),
        Verdict::Timeout => format!(
            "timeout: search on K_{{{b},{b}}} did not finish{}\n",
            if s.resource_exhausted {
                " (node limit reached)"
            } else {
                ""
            },
            b = q.b
        ),
    };
    let _ = writeln!(
        text,
        "  nodes={} prunes_red={} prunes_blue={} prunes_sym={} elapsed={}ms workers={}",
        s.nodes, s.prunes_red, s.prunes_blue, s.prunes_sym, s.elapsed_ms, s.workers
    );
    if let Some(w) = &out.witness {
        text.push_str(&matrix(w));
    }
    text
}

fn decide(
    cfg: &RunConfig,
    b: usize,
    m: usize,
    n: usize,
    strategy: &str,
    no_seed: bool,
) -> Result<u8> {
    let query = RamseyQuery::new(b, m, n)?;
    let registry = deciders();
    let decider = registry.get(strategy)?;
    let mut opts = cfg.search_options();
    opts.use_seed = !no_seed;
    let out = decider.decide(&query, &opts)?;
    if out.stats.resource_exhausted {
        eprintln!("note: search stopped by resource limit, reported as timeout");
    }
    emit(
        cfg,
        &describe(&out),
        &serde_json::to_value(out.to_json(cfg.format.encoding()))?,
    )?;
    Ok(verdict_exit(out.verdict))
}

fn compute(cfg: &RunConfig, m: usize, n: usize, max_b: usize) -> Result<u8> {
    let result = compute_br(m, n, max_b, &cfg.search_options())?;
    let mut pretty = String::new();
    for out in &result.outcomes {
        let _ = writeln!(
            pretty,
            "b={:<2} {:?} ({} ms)",
            out.query.b, out.verdict, out.stats.elapsed_ms
        );
    }
    match result.value {
        Some(v) => {
            let _ = writeln!(pretty, "BR(C{}, C{}) = {v}", 2 * m, 2 * n);
        }
        None => {
            let _ = writeln!(
                pretty,
                "BR(C{}, C{}) not determined up to b={max_b}",
                2 * m,
                2 * n
            );
        }
    }
    let value = json!({
        "m": m,
        "n": n,
        "max_b": max_b,
        "value": result.value,
        "outcomes": result
            .outcomes
            .iter()
            .map(|o| o.to_json(cfg.format.encoding()))
            .collect::<Vec<_>>(),
    });
    emit(cfg, &pretty, &value)?;
    Ok(if result.value.is_some() {
        EXIT_OK
    } else {
        EXIT_TIMEOUT
    })
}

/// Claimed `BR(C8, C2n)`: 8 for `n = 4`, `n + 3` otherwise.
pub fn claimed_br_c8(n: usize) -> usize {
    if n == 4 {
        8
    } else {
        n + 3
    }
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub n: usize,
    pub claimed: usize,
    /// `certified` when a checked coloring of `K_{claimed-1, claimed-1}` exists.
    pub lower_bound: &'static str,
    /// `verified`, `refuted`, `timeout` or `skipped-by-budget`.
    pub upper_bound: &'static str,
}

pub fn table_rows(cfg: &RunConfig, max_n: usize, search_up_to: usize) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for n in 2..=max_n {
        let claimed = claimed_br_c8(n);
        let lower_bound = match lower_bound_certificate(4, n) {
            Ok(r) if r.board() + 1 == claimed => "certified",
            _ => "failed",
        };
        let upper_bound = if claimed > search_up_to {
            "skipped-by-budget"
        } else {
            let out = bramsey::decide(&RamseyQuery::new(claimed, 4, n)?, &cfg.search_options())?;
            match out.verdict {
                Verdict::Holds => "verified",
                Verdict::Counterexample => "refuted",
                Verdict::Timeout => "timeout",
            }
        };
        rows.push(TableRow {
            n,
            claimed,
            lower_bound,
            upper_bound,
        });
    }
    Ok(rows)
}

fn table(cfg: &RunConfig, max_n: usize, search_up_to: usize) -> Result<u8> {
    if max_n < 2 {
        bail!("--max-n must be at least 2");
    }
    let rows = table_rows(cfg, max_n, search_up_to)?;
    let mut pretty = String::from(" n  claimed  lower bound  upper bound\n");
    for r in &rows {
        let _ = writeln!(
            pretty,
            "{:>2}  {:>7}  {:<11}  {}",
            r.n, r.claimed, r.lower_bound, r.upper_bound
        );
    }
    emit(cfg, &pretty, &serde_json::to_value(&rows)?)?;
    let failed = rows
        .iter()
        .any(|r| r.lower_bound != "certified" || r.upper_bound == "refuted");
    Ok(if failed { EXIT_NEGATIVE } else { EXIT_OK })
}

fn check_cycle(cfg: &RunConfig, file: &std::path::Path, k: usize, detector: &str) -> Result<u8> {
    if k < 2 {
        bail!("--k must be at least 2");
    }
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let graph = BipartiteGraph::from_json_str(&text)
        .with_context(|| format!("parsing {}", file.display()))?;
    let registry = cycle_finders();
    match registry.get(detector)?.find(&graph, k)? {
        Some(w) => {
            let pretty = format!(
                "C{} found: x{:?} y{:?} (0-based)\n",
                2 * k,
                w.left_seq(),
                w.right_seq()
            );
            emit(cfg, &pretty, &serde_json::to_value(&w)?)?;
            Ok(EXIT_OK)
        }
        None => {
            let pretty = format!(
                "no C{} in the {}x{} graph\n",
                2 * k,
                graph.left_size(),
                graph.right_size()
            );
            emit(cfg, &pretty, &Value::Null)?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn prop1(cfg: &RunConfig, samples: u64) -> Result<u8> {
    let sweep = proposition1_sweep(samples, cfg.seed)?;
    let pretty = format!(
        "{} samples (seed {}): red C8 {}, blue C8 {}, neither {}\n",
        sweep.samples,
        sweep.seed,
        sweep.red,
        sweep.blue,
        sweep.neither.len()
    );
    emit(cfg, &pretty, &serde_json::to_value(&sweep)?)?;
    Ok(if sweep.holds() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn list() -> Result<u8> {
    println!("constructions:");
    for c in constructions().iter() {
        println!("  {:<10} {}", c.name(), c.summary());
    }
    println!("deciders:");
    for d in deciders().iter() {
        println!("  {:<10} {}", d.name(), d.summary());
    }
    println!("cycle finders:");
    for f in cycle_finders().iter() {
        println!("  {:<10} {}", f.name(), f.summary());
    }
    Ok(EXIT_OK)
}
