//! Bipartite Ramsey numbers of even cycles.
//!
//! * [`bigraph`]: bitset bipartite graphs and 2-colorings of `K_{b,b}`.
//! * [`cycles`]: exact-length cycle detection, a brute-force oracle and the
//!   cycle extension procedures.
//! * [`constructions`]: lower-bound colorings and their certificates.
//! * [`search`]: exhaustive decision of `BR(C_2m, C_2n) <= b`.

pub mod bigraph;
pub mod constructions;
pub mod cycles;
pub mod error;
pub mod registry;
pub mod search;

pub use bigraph::{complement, induced, BipartiteGraph, Side, TwoColoring, VertexSet};
pub use cycles::{find_cycle, find_cycle_through_edge, CycleWitness};
pub use error::{Error, Result};
pub use search::{decide, RamseyQuery, SearchOptions, SearchOutcome, Verdict};
