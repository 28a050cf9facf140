//! Color rewriting: the `rabin` fixpoint loop in its exact and abstract
//! variants, static compression, the index-0 test and the Carton–Maceiras
//! baseline.

use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::arena::{Arena, Color, Coloring, NodeId, ParityGame, Player};
use crate::cycles::{
    cycle_through_with_color, cycle_with_max_color, simple_cycle_through_with_color, simple_cycle_with_max_color,
    wrong_parity_cycle_node, CycleAnswer, SearchBudget,
};
use crate::scc::SccDecomposition;

/// Which cycle notion the reduction quantifies over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    /// Simple cycles; exact Rabin index, exponential worst case.
    ExactSimpleCycle(SearchBudget),
    /// Closed walks; abstract Rabin index, polynomial.
    AbstractCycle,
}

impl OracleMode {
    pub fn exact() -> Self {
        OracleMode::ExactSimpleCycle(SearchBudget::default())
    }

    pub fn name(&self) -> &'static str {
        match self {
            OracleMode::ExactSimpleCycle(_) => "exact",
            OracleMode::AbstractCycle => "alpha",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColorChange {
    pub node: NodeId,
    pub old: Color,
    pub new: Color,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IterationTrace {
    pub cycle_changes: Vec<ColorChange>,
    pub pop_changes: Vec<ColorChange>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OracleStats {
    pub queries: u64,
    pub expanded: u64,
    pub exhaustions: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub mode: &'static str,
    pub iterations: Vec<IterationTrace>,
    pub initial_index: Color,
    pub final_index: Color,
    /// Rank (sum of colors) before the loop and after each iteration.
    pub rank_trace: Vec<u64>,
    pub oracle_stats: OracleStats,
    pub elapsed: Duration,
}

impl ReductionReport {
    fn new(mode: OracleMode, initial: &Coloring) -> Self {
        ReductionReport {
            mode: mode.name(),
            iterations: Vec::new(),
            initial_index: initial.index(),
            final_index: initial.index(),
            rank_trace: vec![initial.rank()],
            oracle_stats: OracleStats::default(),
            elapsed: Duration::ZERO,
        }
    }

    /// Number of executions of the fixpoint loop body.
    pub fn iteration_count(&self) -> usize {
        self.iterations.len()
    }

    /// Line-oriented human readable trace.
    pub fn to_trace(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", self.mode);
        let _ = writeln!(out, "initial index: {}", self.initial_index);
        for (i, it) in self.iterations.iter().enumerate() {
            let _ = writeln!(
                out,
                "iteration {}: rank {} -> {}",
                i + 1,
                self.rank_trace[i],
                self.rank_trace[i + 1]
            );
            for (phase, changes) in [("cycle", &it.cycle_changes), ("pop", &it.pop_changes)] {
                for ch in changes {
                    let _ = writeln!(out, "  {phase}: {} {} -> {}", ch.node, ch.old, ch.new);
                }
            }
        }
        let _ = writeln!(out, "final index: {}", self.final_index);
        let _ = writeln!(
            out,
            "oracle: {} queries, {} expanded, {} exhausted",
            self.oracle_stats.queries, self.oracle_stats.expanded, self.oracle_stats.exhaustions
        );
        out
    }

    /// Machine-readable change records: `iteration,phase,node,old,new`.
    pub fn to_records(&self) -> String {
        let mut out = String::from("iteration,phase,node,old,new\n");
        for (i, it) in self.iterations.iter().enumerate() {
            for (phase, changes) in [("cycle", &it.cycle_changes), ("pop", &it.pop_changes)] {
                for ch in changes {
                    let _ = writeln!(out, "{},{phase},{},{},{}", i + 1, ch.node.0, ch.old, ch.new);
                }
            }
        }
        out
    }
}

impl fmt::Display for ReductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_trace())
    }
}

/// A coloring produced by a reduction together with its trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub coloring: Coloring,
    pub report: ReductionReport,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("simple-cycle search exhausted its budget at node {node}, color {gamma}")]
    BudgetExhausted {
        node: NodeId,
        gamma: Color,
        /// State reached before the failing query, when known.
        partial: Option<Box<Reduction>>,
    },
    #[error("membership bound k must be at least 1")]
    InvalidBound,
}

struct Oracle<'a> {
    arena: &'a Arena,
    mode: OracleMode,
    stats: OracleStats,
}

impl Oracle<'_> {
    fn cycle_through(&mut self, coloring: &Coloring, v: NodeId, gamma: Color) -> Result<bool, ReduceError> {
        self.stats.queries += 1;
        match self.mode {
            OracleMode::AbstractCycle => {
                Ok(cycle_through_with_color(self.arena, coloring, v, gamma).expect("gamma below c(v)"))
            }
            OracleMode::ExactSimpleCycle(budget) => {
                let out = simple_cycle_through_with_color(self.arena, coloring, v, gamma, budget)
                    .expect("gamma below c(v)");
                self.stats.expanded += out.expanded;
                match out.answer {
                    CycleAnswer::Yes => Ok(true),
                    CycleAnswer::No => Ok(false),
                    CycleAnswer::Exhausted => {
                        self.stats.exhaustions += 1;
                        Err(ReduceError::BudgetExhausted {
                            node: v,
                            gamma,
                            partial: None,
                        })
                    }
                }
            }
        }
    }

    fn max_color_cycle(&self, coloring: &Coloring) -> bool {
        match self.mode {
            OracleMode::AbstractCycle => cycle_with_max_color(self.arena, coloring),
            OracleMode::ExactSimpleCycle(_) => simple_cycle_with_max_color(self.arena, coloring),
        }
    }

    /// Largest `gamma < c(v)` of opposite parity realized as the color of a
    /// cycle through `v`.
    fn anchor(&mut self, coloring: &Coloring, v: NodeId) -> Result<Option<Color>, ReduceError> {
        let c = coloring.get(v);
        if c == 0 {
            return Ok(None);
        }
        let mut gamma = c - 1;
        loop {
            if self.cycle_through(coloring, v, gamma)? {
                return Ok(Some(gamma));
            }
            if gamma < 2 {
                return Ok(None);
            }
            gamma -= 2;
        }
    }

    fn cycle_pass(&mut self, coloring: &mut Coloring, order: &[NodeId]) -> Result<Vec<ColorChange>, ReduceError> {
        let mut changes = Vec::new();
        for &v in order {
            let old = coloring.get(v);
            let new = match self.anchor(coloring, v)? {
                None => old % 2,
                Some(j) => j + 1,
            };
            if new != old {
                coloring.set(v, new);
                changes.push(ColorChange { node: v, old, new });
            }
        }
        Ok(changes)
    }

    fn pop_pass(&self, coloring: &mut Coloring) -> Vec<ColorChange> {
        let mut changes = Vec::new();
        let mut m = coloring.index();
        while m > 0 && !self.max_color_cycle(coloring) {
            for v in self.arena.nodes() {
                if coloring.get(v) == m {
                    coloring.set(v, m - 1);
                    changes.push(ColorChange {
                        node: v,
                        old: m,
                        new: m - 1,
                    });
                }
            }
            m -= 1;
        }
        changes
    }
}

/// Nodes in ascending color order, ties broken by ascending id.
pub fn ascending_order(coloring: &Coloring) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..coloring.len()).map(NodeId::from).collect();
    order.sort_by_key(|&v| (coloring.get(v), v));
    order
}

/// The anchor of `v`, or `None` where the pseudocode returns −1.
pub fn get_anchor(arena: &Arena, coloring: &Coloring, v: NodeId, mode: OracleMode) -> Result<Option<Color>, ReduceError> {
    Oracle {
        arena,
        mode,
        stats: OracleStats::default(),
    }
    .anchor(coloring, v)
}

/// One `cycle` pass in the default order.
pub fn cycle_pass(arena: &Arena, coloring: &Coloring, mode: OracleMode) -> Result<(Coloring, Vec<ColorChange>), ReduceError> {
    cycle_pass_in_order(arena, coloring, mode, &ascending_order(coloring))
}

/// One `cycle` pass visiting nodes in the given order. Later nodes see the
/// colors already rewritten earlier in the same pass.
pub fn cycle_pass_in_order(
    arena: &Arena,
    coloring: &Coloring,
    mode: OracleMode,
    order: &[NodeId],
) -> Result<(Coloring, Vec<ColorChange>), ReduceError> {
    let mut oracle = Oracle {
        arena,
        mode,
        stats: OracleStats::default(),
    };
    let mut out = coloring.clone();
    let changes = oracle.cycle_pass(&mut out, order)?;
    Ok((out, changes))
}

/// One `pop` pass: lowers the maximal color while no cycle realizes it.
pub fn pop_pass(arena: &Arena, coloring: &Coloring, mode: OracleMode) -> (Coloring, Vec<ColorChange>) {
    let oracle = Oracle {
        arena,
        mode,
        stats: OracleStats::default(),
    };
    let mut out = coloring.clone();
    let changes = oracle.pop_pass(&mut out);
    (out, changes)
}

/// Runs `cycle` then `pop` until the rank stops changing.
pub fn rabin(arena: &Arena, coloring: &Coloring, mode: OracleMode) -> Result<Reduction, ReduceError> {
    rabin_with_orders(arena, coloring, mode, &[])
}

/// As [`rabin`], but iteration `i` visits nodes in `orders[i]` when given.
pub fn rabin_with_orders(
    arena: &Arena,
    coloring: &Coloring,
    mode: OracleMode,
    orders: &[Vec<NodeId>],
) -> Result<Reduction, ReduceError> {
    let start = Instant::now();
    let mut oracle = Oracle {
        arena,
        mode,
        stats: OracleStats::default(),
    };
    let mut current = coloring.clone();
    let mut report = ReductionReport::new(mode, coloring);
    let mut rank = current.rank();
    loop {
        let cache = rank;
        let order = orders
            .get(report.iterations.len())
            .cloned()
            .unwrap_or_else(|| ascending_order(&current));
        let mut trace = IterationTrace::default();
        match oracle.cycle_pass(&mut current, &order) {
            Ok(changes) => trace.cycle_changes = changes,
            Err(ReduceError::BudgetExhausted { node, gamma, .. }) => {
                report.oracle_stats = oracle.stats;
                report.final_index = current.index();
                report.elapsed = start.elapsed();
                return Err(ReduceError::BudgetExhausted {
                    node,
                    gamma,
                    partial: Some(Box::new(Reduction {
                        coloring: current,
                        report,
                    })),
                });
            }
            Err(e) => return Err(e),
        }
        trace.pop_changes = oracle.pop_pass(&mut current);
        rank = current.rank();
        report.iterations.push(trace);
        report.rank_trace.push(rank);
        if rank == cache {
            break;
        }
    }
    report.final_index = current.index();
    report.oracle_stats = oracle.stats;
    report.elapsed = start.elapsed();
    Ok(Reduction {
        coloring: current,
        report,
    })
}

/// Order- and parity-preserving renumbering that closes gaps and merges
/// consecutive color classes of equal parity.
pub fn static_compress(coloring: &Coloring) -> Coloring {
    let mut distinct: Vec<Color> = coloring.values().to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut map = std::collections::HashMap::with_capacity(distinct.len());
    let mut prev: Option<(Color, Color)> = None;
    for &d in &distinct {
        let new = match prev {
            None => d % 2,
            Some((p, np)) if (d - p) % 2 == 0 => np,
            Some((_, np)) => np + 1,
        };
        map.insert(d, new);
        prev = Some((d, new));
    }
    Coloring::new(coloring.values().iter().map(|c| map[c]).collect())
}

/// Whether every cycle of the arena has an even color. Polynomial; a
/// coloring has Rabin index 0 exactly when this holds.
pub fn all_cycles_even(arena: &Arena, coloring: &Coloring) -> bool {
    wrong_parity_cycle_node(
        arena.node_count(),
        |_| true,
        |v| arena.successors(NodeId::from(v)).iter().map(|w| w.index()),
        coloring,
        Player::Even,
    )
    .is_none()
}

/// Carton–Maceiras style recoloring by recursive SCC decomposition.
///
/// Uses max-priority semantics: each component's maximally colored nodes
/// are peeled off and recolored from the value computed for the rest.
pub fn rabin_a(arena: &Arena, coloring: &Coloring) -> Coloring {
    let mut out = coloring.clone();
    let all = vec![true; arena.node_count()];
    reduce_layers(arena, coloring, &all, &mut out);
    out
}

fn reduce_layers(arena: &Arena, coloring: &Coloring, region: &[bool], out: &mut Coloring) -> Color {
    let scc = SccDecomposition::restricted(arena, |v| region[v.index()]);
    let mut result = 0;
    for comp in scc.components() {
        let top = comp.iter().map(|&v| coloring.get(v)).max().expect("non-empty component");
        let m = if top == 0 {
            0
        } else {
            let mut inner = vec![false; arena.node_count()];
            for &v in comp {
                inner[v.index()] = coloring.get(v) != top;
            }
            let mut m = reduce_layers(arena, coloring, &inner, out);
            if (top - m) % 2 == 1 {
                m += 1;
            }
            m
        };
        for &v in comp {
            if coloring.get(v) == top {
                out.set(v, m);
            }
        }
        result = result.max(m);
    }
    result
}

/// Membership in the class of games with abstract Rabin index below `k`.
pub fn abstract_membership(game: &ParityGame, k: Color) -> Result<bool, ReduceError> {
    if k == 0 {
        return Err(ReduceError::InvalidBound);
    }
    let r = rabin(game.arena(), game.coloring(), OracleMode::AbstractCycle)?;
    Ok(r.coloring.index() < k)
}
