//! Cycle-existence queries.
//!
//! Two families of questions drive the reductions: whether a node lies on a
//! *simple* cycle of a given color (NP-complete in general; answered by a
//! budgeted backtracking search) and whether it lies on some *cycle*, i.e. a
//! closed walk, of that color (answered through SCC decomposition). The
//! enumeration routines at the bottom are exhaustive and exist to check the
//! fast paths on small arenas.

use std::collections::VecDeque;

use thiserror::Error;

use crate::arena::{Arena, Color, Coloring, NodeId};
use crate::scc::SccDecomposition;

/// Default cap on expanded search nodes for one exact query.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("query color {gamma} exceeds the color {color} of node {node}")]
    VacuousQuery { node: NodeId, gamma: Color, color: Color },
    #[error("arena has {nodes} nodes, above the enumeration cap of {cap}")]
    NodeCap { nodes: usize, cap: usize },
}

/// Limit on the number of search nodes one exact query may expand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_expansions: Option<u64>,
}

impl SearchBudget {
    pub const UNBOUNDED: SearchBudget = SearchBudget { max_expansions: None };

    pub fn limited(max: u64) -> Self {
        SearchBudget {
            max_expansions: Some(max),
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::limited(DEFAULT_BUDGET)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleAnswer {
    Yes,
    No,
    /// The search ran out of budget before deciding.
    Exhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub answer: CycleAnswer,
    pub expanded: u64,
}

/// A request for a cycle through `through` whose color is `target_color`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleQuery {
    through: NodeId,
    target_color: Color,
}

impl CycleQuery {
    /// Rejects queries asking for a color above that of the node itself;
    /// no cycle through `v` can have a color larger than `c(v)`.
    pub fn new(coloring: &Coloring, through: NodeId, target_color: Color) -> Result<Self, OracleError> {
        let color = coloring.get(through);
        if target_color > color {
            return Err(OracleError::VacuousQuery {
                node: through,
                gamma: target_color,
                color,
            });
        }
        Ok(CycleQuery {
            through,
            target_color,
        })
    }

    pub fn through(&self) -> NodeId {
        self.through
    }

    pub fn target_color(&self) -> Color {
        self.target_color
    }
}

/// Is there a simple cycle through `v` with color exactly `gamma`?
///
/// The search is confined to the SCC of `v` in the subgraph of nodes
/// colored at least `gamma`. It extends simple paths from `v` until one
/// meets a node of color `gamma`, then asks whether `v` is reachable again
/// without reusing path nodes. Paths that can no longer return to `v` are
/// pruned. Successors are explored in ascending order.
pub fn simple_cycle_through_with_color(
    arena: &Arena,
    coloring: &Coloring,
    v: NodeId,
    gamma: Color,
    budget: SearchBudget,
) -> Result<SearchOutcome, OracleError> {
    CycleQuery::new(coloring, v, gamma)?;
    let scc = SccDecomposition::at_least(arena, coloring, gamma);
    let comp = scc.component_of(v).expect("v is colored at least gamma");
    let no = SearchOutcome {
        answer: CycleAnswer::No,
        expanded: 0,
    };
    if !scc.is_nontrivial(comp) {
        return Ok(no);
    }
    let members = scc.members(comp);
    if !members.iter().any(|&w| coloring.get(w) == gamma) {
        return Ok(no);
    }
    if coloring.get(v) == gamma {
        // any simple cycle through v inside the component has color c(v)
        return Ok(SearchOutcome {
            answer: CycleAnswer::Yes,
            expanded: 0,
        });
    }

    let n = arena.node_count();
    let mut in_scope = vec![false; n];
    for &w in members {
        in_scope[w.index()] = true;
    }
    let mut succ: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for &w in members {
        let mut s: Vec<NodeId> = arena
            .successors(w)
            .iter()
            .copied()
            .filter(|x| in_scope[x.index()])
            .collect();
        s.sort_unstable();
        succ[w.index()] = s;
    }
    let mut search = PathSearch {
        succ: &succ,
        coloring,
        gamma,
        target: v,
        on_path: vec![false; n],
        expanded: 0,
        limit: budget.max_expansions,
        queue: VecDeque::new(),
        mark: vec![0; n],
        epoch: 0,
    };
    search.on_path[v.index()] = true;
    let answer = search.extend(v);
    Ok(SearchOutcome {
        answer,
        expanded: search.expanded,
    })
}

struct PathSearch<'a> {
    succ: &'a [Vec<NodeId>],
    coloring: &'a Coloring,
    gamma: Color,
    target: NodeId,
    on_path: Vec<bool>,
    expanded: u64,
    limit: Option<u64>,
    queue: VecDeque<NodeId>,
    mark: Vec<u32>,
    epoch: u32,
}

impl PathSearch<'_> {
    /// Can `target` be reached from `from` using only nodes off the path?
    fn returns(&mut self, from: NodeId) -> bool {
        self.epoch += 1;
        let epoch = self.epoch;
        self.queue.clear();
        self.queue.push_back(from);
        self.mark[from.index()] = epoch;
        while let Some(u) = self.queue.pop_front() {
            for &w in &self.succ[u.index()] {
                if w == self.target {
                    return true;
                }
                if self.on_path[w.index()] || self.mark[w.index()] == epoch {
                    continue;
                }
                self.mark[w.index()] = epoch;
                self.queue.push_back(w);
            }
        }
        false
    }

    fn extend(&mut self, u: NodeId) -> CycleAnswer {
        self.expanded += 1;
        if self.limit.is_some_and(|l| self.expanded > l) {
            return CycleAnswer::Exhausted;
        }
        let succ = self.succ;
        for &w in &succ[u.index()] {
            if w == self.target || self.on_path[w.index()] {
                continue;
            }
            if !self.returns(w) {
                continue;
            }
            if self.coloring.get(w) == self.gamma {
                return CycleAnswer::Yes;
            }
            self.on_path[w.index()] = true;
            let r = self.extend(w);
            self.on_path[w.index()] = false;
            if r != CycleAnswer::No {
                return r;
            }
        }
        CycleAnswer::No
    }
}

/// Does some simple cycle have color `index(coloring)`?
///
/// Polynomial: such a cycle uses only maximally colored nodes, so it exists
/// iff the subgraph they induce has a cycle.
pub fn simple_cycle_with_max_color(arena: &Arena, coloring: &Coloring) -> bool {
    let m = coloring.index();
    SccDecomposition::restricted(arena, |v| coloring.get(v) == m).any_nontrivial()
}

/// Is there a closed walk through `v` whose minimal color is `gamma`?
///
/// Holds iff, in the subgraph of nodes colored at least `gamma`, the
/// component of `v` has a cycle and contains a node colored `gamma`.
pub fn cycle_through_with_color(
    arena: &Arena,
    coloring: &Coloring,
    v: NodeId,
    gamma: Color,
) -> Result<bool, OracleError> {
    CycleQuery::new(coloring, v, gamma)?;
    let scc = SccDecomposition::at_least(arena, coloring, gamma);
    let comp = scc.component_of(v).expect("v is colored at least gamma");
    Ok(scc.is_nontrivial(comp) && scc.members(comp).iter().any(|&w| coloring.get(w) == gamma))
}

/// Does some closed walk have color `index(coloring)`?
pub fn cycle_with_max_color(arena: &Arena, coloring: &Coloring) -> bool {
    let m = coloring.index();
    arena
        .nodes()
        .filter(|&v| coloring.get(v) == m)
        .any(|v| cycle_through_with_color(arena, coloring, v, m).expect("gamma equals c(v)"))
}

/// Looks for a cycle whose color has the wrong parity for `winner` in the
/// graph on `[0, n)` given by `include` and `successors`.
///
/// For each color `d` of the wrong parity, a node colored `d` lies on a
/// cycle of color `d` iff it sits in a cyclic component of the subgraph
/// colored at least `d`. Returns such a node.
pub fn wrong_parity_cycle_node<F, I>(
    n: usize,
    include: impl Fn(usize) -> bool,
    successors: F,
    coloring: &Coloring,
    winner: crate::arena::Player,
) -> Option<NodeId>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    let mut bad: Vec<Color> = (0..n)
        .filter(|&v| include(v))
        .map(|v| coloring.values()[v])
        .filter(|&d| crate::arena::Player::of_color(d) != winner)
        .collect();
    bad.sort_unstable();
    bad.dedup();
    for d in bad {
        let scc = SccDecomposition::from_fn(n, |v| include(v) && coloring.values()[v] >= d, &successors);
        let hit = (0..n).map(NodeId::from).find(|&v| coloring.get(v) == d && scc.on_cycle(v));
        if hit.is_some() {
            return hit;
        }
    }
    None
}

fn check_cap(arena: &Arena, cap: usize) -> Result<(), OracleError> {
    if arena.node_count() > cap {
        Err(OracleError::NodeCap {
            nodes: arena.node_count(),
            cap,
        })
    } else {
        Ok(())
    }
}

/// Calls `visit` once for every simple cycle of the arena (Johnson's
/// algorithm). Each cycle starts at its least node.
pub fn for_each_simple_cycle(
    arena: &Arena,
    cap: usize,
    mut visit: impl FnMut(&[NodeId]),
) -> Result<(), OracleError> {
    check_cap(arena, cap)?;
    let n = arena.node_count();
    let mut state = Johnson {
        arena,
        allowed: vec![false; n],
        blocked: vec![false; n],
        blocked_by: vec![Vec::new(); n],
        stack: Vec::new(),
        start: NodeId(0),
    };
    for s in arena.nodes() {
        let scc = SccDecomposition::restricted(arena, |v| v >= s);
        let comp = scc.component_of(s).expect("s is included");
        if !scc.is_nontrivial(comp) {
            continue;
        }
        state.allowed.iter_mut().for_each(|a| *a = false);
        for &v in scc.members(comp) {
            state.allowed[v.index()] = true;
            state.blocked[v.index()] = false;
            state.blocked_by[v.index()].clear();
        }
        state.start = s;
        state.circuit(s, &mut visit);
    }
    Ok(())
}

struct Johnson<'a> {
    arena: &'a Arena,
    allowed: Vec<bool>,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<NodeId>>,
    stack: Vec<NodeId>,
    start: NodeId,
}

impl Johnson<'_> {
    fn unblock(&mut self, u: NodeId) {
        let mut todo = vec![u];
        while let Some(u) = todo.pop() {
            if !self.blocked[u.index()] {
                continue;
            }
            self.blocked[u.index()] = false;
            todo.append(&mut self.blocked_by[u.index()]);
        }
    }

    fn circuit(&mut self, v: NodeId, visit: &mut impl FnMut(&[NodeId])) -> bool {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v.index()] = true;
        let arena = self.arena;
        for &w in arena.successors(v) {
            if !self.allowed[w.index()] {
                continue;
            }
            if w == self.start {
                visit(&self.stack);
                found = true;
            } else if !self.blocked[w.index()] && self.circuit(w, visit) {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in arena.successors(v) {
                if self.allowed[w.index()] && !self.blocked_by[w.index()].contains(&v) {
                    self.blocked_by[w.index()].push(v);
                }
            }
        }
        self.stack.pop();
        found
    }
}

/// All simple cycles, each listed once starting at its least node.
pub fn enumerate_simple_cycles(arena: &Arena, cap: usize) -> Result<Vec<Vec<NodeId>>, OracleError> {
    let mut out = Vec::new();
    for_each_simple_cycle(arena, cap, |c| out.push(c.to_vec()))?;
    Ok(out)
}

/// All node sets whose induced subgraph is strongly connected and has at
/// least one edge; exactly the node sets of closed walks. Returned as
/// bitmasks over node indices, in ascending mask order.
pub fn strongly_connected_subset_masks(arena: &Arena, cap: usize) -> Result<Vec<u64>, OracleError> {
    check_cap(arena, cap.min(63))?;
    let n = arena.node_count();
    let masks: Vec<u64> = arena
        .nodes()
        .map(|v| arena.successors(v).iter().fold(0u64, |m, w| m | (1 << w.0)))
        .collect();
    let closure = |start: usize, subset: u64, forward: bool| -> u64 {
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            for u in 0..n {
                if frontier & (1 << u) == 0 {
                    continue;
                }
                if forward {
                    next |= masks[u];
                } else {
                    for (x, &m) in masks.iter().enumerate() {
                        if m & (1 << u) != 0 {
                            next |= 1 << x;
                        }
                    }
                }
            }
            next &= subset & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    };
    let mut out = Vec::new();
    for subset in 1u64..(1u64 << n) {
        let first = subset.trailing_zeros() as usize;
        if subset.count_ones() == 1 {
            if masks[first] & subset != 0 {
                out.push(subset);
            }
            continue;
        }
        if closure(first, subset, true) == subset && closure(first, subset, false) == subset {
            out.push(subset);
        }
    }
    Ok(out)
}

/// Node lists for [`strongly_connected_subset_masks`].
pub fn strongly_connected_subsets(arena: &Arena, cap: usize) -> Result<Vec<Vec<NodeId>>, OracleError> {
    Ok(strongly_connected_subset_masks(arena, cap)?
        .into_iter()
        .map(|m| (0..64).filter(|i| m & (1 << i) != 0).map(NodeId::from).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Arena {
        Arena::from_lists(&[&[4, 1], &[0, 2], &[1], &[2, 4], &[3]], &[3, 3, 2, 1, 2]).unwrap()
    }

    fn exact(a: &Arena, c: &Coloring, v: u32, g: Color) -> CycleAnswer {
        simple_cycle_through_with_color(a, c, NodeId(v), g, SearchBudget::UNBOUNDED)
            .unwrap()
            .answer
    }

    #[test]
    fn simple_cycle_queries_on_sample() {
        let a = sample();
        let c = a.coloring();
        assert_eq!(exact(&a, c, 1, 2), CycleAnswer::Yes);
        assert_eq!(exact(&a, c, 0, 2), CycleAnswer::No);
        assert_eq!(exact(&a, c, 0, 1), CycleAnswer::Yes);
        assert_eq!(exact(&a, c, 0, 3), CycleAnswer::Yes);
    }

    #[test]
    fn self_loop_is_a_simple_cycle_of_its_color() {
        let a = Arena::from_lists(&[&[0, 1], &[0]], &[4, 1]).unwrap();
        assert_eq!(exact(&a, a.coloring(), 0, 4), CycleAnswer::Yes);
    }

    #[test]
    fn vacuous_queries_are_rejected() {
        let a = sample();
        assert!(matches!(
            simple_cycle_through_with_color(&a, a.coloring(), NodeId(3), 2, SearchBudget::UNBOUNDED),
            Err(OracleError::VacuousQuery { .. })
        ));
        assert!(cycle_through_with_color(&a, a.coloring(), NodeId(3), 2).is_err());
    }

    #[test]
    fn tiny_budget_reports_exhaustion() {
        // v0 must walk the long way round to meet color 1
        let a = sample();
        let out = simple_cycle_through_with_color(&a, a.coloring(), NodeId(0), 1, SearchBudget::limited(1)).unwrap();
        assert_eq!(out.answer, CycleAnswer::Exhausted);
    }

    #[test]
    fn max_color_checks() {
        let a = sample();
        assert!(simple_cycle_with_max_color(&a, a.coloring()));
        let after = Coloring::new(vec![1, 3, 2, 1, 2]);
        assert!(!simple_cycle_with_max_color(&a, &after));
        assert!(!cycle_with_max_color(&a, &after));
        let single = Arena::from_lists(&[&[0]], &[5]).unwrap();
        assert!(simple_cycle_with_max_color(&single, single.coloring()));
        assert!(cycle_with_max_color(&single, single.coloring()));
    }

    #[test]
    fn closed_walk_queries() {
        let a = sample();
        let c = a.coloring();
        assert!(cycle_through_with_color(&a, c, NodeId(0), 2).unwrap());
        assert!(!cycle_through_with_color(&a, c, NodeId(3), 0).unwrap());
        assert!(cycle_through_with_color(&a, c, NodeId(4), 1).unwrap());
        // v4's only successor is colored 1.
        assert!(!cycle_through_with_color(&a, c, NodeId(4), 2).unwrap());
    }

    #[test]
    fn enumeration_small_cases() {
        let a = sample();
        let mut cycles = enumerate_simple_cycles(&a, 15).unwrap();
        cycles.sort();
        let ids = |v: &[u32]| v.iter().map(|&i| NodeId(i)).collect::<Vec<_>>();
        assert_eq!(
            cycles,
            vec![ids(&[0, 1]), ids(&[0, 4, 3, 2, 1]), ids(&[1, 2]), ids(&[3, 4])]
        );
        let one = Arena::from_lists(&[&[0]], &[0]).unwrap();
        assert_eq!(enumerate_simple_cycles(&one, 15).unwrap().len(), 1);
        let pair = Arena::from_lists(&[&[1], &[0]], &[0, 0]).unwrap();
        assert_eq!(enumerate_simple_cycles(&pair, 15).unwrap().len(), 1);
        assert!(matches!(
            enumerate_simple_cycles(&a, 4),
            Err(OracleError::NodeCap { nodes: 5, cap: 4 })
        ));
    }

    #[test]
    fn strongly_connected_subset_cases() {
        let pair = Arena::from_lists(&[&[1], &[0]], &[0, 0]).unwrap();
        assert_eq!(strongly_connected_subset_masks(&pair, 12).unwrap(), vec![0b11]);
        let looped = Arena::from_lists(&[&[0, 1], &[0]], &[0, 0]).unwrap();
        assert_eq!(strongly_connected_subset_masks(&looped, 12).unwrap(), vec![0b01, 0b11]);
        let a = sample();
        assert!(strongly_connected_subset_masks(&a, 12).unwrap().contains(&0b11111));
        // 0 -> 1 -> 2 -> 2 has only the self-loop; drop it by checking a DAG prefix
        let dag_like = Arena::from_lists(&[&[1], &[2], &[2]], &[0, 0, 0]).unwrap();
        assert_eq!(strongly_connected_subset_masks(&dag_like, 12).unwrap(), vec![0b100]);
    }
}
