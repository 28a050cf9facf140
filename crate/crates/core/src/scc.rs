//! Strongly connected components of (induced subgraphs of) an arena.

use crate::arena::{Arena, Color, Coloring, NodeId};

/// SCC decomposition of the subgraph induced by a node subset.
///
/// Nodes outside the subset have no component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    component_of: Vec<Option<usize>>,
    nontrivial: Vec<bool>,
    members: Vec<Vec<NodeId>>,
}

impl SccDecomposition {
    /// Decomposes the whole arena.
    pub fn of(arena: &Arena) -> Self {
        Self::restricted(arena, |_| true)
    }

    /// Decomposes the subgraph induced by `{v : include(v)}`.
    pub fn restricted(arena: &Arena, include: impl Fn(NodeId) -> bool) -> Self {
        let n = arena.node_count();
        Self::from_fn(
            n,
            |v| include(NodeId::from(v)),
            |v| arena.successors(NodeId::from(v)).iter().map(|w| w.index()),
        )
    }

    /// Decomposes the subgraph induced by nodes colored at least `min_color`.
    pub fn at_least(arena: &Arena, coloring: &Coloring, min_color: Color) -> Self {
        Self::restricted(arena, |v| coloring.get(v) >= min_color)
    }

    /// Iterative Tarjan over an arbitrary successor function on `[0, n)`.
    pub fn from_fn<F, I>(n: usize, include: impl Fn(usize) -> bool, successors: F) -> Self
    where
        F: Fn(usize) -> I,
        I: Iterator<Item = usize>,
    {
        const UNVISITED: usize = usize::MAX;
        let mut order = vec![UNVISITED; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut component_of = vec![None; n];
        let mut members: Vec<Vec<NodeId>> = Vec::new();
        let mut nontrivial = Vec::new();
        let mut counter = 0;
        let mut call: Vec<(usize, I)> = Vec::new();

        for root in 0..n {
            if order[root] != UNVISITED || !include(root) {
                continue;
            }
            order[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            call.push((root, successors(root)));

            while let Some((v, mut iter)) = call.pop() {
                let mut next = None;
                for w in iter.by_ref() {
                    if !include(w) {
                        continue;
                    }
                    if order[w] == UNVISITED {
                        next = Some(w);
                        break;
                    } else if on_stack[w] {
                        low[v] = low[v].min(order[w]);
                    }
                }
                if let Some(w) = next {
                    call.push((v, iter));
                    order[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, successors(w)));
                    continue;
                }
                if let Some((parent, _)) = call.last() {
                    let parent = *parent;
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == order[v] {
                    let id = members.len();
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        component_of[w] = Some(id);
                        comp.push(NodeId::from(w));
                        if w == v {
                            break;
                        }
                    }
                    let cyclic = comp.len() > 1 || successors(v).any(|w| w == v);
                    comp.sort_unstable();
                    members.push(comp);
                    nontrivial.push(cyclic);
                }
            }
        }

        SccDecomposition {
            component_of,
            nontrivial,
            members,
        }
    }

    pub fn component_count(&self) -> usize {
        self.members.len()
    }

    pub fn component_of(&self, v: NodeId) -> Option<usize> {
        self.component_of[v.index()]
    }

    /// Whether component `c` contains a cycle: two or more nodes, or a
    /// single node with a self-loop.
    pub fn is_nontrivial(&self, c: usize) -> bool {
        self.nontrivial[c]
    }

    /// Whether `v` is included and lies on some cycle of the subgraph.
    pub fn on_cycle(&self, v: NodeId) -> bool {
        self.component_of(v).is_some_and(|c| self.nontrivial[c])
    }

    /// Members of component `c` in ascending order.
    pub fn members(&self, c: usize) -> &[NodeId] {
        &self.members[c]
    }

    /// Components in reverse topological order (sinks first).
    pub fn components(&self) -> impl Iterator<Item = &[NodeId]> {
        self.members.iter().map(Vec::as_slice)
    }

    pub fn any_nontrivial(&self) -> bool {
        self.nontrivial.iter().any(|&b| b)
    }
}
