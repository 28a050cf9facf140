//! Colored arenas and parity games.
//!
//! Games follow the min-parity convention: player 0 wins a play iff the
//! minimal color occurring infinitely often is even.

use std::fmt;

use thiserror::Error;

/// Dense node index in `[0, n)`. Stable across reductions, which only
/// rewrite colors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(value: usize) -> Self {
        NodeId(u32::try_from(value).expect("node index exceeds u32"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

pub type Color = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub fn from_index(i: u8) -> Option<Player> {
        match i {
            0 => Some(Player::Even),
            1 => Some(Player::Odd),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::Even => 0,
            Player::Odd => 1,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// The player who wins a play whose minimal recurring color is `color`.
    pub fn of_color(color: Color) -> Player {
        if color % 2 == 0 {
            Player::Even
        } else {
            Player::Odd
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A total assignment of colors to nodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coloring(Vec<Color>);

impl Coloring {
    pub fn new(values: Vec<Color>) -> Self {
        Coloring(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: NodeId) -> Color {
        self.0[v.index()]
    }

    pub fn set(&mut self, v: NodeId, color: Color) {
        self.0[v.index()] = color;
    }

    pub fn values(&self) -> &[Color] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Color> {
        self.0
    }

    /// The index of the coloring: its maximal color (0 when empty).
    pub fn index(&self) -> Color {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Sum of all colors; the termination measure of the reduction loop.
    pub fn rank(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }
}

impl From<Vec<Color>> for Coloring {
    fn from(values: Vec<Color>) -> Self {
        Coloring(values)
    }
}

/// Free-function form of [`Coloring::index`].
pub fn index(coloring: &Coloring) -> Color {
    coloring.index()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArenaError {
    #[error("node {0} has no successors")]
    DeadEnd(usize),
    #[error("node {node} has successor {successor} outside [0, {count})")]
    SuccessorOutOfRange {
        node: usize,
        successor: u32,
        count: usize,
    },
    #[error("node {node} lists successor {successor} more than once")]
    DuplicateSuccessor { node: usize, successor: u32 },
    #[error("expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("arena must have at least one node")]
    Empty,
    #[error("sequence is not a cycle: no edge {from} -> {to}")]
    NotACycle { from: NodeId, to: NodeId },
}

/// A directed graph with a total edge relation and a coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    successors: Vec<Vec<NodeId>>,
    colors: Coloring,
}

impl Arena {
    /// Builds an arena, checking totality, range and duplicate-freedom of
    /// every successor list.
    pub fn new(successors: Vec<Vec<NodeId>>, colors: Coloring) -> Result<Self, ArenaError> {
        let n = successors.len();
        if n == 0 {
            return Err(ArenaError::Empty);
        }
        if colors.len() != n {
            return Err(ArenaError::LengthMismatch {
                expected: n,
                actual: colors.len(),
            });
        }
        for (v, succ) in successors.iter().enumerate() {
            if succ.is_empty() {
                return Err(ArenaError::DeadEnd(v));
            }
            for (i, w) in succ.iter().enumerate() {
                if w.index() >= n {
                    return Err(ArenaError::SuccessorOutOfRange {
                        node: v,
                        successor: w.0,
                        count: n,
                    });
                }
                if succ[..i].contains(w) {
                    return Err(ArenaError::DuplicateSuccessor {
                        node: v,
                        successor: w.0,
                    });
                }
            }
        }
        Ok(Arena { successors, colors })
    }

    /// Convenience constructor from plain index lists.
    pub fn from_lists(successors: &[&[usize]], colors: &[Color]) -> Result<Self, ArenaError> {
        let succ = successors
            .iter()
            .map(|s| s.iter().map(|&w| NodeId::from(w)).collect())
            .collect();
        Arena::new(succ, Coloring::new(colors.to_vec()))
    }

    pub fn node_count(&self) -> usize {
        self.successors.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.successors.len()).map(NodeId::from)
    }

    pub fn successors(&self, v: NodeId) -> &[NodeId] {
        &self.successors[v.index()]
    }

    pub fn successor_lists(&self) -> &[Vec<NodeId>] {
        &self.successors
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.successors[from.index()].contains(&to)
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn coloring(&self) -> &Coloring {
        &self.colors
    }

    pub fn color(&self, v: NodeId) -> Color {
        self.colors.get(v)
    }

    /// Same graph, different coloring.
    pub fn with_coloring(&self, colors: Coloring) -> Result<Arena, ArenaError> {
        if colors.len() != self.node_count() {
            return Err(ArenaError::LengthMismatch {
                expected: self.node_count(),
                actual: colors.len(),
            });
        }
        Ok(Arena {
            successors: self.successors.clone(),
            colors,
        })
    }

    /// Predecessor lists, ordered by ascending source node.
    pub fn predecessors(&self) -> Vec<Vec<NodeId>> {
        let mut pred = vec![Vec::new(); self.node_count()];
        for v in self.nodes() {
            for &w in self.successors(v) {
                pred[w.index()].push(v);
            }
        }
        pred
    }

    /// Color of the cycle given by `nodes` under the arena's own coloring.
    pub fn cycle_color(&self, nodes: &[NodeId]) -> Result<Color, ArenaError> {
        cycle_color(self, &self.colors, nodes)
    }
}

/// The color of a cycle (minimal color on it). Rejects sequences that are
/// not closed walks of the arena.
pub fn cycle_color(arena: &Arena, coloring: &Coloring, nodes: &[NodeId]) -> Result<Color, ArenaError> {
    let Some(&first) = nodes.first() else {
        return Err(ArenaError::Empty);
    };
    for (i, &v) in nodes.iter().enumerate() {
        if v.index() >= arena.node_count() {
            return Err(ArenaError::SuccessorOutOfRange {
                node: v.index(),
                successor: v.0,
                count: arena.node_count(),
            });
        }
        let next = nodes.get(i + 1).copied().unwrap_or(first);
        if next.index() >= arena.node_count() || !arena.has_edge(v, next) {
            return Err(ArenaError::NotACycle { from: v, to: next });
        }
    }
    Ok(nodes.iter().map(|&v| coloring.get(v)).min().expect("non-empty"))
}

/// An arena with an ownership partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityGame {
    arena: Arena,
    owners: Vec<Player>,
    /// Original PGSolver ids and labels, when the game was read from a file
    /// with sparse ids or named nodes.
    names: Option<NameTable>,
}

/// Original identifiers of densified nodes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NameTable {
    pub original_ids: Vec<u64>,
    pub labels: Vec<Option<String>>,
}

impl ParityGame {
    pub fn new(arena: Arena, owners: Vec<Player>) -> Result<Self, ArenaError> {
        if owners.len() != arena.node_count() {
            return Err(ArenaError::LengthMismatch {
                expected: arena.node_count(),
                actual: owners.len(),
            });
        }
        Ok(ParityGame {
            arena,
            owners,
            names: None,
        })
    }

    pub fn with_names(mut self, names: NameTable) -> Result<Self, ArenaError> {
        let n = self.node_count();
        for len in [names.original_ids.len(), names.labels.len()] {
            if len != n {
                return Err(ArenaError::LengthMismatch {
                    expected: n,
                    actual: len,
                });
            }
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn node_count(&self) -> usize {
        self.arena.node_count()
    }

    pub fn owner(&self, v: NodeId) -> Player {
        self.owners[v.index()]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owners
    }

    pub fn names(&self) -> Option<&NameTable> {
        self.names.as_ref()
    }

    pub fn coloring(&self) -> &Coloring {
        self.arena.coloring()
    }

    /// The same game with `colors` in place of the current coloring.
    pub fn recolored(&self, colors: Coloring) -> Result<ParityGame, ArenaError> {
        Ok(ParityGame {
            arena: self.arena.with_coloring(colors)?,
            owners: self.owners.clone(),
            names: self.names.clone(),
        })
    }

    /// The same arena under a different ownership partition.
    pub fn with_owners(&self, owners: Vec<Player>) -> Result<ParityGame, ArenaError> {
        let mut game = ParityGame::new(self.arena.clone(), owners)?;
        game.names = self.names.clone();
        Ok(game)
    }
}
