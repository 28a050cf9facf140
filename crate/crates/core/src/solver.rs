//! Recursive (Zielonka) solver for min-parity games and a solution checker.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::arena::{Color, NodeId, ParityGame, Player};
use crate::cycles::wrong_parity_cycle_node;

/// Winning regions plus a positional strategy for each region's winner
/// at the nodes it owns there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    winners: Vec<Option<Player>>,
    strategy: Vec<Option<NodeId>>,
}

impl Solution {
    /// Assembles a solution from raw parts; entries may be missing, which
    /// [`verify_solution`] reports.
    pub fn from_parts(winners: Vec<Option<Player>>, strategy: Vec<Option<NodeId>>) -> Self {
        assert_eq!(winners.len(), strategy.len(), "winner and strategy vectors differ in length");
        Solution { winners, strategy }
    }

    pub fn node_count(&self) -> usize {
        self.winners.len()
    }

    pub fn winner(&self, v: NodeId) -> Option<Player> {
        self.winners[v.index()]
    }

    pub fn strategy(&self, v: NodeId) -> Option<NodeId> {
        self.strategy[v.index()]
    }

    /// The winning region of `player`, ascending.
    pub fn region(&self, player: Player) -> Vec<NodeId> {
        (0..self.winners.len())
            .filter(|&i| self.winners[i] == Some(player))
            .map(NodeId::from)
            .collect()
    }

    /// Strategy of `player` as `(node, successor)` pairs, ascending.
    pub fn strategy_of(&self, player: Player, game: &ParityGame) -> Vec<(NodeId, NodeId)> {
        game.arena()
            .nodes()
            .filter(|&v| game.owner(v) == player)
            .filter_map(|v| self.strategy(v).map(|w| (v, w)))
            .collect()
    }

    pub fn winners(&self) -> &[Option<Player>] {
        &self.winners
    }
}

/// Attractor of a target set inside a region, with the edge that first
/// pulled each attracted node of the attracting player.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attractor {
    pub region: Vec<bool>,
    pub witness: Vec<Option<NodeId>>,
}

/// Nodes inside `within` from which `player` can force a visit to `target`.
pub fn attract(game: &ParityGame, player: Player, target: &[bool], within: &[bool]) -> Attractor {
    let preds = game.arena().predecessors();
    attract_with(game, &preds, player, target, within)
}

fn attract_with(
    game: &ParityGame,
    preds: &[Vec<NodeId>],
    player: Player,
    target: &[bool],
    within: &[bool],
) -> Attractor {
    let arena = game.arena();
    let n = arena.node_count();
    let mut region = vec![false; n];
    let mut witness = vec![None; n];
    let mut escapes: Vec<usize> = (0..n)
        .map(|v| {
            arena
                .successors(NodeId::from(v))
                .iter()
                .filter(|w| within[w.index()])
                .count()
        })
        .collect();
    let mut queue = VecDeque::new();
    for v in 0..n {
        if within[v] && target[v] {
            region[v] = true;
            queue.push_back(NodeId::from(v));
        }
    }
    while let Some(w) = queue.pop_front() {
        for &u in &preds[w.index()] {
            let ui = u.index();
            if !within[ui] || region[ui] {
                continue;
            }
            if game.owner(u) == player {
                region[ui] = true;
                witness[ui] = Some(w);
                queue.push_back(u);
            } else {
                escapes[ui] -= 1;
                if escapes[ui] == 0 {
                    region[ui] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    Attractor { region, witness }
}

struct Zielonka<'a> {
    game: &'a ParityGame,
    preds: Vec<Vec<NodeId>>,
}

struct Partial {
    winners: Vec<Option<Player>>,
    strategy: Vec<Option<NodeId>>,
}

impl Zielonka<'_> {
    fn solve(&self, region: &[bool]) -> Partial {
        let arena = self.game.arena();
        let n = arena.node_count();
        let mut out = Partial {
            winners: vec![None; n],
            strategy: vec![None; n],
        };
        let Some(d) = (0..n).filter(|&v| region[v]).map(|v| arena.coloring().values()[v]).min() else {
            return out;
        };
        let p = Player::of_color(d);
        let q = p.opponent();
        let top: Vec<bool> = (0..n).map(|v| region[v] && arena.coloring().values()[v] == d).collect();
        let a = attract_with(self.game, &self.preds, p, &top, region);
        let rest: Vec<bool> = (0..n).map(|v| region[v] && !a.region[v]).collect();
        let sub = self.solve(&rest);

        if !sub.winners.contains(&Some(q)) {
            for v in 0..n {
                if !region[v] {
                    continue;
                }
                out.winners[v] = Some(p);
                let node = NodeId::from(v);
                if self.game.owner(node) != p {
                    continue;
                }
                out.strategy[v] = if rest[v] {
                    sub.strategy[v]
                } else if top[v] {
                    arena.successors(node).iter().copied().find(|w| region[w.index()])
                } else {
                    a.witness[v]
                };
            }
            return out;
        }

        let lost: Vec<bool> = sub.winners.iter().map(|w| *w == Some(q)).collect();
        let b = attract_with(self.game, &self.preds, q, &lost, region);
        let remainder: Vec<bool> = (0..n).map(|v| region[v] && !b.region[v]).collect();
        let inner = self.solve(&remainder);
        for v in 0..n {
            if remainder[v] {
                out.winners[v] = inner.winners[v];
                out.strategy[v] = inner.strategy[v];
            } else if b.region[v] {
                out.winners[v] = Some(q);
                if self.game.owner(NodeId::from(v)) == q {
                    out.strategy[v] = if lost[v] { sub.strategy[v] } else { b.witness[v] };
                }
            }
        }
        out
    }
}

/// Solves the game with the recursive algorithm on the minimal color.
pub fn zielonka_solve(game: &ParityGame) -> Solution {
    let z = Zielonka {
        game,
        preds: game.arena().predecessors(),
    };
    let all = vec![true; game.node_count()];
    let p = z.solve(&all);
    Solution::from_parts(p.winners, p.strategy)
}

/// Why a claimed solution is not a certificate.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("solution covers {got} nodes, game has {expected}")]
    SizeMismatch { got: usize, expected: usize },
    #[error("node {0} has no winner")]
    MissingWinner(NodeId),
    #[error("node {0} has no strategy for its owner")]
    MissingStrategy(NodeId),
    #[error("strategy at {node} uses a non-edge to {target}")]
    NotAnEdge { node: NodeId, target: NodeId },
    #[error("region of player {player} is not closed at {node} -> {target}")]
    Escape { player: Player, node: NodeId, target: NodeId },
    #[error("player {player} loses a cycle of color {color} through {node} in its own region")]
    LosingCycle { player: Player, node: NodeId, color: Color },
}

impl VerifyError {
    pub fn category(&self) -> &'static str {
        match self {
            VerifyError::SizeMismatch { .. } | VerifyError::MissingWinner(_) => "coverage",
            VerifyError::MissingStrategy(_) | VerifyError::NotAnEdge { .. } => "strategy",
            VerifyError::Escape { .. } => "closure",
            VerifyError::LosingCycle { .. } => "cycle",
        }
    }
}

/// Polynomial certificate check: every node has a winner, each winner's
/// strategy stays in its region, the opponent cannot leave it, and every
/// cycle consistent with the strategy has the winner's parity.
pub fn check_solution(game: &ParityGame, solution: &Solution) -> Result<(), VerifyError> {
    let arena = game.arena();
    let n = arena.node_count();
    if solution.node_count() != n {
        return Err(VerifyError::SizeMismatch {
            got: solution.node_count(),
            expected: n,
        });
    }
    if let Some(v) = arena.nodes().find(|&v| solution.winner(v).is_none()) {
        return Err(VerifyError::MissingWinner(v));
    }
    for v in arena.nodes() {
        let p = solution.winner(v).expect("checked above");
        if game.owner(v) == p {
            let w = solution.strategy(v).ok_or(VerifyError::MissingStrategy(v))?;
            if w.index() >= n || !arena.has_edge(v, w) {
                return Err(VerifyError::NotAnEdge { node: v, target: w });
            }
            if solution.winner(w) != Some(p) {
                return Err(VerifyError::Escape {
                    player: p,
                    node: v,
                    target: w,
                });
            }
        } else if let Some(&w) = arena.successors(v).iter().find(|&&w| solution.winner(w) != Some(p)) {
            return Err(VerifyError::Escape {
                player: p,
                node: v,
                target: w,
            });
        }
    }
    for p in [Player::Even, Player::Odd] {
        let succ = |v: usize| -> Vec<usize> {
            let node = NodeId::from(v);
            if game.owner(node) == p {
                solution.strategy(node).map(|w| w.index()).into_iter().collect()
            } else {
                arena.successors(node).iter().map(|w| w.index()).collect()
            }
        };
        if let Some(node) = wrong_parity_cycle_node(
            n,
            |v| solution.winners[v] == Some(p),
            |v| succ(v).into_iter(),
            arena.coloring(),
            p,
        ) {
            return Err(VerifyError::LosingCycle {
                player: p,
                node,
                color: arena.color(node),
            });
        }
    }
    Ok(())
}

pub fn verify_solution(game: &ParityGame, solution: &Solution) -> bool {
    check_solution(game, solution).is_ok()
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.winners.iter().enumerate() {
            let v = NodeId::from(i);
            match (w, self.strategy[i]) {
                (Some(p), Some(s)) => writeln!(f, "{v}: {p} -> {s}")?,
                (Some(p), None) => writeln!(f, "{v}: {p}")?,
                (None, _) => writeln!(f, "{v}: ?")?,
            }
        }
        Ok(())
    }
}
