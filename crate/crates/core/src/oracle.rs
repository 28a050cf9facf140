//! Exhaustive reference computations for small arenas.
//!
//! Everything here is exponential and bounded by explicit caps. These
//! functions share no logic with the reduction or the solver, so they serve
//! as independent checks for both.

use crate::arena::{Arena, Color, Coloring, NodeId, ParityGame, Player};
use crate::cycles::{enumerate_simple_cycles, strongly_connected_subset_masks, OracleError};

/// Default node cap for the exhaustive routines.
pub const DEFAULT_CAP: usize = 12;

/// Which family of node sets equivalence quantifies over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// Node sets of simple cycles.
    SimpleCycles,
    /// Strongly connected subsets, i.e. supports of closed walks.
    ClosedWalks,
}

fn masks(arena: &Arena, relation: Relation, cap: usize) -> Result<Vec<u64>, OracleError> {
    match relation {
        Relation::SimpleCycles => {
            let cap = cap.min(63);
            Ok(enumerate_simple_cycles(arena, cap)?
                .iter()
                .map(|c| c.iter().fold(0u64, |m, v| m | (1 << v.index())))
                .collect())
        }
        Relation::ClosedWalks => strongly_connected_subset_masks(arena, cap),
    }
}

fn min_over(mask: u64, coloring: &Coloring) -> Color {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| coloring.values()[i])
        .min()
        .expect("non-empty mask")
}

fn max_over(mask: u64, coloring: &Coloring) -> Color {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| coloring.values()[i])
        .max()
        .expect("non-empty mask")
}

/// Whether two colorings give every cycle of the relation the same parity
/// under the min convention.
pub fn equivalent(arena: &Arena, a: &Coloring, b: &Coloring, relation: Relation, cap: usize) -> Result<bool, OracleError> {
    Ok(masks(arena, relation, cap)?
        .iter()
        .all(|&m| min_over(m, a) % 2 == min_over(m, b) % 2))
}

/// Equivalence on strongly connected subsets under the max convention.
pub fn equivalent_max_parity(arena: &Arena, a: &Coloring, b: &Coloring, cap: usize) -> Result<bool, OracleError> {
    Ok(masks(arena, Relation::ClosedWalks, cap)?
        .iter()
        .all(|&m| max_over(m, a) % 2 == max_over(m, b) % 2))
}

/// Smallest index of a coloring equivalent to `coloring` for the relation,
/// found by backtracking over colorings with values in `0..=k`.
pub fn rabin_index(arena: &Arena, coloring: &Coloring, relation: Relation, cap: usize) -> Result<Color, OracleError> {
    rabin_index_witness(arena, coloring, relation, cap).map(|(k, _)| k)
}

/// As [`rabin_index`], also returning an equivalent coloring of that index.
pub fn rabin_index_witness(
    arena: &Arena,
    coloring: &Coloring,
    relation: Relation,
    cap: usize,
) -> Result<(Color, Coloring), OracleError> {
    let sets = masks(arena, relation, cap)?;
    let n = arena.node_count();
    // Each set is checked when its highest node gets assigned.
    let mut due: Vec<Vec<(u64, Color)>> = vec![Vec::new(); n];
    for &m in &sets {
        let last = 63 - m.leading_zeros() as usize;
        due[last].push((m, min_over(m, coloring) % 2));
    }
    let covered: u64 = sets.iter().fold(0, |acc, m| acc | m);
    let start = if sets.iter().any(|&m| min_over(m, coloring) % 2 == 1) { 1 } else { 0 };
    for k in start..coloring.index() {
        let mut trial = vec![0; n];
        if assign(0, k, covered, &due, &mut trial) {
            return Ok((k, Coloring::new(trial)));
        }
    }
    Ok((coloring.index(), coloring.clone()))
}

fn assign(v: usize, k: Color, covered: u64, due: &[Vec<(u64, Color)>], trial: &mut Vec<Color>) -> bool {
    if v == trial.len() {
        return true;
    }
    let choices: Vec<Color> = if covered >> v & 1 == 1 { (0..=k).collect() } else { vec![0] };
    for c in choices {
        trial[v] = c;
        let ok = due[v].iter().all(|&(m, parity)| {
            let low = (0..=v).filter(|i| m >> i & 1 == 1).map(|i| trial[i]).min().unwrap();
            low % 2 == parity
        });
        if ok && assign(v + 1, k, covered, due, trial) {
            return true;
        }
    }
    false
}

fn strategy_count(game: &ParityGame, player: Player) -> u128 {
    game.arena()
        .nodes()
        .filter(|&v| game.owner(v) == player)
        .map(|v| game.arena().successors(v).len() as u128)
        .product()
}

/// Decodes strategy number `k` into a successor choice per node, using a
/// mixed radix over the nodes of `player`. Other nodes get `None`.
fn decode(game: &ParityGame, player: Player, mut k: u128) -> Vec<Option<NodeId>> {
    game.arena()
        .nodes()
        .map(|v| {
            if game.owner(v) != player {
                return None;
            }
            let succ = game.arena().successors(v);
            let pick = (k % succ.len() as u128) as usize;
            k /= succ.len() as u128;
            Some(succ[pick])
        })
        .collect()
}

/// Winner of the play from `start` when every node has a fixed successor.
pub fn play_winner(next: &[NodeId], coloring: &Coloring, start: NodeId) -> Player {
    let mut seen = vec![usize::MAX; next.len()];
    let mut path = Vec::new();
    let mut v = start;
    while seen[v.index()] == usize::MAX {
        seen[v.index()] = path.len();
        path.push(v);
        v = next[v.index()];
    }
    let low = path[seen[v.index()]..].iter().map(|&u| coloring.get(u)).min().unwrap();
    Player::of_color(low)
}

/// Winners by enumerating player 0's positional strategies. Against a
/// fixed one, player 1 wins from `v` iff a cycle with odd minimum is
/// reachable from `v` in the remaining graph.
pub fn solve_by_enumeration(game: &ParityGame, max_strategies: u128) -> Result<Vec<Player>, OracleError> {
    let n = game.node_count();
    let total = strategy_count(game, Player::Even);
    if total > max_strategies {
        return Err(OracleError::NodeCap {
            nodes: n,
            cap: max_strategies.min(usize::MAX as u128) as usize,
        });
    }
    let arena = game.arena();
    let mut even_wins = vec![false; n];
    for k in 0..total {
        let sigma = decode(game, Player::Even, k);
        let succ = |v: usize| -> Vec<usize> {
            match sigma[v] {
                Some(w) => vec![w.index()],
                None => arena.successors(NodeId::from(v)).iter().map(|w| w.index()).collect(),
            }
        };
        // Nodes on a cycle whose minimum is odd.
        let mut bad = vec![false; n];
        for v in 0..n {
            let d = arena.coloring().values()[v];
            if d % 2 == 1 {
                bad[v] = reaches(n, &succ, v, v, |u| arena.coloring().values()[u] >= d);
            }
        }
        for v in 0..n {
            if !even_wins[v] && !(0..n).any(|b| bad[b] && (b == v || reaches(n, &succ, v, b, |_| true))) {
                even_wins[v] = true;
            }
        }
    }
    Ok(even_wins
        .into_iter()
        .map(|w| if w { Player::Even } else { Player::Odd })
        .collect())
}

/// Whether `to` is reachable from `from` by a non-empty path whose inner
/// nodes and endpoint satisfy `allow`.
fn reaches(n: usize, succ: &dyn Fn(usize) -> Vec<usize>, from: usize, to: usize, allow: impl Fn(usize) -> bool) -> bool {
    let mut seen = vec![false; n];
    let mut todo = succ(from);
    while let Some(u) = todo.pop() {
        if !allow(u) || seen[u] {
            continue;
        }
        if u == to {
            return true;
        }
        seen[u] = true;
        todo.extend(succ(u));
    }
    false
}

/// Whether every positional strategy pair yields, from every node, a play
/// with the same winner under both colorings.
pub fn same_outcomes(game: &ParityGame, a: &Coloring, b: &Coloring, max_pairs: u128) -> Result<bool, OracleError> {
    let s0 = strategy_count(game, Player::Even);
    let s1 = strategy_count(game, Player::Odd);
    let n = game.node_count();
    if s0.saturating_mul(s1) > max_pairs {
        return Err(OracleError::NodeCap {
            nodes: n,
            cap: max_pairs.min(usize::MAX as u128) as usize,
        });
    }
    for i in 0..s0 {
        let sigma = decode(game, Player::Even, i);
        for j in 0..s1 {
            let tau = decode(game, Player::Odd, j);
            let next: Vec<NodeId> = (0..n).map(|v| sigma[v].or(tau[v]).unwrap()).collect();
            for v in game.arena().nodes() {
                if play_winner(&next, a, v) != play_winner(&next, b, v) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ParityGame {
        let a = Arena::from_lists(&[&[4, 1], &[0, 2], &[1], &[2, 4], &[3]], &[3, 3, 2, 1, 2]).unwrap();
        let owners = [1, 0, 1, 1, 0].map(|o| Player::from_index(o).unwrap()).to_vec();
        ParityGame::new(a, owners).unwrap()
    }

    #[test]
    fn sample_indices() {
        let g = sample();
        let a = g.arena();
        assert_eq!(rabin_index(a, a.coloring(), Relation::SimpleCycles, DEFAULT_CAP), Ok(2));
        assert_eq!(rabin_index(a, a.coloring(), Relation::ClosedWalks, DEFAULT_CAP), Ok(3));
    }

    #[test]
    fn sample_equivalences() {
        let g = sample();
        let a = g.arena();
        let reduced = Coloring::new(vec![1, 2, 2, 1, 2]);
        assert_eq!(equivalent(a, a.coloring(), &reduced, Relation::SimpleCycles, 12), Ok(true));
        assert_eq!(equivalent(a, a.coloring(), &reduced, Relation::ClosedWalks, 12), Ok(false));
        assert_eq!(same_outcomes(&g, a.coloring(), &reduced, 1 << 20), Ok(true));
    }

    #[test]
    fn sample_winners() {
        let g = sample();
        let w = solve_by_enumeration(&g, 1 << 20).unwrap();
        use Player::*;
        assert_eq!(w, vec![Odd, Even, Even, Odd, Odd]);
    }

    #[test]
    fn acyclic_parts_are_free() {
        // 0 -> 1 -> 1 with a high color on the transient node.
        let a = Arena::from_lists(&[&[1], &[1]], &[9, 0]).unwrap();
        assert_eq!(rabin_index(&a, a.coloring(), Relation::SimpleCycles, 12), Ok(0));
    }

    #[test]
    fn caps_are_enforced() {
        let succ: Vec<Vec<NodeId>> = (0..70).map(|i| vec![NodeId::from((i + 1) % 70)]).collect();
        let a = Arena::new(succ, Coloring::new(vec![0; 70])).unwrap();
        assert!(matches!(
            rabin_index(&a, a.coloring(), Relation::SimpleCycles, 12),
            Err(OracleError::NodeCap { .. })
        ));
    }
}
