#![allow(dead_code)]

use rabin_index::{Arena, Color, Coloring, NodeId, ParityGame, Player};
use rand::seq::index::sample;
use rand::Rng;

pub const SAMPLE_TEXT: &str = "parity 4;
0 3 1 4,1;
1 3 0 0,2;
2 2 1 1;
3 1 1 2,4;
4 2 0 3;
";

pub fn sample_game() -> ParityGame {
    rabin_index::parse_pgsolver(SAMPLE_TEXT).unwrap()
}

/// Small random arena; self-loops allowed, out-degree in `1..=max_out`.
pub fn random_arena(rng: &mut impl Rng, n: usize, max_out: usize, max_color: Color) -> Arena {
    let succ = (0..n)
        .map(|_| {
            let deg = rng.random_range(1..=max_out.min(n));
            let mut s: Vec<NodeId> = sample(rng, n, deg).into_iter().map(NodeId::from).collect();
            s.sort_unstable();
            s
        })
        .collect();
    let colors = (0..n).map(|_| rng.random_range(0..=max_color)).collect();
    Arena::new(succ, Coloring::new(colors)).unwrap()
}

/// Random arena whose successor sets are uniform non-empty subsets.
pub fn random_dense_arena(rng: &mut impl Rng, n: usize, max_color: Color) -> Arena {
    let succ = (0..n)
        .map(|_| {
            let mask: u32 = rng.random_range(1..(1u32 << n));
            (0..n).filter(|i| mask >> i & 1 == 1).map(NodeId::from).collect()
        })
        .collect();
    let colors = (0..n).map(|_| rng.random_range(0..=max_color)).collect();
    Arena::new(succ, Coloring::new(colors)).unwrap()
}

/// Every ownership partition of the arena's nodes.
pub fn all_partitions(arena: &Arena) -> impl Iterator<Item = ParityGame> + '_ {
    let n = arena.node_count();
    (0u32..1 << n).map(move |mask| {
        let owners = (0..n)
            .map(|i| if mask >> i & 1 == 1 { Player::Odd } else { Player::Even })
            .collect();
        ParityGame::new(arena.clone(), owners).unwrap()
    })
}

pub fn game_of(arena: &Arena, rng: &mut impl Rng) -> ParityGame {
    let owners = (0..arena.node_count())
        .map(|_| if rng.random_bool(0.5) { Player::Odd } else { Player::Even })
        .collect();
    ParityGame::new(arena.clone(), owners).unwrap()
}

pub fn min_color(coloring: &Coloring, nodes: &[NodeId]) -> Color {
    nodes.iter().map(|&v| coloring.get(v)).min().unwrap()
}
