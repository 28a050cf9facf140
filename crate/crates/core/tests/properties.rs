mod common;

use proptest::collection::vec;
use proptest::prelude::*;
use rabin_index::cycles::{enumerate_simple_cycles, strongly_connected_subsets};
use rabin_index::oracle::{self, Relation};
use rabin_index::solver::attract;
use rabin_index::*;

use common::min_color;

const EXACT: OracleMode = OracleMode::ExactSimpleCycle(SearchBudget::UNBOUNDED);
const ALPHA: OracleMode = OracleMode::AbstractCycle;

/// Arenas with up to `max_n` nodes; successor sets are non-empty bitmasks.
fn arena(max_n: usize, max_color: Color) -> impl Strategy<Value = Arena> {
    (1..=max_n).prop_flat_map(move |n| {
        (vec(1u32..(1 << n), n), vec(0..=max_color, n)).prop_map(move |(masks, colors)| {
            let succ = masks
                .iter()
                .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(NodeId::from).collect())
                .collect();
            Arena::new(succ, Coloring::new(colors)).unwrap()
        })
    })
}

fn game(max_n: usize, max_color: Color) -> impl Strategy<Value = ParityGame> {
    arena(max_n, max_color).prop_flat_map(|a| {
        let n = a.node_count();
        vec(any::<bool>(), n).prop_map(move |o| {
            let owners = o.into_iter().map(|b| if b { Player::Odd } else { Player::Even }).collect();
            ParityGame::new(a.clone(), owners).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // The exact fixpoint never undershoots the true index; it can rarely
    // overshoot it (see `exact_fixpoint_can_exceed_the_index`).
    #[test]
    fn exact_reduction_is_sound_and_bounded(a in arena(7, 8)) {
        let r = rabin(&a, a.coloring(), EXACT).unwrap();
        prop_assert!(oracle::equivalent(&a, a.coloring(), &r.coloring, Relation::SimpleCycles, 12).unwrap());
        let best = oracle::rabin_index(&a, a.coloring(), Relation::SimpleCycles, 12).unwrap();
        prop_assert!(r.coloring.index() >= best);
    }

    #[test]
    fn abstract_reduction_is_sound_and_optimal(a in arena(7, 8)) {
        let r = rabin(&a, a.coloring(), ALPHA).unwrap();
        prop_assert!(oracle::equivalent(&a, a.coloring(), &r.coloring, Relation::ClosedWalks, 12).unwrap());
        let best = oracle::rabin_index(&a, a.coloring(), Relation::ClosedWalks, 12).unwrap();
        prop_assert_eq!(r.coloring.index(), best);
    }

    #[test]
    fn reductions_are_idempotent(a in arena(8, 8)) {
        for mode in [EXACT, ALPHA] {
            let once = rabin(&a, a.coloring(), mode).unwrap();
            let twice = rabin(&a, &once.coloring, mode).unwrap();
            prop_assert_eq!(&twice.coloring, &once.coloring);
            prop_assert_eq!(twice.report.iteration_count(), 1);
        }
    }

    #[test]
    fn indices_are_ordered(a in arena(9, 10)) {
        let exact = rabin(&a, a.coloring(), EXACT).unwrap().coloring.index();
        let alpha = rabin(&a, a.coloring(), ALPHA).unwrap().coloring.index();
        let stat = static_compress(a.coloring()).index();
        prop_assert!(exact <= alpha);
        prop_assert!(alpha <= stat);
        prop_assert!(stat <= a.coloring().index());
    }

    #[test]
    fn rank_decreases_until_the_last_iteration(a in arena(9, 10)) {
        for mode in [EXACT, ALPHA] {
            let r = rabin(&a, a.coloring(), mode).unwrap();
            let t = &r.report.rank_trace;
            let k = t.len();
            prop_assert!(t[..k - 1].windows(2).all(|w| w[1] < w[0]), "{:?}", t);
            prop_assert_eq!(t[k - 1], t[k - 2]);
        }
    }

    #[test]
    fn fixpoints_satisfy_post_conditions(a in arena(8, 8)) {
        for (mode, sets) in [
            (EXACT, enumerate_simple_cycles(&a, 12).unwrap()),
            (ALPHA, strongly_connected_subsets(&a, 12).unwrap()),
        ] {
            let c = rabin(&a, a.coloring(), mode).unwrap().coloring;
            prop_assert!(sets.iter().any(|s| min_color(&c, s) == c.index()));
            for v in a.nodes().filter(|&v| c.get(v) > 1) {
                prop_assert!(sets.iter().any(|s| s.contains(&v) && min_color(&c, s) == c.get(v) - 1));
            }
        }
    }

    #[test]
    fn static_compression_is_equivalent(a in arena(8, 12)) {
        let s = static_compress(a.coloring());
        prop_assert!(oracle::equivalent(&a, a.coloring(), &s, Relation::SimpleCycles, 12).unwrap());
        prop_assert!(oracle::equivalent(&a, a.coloring(), &s, Relation::ClosedWalks, 12).unwrap());
        // Order preserving.
        for u in a.nodes() {
            for v in a.nodes() {
                prop_assert!(a.color(u) > a.color(v) || s.get(u) <= s.get(v));
            }
        }
    }

    #[test]
    fn all_cycles_even_matches_enumeration(a in arena(8, 5)) {
        let cycles = enumerate_simple_cycles(&a, 12).unwrap();
        let even = cycles.iter().all(|c| min_color(a.coloring(), c) % 2 == 0);
        prop_assert_eq!(all_cycles_even(&a, a.coloring()), even);
        let zero = rabin(&a, a.coloring(), EXACT).unwrap().coloring.index() == 0;
        prop_assert_eq!(zero, even);
    }

    #[test]
    fn membership_at_one_is_the_even_test(g in game(8, 5)) {
        prop_assert_eq!(abstract_membership(&g, 1).unwrap(), all_cycles_even(g.arena(), g.coloring()));
    }

    #[test]
    fn baseline_is_max_equivalent(a in arena(7, 6)) {
        let out = rabin_a(&a, a.coloring());
        prop_assert!(oracle::equivalent_max_parity(&a, a.coloring(), &out, 12).unwrap());
        prop_assert!(out.index() <= a.coloring().index());
    }

    #[test]
    fn max_color_checks_agree(a in arena(10, 6)) {
        prop_assert_eq!(
            rabin_index::cycles::simple_cycle_with_max_color(&a, a.coloring()),
            rabin_index::cycles::cycle_with_max_color(&a, a.coloring())
        );
    }

    #[test]
    fn solutions_verify_and_survive_reduction(g in game(8, 6)) {
        let s = zielonka_solve(&g);
        prop_assert_eq!(check_solution(&g, &s), Ok(()));
        for mode in [EXACT, ALPHA] {
            let c = rabin(g.arena(), g.coloring(), mode).unwrap().coloring;
            let h = g.recolored(c).unwrap();
            let t = zielonka_solve(&h);
            prop_assert_eq!(s.winners(), t.winners());
            prop_assert_eq!(check_solution(&g, &t), Ok(()));
            prop_assert_eq!(check_solution(&h, &s), Ok(()));
        }
    }

    #[test]
    fn attractors_are_closed(g in game(9, 4), bits in any::<u16>()) {
        let n = g.node_count();
        let target: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        let all = vec![true; n];
        for p in [Player::Even, Player::Odd] {
            let a = attract(&g, p, &target, &all);
            for v in g.arena().nodes() {
                let i = v.index();
                let succ = g.arena().successors(v);
                if a.region[i] && !target[i] {
                    if g.owner(v) == p {
                        let w = a.witness[i].unwrap();
                        prop_assert!(g.arena().has_edge(v, w) && a.region[w.index()]);
                    } else {
                        prop_assert!(succ.iter().all(|w| a.region[w.index()]));
                    }
                }
                // Nothing outside can be attracted in one more step.
                if !a.region[i] {
                    let into = |w: &NodeId| a.region[w.index()];
                    if g.owner(v) == p {
                        prop_assert!(!succ.iter().any(into));
                    } else {
                        prop_assert!(!succ.iter().all(into));
                    }
                }
            }
        }
    }

    #[test]
    fn pgsolver_round_trip(seed in any::<u64>()) {
        let g = gen_random(&"20/1/4/10".parse::<RandomConfig>().unwrap().with_seed(seed)).unwrap();
        let text = write_pgsolver(&g);
        let back = parse_pgsolver(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_pgsolver(&back), text);
        let s = zielonka_solve(&g);
        prop_assert_eq!(parse_solution(&g, &write_solution(&g, &s)).unwrap(), s);
    }

    #[test]
    fn random_games_respect_their_config(n in 2usize..60, lo in 1usize..4, extra in 0usize..4, cc in 0u32..50, seed in any::<u64>()) {
        let hi = (lo + extra).min(n - 1);
        prop_assume!(lo <= hi);
        let cfg = RandomConfig { nodes: n, min_out: lo, max_out: hi, max_color: cc, seed };
        let g = gen_random(&cfg).unwrap();
        prop_assert_eq!(&g, &gen_random(&cfg).unwrap());
        for v in g.arena().nodes() {
            let s = g.arena().successors(v);
            prop_assert!(s.len() >= lo && s.len() <= hi);
            prop_assert!(!s.contains(&v));
            prop_assert!(g.arena().color(v) <= cc);
        }
    }

    #[test]
    fn cycle_color_is_rotation_invariant(a in arena(8, 9), pick in any::<prop::sample::Index>(), r in 0usize..8) {
        let cycles = enumerate_simple_cycles(&a, 12).unwrap();
        let c = pick.get(&cycles);
        let mut rotated = c.clone();
        rotated.rotate_left(r % c.len());
        prop_assert_eq!(a.cycle_color(c), a.cycle_color(&rotated));
        prop_assert_eq!(a.cycle_color(c).unwrap(), min_color(a.coloring(), c));
    }
}
