mod common;

use std::path::PathBuf;

use rabin_index::cycles::enumerate_simple_cycles;
use rabin_index::oracle::{self, Relation};
use rabin_index::reduce::{cycle_pass, pop_pass};
use rabin_index::*;

use common::*;

const EXACT: OracleMode = OracleMode::ExactSimpleCycle(SearchBudget::UNBOUNDED);
const ALPHA: OracleMode = OracleMode::AbstractCycle;

#[test]
fn sample_reductions_and_equivalences() {
    let g = sample_game();
    let a = g.arena();
    let exact = rabin(a, a.coloring(), EXACT).unwrap();
    assert_eq!(exact.coloring.values(), &[1, 2, 2, 1, 2]);
    assert_eq!(oracle::equivalent(a, a.coloring(), &exact.coloring, Relation::SimpleCycles, 12), Ok(true));
    let alpha = rabin(a, a.coloring(), ALPHA).unwrap();
    assert_eq!(alpha.coloring, *a.coloring());
    assert_eq!(abstract_membership(&g, 4), Ok(true));
    assert_eq!(abstract_membership(&g, 3), Ok(false));
    let report = exact.report.to_trace();
    assert!(report.contains("iteration 1: rank 11 -> 8"));
    assert!(exact.report.to_records().lines().count() == 3);
}

#[test]
fn baseline_uses_max_convention() {
    let a = sample_game().arena().clone();
    let out = rabin_a(&a, a.coloring());
    assert_eq!(out.values(), &[3, 3, 0, 1, 2]);
    assert_eq!(oracle::equivalent_max_parity(&a, a.coloring(), &out, 12), Ok(true));
    // Under the min convention the output is not equivalent.
    assert_eq!(oracle::equivalent(&a, a.coloring(), &out, Relation::ClosedWalks, 12), Ok(false));
}

#[test]
fn baseline_lacks_pop() {
    let a = Arena::from_lists(&[&[1], &[0, 2], &[1]], &[1, 2, 3]).unwrap();
    assert_eq!(rabin_a(&a, a.coloring()).index(), 3);
    let alpha = rabin(&a, a.coloring(), ALPHA).unwrap().coloring;
    assert_eq!(alpha.index(), 2);
    assert_eq!(oracle::rabin_index(&a, a.coloring(), Relation::ClosedWalks, 12), Ok(2));
}

#[test]
fn color_path_needs_several_iterations() {
    let g = gen_family(Family::ColorPath, &[7]).unwrap();
    let a = g.arena();
    let exact = rabin(a, a.coloring(), EXACT).unwrap();
    assert_eq!(exact.coloring.values(), &[0, 1, 2, 3, 3, 2, 1]);
    assert_eq!(exact.report.iteration_count(), 4);
    assert_eq!(oracle::rabin_index(a, a.coloring(), Relation::SimpleCycles, 12), Ok(3));
    let alpha = rabin(a, a.coloring(), ALPHA).unwrap();
    assert_eq!(alpha.coloring.index(), 5);
    assert_eq!(oracle::rabin_index(a, a.coloring(), Relation::ClosedWalks, 12), Ok(5));
    assert_eq!(rabin_a(a, a.coloring()), *a.coloring());

    let counts: Vec<usize> = (3..=11)
        .map(|n| {
            let g = gen_family(Family::ColorPath, &[n]).unwrap();
            rabin(g.arena(), g.coloring(), EXACT).unwrap().report.iteration_count()
        })
        .collect();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    assert!(counts.last().unwrap() > &5, "{counts:?}");
}

#[test]
fn three_node_gap_between_exact_and_abstract() {
    // z(1) <-> x(3) <-> y(2), x has a self-loop.
    let a = Arena::from_lists(&[&[2], &[2], &[0, 1, 2]], &[1, 2, 3]).unwrap();
    let exact = rabin(&a, a.coloring(), EXACT).unwrap().coloring;
    assert_eq!(exact.values(), &[1, 0, 1]);
    assert_eq!(oracle::equivalent(&a, a.coloring(), &exact, Relation::SimpleCycles, 12), Ok(true));
    assert_eq!(oracle::equivalent(&a, a.coloring(), &exact, Relation::ClosedWalks, 12), Ok(false));
    let alpha = rabin(&a, a.coloring(), ALPHA).unwrap().coloring;
    assert_eq!(alpha.index(), 3);
}

/// The exact fixpoint meets both post-conditions here yet is not optimal:
/// lowering v0 below v2 lets v1 drop to 1.
#[test]
fn exact_fixpoint_can_exceed_the_index() {
    let a = Arena::from_lists(&[&[2], &[0, 1, 3], &[1, 2], &[2]], &[5, 5, 2, 1]).unwrap();
    let exact = rabin(&a, a.coloring(), EXACT).unwrap().coloring;
    assert_eq!(exact.values(), &[3, 3, 2, 1]);
    let (best, witness) = oracle::rabin_index_witness(&a, a.coloring(), Relation::SimpleCycles, 12).unwrap();
    assert_eq!(best, 2);
    let smaller = Coloring::new(vec![0, 1, 2, 1]);
    assert_eq!(witness.index(), 2);
    assert_eq!(oracle::equivalent(&a, a.coloring(), &smaller, Relation::SimpleCycles, 12), Ok(true));
    for g in all_partitions(&a) {
        let h = g.recolored(smaller.clone()).unwrap();
        assert_eq!(zielonka_solve(&g).winners(), zielonka_solve(&h).winners());
        assert_eq!(oracle::same_outcomes(&g, a.coloring(), &smaller, 1 << 20), Ok(true));
    }
    // The closed-walk relation distinguishes the two, so the abstract
    // reduction is optimal here.
    assert_eq!(oracle::rabin_index(&a, a.coloring(), Relation::ClosedWalks, 12), Ok(3));
    assert_eq!(rabin(&a, a.coloring(), ALPHA).unwrap().coloring.index(), 3);
}

#[test]
fn pop_and_cycle_examples() {
    // Chain into a 0-colored terminal loop.
    let a = Arena::from_lists(&[&[1], &[2], &[3], &[3]], &[5, 5, 5, 0]).unwrap();
    let (c, _) = pop_pass(&a, a.coloring(), EXACT);
    assert_eq!(c.values(), &[0, 0, 0, 0]);
    // Monochromatic cycle collapses to parity.
    let a = Arena::from_lists(&[&[1], &[2], &[0]], &[4, 4, 4]).unwrap();
    let (c, _) = cycle_pass(&a, a.coloring(), EXACT).unwrap();
    assert_eq!(c.values(), &[0, 0, 0]);
}

#[test]
fn static_compression_keeps_simple_cycle_parities() {
    let a = Arena::from_lists(&[&[1], &[2], &[3, 0], &[4], &[5, 2], &[0]], &[0, 3, 4, 5, 6, 8]).unwrap();
    let s = static_compress(a.coloring());
    assert_eq!(s.values(), &[0, 1, 2, 3, 4, 4]);
    assert_eq!(oracle::equivalent(&a, a.coloring(), &s, Relation::SimpleCycles, 12), Ok(true));
    let even = Coloring::new(vec![2, 4, 6, 2, 4, 6]);
    assert_eq!(static_compress(&even).values(), &[0; 6]);
    assert_eq!(oracle::equivalent(&a, &even, &static_compress(&even), Relation::SimpleCycles, 12), Ok(true));
}

#[test]
fn gadget_examples() {
    let two_cycle = vec![vec![NodeId(1)], vec![NodeId(0)]];
    let g = gen_hardness_gadget(&two_cycle, NodeId(0), NodeId(1), 2).unwrap();
    assert!(rabin(&g, g.coloring(), EXACT).unwrap().coloring.index() >= 2);

    let no_cycle = vec![vec![NodeId(0), NodeId(1)], vec![NodeId(1)]];
    let g = gen_hardness_gadget(&no_cycle, NodeId(0), NodeId(1), 2).unwrap();
    assert!(rabin(&g, g.coloring(), EXACT).unwrap().coloring.index() < 2);

    // An s-t cycle through a 0-colored base node does not force index k.
    let triangle = vec![vec![NodeId(2)], vec![NodeId(0)], vec![NodeId(1)]];
    let g = gen_hardness_gadget(&triangle, NodeId(0), NodeId(1), 3).unwrap();
    let ri = oracle::rabin_index(&g, g.coloring(), Relation::SimpleCycles, 12).unwrap();
    assert!(ri < 3);
    assert_eq!(rabin(&g, g.coloring(), EXACT).unwrap().coloring.index(), ri);

    // Spine 2-cycles have the lower endpoint's color.
    let g = gen_hardness_gadget(&two_cycle, NodeId(0), NodeId(1), 4).unwrap();
    let spine: Vec<NodeId> = (2..7).map(NodeId).collect();
    for w in spine.windows(2) {
        assert_eq!(g.cycle_color(&[w[0], w[1]]), Ok(g.color(w[1])));
    }
}

#[test]
fn brute_force_index_matches_full_enumeration() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let n = rng.random_range(1..=4);
        let a = random_arena(&mut rng, n, 2, 4);
        let cycles = enumerate_simple_cycles(&a, 12).unwrap();
        let m = a.coloring().index();
        // Smallest max over every coloring in {0..m}^n that matches all
        // simple-cycle parities.
        let mut best = m;
        let total = (m as usize + 1).pow(n as u32);
        for code in 0..total {
            let mut k = code;
            let vals: Vec<Color> = (0..n)
                .map(|_| {
                    let v = (k % (m as usize + 1)) as Color;
                    k /= m as usize + 1;
                    v
                })
                .collect();
            let cand = Coloring::new(vals);
            if cycles.iter().all(|c| min_color(&cand, c) % 2 == min_color(a.coloring(), c) % 2) {
                best = best.min(cand.index());
            }
        }
        assert_eq!(oracle::rabin_index(&a, a.coloring(), Relation::SimpleCycles, 12), Ok(best));
    }
}

#[test]
fn solver_matches_strategy_enumeration() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let n = rng.random_range(1..=8);
        let a = random_arena(&mut rng, n, 3, 6);
        let g = game_of(&a, &mut rng);
        let s = zielonka_solve(&g);
        assert_eq!(check_solution(&g, &s), Ok(()));
        let brute = oracle::solve_by_enumeration(&g, 1 << 20).unwrap();
        let ours: Vec<Player> = s.winners().iter().map(|w| w.unwrap()).collect();
        assert_eq!(ours, brute);
    }
}

#[test]
fn single_self_loop_is_won_by_even() {
    let g = parse_pgsolver("parity 0; 0 0 0 0;").unwrap();
    let s = zielonka_solve(&g);
    assert_eq!(s.region(Player::Even), vec![NodeId(0)]);
    assert_eq!(write_pgsolver(&g), "parity 0;\n0 0 0 0;\n");
}

#[test]
fn verify_rejects_broken_solutions() {
    let g = sample_game();
    let good = zielonka_solve(&g);
    // Player 0 moves v1 to v0, which it does not win.
    let text = write_solution(&g, &good).replace("1 0 2;", "1 0 0;");
    let bad = parse_solution(&g, &text).unwrap();
    assert!(matches!(check_solution(&g, &bad), Err(VerifyError::Escape { .. })));
    // Swapped labels.
    let text: String = write_solution(&g, &good)
        .lines()
        .map(|l| {
            let mut t: Vec<String> = l.trim_end_matches(';').split(' ').map(String::from).collect();
            if t[0] != "paritysol" {
                t[1] = if t[1] == "0" { "1".into() } else { "0".into() };
            }
            format!("{};\n", t.join(" "))
        })
        .collect();
    assert!(!verify_solution(&g, &parse_solution(&g, &text).unwrap()));
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Family output is pinned by self-generated files. Set `UPDATE_GOLDEN=1`
/// to rewrite them after an intentional change.
#[test]
fn family_goldens() {
    let cases: [(Family, &[u64], &str); 7] = [
        (Family::Clique, &[4], "clique_4.gm"),
        (Family::Ladder, &[3], "ladder_3.gm"),
        (Family::Jurdzinski, &[2, 2], "jurdzinski_2_2.gm"),
        (Family::RecursiveLadder, &[3], "recursive_ladder_3.gm"),
        (Family::ModelCheckerLadder, &[3], "model_checker_ladder_3.gm"),
        (Family::TowerOfHanoi, &[2], "tower_of_hanoi_2.gm"),
        (Family::ColorPath, &[7], "color_path_7.gm"),
    ];
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (f, p, file) in cases {
        let text = write_pgsolver(&gen_family(f, p).unwrap());
        let path = golden_dir().join(file);
        if update {
            std::fs::create_dir_all(golden_dir()).unwrap();
            std::fs::write(&path, &text).unwrap();
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, want, "{file}");
        assert_eq!(parse_pgsolver(&want).unwrap(), gen_family(f, p).unwrap());
    }
}
