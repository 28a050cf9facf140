//! Rabin-index toolkit for min-parity games.
//!
//! Colorings are rewritten into equivalent ones with fewer colors, either
//! exactly (simple-cycle search), abstractly (SCC based, polynomial) or by
//! static compression. A recursive solver and exhaustive oracles check
//! that reductions preserve winners.

pub mod arena;
pub mod bench;
pub mod cycles;
pub mod generators;
pub mod oracle;
pub mod pgsolver;
pub mod reduce;
pub mod scc;
pub mod solver;

pub use arena::{cycle_color, index, Arena, ArenaError, Color, Coloring, NameTable, NodeId, ParityGame, Player};
pub use cycles::{CycleAnswer, OracleError, SearchBudget};
pub use generators::{gen_family, gen_hardness_gadget, gen_random, Family, GenError, RandomConfig};
pub use pgsolver::{parse_pgsolver, parse_solution, write_pgsolver, write_solution, ParseError};
pub use reduce::{
    abstract_membership, all_cycles_even, rabin, rabin_a, static_compress, OracleMode, ReduceError, Reduction,
    ReductionReport,
};
pub use solver::{check_solution, verify_solution, zielonka_solve, Solution, VerifyError};
