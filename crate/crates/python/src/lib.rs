//! Python bindings. Nodes are addressed by their dense position `0..n` in
//! file order, not by the ids written in PGSolver files.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use ::rabin_index as ri;
use ri::oracle::{self, Relation, DEFAULT_CAP};
use ri::{Color, Coloring, NodeId, OracleMode, Player, SearchBudget};

create_exception!(pyrabin, RabinError, PyException);
create_exception!(pyrabin, ParseError, RabinError);
create_exception!(pyrabin, BudgetExhausted, RabinError);
create_exception!(pyrabin, CapExceeded, RabinError);
create_exception!(pyrabin, VerifyError, RabinError);

fn parse_err(e: ri::ParseError) -> PyErr {
    ParseError::new_err(e.to_string())
}

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn reduce_err(e: ri::ReduceError) -> PyErr {
    match e {
        ri::ReduceError::BudgetExhausted { .. } => BudgetExhausted::new_err(e.to_string()),
        ri::ReduceError::InvalidBound => value_err(e),
    }
}

fn oracle_err(e: ri::OracleError) -> PyErr {
    match e {
        ri::OracleError::NodeCap { .. } => CapExceeded::new_err(e.to_string()),
        _ => RabinError::new_err(e.to_string()),
    }
}

fn mode_of(name: &str, budget: Option<u64>) -> PyResult<OracleMode> {
    match name {
        "exact" => Ok(OracleMode::ExactSimpleCycle(budget.map_or_else(SearchBudget::default, SearchBudget::limited))),
        "alpha" => Ok(OracleMode::AbstractCycle),
        _ => Err(value_err(format!("unknown mode `{name}`, expected `exact` or `alpha`"))),
    }
}

fn relation_of(name: &str) -> PyResult<Relation> {
    match name {
        "simple" => Ok(Relation::SimpleCycles),
        "alpha" => Ok(Relation::ClosedWalks),
        _ => Err(value_err(format!("unknown relation `{name}`, expected `simple` or `alpha`"))),
    }
}

fn player(p: Player) -> u8 {
    p.index() as u8
}

/// A parity game: arena, coloring and node owners.
#[pyclass(module = "pyrabin", frozen)]
struct Game {
    inner: ri::ParityGame,
}

impl Game {
    fn coloring_of(&self, colors: Vec<Color>) -> PyResult<Coloring> {
        if colors.len() != self.inner.node_count() {
            return Err(value_err(format!("expected {} colors, got {}", self.inner.node_count(), colors.len())));
        }
        Ok(Coloring::new(colors))
    }
}

#[pymethods]
impl Game {
    /// Builds a game from successor lists, colors and owners (0 or 1).
    #[new]
    fn new(successors: Vec<Vec<u32>>, colors: Vec<Color>, owners: Vec<u8>) -> PyResult<Self> {
        let succ = successors.into_iter().map(|s| s.into_iter().map(NodeId).collect()).collect();
        let arena = ri::Arena::new(succ, Coloring::new(colors)).map_err(value_err)?;
        let owners = owners
            .into_iter()
            .map(|o| Player::from_index(o).ok_or_else(|| value_err(format!("owner {o} is not 0 or 1"))))
            .collect::<PyResult<_>>()?;
        Ok(Game { inner: ri::ParityGame::new(arena, owners).map_err(value_err)? })
    }

    /// Parses PGSolver text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Game { inner: ri::parse_pgsolver(text).map_err(parse_err)? })
    }

    fn to_pgsolver(&self) -> String {
        ri::write_pgsolver(&self.inner)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn colors(&self) -> Vec<Color> {
        self.inner.coloring().values().to_vec()
    }

    #[getter]
    fn owners(&self) -> Vec<u8> {
        self.inner.owners().iter().map(|&p| player(p)).collect()
    }

    #[getter]
    fn successors(&self) -> Vec<Vec<u32>> {
        self.inner.arena().successor_lists().iter().map(|s| s.iter().map(|v| v.0).collect()).collect()
    }

    /// Largest color.
    #[getter]
    fn index(&self) -> Color {
        self.inner.coloring().index()
    }

    /// Sum of colors.
    #[getter]
    fn rank(&self) -> u64 {
        self.inner.coloring().rank()
    }

    /// Same arena and owners with a new coloring.
    fn recolored(&self, colors: Vec<Color>) -> PyResult<Self> {
        let c = self.coloring_of(colors)?;
        Ok(Game { inner: self.inner.recolored(c).map_err(value_err)? })
    }

    fn __eq__(&self, other: &Game) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Game(nodes={}, index={})", self.inner.node_count(), self.index())
    }
}

/// Winners and positional strategies, indexed by dense node position.
#[pyclass(module = "pyrabin", frozen)]
struct Solution {
    inner: ri::Solution,
}

#[pymethods]
impl Solution {
    /// Parses a `paritysol` listing for `game`.
    #[staticmethod]
    fn parse(game: &Game, text: &str) -> PyResult<Self> {
        Ok(Solution { inner: ri::parse_solution(&game.inner, text).map_err(parse_err)? })
    }

    /// Winner per node (0, 1 or None).
    #[getter]
    fn winners(&self) -> Vec<Option<u8>> {
        self.inner.winners().iter().map(|w| w.map(player)).collect()
    }

    /// Chosen successor per node, None where the owner loses.
    #[getter]
    fn strategy(&self) -> Vec<Option<u32>> {
        (0..self.inner.node_count()).map(|i| self.inner.strategy(NodeId(i as u32)).map(|w| w.0)).collect()
    }

    /// Nodes won by `player`.
    fn region(&self, player: u8) -> PyResult<Vec<u32>> {
        let p = Player::from_index(player).ok_or_else(|| value_err(format!("player {player} is not 0 or 1")))?;
        Ok(self.inner.region(p).into_iter().map(|v| v.0).collect())
    }

    fn to_text(&self, game: &Game) -> String {
        ri::write_solution(&game.inner, &self.inner)
    }

    fn __eq__(&self, other: &Solution) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Solution(w0={:?})", self.region(0).unwrap_or_default())
    }
}

/// Result of a color reduction.
#[pyclass(module = "pyrabin", frozen, get_all)]
struct Reduction {
    colors: Vec<Color>,
    initial_index: Color,
    final_index: Color,
    iterations: usize,
    rank_trace: Vec<u64>,
    trace: String,
}

#[pymethods]
impl Reduction {
    fn __repr__(&self) -> String {
        format!("Reduction(index {} -> {}, iterations={})", self.initial_index, self.final_index, self.iterations)
    }
}

/// Reduces colors to an equivalent coloring. `mode` is `exact` (simple
/// cycles, budgeted search) or `alpha` (closed walks, polynomial).
#[pyfunction]
#[pyo3(signature = (game, mode = "exact", budget = None))]
fn rabin(py: Python<'_>, game: &Game, mode: &str, budget: Option<u64>) -> PyResult<Reduction> {
    let mode = mode_of(mode, budget)?;
    let g = &game.inner;
    let r = py.detach(|| ri::rabin(g.arena(), g.coloring(), mode)).map_err(reduce_err)?;
    Ok(Reduction {
        initial_index: r.report.initial_index,
        final_index: r.report.final_index,
        iterations: r.report.iteration_count(),
        rank_trace: r.report.rank_trace.clone(),
        trace: r.report.to_trace(),
        colors: r.coloring.into_values(),
    })
}

/// Gap-free, parity-preserving renumbering of a color list.
#[pyfunction]
fn static_compress(colors: Vec<Color>) -> Vec<Color> {
    ri::static_compress(&Coloring::new(colors)).into_values()
}

/// Baseline max-convention reduction; returns the new colors.
#[pyfunction]
fn rabin_a(game: &Game) -> Vec<Color> {
    ri::rabin_a(game.inner.arena(), game.inner.coloring()).into_values()
}

/// True when every cycle has an even minimal color.
#[pyfunction]
fn all_cycles_even(game: &Game) -> bool {
    ri::all_cycles_even(game.inner.arena(), game.inner.coloring())
}

/// True when the abstract Rabin index is below `k`.
#[pyfunction]
fn membership(game: &Game, k: Color) -> PyResult<bool> {
    ri::abstract_membership(&game.inner, k).map_err(reduce_err)
}

/// Solves with the recursive algorithm; `pre` compresses colors first
/// (`none`, `static` or `alpha`). Winners refer to the input game.
#[pyfunction]
#[pyo3(signature = (game, pre = "none"))]
fn solve(py: Python<'_>, game: &Game, pre: &str) -> PyResult<Solution> {
    let g = &game.inner;
    let target = match pre {
        "none" => g.clone(),
        "static" => g.recolored(ri::static_compress(g.coloring())).map_err(value_err)?,
        "alpha" => {
            let r = py.detach(|| ri::rabin(g.arena(), g.coloring(), OracleMode::AbstractCycle)).map_err(reduce_err)?;
            g.recolored(r.coloring).map_err(value_err)?
        }
        _ => return Err(value_err(format!("unknown preprocessing `{pre}`"))),
    };
    Ok(Solution { inner: py.detach(|| ri::zielonka_solve(&target)) })
}

/// Checks a solution; raises `VerifyError` with the failed check.
#[pyfunction]
fn check(game: &Game, solution: &Solution) -> PyResult<()> {
    ri::check_solution(&game.inner, &solution.inner)
        .map_err(|e| VerifyError::new_err(format!("{}: {e}", e.category())))
}

#[pyfunction]
fn verify(game: &Game, solution: &Solution) -> bool {
    ri::verify_solution(&game.inner, &solution.inner)
}

/// Generates a benchmark family, e.g. `gen_family("jurdzinski", [5, 10])`.
#[pyfunction]
fn gen_family(name: &str, params: Vec<u64>) -> PyResult<Game> {
    let family: ri::Family = name.parse().map_err(value_err)?;
    Ok(Game { inner: ri::gen_family(family, &params).map_err(value_err)? })
}

/// Random game from a `nodes/minOut/maxOut/maxColor` config.
#[pyfunction]
#[pyo3(signature = (config, seed = 0))]
fn gen_random(config: &str, seed: u64) -> PyResult<Game> {
    let cfg: ri::RandomConfig = config.parse().map_err(value_err)?;
    Ok(Game { inner: ri::gen_random(&cfg.with_seed(seed)).map_err(value_err)? })
}

/// Brute-force Rabin index with a witness coloring. Small games only.
#[pyfunction]
#[pyo3(name = "rabin_index", signature = (game, relation = "simple", cap = DEFAULT_CAP))]
fn rabin_index_oracle(py: Python<'_>, game: &Game, relation: &str, cap: usize) -> PyResult<(Color, Vec<Color>)> {
    let relation = relation_of(relation)?;
    let g = &game.inner;
    let (k, w) = py
        .detach(|| oracle::rabin_index_witness(g.arena(), g.coloring(), relation, cap))
        .map_err(oracle_err)?;
    Ok((k, w.into_values()))
}

/// Whether two colorings of `game`'s arena match on all cycle parities.
#[pyfunction]
#[pyo3(signature = (game, a, b, relation = "simple", cap = DEFAULT_CAP))]
fn equivalent(game: &Game, a: Vec<Color>, b: Vec<Color>, relation: &str, cap: usize) -> PyResult<bool> {
    let relation = relation_of(relation)?;
    let (a, b) = (game.coloring_of(a)?, game.coloring_of(b)?);
    oracle::equivalent(game.inner.arena(), &a, &b, relation, cap).map_err(oracle_err)
}

#[pymodule]
fn pyrabin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<Game>()?;
    m.add_class::<Solution>()?;
    m.add_class::<Reduction>()?;
    m.add("RabinError", py.get_type::<RabinError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("BudgetExhausted", py.get_type::<BudgetExhausted>())?;
    m.add("CapExceeded", py.get_type::<CapExceeded>())?;
    m.add("VerifyError", py.get_type::<VerifyError>())?;
    m.add_function(wrap_pyfunction!(rabin, m)?)?;
    m.add_function(wrap_pyfunction!(static_compress, m)?)?;
    m.add_function(wrap_pyfunction!(rabin_a, m)?)?;
    m.add_function(wrap_pyfunction!(all_cycles_even, m)?)?;
    m.add_function(wrap_pyfunction!(membership, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(gen_family, m)?)?;
    m.add_function(wrap_pyfunction!(gen_random, m)?)?;
    m.add_function(wrap_pyfunction!(rabin_index_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn option_names() {
        assert_eq!(mode_of("alpha", None).unwrap(), OracleMode::AbstractCycle);
        assert_eq!(mode_of("exact", Some(5)).unwrap(), OracleMode::ExactSimpleCycle(SearchBudget::limited(5)));
        assert_eq!(relation_of("simple").unwrap(), Relation::SimpleCycles);
        assert_eq!(relation_of("alpha").unwrap(), Relation::ClosedWalks);
    }
}
