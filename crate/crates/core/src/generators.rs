//! Benchmark game families, random games and the hardness gadget.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arena::{Arena, ArenaError, Color, Coloring, NodeId, ParityGame, Player};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("family `{family}` expects {expected}, got {got:?}")]
    BadParams {
        family: &'static str,
        expected: &'static str,
        got: Vec<u64>,
    },
    #[error("invalid random config `{0}`: expected nodes/minOut/maxOut/maxColor")]
    BadConfig(String),
    #[error("infeasible random config: {0}")]
    Infeasible(String),
    #[error("gadget needs k >= 2, got {0}")]
    GadgetBound(Color),
    #[error("gadget endpoints must be distinct nodes of the base")]
    GadgetEndpoints,
    #[error(transparent)]
    Arena(#[from] ArenaError),
}

/// Parameters of a random game: `nodes/minOut/maxOut/maxColor` plus seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomConfig {
    pub nodes: usize,
    pub min_out: usize,
    pub max_out: usize,
    pub max_color: Color,
    pub seed: u64,
}

impl RandomConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.nodes == 0 {
            return Err(GenError::Infeasible("no nodes".into()));
        }
        if self.min_out == 0 || self.min_out > self.max_out {
            return Err(GenError::Infeasible(format!(
                "out-degree range [{}, {}] is empty or admits dead ends",
                self.min_out, self.max_out
            )));
        }
        if self.max_out > self.nodes - 1 {
            return Err(GenError::Infeasible(format!(
                "max out-degree {} exceeds {} distinct non-self targets",
                self.max_out,
                self.nodes - 1
            )));
        }
        Ok(())
    }
}

impl FromStr for RandomConfig {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        let bad = || GenError::BadConfig(s.to_string());
        let parts: Vec<&str> = s.trim().split('/').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        let cfg = RandomConfig {
            nodes: num(parts[0])? as usize,
            min_out: num(parts[1])? as usize,
            max_out: num(parts[2])? as usize,
            max_color: Color::try_from(num(parts[3])?).map_err(|_| bad())?,
            seed: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for RandomConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}/{}", self.nodes, self.min_out, self.max_out, self.max_color)
    }
}

/// A random game without self-loops. Owners are fair coin flips, colors
/// uniform in `0..=max_color`, out-degrees uniform in `[min_out, max_out]`
/// with distinct targets.
pub fn gen_random(config: &RandomConfig) -> Result<ParityGame, GenError> {
    config.validate()?;
    let n = config.nodes;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut owners = Vec::with_capacity(n);
    let mut colors = Vec::with_capacity(n);
    let mut succ = Vec::with_capacity(n);
    for v in 0..n {
        owners.push(if rng.random_bool(0.5) { Player::Odd } else { Player::Even });
        colors.push(rng.random_range(0..=config.max_color));
        let deg = rng.random_range(config.min_out..=config.max_out);
        // Sample from the n-1 other nodes, then shift past v.
        let mut targets: Vec<NodeId> = sample(&mut rng, n - 1, deg)
            .into_iter()
            .map(|t| NodeId::from(if t >= v { t + 1 } else { t }))
            .collect();
        targets.sort_unstable();
        succ.push(targets);
    }
    Ok(ParityGame::new(Arena::new(succ, Coloring::new(colors))?, owners)?)
}

/// The named benchmark families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Clique,
    Ladder,
    Jurdzinski,
    RecursiveLadder,
    ModelCheckerLadder,
    TowerOfHanoi,
    /// Bidirected path colored 0, 1, 2, ...; iteration count grows with length.
    ColorPath,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Clique,
        Family::Ladder,
        Family::Jurdzinski,
        Family::RecursiveLadder,
        Family::ModelCheckerLadder,
        Family::TowerOfHanoi,
        Family::ColorPath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Clique => "clique",
            Family::Ladder => "ladder",
            Family::Jurdzinski => "jurdzinski",
            Family::RecursiveLadder => "recursive_ladder",
            Family::ModelCheckerLadder => "model_checker_ladder",
            Family::TowerOfHanoi => "tower_of_hanoi",
            Family::ColorPath => "color_path",
        }
    }

    fn arity(self) -> usize {
        match self {
            Family::Jurdzinski => 2,
            _ => 1,
        }
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        let key: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .flat_map(char::to_lowercase)
            .collect();
        Family::ALL
            .into_iter()
            .find(|f| f.name().replace('_', "") == key)
            .ok_or_else(|| GenError::UnknownFamily(s.to_string()))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct Builder {
    succ: Vec<Vec<NodeId>>,
    colors: Vec<Color>,
    owners: Vec<Player>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            succ: Vec::new(),
            colors: Vec::new(),
            owners: Vec::new(),
        }
    }

    fn add(&mut self, color: Color, owner: Player) -> usize {
        self.succ.push(Vec::new());
        self.colors.push(color);
        self.owners.push(owner);
        self.succ.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize) {
        let b = NodeId::from(b);
        if !self.succ[a].contains(&b) {
            self.succ[a].push(b);
        }
    }

    fn both(&mut self, a: usize, b: usize) {
        self.edge(a, b);
        self.edge(b, a);
    }

    fn finish(mut self) -> Result<ParityGame, GenError> {
        for s in &mut self.succ {
            s.sort_unstable();
        }
        Ok(ParityGame::new(Arena::new(self.succ, Coloring::new(self.colors))?, self.owners)?)
    }
}

fn player(i: usize) -> Player {
    if i % 2 == 0 {
        Player::Even
    } else {
        Player::Odd
    }
}

/// Builds a family instance from its numeric parameters.
pub fn gen_family(family: Family, params: &[u64]) -> Result<ParityGame, GenError> {
    let bad = |expected| GenError::BadParams {
        family: family.name(),
        expected,
        got: params.to_vec(),
    };
    if params.len() != family.arity() {
        return Err(bad(if family.arity() == 2 { "two parameters" } else { "one parameter" }));
    }
    let n = params[0] as usize;
    if n == 0 {
        return Err(bad("positive parameters"));
    }
    match family {
        Family::Clique => {
            if n < 2 {
                return Err(bad("at least 2 nodes"));
            }
            let mut b = Builder::new();
            for i in 0..n {
                b.add(i as Color + 1, player(i + 1));
            }
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    b.edge(i, j);
                }
            }
            b.finish()
        }
        Family::Ladder => {
            let m = 2 * n;
            let mut b = Builder::new();
            for i in 0..m {
                b.add(if i % 2 == 0 { 2 } else { 1 }, player(i));
            }
            for i in 0..m {
                b.edge(i, (i + 1) % m);
                b.edge(i, (i + 2) % m);
            }
            b.finish()
        }
        Family::Jurdzinski => {
            let m = params[1] as usize;
            if m == 0 {
                return Err(bad("positive parameters"));
            }
            let top = 2 * n as Color;
            let mut b = Builder::new();
            let odd: Vec<usize> = (0..=2 * m)
                .map(|k| b.add(if k % 2 == 0 { top + 2 } else { top + 1 }, Player::Odd))
                .collect();
            for k in 0..2 * m {
                b.both(odd[k], odd[k + 1]);
            }
            for i in 1..=n as Color {
                let row: Vec<usize> = (0..=3 * m)
                    .map(|k| b.add(if k % 3 == 0 { 2 * i } else { 2 * i - 1 }, Player::Even))
                    .collect();
                for k in 0..3 * m {
                    b.both(row[k], row[k + 1]);
                }
                for j in 0..=m {
                    b.both(row[3 * j], odd[2 * j]);
                }
            }
            b.finish()
        }
        Family::RecursiveLadder => {
            let mut b = Builder::new();
            let mut a_nodes = Vec::with_capacity(n);
            for i in 0..n {
                let base = 3 * i as Color;
                let a = b.add(base + 2, player(i));
                let bb = b.add(base + 3, player(i + 1));
                let c = b.add(base + 4, player(i));
                b.both(a, bb);
                b.both(bb, c);
                a_nodes.push(a);
            }
            for w in a_nodes.windows(2) {
                b.both(w[0], w[1]);
            }
            let t = b.add(3 * n as Color + 2, player(n));
            let u = b.add(3 * n as Color + 3, Player::Even);
            b.both(a_nodes[n - 1], t);
            b.both(t, u);
            b.edge(u, u);
            b.finish()
        }
        Family::ModelCheckerLadder => {
            let mut b = Builder::new();
            let base = b.add(0, Player::Even);
            for i in 0..n as Color {
                b.add(2 * i + 1, Player::Odd);
                b.add(2 * i + 2, Player::Even);
            }
            b.edge(base, 1);
            for i in 0..n {
                let p = 1 + 2 * i;
                let q = p + 1;
                b.edge(p, q);
                b.edge(p, base);
                if i + 1 < n {
                    b.edge(q, q + 1);
                }
                b.edge(q, base);
            }
            b.finish()
        }
        Family::TowerOfHanoi => {
            if n > 12 {
                return Err(bad("at most 12 disks"));
            }
            let count = 3usize.pow(n as u32);
            // State k assigns disk d to peg (k / 3^(n-1-d)) % 3; disk 0 is smallest.
            let peg = |k: usize, d: usize| (k / 3usize.pow((n - 1 - d) as u32)) % 3;
            let goal = count - 1;
            let mut b = Builder::new();
            for k in 0..count {
                b.add(if k == goal { 2 } else { 1 }, Player::Even);
            }
            for k in 0..count {
                for from in 0..3 {
                    let Some(d) = (0..n).find(|&d| peg(k, d) == from) else { continue };
                    for to in (0..3).filter(|&to| to != from) {
                        if (0..d).any(|e| peg(k, e) == to) {
                            continue;
                        }
                        let w = 3usize.pow((n - 1 - d) as u32);
                        let target = k - from * w + to * w;
                        b.edge(k, target);
                    }
                }
            }
            b.finish()
        }
        Family::ColorPath => {
            let mut b = Builder::new();
            for i in 0..n {
                b.add(i as Color, player(i));
            }
            if n == 1 {
                b.edge(0, 0);
            }
            for i in 1..n {
                b.both(i - 1, i);
            }
            b.finish()
        }
    }
}

/// Parses `name[params]`, `name params` or `name p1,p2` and builds it.
pub fn gen_family_named(name: &str, params: &str) -> Result<ParityGame, GenError> {
    let family: Family = name.parse()?;
    gen_family(family, &parse_params(params)?)
}

pub(crate) fn parse_params(params: &str) -> Result<Vec<u64>, GenError> {
    params
        .split([',', ' ', '[', ']'])
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| GenError::BadConfig(params.to_string())))
        .collect()
}

/// Embeds a base graph into the reduction gadget for simple cycles through
/// two given nodes.
///
/// The base is made total with self-loops and recolored to 0 except for
/// `s` (k-1) and `t` (k). A spine of k+1 fresh nodes colored k, k-1, ..., 0
/// is chained by 2-cycles; `t` forms a 2-cycle with the spine node colored
/// k and `s` with the one colored k-2. A direct `s <-> t` 2-cycle forces
/// Rabin index k; longer `s`-`t` cycles pass a 0-colored base node and do
/// not (see the `gadget` fixtures).
pub fn gen_hardness_gadget(base: &[Vec<NodeId>], s: NodeId, t: NodeId, k: Color) -> Result<Arena, GenError> {
    if k < 2 {
        return Err(GenError::GadgetBound(k));
    }
    let n = base.len();
    if s == t || s.index() >= n || t.index() >= n {
        return Err(GenError::GadgetEndpoints);
    }
    let mut b = Builder::new();
    for (v, out) in base.iter().enumerate() {
        let color = if v == s.index() {
            k - 1
        } else if v == t.index() {
            k
        } else {
            0
        };
        b.add(color, Player::Even);
        for w in out {
            b.edge(v, w.index());
        }
        if out.is_empty() {
            b.edge(v, v);
        }
    }
    // spine[j] has color k - j
    let spine: Vec<usize> = (0..=k).map(|j| b.add(k - j, Player::Even)).collect();
    for w in spine.windows(2) {
        b.both(w[0], w[1]);
    }
    b.both(t.index(), spine[0]);
    b.both(s.index(), spine[2]);
    Ok(b.finish()?.arena().clone())
}
