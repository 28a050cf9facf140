//! Reading and writing the PGSolver text format.
//!
//! ```text
//! parity <maxId>;
//! <id> <priority> <owner> <succ>,<succ>,... ["label"];
//! ```
//!
//! Records are `;`-terminated and may share a line. Lines starting with
//! `--` are comments. Sparse ids are densified in ascending order and the
//! original ids are kept in a [`NameTable`].

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use log::warn;
use thiserror::Error;

use crate::arena::{Arena, ArenaError, Color, Coloring, NameTable, NodeId, ParityGame, Player};
use crate::solver::Solution;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("node {0} has no successors")]
    DeadEnd(u64),
    #[error("owner {0} is not 0 or 1")]
    BadOwner(String),
    #[error("node {0} is defined twice")]
    DuplicateId(u64),
    #[error("successor {0} is not a defined node")]
    UnknownSuccessor(u64),
    #[error("priority {0} does not fit in a 32-bit color")]
    ColorOverflow(String),
    #[error("no nodes defined")]
    Empty,
    #[error("solution lists node {0} which is not in the game")]
    UnknownNode(u64),
    #[error(transparent)]
    Arena(#[from] ArenaError),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// A `;`-terminated record and the line it starts on.
struct Record<'a> {
    line: usize,
    text: &'a str,
}

/// Splits the input into records, skipping comment lines and honouring
/// quoted labels (which may contain `;`).
fn records(text: &str) -> Result<Vec<Record<'_>>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut start: Option<(usize, usize)> = None;
    let mut in_quote = false;
    let mut escaped = false;
    let mut at_line_start = true;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if at_line_start && !in_quote {
            // skip leading whitespace to look for a comment marker
            let rest = &text[i..];
            let trimmed = rest.trim_start_matches([' ', '\t', '\r']);
            if trimmed.starts_with("--") {
                let skip = rest.len() - trimmed.len();
                let end = trimmed.find('\n').map(|p| i + skip + p).unwrap_or(bytes.len());
                i = end;
                continue;
            }
            at_line_start = false;
        }
        if b == b'\n' {
            line += 1;
            at_line_start = true;
        }
        if in_quote {
            if escaped {
                escaped = false;
            } else if b == b'\\' {
                escaped = true;
            } else if b == b'"' {
                in_quote = false;
            }
            i += 1;
            continue;
        }
        match b {
            b'"' => {
                in_quote = true;
                if start.is_none() {
                    start = Some((i, line));
                }
            }
            b';' => {
                let (s, l) = start.take().unwrap_or((i, line));
                out.push(Record {
                    line: l,
                    text: text[s..i].trim(),
                });
            }
            b' ' | b'\t' | b'\r' | b'\n' => {}
            _ => {
                if start.is_none() {
                    start = Some((i, line));
                }
            }
        }
        i += 1;
    }
    if in_quote {
        return Err(err(line, ParseErrorKind::Syntax("unterminated label".into())));
    }
    if let Some((s, l)) = start {
        let rest = text[s..].trim();
        if !rest.is_empty() {
            return Err(err(l, ParseErrorKind::Syntax(format!("missing ';' after `{rest}`"))));
        }
    }
    Ok(out)
}

fn parse_u64(tok: &str, line: usize, what: &str) -> Result<u64, ParseError> {
    tok.parse::<u64>()
        .map_err(|_| err(line, ParseErrorKind::Syntax(format!("expected {what}, found `{tok}`"))))
}

/// Splits a record body into the part before an optional quoted label and
/// the unescaped label.
fn split_label(text: &str, line: usize) -> Result<(&str, Option<String>), ParseError> {
    let Some(q) = text.find('"') else {
        return Ok((text, None));
    };
    let body = &text[..q];
    let rest = &text[q + 1..];
    let mut label = String::new();
    let mut chars = rest.char_indices();
    let mut end = None;
    while let Some((pos, ch)) = chars.next() {
        match ch {
            '\\' => {
                if let Some((_, next)) = chars.next() {
                    label.push(next);
                }
            }
            '"' => {
                end = Some(pos);
                break;
            }
            c => label.push(c),
        }
    }
    let end = end.ok_or_else(|| err(line, ParseErrorKind::Syntax("unterminated label".into())))?;
    if !rest[end + 1..].trim().is_empty() {
        return Err(err(line, ParseErrorKind::Syntax("trailing text after label".into())));
    }
    Ok((body, Some(label)))
}

struct RawNode {
    line: usize,
    id: u64,
    color: Color,
    owner: Player,
    successors: Vec<u64>,
    label: Option<String>,
}

fn parse_node(rec: &Record<'_>) -> Result<RawNode, ParseError> {
    let line = rec.line;
    let (body, label) = split_label(rec.text, line)?;
    let mut parts = body.split_whitespace();
    let mut next = |what: &str| {
        parts
            .next()
            .ok_or_else(|| err(line, ParseErrorKind::Syntax(format!("missing {what}"))))
    };
    let id = parse_u64(next("node id")?, line, "node id")?;
    let pri_tok = next("priority")?;
    let color: Color = match pri_tok.parse::<u64>() {
        Ok(p) => Color::try_from(p).map_err(|_| err(line, ParseErrorKind::ColorOverflow(pri_tok.into())))?,
        Err(_) if pri_tok.chars().all(|c| c.is_ascii_digit()) => {
            return Err(err(line, ParseErrorKind::ColorOverflow(pri_tok.into())));
        }
        Err(_) => {
            return Err(err(
                line,
                ParseErrorKind::Syntax(format!("expected priority, found `{pri_tok}`")),
            ))
        }
    };
    let owner_tok = next("owner")?;
    let owner = owner_tok
        .parse::<u8>()
        .ok()
        .and_then(Player::from_index)
        .ok_or_else(|| err(line, ParseErrorKind::BadOwner(owner_tok.into())))?;
    let succ_text: String = parts.collect::<Vec<_>>().concat();
    if succ_text.is_empty() {
        return Err(err(line, ParseErrorKind::DeadEnd(id)));
    }
    let mut successors = Vec::new();
    for tok in succ_text.split(',') {
        if tok.is_empty() {
            return Err(err(line, ParseErrorKind::Syntax("empty successor entry".into())));
        }
        successors.push(parse_u64(tok, line, "successor id")?);
    }
    Ok(RawNode {
        line,
        id,
        color,
        owner,
        successors,
        label,
    })
}

/// Parses a game in PGSolver format.
pub fn parse_pgsolver(text: &str) -> Result<ParityGame, ParseError> {
    let recs = records(text)?;
    let mut nodes: Vec<RawNode> = Vec::new();
    for (i, rec) in recs.iter().enumerate() {
        let first = rec.text.split_whitespace().next().unwrap_or("");
        match first {
            "parity" if i == 0 => {
                let toks: Vec<_> = rec.text.split_whitespace().collect();
                if toks.len() != 2 {
                    return Err(err(rec.line, ParseErrorKind::Syntax("malformed header".into())));
                }
                parse_u64(toks[1], rec.line, "maximal node id")?;
            }
            "start" => {
                // PGSolver start markers carry no information for us
            }
            "" => return Err(err(rec.line, ParseErrorKind::Syntax("empty record".into()))),
            _ => nodes.push(parse_node(rec)?),
        }
    }
    if nodes.is_empty() {
        return Err(err(recs.last().map_or(1, |r| r.line), ParseErrorKind::Empty));
    }

    let mut by_id: BTreeMap<u64, usize> = BTreeMap::new();
    for (i, node) in nodes.iter().enumerate() {
        if by_id.insert(node.id, i).is_some() {
            return Err(err(node.line, ParseErrorKind::DuplicateId(node.id)));
        }
    }
    let dense: HashMap<u64, NodeId> = by_id
        .keys()
        .enumerate()
        .map(|(i, &id)| (id, NodeId::from(i)))
        .collect();

    let n = by_id.len();
    let mut successors = Vec::with_capacity(n);
    let mut colors = Vec::with_capacity(n);
    let mut owners = Vec::with_capacity(n);
    let mut original_ids = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for (&id, &i) in &by_id {
        let node = &nodes[i];
        let mut succ: Vec<NodeId> = Vec::with_capacity(node.successors.len());
        for &s in &node.successors {
            let target = *dense
                .get(&s)
                .ok_or_else(|| err(node.line, ParseErrorKind::UnknownSuccessor(s)))?;
            if succ.contains(&target) {
                warn!("line {}: node {id} lists successor {s} twice; keeping one", node.line);
                continue;
            }
            succ.push(target);
        }
        successors.push(succ);
        colors.push(node.color);
        owners.push(node.owner);
        original_ids.push(id);
        labels.push(node.label.clone());
    }

    let arena = Arena::new(successors, Coloring::new(colors)).map_err(|e| err(0, e.into()))?;
    let game = ParityGame::new(arena, owners).map_err(|e| err(0, e.into()))?;
    let is_dense = original_ids.iter().enumerate().all(|(i, &id)| i as u64 == id);
    if is_dense && labels.iter().all(Option::is_none) {
        Ok(game)
    } else {
        game.with_names(NameTable {
            original_ids,
            labels,
        })
        .map_err(|e| err(0, e.into()))
    }
}

fn quote(label: &str) -> String {
    let mut s = String::with_capacity(label.len() + 2);
    s.push('"');
    for ch in label.chars() {
        if ch == '"' || ch == '\\' {
            s.push('\\');
        }
        s.push(ch);
    }
    s.push('"');
    s
}

/// Serializes a game. Original ids and labels are written back when the
/// game carries a name table, so parsing the output yields an equal game.
pub fn write_pgsolver(game: &ParityGame) -> String {
    let arena = game.arena();
    let names = game.names();
    let id_of = |v: NodeId| -> u64 { names.map_or(v.0 as u64, |t| t.original_ids[v.index()]) };
    let max_id = arena.nodes().map(id_of).max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "parity {max_id};");
    for v in arena.nodes() {
        let succ: Vec<String> = arena
            .successors(v)
            .iter()
            .map(|&w| id_of(w).to_string())
            .collect();
        let _ = write!(
            out,
            "{} {} {} {}",
            id_of(v),
            arena.color(v),
            game.owner(v),
            succ.join(",")
        );
        if let Some(label) = names.and_then(|t| t.labels[v.index()].as_deref()) {
            out.push(' ');
            out.push_str(&quote(label));
        }
        out.push_str(";\n");
    }
    out
}

/// Writes a solution listing: `paritysol <maxId>;` then one
/// `<id> <winner> [<strategy successor>];` record per node.
pub fn write_solution(game: &ParityGame, solution: &Solution) -> String {
    let names = game.names();
    let id_of = |v: NodeId| -> u64 { names.map_or(v.0 as u64, |t| t.original_ids[v.index()]) };
    let max_id = game.arena().nodes().map(id_of).max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "paritysol {max_id};");
    for v in game.arena().nodes() {
        let Some(winner) = solution.winner(v) else { continue };
        let _ = write!(out, "{} {}", id_of(v), winner);
        if let Some(w) = solution.strategy(v) {
            let _ = write!(out, " {}", id_of(w));
        }
        out.push_str(";\n");
    }
    out
}

/// Parses a solution listing against the game it belongs to. Nodes that
/// are missing from the listing make the result fail determinacy checks.
pub fn parse_solution(game: &ParityGame, text: &str) -> Result<Solution, ParseError> {
    let n = game.node_count();
    let dense: HashMap<u64, NodeId> = match game.names() {
        Some(t) => t
            .original_ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, NodeId::from(i)))
            .collect(),
        None => (0..n).map(|i| (i as u64, NodeId::from(i))).collect(),
    };
    let mut winners: Vec<Option<Player>> = vec![None; n];
    let mut strategy: Vec<Option<NodeId>> = vec![None; n];
    for (i, rec) in records(text)?.iter().enumerate() {
        let toks: Vec<&str> = rec.text.split_whitespace().collect();
        if i == 0 && toks.first() == Some(&"paritysol") {
            continue;
        }
        if toks.len() < 2 || toks.len() > 3 {
            return Err(err(rec.line, ParseErrorKind::Syntax("expected `<id> <winner> [<succ>]`".into())));
        }
        let id = parse_u64(toks[0], rec.line, "node id")?;
        let v = *dense
            .get(&id)
            .ok_or_else(|| err(rec.line, ParseErrorKind::UnknownNode(id)))?;
        if winners[v.index()].is_some() {
            return Err(err(rec.line, ParseErrorKind::DuplicateId(id)));
        }
        let winner = toks[1]
            .parse::<u8>()
            .ok()
            .and_then(Player::from_index)
            .ok_or_else(|| err(rec.line, ParseErrorKind::BadOwner(toks[1].into())))?;
        winners[v.index()] = Some(winner);
        if let Some(tok) = toks.get(2) {
            let s = parse_u64(tok, rec.line, "strategy successor")?;
            let w = *dense
                .get(&s)
                .ok_or_else(|| err(rec.line, ParseErrorKind::UnknownSuccessor(s)))?;
            strategy[v.index()] = Some(w);
        }
    }
    Ok(Solution::from_parts(winners, strategy))
}
