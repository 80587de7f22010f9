//! Line-based text formats for instances, assignments, and the cover /
//! packing inputs. Everything is UTF-8, `#` starts a comment, blank lines
//! are ignored. Player ids are 1-based in files (matching the usual
//! presentation of worked examples) and 0-based in memory; graph vertices
//! are 0-based in both.

use std::fmt::Write as _;

use thiserror::Error;

use crate::covers::{BinPackingInput, CoverCertificate, Digraph, Graph, Hypergraph3};
use crate::model::{
    Assignment, ComparisonMode, Instance, PlayerId, PreferenceProfile, RoomSpec,
};

#[derive(Debug, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

/// Iterates over `(1-based line number, content)` with comments stripped and
/// blank lines dropped.
fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(idx, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            None
        } else {
            Some((idx + 1, content))
        }
    })
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| ParseError { line, msg: format!("invalid {what} `{tok}`") })
}

fn parse_player(tok: &str, n: usize, line: usize) -> Result<PlayerId, ParseError> {
    let id = parse_usize(tok, line, "player id")?;
    if id == 0 || id > n {
        return err(line, format!("player id {id} out of range 1..={n}"));
    }
    Ok(id - 1)
}

// --- instances ---------------------------------------------------------

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = meaningful_lines(text);
    let mut expect = |key: &str| -> Result<(usize, String), ParseError> {
        match lines.next() {
            Some((ln, content)) => match content.strip_prefix(key) {
                Some(rest) if rest.is_empty() || rest.starts_with(char::is_whitespace) => {
                    Ok((ln, rest.trim().to_string()))
                }
                _ => err(ln, format!("expected `{key}`, found `{content}`")),
            },
            None => err(0, format!("missing `{key}` header")),
        }
    };

    let (ln_n, n_str) = expect("nplayers")?;
    let n = parse_usize(&n_str, ln_n, "player count")?;

    let (ln_r, rooms_str) = expect("rooms")?;
    let capacities: Vec<usize> = rooms_str
        .split_whitespace()
        .map(|t| parse_usize(t, ln_r, "room capacity"))
        .collect::<Result<_, _>>()?;
    if capacities.is_empty() {
        return err(ln_r, "at least one room is required");
    }
    let total: usize = capacities.iter().sum();
    if total != n {
        return err(ln_r, format!("room capacities sum to {total}, expected {n}"));
    }

    let (ln_m, mode_str) = expect("mode")?;
    let mode = match mode_str.as_str() {
        "best" => ComparisonMode::Best,
        "worst" => ComparisonMode::Worst,
        other => return err(ln_m, format!("unknown mode `{other}` (expected best or worst)")),
    };

    let (ln_p, rest) = expect("prefs")?;
    if !rest.is_empty() {
        return err(ln_p, "unexpected text after `prefs`");
    }

    let mut groups: Vec<Option<Vec<Vec<PlayerId>>>> = vec![None; n];
    let mut any_tie = false;
    for (ln, content) in lines {
        let Some(rest) = content.strip_prefix('p') else {
            return err(ln, format!("expected a `p <id> : ...` line, found `{content}`"));
        };
        let Some((id_str, items)) = rest.split_once(':') else {
            return err(ln, "missing `:` in preference line");
        };
        let who = parse_player(id_str.trim(), n, ln)?;
        if groups[who].is_some() {
            return err(ln, format!("duplicate preference line for player {}", who + 1));
        }
        let (player_groups, saw_tie) = parse_pref_items(items, who, n, ln)?;
        any_tie |= saw_tie;
        groups[who] = Some(player_groups);
    }
    if let Some(missing) = groups.iter().position(Option::is_none) {
        return err(0, format!("missing preference line for player {}", missing + 1));
    }
    let groups: Vec<Vec<Vec<PlayerId>>> = groups.into_iter().map(Option::unwrap).collect();
    Ok(Instance {
        n,
        rooms: RoomSpec::new(capacities),
        mode,
        prefs: PreferenceProfile::from_groups(n, &groups, !any_tie),
    })
}

/// Parses one player's ranked items: ids and `( ... )` tie groups.
fn parse_pref_items(
    items: &str,
    who: PlayerId,
    n: usize,
    ln: usize,
) -> Result<(Vec<Vec<PlayerId>>, bool), ParseError> {
    let spaced = items.replace('(', " ( ").replace(')', " ) ");
    let mut out: Vec<Vec<PlayerId>> = Vec::new();
    let mut open: Option<Vec<PlayerId>> = None;
    let mut seen = vec![false; n];
    let mut any_tie = false;
    for tok in spaced.split_whitespace() {
        match tok {
            "(" => {
                if open.is_some() {
                    return err(ln, "nested `(` in tie group");
                }
                open = Some(Vec::new());
            }
            ")" => match open.take() {
                Some(group) if !group.is_empty() => {
                    any_tie |= group.len() > 1;
                    out.push(group);
                }
                Some(_) => return err(ln, "empty tie group"),
                None => return err(ln, "`)` without matching `(`"),
            },
            _ => {
                let j = parse_player(tok, n, ln)?;
                if j == who {
                    return err(ln, format!("player {} ranks themselves", who + 1));
                }
                if seen[j] {
                    return err(ln, format!("player {} listed twice", j + 1));
                }
                seen[j] = true;
                match &mut open {
                    Some(group) => group.push(j),
                    None => out.push(vec![j]),
                }
            }
        }
    }
    if open.is_some() {
        return err(ln, "unclosed `(` in tie group");
    }
    Ok((out, any_tie))
}

pub fn write_instance(inst: &Instance) -> String {
    let mut s = String::new();
    writeln!(s, "nplayers {}", inst.n).unwrap();
    write!(s, "rooms").unwrap();
    for c in inst.rooms.capacities() {
        write!(s, " {c}").unwrap();
    }
    writeln!(s).unwrap();
    writeln!(s, "mode {}", inst.mode).unwrap();
    writeln!(s, "prefs").unwrap();
    for i in 0..inst.n {
        write!(s, "p {} :", i + 1).unwrap();
        for group in inst.prefs.groups_of(i) {
            if group.len() == 1 {
                write!(s, " {}", group[0] + 1).unwrap();
            } else {
                write!(s, " (").unwrap();
                for j in group {
                    write!(s, " {}", j + 1).unwrap();
                }
                write!(s, " )").unwrap();
            }
        }
        writeln!(s).unwrap();
    }
    s
}

// --- assignments -------------------------------------------------------

pub fn parse_assignment(text: &str, inst: &Instance) -> Result<Assignment, ParseError> {
    let mut rooms: Vec<Vec<PlayerId>> = Vec::new();
    let mut seen = vec![false; inst.n];
    for (ln, content) in meaningful_lines(text) {
        let Some(rest) = content.strip_prefix("room") else {
            return err(ln, format!("expected a `room <idx> : ...` line, found `{content}`"));
        };
        let Some((idx_str, members)) = rest.split_once(':') else {
            return err(ln, "missing `:` in room line");
        };
        let idx = parse_usize(idx_str.trim(), ln, "room index")?;
        if idx != rooms.len() + 1 {
            return err(ln, format!("expected room {}, found room {idx}", rooms.len() + 1));
        }
        let mut room = Vec::new();
        for tok in members.split_whitespace() {
            let p = parse_player(tok, inst.n, ln)?;
            if seen[p] {
                return err(ln, format!("player {} appears twice", p + 1));
            }
            seen[p] = true;
            room.push(p);
        }
        rooms.push(room);
    }
    if let Some(p) = seen.iter().position(|&s| !s) {
        return err(0, format!("player {} is missing from the assignment", p + 1));
    }
    let caps = inst.rooms.capacities();
    if rooms.len() != caps.len() {
        return err(0, format!("{} rooms listed, expected {}", rooms.len(), caps.len()));
    }
    for (i, room) in rooms.iter().enumerate() {
        if room.len() != caps[i] {
            return err(
                0,
                format!("room {} holds {} players, capacity is {}", i + 1, room.len(), caps[i]),
            );
        }
    }
    Ok(Assignment::from_rooms(rooms))
}

pub fn write_assignment(a: &Assignment) -> String {
    let mut s = String::new();
    for (idx, room) in a.rooms().iter().enumerate() {
        write!(s, "room {} :", idx + 1).unwrap();
        for &p in room.members() {
            write!(s, " {}", p + 1).unwrap();
        }
        writeln!(s).unwrap();
    }
    s
}

// --- graphs and packing inputs -----------------------------------------

fn parse_edge_file<'a>(
    text: &'a str,
    header: &str,
    edge_key: &str,
) -> Result<(usize, Vec<(usize, usize)>, usize), ParseError> {
    let mut lines = meaningful_lines(text);
    let (ln, first) = lines
        .next()
        .ok_or_else(|| ParseError { line: 0, msg: format!("missing `{header}` header") })?;
    let Some(m_str) = first.strip_prefix(header) else {
        return err(ln, format!("expected `{header} <vertices>`, found `{first}`"));
    };
    let m = parse_usize(m_str.trim(), ln, "vertex count")?;
    let mut edges = Vec::new();
    let mut last_line = ln;
    for (ln, content) in lines {
        last_line = ln;
        let Some(rest) = content.strip_prefix(edge_key) else {
            return err(ln, format!("expected `{edge_key} <a> <b>`, found `{content}`"));
        };
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if toks.len() != 2 {
            return err(ln, format!("`{edge_key}` takes exactly two endpoints"));
        }
        let a = parse_usize(toks[0], ln, "vertex")?;
        let b = parse_usize(toks[1], ln, "vertex")?;
        edges.push((a, b));
    }
    Ok((m, edges, last_line))
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let (m, edges, last) = parse_edge_file(text, "graph", "e")?;
    Graph::new(m, edges).map_err(|e| ParseError { line: last, msg: e.to_string() })
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("graph {}\n", g.m());
    for (a, b) in g.edges() {
        writeln!(s, "e {a} {b}").unwrap();
    }
    s
}

pub fn parse_digraph(text: &str) -> Result<Digraph, ParseError> {
    let (m, arcs, last) = parse_edge_file(text, "digraph", "a")?;
    Digraph::new(m, arcs).map_err(|e| ParseError { line: last, msg: e.to_string() })
}

pub fn write_digraph(d: &Digraph) -> String {
    let mut s = format!("digraph {}\n", d.m());
    for (a, b) in d.arcs() {
        writeln!(s, "a {a} {b}").unwrap();
    }
    s
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph3, ParseError> {
    let mut lines = meaningful_lines(text);
    let (ln, first) = lines
        .next()
        .ok_or_else(|| ParseError { line: 0, msg: "missing `hypergraph` header".into() })?;
    let Some(sizes) = first.strip_prefix("hypergraph") else {
        return err(ln, format!("expected `hypergraph <nu> <nv> <nw>`, found `{first}`"));
    };
    let toks: Vec<&str> = sizes.split_whitespace().collect();
    if toks.len() != 3 {
        return err(ln, "`hypergraph` takes three class sizes");
    }
    let nu = parse_usize(toks[0], ln, "class size")?;
    let nv = parse_usize(toks[1], ln, "class size")?;
    let nw = parse_usize(toks[2], ln, "class size")?;
    let mut edges = Vec::new();
    let mut last = ln;
    for (ln, content) in lines {
        last = ln;
        let Some(rest) = content.strip_prefix('t') else {
            return err(ln, format!("expected `t <u> <v> <w>`, found `{content}`"));
        };
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if toks.len() != 3 {
            return err(ln, "`t` takes exactly three vertices");
        }
        edges.push((
            parse_usize(toks[0], ln, "vertex")?,
            parse_usize(toks[1], ln, "vertex")?,
            parse_usize(toks[2], ln, "vertex")?,
        ));
    }
    Hypergraph3::new(nu, nv, nw, edges).map_err(|e| ParseError { line: last, msg: e.to_string() })
}

pub fn write_hypergraph(h: &Hypergraph3) -> String {
    let (nu, nv, nw) = h.class_sizes();
    let mut s = format!("hypergraph {nu} {nv} {nw}\n");
    for &(u, v, w) in h.edges() {
        writeln!(s, "t {u} {v} {w}").unwrap();
    }
    s
}

pub fn parse_binpack(text: &str) -> Result<BinPackingInput, ParseError> {
    let mut lines = meaningful_lines(text);
    let (ln, first) = lines
        .next()
        .ok_or_else(|| ParseError { line: 0, msg: "missing `binpack` header".into() })?;
    let bin = match first.strip_prefix("binpack").map(str::trim) {
        Some(rest) => match rest.strip_prefix("b=") {
            Some(v) => v
                .parse::<u64>()
                .map_err(|_| ParseError { line: ln, msg: format!("invalid bin size `{v}`") })?,
            None => return err(ln, "expected `binpack b=<size>`"),
        },
        None => return err(ln, format!("expected `binpack b=<size>`, found `{first}`")),
    };
    let (ln_items, items_line) = lines
        .next()
        .ok_or_else(|| ParseError { line: ln, msg: "missing `items` line".into() })?;
    let Some(rest) = items_line.strip_prefix("items") else {
        return err(ln_items, format!("expected `items ...`, found `{items_line}`"));
    };
    let items: Vec<u64> = rest
        .split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| ParseError { line: ln_items, msg: format!("invalid item size `{t}`") })
        })
        .collect::<Result<_, _>>()?;
    if let Some((ln, content)) = lines.next() {
        return err(ln, format!("unexpected trailing line `{content}`"));
    }
    BinPackingInput::new(items, bin).map_err(|e| ParseError { line: ln_items, msg: e.to_string() })
}

pub fn write_binpack(inp: &BinPackingInput) -> String {
    let mut s = format!("binpack b={}\nitems", inp.bin);
    for &it in &inp.items {
        write!(s, " {it}").unwrap();
    }
    s.push('\n');
    s
}

/// Renders an oracle certificate as indented witness lines (for the CLI's
/// output after the YES line).
pub fn write_certificate(cert: &CoverCertificate) -> String {
    let mut s = String::new();
    match cert {
        CoverCertificate::Triangles(ts) | CoverCertificate::DirectedTriangles(ts) => {
            for t in ts {
                writeln!(s, "triangle {} {} {}", t[0], t[1], t[2]).unwrap();
            }
        }
        CoverCertificate::Matching(edges) => {
            for e in edges {
                writeln!(s, "edge {e}").unwrap();
            }
        }
        CoverCertificate::Bins(bins) => {
            for bin in bins {
                write!(s, "bin").unwrap();
                for &i in bin {
                    write!(s, " {i}").unwrap();
                }
                writeln!(s).unwrap();
            }
        }
    }
    s
}
