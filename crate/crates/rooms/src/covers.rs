//! Brute-force oracles for the companion problems used by the reductions:
//! triangle cover, directed triangle cover, 3-dimensional hypergraph
//! matching, and unary bin packing. These exist to validate reductions at
//! desk scale, not to be fast.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::exact::{SearchBudget, SearchError};

/// Cap on `b` and the item-size sum accepted by [`unary_bin_pack`], so that
/// runtimes stay polynomial in the written (unary) input length.
pub const UNARY_SIZE_LIMIT: u64 = 10_000;

#[derive(Debug, Error)]
pub enum CoverError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("unary input size {size} exceeds the cap {cap}")]
    SizeCap { size: u64, cap: u64 },
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// A simple undirected graph on vertices `0..m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    m: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(m: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, CoverError> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(CoverError::Invalid(format!("loop at vertex {a}")));
            }
            if a >= m || b >= m {
                return Err(CoverError::Invalid(format!("edge ({a}, {b}) out of range 0..{m}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Graph { m, edges: set })
    }

    pub fn complete(m: usize) -> Self {
        let mut edges = BTreeSet::new();
        for a in 0..m {
            for b in a + 1..m {
                edges.insert((a, b));
            }
        }
        Graph { m, edges }
    }

    pub fn cycle(m: usize) -> Self {
        Graph::new(m, (0..m).map(|i| (i, (i + 1) % m))).expect("cycle is simple for m >= 3")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.m).filter(|&u| self.has_edge(v, u)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.m).filter(|&u| self.has_edge(v, u)).count()
    }
}

/// A simple directed graph on vertices `0..m`, no loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    m: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(m: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, CoverError> {
        let mut set = BTreeSet::new();
        for (a, b) in arcs {
            if a == b {
                return Err(CoverError::Invalid(format!("loop at vertex {a}")));
            }
            if a >= m || b >= m {
                return Err(CoverError::Invalid(format!("arc ({a}, {b}) out of range 0..{m}")));
            }
            set.insert((a, b));
        }
        Ok(Digraph { m, arcs: set })
    }

    pub fn cycle(m: usize) -> Self {
        Digraph::new(m, (0..m).map(|i| (i, (i + 1) % m))).expect("cycle is simple for m >= 2")
    }

    /// Both orientations of every edge of `g`.
    pub fn symmetric_closure(g: &Graph) -> Self {
        let mut arcs = BTreeSet::new();
        for (a, b) in g.edges() {
            arcs.insert((a, b));
            arcs.insert((b, a));
        }
        Digraph { m: g.m(), arcs }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        self.arcs.contains(&(a, b))
    }

    pub fn out_neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.m).filter(|&u| self.has_arc(v, u)).collect()
    }

    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.m).filter(|&u| self.has_arc(u, v)).collect()
    }
}

/// A tripartite 3-uniform hypergraph; hyperedges are `(u, v, w)` triples with
/// class-local indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph3 {
    nu: usize,
    nv: usize,
    nw: usize,
    edges: Vec<(usize, usize, usize)>,
}

impl Hypergraph3 {
    pub fn new(
        nu: usize,
        nv: usize,
        nw: usize,
        edges: Vec<(usize, usize, usize)>,
    ) -> Result<Self, CoverError> {
        for &(u, v, w) in &edges {
            if u >= nu || v >= nv || w >= nw {
                return Err(CoverError::Invalid(format!(
                    "hyperedge ({u}, {v}, {w}) violates class sizes ({nu}, {nv}, {nw})"
                )));
            }
        }
        Ok(Hypergraph3 { nu, nv, nw, edges })
    }

    pub fn class_sizes(&self) -> (usize, usize, usize) {
        (self.nu, self.nv, self.nw)
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }
}

/// Item sizes plus a bin size, understood as unary-encoded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinPackingInput {
    pub items: Vec<u64>,
    pub bin: u64,
}

impl BinPackingInput {
    pub fn new(items: Vec<u64>, bin: u64) -> Result<Self, CoverError> {
        if bin == 0 {
            return Err(CoverError::Invalid("bin size must be positive".into()));
        }
        if let Some(&z) = items.iter().find(|&&s| s == 0) {
            return Err(CoverError::Invalid(format!("item size {z} must be positive")));
        }
        Ok(BinPackingInput { items, bin })
    }

    pub fn total(&self) -> u64 {
        self.items.iter().sum()
    }
}

/// A witness returned by the oracles; checkable in polynomial time against
/// its input via the `check_*` functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverCertificate {
    /// Vertex-disjoint triangles covering every vertex.
    Triangles(Vec<[usize; 3]>),
    /// Vertex-disjoint directed 3-cycles, each stored in cycle order.
    DirectedTriangles(Vec<[usize; 3]>),
    /// Indices into the hypergraph's edge list forming a perfect matching.
    Matching(Vec<usize>),
    /// Item indices grouped into bins, each summing to the bin size.
    Bins(Vec<Vec<usize>>),
}

fn partition_of(m: usize, triples: &[[usize; 3]]) -> bool {
    let mut seen = vec![false; m];
    for t in triples {
        for &v in t {
            if v >= m || seen[v] {
                return false;
            }
            seen[v] = true;
        }
    }
    seen.iter().all(|&s| s)
}

/// Independent checker for [`CoverCertificate::Triangles`].
pub fn check_triangle_cover(g: &Graph, cert: &CoverCertificate) -> bool {
    let CoverCertificate::Triangles(triples) = cert else {
        return false;
    };
    partition_of(g.m(), triples)
        && triples
            .iter()
            .all(|t| g.has_edge(t[0], t[1]) && g.has_edge(t[1], t[2]) && g.has_edge(t[0], t[2]))
}

/// Independent checker for [`CoverCertificate::DirectedTriangles`].
pub fn check_directed_triangle_cover(d: &Digraph, cert: &CoverCertificate) -> bool {
    let CoverCertificate::DirectedTriangles(triples) = cert else {
        return false;
    };
    partition_of(d.m(), triples)
        && triples
            .iter()
            .all(|t| d.has_arc(t[0], t[1]) && d.has_arc(t[1], t[2]) && d.has_arc(t[2], t[0]))
}

/// Independent checker for [`CoverCertificate::Matching`].
pub fn check_perfect_matching(h: &Hypergraph3, cert: &CoverCertificate) -> bool {
    let CoverCertificate::Matching(indices) = cert else {
        return false;
    };
    let (nu, nv, nw) = h.class_sizes();
    let mut su = vec![false; nu];
    let mut sv = vec![false; nv];
    let mut sw = vec![false; nw];
    for &e in indices {
        let Some(&(u, v, w)) = h.edges().get(e) else {
            return false;
        };
        if su[u] || sv[v] || sw[w] {
            return false;
        }
        su[u] = true;
        sv[v] = true;
        sw[w] = true;
    }
    su.iter().chain(&sv).chain(&sw).all(|&s| s)
}

/// Independent checker for [`CoverCertificate::Bins`].
pub fn check_bin_packing(inp: &BinPackingInput, cert: &CoverCertificate) -> bool {
    let CoverCertificate::Bins(bins) = cert else {
        return false;
    };
    let mut seen = vec![false; inp.items.len()];
    for bin in bins {
        let mut total = 0u64;
        for &i in bin {
            if i >= inp.items.len() || seen[i] {
                return false;
            }
            seen[i] = true;
            total += inp.items[i];
        }
        if total != inp.bin {
            return false;
        }
    }
    seen.iter().all(|&s| s)
}

struct CoverTicker {
    node_limit: Option<u64>,
    nodes: u64,
}

impl CoverTicker {
    fn new(budget: &SearchBudget) -> Self {
        CoverTicker { node_limit: budget.node_limit, nodes: 0 }
    }

    fn tick(&mut self) -> Result<(), SearchError> {
        self.nodes += 1;
        match self.node_limit {
            Some(limit) if self.nodes > limit => Err(SearchError::Budget { nodes: self.nodes }),
            _ => Ok(()),
        }
    }
}

/// A partition of the vertices into triangles, if one exists. Backtracks over
/// the triangles incident to the lowest uncovered vertex; inputs whose vertex
/// count is not a multiple of 3 are answered `None` immediately.
pub fn triangle_cover(
    g: &Graph,
    budget: &SearchBudget,
) -> Result<Option<CoverCertificate>, CoverError> {
    if g.m() % 3 != 0 {
        return Ok(None);
    }
    let mut covered = vec![false; g.m()];
    let mut triples = Vec::new();
    let mut ticker = CoverTicker::new(budget);

    fn rec(
        g: &Graph,
        covered: &mut [bool],
        triples: &mut Vec<[usize; 3]>,
        ticker: &mut CoverTicker,
    ) -> Result<bool, SearchError> {
        let Some(v) = covered.iter().position(|&c| !c) else {
            return Ok(true);
        };
        ticker.tick()?;
        covered[v] = true;
        for u in v + 1..g.m() {
            if covered[u] || !g.has_edge(v, u) {
                continue;
            }
            for w in u + 1..g.m() {
                if covered[w] || !g.has_edge(v, w) || !g.has_edge(u, w) {
                    continue;
                }
                covered[u] = true;
                covered[w] = true;
                triples.push([v, u, w]);
                if rec(g, covered, triples, ticker)? {
                    return Ok(true);
                }
                triples.pop();
                covered[u] = false;
                covered[w] = false;
            }
        }
        covered[v] = false;
        Ok(false)
    }

    let found = rec(g, &mut covered, &mut triples, &mut ticker)?;
    Ok(found.then(|| CoverCertificate::Triangles(triples)))
}

/// A partition of the vertices into directed 3-cycles, if one exists.
pub fn directed_triangle_cover(
    d: &Digraph,
    budget: &SearchBudget,
) -> Result<Option<CoverCertificate>, CoverError> {
    if d.m() % 3 != 0 {
        return Ok(None);
    }
    let mut covered = vec![false; d.m()];
    let mut triples = Vec::new();
    let mut ticker = CoverTicker::new(budget);

    fn rec(
        d: &Digraph,
        covered: &mut [bool],
        triples: &mut Vec<[usize; 3]>,
        ticker: &mut CoverTicker,
    ) -> Result<bool, SearchError> {
        let Some(v) = covered.iter().position(|&c| !c) else {
            return Ok(true);
        };
        ticker.tick()?;
        covered[v] = true;
        for u in 0..d.m() {
            if covered[u] || !d.has_arc(v, u) {
                continue;
            }
            for w in 0..d.m() {
                if covered[w] || w == u || !d.has_arc(u, w) || !d.has_arc(w, v) {
                    continue;
                }
                covered[u] = true;
                covered[w] = true;
                triples.push([v, u, w]);
                if rec(d, covered, triples, ticker)? {
                    return Ok(true);
                }
                triples.pop();
                covered[u] = false;
                covered[w] = false;
            }
        }
        covered[v] = false;
        Ok(false)
    }

    let found = rec(d, &mut covered, &mut triples, &mut ticker)?;
    Ok(found.then(|| CoverCertificate::DirectedTriangles(triples)))
}

/// A perfect matching of the tripartite hypergraph, if one exists.
pub fn perfect_3dm(
    h: &Hypergraph3,
    budget: &SearchBudget,
) -> Result<Option<CoverCertificate>, CoverError> {
    let (nu, nv, nw) = h.class_sizes();
    if nu != nv || nv != nw {
        return Ok(None);
    }
    let mut su = vec![false; nu];
    let mut sv = vec![false; nv];
    let mut sw = vec![false; nw];
    let mut picked = Vec::new();
    let mut ticker = CoverTicker::new(budget);

    fn rec(
        h: &Hypergraph3,
        su: &mut [bool],
        sv: &mut [bool],
        sw: &mut [bool],
        picked: &mut Vec<usize>,
        ticker: &mut CoverTicker,
    ) -> Result<bool, SearchError> {
        let Some(u) = su.iter().position(|&c| !c) else {
            return Ok(sv.iter().all(|&c| c) && sw.iter().all(|&c| c));
        };
        ticker.tick()?;
        for (idx, &(eu, ev, ew)) in h.edges().iter().enumerate() {
            if eu != u || sv[ev] || sw[ew] {
                continue;
            }
            su[eu] = true;
            sv[ev] = true;
            sw[ew] = true;
            picked.push(idx);
            if rec(h, su, sv, sw, picked, ticker)? {
                return Ok(true);
            }
            picked.pop();
            su[eu] = false;
            sv[ev] = false;
            sw[ew] = false;
        }
        Ok(false)
    }

    let found = rec(h, &mut su, &mut sv, &mut sw, &mut picked, &mut ticker)?;
    Ok(found.then(|| CoverCertificate::Matching(picked)))
}

/// Groups all items into bins each summing exactly to the bin size, if
/// possible. Items are processed in descending size order; bins are filled by
/// subset-sum backtracking around the largest unplaced item.
pub fn unary_bin_pack(
    inp: &BinPackingInput,
    budget: &SearchBudget,
) -> Result<Option<CoverCertificate>, CoverError> {
    let total = inp.total();
    if inp.bin > UNARY_SIZE_LIMIT || total > UNARY_SIZE_LIMIT {
        return Err(CoverError::SizeCap { size: inp.bin.max(total), cap: UNARY_SIZE_LIMIT });
    }
    if total % inp.bin != 0 || inp.items.iter().any(|&s| s > inp.bin) {
        return Ok(None);
    }

    // Indices sorted by descending size, ties by index.
    let mut order: Vec<usize> = (0..inp.items.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(inp.items[i]), i));
    let mut placed = vec![false; inp.items.len()];
    let mut bins = Vec::new();
    let mut ticker = CoverTicker::new(budget);

    fn fill_bin(
        inp: &BinPackingInput,
        order: &[usize],
        from: usize,
        gap: u64,
        placed: &mut [bool],
        current: &mut Vec<usize>,
        bins: &mut Vec<Vec<usize>>,
        ticker: &mut CoverTicker,
    ) -> Result<bool, SearchError> {
        if gap == 0 {
            bins.push(current.clone());
            let done = pack(inp, order, placed, bins, ticker)?;
            if done {
                return Ok(true);
            }
            bins.pop();
            return Ok(false);
        }
        ticker.tick()?;
        for pos in from..order.len() {
            let idx = order[pos];
            if placed[idx] || inp.items[idx] > gap {
                continue;
            }
            // Skip duplicates of a size already declined at this position.
            if pos > from {
                let prev = order[pos - 1];
                if !placed[prev] && inp.items[prev] == inp.items[idx] && !current.contains(&prev) {
                    // prev was skipped with the same size; trying idx repeats the branch
                    continue;
                }
            }
            placed[idx] = true;
            current.push(idx);
            if fill_bin(inp, order, pos + 1, gap - inp.items[idx], placed, current, bins, ticker)? {
                return Ok(true);
            }
            current.pop();
            placed[idx] = false;
        }
        Ok(false)
    }

    fn pack(
        inp: &BinPackingInput,
        order: &[usize],
        placed: &mut [bool],
        bins: &mut Vec<Vec<usize>>,
        ticker: &mut CoverTicker,
    ) -> Result<bool, SearchError> {
        let Some(pos) = order.iter().position(|&i| !placed[i]) else {
            return Ok(true);
        };
        let idx = order[pos];
        placed[idx] = true;
        let mut current = vec![idx];
        let ok = fill_bin(
            inp,
            order,
            pos + 1,
            inp.bin - inp.items[idx],
            placed,
            &mut current,
            bins,
            ticker,
        )?;
        placed[idx] = false;
        Ok(ok)
    }

    let found = pack(inp, &order, &mut placed, &mut bins, &mut ticker)?;
    Ok(found.then(|| CoverCertificate::Bins(bins)))
}
