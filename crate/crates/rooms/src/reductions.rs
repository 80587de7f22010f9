//! Deterministic constructions turning cover/packing inputs into room
//! assignment instances (and, for the verification constructions, into a
//! distinguished assignment whose Pareto optimality encodes the source
//! question). Every "arbitrary order" degree of freedom is fixed to
//! ascending-index order so outputs are reproducible byte for byte.

use thiserror::Error;

use crate::covers::{BinPackingInput, Digraph, Graph, Hypergraph3};
use crate::model::{
    Assignment, ComparisonMode, Instance, PlayerId, PreferenceProfile, RoomSpec,
};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("vertex count {0} is not a multiple of 3")]
    NotMultipleOfThree(usize),
    #[error("vertex {0} has degree below 2")]
    LowDegree(usize),
    #[error("vertex {0} lacks an outgoing or incoming arc")]
    BadArcDegrees(usize),
    #[error("antiparallel arcs between {0} and {1}; an oriented digraph is required")]
    MutualArcs(usize, usize),
    #[error("item {index} has size {size} < 2")]
    SmallItem { index: usize, size: u64 },
    #[error("item sizes sum to {total}, not divisible by bin size {bin}")]
    IndivisibleTotal { total: u64, bin: u64 },
}

/// Where a constructed player came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlayerOrigin {
    /// Original vertex (the `V1` copy).
    Original(usize),
    /// Second copy of a vertex.
    CopyTwo(usize),
    /// Third copy of a vertex.
    CopyThree(usize),
    /// Member `pos` of the preference cycle built for packing item `item`.
    CycleMember { item: usize, pos: usize },
}

/// A constructed instance together with the distinguished assignment to
/// verify (when the construction defines one) and per-player provenance.
#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub instance: Instance,
    pub distinguished: Option<Assignment>,
    pub provenance: Vec<PlayerOrigin>,
}

/// Edge classes of the verification constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    /// An original (directed) edge of the source graph, between `V1` players.
    Original,
    /// A copy-triangle edge between players originating from three distinct
    /// vertices.
    Blue,
    /// An edge between two copies of the same vertex.
    Gray,
    /// Any pair the construction ranks below everything it draws.
    Hidden,
}

/// The fixed copy-triangle layout on `V2 ∪ V3`: per block `j` the triangle
/// `{V2[3j], V2[3j+1], V2[3j+2]}` followed by the shifted triangle
/// `{V3[3j+1], V3[3j+2], V3[3j+3 mod m]}`, each stored in this cyclic order.
/// Every triangle touches three distinct source vertices and together they
/// cover `V2 ∪ V3` exactly once. The shift makes the layout interlocking:
/// the two copies of any vertex sit in "adjacent" triangles, so once one
/// triangle is used in an alternative assignment, the displaced partner
/// copies drag in the neighboring triangles and, transitively, all of them.
/// Without that chain a single favorable block could improve on its own and
/// the verification question would no longer encode a full cover.
fn blue_triangles(m: usize) -> Vec<[PlayerId; 3]> {
    let mut out = Vec::with_capacity(2 * (m / 3));
    for j in 0..m / 3 {
        let b = 3 * j;
        out.push([m + b, m + b + 1, m + b + 2]);
        out.push([2 * m + b + 1, 2 * m + b + 2, 2 * m + (b + 3) % m]);
    }
    out
}

/// Blue partners of player `p` (a `V2 ∪ V3` player) as `(successor,
/// predecessor)` in the triangle's cyclic order.
fn blue_partners(m: usize, p: PlayerId) -> (PlayerId, PlayerId) {
    for t in blue_triangles(m) {
        if let Some(pos) = t.iter().position(|&x| x == p) {
            return (t[(pos + 1) % 3], t[(pos + 2) % 3]);
        }
    }
    unreachable!("player {p} is not a copy player");
}

/// Classifies a player pair of a verification instance built over `m` source
/// vertices. `original` decides whether the pair of source vertices carries
/// an original edge (undirected or either arc direction).
fn classify_pair(m: usize, a: PlayerId, b: PlayerId, original: &dyn Fn(usize, usize) -> bool) -> EdgeClass {
    let (a, b) = (a.min(b), a.max(b));
    if a < m && b < m {
        return if original(a, b) { EdgeClass::Original } else { EdgeClass::Hidden };
    }
    if a % m == b % m {
        return EdgeClass::Gray;
    }
    if a >= m {
        let (succ, pred) = blue_partners(m, a);
        if succ == b || pred == b {
            return EdgeClass::Blue;
        }
    }
    EdgeClass::Hidden
}

/// Edge class of a player pair in [`verification_instance_worst`]'s output.
pub fn edge_class_worst(g: &Graph, a: PlayerId, b: PlayerId) -> EdgeClass {
    classify_pair(g.m(), a, b, &|x, y| g.has_edge(x, y))
}

/// Edge class of a player pair in [`verification_instance_best`]'s output.
pub fn edge_class_best(d: &Digraph, a: PlayerId, b: PlayerId) -> EdgeClass {
    classify_pair(d.m(), a, b, &|x, y| d.has_arc(x, y) || d.has_arc(y, x))
}

fn append_rest(list: &mut Vec<PlayerId>, n: usize, me: PlayerId) {
    let mut seen = vec![false; n];
    seen[me] = true;
    for &j in list.iter() {
        seen[j] = true;
    }
    list.extend((0..n).filter(|&j| !seen[j]));
}

fn gray_assignment(m: usize) -> Assignment {
    Assignment::from_rooms((0..m).map(|v| vec![v, m + v, 2 * m + v]).collect())
}

/// Rejects digraphs with a 2-cycle. A mutual pair lets its endpoints help
/// each other out of the gray assignment without any directed triangle, so
/// the Best-mode constructions only encode the cover question on oriented
/// inputs (which the gadget digraphs always are).
fn check_oriented(d: &Digraph) -> Result<(), ReductionError> {
    for (a, b) in d.arcs() {
        if a < b && d.has_arc(b, a) {
            return Err(ReductionError::MutualArcs(a, b));
        }
    }
    Ok(())
}

fn copies_provenance(m: usize) -> Vec<PlayerOrigin> {
    let mut prov = Vec::with_capacity(3 * m);
    prov.extend((0..m).map(PlayerOrigin::Original));
    prov.extend((0..m).map(PlayerOrigin::CopyTwo));
    prov.extend((0..m).map(PlayerOrigin::CopyThree));
    prov
}

/// Verification construction for Worst mode: the distinguished gray
/// assignment (the three copies of each vertex roomed together) has a Pareto
/// improvement iff the source graph has a triangle cover.
///
/// Players `0..m` are the originals, `m..2m` and `2m..3m` their copies.
/// An original ranks its graph neighbors first, then its two copies, then
/// everyone else; a copy ranks its two blue-triangle partners, then its two
/// gray partners, then everyone else. All blocks are ordered by ascending
/// index, all lists are strict and complete, and there are `m` rooms of
/// capacity 3.
pub fn verification_instance_worst(g: &Graph) -> Result<ReductionOutput, ReductionError> {
    let m = g.m();
    if m % 3 != 0 {
        return Err(ReductionError::NotMultipleOfThree(m));
    }
    if let Some(v) = (0..m).find(|&v| g.degree(v) < 2) {
        return Err(ReductionError::LowDegree(v));
    }
    let n = 3 * m;
    let mut lists: Vec<Vec<PlayerId>> = Vec::with_capacity(n);
    for v in 0..m {
        let mut list = g.neighbors(v);
        list.push(m + v);
        list.push(2 * m + v);
        append_rest(&mut list, n, v);
        lists.push(list);
    }
    for p in m..n {
        let v = p % m;
        let (succ, pred) = blue_partners(m, p);
        let mut list = vec![succ.min(pred), succ.max(pred)];
        let gray = if p < 2 * m { [v, 2 * m + v] } else { [v, m + v] };
        list.extend(gray);
        append_rest(&mut list, n, p);
        lists.push(list);
    }
    let instance = Instance {
        n,
        rooms: RoomSpec::uniform(m, 3),
        mode: ComparisonMode::Worst,
        prefs: PreferenceProfile::from_strict_lists(n, &lists),
    };
    Ok(ReductionOutput {
        instance,
        distinguished: Some(gray_assignment(m)),
        provenance: copies_provenance(m),
    })
}

/// Verification construction for Best mode: the gray assignment has a
/// Pareto improvement iff the source digraph has a directed triangle cover.
///
/// An original `v` ranks the heads of its outgoing arcs first, then its
/// copies in the fixed gray cycle (`v1` prefers `v2` over `v3`, cyclically),
/// then the tails of its incoming arcs, then everyone else. A copy ranks its
/// blue successor first, its gray partners (cyclically) second and third,
/// its blue predecessor fourth, then everyone else.
pub fn verification_instance_best(d: &Digraph) -> Result<ReductionOutput, ReductionError> {
    let m = d.m();
    if m % 3 != 0 {
        return Err(ReductionError::NotMultipleOfThree(m));
    }
    if let Some(v) =
        (0..m).find(|&v| d.out_neighbors(v).is_empty() || d.in_neighbors(v).is_empty())
    {
        return Err(ReductionError::BadArcDegrees(v));
    }
    check_oriented(d)?;
    let n = 3 * m;
    let mut lists: Vec<Vec<PlayerId>> = Vec::with_capacity(n);
    for v in 0..m {
        let mut list = d.out_neighbors(v);
        // Gray cycle on the copies of v: v -> v2 -> v3 -> v.
        list.push(m + v);
        list.push(2 * m + v);
        list.extend(d.in_neighbors(v));
        append_rest(&mut list, n, v);
        lists.push(list);
    }
    for p in m..n {
        let v = p % m;
        let (succ, pred) = blue_partners(m, p);
        // Gray cycle: v2 prefers v3 over v, v3 prefers v over v2.
        let gray = if p < 2 * m { [2 * m + v, v] } else { [v, m + v] };
        let mut list = vec![succ];
        list.extend(gray);
        list.push(pred);
        append_rest(&mut list, n, p);
        lists.push(list);
    }
    let instance = Instance {
        n,
        rooms: RoomSpec::uniform(m, 3),
        mode: ComparisonMode::Best,
        prefs: PreferenceProfile::from_strict_lists(n, &lists),
    };
    Ok(ReductionOutput {
        instance,
        distinguished: Some(gray_assignment(m)),
        provenance: copies_provenance(m),
    })
}

/// Feasibility construction: players are the vertices, `j` is acceptable to
/// `i` iff `{i, j}` is an edge, ranked ascending by index. Rooms are `m/3`
/// triples when 3 divides `m`, otherwise one room holding everyone (which
/// mirrors that such vertex counts are trivial no-instances of triangle
/// cover). The comparison mode plays no role in feasibility; Best is stored.
pub fn feasibility_instance(g: &Graph) -> Instance {
    let m = g.m();
    let lists: Vec<Vec<PlayerId>> = (0..m).map(|v| g.neighbors(v)).collect();
    let rooms = if m % 3 == 0 {
        RoomSpec::uniform(m / 3, 3)
    } else {
        RoomSpec::new(vec![m])
    };
    Instance {
        n: m,
        rooms,
        mode: ComparisonMode::Best,
        prefs: PreferenceProfile::from_strict_lists(m, &lists),
    }
}

/// Packing construction for Best mode: each item of size `s` becomes `s`
/// players ranking each other first in a circular manner; everyone else is
/// appended in ascending index order. Rooms all have the bin's capacity.
/// A unanimous-best assignment exists iff the items pack.
pub fn poa_instance_binpack(inp: &BinPackingInput) -> Result<Instance, ReductionError> {
    if let Some((index, &size)) = inp.items.iter().enumerate().find(|&(_, &s)| s < 2) {
        return Err(ReductionError::SmallItem { index, size });
    }
    let total = inp.total();
    if total % inp.bin != 0 {
        return Err(ReductionError::IndivisibleTotal { total, bin: inp.bin });
    }
    let n = total as usize;
    let b = inp.bin as usize;
    let mut first_player = Vec::with_capacity(inp.items.len());
    let mut start = 0usize;
    for &s in &inp.items {
        first_player.push(start);
        start += s as usize;
    }
    let mut lists: Vec<Vec<PlayerId>> = Vec::with_capacity(n);
    for (item, &s) in inp.items.iter().enumerate() {
        let base = first_player[item];
        let s = s as usize;
        for pos in 0..s {
            let me = base + pos;
            let mut list = vec![base + (pos + 1) % s];
            append_rest(&mut list, n, me);
            lists.push(list);
        }
    }
    Ok(Instance {
        n,
        rooms: RoomSpec::uniform(n / b, b),
        mode: ComparisonMode::Best,
        prefs: PreferenceProfile::from_strict_lists(n, &lists),
    })
}

/// Provenance for [`poa_instance_binpack`]: player `p`'s item and position
/// within the item's preference cycle.
pub fn binpack_provenance(inp: &BinPackingInput) -> Vec<PlayerOrigin> {
    let mut prov = Vec::new();
    for (item, &s) in inp.items.iter().enumerate() {
        for pos in 0..s as usize {
            prov.push(PlayerOrigin::CycleMember { item, pos });
        }
    }
    prov
}

/// Ties construction for Best mode: rank 1 on the heads of outgoing arcs,
/// rank 2 on everyone else; `m/3` triples. A unanimous-best assignment
/// exists iff the digraph has a directed triangle cover.
pub fn poa_instance_ties_best(d: &Digraph) -> Result<Instance, ReductionError> {
    let m = d.m();
    if m % 3 != 0 {
        return Err(ReductionError::NotMultipleOfThree(m));
    }
    if let Some(v) =
        (0..m).find(|&v| d.out_neighbors(v).is_empty() || d.in_neighbors(v).is_empty())
    {
        return Err(ReductionError::BadArcDegrees(v));
    }
    check_oriented(d)?;
    let mut groups = Vec::with_capacity(m);
    for v in 0..m {
        let firsts = d.out_neighbors(v);
        let seconds: Vec<PlayerId> =
            (0..m).filter(|&j| j != v && !d.has_arc(v, j)).collect();
        let mut g = vec![firsts];
        if !seconds.is_empty() {
            g.push(seconds);
        }
        groups.push(g);
    }
    Ok(Instance {
        n: m,
        rooms: RoomSpec::uniform(m / 3, 3),
        mode: ComparisonMode::Best,
        prefs: PreferenceProfile::from_groups(m, &groups, false),
    })
}

/// Ties construction for Worst mode: rank 1 on graph neighbors, rank 2 on
/// the edges completing the graph; `m/3` triples. A unanimous-best
/// assignment exists iff the graph has a triangle cover.
pub fn poa_instance_ties_worst(g: &Graph) -> Result<Instance, ReductionError> {
    let m = g.m();
    if m % 3 != 0 {
        return Err(ReductionError::NotMultipleOfThree(m));
    }
    if let Some(v) = (0..m).find(|&v| g.degree(v) < 2) {
        return Err(ReductionError::LowDegree(v));
    }
    let mut groups = Vec::with_capacity(m);
    for v in 0..m {
        let firsts = g.neighbors(v);
        let seconds: Vec<PlayerId> =
            (0..m).filter(|&j| j != v && !g.has_edge(v, j)).collect();
        let mut gr = vec![firsts];
        if !seconds.is_empty() {
            gr.push(seconds);
        }
        groups.push(gr);
    }
    Ok(Instance {
        n: m,
        rooms: RoomSpec::uniform(m / 3, 3),
        mode: ComparisonMode::Worst,
        prefs: PreferenceProfile::from_groups(m, &groups, false),
    })
}

/// Roles of the nine gadget vertices added per hyperedge, in numbering order.
const GADGET_ROLES: [&str; 9] = ["a", "b", "c", "u1", "u2", "v1", "v2", "w1", "w2"];

/// Number of vertices the gadget digraph has for hypergraph `h`.
pub fn dtc_vertex_count(h: &Hypergraph3) -> usize {
    let (nu, nv, nw) = h.class_sizes();
    nu + nv + nw + 9 * h.edges().len()
}

/// Human-readable origin of vertex `x` in [`dtc_from_3dm`]'s output.
pub fn dtc_vertex_origin(h: &Hypergraph3, x: usize) -> String {
    let (nu, nv, nw) = h.class_sizes();
    let base = nu + nv + nw;
    if x < nu {
        format!("u{x}")
    } else if x < nu + nv {
        format!("v{}", x - nu)
    } else if x < base {
        format!("w{}", x - nu - nv)
    } else {
        let e = (x - base) / 9;
        let role = GADGET_ROLES[(x - base) % 9];
        format!("edge{e}.{role}")
    }
}

/// The reduction from 3-dimensional hypergraph matching to directed triangle
/// cover: vertices are kept and every hyperedge `(u, v, w)` is replaced by a
/// 9-vertex gadget. The gadget's black triangles cover all 12 involved
/// vertices; its gray triangles cover only the 9 gadget vertices. A directed
/// triangle cover of the output exists iff `h` has a perfect matching.
///
/// Vertex numbering: `U` then `V` then `W`, followed per hyperedge by the
/// gadget vertices `a, b, c, u1, u2, v1, v2, w1, w2`.
pub fn dtc_from_3dm(h: &Hypergraph3) -> Digraph {
    let (nu, nv, _nw) = h.class_sizes();
    let base = nu + nv + h.class_sizes().2;
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for (e, &(hu, hv, hw)) in h.edges().iter().enumerate() {
        let u = hu;
        let v = nu + hv;
        let w = nu + nv + hw;
        let g = base + 9 * e;
        let (a, b, c) = (g, g + 1, g + 2);
        let (u1, u2) = (g + 3, g + 4);
        let (v1, v2) = (g + 5, g + 6);
        let (w1, w2) = (g + 7, g + 8);
        // Black triangles.
        arcs.extend([(v, v1), (v1, u2), (u2, v)]);
        arcs.extend([(a, b), (b, c), (c, a)]);
        arcs.extend([(u, u1), (u1, w2), (w2, u)]);
        arcs.extend([(v2, w), (w, w1), (w1, v2)]);
        // Gray triangles.
        arcs.extend([(u1, u2), (u2, c), (c, u1)]);
        arcs.extend([(w1, w2), (w2, b), (b, w1)]);
        arcs.extend([(v1, v2), (v2, a), (a, v1)]);
    }
    Digraph::new(dtc_vertex_count(h), arcs).expect("gadget arcs are simple by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::{
        check_triangle_cover, directed_triangle_cover, perfect_3dm, triangle_cover,
        CoverCertificate,
    };
    use crate::exact::{
        find_feasible, find_unanimous_best, verify_poa, SearchBudget, Verdict, VerifyMethod,
    };
    use crate::model::validate_instance;

    fn unlimited() -> SearchBudget {
        SearchBudget::unlimited()
    }

    #[test]
    fn gadget_for_single_hyperedge() {
        let h = Hypergraph3::new(1, 1, 1, vec![(0, 0, 0)]).unwrap();
        let d = dtc_from_3dm(&h);
        assert_eq!(d.m(), 12);
        assert_eq!(d.arc_count(), 21);
        let cert = directed_triangle_cover(&d, &unlimited()).unwrap().unwrap();
        assert!(crate::covers::check_directed_triangle_cover(&d, &cert));
    }

    #[test]
    fn gadget_with_no_hyperedges_is_arcless() {
        let h = Hypergraph3::new(1, 1, 1, vec![]).unwrap();
        let d = dtc_from_3dm(&h);
        assert_eq!(d.m(), 3);
        assert_eq!(d.arc_count(), 0);
        assert!(directed_triangle_cover(&d, &unlimited()).unwrap().is_none());
    }

    #[test]
    fn gadget_round_trip_two_sharing_edges() {
        // Two hyperedges sharing u: only one can be matched, leaving a v or
        // w uncovered, so neither side has a solution here.
        let h = Hypergraph3::new(1, 2, 2, vec![(0, 0, 0), (0, 1, 1)]).unwrap();
        let matched = perfect_3dm(&h, &unlimited()).unwrap().is_some();
        let covered = directed_triangle_cover(&dtc_from_3dm(&h), &unlimited())
            .unwrap()
            .is_some();
        assert_eq!(matched, covered);
        assert!(!matched);
    }

    #[test]
    fn worst_verification_on_k3_is_dominated() {
        let out = verification_instance_worst(&Graph::complete(3)).unwrap();
        assert!(validate_instance(&out.instance).ok());
        let a = out.distinguished.unwrap();
        let verdict =
            verify_poa(&out.instance, &a, VerifyMethod::Brute, &unlimited()).unwrap();
        assert!(matches!(verdict, Verdict::DominatedBy(_)));
    }

    #[test]
    fn worst_verification_on_c6_is_optimal() {
        let out = verification_instance_worst(&Graph::cycle(6)).unwrap();
        let a = out.distinguished.unwrap();
        let verdict =
            verify_poa(&out.instance, &a, VerifyMethod::Pruned, &unlimited()).unwrap();
        assert_eq!(verdict, Verdict::ParetoOptimal);
    }

    #[test]
    fn worst_witness_restricts_to_a_triangle_cover() {
        let g = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let out = verification_instance_worst(&g).unwrap();
        let a = out.distinguished.unwrap();
        let Verdict::DominatedBy(w) =
            verify_poa(&out.instance, &a, VerifyMethod::Pruned, &unlimited()).unwrap()
        else {
            panic!("expected a dominating witness");
        };
        // Rooms inside V1 form a triangle cover of g.
        let triples: Vec<[usize; 3]> = w
            .rooms()
            .iter()
            .filter(|c| c.members().iter().all(|&p| p < g.m()))
            .map(|c| [c.members()[0], c.members()[1], c.members()[2]])
            .collect();
        assert_eq!(triples.len(), g.m() / 3);
        assert!(check_triangle_cover(&g, &CoverCertificate::Triangles(triples)));
    }

    #[test]
    fn best_verification_on_directed_cycles() {
        let out = verification_instance_best(&Digraph::cycle(3)).unwrap();
        assert!(validate_instance(&out.instance).ok());
        let a = out.distinguished.clone().unwrap();
        assert!(matches!(
            verify_poa(&out.instance, &a, VerifyMethod::Brute, &unlimited()).unwrap(),
            Verdict::DominatedBy(_)
        ));

        let out6 = verification_instance_best(&Digraph::cycle(6)).unwrap();
        let a6 = out6.distinguished.unwrap();
        assert_eq!(
            verify_poa(&out6.instance, &a6, VerifyMethod::Pruned, &unlimited()).unwrap(),
            Verdict::ParetoOptimal
        );
    }

    #[test]
    fn best_witness_restricts_to_a_directed_cover() {
        let d = Digraph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let out = verification_instance_best(&d).unwrap();
        let a = out.distinguished.unwrap();
        let Verdict::DominatedBy(w) =
            verify_poa(&out.instance, &a, VerifyMethod::Pruned, &unlimited()).unwrap()
        else {
            panic!("expected a dominating witness");
        };
        let mut covered = vec![false; d.m()];
        for room in w.rooms().iter().filter(|c| c.members().iter().all(|&p| p < d.m())) {
            let t = room.members();
            let cyclic = (d.has_arc(t[0], t[1]) && d.has_arc(t[1], t[2]) && d.has_arc(t[2], t[0]))
                || (d.has_arc(t[0], t[2]) && d.has_arc(t[2], t[1]) && d.has_arc(t[1], t[0]));
            assert!(cyclic, "V1 room {t:?} is not a directed triangle");
            for &x in t {
                covered[x] = true;
            }
        }
        assert!(covered.iter().all(|&c| c));
    }

    #[test]
    fn witnesses_avoid_hidden_edges() {
        let g = Graph::complete(3);
        let out = verification_instance_worst(&g).unwrap();
        let a = out.distinguished.unwrap();
        let Verdict::DominatedBy(w) =
            verify_poa(&out.instance, &a, VerifyMethod::Pruned, &unlimited()).unwrap()
        else {
            panic!("expected a dominating witness");
        };
        for room in w.rooms() {
            let ms = room.members();
            for i in 0..ms.len() {
                for j in i + 1..ms.len() {
                    assert_ne!(edge_class_worst(&g, ms[i], ms[j]), EdgeClass::Hidden);
                }
            }
        }
    }

    #[test]
    fn feasibility_instance_examples() {
        let k3 = feasibility_instance(&Graph::complete(3));
        assert!(find_feasible(&k3, &unlimited()).unwrap().is_some());

        let c6 = feasibility_instance(&Graph::cycle(6));
        assert!(find_feasible(&c6, &unlimited()).unwrap().is_none());

        // Petersen graph: 10 vertices, not a multiple of 3, single-room rule.
        let petersen = Graph::new(
            10,
            [
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            ],
        )
        .unwrap();
        let inst = feasibility_instance(&petersen);
        assert_eq!(inst.rooms.capacities(), &[10]);
        assert!(find_feasible(&inst, &unlimited()).unwrap().is_none());
    }

    #[test]
    fn binpack_instances_follow_the_oracle() {
        let yes = BinPackingInput::new(vec![2, 2], 2).unwrap();
        let inst = poa_instance_binpack(&yes).unwrap();
        assert!(validate_instance(&inst).ok());
        assert!(find_unanimous_best(&inst, &unlimited()).unwrap().is_some());

        let no = BinPackingInput::new(vec![2, 2, 2], 3).unwrap();
        let inst = poa_instance_binpack(&no).unwrap();
        assert!(find_unanimous_best(&inst, &unlimited()).unwrap().is_none());

        let single = BinPackingInput::new(vec![2, 3], 5).unwrap();
        let inst = poa_instance_binpack(&single).unwrap();
        assert!(find_unanimous_best(&inst, &unlimited()).unwrap().is_some());
    }

    #[test]
    fn binpack_rejects_small_items_and_bad_totals() {
        let small = BinPackingInput::new(vec![1, 3], 4).unwrap();
        assert!(matches!(
            poa_instance_binpack(&small),
            Err(ReductionError::SmallItem { .. })
        ));
        let ragged = BinPackingInput::new(vec![2, 3], 4).unwrap();
        assert!(matches!(
            poa_instance_binpack(&ragged),
            Err(ReductionError::IndivisibleTotal { .. })
        ));
    }

    #[test]
    fn ties_best_follows_the_directed_oracle() {
        let c3 = Digraph::cycle(3);
        let inst = poa_instance_ties_best(&c3).unwrap();
        assert!(validate_instance(&inst).ok());
        assert!(find_unanimous_best(&inst, &unlimited()).unwrap().is_some());

        let c6 = Digraph::cycle(6);
        let inst = poa_instance_ties_best(&c6).unwrap();
        assert!(find_unanimous_best(&inst, &unlimited()).unwrap().is_none());

        let two = Digraph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let inst = poa_instance_ties_best(&two).unwrap();
        let a = find_unanimous_best(&inst, &unlimited()).unwrap().unwrap();
        let rooms: Vec<&[usize]> = a.rooms().iter().map(|c| c.members()).collect();
        assert_eq!(rooms, vec![&[0usize, 1, 2][..], &[3, 4, 5][..]]);
    }

    #[test]
    fn ties_worst_follows_the_triangle_oracle() {
        let k3 = Graph::complete(3);
        let inst = poa_instance_ties_worst(&k3).unwrap();
        assert!(find_unanimous_best(&inst, &unlimited()).unwrap().is_some());

        let c6 = Graph::cycle(6);
        let inst = poa_instance_ties_worst(&c6).unwrap();
        assert_eq!(
            triangle_cover(&c6, &unlimited()).unwrap().is_some(),
            find_unanimous_best(&inst, &unlimited()).unwrap().is_some()
        );

        let two = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let inst = poa_instance_ties_worst(&two).unwrap();
        let a = find_unanimous_best(&inst, &unlimited()).unwrap().unwrap();
        let triples: Vec<[usize; 3]> = a
            .rooms()
            .iter()
            .map(|c| [c.members()[0], c.members()[1], c.members()[2]])
            .collect();
        assert!(check_triangle_cover(&two, &CoverCertificate::Triangles(triples)));
    }

    #[test]
    fn provenance_shapes() {
        let out = verification_instance_worst(&Graph::complete(3)).unwrap();
        assert_eq!(out.provenance.len(), 9);
        assert_eq!(out.provenance[0], PlayerOrigin::Original(0));
        assert_eq!(out.provenance[4], PlayerOrigin::CopyTwo(1));
        assert_eq!(out.provenance[8], PlayerOrigin::CopyThree(2));

        let inp = BinPackingInput::new(vec![2, 3], 5).unwrap();
        let prov = binpack_provenance(&inp);
        assert_eq!(prov.len(), 5);
        assert_eq!(prov[3], PlayerOrigin::CycleMember { item: 1, pos: 1 });
    }

    #[test]
    fn preconditions_are_checked() {
        assert!(matches!(
            verification_instance_worst(&Graph::complete(4)),
            Err(ReductionError::NotMultipleOfThree(4))
        ));
        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            verification_instance_worst(&path),
            Err(ReductionError::LowDegree(_))
        ));
        let one_way = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            verification_instance_best(&one_way),
            Err(ReductionError::BadArcDegrees(_))
        ));
        let mutual =
            Digraph::new(3, [(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2)]).unwrap();
        assert!(matches!(
            verification_instance_best(&mutual),
            Err(ReductionError::MutualArcs(0, 1))
        ));
        assert!(matches!(
            poa_instance_ties_best(&mutual),
            Err(ReductionError::MutualArcs(0, 1))
        ));
    }
}
