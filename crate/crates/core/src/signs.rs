//! Sign vectors over wiring diagrams and their transport across braid moves.
//!
//! Every crossing of a reduced word for the longest element swaps one
//! unordered wire pair `{a, b}`, and each pair crosses exactly once, so a
//! sign vector lives in `F_2^(n choose 2)` indexed by wire pairs — an
//! indexing shared by every commutation class, which is what lets signs be
//! carried across braid moves.  A braid move acts on the three signs in its
//! window; depending on the pattern the move either transports a sign
//! vector deterministically or branches into a canonical and a twin target.
//! Gluing the fibers along these lifts yields a covering of the move graph
//! whose component count matches the orbit census of the flip group.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::f2::BitMatrix;
use crate::fliporbits::{FlipGen, HistogramBucket, OrbitEngine, OrbitOptions, OrbitReport};
use crate::uf::UnionFind;
use crate::wiring::{braid_window_map, crossing_pairs, v0_word, ElementaryRegion};
use crate::words::{apply_move, MoveEdge, MoveGraph, MoveKind};
use crate::{CheckReport, Error, Result};

/// Number of sign bits for rank `n`: one per wire pair.
pub fn sign_bits(n: u8) -> u32 {
    let n = n as u32;
    n * (n - 1) / 2
}

/// Bit position of the wire pair `{a, b}`, `1 <= a < b <= n`, in
/// lexicographic order.
pub fn pair_bit(n: u8, a: u8, b: u8) -> u32 {
    debug_assert!(1 <= a && a < b && b <= n);
    let (a, b, n) = (a as u32, b as u32, n as u32);
    (a - 1) * (2 * n - a) / 2 + (b - a - 1)
}

/// A positional sign pattern on a braid window, entries `+1` or `-1`.
pub type SignTriple = [i8; 3];

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum TransitionKind {
    Deterministic,
    Branching,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitionOutcome {
    pub kind: TransitionKind,
    /// All admissible result patterns; the canonical one first.
    pub results: Vec<SignTriple>,
    pub canonical: SignTriple,
}

/// How a braid move rewrites the three signs sitting at its window
/// positions.  Patterns with equal outer signs map to a single result
/// (identity when the middle agrees, global flip when it differs); patterns
/// with opposite outer signs branch into the position-reversed pattern
/// (canonical — it preserves the middle sign) and its negation (twin).
pub fn transition(signs: SignTriple) -> TransitionOutcome {
    debug_assert!(signs.iter().all(|s| s.abs() == 1));
    let [p, q, r] = signs;
    if p == r {
        let out = if q == p { signs } else { [-p, -q, -r] };
        TransitionOutcome {
            kind: TransitionKind::Deterministic,
            results: vec![out],
            canonical: out,
        }
    } else {
        let canonical = [r, q, p];
        TransitionOutcome {
            kind: TransitionKind::Branching,
            results: vec![canonical, [-r, -q, -p]],
            canonical,
        }
    }
}

/// Exhaustive self-consistency of the transition table: uniform patterns
/// are fixed, equal-outer patterns round-trip under the global flip,
/// branching results are mutual (each target's transition offers the source
/// back), and the canonical branch preserves the middle sign.
pub fn check_transition_table() -> CheckReport {
    let mut report = CheckReport::new("transition-table", 3);
    let patterns: Vec<SignTriple> =
        (0..8u32).map(|b| [0, 1, 2].map(|i| if b >> i & 1 == 1 { 1i8 } else { -1 })).collect();
    for &t in &patterns {
        report.cases_checked += 1;
        let out = transition(t);
        match out.kind {
            TransitionKind::Deterministic => {
                if out.results.len() != 1 {
                    report.violation(format!("{t:?}: deterministic with several results"));
                }
                let back = transition(out.canonical);
                if back.results != vec![t] {
                    report.violation(format!("{t:?}: deterministic move does not invert"));
                }
                if t[0] != t[2] {
                    report.violation(format!("{t:?}: opposite outer signs marked deterministic"));
                }
            }
            TransitionKind::Branching => {
                if t[0] == t[2] {
                    report.violation(format!("{t:?}: equal outer signs marked branching"));
                }
                if out.canonical[1] != t[1] {
                    report.violation(format!("{t:?}: canonical branch changes middle sign"));
                }
                if out.results.len() != 2 || out.results[0] != out.canonical {
                    report.violation(format!("{t:?}: branching results malformed"));
                }
                for &res in &out.results {
                    if !transition(res).results.contains(&t) {
                        report.violation(format!("{t:?}: target {res:?} cannot reach back"));
                    }
                }
            }
        }
    }
    report
}

/// A braid move's action on pair-indexed sign vectors.  The window covers
/// the pairs `P = {x,y}`, `Q = {x,z}`, `R = {y,z}` of its three wires; the
/// move flips all three signs when the outer signs agree and the middle
/// disagrees, fixes the vector otherwise, and additionally branches to the
/// all-three-flipped twin when the outer signs differ.
#[derive(Clone, Copy, Debug)]
pub struct EdgeAction {
    pub p_bit: u8,
    pub q_bit: u8,
    pub r_bit: u8,
    pub core_mask: u32,
}

impl EdgeAction {
    pub fn new(n: u8, wires: [u8; 3]) -> EdgeAction {
        let [x, y, z] = wires;
        debug_assert!(x < y && y < z && z <= n);
        let p = pair_bit(n, x, y);
        let q = pair_bit(n, x, z);
        let r = pair_bit(n, y, z);
        EdgeAction {
            p_bit: p as u8,
            q_bit: q as u8,
            r_bit: r as u8,
            core_mask: 1 << p | 1 << q | 1 << r,
        }
    }

    pub fn from_edge(n: u8, edge: &MoveEdge) -> EdgeAction {
        EdgeAction::new(n, edge.wires)
    }

    #[inline]
    fn window(&self, kappa: u32) -> (u32, u32, u32) {
        (kappa >> self.p_bit & 1, kappa >> self.q_bit & 1, kappa >> self.r_bit & 1)
    }

    /// The canonical lift: an involution on sign vectors.
    #[inline]
    pub fn canonical(&self, kappa: u32) -> u32 {
        let (p, q, r) = self.window(kappa);
        if p == r && p != q {
            kappa ^ self.core_mask
        } else {
            kappa
        }
    }

    /// Whether the move branches at `kappa` (opposite outer signs).
    #[inline]
    pub fn is_branching(&self, kappa: u32) -> bool {
        let (p, _, r) = self.window(kappa);
        p != r
    }

    /// The twin lift, defined exactly at branching vectors.
    #[inline]
    pub fn twin(&self, kappa: u32) -> Option<u32> {
        self.is_branching(kappa).then(|| kappa ^ self.core_mask)
    }

    /// All lift targets, canonical first.
    pub fn targets(&self, kappa: u32) -> Vec<u32> {
        let mut out = vec![self.canonical(kappa)];
        out.extend(self.twin(kappa));
        out
    }
}

fn incident_action(graph: &MoveGraph, edge: usize, class: usize) -> Result<EdgeAction> {
    let e = &graph.edges[edge];
    if e.a != class && e.b != class {
        return Err(Error::EdgeNotIncident { edge, class });
    }
    Ok(EdgeAction::from_edge(graph.n, e))
}

/// Canonical lift of `kappa` across `edge`, entered from `class`.  The
/// result is the same from either endpoint.
pub fn canonical_lift(graph: &MoveGraph, edge: usize, class: usize, kappa: u32) -> Result<u32> {
    Ok(incident_action(graph, edge, class)?.canonical(kappa))
}

/// Twin lift of `kappa` across `edge`; `None` when the move does not
/// branch there.
pub fn twin_lift(
    graph: &MoveGraph,
    edge: usize,
    class: usize,
    kappa: u32,
) -> Result<Option<u32>> {
    Ok(incident_action(graph, edge, class)?.twin(kappa))
}

/// Component census of the sign covering of the move graph.
#[derive(Clone, Debug, Serialize)]
pub struct CoveringReport {
    pub n: u8,
    pub classes: u64,
    pub sign_bits: u32,
    pub states: u64,
    pub component_count: u64,
    pub histogram: Vec<HistogramBucket>,
    pub engine: &'static str,
}

/// Count connected components of the covering whose vertices are
/// `(commutation class, sign vector)` pairs and whose edges are all
/// canonical and twin lifts of braid moves.  Rejected above rank 5 unless
/// `allow_large` (rank 6 is minutes of work); deterministic: components are
/// found in increasing state order.
pub fn covering_components(
    n: u8,
    allow_large: bool,
    opts: &OrbitOptions,
) -> Result<CoveringReport> {
    let limit = if allow_large { 6 } else { 5 };
    if n < 3 || n > limit {
        return Err(Error::RankLimit { n, limit });
    }
    let graph = MoveGraph::build(n)?;
    let m = sign_bits(n);
    let classes = graph.classes.len() as u64;
    let states = classes << m;
    let needed = match opts.engine {
        OrbitEngine::UnionFind => states.saturating_mul(8),
        OrbitEngine::BfsScan => states / 8 + (1 << 20),
    };
    if needed > opts.memory_cap {
        return Err(Error::MemoryCap { needed, cap: opts.memory_cap });
    }
    let mut incident: Vec<Vec<(u64, EdgeAction)>> = vec![Vec::new(); classes as usize];
    for e in &graph.edges {
        let act = EdgeAction::from_edge(n, e);
        incident[e.a].push((e.b as u64, act));
        incident[e.b].push((e.a as u64, act));
    }
    let histogram = match opts.engine {
        OrbitEngine::UnionFind => {
            if states > u32::MAX as u64 {
                return Err(Error::StateSpaceLimit {
                    bits: 64 - states.leading_zeros(),
                    limit: 32,
                });
            }
            let mut uf = UnionFind::new(states as usize);
            for (class, nbrs) in incident.iter().enumerate() {
                let base = (class as u64) << m;
                for kappa in 0..1u64 << m {
                    let s = (base | kappa) as u32;
                    for &(other, act) in nbrs {
                        for t in act.targets(kappa as u32) {
                            uf.union(s, (other << m | t as u64) as u32);
                        }
                    }
                }
            }
            let mut histogram = BTreeMap::new();
            for (_, size) in uf.component_sizes() {
                *histogram.entry(size as u64).or_insert(0u64) += 1;
            }
            histogram
        }
        OrbitEngine::BfsScan => {
            let words = states.div_ceil(64) as usize;
            let mut visited = vec![0u64; words];
            let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
            let mut stack: Vec<u64> = Vec::new();
            let mark = |visited: &mut [u64], s: u64| -> bool {
                let (w, b) = ((s >> 6) as usize, s & 63);
                let fresh = visited[w] >> b & 1 == 0;
                visited[w] |= 1 << b;
                fresh
            };
            for seed in 0..states {
                if !mark(&mut visited, seed) {
                    continue;
                }
                let mut size = 0u64;
                stack.push(seed);
                while let Some(s) = stack.pop() {
                    size += 1;
                    let (class, kappa) = ((s >> m) as usize, (s & ((1 << m) - 1)) as u32);
                    for &(other, act) in &incident[class] {
                        for t in act.targets(kappa) {
                            let next = other << m | t as u64;
                            if mark(&mut visited, next) {
                                stack.push(next);
                            }
                        }
                    }
                }
                *histogram.entry(size).or_insert(0) += 1;
            }
            histogram
        }
    };
    Ok(CoveringReport {
        n,
        classes,
        sign_bits: m,
        states,
        component_count: histogram.values().sum(),
        histogram: histogram
            .into_iter()
            .map(|(length, count)| HistogramBucket { length, count })
            .collect(),
        engine: opts.engine.name(),
    })
}

/// Region flips of a diagram recompiled onto global pair-indexed sign bits.
pub fn pair_flips(n: u8, letters: &[u8]) -> Vec<FlipGen> {
    let pairs = crossing_pairs(n, letters);
    let bit = |pos: usize| pair_bit(n, pairs[pos].0, pairs[pos].1);
    crate::wiring::elementary_regions(letters)
        .iter()
        .map(|r| FlipGen {
            mask: r.nodes.iter().fold(0u32, |acc, &p| acc | 1 << bit(p)),
            t1: bit(r.span.0) as u8,
            t2: bit(r.span.1) as u8,
        })
        .collect()
}

/// Component count of the region-flip graph over the staircase word's
/// diagram — one of the three routes to the census.
pub fn gamma_components(n: u8, opts: &OrbitOptions) -> Result<OrbitReport> {
    crate::fliporbits::general_orbits_of_word(&v0_word(n), opts)
}

/// Region-flip census of one commutation class's fiber, in pair indexing.
pub fn fiber_components(n: u8, letters: &[u8], opts: &OrbitOptions) -> Result<OrbitReport> {
    crate::fliporbits::orbits(sign_bits(n), &pair_flips(n, letters), opts)
}

/// The elementary region a braid move rewrites, on the diagram of `class`:
/// the triangle spanned by the window's outer crossings.
pub fn edge_core(graph: &MoveGraph, edge: usize, class: usize) -> Result<ElementaryRegion> {
    let e = &graph.edges[edge];
    let level = if class == e.a {
        e.word[e.pos]
    } else if class == e.b {
        e.word[e.pos + 1]
    } else {
        return Err(Error::EdgeNotIncident { edge, class });
    };
    Ok(ElementaryRegion {
        level,
        span: (e.pos, e.pos + 2),
        nodes: vec![e.pos, e.pos + 1, e.pos + 2],
    })
}

#[inline]
fn admissible(flip: &FlipGen, kappa: u32) -> bool {
    (kappa >> flip.t1 ^ kappa >> flip.t2) & 1 == 1
}

/// How a region flip commutes with the canonical lift across a braid move.
/// For every move, every sign vector, and every region flip admissible
/// there, one of three identities must hold on the far side, tried in
/// order: the transported flip alone, or the transported flip chained with
/// the window core flip in one of the two orders.  The orders are a
/// prioritized chain, not mutually exclusive — when the transported flip
/// and the core flip commute, both chain identities hold at once.  Flips
/// over regions disjoint from the window must transport plainly (the first
/// identity).  Exhaustive up to rank 5.
pub fn verify_flip_transport(n: u8) -> Result<CheckReport> {
    if n < 3 || n > 5 {
        return Err(Error::RankLimit { n, limit: 5 });
    }
    let graph = MoveGraph::build(n)?;
    let m = sign_bits(n);
    let mut report = CheckReport::new("flip-transport", n);
    for edge in &graph.edges {
        let action = EdgeAction::from_edge(n, edge);
        for flipped in [false, true] {
            let u_letters = if flipped {
                apply_move(
                    &crate::words::ReducedWord::new(n, edge.word.clone())?,
                    edge.pos,
                    MoveKind::Braid,
                )?
                .letters()
                .to_vec()
            } else {
                edge.word.clone()
            };
            let window = braid_window_map(&u_letters, edge.pos)?;
            let pairize = |letters: &[u8], regions: &[ElementaryRegion]| -> Vec<FlipGen> {
                let pairs = crossing_pairs(n, letters);
                let bit = |pos: usize| pair_bit(n, pairs[pos].0, pairs[pos].1);
                regions
                    .iter()
                    .map(|r| FlipGen {
                        mask: r.nodes.iter().fold(0u32, |acc, &p| acc | 1 << bit(p)),
                        t1: bit(r.span.0) as u8,
                        t2: bit(r.span.1) as u8,
                    })
                    .collect()
            };
            let flips_u = pairize(&u_letters, &window.regions_u);
            let flips_v = pairize(&window.v_letters, &window.regions_v);
            let core_u = &window.regions_u[window.core_u];
            let core_v_flip = flips_v[window.region_map[window.core_u]];
            for kappa in 0..1u32 << m {
                let c_kappa = action.canonical(kappa);
                for (bi, flip) in flips_u.iter().enumerate() {
                    if !admissible(flip, kappa) {
                        continue;
                    }
                    report.cases_checked += 1;
                    let lhs = action.canonical(flip.apply(kappa));
                    let transported = flips_v[window.region_map[bi]];
                    let plain =
                        admissible(&transported, c_kappa) && transported.apply(c_kappa) == lhs;
                    let chained = |first: &FlipGen, second: &FlipGen| {
                        if !admissible(first, c_kappa) {
                            return false;
                        }
                        let t = first.apply(c_kappa);
                        admissible(second, t) && second.apply(t) == lhs
                    };
                    let which = if plain {
                        Some(0)
                    } else if chained(&transported, &core_v_flip) {
                        Some(1)
                    } else if chained(&core_v_flip, &transported) {
                        Some(2)
                    } else {
                        None
                    };
                    let Some(which) = which else {
                        report.violation(format!(
                            "word {:?} pos {} sign vector {:#x} region {}: no transport \
                             identity holds",
                            u_letters, edge.pos, kappa, bi
                        ));
                        continue;
                    };
                    let disjoint = window.regions_u[bi]
                        .nodes
                        .iter()
                        .all(|p| !core_u.nodes.contains(p));
                    if disjoint && which != 0 {
                        report.violation(format!(
                            "word {:?} pos {} sign vector {:#x} region {}: disjoint region \
                             needed the core chain",
                            u_letters, edge.pos, kappa, bi
                        ));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Canonical lifts around every 4-cycle of the move graph must close up,
/// for every sign vector.
pub fn verify_square_lifts(n: u8) -> Result<CheckReport> {
    if n < 3 || n > 5 {
        return Err(Error::RankLimit { n, limit: 5 });
    }
    let graph = MoveGraph::build(n)?;
    let m = sign_bits(n);
    let actions: Vec<EdgeAction> =
        graph.edges.iter().map(|e| EdgeAction::from_edge(n, e)).collect();
    let cycles = graph.simple_cycles(4);
    let mut report = CheckReport::new("square-lifts", n);
    for cycle in &cycles {
        for kappa in 0..1u32 << m {
            report.cases_checked += 1;
            let mut cur = kappa;
            for &e in &cycle.edges {
                cur = actions[e].canonical(cur);
            }
            if cur != kappa {
                report.violation(format!(
                    "4-cycle through classes {:?} moves sign vector {:#x} to {:#x}",
                    cycle.vertices, kappa, cur
                ));
            }
        }
    }
    Ok(report)
}

/// 8-cycle monodromy of canonical lifts: the transported sign vector may
/// differ from the start, but must stay in the same region-flip component
/// of the base class's fiber.
#[derive(Clone, Debug, Serialize)]
pub struct OctagonReport {
    pub n: u8,
    pub octagons: u64,
    pub cases_checked: u64,
    /// Sign vectors some 8-cycle fails to close up on (same component,
    /// different vector).
    pub nonclosure_witnesses: u64,
    pub violations: Vec<String>,
}

impl OctagonReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_octagon_lifts(n: u8) -> Result<OctagonReport> {
    if n < 3 || n > 5 {
        return Err(Error::RankLimit { n, limit: 5 });
    }
    let graph = MoveGraph::build(n)?;
    let m = sign_bits(n);
    let actions: Vec<EdgeAction> =
        graph.edges.iter().map(|e| EdgeAction::from_edge(n, e)).collect();
    let cycles = graph.simple_cycles(8);
    let mut report = OctagonReport {
        n,
        octagons: cycles.len() as u64,
        cases_checked: 0,
        nonclosure_witnesses: 0,
        violations: Vec::new(),
    };
    let mut labels_cache: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for cycle in &cycles {
        let base = cycle.vertices[0];
        let labels = labels_cache.entry(base).or_insert_with(|| {
            let flips = pair_flips(n, &graph.classes[base]);
            let mut uf = UnionFind::new(1 << m);
            for kappa in 0..1u32 << m {
                for f in &flips {
                    uf.union(kappa, f.apply(kappa));
                }
            }
            uf.labels()
        });
        for kappa in 0..1u32 << m {
            report.cases_checked += 1;
            let mut cur = kappa;
            for &e in &cycle.edges {
                cur = actions[e].canonical(cur);
            }
            if cur != kappa {
                report.nonclosure_witnesses += 1;
            }
            if labels[cur as usize] != labels[kappa as usize] {
                if report.violations.len() < 32 {
                    report.violations.push(format!(
                        "8-cycle at class {} carries {:#x} to {:#x} in a different \
                         fiber component",
                        base, kappa, cur
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Rank computation for the cycle space: the edge-incidence vectors of all
/// 4- and 8-cycles, reduced over F_2, against the first Betti number.
#[derive(Clone, Debug, Serialize)]
pub struct CycleSpanReport {
    pub n: u8,
    pub vertices: u64,
    pub edges: u64,
    pub cycles4: u64,
    pub cycles8: u64,
    pub rank: u64,
    pub expected_rank: u64,
    pub spans: bool,
}

pub fn verify_cycle_space_span(n: u8) -> Result<CycleSpanReport> {
    if n < 3 || n > 5 {
        return Err(Error::RankLimit { n, limit: 5 });
    }
    let graph = MoveGraph::build(n)?;
    let c4 = graph.simple_cycles(4);
    let c8 = graph.simple_cycles(8);
    let mut mat = BitMatrix::zero(c4.len() + c8.len(), graph.edges.len());
    for (r, cycle) in c4.iter().chain(c8.iter()).enumerate() {
        for &e in &cycle.edges {
            let cur = mat.get(r, e);
            mat.set(r, e, !cur);
        }
    }
    let rank = mat.reduce() as u64;
    let expected = graph.edges.len() as u64 - graph.classes.len() as u64 + 1;
    Ok(CycleSpanReport {
        n,
        vertices: graph.classes.len() as u64,
        edges: graph.edges.len() as u64,
        cycles4: c4.len() as u64,
        cycles8: c8.len() as u64,
        rank,
        expected_rank: expected,
        spans: rank == expected,
    })
}
