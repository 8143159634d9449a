//! The triangular flip group and its orbit census.
//!
//! States are upper-triangular 0/1 matrices packed into a `u32` bit vector.
//! Each generator reads the parity of two "trace" bits and, when they
//! differ, flips a small mask of entries; the whole group is generated by
//! such involutions.  The same (mask, trace-pair) shape covers the region
//! flips of wiring diagrams, so one orbit engine serves both.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::f2::{BitMatrix, LinMap};
use crate::uf::UnionFind;
use crate::words::{Permutation, ReducedWord};
use crate::{CheckReport, Error, Result};

/// Number of matrix entries (state bits) for size `k`.
pub fn dim(k: u8) -> u32 {
    let k = k as u32;
    k * (k + 1) / 2
}

/// Bit position of entry `(i, j)`, `1 <= i <= j <= k`, in row-major
/// triangular order.
pub fn tri_index(k: u8, i: u8, j: u8) -> u32 {
    debug_assert!(1 <= i && i <= j && j <= k);
    let (i, j, k) = (i as u32, j as u32, k as u32);
    (i - 1) * (2 * k - i + 2) / 2 + (j - i)
}

/// A conditional flip: when state bits `t1` and `t2` differ, XOR `mask` into
/// the state.  Always an involution (the mask contains both trace bits, so
/// the trigger condition survives the flip).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct FlipGen {
    pub mask: u32,
    pub t1: u8,
    pub t2: u8,
}

impl FlipGen {
    #[inline]
    pub fn apply(&self, s: u32) -> u32 {
        let t = (s >> self.t1 ^ s >> self.t2) & 1;
        s ^ (self.mask & 0u32.wrapping_sub(t))
    }

    /// The same map as an explicit matrix over F_2.
    pub fn to_linmap(&self, dim: usize) -> LinMap {
        let toggle = (1u64 << self.t1) ^ (1u64 << self.t2);
        let rows = (0..dim)
            .map(|r| {
                let mut row = 1u64 << r;
                if self.mask >> r & 1 == 1 {
                    row ^= toggle;
                }
                row
            })
            .collect();
        LinMap { dim, rows }
    }
}

/// The generator indexed by `(i, j)`, `1 <= i <= j <= k - 1`: flips the 2x2
/// minor at rows `i, i+1`, columns `j, j+1` (3 entries on the diagonal case
/// `i = j`, else 4) when the minor's diagonal entries differ.
pub fn generator(k: u8, i: u8, j: u8) -> Option<FlipGen> {
    if i == 0 || j < i || j + 1 > k || k == 0 {
        return None;
    }
    let t1 = tri_index(k, i, j);
    let t2 = tri_index(k, i + 1, j + 1);
    let mut mask = 1u32 << t1 | 1 << t2 | 1 << tri_index(k, i, j + 1);
    if i < j {
        mask |= 1 << tri_index(k, i + 1, j);
    }
    Some(FlipGen { mask, t1: t1 as u8, t2: t2 as u8 })
}

/// All generators of the flip group on size-`k` states, `(i, j)` ascending.
pub fn generators(k: u8) -> Vec<FlipGen> {
    let mut gens = Vec::new();
    for i in 1..k {
        for j in i..k {
            gens.push(generator(k, i, j).expect("index range is valid"));
        }
    }
    gens
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrbitEngine {
    UnionFind,
    BfsScan,
}

impl OrbitEngine {
    pub fn name(self) -> &'static str {
        match self {
            OrbitEngine::UnionFind => "uf",
            OrbitEngine::BfsScan => "bfs",
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrbitOptions {
    pub engine: OrbitEngine,
    /// 0 = whatever pool is current, 1 = forced sequential reference path,
    /// n = dedicated pool of n workers.  Counts are thread-count invariant.
    pub threads: usize,
    /// Upper bound in bytes, checked before any large allocation.
    pub memory_cap: u64,
    /// Refuse state spaces beyond this many bits (hard ceiling 32).
    pub max_bits: u32,
    pub collect_representatives: bool,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            engine: OrbitEngine::BfsScan,
            threads: 0,
            memory_cap: 2 << 30,
            max_bits: 28,
            collect_representatives: false,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct HistogramBucket {
    pub length: u64,
    pub count: u64,
}

/// Exact orbit census of a flip action.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct OrbitReport {
    /// Matrix size when the action is the triangular flip group.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u8>,
    pub bits: u32,
    pub states: u64,
    pub orbit_count: u64,
    /// Orbit length distribution, ascending by length.
    pub histogram: Vec<HistogramBucket>,
    pub engine: &'static str,
    pub threads: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    /// Least state of each orbit, ascending, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<u32>>,
}

impl OrbitReport {
    /// Equality of the mathematical content, ignoring engine and timing
    /// metadata.
    pub fn agrees_with(&self, other: &OrbitReport) -> bool {
        self.bits == other.bits
            && self.states == other.states
            && self.orbit_count == other.orbit_count
            && self.histogram == other.histogram
            && match (&self.representatives, &other.representatives) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            }
    }
}

fn effective_threads(opts: &OrbitOptions) -> usize {
    if cfg!(feature = "parallel") {
        opts.threads
    } else {
        1
    }
}

fn memory_needed(bits: u32, engine: OrbitEngine) -> u64 {
    let states = 1u64 << bits;
    match engine {
        // 4-byte parent + 4-byte size per state.
        OrbitEngine::UnionFind => states.saturating_mul(8),
        // Visited bitmap, doubled for frontier slack.
        OrbitEngine::BfsScan => states / 4 + 1024,
    }
}

/// Count orbits of the group generated by `gens` on `2^bits` states.
/// Deterministic for every engine and thread count: orbits are identified by
/// their least state, discovered in increasing order.
pub fn orbits(bits: u32, gens: &[FlipGen], opts: &OrbitOptions) -> Result<OrbitReport> {
    let limit = opts.max_bits.min(32);
    if bits > limit {
        return Err(Error::StateSpaceLimit { bits, limit });
    }
    let needed = memory_needed(bits, opts.engine);
    if needed > opts.memory_cap {
        return Err(Error::MemoryCap { needed, cap: opts.memory_cap });
    }
    for g in gens {
        assert!(
            (g.t1 as u32) < bits && (g.t2 as u32) < bits && (g.mask >> 1 >> (bits - 1)) == 0,
            "generator touches bits outside the state space"
        );
    }
    match opts.engine {
        OrbitEngine::UnionFind => Ok(orbits_uf(bits, gens, opts)),
        OrbitEngine::BfsScan => Ok(orbits_bfs(bits, gens, opts)),
    }
}

fn report_from_histogram(
    bits: u32,
    histogram: BTreeMap<u64, u64>,
    reps: Option<Vec<u32>>,
    engine: OrbitEngine,
    opts: &OrbitOptions,
) -> OrbitReport {
    let orbit_count = histogram.values().sum();
    OrbitReport {
        k: None,
        bits,
        states: 1u64 << bits,
        orbit_count,
        histogram: histogram
            .into_iter()
            .map(|(length, count)| HistogramBucket { length, count })
            .collect(),
        engine: engine.name(),
        threads: effective_threads(opts),
        elapsed_ms: None,
        representatives: reps,
    }
}

fn orbits_uf(bits: u32, gens: &[FlipGen], opts: &OrbitOptions) -> OrbitReport {
    let states = 1usize << bits;
    let mut uf = UnionFind::new(states);
    for s in 0..states as u64 {
        let s = s as u32;
        for g in gens {
            uf.union(s, g.apply(s));
        }
    }
    let mut histogram = BTreeMap::new();
    for (_, size) in uf.component_sizes() {
        *histogram.entry(size as u64).or_insert(0u64) += 1;
    }
    let reps = opts.collect_representatives.then(|| {
        let mut seen = vec![false; states];
        let mut reps = Vec::new();
        for s in 0..states as u64 {
            let root = uf.find(s as u32) as usize;
            if !seen[root] {
                seen[root] = true;
                reps.push(s as u32);
            }
        }
        reps
    });
    report_from_histogram(bits, histogram, reps, OrbitEngine::UnionFind, opts)
}

#[inline]
fn claim(visited: &[AtomicU64], s: u32) -> bool {
    let bit = 1u64 << (s & 63);
    visited[(s >> 6) as usize].fetch_or(bit, Ordering::Relaxed) & bit == 0
}

fn expand_sequential(visited: &[AtomicU64], gens: &[FlipGen], frontier: &[u32], next: &mut Vec<u32>) {
    for &x in frontier {
        for g in gens {
            let y = g.apply(x);
            if claim(visited, y) {
                next.push(y);
            }
        }
    }
}

#[cfg(feature = "parallel")]
fn expand_parallel(visited: &[AtomicU64], gens: &[FlipGen], frontier: &[u32], next: &mut Vec<u32>) {
    use rayon::prelude::*;
    let found: Vec<Vec<u32>> = frontier
        .par_chunks(1024)
        .map(|chunk| {
            let mut local = Vec::new();
            for &x in chunk {
                for g in gens {
                    let y = g.apply(x);
                    if claim(visited, y) {
                        local.push(y);
                    }
                }
            }
            local
        })
        .collect();
    for mut part in found {
        next.append(&mut part);
    }
}

fn orbits_bfs(bits: u32, gens: &[FlipGen], opts: &OrbitOptions) -> OrbitReport {
    #[cfg(feature = "parallel")]
    {
        if opts.threads != 1 {
            return crate::par::with_pool(opts.threads, || bfs_scan(bits, gens, opts, true));
        }
    }
    bfs_scan(bits, gens, opts, false)
}

/// Sequential scan for seeds (so each orbit is discovered at its least
/// state) with optionally parallel frontier expansion inside each orbit.
fn bfs_scan(bits: u32, gens: &[FlipGen], opts: &OrbitOptions, parallel: bool) -> OrbitReport {
    // Frontiers below this size expand sequentially even in parallel mode.
    const PAR_THRESHOLD: usize = 2048;
    let par_enabled = cfg!(feature = "parallel") && parallel;
    let states = 1u64 << bits;
    let words = states.div_ceil(64) as usize;
    let visited: Vec<AtomicU64> = (0..words).map(|_| AtomicU64::new(0)).collect();
    let full_word = |w: usize| -> u64 {
        if bits >= 6 || w + 1 < words {
            u64::MAX
        } else {
            (1u64 << states) - 1
        }
    };
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    let mut reps: Vec<u32> = Vec::new();
    let mut frontier: Vec<u32> = Vec::new();
    let mut next: Vec<u32> = Vec::new();
    let mut cursor = 0usize;
    loop {
        while cursor < words && visited[cursor].load(Ordering::Relaxed) == full_word(cursor) {
            cursor += 1;
        }
        if cursor == words {
            break;
        }
        let free = !visited[cursor].load(Ordering::Relaxed) & full_word(cursor);
        let seed = (cursor as u64 * 64) as u32 + free.trailing_zeros();
        claim(&visited, seed);
        if opts.collect_representatives {
            reps.push(seed);
        }
        let mut size = 1u64;
        frontier.clear();
        frontier.push(seed);
        while !frontier.is_empty() {
            next.clear();
            if par_enabled && frontier.len() >= PAR_THRESHOLD {
                #[cfg(feature = "parallel")]
                expand_parallel(&visited, gens, &frontier, &mut next);
            } else {
                expand_sequential(&visited, gens, &frontier, &mut next);
            }
            size += next.len() as u64;
            std::mem::swap(&mut frontier, &mut next);
        }
        *histogram.entry(size).or_insert(0) += 1;
    }
    let reps = opts.collect_representatives.then_some(reps);
    report_from_histogram(bits, histogram, reps, OrbitEngine::BfsScan, opts)
}

/// Orbit census of the full flip group on size-`k` triangular matrices.
pub fn count_orbits(k: u8, opts: &OrbitOptions) -> Result<OrbitReport> {
    let mut report = orbits(dim(k), &generators(k), opts)?;
    report.k = Some(k);
    Ok(report)
}

/// Conjectured orbit-length histogram of the size-`k` census, stated for
/// k >= 5; `(length, count)` ascending by length.
pub fn predicted_histogram(k: u8) -> Option<Vec<(u64, u64)>> {
    if k < 5 {
        return None;
    }
    let p = |e: u64| 1u64 << e;
    let m = k as u64 / 2;
    let mut buckets = if k % 2 == 0 {
        vec![
            (1, p(2 * m)),
            (p((2 * m + 1) * (m - 1)), p(m + 2) * (p(m - 1) - 1)),
            (p((m + 1) * (m - 1)) * (p(m * (m - 1)) - 1), p(m)),
            (p((m + 1) * (m - 1)) * (p(m * (m - 1)) + 1), p(m)),
            (p(m - 1) * (p(2 * m * (m - 1)) - 1), p(m + 1)),
        ]
    } else {
        vec![
            (1, p(2 * m + 1)),
            (p((2 * m - 1) * (m + 1)), p(m + 2) * (p(m) - 1)),
            (p(m * m + m - 1) * (p(m * m) - 1), p(m + 1)),
            (p(m) * (p(m * m) - 1) * (p(m * m - 1) + 1), p(m + 1)),
        ]
    };
    buckets.sort_unstable();
    Some(buckets)
}

#[derive(Clone, Debug, Serialize)]
pub struct BucketCompare {
    pub length: u64,
    pub actual: u64,
    pub predicted: u64,
    pub matches: bool,
}

/// Computed histogram next to the conjectured one.  Mismatches are findings
/// to report, never errors: the prediction is a conjecture.
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub k: u8,
    pub orbit_count: u64,
    pub states: u64,
    pub histogram: Vec<HistogramBucket>,
    /// Histogram lengths weighted by counts add up to the state count.
    pub partition_exact: bool,
    pub has_prediction: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_total: Option<u64>,
    pub buckets: Vec<BucketCompare>,
    pub all_match: bool,
}

pub fn check_orbit_structure(k: u8, opts: &OrbitOptions) -> Result<StructureReport> {
    let report = count_orbits(k, opts)?;
    let total: u64 = report.histogram.iter().map(|b| b.length * b.count).sum();
    let predicted = predicted_histogram(k);
    let mut buckets = Vec::new();
    let mut all_match = predicted.is_some();
    if let Some(pred) = &predicted {
        let lengths: BTreeSet<u64> = report
            .histogram
            .iter()
            .map(|b| b.length)
            .chain(pred.iter().map(|&(l, _)| l))
            .collect();
        for length in lengths {
            let actual = report
                .histogram
                .iter()
                .find(|b| b.length == length)
                .map_or(0, |b| b.count);
            let expected = pred
                .iter()
                .find(|&&(l, _)| l == length)
                .map_or(0, |&(_, c)| c);
            let matches = actual == expected;
            all_match &= matches;
            buckets.push(BucketCompare { length, actual, predicted: expected, matches });
        }
    }
    Ok(StructureReport {
        k,
        orbit_count: report.orbit_count,
        states: report.states,
        partition_exact: total == report.states,
        has_prediction: predicted.is_some(),
        predicted_total: predicted.map(|p| p.iter().map(|&(l, c)| l * c).sum()),
        histogram: report.histogram,
        buckets,
        all_match,
    })
}

fn generator_indices(k: u8) -> Vec<(u8, u8)> {
    (1..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect()
}

fn hex_adjacent(a: (u8, u8), b: (u8, u8)) -> bool {
    let step = |x: (u8, u8), y: (u8, u8)| {
        (y.0 == x.0 + 1 && y.1 == x.1)
            || (y.0 == x.0 && y.1 == x.1 + 1)
            || (y.0 == x.0 + 1 && y.1 == x.1 + 1)
    };
    step(a, b) || step(b, a)
}

fn closure_size(dim: usize, gens: &[LinMap], cap: usize) -> usize {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let identity = LinMap::identity(dim);
    seen.insert(identity.rows.clone());
    let mut stack = vec![identity];
    while let Some(m) = stack.pop() {
        for g in gens {
            let next = g.compose(&m);
            if seen.insert(next.rows.clone()) {
                stack.push(next);
                if seen.len() > cap {
                    return seen.len();
                }
            }
        }
    }
    seen.len()
}

/// Structural facts about the generator family, checked exactly on the
/// matrix representation: every generator is a non-identity involution
/// fixing exactly half the states (so all have equal cycle type); generator
/// pairs commute unless they are adjacent on the triangular lattice, in
/// which case their product has order 3; each lattice triangle generates a
/// group of order 24.
pub fn check_group_properties(k: u8) -> Result<CheckReport> {
    if dim(k) > 64 {
        return Err(Error::RankLimit { n: k, limit: 10 });
    }
    let d = dim(k) as usize;
    let mut report = CheckReport::new("group-properties", k);
    let idx = generator_indices(k);
    let maps: Vec<LinMap> = generators(k).iter().map(|g| g.to_linmap(d)).collect();
    for (t, m) in maps.iter().enumerate() {
        report.cases_checked += 1;
        if m.is_identity() {
            report.violation(format!("generator {:?} is the identity", idx[t]));
        }
        if !m.compose(m).is_identity() {
            report.violation(format!("generator {:?} is not an involution", idx[t]));
        }
        let mut shifted = m.clone();
        for (r, row) in shifted.rows.iter_mut().enumerate() {
            *row ^= 1u64 << r;
        }
        if shifted.rank() != 1 {
            report.violation(format!(
                "generator {:?} does not fix exactly half the states",
                idx[t]
            ));
        }
    }
    for p in 0..maps.len() {
        for q in p + 1..maps.len() {
            report.cases_checked += 1;
            let ab = maps[p].compose(&maps[q]);
            if hex_adjacent(idx[p], idx[q]) {
                let cube = ab.compose(&ab).compose(&ab);
                if ab.is_identity() || !cube.is_identity() {
                    report.violation(format!(
                        "product of adjacent {:?}, {:?} is not of order 3",
                        idx[p], idx[q]
                    ));
                }
            } else if ab != maps[q].compose(&maps[p]) {
                report.violation(format!(
                    "distant generators {:?}, {:?} do not commute",
                    idx[p], idx[q]
                ));
            }
        }
    }
    let map_of = |i: u8, j: u8| -> &LinMap {
        let pos = idx.iter().position(|&x| x == (i, j)).expect("valid index");
        &maps[pos]
    };
    for &(i, j) in &idx {
        for tri in [[(i, j), (i + 1, j), (i + 1, j + 1)], [(i, j), (i, j + 1), (i + 1, j + 1)]] {
            if tri.iter().all(|&(a, b)| a >= 1 && a <= b && b + 1 <= k) {
                report.cases_checked += 1;
                let gens: Vec<LinMap> = tri.iter().map(|&(a, b)| map_of(a, b).clone()).collect();
                let size = closure_size(d, &gens, 48);
                if size != 24 {
                    report.violation(format!(
                        "triangle {:?} generates a group of order {} (want 24)",
                        tri, size
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Row masks of the parity projection from size-`k` states to size-`k-1`
/// states: target entry `(i, j)` reads source entries `(i, j) + (i+1, j+1)`.
pub fn projection_rows(k: u8) -> Vec<u64> {
    let mut rows = Vec::new();
    for i in 1..k {
        for j in i..k {
            rows.push(1u64 << tri_index(k, i, j) | 1u64 << tri_index(k, i + 1, j + 1));
        }
    }
    rows
}

fn project(rows: &[u64], x: u64) -> u64 {
    rows.iter()
        .enumerate()
        .fold(0, |acc, (r, &m)| acc | ((((m & x).count_ones() as u64) & 1) << r))
}

/// The maps induced on the projected space by each generator: generator
/// `(i, j)` adds target coordinate `(i, j)` to its lattice neighbours.
/// Aligned with `generators(k)` order.
pub fn induced_generators(k: u8) -> Result<Vec<LinMap>> {
    if k < 2 || dim(k) > 64 {
        return Err(Error::RankLimit { n: k, limit: 10 });
    }
    let kk = k - 1;
    let dk1 = dim(kk) as usize;
    let mut out = Vec::new();
    for i in 1..k {
        for j in i..k {
            let src = tri_index(kk, i, j);
            let mut mask = 0u64;
            let (si, sj) = (i as i16, j as i16);
            for (a, b) in [
                (si + 1, sj),
                (si - 1, sj),
                (si, sj + 1),
                (si, sj - 1),
                (si + 1, sj + 1),
                (si - 1, sj - 1),
            ] {
                if a >= 1 && a <= b && b <= kk as i16 {
                    mask |= 1u64 << tri_index(kk, a as u8, b as u8);
                }
            }
            debug_assert_eq!(mask >> src & 1, 0);
            let rows = (0..dk1)
                .map(|r| {
                    let mut row = 1u64 << r;
                    if mask >> r & 1 == 1 {
                        row |= 1u64 << src;
                    }
                    row
                })
                .collect();
            out.push(LinMap { dim: dk1, rows });
        }
    }
    Ok(out)
}

/// Checks that the parity projection intertwines each generator with its
/// induced map, and that the projection kernel is invariant — on basis
/// vectors always, and over the whole state space for small sizes.
pub fn induced_action(k: u8) -> Result<CheckReport> {
    let induced = induced_generators(k)?;
    let d = dim(k) as usize;
    let proj = projection_rows(k);
    let maps: Vec<LinMap> = generators(k).iter().map(|g| g.to_linmap(d)).collect();
    let idx = generator_indices(k);
    let mut report = CheckReport::new("induced-action", k);

    let mut pm = BitMatrix::zero(proj.len(), d);
    for (r, &mask) in proj.iter().enumerate() {
        for c in 0..d {
            if mask >> c & 1 == 1 {
                pm.set(r, c, true);
            }
        }
    }
    for v in pm.nullspace() {
        for (t, g) in maps.iter().enumerate() {
            report.cases_checked += 1;
            if project(&proj, g.apply(v[0])) != 0 {
                report.violation(format!(
                    "generator {:?} moves kernel vector {:#x} out of the projection kernel",
                    idx[t], v[0]
                ));
            }
        }
    }
    let check_state = |x: u64, report: &mut CheckReport| {
        for (t, (g, gh)) in maps.iter().zip(&induced).enumerate() {
            report.cases_checked += 1;
            if project(&proj, g.apply(x)) != gh.apply(project(&proj, x)) {
                report.violation(format!(
                    "projection does not intertwine generator {:?} at state {:#x}",
                    idx[t], x
                ));
            }
        }
    };
    if d <= 16 {
        for x in 0..1u64 << d {
            check_state(x, &mut report);
        }
    } else {
        for t in 0..d {
            check_state(1u64 << t, &mut report);
        }
    }
    Ok(report)
}

/// Search result for bilinear forms invariant under the induced maps.
#[derive(Clone, Debug, Serialize)]
pub struct FormReport {
    pub k: u8,
    /// Dimension of the space the form lives on.
    pub space_dim: usize,
    /// Dimension of the solution space of invariant alternating forms, for
    /// the induced maps and for their transposes.
    pub solution_dim: usize,
    pub solution_dim_transposed: usize,
    /// Smallest corank over nonzero solutions, per system.
    pub min_corank: Option<usize>,
    pub min_corank_transposed: Option<usize>,
    pub expected_corank: usize,
    pub matches_expected: bool,
    /// Nonzero entries (row < col) of a form achieving the smallest corank.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_form: Option<Vec<(usize, usize)>>,
    pub enumeration_truncated: bool,
}

/// Solve `G^T Φ G = Φ` over all induced maps for alternating Φ on the
/// size-`k` state space (maps induced from size `k + 1`), and the same with
/// transposed maps; report solution-space dimensions and minimal coranks.
pub fn find_invariant_form(k: u8) -> Result<FormReport> {
    if k > 6 {
        return Err(Error::RankLimit { n: k, limit: 6 });
    }
    let maps = induced_generators(k + 1)?;
    let d = dim(k) as usize;
    let pair_count = d * (d - 1) / 2;
    let mut pair_of = vec![vec![usize::MAX; d]; d];
    let mut pairs = Vec::with_capacity(pair_count);
    for u in 0..d {
        for v in u + 1..d {
            pair_of[u][v] = pairs.len();
            pair_of[v][u] = pairs.len();
            pairs.push((u, v));
        }
    }

    let solve = |mats: &[LinMap]| -> (usize, Option<usize>, Option<Vec<(usize, usize)>>, bool) {
        let mut sys = BitMatrix::zero(mats.len() * pair_count, pair_count);
        for (mi, g) in mats.iter().enumerate() {
            for (row_at, &(u, v)) in pairs.iter().enumerate() {
                let row = mi * pair_count + row_at;
                // (G^T Φ G)_{uv} = Σ_{p<q} φ_pq (G_pu G_qv + G_qu G_pv)
                for (pq, &(p, q)) in pairs.iter().enumerate() {
                    let coeff = (g.rows[p] >> u & 1) & (g.rows[q] >> v & 1)
                        ^ (g.rows[q] >> u & 1) & (g.rows[p] >> v & 1);
                    if coeff == 1 {
                        let cur = sys.get(row, pq);
                        sys.set(row, pq, !cur);
                    }
                }
                // ... must equal φ_uv.
                let cur = sys.get(row, pair_of[u][v]);
                sys.set(row, pair_of[u][v], !cur);
            }
        }
        let basis = sys.nullspace();
        let sol_dim = basis.len();
        if sol_dim == 0 {
            return (0, None, None, false);
        }
        let words = pair_count.div_ceil(64);
        let mut combos: Vec<Vec<u64>> = Vec::new();
        let truncated = sol_dim > 16;
        if truncated {
            // Too many solutions to sweep: try singles and pairs.
            for a in 0..sol_dim {
                combos.push(basis[a].clone());
                for b in a + 1..sol_dim {
                    let mut v = basis[a].clone();
                    for w in 0..words {
                        v[w] ^= basis[b][w];
                    }
                    combos.push(v);
                }
            }
        } else {
            for c in 1u32..1 << sol_dim {
                let mut v = vec![0u64; words];
                for (b, base) in basis.iter().enumerate() {
                    if c >> b & 1 == 1 {
                        for w in 0..words {
                            v[w] ^= base[w];
                        }
                    }
                }
                combos.push(v);
            }
        }
        let mut best: Option<(usize, Vec<(usize, usize)>)> = None;
        for v in combos {
            let mut phi = BitMatrix::zero(d, d);
            let mut entries = Vec::new();
            for (pq, &(p, q)) in pairs.iter().enumerate() {
                if v[pq / 64] >> (pq % 64) & 1 == 1 {
                    phi.set(p, q, true);
                    phi.set(q, p, true);
                    entries.push((p, q));
                }
            }
            if entries.is_empty() {
                continue;
            }
            let corank = d - phi.reduce();
            if best.as_ref().map_or(true, |(c, _)| corank < *c) {
                best = Some((corank, entries));
            }
        }
        let (corank, entries) = best.expect("nonzero solution space was enumerated");
        (sol_dim, Some(corank), Some(entries), truncated)
    };

    let (solution_dim, min_corank, best_form, trunc_a) = solve(&maps);
    let transposed: Vec<LinMap> = maps.iter().map(|m| m.transpose()).collect();
    let (solution_dim_transposed, min_corank_transposed, best_t, trunc_b) = solve(&transposed);
    let expected_corank = (k / 2) as usize;
    let best = match (min_corank, min_corank_transposed) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let pick = match (min_corank, min_corank_transposed) {
        (Some(a), Some(b)) if b < a => best_t,
        (None, Some(_)) => best_t,
        _ => best_form,
    };
    Ok(FormReport {
        k,
        space_dim: d,
        solution_dim,
        solution_dim_transposed,
        min_corank,
        min_corank_transposed,
        expected_corank,
        matches_expected: best == Some(expected_corank),
        best_form: pick,
        enumeration_truncated: trunc_a || trunc_b,
    })
}

/// The region-flip generators of a wiring diagram, one per elementary
/// region: state bits are word positions, the trigger bits are the region's
/// two horizontal crossings, the mask is its full node set.
pub fn general_action(word: &ReducedWord) -> Vec<FlipGen> {
    crate::wiring::elementary_regions(word.letters())
        .iter()
        .map(|r| {
            let mask = r.nodes.iter().fold(0u32, |m, &p| m | 1 << p);
            FlipGen { mask, t1: r.span.0 as u8, t2: r.span.1 as u8 }
        })
        .collect()
}

/// Orbit census of the region-flip action for the diagram of `word`.
pub fn general_orbits_of_word(word: &ReducedWord, opts: &OrbitOptions) -> Result<OrbitReport> {
    orbits(word.len() as u32, &general_action(word), opts)
}

/// Orbit census of the region-flip action of an arrangement realizing `w`.
pub fn general_orbits(w: &Permutation, opts: &OrbitOptions) -> Result<OrbitReport> {
    general_orbits_of_word(&w.reduced_word(), opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangular_indexing_is_bijective() {
        for k in 1..=7u8 {
            let mut seen = vec![false; dim(k) as usize];
            for i in 1..=k {
                for j in i..=k {
                    let t = tri_index(k, i, j) as usize;
                    assert!(!seen[t]);
                    seen[t] = true;
                }
            }
            assert!(seen.iter().all(|&b| b));
        }
    }

    #[test]
    fn generator_matches_swap_formula() {
        // Flip-when-traces-differ equals the explicit corner swap
        // (a,b,c,d) -> (d, b+a+d, c+a+d, a) on the four minor entries.
        let k = 4;
        let (i, j) = (1u8, 2u8);
        let g = generator(k, i, j).unwrap();
        let at = |i, j| tri_index(k, i, j);
        for s in 0..1u32 << dim(k) {
            let out = g.apply(s);
            let bit = |s: u32, t: u32| s >> t & 1;
            let (a, b) = (bit(s, at(i, j)), bit(s, at(i, j + 1)));
            let (c, d) = (bit(s, at(i + 1, j)), bit(s, at(i + 1, j + 1)));
            assert_eq!(bit(out, at(i, j)), d);
            assert_eq!(bit(out, at(i, j + 1)), b ^ a ^ d);
            assert_eq!(bit(out, at(i + 1, j)), c ^ a ^ d);
            assert_eq!(bit(out, at(i + 1, j + 1)), a);
            assert_eq!(out & !g.mask, s & !g.mask);
        }
    }

    #[test]
    fn generators_are_involutions() {
        for k in 2..=5u8 {
            for g in generators(k) {
                for s in [0u32, 1, 7, 1 << (dim(k) - 1), (1 << dim(k)) - 1] {
                    assert_eq!(g.apply(g.apply(s)), s);
                }
                let m = g.to_linmap(dim(k) as usize);
                assert!(m.compose(&m).is_identity());
                for s in 0..1u32 << dim(k).min(10) {
                    assert_eq!(m.apply(s as u64) as u32, g.apply(s));
                }
            }
        }
    }

    #[test]
    fn small_orbit_counts() {
        let opts = OrbitOptions { collect_representatives: true, ..Default::default() };
        let r2 = count_orbits(2, &opts).unwrap();
        assert_eq!(r2.orbit_count, 6);
        assert_eq!(r2.states, 8);
        let r3 = count_orbits(3, &opts).unwrap();
        assert_eq!(r3.orbit_count, 20);
        let uf = OrbitOptions {
            engine: OrbitEngine::UnionFind,
            collect_representatives: true,
            ..Default::default()
        };
        let r3u = count_orbits(3, &uf).unwrap();
        assert!(r3.agrees_with(&r3u));
        assert_eq!(r3.representatives.as_ref().unwrap().len(), 20);
    }

    #[test]
    fn census_respects_limits() {
        let opts = OrbitOptions { max_bits: 10, ..Default::default() };
        assert!(matches!(
            count_orbits(5, &opts),
            Err(Error::StateSpaceLimit { bits: 15, limit: 10 })
        ));
        let tiny = OrbitOptions { memory_cap: 16, ..Default::default() };
        assert!(matches!(count_orbits(3, &tiny), Err(Error::MemoryCap { .. })));
    }

    #[test]
    fn predicted_histograms_partition_the_space() {
        for k in 5..=8u8 {
            let pred = predicted_histogram(k).unwrap();
            let total: u64 = pred.iter().map(|&(l, c)| l * c).sum();
            assert_eq!(total, 1u64 << dim(k));
        }
        assert!(predicted_histogram(4).is_none());
        assert_eq!(
            predicted_histogram(5).unwrap(),
            vec![(1, 32), (480, 8), (512, 48), (540, 8)]
        );
    }

    #[test]
    fn induced_maps_intertwine_small_sizes() {
        for k in 2..=5u8 {
            let report = induced_action(k).unwrap();
            assert!(report.passed(), "{:?}", report.violations);
        }
    }

    #[test]
    fn trivial_general_actions() {
        let opts = OrbitOptions::default();
        let id = Permutation::identity(4);
        assert_eq!(general_orbits(&id, &opts).unwrap().orbit_count, 1);
        let swaps = Permutation::from_one_line(vec![2, 1, 4, 3]).unwrap();
        let r = general_orbits(&swaps, &opts).unwrap();
        assert_eq!(r.orbit_count, 4);
        assert_eq!(r.histogram, vec![HistogramBucket { length: 1, count: 4 }]);
    }
}
