//! Reduced words of permutations, their commutation classes, and the graph
//! whose vertices are classes and whose edges are long braid moves.
//!
//! Conventions: letters are 1-based (`j` swaps tracks `j` and `j+1`), words
//! act left to right on one-line notation, and a word is reduced iff its
//! length equals the inversion count of the permutation it sorts to.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::{Error, Result};

/// Permutation in one-line notation: `line[i]` is the 1-based value at
/// 1-based position `i + 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    line: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: u8) -> Self {
        Permutation { line: (1..=n).collect() }
    }

    /// The order-reversing permutation `i -> n + 1 - i`.
    pub fn longest_element(n: u8) -> Self {
        Permutation { line: (1..=n).rev().collect() }
    }

    pub fn from_one_line(line: Vec<u8>) -> Result<Self> {
        let n = line.len();
        let mut seen = vec![false; n + 1];
        for &v in &line {
            if v == 0 || v as usize > n || seen[v as usize] {
                return Err(Error::BadPermutation { n });
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { line })
    }

    pub fn n(&self) -> u8 {
        self.line.len() as u8
    }

    pub fn one_line(&self) -> &[u8] {
        &self.line
    }

    pub fn is_identity(&self) -> bool {
        self.line.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut line = vec![0u8; self.line.len()];
        for (i, &v) in self.line.iter().enumerate() {
            line[v as usize - 1] = i as u8 + 1;
        }
        Permutation { line }
    }

    pub fn inversion_count(&self) -> usize {
        count_inversions(&self.line)
    }

    /// A reduced word for this permutation: sort the one-line notation to the
    /// identity by adjacent-descent swaps and reverse the recorded positions.
    pub fn reduced_word(&self) -> ReducedWord {
        let mut line = self.line.clone();
        let mut rec = Vec::with_capacity(self.inversion_count());
        loop {
            let descent = (0..line.len().saturating_sub(1)).find(|&p| line[p] > line[p + 1]);
            let Some(p) = descent else { break };
            line.swap(p, p + 1);
            rec.push(p as u8 + 1);
        }
        rec.reverse();
        ReducedWord { n: self.n(), letters: rec }
    }
}

pub fn count_inversions(line: &[u8]) -> usize {
    let mut count = 0;
    for i in 0..line.len() {
        for j in i + 1..line.len() {
            if line[i] > line[j] {
                count += 1;
            }
        }
    }
    count
}

/// A reduced word for a permutation of `{1..n}`; construction checks both the
/// letter range and reducedness.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ReducedWord {
    n: u8,
    letters: Vec<u8>,
}

impl ReducedWord {
    pub fn new(n: u8, letters: Vec<u8>) -> Result<Self> {
        for &j in &letters {
            if j == 0 || j >= n {
                return Err(Error::LetterOutOfRange { letter: j, max: n.saturating_sub(1), n });
            }
        }
        let mut line: Vec<u8> = (1..=n).collect();
        for &j in &letters {
            line.swap(j as usize - 1, j as usize);
        }
        if count_inversions(&line) != letters.len() {
            return Err(Error::NotReduced);
        }
        Ok(ReducedWord { n, letters })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn permutation(&self) -> Permutation {
        let mut line: Vec<u8> = (1..=self.n).collect();
        for &j in &self.letters {
            line.swap(j as usize - 1, j as usize);
        }
        Permutation { line }
    }

    /// Sum of the letters; invariant under commutation moves and changed by
    /// exactly one by every long braid move.
    pub fn rank(&self) -> u64 {
        self.letters.iter().map(|&j| j as u64).sum()
    }

    /// The canonical representative of this word's commutation class.
    pub fn canonical(&self) -> ReducedWord {
        // Commutation moves preserve reducedness, so no re-validation.
        ReducedWord { n: self.n, letters: canonical_form(&self.letters) }
    }
}

/// Whether `letters` is a reduced word over `n` tracks: its length equals the
/// inversion count of the permutation it performs.
pub fn is_reduced(n: u8, letters: &[u8]) -> Result<bool> {
    for &j in letters {
        if j == 0 || j >= n {
            return Err(Error::LetterOutOfRange { letter: j, max: n.saturating_sub(1), n });
        }
    }
    let mut line: Vec<u8> = (1..=n).collect();
    for &j in letters {
        line.swap(j as usize - 1, j as usize);
    }
    Ok(count_inversions(&line) == letters.len())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MoveKind {
    /// Swap adjacent letters whose values differ by at least 2.
    Commutation,
    /// Replace `j, j', j` (with `|j - j'| = 1`) by `j', j, j'`.
    Braid,
}

/// Apply a single move at `pos` (0-based index of the leftmost letter of the
/// 2- or 3-letter window).
pub fn apply_move(word: &ReducedWord, pos: usize, kind: MoveKind) -> Result<ReducedWord> {
    let w = &word.letters;
    let width = match kind {
        MoveKind::Commutation => 2,
        MoveKind::Braid => 3,
    };
    if pos + width > w.len() {
        return Err(Error::PositionOutOfBounds { pos, len: w.len() });
    }
    let mut out = w.clone();
    match kind {
        MoveKind::Commutation => {
            if w[pos].abs_diff(w[pos + 1]) < 2 {
                return Err(Error::MovePatternMismatch { kind: "commutation", pos });
            }
            out.swap(pos, pos + 1);
        }
        MoveKind::Braid => {
            if w[pos] != w[pos + 2] || w[pos].abs_diff(w[pos + 1]) != 1 {
                return Err(Error::MovePatternMismatch { kind: "braid", pos });
            }
            out[pos] = w[pos + 1];
            out[pos + 1] = w[pos];
            out[pos + 2] = w[pos + 1];
        }
    }
    Ok(ReducedWord { n: word.n, letters: out })
}

/// Canonical representative of a commutation class: repeatedly extract the
/// block of letters that can be commuted to the front, emitting each block in
/// ascending order.  Two words get the same form iff they are connected by
/// commutation moves alone.
pub fn canonical_form(letters: &[u8]) -> Vec<u8> {
    let mut remaining = letters.to_vec();
    let mut out = Vec::with_capacity(letters.len());
    while !remaining.is_empty() {
        let mut seen = [false; 257];
        let mut block = Vec::new();
        let mut rest = Vec::new();
        for &c in &remaining {
            let ci = c as usize;
            // A letter joins the front block iff nothing streamed before it
            // in this pass blocks it (same letter or a neighbour value).
            if seen[ci] || seen[ci - 1] || seen[ci + 1] {
                rest.push(c);
            } else {
                block.push(c);
            }
            seen[ci] = true;
        }
        block.sort_unstable();
        out.extend_from_slice(&block);
        remaining = rest;
    }
    out
}

/// One long-braid site of a commutation class, presented by a member word in
/// which the three letters of the move are consecutive.
#[derive(Clone, Debug, Serialize)]
pub struct MoveEdge {
    /// Class containing `word`.
    pub a: usize,
    /// Class of the word after the move.
    pub b: usize,
    /// Member word of class `a` with the braid pattern at `pos..pos + 3`.
    pub word: Vec<u8>,
    pub pos: usize,
    /// The three wires whose crossings the move rearranges, ascending.
    pub wires: [u8; 3],
}

/// Graph of commutation classes of reduced words for the longest element,
/// with one edge per long braid move (deduplicated by unordered class pair
/// plus wire triple, so parallel edges with distinct wire triples survive).
#[derive(Clone, Debug)]
pub struct MoveGraph {
    pub n: u8,
    /// Canonical word of each class; indices are the vertex ids.
    pub classes: Vec<Vec<u8>>,
    pub edges: Vec<MoveEdge>,
    /// Edge ids incident to each vertex.
    pub adjacency: Vec<Vec<usize>>,
}

pub const MOVE_GRAPH_RANK_LIMIT: u8 = 7;

impl MoveGraph {
    /// Breadth-first closure from the sorting word of the longest element.
    /// Every vertex id is a discovery index, so the build is deterministic.
    pub fn build(n: u8) -> Result<MoveGraph> {
        if n == 0 || n > MOVE_GRAPH_RANK_LIMIT {
            return Err(Error::RankLimit { n, limit: MOVE_GRAPH_RANK_LIMIT });
        }
        let start = canonical_form(Permutation::longest_element(n).reduced_word().letters());
        let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
        index.insert(start.clone(), 0);
        let mut classes = vec![start];
        let mut edges: Vec<MoveEdge> = Vec::new();
        let mut edge_seen: HashSet<(usize, usize, [u8; 3])> = HashSet::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for (word, pos) in braid_sites(&classes[a].clone()) {
                let mut moved = word.clone();
                moved[pos] = word[pos + 1];
                moved[pos + 1] = word[pos];
                moved[pos + 2] = word[pos + 1];
                let form = canonical_form(&moved);
                let b = match index.get(&form) {
                    Some(&b) => b,
                    None => {
                        let b = classes.len();
                        index.insert(form.clone(), b);
                        classes.push(form);
                        queue.push_back(b);
                        b
                    }
                };
                let wires = site_wires(n, &word, pos);
                if edge_seen.insert((a.min(b), a.max(b), wires)) {
                    edges.push(MoveEdge { a, b, word, pos, wires });
                }
            }
        }
        let mut adjacency = vec![Vec::new(); classes.len()];
        for (i, e) in edges.iter().enumerate() {
            adjacency[e.a].push(i);
            if e.b != e.a {
                adjacency[e.b].push(i);
            }
        }
        Ok(MoveGraph { n, classes, edges, adjacency })
    }

    pub fn other_end(&self, edge: usize, v: usize) -> usize {
        let e = &self.edges[edge];
        if e.a == v {
            e.b
        } else {
            e.a
        }
    }

    /// Simple cycles with exactly `len` edges (`len >= 3`): distinct
    /// vertices, listed from the smallest vertex id, one orientation each.
    /// Cycles through parallel edges are distinct when their edge ids differ.
    pub fn simple_cycles(&self, len: usize) -> Vec<GraphCycle> {
        assert!(len >= 3, "cycle length must be at least 3");
        let mut out = Vec::new();
        let mut verts = Vec::with_capacity(len);
        let mut eids = Vec::with_capacity(len);
        for start in 0..self.classes.len() {
            verts.push(start);
            self.cycle_dfs(start, start, len, &mut verts, &mut eids, &mut out);
            verts.pop();
        }
        out
    }

    fn cycle_dfs(
        &self,
        start: usize,
        current: usize,
        len: usize,
        verts: &mut Vec<usize>,
        eids: &mut Vec<usize>,
        out: &mut Vec<GraphCycle>,
    ) {
        if verts.len() == len {
            for &e in &self.adjacency[current] {
                if self.other_end(e, current) == start && verts[1] < verts[len - 1] {
                    let mut edges = eids.clone();
                    edges.push(e);
                    out.push(GraphCycle { vertices: verts.clone(), edges });
                }
            }
            return;
        }
        for &e in &self.adjacency[current] {
            let next = self.other_end(e, current);
            if next <= start || verts.contains(&next) {
                continue;
            }
            verts.push(next);
            eids.push(e);
            self.cycle_dfs(start, next, len, verts, eids, out);
            verts.pop();
            eids.pop();
        }
    }
}

/// A simple cycle: `edges[i]` joins `vertices[i]` to `vertices[(i + 1) % len]`.
#[derive(Clone, Debug, Serialize)]
pub struct GraphCycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// All long-braid sites of a commutation class, read off the dependence order
/// of the class: positions `p < q` with `|w[p] - w[q]| <= 1` generate it, and
/// a site is a pair of equal letters whose open interval is a single position
/// carrying the neighbouring value.  Each site is returned with a member word
/// that makes its three letters consecutive.
fn braid_sites(w: &[u8]) -> Vec<(Vec<u8>, usize)> {
    let l = w.len();
    assert!(l <= 32, "word too long for bitmask site enumeration");
    let mut below = vec![0u32; l];
    for q in 0..l {
        for p in 0..q {
            if w[p].abs_diff(w[q]) <= 1 {
                below[q] |= below[p] | (1 << p);
            }
        }
    }
    let mut above = vec![0u32; l];
    for p in (0..l).rev() {
        for q in p + 1..l {
            if w[p].abs_diff(w[q]) <= 1 {
                above[p] |= above[q] | (1 << q);
            }
        }
    }
    let mut sites = Vec::new();
    for z in 0..l {
        for x in 0..z {
            if w[x] != w[z] {
                continue;
            }
            let between = above[x] & below[z];
            if between.count_ones() != 1 {
                continue;
            }
            let y = between.trailing_zeros() as usize;
            if w[y].abs_diff(w[x]) != 1 {
                continue;
            }
            // Letters strictly below z in the dependence order (other than x
            // and y) form the prefix; emitting them in index order, then
            // x, y, z, then everything else, is a linear extension, so the
            // result lies in the same class.
            let prefix = below[z] & !(1 << x) & !(1 << y);
            let mut word = Vec::with_capacity(l);
            for p in 0..l {
                if prefix >> p & 1 == 1 {
                    word.push(w[p]);
                }
            }
            let pos = word.len();
            word.extend_from_slice(&[w[x], w[y], w[z]]);
            let used = prefix | (1 << x) | (1 << y) | (1 << z);
            for p in 0..l {
                if used >> p & 1 == 0 {
                    word.push(w[p]);
                }
            }
            sites.push((word, pos));
        }
    }
    sites
}

/// The three wires meeting at a braid window: the occupants of the three
/// tracks the window touches, just before the first of its crossings.
fn site_wires(n: u8, word: &[u8], pos: usize) -> [u8; 3] {
    let mut line: Vec<u8> = (1..=n).collect();
    for &j in &word[..pos] {
        line.swap(j as usize - 1, j as usize);
    }
    let t = word[pos].min(word[pos + 1]) as usize;
    let mut wires = [line[t - 1], line[t], line[t + 1]];
    wires.sort_unstable();
    wires
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_word_sorts_back() {
        for n in 1..=6u8 {
            let w0 = Permutation::longest_element(n);
            let word = w0.reduced_word();
            assert_eq!(word.len(), (n as usize) * (n as usize - 1) / 2);
            assert_eq!(word.permutation(), w0);
        }
    }

    #[test]
    fn rejects_non_reduced() {
        assert!(matches!(ReducedWord::new(3, vec![1, 1]), Err(Error::NotReduced)));
        assert!(matches!(
            ReducedWord::new(3, vec![3]),
            Err(Error::LetterOutOfRange { .. })
        ));
    }

    #[test]
    fn braid_move_swaps_window() {
        let w = ReducedWord::new(3, vec![1, 2, 1]).unwrap();
        let moved = apply_move(&w, 0, MoveKind::Braid).unwrap();
        assert_eq!(moved.letters(), &[2, 1, 2]);
        assert_eq!(moved.permutation(), w.permutation());
        assert!(apply_move(&w, 1, MoveKind::Braid).is_err());
    }

    #[test]
    fn canonical_form_merges_commuting_letters() {
        assert_eq!(canonical_form(&[3, 1, 2]), vec![1, 3, 2]);
        assert_eq!(canonical_form(&[1, 3, 2]), vec![1, 3, 2]);
        assert_eq!(canonical_form(&[2, 1, 2]), vec![2, 1, 2]);
    }

    #[test]
    fn small_class_graphs() {
        let g3 = MoveGraph::build(3).unwrap();
        assert_eq!(g3.classes.len(), 2);
        assert_eq!(g3.edges.len(), 1);
        let g4 = MoveGraph::build(4).unwrap();
        assert_eq!(g4.classes.len(), 8);
        assert_eq!(g4.edges.len(), 8);
        assert_eq!(g4.simple_cycles(8).len(), 1);
        assert_eq!(g4.simple_cycles(4).len(), 0);
    }
}
