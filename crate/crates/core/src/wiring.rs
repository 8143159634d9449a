//! Wiring diagrams of reduced words: crossings, the elementary bounded
//! regions between consecutive same-letter crossings, and how regions
//! correspond across a long braid move.

use std::collections::HashMap;

use serde::Serialize;

use crate::words::ReducedWord;
use crate::{Error, Result};

/// One crossing of a wiring diagram.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Crossing {
    /// 0-based step in the word.
    pub position: usize,
    /// The two wires exchanged, ascending.
    pub wires: (u8, u8),
    /// The letter performing the exchange (lower of the two tracks).
    pub level: u8,
}

#[derive(Clone, Debug, Serialize)]
pub struct WiringDiagram {
    pub n: u8,
    pub letters: Vec<u8>,
    pub crossings: Vec<Crossing>,
}

pub fn diagram_of(word: &ReducedWord) -> WiringDiagram {
    let crossings = crossing_pairs(word.n(), word.letters())
        .into_iter()
        .enumerate()
        .map(|(position, wires)| Crossing { position, wires, level: word.letters()[position] })
        .collect();
    WiringDiagram { n: word.n(), letters: word.letters().to_vec(), crossings }
}

/// Wire pair exchanged at each step.  Wires start on their own tracks and a
/// letter `j` exchanges the occupants of tracks `j` and `j + 1`.
pub fn crossing_pairs(n: u8, letters: &[u8]) -> Vec<(u8, u8)> {
    let mut line: Vec<u8> = (1..=n).collect();
    let mut pairs = Vec::with_capacity(letters.len());
    for &j in letters {
        let (lo, hi) = (j as usize - 1, j as usize);
        let (u, v) = (line[lo], line[hi]);
        pairs.push((u.min(v), u.max(v)));
        line.swap(lo, hi);
    }
    pairs
}

/// The staircase word `(1..n-1)(1..n-2)...(1)`, whose diagram crosses the
/// wire pair `{r, r+g}` in ascending run `r` at level `g`.
pub fn v0_word(n: u8) -> ReducedWord {
    let mut letters = Vec::new();
    for top in (1..n).rev() {
        letters.extend(1..=top);
    }
    ReducedWord::new(n, letters).expect("staircase word is reduced")
}

/// A bounded region of the diagram: the strip at one level between two
/// consecutive occurrences of the same letter, together with every boundary
/// crossing.  Its first and last nodes (the span endpoints) are the two
/// crossings where the bounding wires run horizontally into the region.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ElementaryRegion {
    pub level: u8,
    /// Word positions of the bounding crossings (left, right).
    pub span: (usize, usize),
    /// Word positions of all boundary crossings, ascending: the endpoints
    /// plus every crossing one level up or down strictly inside the span.
    pub nodes: Vec<usize>,
}

/// All bounded regions, ordered by right endpoint.  A reduced word yields
/// `len - #distinct letters` of them, each with at least three nodes.
pub fn elementary_regions(letters: &[u8]) -> Vec<ElementaryRegion> {
    let mut last_at: HashMap<u8, usize> = HashMap::new();
    let mut regions = Vec::new();
    for (q, &g) in letters.iter().enumerate() {
        if let Some(&p) = last_at.get(&g) {
            let nodes = (p..=q)
                .filter(|&r| r == p || r == q || letters[r].abs_diff(g) == 1)
                .collect();
            regions.push(ElementaryRegion { level: g, span: (p, q), nodes });
        }
        last_at.insert(g, q);
    }
    regions
}

/// Region correspondence across one long braid move, with the triangle
/// between the window's outer crossings identified on both sides.
#[derive(Clone, Debug)]
pub struct BraidWindow {
    /// The word after the move.
    pub v_letters: Vec<u8>,
    /// Regions of the source word, in `elementary_regions` order.
    pub regions_u: Vec<ElementaryRegion>,
    /// Regions of `v_letters`, in `elementary_regions` order.
    pub regions_v: Vec<ElementaryRegion>,
    /// `region_map[i]` is the index in `regions_v` matching `regions_u[i]`.
    pub region_map: Vec<usize>,
    /// Index of the window triangle in `regions_u` / `regions_v`.
    pub core_u: usize,
    pub core_v: usize,
}

/// Build the region correspondence for the braid window at `pos`.  A region
/// keeps its level; only spans touching the window shift: at the outer
/// level, a span ending at the window start slides one step right, one
/// starting at the window end slides one step left, and symmetrically at the
/// middle level.  The window triangle swaps levels with its mirror.
pub fn braid_window_map(letters: &[u8], pos: usize) -> Result<BraidWindow> {
    if pos + 3 > letters.len() {
        return Err(Error::PositionOutOfBounds { pos, len: letters.len() });
    }
    let a = letters[pos];
    let b = letters[pos + 1];
    if letters[pos + 2] != a || a.abs_diff(b) != 1 {
        return Err(Error::MovePatternMismatch { kind: "braid", pos });
    }
    let mut v_letters = letters.to_vec();
    v_letters[pos] = b;
    v_letters[pos + 1] = a;
    v_letters[pos + 2] = b;
    let regions_u = elementary_regions(letters);
    let regions_v = elementary_regions(&v_letters);
    let mut v_index: HashMap<(u8, (usize, usize)), usize> = HashMap::new();
    for (i, r) in regions_v.iter().enumerate() {
        v_index.insert((r.level, r.span), i);
    }
    let mut region_map = Vec::with_capacity(regions_u.len());
    let mut core_u = usize::MAX;
    for (i, r) in regions_u.iter().enumerate() {
        let (l, rgt) = r.span;
        let target = if r.level == a {
            if (l, rgt) == (pos, pos + 2) {
                core_u = i;
                (b, (pos, pos + 2))
            } else if rgt == pos {
                (a, (l, pos + 1))
            } else if l == pos + 2 {
                (a, (pos + 1, rgt))
            } else {
                (a, (l, rgt))
            }
        } else if r.level == b {
            if rgt == pos + 1 {
                (b, (l, pos))
            } else if l == pos + 1 {
                (b, (pos + 2, rgt))
            } else {
                (b, (l, rgt))
            }
        } else {
            (r.level, (l, rgt))
        };
        let j = *v_index
            .get(&target)
            .expect("braid move must carry each region to a region");
        region_map.push(j);
    }
    assert!(core_u != usize::MAX, "braid window always bounds a triangle");
    let core_v = region_map[core_u];
    debug_assert_eq!(regions_u.len(), regions_v.len());
    Ok(BraidWindow { v_letters, regions_u, regions_v, region_map, core_u, core_v })
}

/// An arrangement realizing an arbitrary relative position `w`: wires cross
/// exactly at the inversions of `w`.  Realized as the diagram of one reduced
/// word of `w` (the descent-sorting word); consumers only use the crossing
/// labels and the region structure, which carry over to any realization.
#[derive(Clone, Debug)]
pub struct AffineArrangement {
    pub w: crate::words::Permutation,
    pub word: ReducedWord,
    /// Crossing wire pairs, in word order; exactly the inversions of `w`.
    pub points: Vec<(u8, u8)>,
    pub regions: Vec<ElementaryRegion>,
}

pub fn affine_arrangement(w: &crate::words::Permutation) -> AffineArrangement {
    let word = w.reduced_word();
    let points = crossing_pairs(word.n(), word.letters());
    let regions = elementary_regions(word.letters());
    AffineArrangement { w: w.clone(), word, points, regions }
}

/// Region with its boundary crossings spelled out as wire pairs.
#[derive(Clone, Debug, Serialize)]
pub struct RegionDump {
    pub level: u8,
    pub span: (usize, usize),
    pub node_positions: Vec<usize>,
    pub nodes: Vec<(u8, u8)>,
    /// Labels of the leftmost and rightmost boundary crossings.
    pub horizontal: [(u8, u8); 2],
}

/// Everything about one diagram in serializable form.
#[derive(Clone, Debug, Serialize)]
pub struct DiagramDump {
    pub n: u8,
    pub word: Vec<u8>,
    pub crossings: Vec<Crossing>,
    pub regions: Vec<RegionDump>,
}

pub fn dump_diagram(word: &ReducedWord) -> DiagramDump {
    let pairs = crossing_pairs(word.n(), word.letters());
    let regions = elementary_regions(word.letters())
        .into_iter()
        .map(|r| RegionDump {
            level: r.level,
            span: r.span,
            nodes: r.nodes.iter().map(|&p| pairs[p]).collect(),
            horizontal: [pairs[r.span.0], pairs[r.span.1]],
            node_positions: r.nodes,
        })
        .collect();
    DiagramDump {
        n: word.n(),
        word: word.letters().to_vec(),
        crossings: diagram_of(word).crossings,
        regions,
    }
}
