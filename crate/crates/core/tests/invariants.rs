//! Randomized invariants: things that must hold for *every* word, move
//! sequence, or generator set, checked on proptest-driven samples rather
//! than exhaustively.

use bigcell::fliporbits::{orbits, FlipGen, OrbitEngine, OrbitOptions};
use bigcell::lusztig::{rational, three_move_params};
use bigcell::signs::EdgeAction;
use bigcell::wiring::{crossing_pairs, elementary_regions, v0_word};
use bigcell::words::{apply_move, canonical_form, is_reduced, MoveKind, Permutation, ReducedWord};
use proptest::prelude::*;

/// Drive a word through a pseudo-random sequence of legal moves.  Each step
/// picks among the legal (position, kind) pairs of the current word, so the
/// walk never stalls while any move is available.
fn wander(n: u8, steps: &[(u16, bool)]) -> Vec<ReducedWord> {
    let mut word = v0_word(n);
    let mut trail = vec![word.clone()];
    for &(pick, prefer_braid) in steps {
        let letters = word.letters();
        let mut moves = Vec::new();
        for pos in 0..letters.len().saturating_sub(1) {
            if letters[pos].abs_diff(letters[pos + 1]) >= 2 {
                moves.push((pos, MoveKind::Commutation));
            }
        }
        let commutations = moves.len();
        for pos in 0..letters.len().saturating_sub(2) {
            if letters[pos] == letters[pos + 2] && letters[pos].abs_diff(letters[pos + 1]) == 1 {
                moves.push((pos, MoveKind::Braid));
            }
        }
        if moves.is_empty() {
            break;
        }
        // Bias toward braid moves half the time so walks change commutation
        // class often enough to be interesting.
        let chosen = if prefer_braid && moves.len() > commutations {
            commutations + (pick as usize) % (moves.len() - commutations)
        } else {
            (pick as usize) % moves.len()
        };
        let (pos, kind) = moves[chosen];
        word = apply_move(&word, pos, kind).expect("legal move");
        trail.push(word.clone());
    }
    trail
}

fn sorted_pairs(n: u8, letters: &[u8]) -> Vec<(u8, u8)> {
    let mut pairs = crossing_pairs(n, letters);
    pairs.sort_unstable();
    pairs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Moves preserve the permutation, reducedness, and the crossing-pair
    /// set; commutations additionally preserve the canonical form while
    /// braid moves land in a class with the same multiset of letters.
    #[test]
    fn moves_preserve_word_invariants(
        n in 3u8..=5,
        steps in prop::collection::vec((any::<u16>(), any::<bool>()), 1..24),
    ) {
        let trail = wander(n, &steps);
        let first = &trail[0];
        let target = Permutation::longest_element(n);
        let pairs = sorted_pairs(n, first.letters());
        for word in &trail {
            prop_assert_eq!(&word.permutation(), &target);
            prop_assert!(is_reduced(n, word.letters()).unwrap());
            prop_assert_eq!(sorted_pairs(n, word.letters()), pairs.clone());
        }
        for pair in trail.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let same_class = canonical_form(a.letters()) == canonical_form(b.letters());
            let mut ma = a.letters().to_vec();
            let mut mb = b.letters().to_vec();
            ma.sort_unstable();
            mb.sort_unstable();
            // A braid move trades a letter j for a neighbour value, so the
            // letter multisets agree iff the step was a commutation.
            if same_class {
                prop_assert_eq!(&ma, &mb);
            } else {
                prop_assert_ne!(&ma, &mb);
                let sum = |v: &[u8]| v.iter().map(|&c| c as i64).sum::<i64>();
                prop_assert_eq!((sum(&ma) - sum(&mb)).abs(), 1);
            }
        }
    }

    /// The canonical form is idempotent and constant along commutation
    /// moves.
    #[test]
    fn canonical_form_is_a_class_invariant(
        n in 3u8..=5,
        steps in prop::collection::vec((any::<u16>(), Just(false)), 1..24),
    ) {
        let trail = wander(n, &steps);
        for word in &trail {
            let form = canonical_form(word.letters());
            prop_assert_eq!(canonical_form(&form), form.clone());
        }
        // All steps here are commutations (prefer_braid always false picks
        // uniformly, so braids can still occur); restrict to adjacent pairs
        // within a class.
        for pair in trail.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let mut ma = a.letters().to_vec();
            let mut mb = b.letters().to_vec();
            ma.sort_unstable();
            mb.sort_unstable();
            if ma == mb {
                // Commutation step: same class, same form.
                prop_assert_eq!(canonical_form(a.letters()), canonical_form(b.letters()));
            }
        }
    }

    /// Every elementary region of every reachable word has at least three
    /// nodes, and its span endpoints sit at the region's level.
    #[test]
    fn elementary_regions_are_well_formed(
        n in 3u8..=5,
        steps in prop::collection::vec((any::<u16>(), any::<bool>()), 0..20),
    ) {
        let trail = wander(n, &steps);
        for word in &trail {
            let letters = word.letters();
            for region in elementary_regions(letters) {
                prop_assert!(region.nodes.len() >= 3);
                let (lo, hi) = region.span;
                prop_assert!(lo < hi);
                prop_assert_eq!(letters[lo], region.level);
                prop_assert_eq!(letters[hi], region.level);
                prop_assert_eq!(*region.nodes.first().unwrap(), lo);
                prop_assert_eq!(*region.nodes.last().unwrap(), hi);
            }
        }
    }

    /// Both engines, and the parallel scan, produce identical reports on
    /// arbitrary involutive trigger-gated flip sets.
    #[test]
    fn engines_agree_on_random_actions(
        bits in 4u32..=10,
        raw in prop::collection::vec((any::<u32>(), any::<u8>(), any::<u8>()), 1..7),
    ) {
        let gens: Vec<FlipGen> = raw
            .iter()
            .map(|&(mask, t1, t2)| {
                let t1 = t1 % bits as u8;
                let mut t2 = t2 % bits as u8;
                if t2 == t1 {
                    t2 = (t2 + 1) % bits as u8;
                }
                // Keep the involution property: flipping must not disturb
                // the trigger comparison, so strip trigger bits unless both
                // are set (flipping both preserves inequality too, but the
                // generator builder never does that; stay with the simple
                // shape).
                FlipGen { mask: mask & !(1 << t1) & !(1 << t2) & ((1u64 << bits) as u32).wrapping_sub(1), t1, t2 }
            })
            .collect();
        for g in &gens {
            for s in [0u32, 1, (1 << bits) - 1, 0b1010 & ((1 << bits) - 1)] {
                prop_assert_eq!(g.apply(g.apply(s)), s);
            }
        }
        let mk = |engine, threads| OrbitOptions {
            engine,
            threads,
            collect_representatives: true,
            ..OrbitOptions::default()
        };
        let uf = orbits(bits, &gens, &mk(OrbitEngine::UnionFind, 1)).unwrap();
        let seq = orbits(bits, &gens, &mk(OrbitEngine::BfsScan, 1)).unwrap();
        let pool = orbits(bits, &gens, &mk(OrbitEngine::BfsScan, 2)).unwrap();
        prop_assert!(uf.agrees_with(&seq));
        prop_assert!(seq.agrees_with(&pool));
        prop_assert_eq!(seq.representatives.as_ref(), pool.representatives.as_ref());
        let total: u64 = uf.histogram.iter().map(|b| b.length * b.count).sum();
        prop_assert_eq!(total, 1u64 << bits);
    }

    /// Canonical sign lifts are involutions, and the twin (when defined) is
    /// too.
    #[test]
    fn sign_lifts_are_involutive(
        wires in (1u8..=4, 1u8..=4, 1u8..=4),
        kappa in any::<u32>(),
    ) {
        let (a, b, c) = wires;
        let mut ws = [a, b, c];
        ws.sort_unstable();
        prop_assume!(ws[0] < ws[1] && ws[1] < ws[2]);
        let n = 5;
        let act = EdgeAction::new(n, ws);
        let kappa = kappa & ((1u32 << bigcell::signs::sign_bits(n)) - 1);
        let once = act.canonical(kappa);
        prop_assert_eq!(act.canonical(once), kappa);
        if let Some(tw) = act.twin(kappa) {
            let back = act.twin(tw).expect("twin stays branching");
            prop_assert_eq!(back, kappa);
        }
    }

    /// The braid-move parameter transform is a self-inverse rational map
    /// wherever it is defined.
    #[test]
    fn braid_parameters_invert_themselves(
        nums in (1i64..=9, 1i64..=9, 1i64..=9),
        dens in (1i64..=4, 1i64..=4, 1i64..=4),
        signs in (any::<bool>(), any::<bool>(), any::<bool>()),
    ) {
        let s = |flag: bool| if flag { -1 } else { 1 };
        let a = rational(s(signs.0) * nums.0, dens.0);
        let b = rational(s(signs.1) * nums.1, dens.1);
        let c = rational(s(signs.2) * nums.2, dens.2);
        match three_move_params(&a, &b, &c) {
            Err(_) => {
                // Singular exactly when a + c = 0.
                prop_assert_eq!(&a + &c, rational(0, 1));
            }
            Ok((x, y, z)) => {
                let (ra, rb, rc) = three_move_params(&x, &y, &z).expect("image is regular");
                prop_assert_eq!(ra, a);
                prop_assert_eq!(rb, b);
                prop_assert_eq!(rc, c);
            }
        }
    }
}
