//! Exact rational parametrization of unipotent upper-triangular matrices by
//! reduced words, and how the parameters transform under word moves.
//!
//! A reduced word `(i_1, ..., i_N)` and nonzero parameters `(t_1, ..., t_N)`
//! multiply out to `x_{i_1}(t_1) ... x_{i_N}(t_N)` with
//! `x_i(t) = I + t E_{i,i+1}`.  Commutation moves swap adjacent parameters;
//! a braid move rewrites `(a, b, c)` into `(bc/s, s, ab/s)` with
//! `s = a + c`, which breaks down exactly when `s = 0`.  The product matrix
//! is invariant, its corner minors are single monomials in the parameters,
//! and the branching of the sign-transition table is realized by the sign
//! of `s`.  Everything here is exact `BigRational` arithmetic — no floats,
//! no tolerances.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::words::{apply_move, MoveGraph, MoveKind, ReducedWord};
use crate::{CheckReport, Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// An upper unitriangular matrix with exact rational entries, stored
/// row-major with the unit diagonal included.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Unitriangular {
    n: u8,
    entries: Vec<Rational>,
}

impl Unitriangular {
    pub fn identity(n: u8) -> Unitriangular {
        let d = n as usize;
        let mut entries = vec![Rational::zero(); d * d];
        for i in 0..d {
            entries[i * d + i] = Rational::one();
        }
        Unitriangular { n, entries }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    /// Entry at row `i`, column `j`, both 1-based.
    pub fn entry(&self, i: u8, j: u8) -> &Rational {
        assert!(1 <= i && i <= self.n && 1 <= j && j <= self.n);
        &self.entries[(i as usize - 1) * self.n as usize + (j as usize - 1)]
    }
}

/// Multiply out the parametrized factors for `word`.  Every parameter must
/// be nonzero and there must be exactly one per letter.
pub fn lusztig_product(word: &ReducedWord, params: &[Rational]) -> Result<Unitriangular> {
    if params.len() != word.len() {
        return Err(Error::ParameterCount { expected: word.len(), got: params.len() });
    }
    if let Some(index) = params.iter().position(|t| t.is_zero()) {
        return Err(Error::ZeroParameter { index });
    }
    let n = word.n() as usize;
    let mut m = Unitriangular::identity(word.n());
    for (&letter, t) in word.letters().iter().zip(params) {
        // Right-multiplying by I + t E_{i,i+1} adds t * column i to
        // column i + 1 (1-based).
        let c = letter as usize - 1;
        for r in 0..n {
            let add = &m.entries[r * n + c] * t;
            m.entries[r * n + c + 1] += add;
        }
    }
    Ok(m)
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let k = m.len();
    if k == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for p in 0..k {
        if m[p][p].is_zero() {
            match (p + 1..k).find(|&r| !m[r][p].is_zero()) {
                Some(r) => {
                    m.swap(p, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        let pivot_row = m[p].clone();
        for r in p + 1..k {
            for c in p + 1..k {
                let num = &pivot_row[p] * &m[r][c] - &m[r][p] * &pivot_row[c];
                m[r][c] = num / &prev; // exact by the fraction-free identity
            }
            m[r][p] = BigInt::zero();
        }
        prev = pivot_row[p].clone();
    }
    let det = m[k - 1][k - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// The minor on the first `cols.len()` rows and the given 1-based columns,
/// which must be strictly increasing.  Computed fraction-free: clear
/// denominators, run the exact-division elimination on integers, scale
/// back.
pub fn minor_d(m: &Unitriangular, cols: &[u8]) -> Result<Rational> {
    let n = m.n;
    let k = cols.len();
    let valid = !cols.is_empty()
        && k <= n as usize
        && cols.windows(2).all(|w| w[0] < w[1])
        && cols.iter().all(|&c| 1 <= c && c <= n);
    if !valid {
        return Err(Error::BadColumnSet { n: n as usize });
    }
    let mut lcm = BigInt::one();
    for r in 1..=k as u8 {
        for &c in cols {
            lcm = lcm.lcm(m.entry(r, c).denom());
        }
    }
    let scaled: Vec<Vec<BigInt>> = (1..=k as u8)
        .map(|r| {
            cols.iter()
                .map(|&c| {
                    let e = m.entry(r, c);
                    e.numer() * (&lcm / e.denom())
                })
                .collect()
        })
        .collect();
    let det = bareiss_det(scaled);
    let mut scale = BigInt::one();
    for _ in 0..k {
        scale *= &lcm;
    }
    Ok(Rational::new(det, scale))
}

/// The `k`-th corner minor: first `k` rows against the last `k` columns.
pub fn corner_d(m: &Unitriangular, k: u8) -> Result<Rational> {
    if k == 0 || k > m.n {
        return Err(Error::BadColumnSet { n: m.n as usize });
    }
    let cols: Vec<u8> = (m.n - k + 1..=m.n).collect();
    minor_d(m, &cols)
}

/// Whether all proper corner minors are nonzero.
pub fn in_big_cell(m: &Unitriangular) -> bool {
    (1..m.n).all(|k| !corner_d(m, k).expect("k is in range").is_zero())
}

/// Parameter transform across a commutation move: the two factors commute,
/// so their parameters travel with the letters.
pub fn two_move_params(t1: &Rational, t2: &Rational) -> (Rational, Rational) {
    (t2.clone(), t1.clone())
}

/// Parameter transform across a braid move: `(a, b, c)` becomes
/// `(bc/s, s, ab/s)` with `s = a + c`.  Fails exactly when `s = 0`; the
/// transform is its own inverse elsewhere.
pub fn three_move_params(
    a: &Rational,
    b: &Rational,
    c: &Rational,
) -> Result<(Rational, Rational, Rational)> {
    let s = a + c;
    if s.is_zero() {
        return Err(Error::SingularMove);
    }
    Ok((b * c / &s, s.clone(), a * b / &s))
}

/// Apply a word move and carry the parameters along.
pub fn apply_move_params(
    word: &ReducedWord,
    pos: usize,
    kind: MoveKind,
    params: &[Rational],
) -> Result<(ReducedWord, Vec<Rational>)> {
    if params.len() != word.len() {
        return Err(Error::ParameterCount { expected: word.len(), got: params.len() });
    }
    let moved = apply_move(word, pos, kind)?;
    let mut p = params.to_vec();
    match kind {
        MoveKind::Commutation => p.swap(pos, pos + 1),
        MoveKind::Braid => {
            let (x, y, z) = three_move_params(&p[pos], &p[pos + 1], &p[pos + 2])?;
            p[pos] = x;
            p[pos + 1] = y;
            p[pos + 2] = z;
        }
    }
    Ok((moved, p))
}

fn available_moves(letters: &[u8]) -> Vec<(usize, MoveKind)> {
    let mut out = Vec::new();
    for p in 0..letters.len().saturating_sub(1) {
        if letters[p].abs_diff(letters[p + 1]) >= 2 {
            out.push((p, MoveKind::Commutation));
        }
    }
    for p in 0..letters.len().saturating_sub(2) {
        if letters[p] == letters[p + 2] && letters[p].abs_diff(letters[p + 1]) == 1 {
            out.push((p, MoveKind::Braid));
        }
    }
    out
}

fn random_param(rng: &mut ChaCha8Rng) -> Rational {
    let mut num = rng.gen_range(1..=5i64);
    if rng.gen_bool(0.5) {
        num = -num;
    }
    let den = rng.gen_range(1..=4i64);
    rational(num, den)
}

/// Seeded random-walk check that word moves leave the product matrix
/// unchanged: wander the move graph from the staircase word, transforming
/// fresh random parameters across each move and comparing exact products.
/// Braid moves that land on `s = 0` are skipped and retried.
pub fn verify_move_invariance(n: u8, trials: u64, seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new("move-invariance", n);
    let mut word = crate::words::Permutation::longest_element(n).reduced_word();
    let mut attempts = 0u64;
    while report.cases_checked < trials && attempts < trials.saturating_mul(4) + 64 {
        attempts += 1;
        let moves = available_moves(word.letters());
        if moves.is_empty() {
            break; // ranks below 3 have single-word classes
        }
        let (pos, kind) = moves[rng.gen_range(0..moves.len())];
        let params: Vec<Rational> = (0..word.len()).map(|_| random_param(&mut rng)).collect();
        match apply_move_params(&word, pos, kind, &params) {
            Ok((moved, transformed)) => {
                let before = lusztig_product(&word, &params)?;
                let after = lusztig_product(&moved, &transformed)?;
                report.cases_checked += 1;
                if before != after {
                    report.violation(format!(
                        "move {:?} at {} on {:?} changed the product",
                        kind,
                        pos,
                        word.letters()
                    ));
                }
                word = moved;
            }
            Err(Error::SingularMove) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

// --- symbolic corner minors ---------------------------------------------

/// Sparse polynomial in the word's parameters: exponent vector -> integer
/// coefficient.
type Poly = BTreeMap<Vec<u16>, BigInt>;

fn poly_const(nvars: usize, c: i64) -> Poly {
    let mut p = Poly::new();
    if c != 0 {
        p.insert(vec![0; nvars], BigInt::from(c));
    }
    p
}

fn poly_add_assign(a: &mut Poly, b: &Poly) {
    for (e, c) in b {
        let slot = a.entry(e.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            a.remove(e);
        }
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_scale_var(p: &Poly, var: usize) -> Poly {
    p.iter()
        .map(|(e, c)| {
            let mut e = e.clone();
            e[var] += 1;
            (e, c.clone())
        })
        .collect()
}

fn poly_det(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let k = m.len();
    if k == 0 {
        return poly_const(nvars, 1);
    }
    if k == 1 {
        return m[0][0].clone();
    }
    let mut det = Poly::new();
    for c in 0..k {
        if m[0][c].is_empty() {
            continue;
        }
        let sub: Vec<Vec<Poly>> = (1..k)
            .map(|r| (0..k).filter(|&cc| cc != c).map(|cc| m[r][cc].clone()).collect())
            .collect();
        let mut term = poly_mul(&m[0][c], &poly_det(&sub, nvars));
        if c % 2 == 1 {
            for coeff in term.values_mut() {
                *coeff = -coeff.clone();
            }
        }
        poly_add_assign(&mut det, &term);
    }
    det
}

/// The proper corner minors of the product for `letters`, as polynomials in
/// the parameters.
fn symbolic_corners(n: u8, letters: &[u8]) -> Vec<Poly> {
    let d = n as usize;
    let nvars = letters.len();
    let mut m: Vec<Vec<Poly>> = (0..d)
        .map(|r| (0..d).map(|c| poly_const(nvars, (r == c) as i64)).collect())
        .collect();
    for (k, &letter) in letters.iter().enumerate() {
        let c = letter as usize - 1;
        for r in 0..d {
            let add = poly_scale_var(&m[r][c], k);
            poly_add_assign(&mut m[r][c + 1], &add);
        }
    }
    (1..n)
        .map(|size| {
            let size = size as usize;
            let sub: Vec<Vec<Poly>> =
                (0..size).map(|r| (d - size..d).map(|c| m[r][c].clone()).collect()).collect();
            poly_det(&sub, nvars)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MonomialEntry {
    pub word: Vec<u8>,
    /// Parameter exponents of each proper corner minor, smallest corner
    /// first.
    pub exponents: Vec<Vec<u16>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonomialReport {
    pub n: u8,
    pub classes: u64,
    pub cases_checked: u64,
    pub entries: Vec<MonomialEntry>,
    pub violations: Vec<String>,
}

impl MonomialReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn probe_exponents(
    n: u8,
    word: &ReducedWord,
    rng: &mut ChaCha8Rng,
) -> Result<std::result::Result<Vec<Vec<u16>>, String>> {
    let len = word.len();
    let ones = vec![Rational::one(); len];
    let base = lusztig_product(word, &ones)?;
    for k in 1..n {
        if corner_d(&base, k)? != Rational::one() {
            return Ok(Err(format!(
                "corner {k} of {:?} is not 1 at the all-ones point",
                word.letters()
            )));
        }
    }
    let mut exponents: Vec<Vec<u16>> = vec![vec![0; len]; n as usize - 1];
    for var in 0..len {
        let mut params = ones.clone();
        params[var] = rational(2, 1);
        let m = lusztig_product(word, &params)?;
        for k in 1..n {
            let val = corner_d(&m, k)?;
            if !val.denom().is_one() || !val.numer().is_positive() {
                return Ok(Err(format!(
                    "corner {k} of {:?} is not a power of 2 at a 2-probe",
                    word.letters()
                )));
            }
            let tz = val.numer().trailing_zeros().unwrap_or(0);
            if BigInt::one() << (tz as usize) != *val.numer() {
                return Ok(Err(format!(
                    "corner {k} of {:?} is not a power of 2 at a 2-probe",
                    word.letters()
                )));
            }
            exponents[k as usize - 1][var] = tz as u16;
        }
    }
    // Random exact confirmation that the minors equal the recovered
    // monomials everywhere, not just on the probes.
    for _ in 0..3 {
        let params: Vec<Rational> = (0..len).map(|_| random_param(rng)).collect();
        let m = lusztig_product(word, &params)?;
        for k in 1..n {
            let mut expect = Rational::one();
            for (t, &e) in params.iter().zip(&exponents[k as usize - 1]) {
                for _ in 0..e {
                    expect *= t;
                }
            }
            if corner_d(&m, k)? != expect {
                return Ok(Err(format!(
                    "corner {k} of {:?} deviates from its recovered monomial",
                    word.letters()
                )));
            }
        }
    }
    Ok(Ok(exponents))
}

/// Check that every proper corner minor, over every commutation class of
/// the longest element, is a single monomial with coefficient 1 in the
/// word's parameters.  Fully symbolic at rank at most 5; exact seeded
/// probing beyond.  Exponents are reported, closed forms are not asserted.
pub fn check_monomiality(n: u8, seed: u64) -> Result<MonomialReport> {
    let graph = MoveGraph::build(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = MonomialReport {
        n,
        classes: graph.classes.len() as u64,
        cases_checked: 0,
        entries: Vec::new(),
        violations: Vec::new(),
    };
    for letters in &graph.classes {
        let word = ReducedWord::new(n, letters.clone())?;
        report.cases_checked += 1;
        if n <= 5 {
            let corners = symbolic_corners(n, letters);
            let mut exps = Vec::new();
            let mut ok = true;
            for (ci, poly) in corners.iter().enumerate() {
                if poly.len() != 1 || !poly.values().next().expect("one term").is_one() {
                    report.violations.push(format!(
                        "corner {} of {:?} has {} terms",
                        ci + 1,
                        letters,
                        poly.len()
                    ));
                    ok = false;
                    break;
                }
                exps.push(poly.keys().next().expect("one term").clone());
            }
            if ok {
                report.entries.push(MonomialEntry { word: letters.clone(), exponents: exps });
            }
        } else {
            match probe_exponents(n, &word, &mut rng)? {
                Ok(exps) => {
                    report.entries.push(MonomialEntry { word: letters.clone(), exponents: exps })
                }
                Err(msg) => report.violations.push(msg),
            }
        }
    }
    Ok(report)
}

/// The sign-transition table realized by explicit parameter values: for
/// equal outer signs the braid transform's target signs are forced, and
/// for opposite outer signs the sign of `s = a + c` picks the canonical or
/// twin branch — larger outer magnitude on the side matching the middle
/// sign gives the canonical target.
pub fn realize_sign_transitions() -> CheckReport {
    let mut report = CheckReport::new("sign-transitions", 3);
    let sign_of = |r: &Rational| if r.is_positive() { 1i8 } else { -1 };
    let braid_signs = |a: i64, b: i64, c: i64| -> Option<[i8; 3]> {
        match three_move_params(&rational(a, 1), &rational(b, 1), &rational(c, 1)) {
            Ok((x, y, z)) => Some([sign_of(&x), sign_of(&y), sign_of(&z)]),
            Err(_) => None,
        }
    };
    for pattern in 0..8u32 {
        let [p, q, r] = [0, 1, 2].map(|i| if pattern >> i & 1 == 1 { 1i64 } else { -1 });
        let expected = crate::signs::transition([p as i8, q as i8, r as i8]);
        if p == r {
            for (ma, mb, mc) in [(1, 1, 1), (3, 2, 1), (1, 5, 4)] {
                report.cases_checked += 1;
                match braid_signs(p * ma, q * mb, r * mc) {
                    Some(signs) if signs == expected.canonical => {}
                    other => report.violation(format!(
                        "deterministic pattern ({p},{q},{r}) x ({ma},{mb},{mc}): got {other:?}"
                    )),
                }
            }
        } else {
            // Canonical branch: s matches the middle sign.
            let (a, c) = if q == p { (2 * p, r) } else { (p, 2 * r) };
            report.cases_checked += 1;
            match braid_signs(a, q, c) {
                Some(signs) if signs == expected.results[0] => {}
                other => report.violation(format!(
                    "branching pattern ({p},{q},{r}): canonical witness gave {other:?}"
                )),
            }
            // Twin branch: s opposes the middle sign.
            let (a, c) = if q == p { (p, 2 * r) } else { (2 * p, r) };
            report.cases_checked += 1;
            match braid_signs(a, q, c) {
                Some(signs) if signs == expected.results[1] => {}
                other => report.violation(format!(
                    "branching pattern ({p},{q},{r}): twin witness gave {other:?}"
                )),
            }
        }
    }
    report
}
