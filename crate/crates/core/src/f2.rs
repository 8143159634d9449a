//! Small dense linear algebra over F_2: row-reduction for rank/span
//! questions and square matrices used as linear maps on bit-packed states.

/// Dense F_2 matrix with rows packed into `u64` words.
#[derive(Clone, Debug)]
pub struct BitMatrix {
    pub rows: usize,
    pub cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if v {
            *w |= 1u64 << (c % 64);
        } else {
            *w &= !(1u64 << (c % 64));
        }
    }

    pub fn push_row_bits(&mut self, bits: &[u64]) {
        assert_eq!(bits.len(), self.words);
        self.data.extend_from_slice(bits);
        self.rows += 1;
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn xor_rows(&mut self, target: usize, source: usize) {
        let (t, s) = (target * self.words, source * self.words);
        for k in 0..self.words {
            let v = self.data[s + k];
            self.data[t + k] ^= v;
        }
    }

    /// Gaussian elimination in place; returns the rank and leaves the matrix
    /// in row echelon form with pivot rows first.
    pub fn reduce(&mut self) -> usize {
        let mut rank = 0;
        for c in 0..self.cols {
            let mut pivot = None;
            for r in rank..self.rows {
                if self.get(r, c) {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            self.data.swap_chunks(rank * self.words, p * self.words, self.words);
            for r in 0..self.rows {
                if r != rank && self.get(r, c) {
                    self.xor_rows(r, rank);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce()
    }

    /// Basis of the right nullspace, each vector packed into `u64` words over
    /// `cols` bits.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        m.reduce();
        // Locate pivot columns.
        let mut pivot_col_of_row = Vec::new();
        let mut is_pivot = vec![false; m.cols];
        let mut r = 0;
        for c in 0..m.cols {
            if r < m.rows && m.get(r, c) {
                pivot_col_of_row.push(c);
                is_pivot[c] = true;
                r += 1;
            }
        }
        let out_words = m.cols.div_ceil(64);
        let mut basis = Vec::new();
        for free in 0..m.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![0u64; out_words];
            v[free / 64] |= 1 << (free % 64);
            for (row, &pc) in pivot_col_of_row.iter().enumerate() {
                if m.get(row, free) {
                    v[pc / 64] ^= 1 << (pc % 64);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// One solution `x` of `self * x = rhs`, if the system is consistent.
    pub fn solve(&self, rhs: &[bool]) -> Option<Vec<bool>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = BitMatrix::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for w in 0..self.words {
                let bits = self.row(r)[w];
                let mut b = bits;
                while b != 0 {
                    let c = w * 64 + b.trailing_zeros() as usize;
                    if c < self.cols {
                        aug.set(r, c, true);
                    }
                    b &= b - 1;
                }
            }
            aug.set(r, self.cols, rhs[r]);
        }
        aug.reduce();
        let mut x = vec![false; self.cols];
        for r in 0..aug.rows {
            let mut lead = None;
            for c in 0..self.cols {
                if aug.get(r, c) {
                    lead = Some(c);
                    break;
                }
            }
            match lead {
                Some(c) => x[c] = aug.get(r, self.cols),
                // Zero row with nonzero right-hand side: inconsistent.
                None if aug.get(r, self.cols) => return None,
                None => {}
            }
        }
        Some(x)
    }
}

trait SwapChunks {
    fn swap_chunks(&mut self, a: usize, b: usize, len: usize);
}

impl SwapChunks for Vec<u64> {
    fn swap_chunks(&mut self, a: usize, b: usize, len: usize) {
        if a == b {
            return;
        }
        for k in 0..len {
            self.swap(a + k, b + k);
        }
    }
}

/// Square F_2 matrix acting on bit-packed column vectors of dimension at most
/// 64; `rows[r]` holds row `r`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinMap {
    pub dim: usize,
    pub rows: Vec<u64>,
}

impl LinMap {
    pub fn identity(dim: usize) -> Self {
        assert!(dim <= 64);
        LinMap { dim, rows: (0..dim).map(|r| 1u64 << r).collect() }
    }

    pub fn apply(&self, x: u64) -> u64 {
        let mut y = 0u64;
        for (r, &row) in self.rows.iter().enumerate() {
            y |= (((row & x).count_ones() as u64) & 1) << r;
        }
        y
    }

    /// Matrix product: `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &LinMap) -> LinMap {
        assert_eq!(self.dim, other.dim);
        // Row r of the product has bit c iff row r of self, viewed as a
        // functional, evaluates to 1 on column c of other.
        let mut cols_t: Vec<u64> = vec![0; self.dim];
        for (r, &row) in other.rows.iter().enumerate() {
            let mut b = row;
            while b != 0 {
                let c = b.trailing_zeros() as usize;
                cols_t[c] |= 1u64 << r;
                b &= b - 1;
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                let mut out = 0u64;
                for (c, &col) in cols_t.iter().enumerate() {
                    out |= (((row & col).count_ones() as u64) & 1) << c;
                }
                out
            })
            .collect();
        LinMap { dim: self.dim, rows }
    }

    pub fn transpose(&self) -> LinMap {
        let mut rows = vec![0u64; self.dim];
        for (r, &row) in self.rows.iter().enumerate() {
            let mut b = row;
            while b != 0 {
                let c = b.trailing_zeros() as usize;
                rows[c] |= 1u64 << r;
                b &= b - 1;
            }
        }
        LinMap { dim: self.dim, rows }
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(r, &row)| row == 1u64 << r)
    }

    pub fn rank(&self) -> usize {
        let mut m = BitMatrix::zero(self.dim, self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                if self.rows[r] >> c & 1 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        m.reduce()
    }
}
