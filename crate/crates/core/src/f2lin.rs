//! Bit-packed linear algebra over `F_2`.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "[{s}]")
    }
}

/// Row-reduced echelon basis of a subspace of `F_2^n`, kept incrementally.
///
/// Each stored row has a distinct pivot column and is zero in every other
/// pivot column, so reduction is a single pass.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; dim],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Reduces `v` modulo the subspace to its normal form.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut out = v.clone();
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if out.get(p) {
                out.xor_assign(r);
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns `true` if the rank grew.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.first_one() else {
            return false;
        };
        for row in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&r);
            }
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    /// Non-pivot columns: the unit vectors there span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|&c| !self.is_pivot(c)).collect()
    }
}

/// An `F_2` matrix stored as bit-packed columns (each column is the image of
/// a basis vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Map {
    pub rows: usize,
    pub cols: Vec<BitVec>,
}

impl F2Map {
    pub fn zero(rows: usize, ncols: usize) -> Self {
        Self {
            rows,
            cols: vec![BitVec::zeros(rows); ncols],
        }
    }

    pub fn from_cols(rows: usize, cols: Vec<BitVec>) -> Self {
        assert!(cols.iter().all(|c| c.len() == rows));
        Self { rows, cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows);
        for i in v.ones() {
            out.xor_assign(&self.cols[i]);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &F2Map) -> F2Map {
        F2Map::from_cols(
            self.rows,
            other.cols.iter().map(|c| self.apply(c)).collect(),
        )
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.rows);
        for c in &self.cols {
            e.insert(c);
        }
        e.rank()
    }

    pub fn image(&self) -> Echelon {
        let mut e = Echelon::new(self.rows);
        for c in &self.cols {
            e.insert(c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BitVec::is_zero)
    }

    /// A basis of the kernel.
    pub fn kernel(&self) -> Vec<BitVec> {
        let n = self.ncols();
        // Reduce augmented columns [A c_i | e_i].
        let mut ech = Echelon::new(self.rows + n);
        let mut out = Vec::new();
        for i in 0..n {
            let mut aug = BitVec::zeros(self.rows + n);
            for r in self.cols[i].ones() {
                aug.set(r, true);
            }
            aug.set(self.rows + i, true);
            let red = ech.reduce(&aug);
            let top_zero = (0..self.rows).all(|r| !red.get(r));
            if top_zero {
                let mut k = BitVec::zeros(n);
                for j in 0..n {
                    if red.get(self.rows + j) {
                        k.set(j, true);
                    }
                }
                out.push(k);
            } else {
                ech.insert(&red);
            }
        }
        out
    }
}
