//! Smith normal form over `Z_(2)` and the lattice operations built on it.
//!
//! Finitely generated `Z_(2)`-modules are described by [`AbGroup`]
//! invariants. Sublattices of `Z_(2)^n` are given by generating columns.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::LocalInt2;

pub type ZMat = Matrix<LocalInt2>;
pub type ZVec = Vec<LocalInt2>;

/// Smith normal form `U * A * V = D` with certificates.
#[derive(Clone, Debug)]
pub struct SnfResult {
    /// Diagonal of `D`, length `min(rows, cols)`, each `0` or a power of 2,
    /// nondecreasing in divisibility.
    pub diagonal: Vec<LocalInt2>,
    pub rank: usize,
    pub u: ZMat,
    pub u_inv: ZMat,
    pub v: ZMat,
}

impl SnfResult {
    /// 2-adic exponents of the nonzero invariants.
    pub fn exponents(&self) -> Vec<u32> {
        self.diagonal[..self.rank]
            .iter()
            .map(|d| d.valuation().expect("nonzero invariant"))
            .collect()
    }

    /// Invariants as plain integers (`0` for zero).
    pub fn invariants(&self) -> Vec<i128> {
        self.diagonal.iter().map(|d| d.numerator()).collect()
    }

    pub fn diagonal_matrix(&self, rows: usize, cols: usize) -> ZMat {
        Matrix::diagonal(rows, cols, &self.diagonal)
    }
}

pub fn snf(a: &ZMat) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = ZMat::identity(m);
    let mut u_inv = ZMat::identity(m);
    let mut v = ZMat::identity(n);
    let mut rank = 0;

    for t in 0..m.min(n) {
        // Pivot of least valuation; ties prefer a unit part of +-1.
        let mut best: Option<(u32, bool, usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if let Some(val) = d[(i, j)].valuation() {
                    let simple =
                        d[(i, j)].denominator() == 1 && (d[(i, j)].numerator() >> val).abs() == 1;
                    let better = match best {
                        None => true,
                        Some((bv, bs, _, _)) => val < bv || (val == bv && simple && !bs),
                    };
                    if better {
                        best = Some((val, simple, i, j));
                        if val == 0 && simple {
                            break;
                        }
                    }
                }
            }
            if matches!(best, Some((0, true, _, _))) {
                break;
            }
        }
        let Some((_, _, pi, pj)) = best else { break };
        rank += 1;

        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let unit = d[(t, t)].unit_part().expect("nonzero pivot");
        if unit != LocalInt2::one() {
            let inv = unit.unit_inverse().expect("unit");
            d.scale_row(t, &inv);
            u.scale_row(t, &inv);
            u_inv.scale_col(t, &unit);
        }
        let pivot = d[(t, t)];

        for i in t + 1..m {
            if d[(i, t)].is_zero() {
                continue;
            }
            let c = -d[(i, t)].checked_div(&pivot).expect("pivot divides column");
            d.add_row_multiple(i, t, &c);
            u.add_row_multiple(i, t, &c);
            u_inv.add_col_multiple(t, i, &(-c));
        }
        for j in t + 1..n {
            if d[(t, j)].is_zero() {
                continue;
            }
            let c = -d[(t, j)].checked_div(&pivot).expect("pivot divides row");
            d.add_col_multiple(j, t, &c);
            v.add_col_multiple(j, t, &c);
        }
    }

    let diagonal = (0..m.min(n)).map(|i| d[(i, i)]).collect();
    SnfResult {
        diagonal,
        rank,
        u,
        u_inv,
        v,
    }
}

/// A finitely generated `Z_(2)`-module `Z_(2)^r + sum Z/2^e_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbGroup {
    pub free_rank: usize,
    /// Torsion exponents `e_i >= 1`, sorted ascending.
    pub torsion: Vec<u32>,
}

impl AbGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn new(free_rank: usize, mut torsion: Vec<u32>) -> Self {
        torsion.retain(|&e| e > 0);
        torsion.sort_unstable();
        Self { free_rank, torsion }
    }

    pub fn elementary(count: usize) -> Self {
        Self::new(0, vec![1; count])
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of cyclic summands.
    pub fn ngens(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Dimension of `G / 2G`.
    pub fn mod2_dim(&self) -> usize {
        self.ngens()
    }

    /// Dimension of the 2-torsion subgroup `G[2]`.
    pub fn two_torsion_dim(&self) -> usize {
        self.torsion.len()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut t = self.torsion.clone();
        t.extend_from_slice(&other.torsion);
        Self::new(self.free_rank + other.free_rank, t)
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z_(2)".to_string()),
            r => parts.push(format!("Z_(2)^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let e = self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && self.torsion[j] == e {
                j += 1;
            }
            let order = 1u128 << e;
            if j - i == 1 {
                parts.push(format!("Z/{order}"));
            } else {
                parts.push(format!("(Z/{order})^{}", j - i));
            }
            i = j;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Invariants of `Z_(2)^rows / columns(a)`.
pub fn cokernel(a: &ZMat) -> AbGroup {
    let s = snf(a);
    AbGroup::new(a.rows() - s.rank, s.exponents())
}

/// Basis (as columns) of the kernel of `a`; the kernel is saturated, so
/// this is a `Z_(2)`-basis.
pub fn kernel(a: &ZMat) -> ZMat {
    let s = snf(a);
    let idx: Vec<usize> = (s.rank..a.cols()).collect();
    s.v.select_cols(&idx)
}

/// Basis (as columns) of the column span of `a`.
pub fn image_basis(a: &ZMat) -> ZMat {
    let s = snf(a);
    let mut cols = Vec::with_capacity(s.rank);
    for i in 0..s.rank {
        let mut c = s.u_inv.col(i);
        for x in &mut c {
            *x *= s.diagonal[i];
        }
        cols.push(c);
    }
    Matrix::from_cols(a.rows(), &cols)
}

/// A solution of `a * x = b` over `Z_(2)`, if one exists.
pub fn solve(a: &ZMat, b: &[LocalInt2]) -> Option<ZVec> {
    solve_with(&snf(a), a.cols(), b)
}

fn solve_with(s: &SnfResult, cols: usize, b: &[LocalInt2]) -> Option<ZVec> {
    let y = s.u.mul_vec(b);
    let mut z = vec![LocalInt2::zero(); cols];
    for (i, yi) in y.iter().enumerate() {
        if i < s.rank {
            z[i] = yi.checked_div(&s.diagonal[i])?;
        } else if !yi.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&z))
}

/// Coordinates of every column of `vectors` in terms of the (independent)
/// columns of `basis`. Fails if some column is outside the span.
pub fn coordinates(basis: &ZMat, vectors: &ZMat) -> Option<ZMat> {
    let s = snf(basis);
    if s.rank != basis.cols() {
        return None;
    }
    let mut cols = Vec::with_capacity(vectors.cols());
    for j in 0..vectors.cols() {
        cols.push(solve_with(&s, basis.cols(), &vectors.col(j))?);
    }
    Some(Matrix::from_cols(basis.cols(), &cols))
}

/// Invariants of `K / L` where `k_basis` is a basis of `K` and the columns of
/// `l_gens` generate `L`, which must lie in `K`.
pub fn quotient(k_basis: &ZMat, l_gens: &ZMat) -> Result<AbGroup> {
    if k_basis.cols() == 0 {
        return if l_gens.is_zero() {
            Ok(AbGroup::zero())
        } else {
            Err(Error::Invalid(
                "sublattice is not contained in the zero lattice".into(),
            ))
        };
    }
    let coords = coordinates(k_basis, l_gens)
        .ok_or_else(|| Error::Invalid("sublattice is not contained in the lattice".into()))?;
    Ok(cokernel(&coords))
}

/// Is the vector in the column span of `gens`?
pub fn in_span(gens: &ZMat, v: &[LocalInt2]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    if gens.cols() == 0 {
        return false;
    }
    solve(gens, v).is_some()
}

/// Column span of `[a | b]` as a basis.
pub fn lattice_sum(a: &ZMat, b: &ZMat) -> ZMat {
    image_basis(&a.hcat(b))
}

/// Basis of the intersection of two column spans in `Z_(2)^n`.
pub fn intersection(a: &ZMat, b: &ZMat) -> ZMat {
    let n = a.rows();
    if a.cols() == 0 || b.cols() == 0 {
        return ZMat::zeros(n, 0);
    }
    // a x = b y  <=>  [a | -b] (x, y) = 0
    let k = kernel(&a.hcat(&b.neg()));
    let xs = k.top(a.cols());
    image_basis(&a.mul(&xs))
}

/// Canonical representative of `x` modulo `2^e` in `0..2^e`.
pub fn residue_mod_pow2(x: LocalInt2, e: u32) -> i128 {
    let modulus = 1i128 << e;
    let den_inv = inverse_mod_pow2(x.denominator(), e);
    (x.numerator().rem_euclid(modulus) * den_inv).rem_euclid(modulus)
}

fn inverse_mod_pow2(odd: i128, e: u32) -> i128 {
    let modulus = 1i128 << e;
    let a = odd.rem_euclid(modulus);
    // Newton iteration for the inverse of an odd number modulo a power of two.
    let mut inv: i128 = 1;
    for _ in 0..7 {
        inv = (inv * (2 - a * inv).rem_euclid(modulus)).rem_euclid(modulus);
    }
    inv
}
