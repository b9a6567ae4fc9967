//! The coefficient ring `BP* = Z_(2)[v1, v2, ...]` with `|v_i| = -2(2^i - 1)`.
//!
//! Monomials are [`Monomial`]s whose variable `i - 1` is `v_i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::scalar::LocalInt2;

/// A sparse element of `BP*`.
pub type BPElem = Poly<LocalInt2>;

/// Monomial in `v1..vk`.
pub type VMonomial = Monomial;

/// Cohomological degree of `v_i` (1-based), `-2(2^i - 1)`.
pub fn v_degree(i: usize) -> i64 {
    assert!(i >= 1, "generators are numbered from v1");
    -2 * ((1i64 << i) - 1)
}

pub fn monomial_degree(m: &VMonomial) -> i64 {
    m.exponents()
        .iter()
        .enumerate()
        .map(|(idx, &e)| e as i64 * v_degree(idx + 1))
        .sum()
}

/// Variable names `v1..vk`.
pub fn v_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("v{i}")).collect()
}

/// Weights for [`Poly::homogeneous_degree`] on `BPElem`s over `v1..vk`.
pub fn v_weights(k: usize) -> Vec<i64> {
    (1..=k).map(v_degree).collect()
}

/// The generator `v_i` as a ring element.
pub fn v(i: usize) -> BPElem {
    Poly::var(i - 1)
}

pub fn bp_int(n: i64) -> BPElem {
    Poly::constant(LocalInt2::from(n))
}

/// The ring `Z_(2)[v1..vk]` with a fixed number of generators.
///
/// Degreewise work is valid only while `v_{k+1}` cannot appear, i.e. for
/// monomial degrees strictly above `|v_{k+1}|`; queries at or below that
/// degree fail instead of silently truncating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BpRing {
    pub k: usize,
}

impl BpRing {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 || k > 20 {
            return Err(Error::Invalid(format!(
                "generator count {k} out of range 1..=20"
            )));
        }
        Ok(Self { k })
    }

    /// Most negative monomial degree that is still exact.
    pub fn capacity_floor(&self) -> i64 {
        v_degree(self.k + 1) + 2
    }

    pub fn check_degree(&self, degree: i64) -> Result<()> {
        if degree < self.capacity_floor() {
            Err(Error::Capacity {
                degree,
                needed: self.k + 1,
                k: self.k,
            })
        } else {
            Ok(())
        }
    }

    pub fn names(&self) -> Vec<String> {
        v_names(self.k)
    }

    pub fn weights(&self) -> Vec<i64> {
        v_weights(self.k)
    }

    /// Checked variant of [`bp_basis`].
    pub fn basis(&self, degree: i64) -> Result<Vec<VMonomial>> {
        if degree <= 0 && degree % 2 == 0 {
            self.check_degree(degree)?;
        }
        Ok(bp_basis(degree, self.k))
    }

    pub fn display(&self, x: &BPElem) -> String {
        x.display_with(&self.names())
    }
}

/// All monomials in `v1..vk` of exactly the given degree, in descending
/// lexicographic order (so `v1^3` precedes `v2`). Odd or positive degrees
/// give an empty list.
pub fn bp_basis(degree: i64, k: usize) -> Vec<VMonomial> {
    if degree > 0 || degree % 2 != 0 {
        return Vec::new();
    }
    let target = (-degree / 2) as u64;
    let weights: Vec<u64> = (1..=k).map(|i| (1u64 << i) - 1).collect();
    let mut out = Vec::new();
    let mut exps = vec![0u32; k];
    fill(&weights, 0, target, &mut exps, &mut out);
    out.sort();
    out.reverse();
    out
}

fn fill(weights: &[u64], idx: usize, rest: u64, exps: &mut Vec<u32>, out: &mut Vec<VMonomial>) {
    if idx == weights.len() {
        if rest == 0 {
            out.push(Monomial::new(exps.clone()));
        }
        return;
    }
    let w = weights[idx];
    let mut e = 0u64;
    while e * w <= rest {
        exps[idx] = e as u32;
        fill(weights, idx + 1, rest - e * w, exps, out);
        e += 1;
    }
    exps[idx] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_degrees() {
        assert_eq!(v_degree(1), -2);
        assert_eq!(v_degree(2), -6);
        assert_eq!(v_degree(3), -14);
        assert_eq!(v_degree(4), -30);
    }

    #[test]
    fn monomial_degrees() {
        assert_eq!(monomial_degree(&Monomial::var(0, 1)), -2);
        assert_eq!(monomial_degree(&Monomial::one()), 0);
        assert_eq!(monomial_degree(&Monomial::new(vec![2, 1])), -10);
    }

    #[test]
    fn small_bases() {
        assert_eq!(bp_basis(0, 3), vec![Monomial::one()]);
        assert_eq!(bp_basis(-2, 1), vec![Monomial::var(0, 1)]);
        assert_eq!(
            bp_basis(-6, 2),
            vec![Monomial::var(0, 3), Monomial::var(1, 1)]
        );
        assert!(bp_basis(-3, 3).is_empty());
        assert!(bp_basis(2, 3).is_empty());
    }

    /// Coefficient of t^n in prod 1/(1 - t^w) over the first k weights 2^i - 1.
    fn partition_count(n: usize, k: usize) -> usize {
        let mut c = vec![0usize; n + 1];
        c[0] = 1;
        for i in 1..=k {
            let w = (1usize << i) - 1;
            for j in w..=n {
                c[j] += c[j - w];
            }
        }
        c[n]
    }

    #[test]
    fn basis_sizes_match_generating_function() {
        for k in 1..=4 {
            for half in 0..=30 {
                let b = bp_basis(-2 * half as i64, k);
                assert_eq!(
                    b.len(),
                    partition_count(half, k),
                    "k={k} degree={}",
                    -2 * half as i64
                );
                let mut dedup = b.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), b.len());
                assert!(b.iter().all(|m| monomial_degree(m) == -2 * half as i64));
            }
        }
    }

    #[test]
    fn capacity_is_enforced() {
        let r = BpRing::new(3).unwrap();
        assert!(r.basis(-28).is_ok());
        assert!(matches!(
            r.basis(-30),
            Err(Error::Capacity { needed: 4, .. })
        ));
        let r4 = BpRing::new(4).unwrap();
        assert!(r4.basis(-30).is_ok());
    }
}
