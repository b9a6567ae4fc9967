//! Sparse multivariate polynomials over any [`Coeff`] ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::Coeff;

/// Exponent vector with trailing zeros trimmed, so equal monomials compare equal.
///
/// `Ord` is lexicographic on the exponent vector (variable 0 most significant).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    /// The monomial `var^exp`.
    pub fn var(var: usize, exp: u32) -> Self {
        let mut v = vec![0; var + 1];
        v[var] = exp;
        Self::new(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of variables that can appear (index of last nonzero exponent + 1).
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v = (0..n)
            .map(|i| self.exponent(i) + other.exponent(i))
            .collect();
        Monomial(v)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut v = self.0.clone();
        for (i, e) in other.0.iter().enumerate() {
            v[i] = v[i].checked_sub(*e)?;
        }
        Some(Monomial::new(v))
    }

    /// Weighted degree `sum e_i * w_i`.
    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let w = weights
                    .get(i)
                    .unwrap_or_else(|| panic!("no weight for variable {i}"));
                e as i64 * w
            })
            .sum()
    }

    /// Renders as `x^2*y`, or `1` for the unit monomial.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = names.get(i).cloned().unwrap_or_else(|| format!("t{i}"));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A polynomial as a sorted map from monomial to nonzero coefficient.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(i: usize) -> Self {
        Self::term(C::one(), Monomial::var(i, 1))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone())),
        )
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn try_map_coeffs<D: Coeff, E, F: Fn(&C) -> Result<D, E>>(
        &self,
        f: F,
    ) -> Result<Poly<D>, E> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Keeps only the terms whose monomial satisfies the predicate.
    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Set of weighted degrees of the monomials present.
    pub fn degrees(&self, weights: &[i64]) -> Vec<i64> {
        let mut d: Vec<i64> = self
            .terms
            .keys()
            .map(|m| m.weighted_degree(weights))
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Whether all monomials share one weighted degree (true for zero).
    pub fn is_homogeneous(&self, weights: &[i64]) -> bool {
        self.degrees(weights).len() <= 1
    }

    /// The weighted degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self, weights: &[i64]) -> Option<i64> {
        match self.degrees(weights).as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    /// Component of the given weighted degree.
    pub fn component(&self, weights: &[i64], degree: i64) -> Self {
        self.filter_terms(|m| m.weighted_degree(weights) == degree)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`.
    pub fn substitute(&self, images: &[Poly<C>]) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    let img = images
                        .get(i)
                        .unwrap_or_else(|| panic!("no image for variable {i}"));
                    t = &t * &img.pow(e);
                }
            }
            out = out + t;
        }
        out
    }

    /// Renders terms in descending monomial order, e.g. `2*v1^2 - v2`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let is_unit_mag = mag == "1";
            if m.is_one() {
                s.push_str(&mag);
            } else if is_unit_mag {
                s.push_str(&m.display_with(names));
            } else {
                s.push_str(&mag);
                s.push('*');
                s.push_str(&m.display_with(names));
            }
        }
        s
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..8).map(|i| format!("t{i}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

impl<C: Coeff> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(mut self, rhs: Poly<C>) -> Poly<C> {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        self.clone() + rhs.clone()
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<C: Coeff> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Poly<C>) -> Poly<C> {
        self + (-rhs)
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        self.clone() - rhs.clone()
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Poly<C>) -> Poly<C> {
        &self * &rhs
    }
}

impl<C: Coeff> Zero for Poly<C> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for Poly<C> {
    fn one() -> Self {
        Poly::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn monomial_trimming_and_order() {
        assert_eq!(Monomial::new(vec![1, 0, 0]), Monomial::new(vec![1]));
        assert!(Monomial::new(vec![0, 1]) < Monomial::new(vec![1]));
        assert_eq!(
            Monomial::new(vec![2, 1]).div(&Monomial::new(vec![1, 1])),
            Some(Monomial::new(vec![1]))
        );
        assert_eq!(Monomial::new(vec![0, 1]).div(&Monomial::new(vec![1])), None);
    }

    #[test]
    fn arithmetic_and_display() {
        let x: Poly<i64> = Poly::var(0);
        let y: Poly<i64> = Poly::var(1);
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p.display_with(&names()), "x^2 - y^2");
        let q = p.scale(&-2);
        assert_eq!(q.display_with(&names()), "-2*x^2 + 2*y^2");
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn substitution() {
        let x: Poly<i64> = Poly::var(0);
        let y: Poly<i64> = Poly::var(1);
        let p = &x * &y;
        let s = p.substitute(&[&x + &y, y.clone()]);
        assert_eq!(s.display_with(&names()), "x*y + y^2");
    }

    #[test]
    fn homogeneity() {
        let x: Poly<i64> = Poly::var(0);
        let y: Poly<i64> = Poly::var(1);
        let w = [1, 3];
        assert!((&x.pow(3) + &y).is_homogeneous(&w));
        assert!(!(&x + &y).is_homogeneous(&w));
        assert_eq!((&x.pow(3) + &y).homogeneous_degree(&w), Some(3));
    }
}
