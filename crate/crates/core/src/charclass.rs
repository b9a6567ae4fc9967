//! Chern roots on `SU(2) x SU(2)`, the double cover of `SO(4)`.
//!
//! Roots are integer linear forms in `a` (variable 0) and `b` (variable 1),
//! both of cohomological degree 2.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::poly::Monomial;
use crate::steenrod::SqAlgebra;
use crate::{MGPoly, RootPoly};

pub fn root_names() -> Vec<String> {
    vec!["a".into(), "b".into()]
}

pub fn show(p: &RootPoly) -> String {
    p.display_with(&root_names())
}

fn linear(a: i64, b: i64) -> RootPoly {
    let mut p = RootPoly::zero();
    p.add_term(Monomial::var(0, 1), a);
    p.add_term(Monomial::var(1, 1), b);
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RepTag {
    /// Adjoint of the first `SO(3)` factor, complexified.
    A,
    /// The defining 4-dimensional representation.
    B,
    Trivial,
}

impl fmt::Display for RepTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RepTag::A => "A",
            RepTag::B => "B",
            RepTag::Trivial => "trivial",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepRestriction {
    pub tag: RepTag,
    pub roots: Vec<RootPoly>,
}

pub fn restrict_rep(tag: RepTag) -> RepRestriction {
    let roots = match tag {
        RepTag::A => vec![linear(2, 0), RootPoly::zero(), linear(-2, 0)],
        RepTag::B => vec![linear(1, 1), linear(1, -1), linear(-1, 1), linear(-1, -1)],
        RepTag::Trivial => Vec::new(),
    };
    RepRestriction { tag, roots }
}

/// `a -> -a` and `b -> -b` applied separately.
fn weyl_images(p: &RootPoly) -> [RootPoly; 2] {
    [
        p.substitute(&[linear(-1, 0), linear(0, 1)]),
        p.substitute(&[linear(1, 0), linear(0, -1)]),
    ]
}

pub fn is_weyl_invariant(p: &RootPoly) -> bool {
    weyl_images(p).iter().all(|q| q == p)
}

fn sorted_display(roots: &[RootPoly]) -> Vec<String> {
    let mut v: Vec<String> = roots.iter().map(show).collect();
    v.sort();
    v
}

impl RepRestriction {
    /// The multiset is preserved by each sign change.
    pub fn is_sign_closed(&self) -> bool {
        let base = sorted_display(&self.roots);
        (0..2).all(|k| {
            let moved: Vec<RootPoly> = self
                .roots
                .iter()
                .map(|r| weyl_images(r)[k].clone())
                .collect();
            sorted_display(&moved) == base
        })
    }

    /// `c_0, ..., c_n` from `prod (1 + r t)`.
    pub fn chern_classes(&self) -> Vec<RootPoly> {
        let mut c = vec![RootPoly::one()];
        for r in &self.roots {
            let mut next = c.clone();
            next.push(RootPoly::zero());
            for (i, ci) in c.iter().enumerate() {
                next[i + 1] = &next[i + 1] + &(ci * r);
            }
            c = next;
        }
        c
    }

    /// `c_i`, zero past the rank.
    pub fn chern(&self, i: usize) -> RootPoly {
        self.chern_classes()
            .get(i)
            .cloned()
            .unwrap_or_else(RootPoly::zero)
    }
}

/// `e_k` of the roots by summing over all `k`-subsets.
pub fn elementary_symmetric(roots: &[RootPoly], k: usize) -> RootPoly {
    let n = roots.len();
    let mut out = RootPoly::zero();
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut t = RootPoly::one();
        for (i, r) in roots.iter().enumerate() {
            if mask & (1 << i) != 0 {
                t = &t * r;
            }
        }
        out = out + t;
    }
    out
}

/// Orientation sign for the Euler class of the 4-dimensional representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation(i8);

impl Orientation {
    pub const POSITIVE: Orientation = Orientation(1);
    pub const NEGATIVE: Orientation = Orientation(-1);

    pub fn new(sign: i64) -> Option<Self> {
        match sign {
            1 => Some(Self::POSITIVE),
            -1 => Some(Self::NEGATIVE),
            _ => None,
        }
    }

    pub fn sign(self) -> i64 {
        self.0 as i64
    }
}

impl Default for Orientation {
    /// The sign under which `2 chi = c2(A) - c2(B)` holds as written.
    fn default() -> Self {
        Self::NEGATIVE
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.0)
    }
}

/// Euler class pulled back to the torus: one root from each `+-` pair of `B`,
/// `(a + b) * eps*(a - b)`.
pub fn euler_class(eps: Orientation) -> RootPoly {
    &linear(1, 1) * &linear(eps.sign(), -eps.sign())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EulerIdentityReport {
    pub orientation: i64,
    pub c2_a: String,
    pub c2_b: String,
    pub difference: String,
    pub chi: String,
    /// `2 chi = c2(A) - c2(B)`.
    pub identity_holds: bool,
    /// `(2 chi)^2 = (c2(A) - c2(B))^2`, independent of the sign.
    pub squared_holds: bool,
    pub c1_vanishes: bool,
    /// The symmetric-function oracle agrees with the product expansion.
    pub oracle_agrees: bool,
    pub weyl_invariant: bool,
}

impl EulerIdentityReport {
    pub fn passed(&self) -> bool {
        self.identity_holds
            && self.squared_holds
            && self.c1_vanishes
            && self.oracle_agrees
            && self.weyl_invariant
    }
}

pub fn euler_identity_check(eps: Orientation) -> EulerIdentityReport {
    let reps = [
        restrict_rep(RepTag::A),
        restrict_rep(RepTag::B),
        restrict_rep(RepTag::Trivial),
    ];
    let oracle_agrees = reps.iter().all(|r| {
        let c = r.chern_classes();
        (0..=r.roots.len()).all(|k| c[k] == elementary_symmetric(&r.roots, k))
    });
    let c1_vanishes = reps.iter().all(|r| r.chern(1).is_zero());
    let c2a = reps[0].chern(2);
    let c2b = reps[1].chern(2);
    let diff = &c2a - &c2b;
    let chi = euler_class(eps);
    let two_chi = chi.scale(&2);
    let mut classes: Vec<RootPoly> = reps.iter().flat_map(|r| r.chern_classes()).collect();
    classes.push(chi.clone());
    EulerIdentityReport {
        orientation: eps.sign(),
        c2_a: show(&c2a),
        c2_b: show(&c2b),
        difference: show(&diff),
        chi: show(&chi),
        identity_holds: two_chi == diff,
        squared_holds: two_chi.pow(2) == diff.pow(2),
        c1_vanishes,
        oracle_agrees,
        weyl_invariant: classes.iter().all(is_weyl_invariant),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObstructionStatus {
    /// `Sq^3` is nonzero: the class is not in the image of `MU^*`.
    Obstructed,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct Obstruction {
    pub class: MGPoly,
    pub sq3: MGPoly,
    pub status: ObstructionStatus,
}

pub fn ah_obstruction(cls: &MGPoly, a: &SqAlgebra) -> Result<Obstruction> {
    let class = a.reduce(cls)?;
    let sq3 = a.sq(3, &class)?;
    let status = if sq3.is_zero() {
        ObstructionStatus::Undecided
    } else {
        ObstructionStatus::Obstructed
    };
    Ok(Obstruction { class, sq3, status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steenrod::bso4_ring;

    #[test]
    fn chern_classes() {
        let t = restrict_rep(RepTag::Trivial);
        assert_eq!(t.chern_classes(), vec![RootPoly::one()]);
        let a = restrict_rep(RepTag::A);
        let b = restrict_rep(RepTag::B);
        assert!(a.chern(1).is_zero() && b.chern(1).is_zero());
        assert_eq!(show(&a.chern(2)), "-4*a^2");
        assert_eq!(show(&b.chern(2)), "-2*a^2 - 2*b^2");
        assert!(a.chern(3).is_zero());
        assert_eq!(show(&b.chern(4)), "a^4 - 2*a^2*b^2 + b^4");
        for r in [&a, &b, &t] {
            assert!(r.is_sign_closed());
            for k in 0..=r.roots.len() {
                assert_eq!(r.chern(k), elementary_symmetric(&r.roots, k));
            }
        }
    }

    #[test]
    fn euler_identity() {
        let r = euler_identity_check(Orientation::default());
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.difference, "-2*a^2 + 2*b^2");
        assert_eq!(r.chi, "-a^2 + b^2");
        let flipped = euler_identity_check(Orientation::POSITIVE);
        assert!(!flipped.identity_holds);
        assert!(flipped.squared_holds);
        // chi^2 = c4(B) for either sign
        let b = restrict_rep(RepTag::B);
        assert_eq!(euler_class(Orientation::POSITIVE).pow(2), b.chern(4));
    }

    #[test]
    fn weyl_check_rejects_odd_classes() {
        assert!(!is_weyl_invariant(&linear(1, 0)));
        assert!(!is_weyl_invariant(&(&linear(1, 0) * &linear(0, 1))));
        assert!(is_weyl_invariant(&linear(1, 0).pow(2)));
    }

    #[test]
    fn obstruction_examples() {
        let a = bso4_ring(8).unwrap();
        let w4 = a.parse("w4").unwrap();
        let o = ah_obstruction(&w4, &a).unwrap();
        assert_eq!(o.status, ObstructionStatus::Obstructed);
        assert_eq!(a.display(&o.sq3), "w3*w4");
        let even = ah_obstruction(&a.parse("2*w4").unwrap(), &a).unwrap();
        assert_eq!(even.status, ObstructionStatus::Undecided);
        assert!(even.sq3.is_zero());
        let sq = ah_obstruction(&a.parse("w2^2").unwrap(), &a).unwrap();
        assert_eq!(sq.status, ObstructionStatus::Undecided);
    }
}
