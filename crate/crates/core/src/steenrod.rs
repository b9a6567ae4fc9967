//! Mod-2 cohomology rings with an action of the Steenrod squares.
//!
//! An [`SqAlgebra`] is `F_2[generators] / I`, realized degree by degree up
//! to a bound: each degree has an echelon basis of `I_d` over the monomials,
//! and the non-pivot monomials form the quotient basis. Squares act through
//! the Cartan formula from a table of `Sq^k(generator)`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2lin::{BitVec, Echelon, F2Map};
use crate::poly::{Monomial, Poly};
use crate::scalar::F2;
use crate::MGPoly;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqGen {
    pub name: String,
    pub degree: u32,
    /// `squares[k] = Sq^k(generator)` for `0 <= k <= degree`.
    pub squares: Vec<MGPoly>,
    /// Auxiliary grading (exponent weight of the polynomial generator `w`).
    pub weight: u32,
}

#[derive(Clone, Debug)]
struct DegreeData {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    ideal: Echelon,
    standard: Vec<usize>,
}

/// Images of `w2, w3, w4` under a ring map from `H^*(BSO(4))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureMap {
    pub w2: MGPoly,
    pub w3: MGPoly,
    pub w4: MGPoly,
}

#[derive(Clone, Debug)]
pub struct SqAlgebra {
    gens: Vec<SqGen>,
    ideal: Vec<MGPoly>,
    bound: u32,
    degrees: Vec<DegreeData>,
    pub structure: Option<StructureMap>,
}

fn mono_degree(m: &Monomial, gens: &[SqGen]) -> u32 {
    m.exponents()
        .iter()
        .zip(gens)
        .map(|(&e, g)| e * g.degree)
        .sum()
}

/// Monomials of exactly degree `d`, largest first.
fn monomials_of_degree(gens: &[SqGen], d: u32) -> Vec<Monomial> {
    fn rec(gens: &[SqGen], idx: usize, rest: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if idx == gens.len() {
            if rest == 0 {
                out.push(Monomial::new(exps.clone()));
            }
            return;
        }
        let gd = gens[idx].degree;
        let mut e = 0;
        while e * gd <= rest {
            exps[idx] = e;
            rec(gens, idx + 1, rest - e * gd, exps, out);
            e += 1;
        }
        exps[idx] = 0;
    }
    let mut out = Vec::new();
    rec(gens, 0, d, &mut vec![0; gens.len()], &mut out);
    out.sort();
    out.reverse();
    out
}

impl SqAlgebra {
    pub fn new(gens: Vec<SqGen>, ideal: Vec<MGPoly>, bound: u32) -> Result<Self> {
        for g in &gens {
            if g.degree == 0 {
                return Err(Error::Invalid(format!("generator {} has degree 0", g.name)));
            }
            if g.squares.len() != g.degree as usize + 1 {
                return Err(Error::Invalid(format!(
                    "generator {} needs squares Sq^0..Sq^{}",
                    g.name, g.degree
                )));
            }
        }
        let mut a = Self {
            gens,
            ideal: Vec::new(),
            bound,
            degrees: Vec::new(),
            structure: None,
        };
        for r in &ideal {
            if r.is_zero() {
                continue;
            }
            if a.homogeneous_degree(r).is_none() {
                return Err(Error::Invalid("ideal generator is not homogeneous".into()));
            }
            a.ideal.push(r.clone());
        }
        a.rebuild();
        Ok(a)
    }

    fn rebuild(&mut self) {
        let mut degrees = Vec::with_capacity(self.bound as usize + 1);
        for d in 0..=self.bound {
            let monomials = monomials_of_degree(&self.gens, d);
            let index: HashMap<Monomial, usize> = monomials
                .iter()
                .enumerate()
                .map(|(i, m)| (m.clone(), i))
                .collect();
            let mut ideal = Echelon::new(monomials.len());
            for r in &self.ideal {
                let rd = self.homogeneous_degree(r).expect("homogeneous");
                if rd > d {
                    continue;
                }
                for m in monomials_of_degree(&self.gens, d - rd) {
                    let prod = r.mul_monomial(&m);
                    let mut v = BitVec::zeros(monomials.len());
                    for (t, _) in prod.terms() {
                        v.flip(index[t]);
                    }
                    ideal.insert(&v);
                }
            }
            let standard = ideal.free_columns();
            degrees.push(DegreeData {
                monomials,
                index,
                ideal,
                standard,
            });
        }
        self.degrees = degrees;
    }

    pub fn gens(&self) -> &[SqGen] {
        &self.gens
    }

    pub fn ideal(&self) -> &[MGPoly] {
        &self.ideal
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn names(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.name.clone()).collect()
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn gen(&self, name: &str) -> Option<MGPoly> {
        self.gen_index(name).map(Poly::var)
    }

    pub fn display(&self, f: &MGPoly) -> String {
        f.display_with(&self.names())
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        mono_degree(m, &self.gens)
    }

    pub fn monomial_weight(&self, m: &Monomial) -> u32 {
        m.exponents()
            .iter()
            .zip(&self.gens)
            .map(|(&e, g)| e * g.weight)
            .sum()
    }

    /// Degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self, f: &MGPoly) -> Option<u32> {
        let mut ds = f.terms().map(|(m, _)| self.monomial_degree(m));
        let first = ds.next()?;
        ds.all(|d| d == first).then_some(first)
    }

    fn check_bound(&self, d: u32) -> Result<()> {
        if d > self.bound {
            Err(Error::DegreeBound {
                needed: d,
                bound: self.bound,
            })
        } else {
            Ok(())
        }
    }

    /// Quotient basis in degree `d` (standard monomials).
    pub fn basis(&self, d: u32) -> Result<Vec<Monomial>> {
        self.check_bound(d)?;
        let dd = &self.degrees[d as usize];
        Ok(dd
            .standard
            .iter()
            .map(|&i| dd.monomials[i].clone())
            .collect())
    }

    pub fn dim(&self, d: u32) -> Result<usize> {
        self.check_bound(d)?;
        Ok(self.degrees[d as usize].standard.len())
    }

    /// Dimensions in degrees `0..=bound`.
    pub fn poincare_series(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.standard.len()).collect()
    }

    fn raw_vector(&self, f: &MGPoly, d: u32) -> BitVec {
        let dd = &self.degrees[d as usize];
        let mut v = BitVec::zeros(dd.monomials.len());
        for (m, _) in f.terms() {
            if self.monomial_degree(m) == d {
                v.flip(dd.index[m]);
            }
        }
        v
    }

    /// Normal form of `f` modulo the ideal.
    pub fn reduce(&self, f: &MGPoly) -> Result<MGPoly> {
        let mut degrees: Vec<u32> = f.terms().map(|(m, _)| self.monomial_degree(m)).collect();
        degrees.sort_unstable();
        degrees.dedup();
        let mut out = MGPoly::zero();
        for d in degrees {
            self.check_bound(d)?;
            let dd = &self.degrees[d as usize];
            let red = dd.ideal.reduce(&self.raw_vector(f, d));
            for i in red.ones() {
                out.add_term(dd.monomials[i].clone(), F2::ONE);
            }
        }
        Ok(out)
    }

    pub fn is_zero_class(&self, f: &MGPoly) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    /// Coordinates of a homogeneous element of degree `d` in the quotient basis.
    pub fn coords(&self, f: &MGPoly, d: u32) -> Result<BitVec> {
        self.check_bound(d)?;
        let dd = &self.degrees[d as usize];
        let red = dd.ideal.reduce(&self.raw_vector(f, d));
        let mut out = BitVec::zeros(dd.standard.len());
        for (k, &i) in dd.standard.iter().enumerate() {
            if red.get(i) {
                out.set(k, true);
            }
        }
        Ok(out)
    }

    pub fn from_coords(&self, d: u32, v: &BitVec) -> MGPoly {
        let dd = &self.degrees[d as usize];
        let mut out = MGPoly::zero();
        for k in v.ones() {
            out.add_term(dd.monomials[dd.standard[k]].clone(), F2::ONE);
        }
        out
    }

    fn sq_monomial(
        &self,
        k: u32,
        m: &Monomial,
        memo: &mut HashMap<(Monomial, u32), MGPoly>,
    ) -> MGPoly {
        if k == 0 {
            return Poly::term(F2::ONE, m.clone());
        }
        if m.is_one() {
            return MGPoly::zero();
        }
        if let Some(p) = memo.get(&(m.clone(), k)) {
            return p.clone();
        }
        let var = m
            .exponents()
            .iter()
            .position(|&e| e > 0)
            .expect("non-unit monomial");
        let rest = m.div(&Monomial::var(var, 1)).expect("divides");
        let g = &self.gens[var];
        let mut out = MGPoly::zero();
        for i in 0..=k.min(g.degree) {
            let a = &g.squares[i as usize];
            if a.is_zero() {
                continue;
            }
            let b = self.sq_monomial(k - i, &rest, memo);
            if !b.is_zero() {
                out = out + a * &b;
            }
        }
        memo.insert((m.clone(), k), out.clone());
        out
    }

    /// `Sq^k f` before reduction.
    pub fn sq_raw(&self, k: u32, f: &MGPoly) -> MGPoly {
        let mut memo = HashMap::new();
        let mut out = MGPoly::zero();
        for (m, _) in f.terms() {
            out = out + self.sq_monomial(k, m, &mut memo);
        }
        out
    }

    /// `Sq^k f`, reduced.
    pub fn sq(&self, k: u32, f: &MGPoly) -> Result<MGPoly> {
        if let Some(d) = f.terms().map(|(m, _)| self.monomial_degree(m)).max() {
            self.check_bound(d + k)?;
        }
        self.reduce(&self.sq_raw(k, f))
    }

    /// `Sq^k` from degree `d` to `d + k` in quotient coordinates.
    pub fn sq_matrix(&self, k: u32, d: u32) -> Result<F2Map> {
        self.check_bound(d + k)?;
        let basis = self.basis(d)?;
        let cols = basis
            .iter()
            .map(|m| self.coords(&self.sq_raw(k, &Poly::term(F2::ONE, m.clone())), d + k))
            .collect::<Result<Vec<_>>>()?;
        Ok(F2Map::from_cols(self.dim(d + k)?, cols))
    }

    /// Multiplication by a fixed homogeneous class from degree `d`.
    pub fn mult_matrix(&self, c: &MGPoly, d: u32) -> Result<F2Map> {
        let cd = self.homogeneous_degree(c).unwrap_or(0);
        self.check_bound(d + cd)?;
        let basis = self.basis(d)?;
        let cols = basis
            .iter()
            .map(|m| self.coords(&c.mul_monomial(m), d + cd))
            .collect::<Result<Vec<_>>>()?;
        Ok(F2Map::from_cols(self.dim(d + cd)?, cols))
    }

    /// Every `Sq^k` of every ideal generator (within the bound) lies in the ideal.
    pub fn ideal_is_sq_closed(&self) -> Result<bool> {
        for r in &self.ideal {
            let d = self.homogeneous_degree(r).expect("homogeneous");
            for k in 1..=self.bound.saturating_sub(d) {
                if !self.sq(k, r)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Same algebra with `Sq^k(generator)` replaced.
    pub fn with_square(&self, name: &str, k: u32, value: MGPoly) -> Result<Self> {
        let idx = self
            .gen_index(name)
            .ok_or_else(|| Error::Invalid(format!("no generator {name}")))?;
        let mut gens = self.gens.clone();
        if k as usize >= gens[idx].squares.len() {
            return Err(Error::Invalid(format!("Sq^{k} out of range for {name}")));
        }
        gens[idx].squares[k as usize] = value;
        let mut a = Self::new(gens, self.ideal.clone(), self.bound)?;
        a.structure = self.structure.clone();
        Ok(a)
    }

    /// Same algebra with one more relation (no closure is taken).
    pub fn with_extra_relation(&self, r: MGPoly) -> Result<Self> {
        let mut ideal = self.ideal.clone();
        ideal.push(r);
        let mut a = Self::new(self.gens.clone(), ideal, self.bound)?;
        a.structure = self.structure.clone();
        Ok(a)
    }

    /// Parses expressions such as `w2^2 + w3*w4` over the generator names.
    pub fn parse(&self, expr: &str) -> Result<MGPoly> {
        let mut p = Parser {
            chars: expr.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            alg: self,
        };
        let out = p.sum()?;
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!(
                "unexpected input at position {} of '{expr}'",
                p.pos
            )));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    alg: &'a SqAlgebra,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<MGPoly> {
        let mut acc = self.product()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            acc = acc + self.product()?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<MGPoly> {
        let mut acc = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MGPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.number()?;
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!(
                "expected a number at position {start}"
            )));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| Error::Parse(format!("bad number {s}")))
    }

    fn atom(&mut self) -> Result<MGPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(if n % 2 == 1 {
                    MGPoly::one()
                } else {
                    MGPoly::zero()
                })
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                self.alg
                    .gen(&name)
                    .ok_or_else(|| Error::Parse(format!("unknown generator '{name}'")))
            }
            other => Err(Error::Parse(format!(
                "unexpected {other:?} at position {}",
                self.pos
            ))),
        }
    }
}

fn binom_mod2(n: i64, k: i64) -> bool {
    if k < 0 {
        return false;
    }
    if n == -1 {
        // (-1 choose k) = (-1)^k, odd for every k >= 0
        return true;
    }
    if n < 0 {
        return false;
    }
    // Lucas: C(n, k) is odd iff k's bits are a subset of n's.
    k <= n && (n & k) == k
}

/// `Sq^i(w_j)` by Wu's formula, as a polynomial in `w_1..w_n` (variable
/// `j - 1` is `w_j`), with `w_0 = 1` and `w_{>n} = 0`. In the oriented case
/// every term involving `w_1` is dropped.
pub fn wu_sq_w(i: u32, j: u32, n: u32, oriented: bool) -> MGPoly {
    let w = |idx: u32| -> MGPoly {
        if idx == 0 {
            MGPoly::one()
        } else if idx > n || (oriented && idx == 1) {
            MGPoly::zero()
        } else {
            Poly::var(idx as usize - 1)
        }
    };
    if i > j {
        return MGPoly::zero();
    }
    let mut out = MGPoly::zero();
    for t in 0..=i {
        if binom_mod2(j as i64 - i as i64 + t as i64 - 1, t as i64) {
            out = out + &w(i - t) * &w(j + t);
        }
    }
    if j == 0 && i == 0 {
        return MGPoly::one();
    }
    out
}

/// Renames `w_j` (variable `j - 1`) to the generator index `index(j)`.
fn rename_w(p: &MGPoly, index: impl Fn(usize) -> Option<usize>, width: usize) -> MGPoly {
    let mut out = MGPoly::zero();
    'terms: for (m, c) in p.terms() {
        let mut exps = vec![0; width];
        for (v, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            match index(v + 1) {
                Some(i) => exps[i] += e,
                None => continue 'terms,
            }
        }
        out.add_term(Monomial::new(exps), *c);
    }
    out
}

/// `H^*(BSO(4); F_2) = F_2[w2, w3, w4]` with squares from Wu's formula.
pub fn bso4_ring(bound: u32) -> Result<SqAlgebra> {
    let names = ["w2", "w3", "w4"];
    let gens = (2..=4u32)
        .map(|j| SqGen {
            name: names[j as usize - 2].into(),
            degree: j,
            squares: (0..=j)
                .map(|i| {
                    rename_w(
                        &wu_sq_w(i, j, 4, true),
                        |w| (2..=4).contains(&w).then(|| w - 2),
                        3,
                    )
                })
                .collect(),
            weight: u32::from(j == 4),
        })
        .collect();
    let mut a = SqAlgebra::new(gens, Vec::new(), bound)?;
    a.structure = Some(StructureMap {
        w2: Poly::var(0),
        w3: Poly::var(1),
        w4: Poly::var(2),
    });
    Ok(a)
}

/// A quadratic form on `F_2^4` given by its monomial coefficients
/// `x_i x_j` (`i <= j`) on the dual basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticForm {
    /// Terms `(i, j)` with `i <= j` (0-based) present in the form.
    pub terms: Vec<(usize, usize)>,
}

impl QuadraticForm {
    /// `x1 x2 + x3 x4`.
    pub fn real_type() -> Self {
        Self {
            terms: vec![(0, 1), (2, 3)],
        }
    }

    pub fn eval(&self, v: u8) -> bool {
        self.terms.iter().fold(false, |acc, &(i, j)| {
            acc ^ ((v >> i) & 1 == 1 && (v >> j) & 1 == 1)
        })
    }

    fn bilinear(&self, u: u8, v: u8) -> bool {
        self.eval(u ^ v) ^ self.eval(u) ^ self.eval(v)
    }

    pub fn as_poly(&self) -> MGPoly {
        let mut p = MGPoly::zero();
        for &(i, j) in &self.terms {
            let m = if i == j {
                Monomial::var(i, 2)
            } else {
                Monomial::var(i, 1).mul(&Monomial::var(j, 1))
            };
            p.add_term(m, F2::ONE);
        }
        p
    }
}

fn span2(a: u8, b: u8) -> [u8; 3] {
    [a, b, a ^ b]
}

/// A splitting `F_2^4 = P1 (+) P2` into orthogonal planes on which the form
/// is anisotropic, found by exhaustive search in a fixed order.
pub fn anisotropic_splitting(q: &QuadraticForm) -> Option<([u8; 2], [u8; 2])> {
    let planes: Vec<[u8; 2]> = (1u8..16)
        .flat_map(|a| (a + 1..16).map(move |b| [a, b]))
        .filter(|&[a, b]| a != b && span2(a, b).iter().all(|&v| q.eval(v)))
        .collect();
    for p1 in &planes {
        for p2 in &planes {
            let orthogonal = span2(p1[0], p1[1])
                .iter()
                .all(|&u| span2(p2[0], p2[1]).iter().all(|&v| !q.bilinear(u, v)));
            let spans = {
                let mut seen = [false; 16];
                for x in [0, p1[0], p1[1], p1[0] ^ p1[1]] {
                    for y in [0, p2[0], p2[1], p2[0] ^ p2[1]] {
                        seen[(x ^ y) as usize] = true;
                    }
                }
                seen.iter().all(|&s| s)
            };
            if orthogonal && spans {
                return Some((*p1, *p2));
            }
        }
    }
    None
}

fn linear_form(coeffs: u8) -> MGPoly {
    let mut p = MGPoly::zero();
    for i in 0..4 {
        if (coeffs >> i) & 1 == 1 {
            p.add_term(Monomial::var(i, 1), F2::ONE);
        }
    }
    p
}

fn pairing(form: u8, v: u8) -> bool {
    (form & v).count_ones() % 2 == 1
}

/// Classes `(w2, w3)` of the faithful 4-dimensional real representation,
/// written in the `x_i`: with `l1, l2` a basis of the linear forms vanishing
/// on `P2`, `w2 = l1^2 + l1 l2 + l2^2` and `w3 = l1 l2 (l1 + l2)`.
pub fn representation_classes(q: &QuadraticForm) -> Option<(MGPoly, MGPoly)> {
    let (_, p2) = anisotropic_splitting(q)?;
    let forms: Vec<u8> = (1u8..16)
        .filter(|&f| !pairing(f, p2[0]) && !pairing(f, p2[1]))
        .collect();
    let (l1, l2) = (linear_form(forms[0]), linear_form(forms[1]));
    let w2 = &(&l1 * &l1) + &(&(&l1 * &l2) + &(&l2 * &l2));
    let w3 = &(&l1 * &l2) * &(&l1 + &l2);
    Some((w2, w3))
}

/// `H^*(BG; F_2)` for the extraspecial group of order 32 attached to `q`:
/// `F_2[x1..x4] / (Sq-closure of q)` tensored with `F_2[w4]`.
pub fn extraspecial_ring_for(q: &QuadraticForm, bound: u32) -> Result<SqAlgebra> {
    if bound < 8 {
        return Err(Error::Invalid("degree bound must be at least 8".into()));
    }
    let (w2d, w3d) = representation_classes(q)
        .ok_or_else(|| Error::Invalid("form has no anisotropic splitting".into()))?;
    let x = |i: usize| -> MGPoly { Poly::var(i) };
    let w = || -> MGPoly { Poly::var(4) };
    let mut gens: Vec<SqGen> = (0..4)
        .map(|i| SqGen {
            name: format!("x{}", i + 1),
            degree: 1,
            squares: vec![x(i), &x(i) * &x(i)],
            weight: 0,
        })
        .collect();
    gens.push(SqGen {
        name: "w4".into(),
        degree: 4,
        squares: vec![w(), MGPoly::zero(), &w2d * &w(), &w3d * &w(), &w() * &w()],
        weight: 1,
    });
    let mut ideal = vec![q.as_poly()];
    // Steenrod closure: add reduced squares of generators until nothing new appears.
    loop {
        let alg = SqAlgebra::new(gens.clone(), ideal.clone(), bound)?;
        let mut fresh = None;
        'search: for r in alg.ideal() {
            let d = alg.homogeneous_degree(r).expect("homogeneous");
            for k in 1..=bound - d {
                let s = alg.sq(k, r)?;
                if !s.is_zero() {
                    if d + k + 2 > bound {
                        return Err(Error::ClosureUnstable(bound));
                    }
                    fresh = Some(s);
                    break 'search;
                }
            }
        }
        match fresh {
            Some(s) => ideal.push(s),
            None => {
                let mut a = alg;
                a.structure = Some(StructureMap {
                    w2: w2d,
                    w3: w3d,
                    w4: w(),
                });
                return Ok(a);
            }
        }
    }
}

pub fn extraspecial_ring(bound: u32) -> Result<SqAlgebra> {
    extraspecial_ring_for(&QuadraticForm::real_type(), bound)
}

/// Checks that a structure map commutes with squares: `Sq^i` of the image of
/// `w_j` equals the image of Wu's formula.
pub fn structure_map_is_sq_compatible(a: &SqAlgebra, s: &StructureMap) -> Result<bool> {
    let images = [s.w2.clone(), s.w3.clone(), s.w4.clone()];
    for j in 2..=4u32 {
        for i in 0..=j {
            let wu = wu_sq_w(i, j, 4, true);
            let mut image = MGPoly::zero();
            for (m, _) in wu.terms() {
                let mut t = MGPoly::one();
                for (v, &e) in m.exponents().iter().enumerate() {
                    if e > 0 {
                        t = &t * &images[v - 1].pow(e);
                    }
                }
                image = image + t;
            }
            let lhs = a.sq(i, &images[j as usize - 2])?;
            if lhs != a.reduce(&image)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub bound: u32,
    pub passed: bool,
    /// Module generators found per degree.
    pub generators_per_degree: Vec<usize>,
    pub poincare: Vec<usize>,
    /// First failing degree and a description of the dependency.
    pub failure: Option<(u32, String)>,
}

/// Degreewise check that `a` is free over the subalgebra generated by three
/// classes of degrees 2, 3, 4.
pub fn freeness_check(a: &SqAlgebra, sub: &[MGPoly; 3], bound: u32) -> Result<FreenessReport> {
    let bound = bound.min(a.bound());
    let degs = [2u32, 3, 4];
    let mut report = FreenessReport {
        bound,
        passed: false,
        generators_per_degree: vec![0; bound as usize + 1],
        poincare: a.poincare_series()[..=bound as usize].to_vec(),
        failure: None,
    };
    for (s, &d) in sub.iter().zip(&degs) {
        if !s.is_zero() && a.homogeneous_degree(s) != Some(d) {
            return Err(Error::Invalid(format!(
                "sub-generator must have degree {d}"
            )));
        }
    }
    // Monomials w2^a w3^b w4^c by degree.
    let sub_monos = |d: u32| -> Vec<(u32, u32, u32)> {
        let mut out = Vec::new();
        for c in 0..=d / 4 {
            for b in 0..=(d - 4 * c) / 3 {
                let rest = d - 4 * c - 3 * b;
                if rest.is_multiple_of(2) {
                    out.push((rest / 2, b, c));
                }
            }
        }
        out
    };
    let eval = |(x, y, z): (u32, u32, u32)| -> MGPoly {
        &(&sub[0].pow(x) * &sub[1].pow(y)) * &sub[2].pow(z)
    };
    let mut module_gens: Vec<(u32, MGPoly)> = Vec::new();
    for d in 0..=bound {
        let mut span = Echelon::new(a.dim(d)?);
        for (gd, g) in &module_gens {
            for e in sub_monos(d - gd) {
                let v = a.coords(&(&eval(e) * g), d)?;
                if !span.insert(&v) {
                    report.failure = Some((
                        d,
                        format!(
                            "w2^{}*w3^{}*w4^{} times generator {} is dependent",
                            e.0,
                            e.1,
                            e.2,
                            a.display(g)
                        ),
                    ));
                    return Ok(report);
                }
            }
        }
        for m in a.basis(d)? {
            let p = Poly::term(F2::ONE, m);
            if span.insert(&a.coords(&p, d)?) {
                module_gens.push((d, p));
                report.generators_per_degree[d as usize] += 1;
            }
        }
    }
    // Poincare series identity: P_A = P_gens / ((1-t^2)(1-t^3)(1-t^4)).
    let mut sub_series = vec![0usize; bound as usize + 1];
    for (d, s) in sub_series.iter_mut().enumerate() {
        *s = sub_monos(d as u32).len();
    }
    for d in 0..=bound as usize {
        let predicted: usize = (0..=d)
            .map(|e| report.generators_per_degree[e] * sub_series[d - e])
            .sum();
        if predicted != report.poincare[d] {
            report.failure = Some((
                d as u32,
                format!(
                    "Poincare series mismatch: {predicted} vs {}",
                    report.poincare[d]
                ),
            ));
            return Ok(report);
        }
    }
    report.passed = true;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionShiftReport {
    pub passed: bool,
    /// (a) every degree-3 basis monomial has weight 0.
    pub degree3_weight_zero: bool,
    /// (b) `Sq^3 w4` is nonzero and every monomial in it has weight 1.
    pub sq3w_weight_one: bool,
    pub sq3w: String,
    /// (c) number of classes `z` in degree 3 enumerated.
    pub enumerated: u64,
    /// A `z` (as a polynomial) with `Sq^3(w4 + Sq^1 z) = 0`, if any.
    pub witness: Option<String>,
}

/// Checks `Sq^3(w4 + Sq^1 z) != 0` for every `z` in degree 3.
pub fn torsion_shift_check(a: &SqAlgebra) -> Result<TorsionShiftReport> {
    let w = a
        .gen("w4")
        .ok_or_else(|| Error::Invalid("algebra has no generator w4".into()))?;
    let basis3 = a.basis(3)?;
    let degree3_weight_zero = basis3.iter().all(|m| a.monomial_weight(m) == 0);
    let sq3w = a.sq(3, &w)?;
    let sq3w_weight_one = !sq3w.is_zero() && sq3w.terms().all(|(m, _)| a.monomial_weight(m) == 1);
    let base = a.coords(&sq3w, 7)?;
    // Sq^3 Sq^1 on the degree-3 basis, as columns.
    let images: Vec<BitVec> = basis3
        .iter()
        .map(|m| {
            let z = Poly::term(F2::ONE, m.clone());
            let s1 = a.sq(1, &z)?;
            a.coords(&a.sq(3, &s1)?, 7)
        })
        .collect::<Result<_>>()?;
    let n = images.len();
    let mut current = base.clone();
    let mut witness = if current.is_zero() { Some(0u64) } else { None };
    // Gray code walk over all 2^n classes.
    let mut code = 0u64;
    for step in 1..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        code ^= 1 << bit;
        current.xor_assign(&images[bit]);
        if witness.is_none() && current.is_zero() {
            witness = Some(code);
        }
    }
    let witness = witness.map(|code| {
        let mut z = MGPoly::zero();
        for (i, m) in basis3.iter().enumerate() {
            if (code >> i) & 1 == 1 {
                z.add_term(m.clone(), F2::ONE);
            }
        }
        a.display(&z)
    });
    Ok(TorsionShiftReport {
        passed: degree3_weight_zero && sq3w_weight_one && witness.is_none(),
        degree3_weight_zero,
        sq3w_weight_one,
        sq3w: a.display(&sq3w),
        enumerated: 1u64 << n,
        witness,
    })
}

impl fmt::Display for TorsionShiftReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "degree-3 classes in the x-subring: {}",
            self.degree3_weight_zero
        )?;
        writeln!(
            f,
            "Sq^3 w4 = {} (weight one: {})",
            self.sq3w, self.sq3w_weight_one
        )?;
        writeln!(f, "classes z enumerated: {}", self.enumerated)?;
        match &self.witness {
            None => writeln!(f, "Sq^3(w4 + Sq^1 z) != 0 for every z: PASS"),
            Some(z) => writeln!(f, "FAIL: Sq^3(w4 + Sq^1 z) = 0 for z = {z}"),
        }
    }
}

/// A random homogeneous element of degree `d` in the quotient basis.
pub fn random_element<R: rand::Rng>(a: &SqAlgebra, d: u32, rng: &mut R) -> Result<MGPoly> {
    let mut out = MGPoly::zero();
    for m in a.basis(d)? {
        if rng.gen_bool(0.5) {
            out.add_term(m, F2::ONE);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn wu_examples() {
        let w = |j: usize| -> MGPoly { Poly::var(j - 1) };
        assert_eq!(wu_sq_w(3, 4, 4, true), &w(3) * &w(4));
        assert_eq!(wu_sq_w(0, 3, 4, true), w(3));
        assert_eq!(wu_sq_w(4, 4, 4, true), &w(4) * &w(4));
        assert_eq!(wu_sq_w(1, 2, 4, true), w(3));
        assert_eq!(wu_sq_w(1, 2, 4, false), &(&w(1) * &w(2)) + &w(3));
    }

    /// Wu's formula against the splitting principle: `w_j = e_j(t_1..t_n)`
    /// with `Sq t = t + t^2`.
    #[test]
    fn wu_matches_splitting_principle() {
        let n = 4u32;
        let gens: Vec<SqGen> = (0..n as usize)
            .map(|i| SqGen {
                name: format!("t{i}"),
                degree: 1,
                squares: vec![Poly::var(i), Poly::var(i).pow(2)],
                weight: 0,
            })
            .collect();
        let torus = SqAlgebra::new(gens, vec![], 8).unwrap();
        let e = |j: u32| -> MGPoly {
            let mut out = MGPoly::zero();
            for mask in 0u32..(1 << n) {
                if mask.count_ones() == j {
                    let m = Monomial::new((0..n).map(|i| (mask >> i) & 1).collect());
                    out.add_term(m, F2::ONE);
                }
            }
            out
        };
        for j in 1..=n {
            for i in 0..=j {
                let lhs = torus.sq(i, &e(j)).unwrap();
                let wu = wu_sq_w(i, j, n, false);
                let mut rhs = MGPoly::zero();
                for (m, _) in wu.terms() {
                    let mut t = MGPoly::one();
                    for (v, &ex) in m.exponents().iter().enumerate() {
                        t = &t * &e(v as u32 + 1).pow(ex);
                    }
                    rhs = rhs + t;
                }
                assert_eq!(lhs, rhs, "Sq^{i} w_{j}");
            }
        }
    }

    #[test]
    fn bso4_basics() {
        let a = bso4_ring(8).unwrap();
        let w4 = a.gen("w4").unwrap();
        assert_eq!(a.display(&a.sq(3, &w4).unwrap()), "w3*w4");
        assert!(a.ideal_is_sq_closed().unwrap());
        // 1/((1-t^2)(1-t^3)(1-t^4))
        assert_eq!(a.poincare_series(), vec![1, 0, 1, 1, 2, 1, 3, 2, 4]);
        let r = freeness_check(&a, &[a.gen("w2").unwrap(), a.gen("w3").unwrap(), w4], 8).unwrap();
        assert!(r.passed);
        assert_eq!(r.generators_per_degree.iter().sum::<usize>(), 1);
    }

    #[test]
    fn sq_examples() {
        let a = extraspecial_ring(8).unwrap();
        assert!(a.sq(1, &MGPoly::one()).unwrap().is_zero());
        let x1 = a.gen("x1").unwrap();
        let x2 = a.gen("x2").unwrap();
        let raw = a.sq_raw(1, &(&x1 * &x2));
        assert_eq!(raw, &(&(&x1 * &x1) * &x2) + &(&x1 * &(&x2 * &x2)));
        let u = &x1 * &a.gen("x3").unwrap();
        assert!(a.sq(3, &(&u * &u)).unwrap().is_zero());
    }

    #[test]
    fn extraspecial_structure() {
        let a = extraspecial_ring(10).unwrap();
        assert_eq!(a.ideal().len(), 2, "closure is (q, Sq^1 q)");
        assert_eq!(a.dim(1).unwrap(), 4);
        // x-part has series (1+t)(1+t+t^2)/(1-t)^2: 1,4,9,15,21,27,...; w4 adds a shifted copy.
        assert_eq!(&a.poincare_series()[..8], &[1, 4, 9, 15, 22, 31, 42, 54]);
        assert!(a.ideal_is_sq_closed().unwrap());
        let q = QuadraticForm::real_type().as_poly();
        assert!(a.reduce(&q).unwrap().is_zero());
        let s = a.structure.clone().unwrap();
        assert!(structure_map_is_sq_compatible(&a, &s).unwrap());
        let r = freeness_check(&a, &[s.w2.clone(), s.w3.clone(), s.w4.clone()], 8).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.generators_per_degree.iter().sum::<usize>(), 36);
    }

    #[test]
    fn splitting_is_orthogonal_and_anisotropic() {
        let q = QuadraticForm::real_type();
        let (p1, p2) = anisotropic_splitting(&q).unwrap();
        for v in span2(p1[0], p1[1]).into_iter().chain(span2(p2[0], p2[1])) {
            assert!(q.eval(v));
        }
        // The two planes give classes that differ by q.
        let a = extraspecial_ring(8).unwrap();
        let (w2, _) = representation_classes(&q).unwrap();
        let forms: Vec<u8> = (1u8..16)
            .filter(|&f| !pairing(f, p1[0]) && !pairing(f, p1[1]))
            .collect();
        let (m1, m2) = (linear_form(forms[0]), linear_form(forms[1]));
        let other = &(&m1 * &m1) + &(&(&m1 * &m2) + &(&m2 * &m2));
        assert_eq!(&w2 + &other, q.as_poly());
        assert_eq!(a.reduce(&w2).unwrap(), a.reduce(&other).unwrap());
    }

    #[test]
    fn torsion_shift_and_controls() {
        let a = extraspecial_ring(10).unwrap();
        let r = torsion_shift_check(&a).unwrap();
        assert!(r.passed, "{r}");
        assert_eq!(r.enumerated, 1 << 15);
        let broken = a.with_square("w4", 3, MGPoly::zero()).unwrap();
        let r = torsion_shift_check(&broken).unwrap();
        assert!(!r.passed);
        assert_eq!(r.witness.as_deref(), Some("0"));
    }

    #[test]
    fn extra_relation_breaks_freeness() {
        let a = extraspecial_ring(8).unwrap();
        let s = a.structure.clone().unwrap();
        let bad = a.with_extra_relation(a.parse("w4*x1").unwrap()).unwrap();
        let r = freeness_check(&bad, &[s.w2, s.w3, s.w4], 8).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failure.unwrap().0, 5);
    }

    #[test]
    fn parser() {
        let a = bso4_ring(8).unwrap();
        let p = a.parse("w2^2 + w3*w4 + 2*w2").unwrap();
        assert_eq!(a.display(&p), "w2^2 + w3*w4");
        assert!(a.parse("w5").is_err());
        assert!(a.parse("w2 +").is_err());
    }

    #[test]
    fn cartan_and_unstability_on_random_elements() {
        let a = extraspecial_ring(10).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let (df, dg) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
            let f = random_element(&a, df, &mut rng).unwrap();
            let g = random_element(&a, dg, &mut rng).unwrap();
            let fg = a.reduce(&(&f * &g)).unwrap();
            for k in 0..=(10 - df - dg) {
                let lhs = a.sq(k, &fg).unwrap();
                let mut rhs = MGPoly::zero();
                for i in 0..=k {
                    rhs = rhs + &a.sq(i, &f).unwrap() * &a.sq(k - i, &g).unwrap();
                }
                assert_eq!(lhs, a.reduce(&rhs).unwrap());
            }
            assert!(a.sq(df + 1, &f).unwrap().is_zero());
            assert_eq!(a.sq(df, &f).unwrap(), a.reduce(&(&f * &f)).unwrap());
        }
    }

    #[test]
    fn reduction_preserves_weight() {
        let a = extraspecial_ring(9).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let raw_monos = monomials_of_degree(a.gens(), 9);
        for target in 0..=2u32 {
            let pool: Vec<&Monomial> = raw_monos
                .iter()
                .filter(|m| a.monomial_weight(m) == target)
                .collect();
            for _ in 0..20 {
                let mut f = MGPoly::zero();
                for m in &pool {
                    if rng.gen_bool(0.3) {
                        f.add_term((*m).clone(), F2::ONE);
                    }
                }
                let red = a.reduce(&f).unwrap();
                assert!(red.terms().all(|(m, _)| a.monomial_weight(m) == target));
            }
        }
    }
}
