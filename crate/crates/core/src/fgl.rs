//! The 2-typical formal group law, its 2-series in the `v_i` generators, and
//! the `BP*`-module presentations of the skeleta `Y_2n` of `BZ/2`.
//!
//! The formal group law is built over `Q[m1, m2, ...]` from the logarithm
//! `log(x) = x + sum m_i x^(2^i)`. The generators are then *defined* by
//! `v_i := coefficient of x^(2^i) in [2](x)`, and the whole series is
//! rewritten in the `v_i` by inverting that triangular change of variables.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bp::{v_names, v_weights, BPElem, BpRing};
use crate::error::{Error, Result};
use crate::lattice::{snf, ZMat};
use crate::poly::{Monomial, Poly};
use crate::scalar::{has_odd_denominator, LocalInt2};

type Rat = BigRational;
type RatPoly = Poly<Rat>;

fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Power series in one variable, truncated above `x^bound`, with polynomial
/// coefficients. Index `j` holds the coefficient of `x^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C: crate::scalar::Coeff> {
    coeffs: Vec<Poly<C>>,
}

impl<C: crate::scalar::Coeff> TruncSeries<C> {
    pub fn zero(bound: usize) -> Self {
        Self {
            coeffs: vec![Poly::zero(); bound + 1],
        }
    }

    pub fn bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &Poly<C> {
        &self.coeffs[j]
    }

    pub fn set(&mut self, j: usize, p: Poly<C>) {
        if j <= self.bound() {
            self.coeffs[j] = p;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.bound(), other.bound(), "truncation mismatch");
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.bound(), other.bound(), "truncation mismatch");
        let n = self.bound();
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::zero(self.bound());
        acc.coeffs[0] = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Evaluates the polynomial `sum outer[j] y^j` at `y = self` (which must
    /// have no constant term), by Horner's rule.
    pub fn compose_into(&self, outer: &[Poly<C>]) -> Self {
        assert!(self.coeffs[0].is_zero(), "inner series must vanish at 0");
        let n = self.bound();
        let mut acc = Self::zero(n);
        for c in outer.iter().rev() {
            acc = acc.mul(self);
            acc.coeffs[0] = &acc.coeffs[0] + c;
        }
        acc
    }
}

/// `log(x) = x + sum_{2^i <= bound} m_i x^(2^i)` over `Q[m1..]`, variable `i-1` is `m_i`.
fn logarithm(bound: usize) -> TruncSeries<Rat> {
    let mut s = TruncSeries::zero(bound);
    s.set(1, Poly::one());
    let mut i = 1;
    while (1usize << i) <= bound {
        s.set(1 << i, Poly::var(i - 1));
        i += 1;
    }
    s
}

fn log_terms(bound: usize) -> Vec<(usize, RatPoly)> {
    let mut out = Vec::new();
    let mut i = 1;
    while (1usize << i) <= bound {
        out.push((1usize << i, Poly::var(i - 1)));
        i += 1;
    }
    out
}

/// Compositional inverse of the logarithm: `exp(log(x)) = x`.
fn exponential(bound: usize) -> TruncSeries<Rat> {
    let terms = log_terms(bound);
    let mut e = TruncSeries::zero(bound);
    e.set(1, Poly::one());
    for j in 2..=bound {
        // log(E(y)) = y forces a_j = -sum_i m_i [y^j] E^(2^i), and the right
        // side only sees a_1..a_{j-1}.
        let mut partial = TruncSeries::zero(j);
        for l in 1..j {
            partial.set(l, e.coeff(l).clone());
        }
        let mut a = RatPoly::zero();
        let mut power = partial.clone();
        let mut p = 1usize;
        for (deg, m) in &terms {
            while p < *deg {
                power = power.mul(&power);
                p *= 2;
            }
            if *deg > j {
                break;
            }
            a = a - m * power.coeff(j);
        }
        e.set(j, a);
    }
    e
}

/// Bivariate truncated series in `x, y` by total degree; key `(i, j)`.
#[derive(Clone, Debug)]
struct Bivariate {
    bound: usize,
    coeffs: Vec<Vec<RatPoly>>,
}

impl Bivariate {
    fn zero(bound: usize) -> Self {
        Self {
            bound,
            coeffs: (0..=bound)
                .map(|i| vec![Poly::zero(); bound + 1 - i])
                .collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.bound;
        let mut out = Self::zero(n);
        for i1 in 0..=n {
            for j1 in 0..=n - i1 {
                let a = &self.coeffs[i1][j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=n - i1 - j1 {
                    for j2 in 0..=n - i1 - j1 - i2 {
                        let b = &other.coeffs[i2][j2];
                        if b.is_zero() {
                            continue;
                        }
                        let t = &out.coeffs[i1 + i2][j1 + j2] + &(a * b);
                        out.coeffs[i1 + i2][j1 + j2] = t;
                    }
                }
            }
        }
        out
    }
}

/// The formal sum `F(x, y) = exp(log x + log y)` over `Q[m]`.
fn formal_sum(bound: usize) -> Bivariate {
    let exp = exponential(bound);
    let mut s = Bivariate::zero(bound);
    let log = logarithm(bound);
    for d in 1..=bound {
        s.coeffs[d][0] = log.coeff(d).clone();
        s.coeffs[0][d] = log.coeff(d).clone();
    }
    let mut acc = Bivariate::zero(bound);
    for j in (1..=bound).rev() {
        acc = acc.mul(&s);
        acc.coeffs[0][0] = &acc.coeffs[0][0] + exp.coeff(j);
    }
    acc.mul(&s)
}

/// `[2](x) = exp(2 log x)` over `Q[m]`.
fn two_series_rational(bound: usize) -> TruncSeries<Rat> {
    let exp = exponential(bound);
    let two_log = logarithm(bound).scale(&rat(2));
    let outer: Vec<RatPoly> = (0..=bound).map(|j| exp.coeff(j).clone()).collect();
    two_log.compose_into(&outer)
}

/// Number of auxiliary generators `m_i` with `2^i <= bound`.
fn generator_count(bound: usize) -> usize {
    let mut i = 0;
    while (1usize << (i + 1)) <= bound {
        i += 1;
    }
    i
}

/// The change of variables between `m_i` and `v_i`.
#[derive(Clone, Debug)]
pub struct VBasis {
    /// `v_i` as a polynomial in the `m_j`.
    pub v_of_m: Vec<RatPoly>,
    /// `m_i` as a polynomial in the `v_j`.
    pub m_of_v: Vec<RatPoly>,
}

fn v_basis(series_m: &TruncSeries<Rat>) -> VBasis {
    let count = generator_count(series_m.bound());
    let mut v_of_m = Vec::with_capacity(count);
    let mut m_of_v: Vec<RatPoly> = Vec::with_capacity(count);
    for i in 1..=count {
        let e = series_m.coeff(1 << i).clone();
        v_of_m.push(e.clone());
        // e = (2 - 2^(2^i)) m_i + rest(m_<i)
        let lead = rat(2) - rat(2).pow(1 << i);
        let rest = e - Poly::var(i - 1).scale(&lead);
        let mut images = m_of_v.clone();
        images.push(Poly::zero());
        let rest_v = rest.substitute(&images);
        let mi = (Poly::var(i - 1) - rest_v).scale(&(Rat::one() / lead));
        m_of_v.push(mi);
    }
    VBasis { v_of_m, m_of_v }
}

/// The 2-series `[2](c1) = sum_j a_j c1^j` with `a_j in BP^(2-2j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CSeries {
    pub bound: usize,
    /// `coeffs[j - 1]` is the coefficient of `c1^j`.
    coeffs: Vec<BPElem>,
    /// Number of `v_i` generators in use.
    pub k: usize,
}

impl CSeries {
    /// Coefficient of `c1^j` (zero beyond the bound or for `j = 0`).
    pub fn coeff(&self, j: usize) -> BPElem {
        if j == 0 || j > self.bound {
            BPElem::zero()
        } else {
            self.coeffs[j - 1].clone()
        }
    }

    pub fn coeffs(&self) -> &[BPElem] {
        &self.coeffs
    }

    /// Checks that `a_j` is homogeneous of degree `2 - 2j`.
    pub fn degrees_ok(&self) -> bool {
        let w = v_weights(self.k);
        self.coeffs.iter().enumerate().all(|(idx, a)| {
            let j = idx as i64 + 1;
            a.is_zero() || a.homogeneous_degree(&w) == Some(2 - 2 * j)
        })
    }

    /// Canonical text, e.g. `2*c1 + v1*c1^2 + 2*v1^2*c1^3 + v2*c1^4`.
    pub fn to_text(&self) -> String {
        let names = v_names(self.k);
        let mut out = String::new();
        for (idx, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let j = idx + 1;
            let power = if j == 1 {
                "c1".to_string()
            } else {
                format!("c1^{j}")
            };
            let text = a.display_with(&names);
            let (neg, body) = if a.len() == 1 {
                match text.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, text),
                }
            } else {
                (false, format!("({text})"))
            };
            let term = if body == "1" {
                power
            } else {
                format!("{body}*{power}")
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl fmt::Display for CSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn to_local(p: &RatPoly, exponent: usize) -> Result<BPElem> {
    p.try_map_coeffs(|c| {
        if has_odd_denominator(c) {
            LocalInt2::from_big(c).ok_or_else(|| Error::NotIntegral {
                exponent,
                value: format!("{c} (exceeds fixed-width range)"),
            })
        } else {
            Err(Error::NotIntegral {
                exponent,
                value: c.to_string(),
            })
        }
    })
}

/// Full computation with the intermediate data kept for cross-checks.
#[derive(Clone, Debug)]
pub struct TwoSeriesData {
    pub series: CSeries,
    pub series_m: TruncSeries<Rat>,
    pub basis: VBasis,
}

/// Computes `[2](c1)` through `c1^bound` in the `v_i` generators.
pub fn two_series_data(bound: usize, ring: BpRing) -> Result<TwoSeriesData> {
    if bound == 0 {
        return Err(Error::Invalid("truncation bound must be at least 1".into()));
    }
    ring.check_degree(2 - 2 * bound as i64)?;
    let series_m = two_series_rational(bound);
    let basis = v_basis(&series_m);
    let mut coeffs = Vec::with_capacity(bound);
    for j in 1..=bound {
        let in_v = series_m.coeff(j).substitute(&basis.m_of_v);
        coeffs.push(to_local(&in_v, j)?);
    }
    Ok(TwoSeriesData {
        series: CSeries {
            bound,
            coeffs,
            k: ring.k,
        },
        series_m,
        basis,
    })
}

pub fn two_series(bound: usize, ring: BpRing) -> Result<CSeries> {
    Ok(two_series_data(bound, ring)?.series)
}

/// Outcome of a coefficientwise identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesCheck {
    pub name: String,
    pub bound: usize,
    /// First exponent where the two sides differ.
    pub first_mismatch: Option<usize>,
}

impl SeriesCheck {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// `[2](x) = F(x, x)` with `F` the bivariate formal sum, over `Q[m]`.
pub fn check_formal_sum(data: &TwoSeriesData) -> SeriesCheck {
    let bound = data.series_m.bound();
    let f = formal_sum(bound);
    let mut first_mismatch = None;
    for d in 1..=bound {
        let mut diag = RatPoly::zero();
        for i in 0..=d {
            diag = &diag + &f.coeffs[i][d - i];
        }
        if &diag != data.series_m.coeff(d) {
            first_mismatch = Some(d);
            break;
        }
    }
    SeriesCheck {
        name: "two-series equals F(x,x)".into(),
        bound,
        first_mismatch,
    }
}

/// `log([2](x)) = 2 log(x)`, evaluated in the `v_i` with `m_i = m_i(v)`.
pub fn check_logarithm(data: &TwoSeriesData) -> SeriesCheck {
    let bound = data.series.bound;
    let mut s = TruncSeries::<Rat>::zero(bound);
    for j in 1..=bound {
        s.set(j, data.series.coeff(j).map_coeffs(LocalInt2::to_big));
    }
    let mut lhs = s.clone();
    let mut rhs = TruncSeries::zero(bound);
    rhs.set(1, Poly::constant(rat(2)));
    for (i, m) in data.basis.m_of_v.iter().enumerate() {
        let p = 1usize << (i + 1);
        lhs = lhs.add(&s.pow(p as u32).mul_poly(m));
        let mut t = TruncSeries::zero(bound);
        t.set(p, m.scale(&rat(2)));
        rhs = rhs.add(&t);
    }
    let first_mismatch = (1..=bound).find(|&j| lhs.coeff(j) != rhs.coeff(j));
    SeriesCheck {
        name: "log of two-series equals twice log".into(),
        bound,
        first_mismatch,
    }
}

/// The substitutions `m -> v -> m` and `v -> m -> v` are both the identity.
pub fn check_round_trip(data: &TwoSeriesData) -> SeriesCheck {
    let b = &data.basis;
    let count = b.m_of_v.len();
    let mut first_mismatch = None;
    for i in 0..count {
        let v_back = b.v_of_m[i].substitute(&b.m_of_v);
        let m_back = b.m_of_v[i].substitute(&b.v_of_m);
        if v_back != Poly::var(i) || m_back != Poly::var(i) {
            first_mismatch = Some(1 << (i + 1));
            break;
        }
    }
    SeriesCheck {
        name: "generator change round trip".into(),
        bound: data.series.bound,
        first_mismatch,
    }
}

impl TruncSeries<Rat> {
    fn mul_poly(&self, p: &RatPoly) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
        }
    }
}

/// A relation `sum_g coeffs[g] * g = 0` of a fixed degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub degree: i64,
    pub coeffs: Vec<BPElem>,
}

/// A finitely presented graded `BP*`-module.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FPModule {
    pub gen_degrees: Vec<i64>,
    pub relations: Vec<Relation>,
    pub k: usize,
}

impl FPModule {
    /// Validates homogeneity: every nonzero entry of a relation has degree
    /// `relation degree - generator degree`.
    pub fn new(gen_degrees: Vec<i64>, relations: Vec<Relation>, k: usize) -> Result<Self> {
        let w = v_weights(k);
        for (ri, r) in relations.iter().enumerate() {
            if r.coeffs.len() != gen_degrees.len() {
                return Err(Error::Invalid(format!(
                    "relation {ri} has {} entries for {} generators",
                    r.coeffs.len(),
                    gen_degrees.len()
                )));
            }
            for (g, c) in r.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if c.terms().any(|(m, _)| m.width() > k) {
                    return Err(Error::Invalid(format!(
                        "relation {ri} uses a generator beyond v{k}"
                    )));
                }
                if c.homogeneous_degree(&w) != Some(r.degree - gen_degrees[g]) {
                    return Err(Error::Invalid(format!(
                        "relation {ri} is not homogeneous of degree {} at generator {g}",
                        r.degree
                    )));
                }
            }
        }
        Ok(Self {
            gen_degrees,
            relations,
            k,
        })
    }

    pub fn free(gen_degrees: Vec<i64>, k: usize) -> Self {
        Self {
            gen_degrees,
            relations: Vec::new(),
            k,
        }
    }

    pub fn zero(k: usize) -> Self {
        Self {
            gen_degrees: vec![0],
            relations: vec![Relation {
                degree: 0,
                coeffs: vec![BPElem::one()],
            }],
            k,
        }
    }

    pub fn ngens(&self) -> usize {
        self.gen_degrees.len()
    }

    pub fn ring(&self) -> BpRing {
        BpRing { k: self.k }
    }

    pub fn max_gen_degree(&self) -> Option<i64> {
        self.gen_degrees.iter().copied().max()
    }

    pub fn max_relation_degree(&self) -> Option<i64> {
        self.relations.iter().map(|r| r.degree).max()
    }

    /// Index of the free cover's basis in degree `d`: `(generator, monomial)`.
    pub fn free_basis(&self, d: i64) -> Result<Vec<(usize, Monomial)>> {
        let ring = self.ring();
        let mut out = Vec::new();
        for (g, &gd) in self.gen_degrees.iter().enumerate() {
            for m in ring.basis(d - gd)? {
                out.push((g, m));
            }
        }
        Ok(out)
    }

    /// Basis of the relation module in degree `d`: `(relation, multiplier)`.
    pub fn relation_basis(&self, d: i64) -> Result<Vec<(usize, Monomial)>> {
        let ring = self.ring();
        let mut out = Vec::new();
        for (r, rel) in self.relations.iter().enumerate() {
            for m in ring.basis(d - rel.degree)? {
                out.push((r, m));
            }
        }
        Ok(out)
    }

    /// Matrix of the relation map `F1_d -> F0_d` in the bases above.
    pub fn relation_matrix(&self, d: i64) -> Result<ZMat> {
        let rows = self.free_basis(d)?;
        let cols = self.relation_basis(d)?;
        Ok(self.relation_matrix_in(&rows, &cols))
    }

    pub(crate) fn relation_matrix_in(
        &self,
        rows: &[(usize, Monomial)],
        cols: &[(usize, Monomial)],
    ) -> ZMat {
        let index: std::collections::HashMap<&(usize, Monomial), usize> =
            rows.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut a = ZMat::zeros(rows.len(), cols.len());
        for (c, (r, mult)) in cols.iter().enumerate() {
            for (g, coeff) in self.relations[*r].coeffs.iter().enumerate() {
                for (m, x) in coeff.terms() {
                    let key = (g, m.mul(mult));
                    let i = index[&key];
                    a[(i, c)] += *x;
                }
            }
        }
        a
    }
}

/// Presentation of `BP*Y_2n`: generators `c1^0..c1^n` in degrees `0..2n`
/// and relations `R_j = sum_i a_i c1^(j-1+i)`, `j = 1..n`, with `c1^(n+1) = 0`.
pub fn skeleton_presentation(n: usize, series: &CSeries) -> Result<FPModule> {
    if n > series.bound {
        return Err(Error::DegreeBound {
            needed: n as u32,
            bound: series.bound as u32,
        });
    }
    let gen_degrees: Vec<i64> = (0..=n as i64).map(|l| 2 * l).collect();
    let mut relations = Vec::with_capacity(n);
    for j in 1..=n {
        let mut coeffs = vec![BPElem::zero(); n + 1];
        for i in 1..=n + 1 - j {
            coeffs[j - 1 + i] = series.coeff(i);
        }
        relations.push(Relation {
            degree: 2 * j as i64,
            coeffs,
        });
    }
    FPModule::new(gen_degrees, relations, series.k)
}

/// Convenience: the presentation for `n` with a freshly computed series.
pub fn skeleton(n: usize, ring: BpRing) -> Result<FPModule> {
    let series = two_series(n.max(1), ring)?;
    skeleton_presentation(n, &series)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub n: usize,
    pub window: (i64, i64),
    pub degrees_checked: usize,
    /// First degree where the relation map has a kernel, with its rank.
    pub first_failure: Option<(i64, usize)>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks that the relation map of `BP*Y_2n` is injective degreewise, so the
/// presentation is a free resolution of length one.
pub fn resolution_exactness_check(
    n: usize,
    window: (i64, i64),
    ring: BpRing,
) -> Result<ExactnessReport> {
    let module = skeleton(n, ring)?;
    let (lo, hi) = window;
    let mut degrees_checked = 0;
    let mut first_failure = None;
    for d in lo..=hi {
        let a = module.relation_matrix(d)?;
        degrees_checked += 1;
        let rank = snf(&a).rank;
        if rank < a.cols() {
            first_failure = Some((d, a.cols() - rank));
            break;
        }
    }
    Ok(ExactnessReport {
        n,
        window,
        degrees_checked,
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bp::{bp_int, v};

    fn ring(k: usize) -> BpRing {
        BpRing::new(k).unwrap()
    }

    #[test]
    fn low_coefficients() {
        let s = two_series(4, ring(3)).unwrap();
        assert_eq!(s.coeff(1), bp_int(2));
        assert_eq!(s.coeff(2), v(1));
        assert_eq!(s.coeff(3), v(1).pow(2).scale(&LocalInt2::from(2)));
        assert_eq!(s.coeff(4), v(2));
        assert_eq!(s.to_text(), "2*c1 + v1*c1^2 + 2*v1^2*c1^3 + v2*c1^4");
    }

    #[test]
    fn auxiliary_coefficients_by_hand() {
        // In the m-basis: [2](x) = 2x - 2 m1 x^2 + 8 m1^2 x^3 + (-14 m2 - 36 m1^3) x^4 + ...
        let s = two_series_rational(4);
        let m1 = RatPoly::var(0);
        let m2 = RatPoly::var(1);
        assert_eq!(s.coeff(2), &m1.scale(&rat(-2)));
        assert_eq!(s.coeff(3), &m1.pow(2).scale(&rat(8)));
        assert_eq!(
            s.coeff(4),
            &(m2.scale(&rat(-14)) + m1.pow(3).scale(&rat(-36)))
        );
    }

    #[test]
    fn exponential_inverts_logarithm() {
        let n = 9;
        let log = logarithm(n);
        let exp = exponential(n);
        let outer: Vec<RatPoly> = (0..=n).map(|j| exp.coeff(j).clone()).collect();
        let id = log.compose_into(&outer);
        for j in 0..=n {
            let expect = if j == 1 {
                RatPoly::one()
            } else {
                RatPoly::zero()
            };
            assert_eq!(id.coeff(j), &expect, "x^{j}");
        }
    }

    #[test]
    fn degrees_and_checks() {
        let data = two_series_data(8, ring(3)).unwrap();
        assert!(data.series.degrees_ok());
        assert!(check_formal_sum(&data).passed());
        assert!(check_logarithm(&data).passed());
        assert!(check_round_trip(&data).passed());
    }

    #[test]
    fn capacity_error() {
        assert!(matches!(
            two_series(16, ring(3)),
            Err(Error::Capacity { .. })
        ));
        assert!(two_series(15, ring(3)).is_ok());
    }

    #[test]
    fn skeleton_shapes() {
        let s = two_series(4, ring(3)).unwrap();
        let m0 = skeleton_presentation(0, &s).unwrap();
        assert_eq!(m0.gen_degrees, vec![0]);
        assert!(m0.relations.is_empty());
        let m1 = skeleton_presentation(1, &s).unwrap();
        assert_eq!(m1.relations.len(), 1);
        assert_eq!(m1.relations[0].coeffs, vec![BPElem::zero(), bp_int(2)]);
        let m4 = skeleton_presentation(4, &s).unwrap();
        assert_eq!(m4.gen_degrees, vec![0, 2, 4, 6, 8]);
        assert_eq!(m4.relations[3].coeffs[4], bp_int(2));
        assert_eq!(m4.relations[0].coeffs[1..], s.coeffs()[..4]);
        assert_eq!(m4.relations[0].degree, 2);
    }

    #[test]
    fn resolutions_are_exact() {
        for n in [0, 1, 4] {
            let r = resolution_exactness_check(n, (-20, 8), ring(3)).unwrap();
            assert!(r.is_exact(), "n={n}: {r:?}");
        }
    }

    #[test]
    fn non_homogeneous_relation_rejected() {
        let bad = Relation {
            degree: 2,
            coeffs: vec![v(1), bp_int(2)],
        };
        assert!(FPModule::new(vec![0, 2], vec![bad], 3).is_err());
    }
}
