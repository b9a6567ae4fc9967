//! Graded `BP*`-modules realized degree by degree.
//!
//! A module in degree `d` is the cokernel of its relation matrix, which we
//! keep in a reduced form (one coordinate per cyclic summand) so that maps
//! between degrees stay small. `Tor_1` is computed as the first homology of
//! a free resolution tensored with a module.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bp::{bp_basis, v_weights, BPElem, BpRing};
use crate::error::{Error, Result};
use crate::fgl::{resolution_exactness_check, skeleton_presentation, CSeries, FPModule, Relation};
use crate::lattice::{coordinates, image_basis, kernel, quotient, snf, AbGroup, ZMat};
use crate::matrix::Matrix;
use crate::poly::{Monomial, Poly};
use crate::scalar::LocalInt2;

/// Abelian-group invariants over a finite window of degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreewiseModule {
    pub label: String,
    pub lo: i64,
    pub hi: i64,
    groups: Vec<AbGroup>,
    /// Notes on automatic padding and range decisions.
    pub audit: Vec<String>,
}

impl DegreewiseModule {
    fn new(label: impl Into<String>, lo: i64, hi: i64) -> Self {
        Self {
            label: label.into(),
            lo,
            hi,
            groups: vec![AbGroup::zero(); (hi - lo + 1).max(0) as usize],
            audit: Vec::new(),
        }
    }

    fn set(&mut self, d: i64, g: AbGroup) {
        self.groups[(d - self.lo) as usize] = g;
    }

    pub fn get(&self, d: i64) -> Result<&AbGroup> {
        if d < self.lo || d > self.hi {
            return Err(Error::OutOfWindow {
                degree: d,
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(&self.groups[(d - self.lo) as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &AbGroup)> {
        (self.lo..=self.hi).zip(self.groups.iter())
    }

    pub fn nonzero(&self) -> Vec<(i64, AbGroup)> {
        self.iter()
            .filter(|(_, g)| !g.is_zero())
            .map(|(d, g)| (d, g.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.groups.iter().all(AbGroup::is_zero)
    }

    /// Same invariants on the same window (labels and audit ignored).
    pub fn same_invariants(&self, other: &Self) -> bool {
        self.lo == other.lo && self.hi == other.hi && self.groups == other.groups
    }
}

impl fmt::Display for DegreewiseModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} on [{}, {}]", self.label, self.lo, self.hi)?;
        let nz = self.nonzero();
        if nz.is_empty() {
            writeln!(f, "  0 in every degree")?;
        }
        for (d, g) in nz {
            writeln!(f, "  {d:>4}: {g}")?;
        }
        Ok(())
    }
}

/// A cokernel `Z^n / R` rewritten with one coordinate per cyclic summand.
#[derive(Clone, Debug)]
pub(crate) struct Reduced {
    basis: Vec<(usize, Monomial)>,
    /// Reduced coordinates of an ambient vector (`g x n`).
    proj: ZMat,
    /// Ambient lift of reduced coordinates (`n x g`).
    sect: ZMat,
    /// `Some(e)` for a `Z/2^e` coordinate, `None` for a free one.
    orders: Vec<Option<u32>>,
}

impl Reduced {
    fn from_relations(basis: Vec<(usize, Monomial)>, rel: &ZMat) -> Self {
        let n = basis.len();
        let s = snf(rel);
        let mut keep = Vec::new();
        let mut orders = Vec::new();
        for i in 0..n {
            if i < s.rank {
                let e = s.diagonal[i].valuation().expect("nonzero invariant");
                if e > 0 {
                    keep.push(i);
                    orders.push(Some(e));
                }
            } else {
                keep.push(i);
                orders.push(None);
            }
        }
        Self {
            basis,
            proj: s.u.select_rows(&keep),
            sect: s.u_inv.select_cols(&keep),
            orders,
        }
    }

    pub(crate) fn ngens(&self) -> usize {
        self.orders.len()
    }

    pub(crate) fn group(&self) -> AbGroup {
        AbGroup::new(
            self.orders.iter().filter(|o| o.is_none()).count(),
            self.orders.iter().flatten().copied().collect(),
        )
    }

    /// Relation lattice in reduced coordinates.
    pub(crate) fn relations(&self) -> ZMat {
        let cols: Vec<Vec<LocalInt2>> = self
            .orders
            .iter()
            .enumerate()
            .filter_map(|(i, o)| {
                o.map(|e| {
                    let mut c = vec![LocalInt2::zero(); self.ngens()];
                    c[i] = LocalInt2::pow2(e);
                    c
                })
            })
            .collect();
        Matrix::from_cols(self.ngens(), &cols)
    }
}

/// Degreewise realization of a module over a range, with reduced coordinates.
pub(crate) struct Realization {
    lo: i64,
    hi: i64,
    degrees: BTreeMap<i64, Reduced>,
}

impl Realization {
    pub(crate) fn new(module: &FPModule, lo: i64, hi: i64) -> Result<Self> {
        let mut degrees = BTreeMap::new();
        let top = module.max_gen_degree().unwrap_or(lo - 1);
        for d in lo..=hi {
            if d > top {
                degrees.insert(d, Reduced::from_relations(Vec::new(), &ZMat::zeros(0, 0)));
                continue;
            }
            let rows = module.free_basis(d)?;
            let cols = module.relation_basis(d)?;
            let rel = module.relation_matrix_in(&rows, &cols);
            degrees.insert(d, Reduced::from_relations(rows, &rel));
        }
        Ok(Self { lo, hi, degrees })
    }

    pub(crate) fn at(&self, d: i64) -> &Reduced {
        assert!(d >= self.lo && d <= self.hi, "degree {d} not realized");
        &self.degrees[&d]
    }

    /// Multiplication by `a` (homogeneous of degree `a_deg`) from degree `d`
    /// to degree `d + a_deg`, in reduced coordinates.
    pub(crate) fn mult(&self, a: &BPElem, a_deg: i64, d: i64) -> ZMat {
        let src = self.at(d);
        let tgt = self.at(d + a_deg);
        let mut out = ZMat::zeros(tgt.ngens(), src.ngens());
        if a.is_zero() || src.ngens() == 0 || tgt.ngens() == 0 {
            return out;
        }
        let index: HashMap<&(usize, Monomial), usize> =
            tgt.basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        for c in 0..src.ngens() {
            let mut amb = vec![LocalInt2::zero(); tgt.basis.len()];
            for (j, (g, mu)) in src.basis.iter().enumerate() {
                let x = src.sect[(j, c)];
                if x.is_zero() {
                    continue;
                }
                for (m, y) in a.terms() {
                    let i = index[&(*g, mu.mul(m))];
                    amb[i] += x * *y;
                }
            }
            let red = tgt.proj.mul_vec(&amb);
            for (r, val) in red.into_iter().enumerate() {
                out[(r, c)] = val;
            }
        }
        out
    }
}

/// A map of free graded `BP*`-modules; `entries[s][t]` is the coefficient of
/// target generator `t` in the image of source generator `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeMap {
    pub src_degrees: Vec<i64>,
    pub tgt_degrees: Vec<i64>,
    pub entries: Vec<Vec<BPElem>>,
}

impl FreeMap {
    /// The relation map `F1 -> F0` of a presentation.
    pub fn of_presentation(m: &FPModule) -> Self {
        Self {
            src_degrees: m.relations.iter().map(|r| r.degree).collect(),
            tgt_degrees: m.gen_degrees.clone(),
            entries: m.relations.iter().map(|r| r.coeffs.clone()).collect(),
        }
    }

    fn empty(tgt_degrees: Vec<i64>) -> Self {
        Self {
            src_degrees: Vec::new(),
            tgt_degrees,
            entries: Vec::new(),
        }
    }
}

/// Degrees of the blocks of `M (x) F` in internal degree `t`.
fn block_degrees(t: i64, gen_degrees: &[i64]) -> Vec<i64> {
    gen_degrees.iter().map(|g| t - g).collect()
}

fn block_relations(real: &Realization, degs: &[i64]) -> ZMat {
    let blocks: Vec<ZMat> = degs.iter().map(|&d| real.at(d).relations()).collect();
    Matrix::block_diag(&blocks)
}

fn block_size(real: &Realization, degs: &[i64]) -> usize {
    degs.iter().map(|&d| real.at(d).ngens()).sum()
}

/// Matrix of `M (x) f` in internal degree `t`.
fn tensor_map(real: &Realization, f: &FreeMap, t: i64) -> ZMat {
    let src = block_degrees(t, &f.src_degrees);
    let tgt = block_degrees(t, &f.tgt_degrees);
    let rows = block_size(real, &tgt);
    let cols = block_size(real, &src);
    let mut out = ZMat::zeros(rows, cols);
    let mut c0 = 0;
    for (s, &sd) in src.iter().enumerate() {
        let sc = real.at(sd).ngens();
        let mut r0 = 0;
        for (g, &gd) in tgt.iter().enumerate() {
            let gr = real.at(gd).ngens();
            let a = &f.entries[s][g];
            if !a.is_zero() && sc > 0 && gr > 0 {
                let block = real.mult(a, gd - sd, sd);
                for i in 0..gr {
                    for j in 0..sc {
                        out[(r0 + i, c0 + j)] = block[(i, j)];
                    }
                }
            }
            r0 += gr;
        }
        c0 += sc;
    }
    out
}

/// Basis of `{x : phi x in span(tgt_rel)}`.
fn kernel_mod(phi: &ZMat, tgt_rel: &ZMat) -> ZMat {
    let n = phi.cols();
    if phi.rows() == 0 {
        return ZMat::identity(n);
    }
    let k = kernel(&phi.hcat(tgt_rel));
    image_basis(&k.top(n))
}

/// First homology of `M (x) (F2 -> F1 -> F0)` in internal degree `t`.
fn tensor_homology(real: &Realization, d1: &FreeMap, d2: &FreeMap, t: i64) -> Result<AbGroup> {
    let mid = block_degrees(t, &d1.src_degrees);
    let n = block_size(real, &mid);
    if n == 0 {
        return Ok(AbGroup::zero());
    }
    let phi = tensor_map(real, d1, t);
    let tgt_rel = block_relations(real, &block_degrees(t, &d1.tgt_degrees));
    let k = kernel_mod(&phi, &tgt_rel);
    let mut sub = block_relations(real, &mid);
    if !d2.src_degrees.is_empty() {
        sub = sub.hcat(&tensor_map(real, d2, t));
    }
    quotient(&k, &sub)
}

fn degree_span(degs: &[&[i64]]) -> (i64, i64) {
    let all: Vec<i64> = degs.iter().flat_map(|d| d.iter().copied()).collect();
    (
        all.iter().copied().min().unwrap_or(0),
        all.iter().copied().max().unwrap_or(0),
    )
}

/// Degreewise invariants of `M`.
pub fn realize(m: &FPModule, window: (i64, i64)) -> Result<DegreewiseModule> {
    let (lo, hi) = window;
    let real = Realization::new(m, lo, hi)?;
    let mut out = DegreewiseModule::new("module", lo, hi);
    for d in lo..=hi {
        out.set(d, real.at(d).group());
    }
    Ok(out)
}

/// `M (x)_{BP*} Z_(2)`: all `v_i` act by zero.
pub fn tensor_unit(m: &FPModule, window: (i64, i64)) -> Result<DegreewiseModule> {
    tensor_constant(m, window, false)
}

/// `M (x)_{BP*} Z/2`.
pub fn tensor_mod2(m: &FPModule, window: (i64, i64)) -> Result<DegreewiseModule> {
    tensor_constant(m, window, true)
}

fn tensor_constant(m: &FPModule, window: (i64, i64), mod2: bool) -> Result<DegreewiseModule> {
    let (lo, hi) = window;
    let label = if mod2 { "M (x) Z/2" } else { "M (x) Z_(2)" };
    let mut out = DegreewiseModule::new(label, lo, hi);
    for d in lo..=hi {
        let gens: Vec<usize> = (0..m.ngens()).filter(|&g| m.gen_degrees[g] == d).collect();
        if gens.is_empty() {
            continue;
        }
        let mut cols: Vec<Vec<LocalInt2>> = m
            .relations
            .iter()
            .filter(|r| r.degree == d)
            .map(|r| gens.iter().map(|&g| r.coeffs[g].constant_term()).collect())
            .collect();
        if mod2 {
            for i in 0..gens.len() {
                let mut c = vec![LocalInt2::zero(); gens.len()];
                c[i] = LocalInt2::from(2);
                cols.push(c);
            }
        }
        let a = Matrix::from_cols(gens.len(), &cols);
        out.set(d, crate::lattice::cokernel(&a));
    }
    Ok(out)
}

/// `Tor_1(M, BP*Y_2n)` from the length-one resolution given by the
/// presentation. Indexed by total degree `i`: the internal degree is `i + 1`,
/// so a tuple `(x_1, .., x_n)` in total degree `i` has `x_j` in degree
/// `i + 1 - 2j`.
pub fn tor1_via_resolution(
    m: &FPModule,
    series: &CSeries,
    n: usize,
    window: (i64, i64),
) -> Result<DegreewiseModule> {
    let (lo, hi) = window;
    let ring = m.ring();
    let y = skeleton_presentation(n, series)?;
    let mut out = DegreewiseModule::new(format!("Tor_1(M, BP*Y_{})", 2 * n), lo, hi);
    let Some(top) = m.max_gen_degree() else {
        return Ok(out);
    };
    if n == 0 {
        out.audit.push("free module: Tor_1 vanishes".into());
        return Ok(out);
    }
    let check_window = (lo + 1 - top, hi + 1);
    let exact = resolution_exactness_check(n, check_window, ring)?;
    if !exact.is_exact() {
        return Err(Error::Invalid(format!(
            "relation map of BP*Y_{} is not injective in degree {:?}",
            2 * n,
            exact.first_failure
        )));
    }
    out.audit.push(format!(
        "resolution exactness checked on internal degrees [{}, {}]",
        check_window.0, check_window.1
    ));
    let d1 = FreeMap::of_presentation(&y);
    let d2 = FreeMap::empty(d1.src_degrees.clone());
    let (dmin, dmax) = degree_span(&[&d1.src_degrees, &d1.tgt_degrees]);
    let real = Realization::new(m, lo + 1 - dmax, hi + 1 - dmin)?;
    out.audit.push(format!(
        "module realized on [{}, {}] (window padded by generator degrees {dmin}..{dmax})",
        lo + 1 - dmax,
        hi + 1 - dmin
    ));
    for i in lo..=hi {
        out.set(i, tensor_homology(&real, &d1, &d2, i + 1)?);
    }
    Ok(out)
}

/// Syzygies of the relations of `b`, generated in degrees `>= floor`:
/// returns the map `F2 -> F1` onto the relation generators.
pub fn syzygies(b: &FPModule, floor: i64) -> Result<FreeMap> {
    let f1 = FreeMap::of_presentation(b);
    let mut gens: Vec<(i64, Vec<BPElem>)> = Vec::new();
    let Some(top) = b.max_relation_degree() else {
        return Ok(FreeMap::empty(f1.src_degrees));
    };
    let mut d = top;
    while d >= floor {
        let cols = b.relation_basis(d)?;
        if !cols.is_empty() {
            let rows = b.free_basis(d)?;
            let a = b.relation_matrix_in(&rows, &cols);
            let z = kernel(&a);
            if z.cols() > 0 {
                let index: HashMap<&(usize, Monomial), usize> =
                    cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
                let mut old: Vec<Vec<LocalInt2>> = Vec::new();
                for (sd, s) in &gens {
                    for nu in bp_basis(d - sd, b.k) {
                        let mut v = vec![LocalInt2::zero(); cols.len()];
                        for (r, coeff) in s.iter().enumerate() {
                            for (m, x) in coeff.terms() {
                                let i = index[&(r, m.mul(&nu))];
                                v[i] += *x;
                            }
                        }
                        old.push(v);
                    }
                }
                let fresh: Vec<Vec<LocalInt2>> = if old.is_empty() {
                    z.col_vectors()
                } else {
                    let coords = coordinates(&z, &Matrix::from_cols(cols.len(), &old))
                        .ok_or_else(|| Error::Invalid("syzygy outside kernel".into()))?;
                    let s = snf(&coords);
                    (0..z.cols())
                        .filter(|&i| i >= s.rank || !s.diagonal[i].is_unit())
                        .map(|i| z.mul_vec(&s.u_inv.col(i)))
                        .collect()
                };
                for v in fresh {
                    let mut s = vec![BPElem::zero(); b.relations.len()];
                    for (i, x) in v.iter().enumerate() {
                        if !x.is_zero() {
                            let (r, m) = &cols[i];
                            s[*r].add_term(m.clone(), *x);
                        }
                    }
                    gens.push((d, s));
                }
            }
        }
        d -= 1;
    }
    Ok(FreeMap {
        src_degrees: gens.iter().map(|(d, _)| *d).collect(),
        tgt_degrees: f1.src_degrees,
        entries: gens.into_iter().map(|(_, s)| s).collect(),
    })
}

/// `Tor_1(M, N)` by resolving `N` with degreewise syzygies, independent of
/// any known resolution. Same degree convention as [`tor1_via_resolution`].
pub fn tor1_bruteforce(m: &FPModule, n: &FPModule, window: (i64, i64)) -> Result<DegreewiseModule> {
    let (lo, hi) = window;
    let mut out = DegreewiseModule::new("Tor_1(M, N) by syzygies", lo, hi);
    let Some(top) = m.max_gen_degree() else {
        return Ok(out);
    };
    if n.relations.is_empty() {
        out.audit.push("N is free: Tor_1 vanishes".into());
        return Ok(out);
    }
    let floor = lo + 1 - top;
    let d1 = FreeMap::of_presentation(n);
    let d2 = syzygies(n, floor)?;
    out.audit.push(format!(
        "{} syzygy generators of N found in degrees >= {floor}",
        d2.src_degrees.len()
    ));
    let (dmin, dmax) = degree_span(&[&d1.src_degrees, &d1.tgt_degrees, &d2.src_degrees]);
    let real = Realization::new(m, lo + 1 - dmax, hi + 1 - dmin)?;
    for i in lo..=hi {
        out.set(i, tensor_homology(&real, &d1, &d2, i + 1)?);
    }
    Ok(out)
}

/// `M (x)_{BP*} N` as a presentation.
pub fn tensor_product(m: &FPModule, n: &FPModule) -> Result<FPModule> {
    if m.k != n.k {
        return Err(Error::Invalid(
            "modules over different coefficient rings".into(),
        ));
    }
    let (gm, gn) = (m.ngens(), n.ngens());
    let idx = |a: usize, b: usize| a * gn + b;
    let mut gen_degrees = vec![0; gm * gn];
    for a in 0..gm {
        for b in 0..gn {
            gen_degrees[idx(a, b)] = m.gen_degrees[a] + n.gen_degrees[b];
        }
    }
    let mut relations = Vec::new();
    for r in &m.relations {
        for b in 0..gn {
            let mut coeffs = vec![BPElem::zero(); gm * gn];
            for a in 0..gm {
                coeffs[idx(a, b)] = r.coeffs[a].clone();
            }
            relations.push(Relation {
                degree: r.degree + n.gen_degrees[b],
                coeffs,
            });
        }
    }
    for r in &n.relations {
        for a in 0..gm {
            let mut coeffs = vec![BPElem::zero(); gm * gn];
            for b in 0..gn {
                coeffs[idx(a, b)] = r.coeffs[b].clone();
            }
            relations.push(Relation {
                degree: r.degree + m.gen_degrees[a],
                coeffs,
            });
        }
    }
    FPModule::new(gen_degrees, relations, m.k)
}

/// The two outer terms of the Kunneth sequence
/// `0 -> M (x) N -> (middle) -> Tor_1(M, N) -> 0`, where only the associated
/// graded of the middle term is described.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KunnethPieces {
    pub tensor: DegreewiseModule,
    pub tor: DegreewiseModule,
    /// The middle term's extension is not resolved.
    pub associated_graded_only: bool,
}

pub fn kunneth_pieces(
    m: &FPModule,
    series: &CSeries,
    n: usize,
    window: (i64, i64),
) -> Result<KunnethPieces> {
    let y = skeleton_presentation(n, series)?;
    let mut tensor = realize(&tensor_product(m, &y)?, window)?;
    tensor.label = format!("M (x) BP*Y_{}", 2 * n);
    let tor = tor1_via_resolution(m, series, n, window)?;
    Ok(KunnethPieces {
        tensor,
        tor,
        associated_graded_only: true,
    })
}

/// Degrees of the components of a `Tor_1` tuple in total degree `i`.
pub fn tor_tuple_degrees(n: usize, i: i64) -> Vec<i64> {
    (1..=n as i64).map(|j| i + 1 - 2 * j).collect()
}

/// The constraint system on `(x_1..x_n)`: row `l - 1` lists the coefficient
/// of `x_j` in the `l`-th equation, `sum_j a_(l-j+1) x_j = 0`.
pub fn constraint_system(series: &CSeries, n: usize) -> Vec<Vec<BPElem>> {
    (1..=n)
        .map(|l| {
            (1..=n)
                .map(|j| {
                    if j <= l {
                        series.coeff(l - j + 1)
                    } else {
                        BPElem::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Solutions of the constraint system in total degree `i`, as a list of
/// tuples, each tuple a vector of module elements in reduced coordinates.
#[derive(Clone, Debug)]
pub struct TorTupleSpace {
    pub total_degree: i64,
    pub component_degrees: Vec<i64>,
    pub group: AbGroup,
    /// Lattice generators of the solution set; `gens[s][j]` is the `x_{j+1}` part.
    pub gens: Vec<Vec<Vec<LocalInt2>>>,
}

pub fn tor_tuples(m: &FPModule, series: &CSeries, n: usize, i: i64) -> Result<TorTupleSpace> {
    let y = skeleton_presentation(n, series)?;
    let d1 = FreeMap::of_presentation(&y);
    let t = i + 1;
    let top = m.max_gen_degree().unwrap_or(t);
    let real = Realization::new(m, t - 2 * n as i64, top.max(t))?;
    let comps = tor_tuple_degrees(n, i);
    let phi = tensor_map(&real, &d1, t);
    let tgt_rel = block_relations(&real, &block_degrees(t, &d1.tgt_degrees));
    let k = kernel_mod(&phi, &tgt_rel);
    let rel = block_relations(&real, &comps);
    let group = if block_size(&real, &comps) == 0 {
        AbGroup::zero()
    } else {
        quotient(&k, &rel)?
    };
    let mut gens = Vec::new();
    for c in 0..k.cols() {
        let col = k.col(c);
        let mut parts = Vec::new();
        let mut off = 0;
        for &d in &comps {
            let g = real.at(d).ngens();
            parts.push(col[off..off + g].to_vec());
            off += g;
        }
        gens.push(parts);
    }
    Ok(TorTupleSpace {
        total_degree: i,
        component_degrees: comps,
        group,
        gens,
    })
}

/// A small random presentation: 1-3 generators in degrees 0..4 and 1-3
/// homogeneous relations with small coefficients.
pub fn random_fp_module<R: Rng>(rng: &mut R, k: usize) -> FPModule {
    let w = v_weights(k);
    loop {
        let ngens = rng.gen_range(1..=3);
        let gen_degrees: Vec<i64> = (0..ngens).map(|_| 2 * rng.gen_range(0..=2)).collect();
        let nrel = rng.gen_range(1..=3);
        let mut relations = Vec::new();
        for _ in 0..nrel {
            let top = *gen_degrees.iter().min().unwrap();
            let degree = top - 2 * rng.gen_range(0..=2);
            let coeffs: Vec<BPElem> = gen_degrees
                .iter()
                .map(|&g| {
                    let mut p = Poly::zero();
                    for mono in bp_basis(degree - g, k) {
                        if rng.gen_bool(0.6) {
                            // Even constants keep the relations from simply
                            // killing generators.
                            let c: i64 = if mono.is_one() {
                                [2, 4, -2, 2][rng.gen_range(0..4)]
                            } else {
                                [1, 2, -1, 3][rng.gen_range(0..4)]
                            };
                            p.add_term(mono, LocalInt2::from(c));
                        }
                    }
                    debug_assert!(p.is_zero() || p.homogeneous_degree(&w) == Some(degree - g));
                    p
                })
                .collect();
            if coeffs.iter().any(|c| !c.is_zero()) {
                relations.push(Relation { degree, coeffs });
            }
        }
        if let Ok(m) = FPModule::new(gen_degrees, relations, k) {
            return m;
        }
    }
}

/// Hilbert function of a free module: ranks of `BP*` shifted by each generator.
pub fn free_ranks(gen_degrees: &[i64], d: i64, ring: BpRing) -> Result<usize> {
    let mut total = 0;
    for g in gen_degrees {
        total += ring.basis(d - g)?.len();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bp::bp_int;
    use crate::fgl::two_series;
    use rand::SeedableRng;

    fn ring() -> BpRing {
        BpRing::new(4).unwrap()
    }

    fn series() -> CSeries {
        two_series(8, ring()).unwrap()
    }

    #[test]
    fn window_errors() {
        let m = FPModule::free(vec![0], 4);
        let r = realize(&m, (-4, 4)).unwrap();
        assert!(matches!(r.get(5), Err(Error::OutOfWindow { .. })));
        assert!(r.get(-6).is_err());
    }

    #[test]
    fn free_module_ranks() {
        let m = FPModule::free(vec![0], 4);
        let r = realize(&m, (-12, 2)).unwrap();
        for d in -12..=2 {
            let expect = bp_basis(d, 4).len();
            assert_eq!(r.get(d).unwrap(), &AbGroup::free(expect));
        }
    }

    #[test]
    fn zero_module() {
        let z = FPModule::zero(4);
        assert!(realize(&z, (-10, 4)).unwrap().is_zero());
        assert!(tensor_mod2(&z, (-10, 4)).unwrap().is_zero());
    }

    #[test]
    fn skeleton_one_realized() {
        let y2 = skeleton_presentation(1, &series()).unwrap();
        let r = realize(&y2, (-6, 4)).unwrap();
        assert_eq!(r.get(2).unwrap(), &AbGroup::elementary(1));
        assert_eq!(r.get(0).unwrap(), &AbGroup::new(1, vec![1]));
        assert_eq!(r.get(4).unwrap(), &AbGroup::zero());
    }

    #[test]
    fn tensor_functors_on_skeleta() {
        let s = series();
        let y8 = skeleton_presentation(4, &s).unwrap();
        let t = tensor_unit(&y8, (0, 10)).unwrap();
        assert_eq!(t.get(0).unwrap(), &AbGroup::free(1));
        for d in [2, 4, 6, 8] {
            assert_eq!(t.get(d).unwrap(), &AbGroup::elementary(1));
        }
        for d in [1, 3, 5, 7, 9, 10] {
            assert!(t.get(d).unwrap().is_zero());
        }
        let y2 = skeleton_presentation(1, &s).unwrap();
        let m2 = tensor_mod2(&y2, (0, 2)).unwrap();
        assert_eq!(m2.get(0).unwrap(), &AbGroup::elementary(1));
        assert_eq!(m2.get(2).unwrap(), &AbGroup::elementary(1));
        let free = FPModule::free(vec![4], 4);
        let f = tensor_unit(&free, (0, 6)).unwrap();
        assert_eq!(f.nonzero(), vec![(4, AbGroup::free(1))]);
    }

    #[test]
    fn tor_against_free_vanishes() {
        let s = series();
        let free = FPModule::free(vec![0], 4);
        assert!(tor1_via_resolution(&free, &s, 2, (-10, 6))
            .unwrap()
            .is_zero());
        let y2 = skeleton_presentation(1, &s).unwrap();
        assert!(tor1_bruteforce(&y2, &free, (-10, 6)).unwrap().is_zero());
        assert!(tor1_bruteforce(&FPModule::zero(4), &y2, (-10, 6))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn tor_of_y2_with_itself() {
        let s = series();
        let y2 = skeleton_presentation(1, &s).unwrap();
        let a = tor1_via_resolution(&y2, &s, 1, (-8, 4)).unwrap();
        let b = tor1_bruteforce(&y2, &y2, (-8, 4)).unwrap();
        assert!(a.same_invariants(&b), "{a}\n{b}");
        // 2-torsion of BP*Y_2 shifted: x_1 = c1 in degree 2 gives total degree 3.
        assert_eq!(a.get(3).unwrap(), &AbGroup::elementary(1));
    }

    #[test]
    fn tor_symmetry_on_random_modules() {
        let s = series();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let m = random_fp_module(&mut rng, 4);
            let y4 = skeleton_presentation(2, &s).unwrap();
            let a = tor1_via_resolution(&m, &s, 2, (-8, 6)).unwrap();
            let b = tor1_bruteforce(&m, &y4, (-8, 6)).unwrap();
            let c = tor1_bruteforce(&y4, &m, (-8, 6)).unwrap();
            assert!(a.same_invariants(&b), "{m:?}\n{a}\n{b}");
            assert!(a.same_invariants(&c), "{m:?}\n{a}\n{c}");
        }
    }

    #[test]
    fn constraint_shape() {
        let s = series();
        let sys = constraint_system(&s, 4);
        assert_eq!(
            sys[0],
            vec![bp_int(2), BPElem::zero(), BPElem::zero(), BPElem::zero()]
        );
        assert_eq!(sys[1][0], s.coeff(2));
        assert_eq!(sys[3][0], s.coeff(4));
        assert_eq!(sys[3][3], bp_int(2));
        assert_eq!(tor_tuple_degrees(4, 8), vec![7, 5, 3, 1]);
    }

    #[test]
    fn kunneth_free_case() {
        let s = series();
        let free = FPModule::free(vec![0, 2], 4);
        let p = kunneth_pieces(&free, &s, 0, (-6, 4)).unwrap();
        assert!(p.tor.is_zero());
        for d in -6..=4 {
            let expect = free_ranks(&[0, 2], d, ring()).unwrap();
            assert_eq!(p.tensor.get(d).unwrap().free_rank, expect, "degree {d}");
        }
    }
}
