//! The associated graded of `BP^* X_7` after `d_3 = Sq^3`, and the
//! leading-term decision procedure for `Tor_1` restrictions.
//!
//! Integral cohomology `H^s(X_7; Z_(2))`, `s = 0..7`, is a direct sum of
//! cyclic groups. Each is presented on generators with a diagonal relation
//! lattice, and every subgroup used below (kernels and images of the integral
//! `Sq^3`) is a lattice between the relations and `Z_(2)^n`. The cells of
//! the model are subquotients of these lattices.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::bp::{monomial_degree, v_degree, BpRing};
use crate::error::{Error, Result};
use crate::f2lin::{BitVec, Echelon, F2Map};
use crate::fgl::{CSeries, FPModule, Relation};
use crate::lattice::{image_basis, in_span, kernel, quotient, AbGroup, ZMat};
use crate::matrix::Matrix;
use crate::poly::{Monomial, Poly};
use crate::scalar::LocalInt2;
use crate::steenrod::SqAlgebra;
use crate::trace::{Anchor, Axiom, AxiomSet, Citation, Status, TraceStep, Verdict};
use crate::{BPElem, VMonomial};

/// Top cohomological degree of the skeleton.
pub const TOP: u32 = 7;

fn int(n: i64) -> LocalInt2 {
    LocalInt2::from(n)
}

fn pow2(e: u32) -> LocalInt2 {
    LocalInt2::pow2(e)
}

/// Order of a cyclic 2-primary summand, as an exponent of 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Order {
    Exact(u32),
    /// Only a lower bound is known; the model instantiates it at order 4.
    Hole {
        at_least: u32,
    },
}

impl Order {
    pub fn model_exponent(self) -> u32 {
        match self {
            Order::Exact(e) => e,
            Order::Hole { at_least } => at_least.max(2),
        }
    }

    pub fn is_hole(self) -> bool {
        matches!(self, Order::Hole { .. })
    }
}

/// `Z_(2)^free_rank + sum Z/2^e`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralGroup {
    pub free_rank: usize,
    pub summands: Vec<Order>,
}

impl IntegralGroup {
    pub fn zero() -> Self {
        Self {
            free_rank: 0,
            summands: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            summands: Vec::new(),
        }
    }

    pub fn elementary(count: usize) -> Self {
        Self {
            free_rank: 0,
            summands: vec![Order::Exact(1); count],
        }
    }

    /// Free generators first, then the cyclic summands in order.
    pub fn ngens(&self) -> usize {
        self.free_rank + self.summands.len()
    }

    pub fn holes(&self) -> usize {
        self.summands.iter().filter(|o| o.is_hole()).count()
    }

    /// Columns generate the relation lattice.
    pub fn relations(&self) -> ZMat {
        let diag: Vec<LocalInt2> = std::iter::repeat_n(int(0), self.free_rank)
            .chain(self.summands.iter().map(|o| pow2(o.model_exponent())))
            .collect();
        Matrix::diagonal(self.ngens(), self.ngens(), &diag)
    }

    pub fn model_group(&self) -> AbGroup {
        AbGroup::new(
            self.free_rank,
            self.summands.iter().map(|o| o.model_exponent()).collect(),
        )
    }
}

impl fmt::Display for IntegralGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.model_group())?;
        let h = self.holes();
        if h > 0 {
            write!(f, " [{h} undetermined order(s) modeled as 4]")?;
        }
        Ok(())
    }
}

/// One degree of the mod-2 Bockstein data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BocksteinRow {
    pub degree: u32,
    pub dim: usize,
    pub sq1_rank_in: usize,
    pub sq1_rank_out: usize,
    /// Dimension of `ker Sq^1 / im Sq^1`.
    pub e2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HoleRecord {
    pub degree: u32,
    pub summands: usize,
    pub reason: String,
}

/// Integral cohomology of the 7-skeleton with the integral `Sq^3`.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyInput {
    pub label: String,
    /// `groups[s] = H^s`, `s = 0..=7`.
    pub groups: Vec<IntegralGroup>,
    /// `sq3[s]: H^s -> H^(s+3)` on generators, for `s + 3 <= 7`.
    #[serde(skip)]
    pub sq3: Vec<ZMat>,
    pub axioms: AxiomSet,
    pub holes: Vec<HoleRecord>,
    pub h7_free_rank: usize,
    /// A class in `H^4` whose mod-2 reduction is the Euler class.
    #[serde(skip)]
    pub chi: Option<Vec<LocalInt2>>,
    /// `(Sq^3 w4, expected w3*w4)` in the mod-2 ring, when built from one.
    pub sq3_w4: Option<(String, String)>,
    pub bockstein: Vec<BocksteinRow>,
    /// Whether each toggleable axiom agrees with the Bockstein data.
    pub axiom_consistency: Vec<(String, bool)>,
}

impl CohomologyInput {
    /// Validates shapes and that the `Sq^3` matrices are homomorphisms.
    pub fn new(
        label: &str,
        groups: Vec<IntegralGroup>,
        sq3: Vec<ZMat>,
        axioms: AxiomSet,
    ) -> Result<Self> {
        if groups.len() != TOP as usize + 1 {
            return Err(Error::Invalid(format!("need groups in degrees 0..={TOP}")));
        }
        if sq3.len() != TOP as usize - 2 {
            return Err(Error::Invalid("need Sq^3 out of degrees 0..=4".into()));
        }
        for (s, m) in sq3.iter().enumerate() {
            let (src, tgt) = (&groups[s], &groups[s + 3]);
            if m.rows() != tgt.ngens() || m.cols() != src.ngens() {
                return Err(Error::Invalid(format!(
                    "Sq^3 out of degree {s} has the wrong shape"
                )));
            }
            let image_of_relations = m.mul(&src.relations());
            for c in 0..image_of_relations.cols() {
                if !in_span(&tgt.relations(), &image_of_relations.col(c)) {
                    return Err(Error::Invalid(format!(
                        "Sq^3 out of degree {s} is not well defined"
                    )));
                }
            }
            // Image must be 2-torsion.
            let twice = m.scale(&int(2));
            for c in 0..twice.cols() {
                if !in_span(&tgt.relations(), &twice.col(c)) {
                    return Err(Error::Invalid(format!(
                        "Sq^3 out of degree {s} leaves the 2-torsion"
                    )));
                }
            }
        }
        let h7_free_rank = groups[TOP as usize].free_rank;
        Ok(Self {
            label: label.into(),
            groups,
            sq3,
            axioms,
            holes: Vec::new(),
            h7_free_rank,
            chi: None,
            sq3_w4: None,
            bockstein: Vec::new(),
            axiom_consistency: Vec::new(),
        })
    }

    fn zero_sq3(groups: &[IntegralGroup]) -> Vec<ZMat> {
        (0..=4)
            .map(|s| ZMat::zeros(groups[s + 3].ngens(), groups[s].ngens()))
            .collect()
    }

    /// Cohomology of a point.
    pub fn point() -> Self {
        let mut groups = vec![IntegralGroup::zero(); TOP as usize + 1];
        groups[0] = IntegralGroup::free(1);
        let sq3 = Self::zero_sq3(&groups);
        Self::new("point", groups, sq3, AxiomSet::ALL).expect("valid")
    }

    /// Free groups of the given ranks, `Sq^3 = 0`.
    pub fn torsion_free(ranks: [usize; 8]) -> Self {
        let groups: Vec<IntegralGroup> = ranks.iter().map(|&r| IntegralGroup::free(r)).collect();
        let sq3 = Self::zero_sq3(&groups);
        Self::new("torsion-free", groups, sq3, AxiomSet::ALL).expect("valid")
    }

    pub fn is_torsion_free(&self) -> bool {
        self.groups.iter().all(|g| g.summands.is_empty())
    }

    pub fn group(&self, s: u32) -> &IntegralGroup {
        &self.groups[s as usize]
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (s, g) in self.groups.iter().enumerate() {
            out.push_str(&format!("H^{s} = {g}\n"));
        }
        out
    }
}

/// Coefficients of `v` in terms of `basis`, if it lies in the span.
fn express(basis: &[BitVec], v: &BitVec) -> Option<Vec<bool>> {
    let dim = v.len();
    let n = basis.len();
    let mut ech = Echelon::new(dim + n);
    for (i, b) in basis.iter().enumerate() {
        let mut aug = BitVec::zeros(dim + n);
        for j in b.ones() {
            aug.set(j, true);
        }
        aug.set(dim + i, true);
        ech.insert(&aug);
    }
    let mut target = BitVec::zeros(dim + n);
    for j in v.ones() {
        target.set(j, true);
    }
    let red = ech.reduce(&target);
    if (0..dim).any(|j| red.get(j)) {
        return None;
    }
    Some((0..n).map(|i| red.get(dim + i)).collect())
}

/// Vectors from `candidates` that extend the span of `base`, in order.
fn extend_basis(base: &[BitVec], candidates: &[BitVec], dim: usize) -> Vec<BitVec> {
    let mut ech = Echelon::new(dim);
    for b in base {
        ech.insert(b);
    }
    candidates
        .iter()
        .filter(|c| ech.insert(c))
        .cloned()
        .collect()
}

fn units(dim: usize) -> Vec<BitVec> {
    (0..dim).map(|i| BitVec::unit(dim, i)).collect()
}

fn image_vectors(m: &F2Map) -> Vec<BitVec> {
    m.image().rows().to_vec()
}

/// Mod-2 data of one degree, aligned with the integral generators.
struct Mod2Degree {
    /// `rho` of each generator of `H^s` (free generators first).
    rho: Vec<BitVec>,
    /// Complement of `rho(H^(s-1))` in `A_(s-1)`: order-2 part, then higher part.
    order_two: Vec<BitVec>,
    higher: Vec<BitVec>,
}

/// Integral cohomology of `X_7` for the extraspecial group, from its mod-2
/// cohomology ring and the Bockstein spectral sequence's first two pages.
///
/// A generator of `H^n` of order 2 corresponds to `b` in `A_(n-1)` with
/// `Sq^1 b != 0` modulo `rho(H^(n-1))`; one of higher order to `b` with
/// `Sq^1 b = 0`. Orders are taken as known only where an axiom (or, in degree
/// 4, the Bockstein ranks) fixes them.
pub fn bg_cohomology_input(
    a: &SqAlgebra,
    axioms: AxiomSet,
    h7_free_rank: usize,
) -> Result<CohomologyInput> {
    if a.bound() < 10 {
        return Err(Error::DegreeBound {
            needed: 10,
            bound: a.bound(),
        });
    }
    let dims: Vec<usize> = (0..=TOP + 1).map(|d| a.dim(d)).collect::<Result<_>>()?;
    let sq1: Vec<F2Map> = (0..=TOP)
        .map(|d| a.sq_matrix(1, d))
        .collect::<Result<_>>()?;
    let sq2: Vec<F2Map> = (0..=TOP)
        .map(|d| a.sq_matrix(2, d))
        .collect::<Result<_>>()?;

    let mut bockstein = Vec::new();
    for d in 0..=TOP {
        let rank_in = if d == 0 {
            0
        } else {
            sq1[d as usize - 1].rank()
        };
        let rank_out = sq1[d as usize].rank();
        bockstein.push(BocksteinRow {
            degree: d,
            dim: dims[d as usize],
            sq1_rank_in: rank_in,
            sq1_rank_out: rank_out,
            e2: dims[d as usize] - rank_in - rank_out,
        });
    }

    let mut holes = Vec::new();
    let mut groups = Vec::new();
    let mut data: Vec<Mod2Degree> = Vec::new();
    // Degree 0: Z_(2), reducing to 1.
    groups.push(IntegralGroup::free(1));
    data.push(Mod2Degree {
        rho: vec![BitVec::unit(dims[0], 0)],
        order_two: Vec::new(),
        higher: Vec::new(),
    });
    let mut consistent_odd = true;
    let mut consistent_h7 = true;
    for n in 1..=TOP {
        let prev = (n - 1) as usize;
        let kernel_prev = sq1[prev].kernel();
        let base = data[prev].rho.clone();
        let higher = extend_basis(&base, &kernel_prev, dims[prev]);
        let mut spanned = base.clone();
        spanned.extend(higher.iter().cloned());
        let order_two = extend_basis(&spanned, &units(dims[prev]), dims[prev]);

        let (two, high) = match n {
            4 => (Order::Exact(1), Order::Hole { at_least: 2 }),
            7 if axioms.h7_no_4torsion => (Order::Exact(1), Order::Exact(2)),
            7 => (Order::Hole { at_least: 1 }, Order::Hole { at_least: 2 }),
            _ if axioms.h_odd_elementary => (Order::Exact(1), Order::Exact(2)),
            _ => (Order::Hole { at_least: 1 }, Order::Hole { at_least: 2 }),
        };
        if n != 4 && !higher.is_empty() {
            if n == 7 {
                consistent_h7 = false;
            } else {
                consistent_odd = false;
            }
        }
        let mut summands = vec![two; order_two.len()];
        summands.extend(vec![high; higher.len()]);
        let free_rank = if n == TOP { h7_free_rank } else { 0 };
        let group = IntegralGroup {
            free_rank,
            summands,
        };
        if group.holes() > 0 {
            let reason = match n {
                4 => "orders of summands with a second-page Bockstein class".to_string(),
                7 => format!("{} not assumed", Axiom::H7No4Torsion),
                _ => format!("{} not assumed", Axiom::HOddElementary),
            };
            holes.push(HoleRecord {
                degree: n,
                summands: group.holes(),
                reason,
            });
        }
        groups.push(group);

        // rho(H^n): Sq^1 of the order-2 part, plus second-page classes for the rest.
        let mut rho = Vec::new();
        if n == TOP {
            rho.extend(std::iter::repeat_n(
                BitVec::zeros(dims[n as usize]),
                h7_free_rank,
            ));
        }
        rho.extend(order_two.iter().map(|b| sq1[prev].apply(b)));
        if !higher.is_empty() {
            let sq1_image = image_vectors(&sq1[prev]);
            let reps = extend_basis(&sq1_image, &sq1[n as usize].kernel(), dims[n as usize]);
            if reps.len() < higher.len() {
                return Err(Error::Invalid(format!(
                    "Bockstein data inconsistent in degree {n}: {} second-page classes for {} summands",
                    reps.len(),
                    higher.len()
                )));
            }
            rho.extend(reps.into_iter().take(higher.len()));
        }
        data.push(Mod2Degree {
            rho,
            order_two,
            higher,
        });
    }

    // beta: A_m -> H^(m+1), in generators of H^(m+1).
    let beta = |m: usize, v: &BitVec| -> Result<Vec<LocalInt2>> {
        let next = &data[m + 1];
        let mut basis = data[m].rho.clone();
        let nr = basis.len();
        basis.extend(next.order_two.iter().cloned());
        basis.extend(next.higher.iter().cloned());
        let coeffs = express(&basis, v)
            .ok_or_else(|| Error::Invalid(format!("Bockstein basis does not span degree {m}")))?;
        let g = &groups[m + 1];
        let mut out = vec![int(0); g.ngens()];
        for (i, &c) in coeffs[nr..].iter().enumerate() {
            if c {
                let gen = g.free_rank + i;
                out[gen] = pow2(g.summands[i].model_exponent() - 1);
            }
        }
        Ok(out)
    };

    let mut sq3 = Vec::new();
    for s in 0..=4usize {
        let tgt = &groups[s + 3];
        let mut cols = Vec::new();
        for r in &data[s].rho {
            let image = sq2[s].apply(r);
            cols.push(beta(s + 2, &image)?);
        }
        sq3.push(Matrix::from_cols(tgt.ngens(), &cols));
    }

    let mut input = CohomologyInput::new(
        &format!("X_7 of BG (H^7 free rank {h7_free_rank})"),
        groups,
        sq3,
        axioms,
    )?;
    input.holes = holes;
    input.bockstein = bockstein;
    input.axiom_consistency = vec![
        (Axiom::HOddElementary.key().to_string(), consistent_odd),
        (Axiom::H7No4Torsion.key().to_string(), consistent_h7),
    ];
    if (axioms.h_odd_elementary && !consistent_odd) || (axioms.h7_no_4torsion && !consistent_h7) {
        return Err(Error::Invalid(
            "an assumed axiom contradicts the Bockstein data".into(),
        ));
    }

    if let Some(s) = &a.structure {
        let w4 = a.reduce(&s.w4)?;
        let expected = a.reduce(&(&s.w3 * &s.w4))?;
        input.sq3_w4 = Some((a.display(&a.sq(3, &w4)?), a.display(&expected)));
        let coords = a.coords(&w4, 4)?;
        if let Some(c) = express(&data[4].rho, &coords) {
            input.chi = Some(c.iter().map(|&b| int(b as i64)).collect());
        }
    }
    Ok(input)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CellKind {
    /// `ker Sq^3 in H^s`.
    Kernel,
    /// `ker Sq^3 / im Sq^3`.
    KernelModImage,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub filtration: u32,
    #[serde(serialize_with = "ser_monomial")]
    pub mu: VMonomial,
    pub total_degree: i64,
    pub kind: CellKind,
    pub group: AbGroup,
}

fn ser_monomial<S: serde::Serializer>(m: &VMonomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&mono_name(m))
}

fn mono_name(m: &VMonomial) -> String {
    if m.is_one() {
        "1".into()
    } else {
        m.display_with(&crate::bp::v_names(m.width().max(1)))
    }
}

impl Cell {
    pub fn name(&self) -> String {
        format!("H^{}*{}", self.filtration, mono_name(&self.mu))
    }
}

/// Lattices for one filtration row.
#[derive(Clone, Debug)]
struct Row {
    /// Basis of `ker Sq^3`.
    kernel: ZMat,
    /// Relations of `H^s`.
    relations: ZMat,
    /// Basis of `im Sq^3 + relations`.
    image: ZMat,
}

impl Row {
    fn denominator(&self, kind: CellKind) -> &ZMat {
        match kind {
            CellKind::Kernel => &self.relations,
            CellKind::KernelModImage => &self.image,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EInftyModel {
    pub input: CohomologyInput,
    pub window: (i64, i64),
    pub ring: BpRing,
    rows: Vec<Row>,
    pub cells: Vec<Cell>,
    /// Steps justifying the model itself.
    pub trace: Vec<TraceStep>,
}

fn is_v1_multiple(m: &VMonomial) -> bool {
    m.exponent(0) > 0
}

fn times_v(m: &VMonomial, i: usize) -> VMonomial {
    m.mul(&Monomial::var(i - 1, 1))
}

pub fn cell_kind(mu: &VMonomial) -> CellKind {
    if is_v1_multiple(mu) {
        CellKind::KernelModImage
    } else {
        CellKind::Kernel
    }
}

/// Wilson's surjectivity range: `k <= 2(p^n + ... + p + 1)`.
pub fn wilson_bound(k: i64, n: u32, p: u64) -> bool {
    let mut sum: i128 = 0;
    let mut pw: i128 = 1;
    for _ in 0..=n {
        sum += pw;
        pw = pw.saturating_mul(p as i128);
    }
    (k as i128) <= 2 * sum
}

pub fn build_einfty(
    input: &CohomologyInput,
    window: (i64, i64),
    ring: BpRing,
) -> Result<EInftyModel> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::WindowTooSmall(format!("empty window {lo}..{hi}")));
    }
    ring.check_degree(lo - TOP as i64)?;
    let mut rows = Vec::new();
    for s in 0..=TOP as usize {
        let g = &input.groups[s];
        let n = g.ngens();
        let relations = g.relations();
        let kernel_basis = if s + 3 <= TOP as usize {
            let tgt = input.groups[s + 3].relations();
            let k = kernel(&input.sq3[s].hcat(&tgt));
            image_basis(&k.top(n))
        } else {
            ZMat::identity(n)
        };
        let image = if s >= 3 {
            image_basis(&input.sq3[s - 3].hcat(&relations))
        } else {
            image_basis(&relations)
        };
        rows.push(Row {
            kernel: kernel_basis,
            relations: image_basis(&relations),
            image,
        });
    }
    let mut cells = Vec::new();
    for s in 0..=TOP {
        let row = &rows[s as usize];
        let mut groups = std::collections::HashMap::new();
        for kind in [CellKind::Kernel, CellKind::KernelModImage] {
            let group = if row.kernel.cols() == 0 {
                AbGroup::zero()
            } else {
                quotient(&row.kernel, row.denominator(kind))?
            };
            groups.insert(kind as u8, group);
        }
        for d in (lo..=hi).rev() {
            let md = d - s as i64;
            for mu in ring.basis(md)? {
                let kind = cell_kind(&mu);
                cells.push(Cell {
                    filtration: s,
                    mu,
                    total_degree: d,
                    kind,
                    group: groups[&(kind as u8)].clone(),
                });
            }
        }
    }
    let surj: Vec<String> = (0..=2)
        .map(|i| format!("H^{i}: {}", wilson_bound(i, 1, 2)))
        .collect();
    let trace =
        vec![
        TraceStep::new(
            &[Anchor::D3IsSq3.into(), Anchor::BocksteinFactorization.into()],
            "first differential d3 is the integral Sq^3 = beta Sq^2 rho",
            format!(
                "Sq^3 ranks out of H^0..H^4 (mod relations): {}",
                (0..=4)
                    .map(|s| cokernel_rank(&input.sq3[s], &input.groups[s + 3]).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        ),
        TraceStep::new(
            &[Anchor::EInfinityRule.into()],
            "E_infinity = ker Sq^3 (x) BP* / (im Sq^3 * v1)",
            format!("{} cells in total degrees {lo}..{hi}", cells.len()),
        ),
        TraceStep::new(
            &[
                Anchor::LowDegreeSurjectivity.into(),
                Anchor::WilsonSurjectivity.into(),
                Axiom::TopRowGeneration.into(),
            ],
            "no further differentials: they would start in H^i, i <= 2, where BP* -> H* is onto",
            surj.join("; "),
        ),
    ];
    Ok(EInftyModel {
        input: input.clone(),
        window,
        ring,
        rows,
        cells,
        trace,
    })
}

/// Number of nonzero generators in the image of `m` modulo the target relations.
fn cokernel_rank(m: &ZMat, tgt: &IntegralGroup) -> usize {
    let rel = tgt.relations();
    let im = image_basis(&m.hcat(&rel));
    match quotient(&im, &rel) {
        Ok(g) => g.ngens(),
        Err(_) => 0,
    }
}

/// Result of multiplying one cell by `v_i`.
#[derive(Clone, Debug, Serialize)]
pub struct VMapResult {
    pub source: String,
    pub target: String,
    pub v: usize,
    pub kernel: AbGroup,
    /// A source element in the kernel, in generator coordinates.
    pub witness: Option<String>,
}

impl VMapResult {
    pub fn injective(&self) -> bool {
        self.kernel.is_zero()
    }
}

fn show_vector(v: &[LocalInt2], prefix: &str) -> String {
    let mut parts = Vec::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if *c == int(1) {
            parts.push(format!("{prefix}{i}"));
        } else {
            parts.push(format!("{c}*{prefix}{i}"));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl EInftyModel {
    pub fn cell(&self, s: u32, mu: &VMonomial) -> Option<&Cell> {
        self.cells.iter().find(|c| c.filtration == s && &c.mu == mu)
    }

    pub fn cells_of_degree(&self, d: i64) -> Vec<&Cell> {
        self.cells.iter().filter(|c| c.total_degree == d).collect()
    }

    pub fn nonzero_cells(&self) -> Vec<&Cell> {
        self.cells.iter().filter(|c| !c.group.is_zero()).collect()
    }

    /// `v_i` from `cell(s, mu)` to `cell(s, v_i mu)`, induced by the identity on
    /// `ker Sq^3`; its kernel is `D_target / D_source`.
    pub fn v_map(&self, s: u32, mu: &VMonomial, i: usize) -> Result<VMapResult> {
        let target_mu = times_v(mu, i);
        self.ring.check_degree(monomial_degree(&target_mu))?;
        let row = &self.rows[s as usize];
        let src = row.denominator(cell_kind(mu));
        let tgt = row.denominator(cell_kind(&target_mu));
        let kernel = if tgt.cols() == 0 {
            AbGroup::zero()
        } else {
            quotient(tgt, src)?
        };
        let witness = (0..tgt.cols())
            .map(|c| tgt.col(c))
            .find(|col| !in_span(src, col))
            .map(|col| show_vector(&col, &format!("h{s}.g")));
        Ok(VMapResult {
            source: format!("H^{s}*{}", mono_name(mu)),
            target: format!("H^{s}*{}", mono_name(&target_mu)),
            v: i,
            kernel,
            witness,
        })
    }

    /// Cell table, one line per nonzero cell.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for c in self.nonzero_cells() {
            out.push_str(&format!(
                "deg {:>3}  {:<12} {}\n",
                c.total_degree,
                c.name(),
                c.group
            ));
        }
        out
    }

    /// The associated graded as a finitely presented `BP*`-module: generators
    /// a basis of each `ker Sq^3`, relations the torsion relations and
    /// `v1 * im Sq^3`.
    pub fn as_fp_module(&self) -> Result<FPModule> {
        let k = self.ring.k;
        let mut gen_degrees = Vec::new();
        let mut offsets = Vec::new();
        for (s, row) in self.rows.iter().enumerate() {
            offsets.push(gen_degrees.len());
            gen_degrees.extend(std::iter::repeat_n(s as i64, row.kernel.cols()));
        }
        let total = gen_degrees.len();
        let mut relations = Vec::new();
        let v1: BPElem = Poly::var(0);
        for (s, row) in self.rows.iter().enumerate() {
            if row.kernel.cols() == 0 {
                continue;
            }
            let coords = |m: &ZMat| {
                crate::lattice::coordinates(&row.kernel, m)
                    .ok_or_else(|| Error::Invalid(format!("row {s}: lattice not inside ker Sq^3")))
            };
            let rel = coords(&row.relations)?;
            let img = coords(&row.image)?;
            for (m, factor, degree) in [
                (&rel, None, s as i64),
                (&img, Some(&v1), s as i64 + v_degree(1)),
            ] {
                for c in 0..m.cols() {
                    let col = m.col(c);
                    if col.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let mut coeffs = vec![BPElem::zero(); total];
                    for (j, x) in col.iter().enumerate() {
                        let base = BPElem::constant(*x);
                        coeffs[offsets[s] + j] = match factor {
                            Some(f) => &base * f,
                            None => base,
                        };
                    }
                    relations.push(Relation { degree, coeffs });
                }
            }
        }
        FPModule::new(gen_degrees, relations, k)
    }
}

/// Cell-by-cell check of the `v_i`-injectivity facts.
#[derive(Clone, Debug, Serialize)]
pub struct InjectivityReport {
    pub passed: bool,
    pub maps_checked: usize,
    /// Non-injective `v1` maps (all expected over the `H^6`, `H^7` rows).
    pub v1_noninjective: Vec<String>,
    pub violations: Vec<String>,
}

pub fn vi_injectivity_report(model: &EInftyModel) -> Result<InjectivityReport> {
    let (lo, _) = model.window;
    let mut checked = 0;
    let mut v1_bad = Vec::new();
    let mut violations = Vec::new();
    for c in model.nonzero_cells() {
        for i in 1..=model.ring.k {
            let target_degree = c.total_degree + v_degree(i);
            if target_degree < lo {
                continue;
            }
            let r = model.v_map(c.filtration, &c.mu, i)?;
            checked += 1;
            if r.injective() {
                continue;
            }
            let line = format!(
                "v{i}: {} -> {} kernel {} (e.g. {})",
                r.source,
                r.target,
                r.kernel,
                r.witness.unwrap_or_default()
            );
            if i == 1 && (c.filtration == 6 || c.filtration == 7) {
                v1_bad.push(line);
            } else {
                violations.push(line);
            }
        }
    }
    Ok(InjectivityReport {
        passed: violations.is_empty(),
        maps_checked: checked,
        v1_noninjective: v1_bad,
        violations,
    })
}

/// Monomials where the leading term of `sum_(i>=2) v_i x^(i)` may sit:
/// multiples of some `v_i`, `i >= 2`, or rows at or below `v3`'s.
fn in_higher_v_region(mu: &VMonomial) -> bool {
    mu.exponents().iter().skip(1).any(|&e| e > 0) || monomial_degree(mu) <= v_degree(3)
}

/// Why a cell can or cannot hold the leading term of `x_r`.
#[derive(Clone, Debug, Serialize)]
pub struct Position {
    pub cell: String,
    pub group: AbGroup,
    pub excluded: bool,
    pub reason: String,
}

fn leading_positions(model: &EInftyModel, degree: i64) -> Result<Vec<(Position, u32, VMonomial)>> {
    let mut out = Vec::new();
    for c in model.cells_of_degree(degree) {
        if c.group.is_zero() {
            continue;
        }
        let target = times_v(&c.mu, 1);
        let v1 = model.v_map(c.filtration, &c.mu, 1)?;
        let region = in_higher_v_region(&target);
        let excluded = v1.injective() && !region;
        let reason = if excluded {
            format!(
                "v1 injective into {} (row {}), which the v_i (i>=2) terms cannot reach",
                v1.target,
                monomial_degree(&target)
            )
        } else if !v1.injective() {
            format!("v1 not injective into {}: kernel {}", v1.target, v1.kernel)
        } else {
            format!("{} lies where v_i (i>=2) terms may lead", v1.target)
        };
        out.push((
            Position {
                cell: c.name(),
                group: c.group.clone(),
                excluded,
                reason,
            },
            c.filtration,
            c.mu.clone(),
        ));
    }
    Ok(out)
}

/// Basis columns of `{x in X : 2x in L}`.
fn two_torsion_in(x: &ZMat, l: &ZMat) -> ZMat {
    if x.cols() == 0 {
        return x.clone();
    }
    let stacked = x.scale(&int(2)).hcat(&l.neg());
    let k = kernel(&stacked);
    image_basis(&x.mul(&k.top(x.cols())))
}

fn lattice_quotient(k: &ZMat, l: &ZMat) -> Result<AbGroup> {
    if k.cols() == 0 {
        return Ok(AbGroup::zero());
    }
    quotient(k, l)
}

/// The three-stage leading-term argument on tuples `(x_1..x_4)` in `Tor_1`
/// of total degree 8 against the 8-skeleton of `BZ/2`.
pub fn lemma64_decide(model: &EInftyModel, series: &CSeries) -> Result<Verdict> {
    let (lo, hi) = model.window;
    if lo > -8 || hi < 8 {
        return Err(Error::WindowTooSmall(format!(
            "decision needs total degrees -8..8, model has {lo}..{hi}"
        )));
    }
    let axioms = model.input.axioms;
    let mut trace = model.trace.clone();
    let fail = |mut trace: Vec<TraceStep>, stage: u8, witness: String, step: TraceStep| {
        trace.push(step);
        Ok(Verdict {
            status: Status::NotForced,
            trace,
            failed_stage: Some(stage),
            witness: Some(witness),
            dependency: None,
        })
    };

    // Equations from the 2-series.
    let a: Vec<BPElem> = (1..=4).map(|j| series.coeff(j)).collect();
    let expected = [
        BPElem::constant(int(2)),
        Poly::var(0),
        BPElem::constant(int(2)) * Poly::var(0).pow(2),
        Poly::var(1),
    ];
    let equations_ok = a.iter().zip(&expected).all(|(x, y)| x == y);
    trace.push(TraceStep::new(
        &[Anchor::ConstraintSystem.into(), Anchor::TwoSeries.into()],
        "tuples satisfy 2x1 = 0, 2x2 + v1x1 = 0, 2x3 + v1x2 + 2v1^2x1 = 0, 2x4 + v1x3 + 2v1^2x2 + v2x1 = 0",
        format!("2-series coefficients a1..a4 = {}", series.to_text_prefix(4)),
    ));
    if !equations_ok {
        return fail(
            trace,
            1,
            "2-series coefficients differ from (2, v1, 2v1^2, v2)".into(),
            TraceStep::new(&[Anchor::TwoSeries.into()], "unexpected equations", ""),
        );
    }

    // v_i, i >= 2, injective everywhere: needed to locate the leading terms of the right side.
    let inj = vi_injectivity_report(model)?;
    trace.push(TraceStep::new(
        &[Anchor::VInjectivity.into(), Anchor::EInfinityRule.into()],
        "v_i (i >= 2) injective on every cell; v1 fails only over H^6, H^7",
        format!(
            "{} maps checked, {} non-injective v1 maps, {} violations",
            inj.maps_checked,
            inj.v1_noninjective.len(),
            inj.violations.len()
        ),
    ));
    if !inj.passed {
        return fail(
            trace,
            1,
            inj.violations[0].clone(),
            TraceStep::new(&[Anchor::VInjectivity.into()], "injectivity fails", ""),
        );
    }

    // Stage 1: x2, x3 vanish and x4 leads in H^7 * v2.
    let degrees = crate::gmod::tor_tuple_degrees(4, 8);
    let mut x4_cells = Vec::new();
    for (r, &d) in degrees.iter().enumerate().skip(1) {
        let positions = leading_positions(model, d)?;
        let allowed: Vec<&(Position, u32, VMonomial)> =
            positions.iter().filter(|p| !p.0.excluded).collect();
        let listing: Vec<String> = positions
            .iter()
            .map(|(p, _, _)| format!("{} [{}]: {}", p.cell, p.group, p.reason))
            .collect();
        let name = format!("x{}", r + 1);
        if r + 1 == 4 {
            trace.push(TraceStep::new(
                &[Anchor::LeadingTerm.into()],
                format!("{name} in degree {d} is 0 or leads in a surviving position"),
                listing.join("; "),
            ));
            x4_cells = allowed
                .iter()
                .map(|(p, s, mu)| (p.clone(), *s, mu.clone()))
                .collect();
        } else {
            if let Some((p, _, _)) = allowed.first() {
                return fail(
                    trace,
                    1,
                    format!("{name} may lead in {}", p.cell),
                    TraceStep::new(
                        &[Anchor::LeadingTerm.into()],
                        format!("{name} not excluded"),
                        listing.join("; "),
                    ),
                );
            }
            trace.push(TraceStep::new(
                &[Anchor::LeadingTerm.into()],
                format!("{name} in degree {d} is 0: every leading position is excluded"),
                listing.join("; "),
            ));
        }
    }
    let v2 = Monomial::var(1, 1);
    let bottom = x4_cells.iter().all(|(_, s, mu)| *s == TOP && *mu == v2);
    if !bottom {
        let bad = x4_cells
            .iter()
            .find(|(_, s, mu)| !(*s == TOP && *mu == v2))
            .expect("exists");
        return fail(
            trace,
            1,
            format!("x4 may lead in {}", bad.0.cell),
            TraceStep::new(
                &[Anchor::LeadingTerm.into()],
                "x4 not confined to H^7*v2",
                "",
            ),
        );
    }

    // x1 lives in degree 7, where only H^7 * 1 contributes.
    let x1_cells: Vec<&Cell> = model
        .cells_of_degree(7)
        .into_iter()
        .filter(|c| !c.group.is_zero())
        .collect();
    if x1_cells
        .iter()
        .any(|c| !(c.filtration == TOP && c.mu.is_one()))
    {
        return fail(
            trace,
            1,
            "degree 7 has cells besides H^7".into(),
            TraceStep::new(
                &[Anchor::EInfinityRule.into()],
                "x1 not confined to H^7",
                "",
            ),
        );
    }
    let row = &model.rows[TOP as usize];
    let h7 = &model.input.groups[TOP as usize];
    trace.push(TraceStep::new(
        &[Anchor::EInfinityRule.into()],
        "BP^7 X_7 = H^7 (single cell in degree 7); x4 = y*v2 with y in H^7 (bottom filtration)",
        format!("H^7 = {h7}"),
    ));

    // Stage 2: 2x4 + v2x1 = 0 gives v2(2y + x1) = 0, so x1 + 2y lies in ker v2.
    let v2_map = model.v_map(TOP, &Monomial::one(), 2)?;
    if !v2_map.injective() {
        return fail(
            trace,
            2,
            v2_map.witness.unwrap_or_default(),
            TraceStep::new(
                &[Anchor::VInjectivity.into()],
                "v2 not injective on H^7",
                "",
            ),
        );
    }
    let doubled = row.kernel.scale(&int(2)).hcat(&row.relations);
    let multiples = image_basis(&doubled);
    trace.push(TraceStep::new(
        &[Anchor::ConstraintSystem.into(), Anchor::VInjectivity.into()],
        "x2 = x3 = 0 reduces the fourth equation to 2x4 + v2x1 = 0; v2 injective gives x1 in 2*H^7",
        format!(
            "2*H^7 / relations = {}",
            lattice_quotient(&multiples, &row.relations)?
        ),
    ));

    // Stage 3: 2x1 = 0 and x1 in 2*H^7.
    let candidates = two_torsion_in(&multiples, &row.relations);
    let survivors = lattice_quotient(&candidates, &row.relations)?;
    let cite: Citation = if axioms.h7_no_4torsion {
        Axiom::H7No4Torsion.into()
    } else {
        Axiom::HoleOrders.into()
    };
    if !survivors.is_zero() {
        let witness = (0..candidates.cols())
            .map(|c| candidates.col(c))
            .find(|col| !in_span(&row.relations, col))
            .map(|col| show_vector(&col, "h7.g"))
            .unwrap_or_default();
        return fail(
            trace,
            3,
            format!(
                "x1 = {witness} satisfies 2x1 = 0 and lies in 2*H^7 but is nonzero; H^7 = {h7}"
            ),
            TraceStep::new(
                &[cite, Anchor::TorRestriction.into()],
                "2x1 = 0 with x1 in 2*H^7 does not force x1 = 0",
                format!("(2*H^7) meets H^7[2] in {survivors}"),
            ),
        );
    }
    trace.push(TraceStep::new(
        &[cite, Anchor::TorRestriction.into()],
        "2x1 = 0 and x1 in 2*H^7 force x1 = 0, so x1 restricts to 0 against Y_2",
        format!("(2*H^7) meets H^7[2] in 0; H^7 = {h7}"),
    ));
    Ok(Verdict::new(Status::ForcedZero, trace))
}

/// Runs the decision over `H^7` free ranks `0..=max_rank`.
pub fn lemma64_rank_sweep(
    a: &SqAlgebra,
    axioms: AxiomSet,
    max_rank: usize,
    window: (i64, i64),
    ring: BpRing,
    series: &CSeries,
) -> Result<Vec<(usize, Verdict)>> {
    (0..=max_rank)
        .map(|r| {
            let input = bg_cohomology_input(a, axioms, r)?;
            let model = build_einfty(&input, window, ring)?;
            Ok((r, lemma64_decide(&model, series)?))
        })
        .collect()
}

/// Upstream results the proposition chain depends on.
#[derive(Clone, Debug)]
pub struct ChainInputs<'a> {
    pub model: &'a EInftyModel,
    pub torsion_shift_passed: bool,
    /// One-line summary; newlines are folded.
    pub torsion_shift_detail: String,
    pub tor_oracles_agree: bool,
    pub euler_identity_passed: bool,
    pub lemma64: &'a Verdict,
    /// `BP*Y_2 (x) Z_(2)` in degree 2.
    pub y2_degree2: AbGroup,
}

/// Verdicts for the nonvanishing of `C` in `BP^4 X_7 (x) Z/2` and of
/// `C (x) c1` in `BP^6(X_7 x Y_8) (x) Z`.
pub fn prop_chain_report(inp: &ChainInputs) -> Result<(Verdict, Verdict)> {
    let model = inp.model;
    let input = &model.input;
    let detail = inp.torsion_shift_detail.trim().replace('\n', "; ");
    if input.is_torsion_free() && input.sq3.iter().all(|m| m.is_zero()) {
        let step = TraceStep::new(
            &[Anchor::FreeCase.into()],
            "torsion-free cohomology: BP* X is free and no class is obstructed",
            input.summary().replace('\n', "; "),
        );
        return Ok((
            Verdict::new(Status::NoObstruction, vec![step.clone()]),
            Verdict::new(Status::NoObstruction, vec![step]),
        ));
    }
    let mut base = Vec::new();
    if let Some((lhs, rhs)) = input.sq3_w4.as_ref().filter(|(l, r)| l != r) {
        let step = TraceStep::new(
            &[Anchor::WuFormula.into()],
            "Sq^3 w4 differs from w3*w4",
            format!("Sq^3 w4 = {lhs}, w3*w4 = {rhs}"),
        );
        return Ok((
            Verdict::undecided("steenrod", vec![step.clone()]),
            Verdict::undecided("steenrod", vec![step]),
        ));
    }
    if !inp.torsion_shift_passed {
        let step = TraceStep::new(
            &[Anchor::TorsionShift.into()],
            "Sq^3(chi + y) != 0 for 2-torsion y was not established",
            detail.clone(),
        );
        return Ok((
            Verdict::undecided("steenrod", vec![step.clone()]),
            Verdict::undecided("steenrod", vec![step]),
        ));
    }
    if !inp.euler_identity_passed {
        let step = TraceStep::new(
            &[Anchor::EulerIdentity.into()],
            "Euler identity check failed",
            "",
        );
        return Ok((
            Verdict::undecided("charclass", vec![step.clone()]),
            Verdict::undecided("charclass", vec![step]),
        ));
    }

    // Proposition on BP^4 X_7 (x) Z/2.
    base.push(TraceStep::new(
        &[Anchor::EulerIdentity.into(), Axiom::H4Injection.into()],
        "C = c2(A) - c2(B) maps to 2*chi in H^4, which is 0 mod 2",
        "2*chi reduces to 0 in H^4(-; F_2)",
    ));
    base.push(TraceStep::new(
        &[
            Anchor::WuFormula.into(),
            Anchor::ExtraspecialDescription.into(),
        ],
        "Sq^3 w4 = w3*w4 in the mod-2 ring",
        input
            .sq3_w4
            .as_ref()
            .map(|(l, r)| format!("Sq^3 w4 = {l}, w3*w4 = {r}"))
            .unwrap_or_else(|| "(no mod-2 ring attached)".into()),
    ));
    base.push(TraceStep::new(
        &[
            Anchor::TorsionShift.into(),
            Anchor::BocksteinFactorization.into(),
        ],
        "Sq^3(chi + y) != 0 for every y in H^4 with 2y = 0 (mod-2 enumeration)",
        detail.clone(),
    ));
    let Some(chi) = &input.chi else {
        return Ok((
            Verdict::undecided("cohomology input has no Euler class", base.clone()),
            Verdict::undecided("cohomology input has no Euler class", base),
        ));
    };
    let h4 = &input.groups[4];
    let h7 = &input.groups[TOP as usize];
    let sq = &input.sq3[4];
    let torsion4 = two_torsion_in(&ZMat::identity(h4.ngens()), &h4.relations());
    let shifted = image_basis(&sq.mul(&torsion4).hcat(&h7.relations()));
    let sq_chi = sq.mul_vec(chi);
    let obstructed = !in_span(&shifted, &sq_chi);
    base.push(TraceStep::new(
        &[
            Anchor::D3IsSq3.into(),
            Anchor::BocksteinFactorization.into(),
        ],
        "integral Sq^3 chi is outside Sq^3(H^4[2]) in H^7",
        format!("Sq^3 chi = {}", show_vector(&sq_chi, "h7.g")),
    ));
    if !obstructed {
        return Ok((
            Verdict::undecided("ahss (integral Sq^3 chi absorbed by torsion)", base.clone()),
            Verdict::undecided("ahss (integral Sq^3 chi absorbed by torsion)", base),
        ));
    }
    base.push(TraceStep::new(
        &[Anchor::ObstructionPattern.into(), Anchor::D3IsSq3.into()],
        "if C were in 2*BP^4 + BP^(<0)*BP^*, some chi + y (2y = 0) would survive d3",
        "contradiction with the previous step",
    ));
    base.push(TraceStep::new(
        &[
            Anchor::SkeletonCalculation.into(),
            Axiom::MittagLeffler.into(),
        ],
        "the computation holds on the 7-skeleton",
        format!("model rows H^0..H^7 of {}", input.label),
    ));
    let prop1 = Verdict::new(Status::Nonzero, base.clone());

    // Proposition on BP^6(X_7 x Y_8) (x) Z.
    if !inp.tor_oracles_agree {
        let step = TraceStep::new(
            &[Anchor::KunnethSequence.into()],
            "Tor_1 oracles disagree",
            "",
        );
        return Ok((prop1, Verdict::undecided("gmod", vec![step])));
    }
    if inp.lemma64.status != Status::ForcedZero {
        let step = TraceStep::new(
            &[Anchor::TorRestriction.into()],
            "restriction lemma not established",
            inp.lemma64.witness.clone().unwrap_or_default(),
        );
        return Ok((prop1, Verdict::undecided("lemma64", vec![step])));
    }
    if inp.y2_degree2 != AbGroup::elementary(1) {
        let step = TraceStep::new(
            &[Anchor::C1Summand.into()],
            "c1 does not generate a Z/2 summand",
            inp.y2_degree2.to_string(),
        );
        return Ok((prop1, Verdict::undecided("gmod (BP*Y_2)", vec![step])));
    }
    let mut trace = base;
    trace.push(TraceStep::new(
        &[
            Anchor::KunnethSequence.into(),
            Anchor::LandweberFlatness.into(),
        ],
        "0 -> BP*X (x) BP*Y -> BP*(X x Y) -> Tor_1 -> 0, Tor_i = 0 for i >= 2",
        "Tor_1 computed two ways agrees on the full test matrix",
    ));
    trace.push(TraceStep::new(
        &[Anchor::C1Summand.into(), Anchor::SkeletonResolution.into()],
        "c1 generates a Z/2 summand of BP*Y_2 (x) Z_(2)",
        format!("degree 2: {}", inp.y2_degree2),
    ));
    trace.push(TraceStep::new(
        &[Anchor::TorRestriction.into(), Anchor::LeadingTerm.into()],
        "Tor_1 contributions of the form sum v_i x_i restrict to 0 against Y_2",
        format!("decision procedure: {}", inp.lemma64.status),
    ));
    trace.push(TraceStep::new(
        &[Anchor::WilsonSurjectivity.into()],
        "surjectivity range used for the degree bookkeeping",
        format!("wilson_bound(6, 1, 2) = {}", wilson_bound(6, 1, 2)),
    ));
    trace.push(TraceStep::new(
        &[Anchor::ObstructionPattern.into()],
        "C (x) c1 restricts to C (x) c1 on X_7 x Y_2, nonzero in (BP^4 X_7 (x) Z/2) (x) Z/2 * c1",
        "both factors established above",
    ));
    Ok((prop1, Verdict::new(Status::Nonzero, trace)))
}

/// Extension trait giving the first terms of a series as text.
trait SeriesPrefix {
    fn to_text_prefix(&self, n: usize) -> String;
}

impl SeriesPrefix for CSeries {
    fn to_text_prefix(&self, n: usize) -> String {
        let ring = BpRing { k: self.k };
        (1..=n)
            .map(|j| ring.display(&self.coeff(j)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::two_series;
    use crate::steenrod::extraspecial_ring;

    fn setup() -> (SqAlgebra, BpRing, CSeries) {
        let ring = BpRing::new(4).unwrap();
        (
            extraspecial_ring(10).unwrap(),
            ring,
            two_series(8, ring).unwrap(),
        )
    }

    #[test]
    fn wilson() {
        assert!(wilson_bound(6, 1, 2));
        assert!(wilson_bound(0, 3, 2));
        assert!(!wilson_bound(8, 1, 2));
    }

    #[test]
    fn bg_input_shape() {
        let (a, _, _) = setup();
        let inp = bg_cohomology_input(&a, AxiomSet::ALL, 0).unwrap();
        let shown: Vec<String> = inp
            .groups
            .iter()
            .map(|g| g.model_group().to_string())
            .collect();
        assert_eq!(
            shown,
            vec![
                "Z_(2)",
                "0",
                "(Z/2)^4",
                "(Z/2)^5",
                "(Z/2)^9 + Z/4",
                "(Z/2)^12",
                "(Z/2)^19",
                "(Z/2)^23"
            ]
        );
        assert!(inp.axiom_consistency.iter().all(|(_, ok)| *ok));
        assert_eq!(inp.holes.len(), 1);
        let (l, r) = inp.sq3_w4.clone().unwrap();
        assert_eq!(l, r);
        assert!(inp.chi.is_some());
    }

    #[test]
    fn degenerate_inputs() {
        let ring = BpRing::new(4).unwrap();
        let p = build_einfty(&CohomologyInput::point(), (-8, 8), ring).unwrap();
        assert!(p.nonzero_cells().iter().all(|c| c.filtration == 0));
        let free = CohomologyInput::torsion_free([1, 0, 2, 0, 1, 0, 0, 3]);
        let m = build_einfty(&free, (-8, 8), ring).unwrap();
        for c in &m.cells {
            let rank = free.groups[c.filtration as usize].free_rank;
            assert_eq!(c.group, AbGroup::free(rank));
        }
        let rep = vi_injectivity_report(&m).unwrap();
        assert!(rep.passed && rep.v1_noninjective.is_empty());
    }

    #[test]
    fn bg_model_facts() {
        let (a, ring, series) = setup();
        let inp = bg_cohomology_input(&a, AxiomSet::ALL, 2).unwrap();
        let m = build_einfty(&inp, (-8, 8), ring).unwrap();
        let rep = vi_injectivity_report(&m).unwrap();
        assert!(rep.passed, "{:?}", rep.violations);
        assert!(!rep.v1_noninjective.is_empty());
        let v = lemma64_decide(&m, &series).unwrap();
        assert_eq!(v.status, Status::ForcedZero, "{}", v.render());
        crate::trace::validate_trace(&v.trace).unwrap();
    }

    #[test]
    fn ablation_fails_at_stage_three() {
        let (a, ring, series) = setup();
        let axioms = AxiomSet {
            h_odd_elementary: true,
            h7_no_4torsion: false,
        };
        let inp = bg_cohomology_input(&a, axioms, 0).unwrap();
        let m = build_einfty(&inp, (-8, 8), ring).unwrap();
        let v = lemma64_decide(&m, &series).unwrap();
        assert_eq!(v.status, Status::NotForced);
        assert_eq!(v.failed_stage, Some(3), "{}", v.render());
    }

    #[test]
    fn empty_h7_is_vacuous() {
        let (_, ring, series) = setup();
        let mut groups = vec![IntegralGroup::zero(); 8];
        groups[0] = IntegralGroup::free(1);
        groups[4] = IntegralGroup::elementary(2);
        let sq3 = CohomologyInput::zero_sq3(&groups);
        let inp = CohomologyInput::new("no H^7", groups, sq3, AxiomSet::ALL).unwrap();
        let m = build_einfty(&inp, (-8, 8), ring).unwrap();
        assert_eq!(
            lemma64_decide(&m, &series).unwrap().status,
            Status::ForcedZero
        );
    }

    #[test]
    fn small_window_rejected() {
        let (a, ring, series) = setup();
        let inp = bg_cohomology_input(&a, AxiomSet::ALL, 0).unwrap();
        let m = build_einfty(&inp, (-4, 8), ring).unwrap();
        assert!(matches!(
            lemma64_decide(&m, &series),
            Err(Error::WindowTooSmall(_))
        ));
    }
}
