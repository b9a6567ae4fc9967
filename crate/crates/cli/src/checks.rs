//! The individual checks, each producing claim records.
//!
//! Checks share expensive intermediate objects through [`Pipeline`], which
//! also remembers the outcomes later checks depend on.

use std::cell::OnceCell;
use std::time::Instant;

use anyhow::{anyhow, Context as _, Result};
use cobord_core::ahss::{
    bg_cohomology_input, build_einfty, lemma64_decide, prop_chain_report, vi_injectivity_report,
    ChainInputs, EInftyModel,
};
use cobord_core::bp::{bp_int, v, BpRing};
use cobord_core::charclass::{
    ah_obstruction, euler_identity_check, EulerIdentityReport, ObstructionStatus, Orientation,
};
use cobord_core::fgl::{
    check_formal_sum, check_logarithm, check_round_trip, resolution_exactness_check,
    skeleton_presentation, two_series, two_series_data, CSeries, FPModule, SeriesCheck,
};
use cobord_core::gmod::{
    random_fp_module, realize, tensor_unit, tor1_bruteforce, tor1_via_resolution,
};
use cobord_core::lattice::AbGroup;
use cobord_core::steenrod::{
    bso4_ring, extraspecial_ring, freeness_check, random_element, structure_map_is_sq_compatible,
    torsion_shift_check, SqAlgebra, TorsionShiftReport,
};
use cobord_core::trace::{validate_trace, Anchor, Axiom, AxiomSet, Status, Verdict};
use cobord_core::{LocalInt2, MGPoly};
use rand::{Rng, SeedableRng};

use crate::config::{RunConfig, Window};
use crate::report::{render_steps, ClaimRecord};

/// Shared state for one run.
pub struct Pipeline {
    pub cfg: RunConfig,
    ring: OnceCell<Result<BpRing, String>>,
    series: OnceCell<Result<CSeries, String>>,
    extraspecial: OnceCell<Result<SqAlgebra, String>>,
    bso4: OnceCell<Result<SqAlgebra, String>>,
    tor_agree: Option<bool>,
    torsion_shift: Option<TorsionShiftReport>,
    euler: Option<EulerIdentityReport>,
}

fn stringify<T>(r: cobord_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

impl Pipeline {
    pub fn new(cfg: RunConfig) -> Self {
        Self {
            cfg,
            ring: OnceCell::new(),
            series: OnceCell::new(),
            extraspecial: OnceCell::new(),
            bso4: OnceCell::new(),
            tor_agree: None,
            torsion_shift: None,
            euler: None,
        }
    }

    pub fn ring(&self) -> Result<BpRing> {
        self.ring
            .get_or_init(|| stringify(BpRing::new(self.cfg.k)))
            .clone()
            .map_err(|e| anyhow!(e))
    }

    /// The 2-series at the configured truncation.
    pub fn series(&self) -> Result<&CSeries> {
        let r = self.series.get_or_init(|| {
            let ring = self.ring().map_err(|e| e.to_string())?;
            stringify(two_series(self.cfg.series_bound, ring))
        });
        r.as_ref().map_err(|e| anyhow!("2-series: {e}"))
    }

    pub fn extraspecial(&self) -> Result<&SqAlgebra> {
        let r = self
            .extraspecial
            .get_or_init(|| stringify(extraspecial_ring(self.cfg.steenrod_bound)));
        r.as_ref().map_err(|e| anyhow!("extraspecial ring: {e}"))
    }

    pub fn bso4(&self) -> Result<&SqAlgebra> {
        let r = self
            .bso4
            .get_or_init(|| stringify(bso4_ring(self.cfg.steenrod_bound)));
        r.as_ref().map_err(|e| anyhow!("BSO(4) ring: {e}"))
    }

    fn orientation(&self) -> Orientation {
        Orientation::new(self.cfg.orientation).unwrap_or_default()
    }

    /// Runs one check, converting errors into a failed record and adding timing.
    fn run(&self, id: &str, anchor: &str, f: impl FnOnce() -> Result<ClaimRecord>) -> ClaimRecord {
        let start = Instant::now();
        let mut rec = f().unwrap_or_else(|e| ClaimRecord::failed(id, anchor, format!("{e:#}")));
        if self.cfg.timing {
            rec.timing_ms = Some(start.elapsed().as_secs_f64() * 1000.0);
        }
        rec
    }

    // ---- formal group law ----

    pub fn fgl_claims(&self) -> Vec<ClaimRecord> {
        let anchor = Anchor::TwoSeries.key();
        let mut out = Vec::new();
        out.push(self.run("two-series.leading", anchor, || {
            let ring = self.ring()?;
            let s = self.series()?;
            let expected = [
                bp_int(2),
                v(1),
                v(1).pow(2).scale(&LocalInt2::from(2)),
                v(2),
            ];
            let ok = (1..=4).all(|j| s.coeff(j) == expected[j - 1]);
            let shown = two_series(self.cfg.fgl_deg, ring)?.to_text();
            Ok(ClaimRecord::new(
                "two-series.leading",
                anchor,
                ok,
                format!("[2](c1) = {shown} + O(c1^{})", self.cfg.fgl_deg + 1),
            ))
        }));
        let data = self
            .ring()
            .and_then(|ring| Ok(two_series_data(self.cfg.series_bound, ring)?));
        out.push(self.run("two-series.integrality", anchor, || {
            let d = data.as_ref().map_err(|e| anyhow!("{e:#}"))?;
            Ok(ClaimRecord::new(
                "two-series.integrality",
                anchor,
                d.series.degrees_ok(),
                format!(
                    "coefficients of c1^1..c1^{} lie in Z_(2)[v1..v{}], each homogeneous of degree 2 - 2j",
                    d.series.bound, self.cfg.k
                ),
            ))
        }));
        type Check = fn(&cobord_core::fgl::TwoSeriesData) -> SeriesCheck;
        let checks: [(&str, Check); 3] = [
            ("two-series.formal-sum", check_formal_sum),
            ("two-series.logarithm", check_logarithm),
            ("two-series.round-trip", check_round_trip),
        ];
        for (id, check) in checks {
            out.push(self.run(id, anchor, || {
                let d = data.as_ref().map_err(|e| anyhow!("{e:#}"))?;
                let r = check(d);
                let witness = match r.first_mismatch {
                    None => format!("{}: agrees through c1^{}", r.name, r.bound),
                    Some(j) => format!("{}: first mismatch at c1^{j}", r.name),
                };
                Ok(ClaimRecord::new(id, anchor, r.passed(), witness))
            }));
        }
        out
    }

    // ---- modules and Tor ----

    pub fn skeleton_claims(&self, ns: &[usize], window: Window) -> Vec<ClaimRecord> {
        let anchor = Anchor::SkeletonResolution.key();
        let mut out = Vec::new();
        out.push(self.run("skeleton.exactness", anchor, || {
            let ring = self.ring()?;
            let mut ok = true;
            let mut lines = Vec::new();
            for &n in ns {
                let r = resolution_exactness_check(n, window.pair(), ring)?;
                ok &= r.is_exact();
                lines.push(match r.first_failure {
                    None => format!(
                        "n={n}: relation map injective in {} degrees",
                        r.degrees_checked
                    ),
                    Some((d, rank)) => format!("n={n}: kernel of rank {rank} in degree {d}"),
                });
            }
            if let [n] = ns {
                let series = self.series()?;
                let m = skeleton_presentation(*n, series)?;
                let real = realize(&m, window.pair())?;
                lines.extend(real.to_string().lines().map(str::to_string));
            }
            Ok(
                ClaimRecord::new("skeleton.exactness", anchor, ok, format!("window {window}"))
                    .with_trace(lines),
            )
        }));
        out.push(self.run("skeleton.y8-tensor", anchor, || {
            let series = self.series()?;
            let y8 = skeleton_presentation(4, series)?;
            let t = tensor_unit(&y8, (-2, 10))?;
            let mut expected = vec![(0, AbGroup::free(1))];
            expected.extend([2, 4, 6, 8].map(|d| (d, AbGroup::elementary(1))));
            let got = t.nonzero();
            let shown: Vec<String> = got.iter().map(|(d, g)| format!("{d}: {g}")).collect();
            Ok(ClaimRecord::new(
                "skeleton.y8-tensor",
                anchor,
                got == expected,
                format!("BP*Y_8 (x) Z_(2) = {}", shown.join(", ")),
            ))
        }));
        out
    }

    fn tor_matrix(&self) -> Result<Vec<(String, FPModule)>> {
        let series = self.series()?;
        let mut mods = vec![
            ("free".to_string(), FPModule::free(vec![0], self.cfg.k)),
            ("Y_2".to_string(), skeleton_presentation(1, series)?),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.cfg.seed);
        for i in 0..self.cfg.random_modules {
            mods.push((
                format!("random#{i}"),
                random_fp_module(&mut rng, self.cfg.k),
            ));
        }
        Ok(mods)
    }

    /// Both `Tor_1` routes, and the swapped brute-force route, on the test matrix.
    pub fn tor_claims(&mut self, ns: &[usize], window: Window) -> Vec<ClaimRecord> {
        let anchor = Anchor::KunnethSequence.key();
        let rec = self.run("tor.oracles", anchor, || {
            let series = self.series()?;
            let mut lines = Vec::new();
            let mut agree = 0;
            let mut total = 0;
            for &n in ns {
                let y = skeleton_presentation(n, series)?;
                for (name, m) in self.tor_matrix()? {
                    let a = tor1_via_resolution(&m, series, n, window.pair())?;
                    let b = tor1_bruteforce(&m, &y, window.pair())?;
                    let c = tor1_bruteforce(&y, &m, window.pair())?;
                    let ok = a.same_invariants(&b) && a.same_invariants(&c);
                    total += 1;
                    agree += ok as usize;
                    let nz: Vec<String> = a
                        .nonzero()
                        .iter()
                        .map(|(d, g)| format!("{d}:{g}"))
                        .collect();
                    lines.push(format!(
                        "Y_{} vs {name}: {} [{}]",
                        2 * n,
                        if ok { "agree" } else { "DISAGREE" },
                        if nz.is_empty() {
                            "0".to_string()
                        } else {
                            nz.join(", ")
                        }
                    ));
                }
            }
            Ok(ClaimRecord::new(
                "tor.oracles",
                anchor,
                agree == total,
                format!("{agree}/{total} comparisons agree over {window}"),
            )
            .with_trace(lines))
        });
        self.tor_agree = Some(rec.status == crate::report::ClaimStatus::Pass);
        vec![rec]
    }

    // ---- Steenrod squares ----

    pub fn steenrod_claims(&mut self, which: &[SteenrodCheck]) -> Vec<ClaimRecord> {
        let mut out = Vec::new();
        for check in which {
            match check {
                SteenrodCheck::Sq3w4 => out.push(self.run("steenrod.sq3w4", Anchor::WuFormula.key(), || {
                    let a = self.bso4()?;
                    let w4 = a.parse("w4")?;
                    let sq = a.sq(3, &w4)?;
                    let expect = a.parse("w3*w4")?;
                    let g = self.extraspecial()?;
                    let s = g.structure.clone().context("extraspecial ring without structure map")?;
                    let compatible = structure_map_is_sq_compatible(g, &s)?;
                    Ok(ClaimRecord::new(
                        "steenrod.sq3w4",
                        Anchor::WuFormula.key(),
                        sq == expect && !sq.is_zero() && compatible,
                        format!(
                            "Sq^3 w4 = {} in H*(BSO(4); F_2); structure map into the extraspecial ring commutes with squares: {compatible}",
                            a.display(&sq)
                        ),
                    ))
                })),
                SteenrodCheck::Cartan => out.push(self.run(
                    "steenrod.cartan",
                    Anchor::ExtraspecialDescription.key(),
                    || self.cartan_check(),
                )),
                SteenrodCheck::Freeness => {
                    let anchor = Anchor::ExtraspecialDescription.key();
                    out.push(self.run("steenrod.freeness", anchor, || {
                        let a = self.extraspecial()?;
                        let s = a.structure.clone().context("no structure map")?;
                        let r = freeness_check(a, &[s.w2, s.w3, s.w4], 8)?;
                        Ok(ClaimRecord::new(
                            "steenrod.freeness",
                            anchor,
                            r.passed,
                            format!(
                                "free over F_2[q, Sq^1 q, w4] through degree {}: module generators per degree {:?}, Poincare series {:?}{}",
                                r.bound,
                                r.generators_per_degree,
                                r.poincare,
                                r.failure.map(|(d, why)| format!("; fails in degree {d}: {why}")).unwrap_or_default()
                            ),
                        ))
                    }));
                    out.push(self.run("steenrod.control.freeness", anchor, || {
                        let a = self.extraspecial()?;
                        let s = a.structure.clone().context("no structure map")?;
                        let bad = a.with_extra_relation(a.parse("w4*x1")?)?;
                        let r = freeness_check(&bad, &[s.w2, s.w3, s.w4], 8)?;
                        Ok(ClaimRecord::new(
                            "steenrod.control.freeness",
                            anchor,
                            !r.passed,
                            format!(
                                "with the extra relation w4*x1 = 0 the check {}",
                                match r.failure {
                                    Some((d, why)) => format!("fails in degree {d}: {why}"),
                                    None => "passes (control not detected)".into(),
                                }
                            ),
                        ))
                    }));
                }
                SteenrodCheck::TorsionShift => {
                    let anchor = Anchor::TorsionShift.key();
                    let mut report = None;
                    out.push(self.run("steenrod.torsion-shift", anchor, || {
                        let r = torsion_shift_check(self.extraspecial()?)?;
                        report = Some(r.clone());
                        Ok(ClaimRecord::new("steenrod.torsion-shift", anchor, r.passed, r.to_string().trim_end()))
                    }));
                    self.torsion_shift = report;
                    out.push(self.run("steenrod.control.torsion-shift", anchor, || {
                        let broken = self.extraspecial()?.with_square("w4", 3, MGPoly::zero())?;
                        let r = torsion_shift_check(&broken)?;
                        let detected = !r.passed && r.witness.as_deref() == Some("0");
                        Ok(ClaimRecord::new(
                            "steenrod.control.torsion-shift",
                            anchor,
                            detected,
                            format!("with Sq^3 w4 redefined to 0: {}", r.to_string().trim_end().replace('\n', "; ")),
                        ))
                    }));
                }
            }
        }
        out
    }

    fn cartan_check(&self) -> Result<ClaimRecord> {
        let a = self.extraspecial()?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.cfg.seed);
        let bound = a.bound();
        let mut checks = 0usize;
        let mut failure = None;
        for i in 0..self.cfg.random_elements {
            let df = rng.gen_range(1..=4);
            let dg = rng.gen_range(1..=bound - df - 1).min(5);
            let f = random_element(a, df, &mut rng)?;
            let g = random_element(a, dg, &mut rng)?;
            let fg = a.reduce(&(&f * &g))?;
            for k in 0..=(bound - df - dg) {
                let mut rhs = MGPoly::zero();
                for j in 0..=k {
                    rhs = rhs + &a.sq(j, &f)? * &a.sq(k - j, &g)?;
                }
                checks += 1;
                if a.sq(k, &fg)? != a.reduce(&rhs)? && failure.is_none() {
                    failure = Some(format!(
                        "Cartan fails for element pair {i}, Sq^{k}: f = {}",
                        a.display(&f)
                    ));
                }
            }
            let unstable = a.sq(df + 1, &f)?.is_zero() && a.sq(df, &f)? == a.reduce(&(&f * &f))?;
            checks += 1;
            if !unstable && failure.is_none() {
                failure = Some(format!("unstability fails for f = {}", a.display(&f)));
            }
        }
        let witness = match &failure {
            None => format!(
                "{} seeded element pairs (seed {}): {checks} Cartan and unstability identities hold",
                self.cfg.random_elements, self.cfg.seed
            ),
            Some(f) => f.clone(),
        };
        Ok(ClaimRecord::new(
            "steenrod.cartan",
            Anchor::ExtraspecialDescription.key(),
            failure.is_none(),
            witness,
        ))
    }

    // ---- characteristic classes ----

    pub fn euler_claims(&mut self) -> Vec<ClaimRecord> {
        let anchor = Anchor::EulerIdentity.key();
        let r = euler_identity_check(self.orientation());
        let rec = self.run("charclass.euler-identity", anchor, || {
            Ok(ClaimRecord::new(
                "charclass.euler-identity",
                anchor,
                r.passed(),
                format!(
                    "orientation {}: c2(A) = {}, c2(B) = {}, c2(A) - c2(B) = {}, chi = {}",
                    Orientation::new(r.orientation).unwrap_or_default(),
                    r.c2_a,
                    r.c2_b,
                    r.difference,
                    r.chi
                ),
            )
            .with_trace(vec![
                format!("2 chi = c2(A) - c2(B): {}", r.identity_holds),
                format!("(2 chi)^2 = (c2(A) - c2(B))^2: {}", r.squared_holds),
                format!("c1(A) = c1(B) = 0: {}", r.c1_vanishes),
                format!("symmetric-function oracle agrees: {}", r.oracle_agrees),
                format!("Weyl invariant: {}", r.weyl_invariant),
            ]))
        });
        self.euler = Some(r);
        vec![rec]
    }

    /// `Sq^3` obstruction of a class given as an expression in either ring.
    pub fn obstruct_claim(&self, expr: &str) -> ClaimRecord {
        let anchor = Anchor::ObstructionPattern.key();
        self.run("charclass.obstruct", anchor, || {
            let bso4 = self.bso4()?;
            let (ring, name, cls) = match bso4.parse(expr) {
                Ok(c) => (bso4, "BSO(4)", c),
                Err(_) => {
                    let g = self.extraspecial()?;
                    (g, "BG", g.parse(expr)?)
                }
            };
            let o = ah_obstruction(&cls, ring)?;
            let mut rec = ClaimRecord::new(
                "charclass.obstruct",
                anchor,
                true,
                format!(
                    "in H*({name}; F_2): Sq^3({}) = {}",
                    ring.display(&o.class),
                    if o.sq3.is_zero() {
                        "0".into()
                    } else {
                        ring.display(&o.sq3)
                    }
                ),
            );
            rec.verdict = Some(
                match o.status {
                    ObstructionStatus::Obstructed => "OBSTRUCTED",
                    ObstructionStatus::Undecided => "UNDECIDED",
                }
                .into(),
            );
            Ok(rec)
        })
    }

    // ---- spectral sequence ----

    pub fn model(&self, axioms: AxiomSet, rank: usize) -> Result<EInftyModel> {
        let input = bg_cohomology_input(self.extraspecial()?, axioms, rank)?;
        Ok(build_einfty(
            &input,
            self.cfg.ahss_window.pair(),
            self.ring()?,
        )?)
    }

    pub fn model_claims(&self) -> Vec<ClaimRecord> {
        let mut out = Vec::new();
        let anchor = Anchor::BocksteinFactorization.key();
        out.push(self.run("ahss.integral-input", anchor, || {
            let m = self.model(self.cfg.axioms, 0)?;
            let inp = &m.input;
            let consistent = inp.axiom_consistency.iter().all(|(_, ok)| *ok);
            let sq_ok = inp.sq3_w4.as_ref().is_some_and(|(l, r)| l == r);
            let mut lines: Vec<String> = inp.summary().lines().map(str::to_string).collect();
            for r in &inp.bockstein {
                lines.push(format!(
                    "degree {}: dim {}, rank Sq^1 in {}, out {}, E_2 {}",
                    r.degree, r.dim, r.sq1_rank_in, r.sq1_rank_out, r.e2
                ));
            }
            for h in &inp.holes {
                lines.push(format!("H^{}: {} summand(s) of undetermined order ({})", h.degree, h.summands, h.reason));
            }
            let agree: Vec<String> = inp.axiom_consistency.iter().map(|(k, ok)| format!("{k}: {ok}")).collect();
            Ok(ClaimRecord::new(
                "ahss.integral-input",
                anchor,
                consistent && sq_ok && inp.chi.is_some(),
                format!(
                    "integral cohomology from Bockstein data; axioms agree with it ({}); Sq^3 w4 = w3*w4: {sq_ok}",
                    agree.join(", ")
                ),
            )
            .with_trace(lines))
        }));
        let anchor = Anchor::VInjectivity.key();
        out.push(self.run("ahss.v-injectivity", anchor, || {
            let m = self.model(self.cfg.axioms, 0)?;
            let r = vi_injectivity_report(&m)?;
            let mut lines = r.v1_noninjective.clone();
            lines.extend(r.violations.iter().map(|v| format!("violation: {v}")));
            Ok(ClaimRecord::new(
                "ahss.v-injectivity",
                anchor,
                r.passed,
                format!(
                    "{} v_i maps checked; v_i (i >= 2) injective; {} non-injective v1 maps, all over H^6 or H^7",
                    r.maps_checked,
                    r.v1_noninjective.len()
                ),
            )
            .with_trace(lines))
        }));
        out
    }

    pub fn lemma_verdict(&self, axioms: AxiomSet, rank: usize) -> Result<Verdict> {
        Ok(lemma64_decide(&self.model(axioms, rank)?, self.series()?)?)
    }

    /// The rank sweep under the configured axioms, plus the controls.
    pub fn lemma_claims(&self, controls: bool) -> Vec<ClaimRecord> {
        let anchor = Anchor::TorRestriction.key();
        let axioms = self.cfg.axioms;
        let mut out = Vec::new();
        out.push(self.run("lemma-6.4", anchor, || {
            let mut lines = Vec::new();
            let mut first: Option<Verdict> = None;
            let mut all_forced = true;
            for r in 0..=self.cfg.h7_max_rank {
                let v = self.lemma_verdict(axioms, r)?;
                validate_trace(&v.trace)?;
                all_forced &= v.status == Status::ForcedZero;
                let mut line = format!("H^7 free rank {r}: {}", v.status);
                if let Some(s) = v.failed_stage {
                    line.push_str(&format!(" (stage {s})"));
                }
                lines.push(line);
                first.get_or_insert(v);
            }
            let v = first.context("empty rank sweep")?;
            let mut rec = ClaimRecord::new(
                "lemma-6.4",
                anchor,
                all_forced,
                format!(
                    "axioms {axioms}; {}{}",
                    lines.join("; "),
                    v.witness
                        .as_ref()
                        .map(|w| format!("; witness: {w}"))
                        .unwrap_or_default()
                ),
            )
            .with_verdict(&v);
            if let Some(s) = v.failed_stage {
                rec.trace.push(format!("failed at stage {s}"));
            }
            Ok(rec)
        }));
        if !controls {
            return out;
        }
        out.push(self.run("lemma-6.4.ablation", anchor, || {
            let ablated = AxiomSet {
                h7_no_4torsion: false,
                ..axioms
            };
            let v = self.lemma_verdict(ablated, 0)?;
            let ok = v.status == Status::NotForced && v.failed_stage == Some(3);
            Ok(ClaimRecord::new(
                "lemma-6.4.ablation",
                anchor,
                ok,
                format!(
                    "axioms {ablated}: {} at stage {}; {}",
                    v.status,
                    v.failed_stage.map(|s| s.to_string()).unwrap_or("-".into()),
                    v.witness.clone().unwrap_or_default()
                ),
            )
            .with_verdict(&v))
        }));
        out.push(self.run("lemma-6.4.monotone", anchor, || {
            let mut results = Vec::new();
            for set in AxiomSet::subsets() {
                results.push((set, self.lemma_verdict(set, 0)?.status));
            }
            let mut ok = true;
            for (small, s1) in &results {
                for (big, s2) in &results {
                    if big.includes(small) && *s1 == Status::ForcedZero && *s2 != Status::ForcedZero
                    {
                        ok = false;
                    }
                }
            }
            let lines: Vec<String> = results.iter().map(|(a, s)| format!("{a}: {s}")).collect();
            Ok(ClaimRecord::new(
                "lemma-6.4.monotone",
                anchor,
                ok,
                "adding axioms never turns FORCED_ZERO into NOT_FORCED",
            )
            .with_trace(lines))
        }));
        out
    }

    /// The two propositions, built on the outcomes of the earlier checks.
    pub fn proposition_claims(&mut self) -> Vec<ClaimRecord> {
        if self.torsion_shift.is_none() {
            self.torsion_shift = self
                .extraspecial()
                .ok()
                .and_then(|a| torsion_shift_check(a).ok());
        }
        if self.euler.is_none() {
            self.euler = Some(euler_identity_check(self.orientation()));
        }
        let ids = [
            ("prop-6.1", Anchor::ObstructionPattern.key()),
            ("prop-6.2", Anchor::C1Summand.key()),
        ];
        let start = Instant::now();
        let verdicts = self.chain_verdicts();
        let elapsed = start.elapsed().as_secs_f64() * 1000.0;
        let mut out = Vec::new();
        match verdicts {
            Ok((p1, p2)) => {
                for ((id, anchor), v) in ids.into_iter().zip([p1, p2]) {
                    let valid = validate_trace(&v.trace);
                    let passed = v.status == Status::Nonzero && valid.is_ok();
                    let mut witness = match v.status {
                        Status::Nonzero => format!("NONZERO with a {}-step trace", v.trace.len()),
                        s => format!(
                            "{s}{}",
                            v.dependency
                                .as_ref()
                                .map(|d| format!(" (depends on {d})"))
                                .unwrap_or_default()
                        ),
                    };
                    if let Err(e) = valid {
                        witness.push_str(&format!("; trace rejected: {e}"));
                    }
                    let mut rec = ClaimRecord::new(id, anchor, passed, witness).with_verdict(&v);
                    rec.trace = render_steps(&v.trace);
                    if self.cfg.timing {
                        rec.timing_ms = Some(elapsed);
                    }
                    out.push(rec);
                }
            }
            Err(e) => {
                for (id, anchor) in ids {
                    out.push(ClaimRecord::failed(id, anchor, format!("{e:#}")));
                }
            }
        }
        out
    }

    fn chain_verdicts(&self) -> Result<(Verdict, Verdict)> {
        let model = self.model(self.cfg.axioms, 0)?;
        let lemma = lemma64_decide(&model, self.series()?)?;
        let series = self.series()?;
        let y2 = skeleton_presentation(1, series)?;
        let y2_degree2 = tensor_unit(&y2, (2, 2))?.get(2)?.clone();
        let ts = self.torsion_shift.as_ref();
        let euler = self.euler.as_ref();
        let inputs = ChainInputs {
            model: &model,
            torsion_shift_passed: ts.is_some_and(|t| t.passed),
            torsion_shift_detail: ts
                .map(|t| t.to_string())
                .unwrap_or_else(|| "not run".into()),
            tor_oracles_agree: self.tor_agree.unwrap_or(false),
            euler_identity_passed: euler.is_some_and(|e| e.passed()),
            lemma64: &lemma,
            y2_degree2,
        };
        Ok(prop_chain_report(&inputs)?)
    }

    pub fn axiom_claims(&self) -> Vec<ClaimRecord> {
        let a = self.cfg.axioms;
        [
            (Axiom::HOddElementary, a.h_odd_elementary),
            (Axiom::H7No4Torsion, a.h7_no_4torsion),
            (Axiom::TopRowGeneration, true),
            (Axiom::MittagLeffler, true),
            (Axiom::H4Injection, true),
            (Axiom::HoleOrders, true),
        ]
        .into_iter()
        .map(|(ax, on)| ClaimRecord::axiom(&format!("axiom.{}", ax.key()), ax.key(), on))
        .collect()
    }

    /// The full dependency-ordered pipeline.
    pub fn verify_all(&mut self) -> Vec<ClaimRecord> {
        let mut out = self.fgl_claims();
        let w = self.cfg.skeleton_window;
        out.extend(self.skeleton_claims(&[1, 2, 3, 4], w));
        let tw = self.cfg.tor_window;
        out.extend(self.tor_claims(&[1, 2, 3, 4], tw));
        out.extend(self.steenrod_claims(&SteenrodCheck::ALL));
        out.extend(self.euler_claims());
        out.push(self.obstruct_claim("w4"));
        out.extend(self.model_claims());
        out.extend(self.lemma_claims(true));
        out.extend(self.proposition_claims());
        out.extend(self.axiom_claims());
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SteenrodCheck {
    Sq3w4,
    Cartan,
    Freeness,
    TorsionShift,
}

impl SteenrodCheck {
    pub const ALL: [SteenrodCheck; 4] = [
        SteenrodCheck::Sq3w4,
        SteenrodCheck::Cartan,
        SteenrodCheck::Freeness,
        SteenrodCheck::TorsionShift,
    ];
}
