//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use cobord::checks::{Pipeline, SteenrodCheck};
use cobord::config::{RunConfig, Window};
use cobord::load_report;
use cobord::report::{ClaimRecord, ClaimStatus, Report};
use cobord_core::bp::BpRing;
use cobord_core::charclass::{euler_identity_check, Orientation};
use cobord_core::fgl::{skeleton_presentation, two_series};
use cobord_core::gmod::tensor_unit;
use cobord_core::lattice::AbGroup;
use cobord_core::trace::{AxiomSet, Status};

type Outcome = Result<String, String>;
type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn require(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn all_pass(claims: &[ClaimRecord], ids: &[&str]) -> Result<(), String> {
    for id in ids {
        let c = claims
            .iter()
            .find(|c| c.id == *id)
            .ok_or_else(|| format!("{id}: missing"))?;
        require(
            c.status == ClaimStatus::Pass,
            format!("{id}: {} ({})", c.status, c.witness),
        )?;
    }
    Ok(())
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<Duration, String> {
    let t = start.elapsed();
    require(
        t < budget,
        format!("{what} took {t:.2?}, budget {budget:?}"),
    )?;
    Ok(t)
}

fn series_criterion() -> Outcome {
    let start = Instant::now();
    let ring = BpRing::new(4).map_err(|e| e.to_string())?;
    let s = two_series(4, ring).map_err(|e| e.to_string())?;
    let text = s.to_text();
    require(
        text == "2*c1 + v1*c1^2 + 2*v1^2*c1^3 + v2*c1^4",
        format!("leading terms {text}"),
    )?;
    let p = Pipeline::new(RunConfig::default());
    all_pass(
        &p.fgl_claims(),
        &[
            "two-series.leading",
            "two-series.integrality",
            "two-series.formal-sum",
            "two-series.logarithm",
            "two-series.round-trip",
        ],
    )?;
    let t = within(start, Duration::from_secs(10), "2-series")?;
    Ok(format!(
        "leading (2, v1, 2v1^2, v2), integral and F(x,x) through c1^16 in {t:.2?}"
    ))
}

fn skeleton_criterion() -> Outcome {
    let p = Pipeline::new(RunConfig::default());
    all_pass(
        &p.skeleton_claims(&[1, 2, 3, 4], Window::new(-30, 10)),
        &["skeleton.exactness", "skeleton.y8-tensor"],
    )?;
    let ring = BpRing::new(4).map_err(|e| e.to_string())?;
    let series = two_series(4, ring).map_err(|e| e.to_string())?;
    let y8 = skeleton_presentation(4, &series).map_err(|e| e.to_string())?;
    let t = tensor_unit(&y8, (-30, 10)).map_err(|e| e.to_string())?;
    for d in -30..=10i64 {
        let expect = match d {
            0 => AbGroup::free(1),
            2 | 4 | 6 | 8 => AbGroup::elementary(1),
            _ => AbGroup::zero(),
        };
        let got = t.get(d).map_err(|e| e.to_string())?;
        require(
            *got == expect,
            format!("tensor_unit(Y8) in degree {d}: {got}"),
        )?;
    }
    Ok("n = 1..4 exact over [-30, 10]; Y8 tensor is Z_(2) + Z/2 in degrees 2,4,6,8".into())
}

fn tor_criterion() -> Outcome {
    let mut p = Pipeline::new(RunConfig::default());
    let claims = p.tor_claims(&[1, 2, 3, 4], Window::new(-20, 12));
    all_pass(&claims, &["tor.oracles"])?;
    let c = &claims[0];
    require(
        c.trace.len() == 28,
        format!("{} comparisons, expected 28", c.trace.len()),
    )?;
    Ok(c.witness.clone())
}

fn steenrod_criterion() -> Outcome {
    let cfg = RunConfig::default();
    require(cfg.random_elements == 100, "Cartan sample size is not 100")?;
    let mut p = Pipeline::new(cfg);
    all_pass(
        &p.steenrod_claims(&SteenrodCheck::ALL),
        &[
            "steenrod.sq3w4",
            "steenrod.cartan",
            "steenrod.freeness",
            "steenrod.control.freeness",
            "steenrod.torsion-shift",
            "steenrod.control.torsion-shift",
        ],
    )?;
    Ok("Sq3 w4 = w3 w4; Cartan and unstability on 100 elements; freeness; torsion shift; both controls FAIL".into())
}

fn charclass_criterion() -> Outcome {
    let r = euler_identity_check(Orientation::default());
    require(r.passed(), format!("{r:?}"))?;
    require(
        r.difference == "-2*a^2 + 2*b^2",
        format!("c2(A) - c2(B) = {}", r.difference),
    )?;
    let flipped = euler_identity_check(Orientation::POSITIVE);
    require(
        flipped.squared_holds,
        "(2 chi)^2 identity depends on the orientation",
    )?;
    require(
        flipped.c1_vanishes,
        "c1 nonzero under the other orientation",
    )?;
    let mut p = Pipeline::new(RunConfig::default());
    all_pass(&p.euler_claims(), &["charclass.euler-identity"])?;
    Ok(format!(
        "c2(A) - c2(B) = {}; 2 chi identity under orientation {}; squared identity either way; c1 = 0",
        r.difference, r.orientation
    ))
}

fn lemma_criterion() -> Outcome {
    let start = Instant::now();
    let p = Pipeline::new(RunConfig::default());
    for rank in 0..=4 {
        let v = p
            .lemma_verdict(AxiomSet::ALL, rank)
            .map_err(|e| e.to_string())?;
        require(
            v.status == Status::ForcedZero,
            format!("rank {rank}: {}", v.status),
        )?;
    }
    let ablated = AxiomSet {
        h7_no_4torsion: false,
        ..AxiomSet::ALL
    };
    let v = p.lemma_verdict(ablated, 0).map_err(|e| e.to_string())?;
    require(
        v.status == Status::NotForced && v.failed_stage == Some(3),
        format!("ablation: {} at stage {:?}", v.status, v.failed_stage),
    )?;
    all_pass(
        &p.lemma_claims(true),
        &["lemma-6.4", "lemma-6.4.ablation", "lemma-6.4.monotone"],
    )?;
    let t = within(start, Duration::from_secs(60), "lemma sweep")?;
    Ok(format!(
        "FORCED_ZERO for ranks 0..4; ablation NOT_FORCED at stage 3; {t:.2?}"
    ))
}

fn run_verify(json: &Path) -> Result<Report, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_cobord"))
        .args(["verify", "all", "--format", "json", "--json"])
        .arg(json)
        .stdout(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    require(status.success(), format!("verify all exited with {status}"))?;
    load_report(json).map_err(|e| format!("{e:#}"))
}

fn end_to_end_criterion(dir: &Path) -> Outcome {
    let report = run_verify(&dir.join("e2e.json"))?;
    require(
        report.summary.fail == 0,
        format!("{} failing claims", report.summary.fail),
    )?;
    for id in ["prop-6.1", "prop-6.2"] {
        let c = report.claim(id).ok_or_else(|| format!("{id}: missing"))?;
        require(c.status == ClaimStatus::Pass, format!("{id}: {}", c.status))?;
        require(
            c.verdict.as_deref() == Some("NONZERO"),
            format!("{id}: {:?}", c.verdict),
        )?;
        require(!c.trace.is_empty(), format!("{id}: empty trace"))?;
        for step in &c.trace {
            require(
                step.starts_with("[@") || step.starts_with("[axiom:"),
                format!("{id}: untagged step '{step}'"),
            )?;
        }
    }
    Ok("prop-6.1 = NONZERO, prop-6.2 = NONZERO; every trace step tagged".into())
}

fn determinism_criterion(dir: &Path) -> Outcome {
    let a = dir.join("first.json");
    let b = dir.join("second.json");
    run_verify(&a)?;
    run_verify(&b)?;
    let first = std::fs::read(&a).map_err(|e| e.to_string())?;
    let second = std::fs::read(&b).map_err(|e| e.to_string())?;
    require(first == second, "JSON reports differ")?;
    Ok(format!("two runs, {} identical bytes", first.len()))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<(&str, Criterion)> = vec![
        ("2-series", Box::new(series_criterion)),
        ("resolution exactness", Box::new(skeleton_criterion)),
        ("Tor oracle equivalence", Box::new(tor_criterion)),
        ("Steenrod suite", Box::new(steenrod_criterion)),
        ("characteristic classes", Box::new(charclass_criterion)),
        ("leading-term lemma", Box::new(lemma_criterion)),
        (
            "end-to-end verify",
            Box::new(|| end_to_end_criterion(dir.path())),
        ),
        (
            "determinism",
            Box::new(|| determinism_criterion(dir.path())),
        ),
    ];
    let mut failed = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", idx + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", idx + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
