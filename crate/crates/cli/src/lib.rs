//! Verification driver: runs the checks, collects claim records and renders
//! the report as text or JSON.

pub mod checks;
pub mod config;
pub mod report;

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use cobord_core::trace::AxiomSet;

use checks::{Pipeline, SteenrodCheck};
use config::{Format, RunConfig, Window};
use report::Report;

#[derive(Debug, Parser)]
#[command(
    name = "cobord",
    version,
    about = "Exact BP-cohomology computations and their verification report"
)]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub command: Command,
}

/// Overrides applied on top of the defaults and the config file.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Highest power of c1 shown by `fgl`.
    #[arg(long, global = true)]
    pub deg: Option<usize>,
    /// Skeleton index for `skeleton` and `tor`.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Degree window LO..HI for the selected subcommand.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub window: Option<Window>,
    /// `all`, `none`, or a comma-separated list of axiom keys.
    #[arg(long, global = true)]
    pub axioms: Option<AxiomSet>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Also write the JSON report here.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// key=value file mirroring the run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Record per-claim wall time (reports are then no longer reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Format of standard output.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every check in dependency order.
    Verify {
        #[arg(default_value = "all", value_parser = ["all"])]
        target: String,
    },
    /// The 2-series and its self-consistency checks.
    Fgl,
    /// Presentations of BP* of skeleta of BZ/2.
    Skeleton,
    /// Tor_1 by resolution against brute force.
    Tor {
        /// Compare the two routes (the only mode).
        #[arg(long, default_value_t = true)]
        oracle: bool,
    },
    /// Mod-2 cohomology checks.
    Steenrod {
        #[arg(long, value_enum)]
        check: Vec<SteenrodCheck>,
    },
    /// Chern-class identities and Sq^3 obstructions.
    Charclass {
        #[arg(long, value_enum)]
        check: Option<CharclassCheck>,
        /// Class expression, e.g. `w4` or `w2^2 + w4`.
        #[arg(long)]
        obstruct: Option<String>,
    },
    /// The leading-term decision procedure over the H^7 rank sweep.
    Lemma64,
    /// Render a saved JSON report.
    Report { path: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CharclassCheck {
    EulerIdentity,
}

/// Defaults, then the config file, then flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.flags.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    let f = &cli.flags;
    if let Some(d) = f.deg {
        cfg.fgl_deg = d;
        cfg.series_bound = cfg.series_bound.max(d);
    }
    if let Some(n) = f.n {
        cfg.skeleton_n = n;
    }
    if let Some(w) = f.window {
        match cli.command {
            Command::Skeleton => cfg.skeleton_window = w,
            Command::Tor { .. } => cfg.tor_window = w,
            Command::Lemma64 => cfg.ahss_window = w,
            _ => {}
        }
    }
    if let Some(a) = f.axioms {
        cfg.axioms = a;
    }
    if let Some(s) = f.seed {
        cfg.seed = s;
    }
    if let Some(fmt) = f.format {
        cfg.format = fmt;
    }
    cfg.timing |= f.timing;
    cfg.validate()?;
    Ok(cfg)
}

/// Runs a command that computes something.
pub fn run(command: &Command, cfg: RunConfig) -> Result<Report> {
    let mut p = Pipeline::new(cfg.clone());
    let claims = match command {
        Command::Verify { .. } => p.verify_all(),
        Command::Fgl => p.fgl_claims(),
        Command::Skeleton => p.skeleton_claims(&[cfg.skeleton_n], cfg.skeleton_window),
        Command::Tor { .. } => p.tor_claims(&[cfg.skeleton_n], cfg.tor_window),
        Command::Steenrod { check } => {
            let which: Vec<SteenrodCheck> = if check.is_empty() {
                SteenrodCheck::ALL.to_vec()
            } else {
                check.clone()
            };
            p.steenrod_claims(&which)
        }
        Command::Charclass { check, obstruct } => {
            let mut out = Vec::new();
            if check.is_some() || obstruct.is_none() {
                out.extend(p.euler_claims());
            }
            if let Some(expr) = obstruct {
                out.push(p.obstruct_claim(expr));
            }
            out
        }
        Command::Lemma64 => {
            let mut out = p.lemma_claims(false);
            out.extend(p.axiom_claims());
            out
        }
        Command::Report { path } => return load_report(path),
    };
    Ok(Report::new(claims, cfg))
}

pub fn load_report(path: &std::path::Path) -> Result<Report> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Output for standard output in the configured format.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}
