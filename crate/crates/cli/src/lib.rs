//! Verification runs over the `infdiff` library with JSON or CSV reports.
//!
//! Every run is a pure function of its [`RunConfig`]: fuzzed inputs come
//! from the seed, and reports list rows in a fixed order.

pub mod domain;
pub mod report;
mod suites;

use std::path::PathBuf;

use anyhow::{bail, Result};
use infdiff::scalar::Backend;

pub use report::{Report, RunDocument};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Roundtrip,
    Identity,
    Translation,
    Factorials,
    Compose,
    Classify,
    Norms,
    Symbol,
    Decay,
    Claim1,
    Claim2,
    Suite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Roundtrip => "roundtrip",
            Command::Identity => "identity",
            Command::Translation => "translation",
            Command::Factorials => "factorials",
            Command::Compose => "compose",
            Command::Classify => "classify",
            Command::Norms => "norms",
            Command::Symbol => "symbol",
            Command::Decay => "decay",
            Command::Claim1 => "counterexample claim1",
            Command::Claim2 => "counterexample claim2",
            Command::Suite => "suite",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Command parameters. Unset values fall back to per-command defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    pub seed: u64,
    /// Number of fuzz cases.
    pub count: Option<usize>,
    pub alpha_max: Option<u32>,
    pub beta_max: Option<u32>,
    pub delta_max: Option<u32>,
    pub gamma_cap: Option<u32>,
    pub degree_cap: Option<u32>,
    pub m_max: Option<u64>,
    pub r_max: Option<u32>,
    pub n: Option<u32>,
    pub d: Option<usize>,
    /// JSON domain descriptor, see [`domain`].
    pub domain: Option<String>,
    pub operator: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// `None` runs both `p=2` and the Hahn backend.
    pub backend: Option<Backend>,
    pub command: Command,
    pub format: Format,
    pub settings: Settings,
}

/// Reads `p=<prime>`, a bare prime, or `hahn`.
pub fn parse_backend(s: &str) -> Result<Backend> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("hahn") {
        return Ok(Backend::Hahn);
    }
    let digits = s.strip_prefix("p=").unwrap_or(s);
    let Ok(p) = digits.parse::<u32>() else {
        bail!("unknown backend `{}` (expected p=<prime> or hahn)", s);
    };
    Ok(Backend::padic(p)?)
}

fn backends(cfg: &RunConfig) -> Vec<Backend> {
    match cfg.backend {
        Some(b) => vec![b],
        None => vec![Backend::PAdic(2), Backend::Hahn],
    }
}

fn per_backend<F>(cfg: &RunConfig, mut f: F) -> Result<Vec<Report>>
where
    F: FnMut(Backend) -> Result<Vec<Report>>,
{
    let mut out = Vec::new();
    for b in backends(cfg) {
        out.extend(f(b)?);
    }
    Ok(out)
}

/// Runs a command. Errors are reserved for bad input; failed checks show up
/// as `pass: false` in the document.
pub fn execute(cfg: &RunConfig) -> Result<RunDocument> {
    let s = &cfg.settings;
    let reports = match cfg.command {
        Command::Roundtrip => per_backend(cfg, |b| Ok(vec![suites::roundtrip_suite(b, s)?]))?,
        Command::Identity => vec![suites::identity_suite(s)?],
        Command::Translation => per_backend(cfg, |b| Ok(vec![suites::translation_suite(b, s)?]))?,
        Command::Factorials => vec![suites::factorial_suite(s)?],
        Command::Compose => per_backend(cfg, |b| Ok(vec![suites::compose_suite(b, s)?]))?,
        Command::Classify => per_backend(cfg, |b| Ok(vec![suites::classify_suite(b, s)?]))?,
        Command::Norms => per_backend(cfg, |b| Ok(vec![suites::norms_suite(b, s)?]))?,
        Command::Symbol => per_backend(cfg, |b| Ok(vec![suites::symbol_suite(b, s)?]))?,
        Command::Decay => per_backend(cfg, |b| suites::decay_suite(b, s))?,
        Command::Claim1 => per_backend(cfg, |b| suites::claim1_suite(b, s))?,
        Command::Claim2 => per_backend(cfg, |b| Ok(vec![suites::claim2_suite(b, s)?]))?,
        Command::Suite => {
            if s.operator.is_some() || s.domain.is_some() {
                bail!("the suite runs built-in inputs; --operator and --domain belong to single commands");
            }
            let mut out = vec![suites::identity_suite(s)?, suites::factorial_suite(s)?];
            out.extend(per_backend(cfg, |b| {
                let mut v = vec![
                    suites::roundtrip_suite(b, s)?,
                    suites::translation_suite(b, s)?,
                    suites::compose_suite(b, s)?,
                    suites::classify_suite(b, s)?,
                    suites::norms_suite(b, s)?,
                    suites::symbol_suite(b, s)?,
                ];
                v.extend(suites::decay_suite(b, s)?);
                v.push(suites::claim2_suite(b, s)?);
                v.extend(suites::claim1_suite(b, s)?);
                Ok(v)
            })?);
            out
        }
    };
    Ok(RunDocument::new(cfg.command.name(), s.seed, reports))
}

/// Renders a document in the configured format.
pub fn render(doc: &RunDocument, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(doc.to_json()),
        Format::Csv => doc.to_csv(),
    }
}
