use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use infdiff::scalar::Backend;
use infdiff_cli::{execute, parse_backend, render, Command, Format, RunConfig, Settings};

#[derive(Parser)]
#[command(
    name = "infdiff",
    version,
    about = "Exact checks for infinite-order differential operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// `p=<prime>` or `hahn`; both p=2 and hahn when omitted.
    #[arg(long, global = true, value_parser = parse_backend)]
    backend: Option<Backend>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Number of fuzz cases.
    #[arg(long, global = true)]
    count: Option<usize>,
    #[arg(long, global = true)]
    alpha_max: Option<u32>,
    #[arg(long, global = true)]
    beta_max: Option<u32>,
    #[arg(long, global = true)]
    delta_max: Option<u32>,
    #[arg(long, global = true)]
    gamma_cap: Option<u32>,
    #[arg(long, global = true)]
    degree_cap: Option<u32>,
    /// Upper end of the factorial sweep.
    #[arg(long, global = true)]
    m_max: Option<u64>,
    #[arg(long, global = true)]
    r_max: Option<u32>,
    /// Shrinking level of the decay estimate.
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Dimension.
    #[arg(long, global = true)]
    d: Option<usize>,
    /// JSON domain descriptor.
    #[arg(long, global = true)]
    domain: Option<String>,
    /// Operator file.
    #[arg(long, global = true)]
    operator: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Recover operators from their action on monomials.
    Roundtrip,
    /// The alternating binomial identity behind the symbol map.
    Identity,
    /// Symbols computed in translated coordinates.
    Translation,
    /// Legendre's formula and the factorial bound.
    Factorials,
    /// Composition against repeated application.
    Compose,
    /// Rapid-decrease verdicts on the worked families.
    Classify,
    /// Gauss and sup norms, seminorms and operator-norm brackets.
    Norms,
    /// Total symbols.
    Symbol,
    /// Coefficient decay from operator norms on shrinking discs.
    Decay,
    /// The ξ family.
    Counterexample {
        #[command(subcommand)]
        claim: Claim,
    },
    /// Everything above with default sizes.
    Suite,
}

#[derive(Subcommand)]
enum Claim {
    /// Bounds on subdiscs and on a disc with a hole.
    Claim1,
    /// Divergence on the whole disc.
    Claim2,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Roundtrip => Command::Roundtrip,
        Cmd::Identity => Command::Identity,
        Cmd::Translation => Command::Translation,
        Cmd::Factorials => Command::Factorials,
        Cmd::Compose => Command::Compose,
        Cmd::Classify => Command::Classify,
        Cmd::Norms => Command::Norms,
        Cmd::Symbol => Command::Symbol,
        Cmd::Decay => Command::Decay,
        Cmd::Counterexample {
            claim: Claim::Claim1,
        } => Command::Claim1,
        Cmd::Counterexample {
            claim: Claim::Claim2,
        } => Command::Claim2,
        Cmd::Suite => Command::Suite,
    };
    let o = cli.opts;
    let cfg = RunConfig {
        backend: o.backend,
        command,
        format: match o.format {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        },
        settings: Settings {
            seed: o.seed,
            count: o.count,
            alpha_max: o.alpha_max,
            beta_max: o.beta_max,
            delta_max: o.delta_max,
            gamma_cap: o.gamma_cap,
            degree_cap: o.degree_cap,
            m_max: o.m_max,
            r_max: o.r_max,
            n: o.n,
            d: o.d,
            domain: o.domain,
            operator: o.operator,
        },
    };
    let (text, pass) = match execute(&cfg).and_then(|doc| Ok((render(&doc, cfg.format)?, doc.pass)))
    {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {:#}", e);
            return ExitCode::from(2);
        }
    };
    if std::io::stdout().write_all(text.as_bytes()).is_err() {
        return ExitCode::from(2);
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
