use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use peakeq::config::{
    self, EqualRootsArg, Format, InitSpec, RootValue, RunConfig, TrinomialArg, TrinomialMode,
};
use peakeq::{commands, CliError};

type Coeffs = Vec<f64>;
type Roots = Vec<RootValue>;

/// Peak effects in stable linear difference equations.
#[derive(Parser)]
#[command(name = "peakeq", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Cmd>,

    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate a trajectory
    Simulate,
    /// Peak of one trajectory
    Peak,
    /// Worst case over the unit box of initial conditions
    WorstCase,
    /// Equal-root quantities: alpha/beta curves, K sets, thresholds
    EqualRoots,
    /// Table of beta_n, alpha_n and their maximizers
    Table1,
    /// Root-bound checks for real roots
    BoundsCheck,
    /// Bounded-noise sweep, bounds and steady state
    Noise,
    /// The Markov-chain equation
    Markov,
    /// Trinomial family
    Trinomial {
        #[arg(value_enum)]
        mode: Option<TrinomialMode>,
    },
    /// Random search for counterexamples to the equal-root extremality claim
    Conjecture,
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Simulate => "simulate",
            Cmd::Peak => "peak",
            Cmd::WorstCase => "worst-case",
            Cmd::EqualRoots => "equal-roots",
            Cmd::Table1 => "table1",
            Cmd::BoundsCheck => "bounds-check",
            Cmd::Noise => "noise",
            Cmd::Markov => "markov",
            Cmd::Trinomial { .. } => "trinomial",
            Cmd::Conjecture => "conjecture",
        }
    }
}

#[derive(clap::Args)]
struct Opts {
    /// JSON run configuration; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Coefficients a_1,...,a_n
    #[arg(long, global = true, value_parser = config::parse_list, allow_hyphen_values = true)]
    coeffs: Option<Coeffs>,

    /// Roots, e.g. 0.5,0.3+0.4i,0.3-0.4i
    #[arg(long, global = true, value_parser = config::parse_roots, allow_hyphen_values = true)]
    roots: Option<Roots>,

    /// n,rho
    #[arg(long, global = true, value_parser = config::parse_equal_roots)]
    equal_roots: Option<EqualRootsArg>,

    /// n,a,b
    #[arg(long, global = true, value_parser = config::parse_trinomial, allow_hyphen_values = true)]
    trinomial: Option<TrinomialArg>,

    /// rho of the Markov equation
    #[arg(long, global = true)]
    markov: Option<f64>,

    /// impulse | alternating | geometric | ones | ramp | x0,x1,...
    #[arg(long, global = true, value_parser = config::parse_init, allow_hyphen_values = true)]
    init: Option<InitSpec>,

    #[arg(long, global = true)]
    horizon: Option<usize>,

    /// Noise half-width
    #[arg(long, global = true)]
    epsilon: Option<f64>,

    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Stability margin
    #[arg(long, global = true)]
    margin: Option<f64>,

    #[arg(long, global = true)]
    n: Option<usize>,

    #[arg(long, global = true)]
    n_max: Option<usize>,

    #[arg(long, global = true)]
    rho: Option<f64>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<f64>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    b: Option<f64>,

    #[arg(long, global = true)]
    samples: Option<usize>,

    #[arg(long, global = true)]
    resolution: Option<usize>,
}

fn build(cli: Cli) -> peakeq::Result<RunConfig> {
    let base = match &cli.opts.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let (command, mode) = match &cli.command {
        Some(Cmd::Trinomial { mode }) => (Some("trinomial".to_string()), *mode),
        Some(c) => (Some(c.name().to_string()), None),
        None => (None, None),
    };
    let o = cli.opts;
    let top = RunConfig {
        command,
        coeffs: o.coeffs,
        roots: o.roots,
        equal_roots: o.equal_roots,
        trinomial: o.trinomial,
        markov: o.markov,
        init: o.init,
        horizon: o.horizon,
        epsilon: o.epsilon,
        out: o.out,
        format: o.format,
        seed: o.seed,
        margin: o.margin,
        n: o.n,
        n_max: o.n_max,
        rho: o.rho,
        a: o.a,
        b: o.b,
        samples: o.samples,
        resolution: o.resolution,
        mode,
    };
    Ok(base.overlay(top))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match build(cli).and_then(|cfg| commands::run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("peakeq: {e}");
            ExitCode::from(CliError::exit_code(&e))
        }
    }
}
