use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::builder::RangedU64ValueParser;
use clap::{Args, Parser, Subcommand};
use riesz_ned::generate_random_instance;
use riesz_ned::mixing::DEFAULT_CAP;
use riesz_ned_cli::{execute, output, Format, RunConfig, Suite};

/// Verify conditional norms, mixing coefficients, near-epoch dependence
/// and mixingale bounds on finite probability spaces.
#[derive(Parser)]
#[command(name = "riesz-ned", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance and check its conditional expectations.
    Validate(RunArgs),
    /// Norm axioms, Hölder, Lyapunov, Jensen and the dyadic square root.
    Norms(RunArgs),
    /// Mixing coefficients of every compatible pair and the mixing inequalities.
    Mixing(RunArgs),
    /// NED certificates, closure laws and the mixingale construction.
    Ned(RunArgs),
    /// AR(1) defect table against the closed-form bound.
    Ar1Demo(RunArgs),
    /// Law-of-large-numbers surrogate on a long AR(1) path.
    Lln(RunArgs),
    /// Every suite above.
    All(RunArgs),
    /// Write a seeded random instance.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Instance JSON; a seeded random instance is used when absent.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// AR(1) scenario JSON for the process-based suites.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest number of blocks enumerated by the mixing coefficients.
    #[arg(long, default_value_t = DEFAULT_CAP, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    cap: usize,
    /// Process length; overrides the suite default and the scenario.
    #[arg(long, value_parser = RangedU64ValueParser::<usize>::new().range(2..))]
    window: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    atoms: usize,
    #[arg(long, default_value_t = 2)]
    partitions: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(command: &str, suites: Vec<Suite>, args: RunArgs) -> anyhow::Result<bool> {
    let config = RunConfig {
        command: command.to_string(),
        suites,
        instance_path: args.instance,
        scenario_path: args.scenario,
        seed: args.seed,
        cap: args.cap,
        window: args.window,
    };
    let report = execute(&config);
    if let Some(text) = output::emit(&report, args.format, args.out.as_deref())? {
        std::io::stdout().write_all(text.as_bytes())?;
    }
    for outcome in &report.suites {
        if let Some(err) = &outcome.error {
            eprintln!("FAIL {} error: {err}", outcome.suite);
        }
        for r in outcome.reports.iter().filter(|r| !r.pass) {
            eprintln!("FAIL {} {} worst_slack={:e} at {:?}", outcome.suite, r.property, r.worst_slack, r.location);
        }
    }
    Ok(report.pass)
}

fn generate(args: GenerateArgs) -> anyhow::Result<bool> {
    let text = generate_random_instance(args.seed, args.atoms, args.partitions)?.to_json();
    match args.out {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let single = |s: Suite| vec![s];
    let result = match cli.command {
        Command::Validate(a) => run("validate", single(Suite::Validate), a),
        Command::Norms(a) => run("norms", single(Suite::Norms), a),
        Command::Mixing(a) => run("mixing", single(Suite::Mixing), a),
        Command::Ned(a) => run("ned", single(Suite::Ned), a),
        Command::Ar1Demo(a) => run("ar1-demo", single(Suite::Ar1Demo), a),
        Command::Lln(a) => run("lln", single(Suite::Lln), a),
        Command::All(a) => run("all", Suite::ALL.to_vec(), a),
        Command::Generate(a) => generate(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
