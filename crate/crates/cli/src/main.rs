//! `distinguish`: command-line access to automorphism groups, motion,
//! distinguishing probabilities, the confluent metric and the sphere and
//! suborbit conditions.
//!
//! Exit codes: 0 success, 2 input error, 3 cap exceeded, 1 internal
//! consistency failure.

mod commands;
mod config;
mod suite;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use commands::*;
use config::{ConfigFile, Format, Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "distinguish",
    version,
    about = "Symmetry breaking by random colourings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Graph file: "n m" header plus edge lines, or JSON.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Family spec as inline JSON or a path to a JSON file.
    #[arg(long, global = true)]
    family: Option<String>,
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Largest group order enumerated element by element.
    #[arg(long, global = true)]
    enumeration_cap: Option<u64>,
    /// Largest number of colourings visited exhaustively.
    #[arg(long, global = true)]
    colour_cap: Option<u64>,
    /// Largest vertex count for exhaustive measure computations.
    #[arg(long, global = true)]
    vertex_cap: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum Command {
    /// Automorphism group summary.
    Autgroup(AutgroupArgs),
    /// Motion of the automorphism group with a witness.
    Motion(MotionArgs),
    /// Is a colouring distinguishing?
    Distinguish(DistinguishArgs),
    /// Exact distinguishing probability of a random colouring.
    ProbExact(ColoursArgs),
    /// Monte Carlo distinguishing probability.
    ProbMc(ColoursArgs),
    /// Motion-based failure bound for random 2-colourings.
    RsBound(RsBoundArgs),
    /// Confluent and distance of two automorphisms.
    Metric(MetricArgs),
    /// Coset balls of the automorphism group.
    Balls(BallsArgs),
    /// Expected stabiliser measure and uniform-measure fractions.
    Haar(HaarArgs),
    /// Distinct spheres check on a truncation.
    Dsc(DscArgs),
    /// Sphere equivalence of a pair, or its classes.
    Spheres(SpheresArgs),
    /// Suborbit equivalence of a pair, its classes, or the refinement chain.
    Gamma(GammaArgs),
    /// Cartesian product with a second graph.
    Product(ProductArgs),
    /// Action of colour-preserving automorphisms on product layers.
    Layers(LayersArgs),
    /// Growth bound arithmetic, or ball growth fit of a graph.
    Growth(GrowthArgs),
    /// Root-fixing automorphism of a coloured tree.
    Treeauto(TreeautoArgs),
    /// Run the experiment corpus and write CSV reports.
    Suite(suite::SuiteArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Autgroup(_) => "autgroup",
            Command::Motion(_) => "motion",
            Command::Distinguish(_) => "distinguish",
            Command::ProbExact(_) => "prob-exact",
            Command::ProbMc(_) => "prob-mc",
            Command::RsBound(_) => "rs-bound",
            Command::Metric(_) => "metric",
            Command::Balls(_) => "balls",
            Command::Haar(_) => "haar",
            Command::Dsc(_) => "dsc",
            Command::Spheres(_) => "spheres",
            Command::Gamma(_) => "gamma",
            Command::Product(_) => "product",
            Command::Layers(_) => "layers",
            Command::Growth(_) => "growth",
            Command::Treeauto(_) => "treeauto",
            Command::Suite(_) => "suite",
        }
    }

    fn run(&self, cfg: &RunConfig) -> Result<Report> {
        match self {
            Command::Autgroup(a) => autgroup(cfg, a),
            Command::Motion(a) => motion_cmd(cfg, a),
            Command::Distinguish(a) => distinguish_cmd(cfg, a),
            Command::ProbExact(a) => prob_exact(cfg, a),
            Command::ProbMc(a) => prob_mc(cfg, a),
            Command::RsBound(a) => rs_bound(cfg, a),
            Command::Metric(a) => metric(cfg, a),
            Command::Balls(a) => balls(cfg, a),
            Command::Haar(a) => haar(cfg, a),
            Command::Dsc(a) => dsc(cfg, a),
            Command::Spheres(a) => spheres(cfg, a),
            Command::Gamma(a) => gamma(cfg, a),
            Command::Product(a) => product(cfg, a),
            Command::Layers(a) => layers(cfg, a),
            Command::Growth(a) => growth(cfg, a),
            Command::Treeauto(a) => treeauto(cfg, a),
            Command::Suite(a) => {
                ensure_no_graph(cfg)?;
                suite::suite(cfg, a)
            }
        }
    }
}

fn render(cfg: &RunConfig, report: &Report) -> Result<String> {
    let header = serde_json::to_string(cfg)?;
    Ok(match cfg.output.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                run: &'a RunConfig,
                result: &'a serde_json::Value,
            }
            let doc = Doc {
                run: cfg,
                result: &report.value,
            };
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Text => format!("# run: {header}\n{}", report.text),
        Format::Csv => format!("# run: {header}\n{}", report.csv_or_fields()?),
    })
}

fn run(cli: Cli) -> Result<()> {
    let flags = Overrides {
        graph: cli.graph,
        family: cli.family,
        seed: cli.seed,
        trials: cli.trials,
        enumeration_cap: cli.enumeration_cap,
        colour_cap: cli.colour_cap,
        vertex_cap: cli.vertex_cap,
        format: cli.format,
        output: cli.output,
    };
    let file = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    let params = serde_json::to_value(&cli.command)?;
    let cfg = config::resolve(cli.command.name(), &flags, file, params)?;
    let report = cli.command.run(&cfg)?;
    let out = render(&cfg, &report)?;
    match &cfg.output.path {
        Some(p) => std::fs::write(p, out).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(out.as_bytes())?,
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<distinguish::Error>() {
        Some(e) if e.is_cap_exceeded() => 3,
        Some(distinguish::Error::Consistency(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
