use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use distinguish::graph::{generate_family, FamilySpec};
use distinguish::{Caps, Graph};
use serde::{Deserialize, Serialize};

pub const ENV_ENUMERATION_CAP: &str = "DISTINGUISH_ENUMERATION_CAP";
pub const ENV_COLOUR_CAP: &str = "DISTINGUISH_COLOUR_CAP";
pub const ENV_VERTEX_CAP: &str = "DISTINGUISH_VERTEX_CAP";

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TRIALS: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    Path(PathBuf),
    Family(FamilySpec),
}

impl GraphSource {
    pub fn load(&self) -> Result<Graph> {
        Ok(match self {
            GraphSource::Path(p) => {
                Graph::load(p).with_context(|| format!("reading {}", p.display()))?
            }
            GraphSource::Family(spec) => generate_family(spec)?,
        })
    }

    /// The truncation radius when the source is a family with one.
    pub fn radius(&self) -> Option<u32> {
        match self {
            GraphSource::Family(spec) => spec.radius,
            GraphSource::Path(_) => None,
        }
    }

    pub fn is_family(&self) -> bool {
        matches!(self, GraphSource::Family(_))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub format: Format,
    pub path: Option<PathBuf>,
}

/// Everything a run depends on; embedded in every report header.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub graph_source: Option<GraphSource>,
    pub seed: u64,
    pub trials: u64,
    pub caps: Caps,
    pub output: OutputConfig,
    /// Subcommand arguments.
    pub params: serde_json::Value,
}

/// A config file: any subset of the run configuration.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub graph_source: Option<GraphSource>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub caps: Option<PartialCaps>,
    pub output: Option<PartialOutput>,
    /// Accepted so a report's run header can be used as a config file;
    /// subcommand arguments always come from the command line.
    #[serde(rename = "params")]
    pub _params: Option<serde_json::Value>,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialCaps {
    pub enumeration: Option<u64>,
    pub colour_exhaustion: Option<u64>,
    pub exhaustive_vertices: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialOutput {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Flags given on the command line; `None` means "not given".
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub graph: Option<PathBuf>,
    pub family: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub enumeration_cap: Option<u64>,
    pub colour_cap: Option<u64>,
    pub vertex_cap: Option<usize>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

fn env_number<T: std::str::FromStr>(name: &str) -> Result<Option<T>> {
    match std::env::var(name) {
        Ok(v) => match v.trim().parse() {
            Ok(x) => Ok(Some(x)),
            Err(_) => bail!("{name}={v:?} is not a valid number"),
        },
        Err(_) => Ok(None),
    }
}

/// Parses a family spec given inline as JSON or as a path to a JSON file.
pub fn parse_family(arg: &str) -> Result<FamilySpec> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading family spec {arg}"))?
    };
    Ok(FamilySpec::parse(&text)?)
}

/// Precedence: command-line flag, then config file, then (caps only) the
/// environment, then built-in defaults.
pub fn resolve(
    command: &str,
    flags: &Overrides,
    file: Option<ConfigFile>,
    params: serde_json::Value,
) -> Result<RunConfig> {
    let file = file.unwrap_or_default();
    if let Some(c) = &file.command {
        if c != command {
            bail!("config file is for command {c:?}, not {command:?}");
        }
    }
    let graph_source = match (&flags.graph, &flags.family) {
        (Some(_), Some(_)) => bail!("give at most one of --graph and --family"),
        (Some(p), None) => Some(GraphSource::Path(p.clone())),
        (None, Some(f)) => Some(GraphSource::Family(parse_family(f)?)),
        (None, None) => file.graph_source,
    };
    let defaults = Caps::default();
    let fc = file.caps.unwrap_or_default();
    let caps = Caps {
        enumeration: flags
            .enumeration_cap
            .or(fc.enumeration)
            .or(env_number(ENV_ENUMERATION_CAP)?)
            .unwrap_or(defaults.enumeration),
        colour_exhaustion: flags
            .colour_cap
            .or(fc.colour_exhaustion)
            .or(env_number(ENV_COLOUR_CAP)?)
            .unwrap_or(defaults.colour_exhaustion),
        exhaustive_vertices: flags
            .vertex_cap
            .or(fc.exhaustive_vertices)
            .or(env_number(ENV_VERTEX_CAP)?)
            .unwrap_or(defaults.exhaustive_vertices),
    };
    let fo = file.output.unwrap_or_default();
    Ok(RunConfig {
        command: command.to_string(),
        graph_source,
        seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        trials: flags.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
        caps,
        output: OutputConfig {
            format: flags.format.or(fo.format).unwrap_or(Format::Json),
            path: flags.output.clone().or(fo.path),
        },
        params,
    })
}

impl RunConfig {
    pub fn graph(&self) -> Result<Graph> {
        match &self.graph_source {
            Some(src) => src.load(),
            None => bail!("this command needs a graph: give --graph, --family or a config file"),
        }
    }
}
