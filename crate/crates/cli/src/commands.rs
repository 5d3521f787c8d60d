use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use distinguish::colouring::{
    colouring_stabiliser, distinguishing_probability_exact, distinguishing_probability_mc,
    find_tree_automorphism, is_distinguishing, random_colouring, russel_sundaram_bound, Colouring,
    SeededRng,
};
use distinguish::conditions::{
    dsc_check, gamma_classes, gamma_exceptions, gamma_refinement_iterate, growth_bound,
    growth_classifier, layer_fixing_report, render_table, sphere_classes, sphere_equivalence,
    SphereParams, Truncation,
};
use distinguish::exact::rational_to_string;
use distinguish::graph::cartesian_product;
use distinguish::permgroup::{automorphism_group, motion, motion_backtrack};
use distinguish::topology::{
    ball_decomposition, conf, coset_tree_report, delta, expected_stabiliser_measure, haar_fraction,
    Confluent, ExhaustionSequence,
};
use distinguish::{Graph, PermGroup, Permutation};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{parse_family, GraphSource, RunConfig};

/// A rendered result: JSON value, aligned text, and an optional table form
/// for CSV output.
pub struct Report {
    pub value: Value,
    pub text: String,
    pub csv: Option<String>,
}

impl Report {
    fn new(value: impl Serialize, text: String) -> Result<Self> {
        Ok(Report {
            value: serde_json::to_value(value)?,
            text,
            csv: None,
        })
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    /// `field,value` rows for the top-level fields, nested values as JSON.
    pub fn csv_or_fields(&self) -> Result<String> {
        if let Some(csv) = &self.csv {
            return Ok(csv.clone());
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["field", "value"])?;
        match &self.value {
            Value::Object(map) => {
                for (k, v) in map {
                    w.write_record([k.as_str(), &scalar(v)])?;
                }
            }
            other => w.write_record(["value", &scalar(other)])?,
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn fields_text(value: &Value) -> String {
    let rows: Vec<Vec<String>> = match value {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| vec![k.clone(), scalar(v)])
            .collect(),
        other => vec![vec!["value".into(), scalar(other)]],
    };
    render_table(&["field", "value"], &rows)
}

fn parse_perm(s: &str) -> Result<Permutation> {
    s.parse::<Permutation>().map_err(|e| {
        anyhow!(distinguish::Error::InvalidParameter(format!(
            "permutation {s:?}: {e}"
        )))
    })
}

fn parse_colouring(s: &str, n: usize) -> Result<Colouring> {
    let c: Colouring = s.parse()?;
    if c.len() != n {
        return Err(distinguish::Error::InvalidParameter(format!(
            "colouring has {} entries, graph has {n} vertices",
            c.len()
        ))
        .into());
    }
    Ok(c)
}

fn aut(g: &Graph) -> Result<PermGroup> {
    Ok(automorphism_group(g, None)?)
}

/// Root and radius of the truncation a command works on: a family's own
/// radius around its root (vertex 0), or the given radius, or the root's
/// eccentricity for a plain graph.
fn truncation(cfg: &RunConfig, g: &Graph, root: usize, radius: Option<u32>) -> Result<Truncation> {
    let source = cfg.graph_source.as_ref();
    if source.is_some_and(GraphSource::is_family) && root != 0 {
        return Err(distinguish::Error::InvalidParameter(format!(
            "root mismatch: family truncations are rooted at vertex 0, not {root}"
        ))
        .into());
    }
    let radius = match radius.or_else(|| source.and_then(GraphSource::radius)) {
        Some(r) => r,
        None => g.eccentricity(root)?,
    };
    Ok(Truncation { root, radius })
}

fn exhaustion(g: &Graph, root: usize, sets: &Option<String>) -> Result<ExhaustionSequence> {
    Ok(match sets {
        Some(json) => {
            let sets: Vec<Vec<usize>> = serde_json::from_str(json)
                .map_err(|e| distinguish::Error::InvalidParameter(format!("exhaustion: {e}")))?;
            ExhaustionSequence::new(g.vertex_count(), sets)?
        }
        None => ExhaustionSequence::balls(g, root)?,
    })
}

#[derive(Args, Debug, Serialize)]
pub struct AutgroupArgs {
    /// Restrict to automorphisms preserving this colouring ("0110" or a JSON array).
    #[arg(long)]
    pub colouring: Option<String>,
}

pub fn autgroup(cfg: &RunConfig, a: &AutgroupArgs) -> Result<Report> {
    let g = cfg.graph()?;
    let colours = a
        .colouring
        .as_deref()
        .map(|s| parse_colouring(s, g.vertex_count()))
        .transpose()?;
    let group = automorphism_group(&g, colours.as_ref().map(|c| c.colours.as_slice()))?;
    let mut value = serde_json::to_value(group.summary())?;
    value["orbits"] = json!(group.orbits());
    let text = fields_text(&value);
    Report::new(value, text)
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MotionChoice {
    Auto,
    Enumeration,
    Backtrack,
}

#[derive(Args, Debug, Serialize)]
pub struct MotionArgs {
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MotionChoice,
}

pub fn motion_cmd(cfg: &RunConfig, a: &MotionArgs) -> Result<Report> {
    let group = aut(&cfg.graph()?)?;
    let report = match a.method {
        MotionChoice::Auto => motion(&group, cfg.caps.enumeration),
        MotionChoice::Backtrack => motion_backtrack(&group),
        MotionChoice::Enumeration => {
            group.elements(cfg.caps.enumeration)?;
            motion(&group, cfg.caps.enumeration)
        }
    };
    let value = serde_json::to_value(&report)?;
    let text = fields_text(&value);
    Report::new(value, text)
}

#[derive(Args, Debug, Serialize)]
pub struct DistinguishArgs {
    #[arg(long)]
    pub colouring: String,
}

pub fn distinguish_cmd(cfg: &RunConfig, a: &DistinguishArgs) -> Result<Report> {
    let g = cfg.graph()?;
    let c = parse_colouring(&a.colouring, g.vertex_count())?;
    let verdict = is_distinguishing(&g, &c)?;
    let stab = colouring_stabiliser(&g, &c)?;
    let value = json!({
        "colouring": c.to_string(),
        "distinguishing": verdict.distinguishing,
        "witness": verdict.witness,
        "stabiliser_order": stab.order().to_string(),
    });
    let text = fields_text(&value);
    Report::new(value, text)
}

#[derive(Args, Debug, Serialize)]
pub struct ColoursArgs {
    /// Number of colours.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
}

pub fn prob_exact(cfg: &RunConfig, a: &ColoursArgs) -> Result<Report> {
    let p = distinguishing_probability_exact(&cfg.graph()?, a.k, &cfg.caps)?;
    let value = serde_json::to_value(&p)?;
    let text = fields_text(&value);
    Report::new(value, text)
}

pub fn prob_mc(cfg: &RunConfig, a: &ColoursArgs) -> Result<Report> {
    let est = distinguishing_probability_mc(&cfg.graph()?, a.k, cfg.trials, cfg.seed, &cfg.caps)?;
    let value = serde_json::to_value(&est)?;
    let text = fields_text(&value);
    Report::new(value, text)
}

#[derive(Args, Debug, Serialize)]
pub struct RsBoundArgs {
    /// Random colourings tried when searching for a distinguishing one.
    #[arg(long, default_value_t = 1000)]
    pub attempts: u64,
}

pub fn rs_bound(cfg: &RunConfig, a: &RsBoundArgs) -> Result<Report> {
    let r = russel_sundaram_bound(&cfg.graph()?, cfg.seed, a.attempts, &cfg.caps)?;
    let value = serde_json::to_value(&r)?;
    let text = fields_text(&value);
    Report::new(value, text)
}

#[derive(Args, Debug, Serialize)]
pub struct MetricArgs {
    /// First permutation as a JSON image array.
    #[arg(long)]
    pub a: String,
    /// Second permutation as a JSON image array.
    #[arg(long)]
    pub b: String,
    /// Root of the default ball exhaustion.
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    /// Explicit exhaustion as a JSON list of vertex lists.
    #[arg(long)]
    pub exhaustion: Option<String>,
}

pub fn metric(cfg: &RunConfig, a: &MetricArgs) -> Result<Report> {
    let g = cfg.graph()?;
    let group = aut(&g)?;
    let seq = exhaustion(&g, a.root, &a.exhaustion)?;
    let (x, y) = (parse_perm(&a.a)?, parse_perm(&a.b)?);
    for p in [&x, &y] {
        if !group.contains(p) {
            return Err(distinguish::Error::NotInGroup.into());
        }
    }
    let c = conf(&x, &y, &seq)?;
    let d = delta(&x, &y, &seq)?;
    let value = json!({
        "conf": match c { Confluent::Equal => json!("equal"), Confluent::Level(i) => json!(i) },
        "delta": d.to_string(),
    });
    let text = fields_text(&value);
    Report::new(value, text)
}

#[derive(Args, Debug, Serialize)]
pub struct BallsArgs {
    /// Ball radius is 2^-level.
    #[arg(long, default_value_t = 1)]
    pub level: usize,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long)]
    pub exhaustion: Option<String>,
    /// Only decompose the ball of this element at `--within-level`.
    #[arg(long)]
    pub within: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub within_level: usize,
    /// Render the whole coset tree down to `--level`.
    #[arg(long)]
    pub tree: bool,
}

pub fn balls(cfg: &RunConfig, a: &BallsArgs) -> Result<Report> {
    let g = cfg.graph()?;
    let group = aut(&g)?;
    let seq = exhaustion(&g, a.root, &a.exhaustion)?;
    if a.tree {
        let tree = coset_tree_report(&group, &seq, a.level, cfg.caps.enumeration)?;
        let lines: Vec<&str> = tree.lines().collect();
        return Report::new(json!({ "tree": lines }), tree.clone());
    }
    let within = a.within.as_deref().map(parse_perm).transpose()?;
    let dec = ball_decomposition(
        &group,
        &seq,
        a.level,
        within.as_ref().map(|w| (a.within_level, w)),
        cfg.caps.enumeration,
    )?;
    let rows: Vec<Vec<String>> = dec
        .balls
        .iter()
        .map(|b| vec![b.representative.to_string(), b.size.to_string()])
        .collect();
    let text = format!(
        "level {} radius {} balls {}\n",
        dec.level, dec.radius, dec.ball_count
    ) + &render_table(&["representative", "size"], &rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["representative", "size"])?;
    for r in &rows {
        w.write_record(r)?;
    }
    let csv = String::from_utf8(w.into_inner()?)?;
    Ok(Report::new(&dec, text)?.with_csv(csv))
}

#[derive(Args, Debug, Serialize)]
pub struct HaarArgs {
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// JSON array of permutations whose uniform-measure fraction to report.
    #[arg(long)]
    pub subset: Option<String>,
}

pub fn haar(cfg: &RunConfig, a: &HaarArgs) -> Result<Report> {
    let g = cfg.graph()?;
    let m = expected_stabiliser_measure(&g, a.k, &cfg.caps)?;
    let mut value = json!({
        "k": a.k,
        "expected_stabiliser_measure": rational_to_string(&m.group_first),
        "colour_first": rational_to_string(&m.colour_first),
        "group_first": rational_to_string(&m.group_first),
        "fubini_check": if m.colour_first == m.group_first { "pass" } else { "fail" },
    });
    if let Some(subset) = &a.subset {
        let perms: Vec<Permutation> = serde_json::from_str(subset)
            .map_err(|e| distinguish::Error::InvalidParameter(format!("subset: {e}")))?;
        let f = haar_fraction(&perms, &aut(&g)?)?;
        value["haar_fraction"] = json!(rational_to_string(&f));
    }
    let text = fields_text(&value);
    Report::new(value, text)
}

#[derive(Args, Debug, Serialize)]
pub struct DscArgs {
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    /// Truncation radius; defaults to the family radius or the root's eccentricity.
    #[arg(long)]
    pub radius: Option<u32>,
}

pub fn dsc(cfg: &RunConfig, a: &DscArgs) -> Result<Report> {
    let g = cfg.graph()?;
    let t = truncation(cfg, &g, a.root, a.radius)?;
    let report = dsc_check(&g, t)?;
    let text = report.to_text();
    let csv = report.to_csv();
    Ok(Report::new(&report, text)?.with_csv(csv))
}

#[derive(Args, Debug, Serialize)]
pub struct SpheresArgs {
    /// With `--v`, test a single pair; otherwise report all classes.
    #[arg(long, requires = "v")]
    pub u: Option<usize>,
    #[arg(long, requires = "u")]
    pub v: Option<usize>,
    #[arg(long, default_value_t = u32::MAX)]
    pub n0_max: u32,
    #[arg(long)]
    pub horizon: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long)]
    pub radius: Option<u32>,
    /// Treat the graph as finite rather than as a truncation.
    #[arg(long)]
    pub finite: bool,
}

pub fn spheres(cfg: &RunConfig, a: &SpheresArgs) -> Result<Report> {
    let g = cfg.graph()?;
    let truncated = !a.finite
        && (a.radius.is_some()
            || cfg
                .graph_source
                .as_ref()
                .is_some_and(GraphSource::is_family));
    let params = SphereParams {
        truncation: truncated
            .then(|| truncation(cfg, &g, a.root, a.radius))
            .transpose()?,
        n0_max: a.n0_max,
        horizon: a.horizon,
    };
    if let (Some(u), Some(v)) = (a.u, a.v) {
        let eq = sphere_equivalence(&g, u, v, &params)?;
        let value = json!({ "u": u, "v": v, "equivalent": eq, "truncation": params.truncation });
        let text = fields_text(&value);
        return Report::new(value, text);
    }
    let classes = sphere_classes(&g, &params)?;
    let text = classes.to_text();
    Report::new(&classes, text)
}

#[derive(Args, Debug, Serialize)]
pub struct GammaArgs {
    #[arg(long, requires = "t")]
    pub s: Option<usize>,
    #[arg(long, requires = "s")]
    pub t: Option<usize>,
    /// Number of exceptional points allowed.
    #[arg(long, default_value_t = 0)]
    pub budget: usize,
    /// Iterate the refinement until the group stops shrinking.
    #[arg(long)]
    pub iterate: bool,
    #[arg(long, default_value_t = 16)]
    pub max_levels: usize,
}

pub fn gamma(cfg: &RunConfig, a: &GammaArgs) -> Result<Report> {
    let group = aut(&cfg.graph()?)?;
    let cap = cfg.caps.enumeration;
    if let (Some(s), Some(t)) = (a.s, a.t) {
        let ex = gamma_exceptions(&group, s, t)?;
        let value = json!({
            "s": s,
            "t": t,
            "budget": a.budget,
            "exceptions": ex,
            "equivalent": ex.is_some_and(|c| c <= a.budget),
        });
        let text = fields_text(&value);
        return Report::new(value, text);
    }
    if a.iterate {
        let it = gamma_refinement_iterate(&group, a.budget, a.max_levels, cap)?;
        let mut text = format!("budget {}  fixpoint {}\n", it.budget, it.fixpoint);
        for level in &it.levels {
            text.push_str(&format!("level {} order {}\n", level.level, level.order));
            text.push_str(&level.classes.to_text());
        }
        return Report::new(&it, text);
    }
    let classes = gamma_classes(&group, a.budget, cap)?;
    let text = classes.to_text();
    Report::new(&classes, text)
}

fn load_second(arg: &str) -> Result<Graph> {
    if arg.trim_start().starts_with('{') {
        Ok(distinguish::graph::generate_family(&parse_family(arg)?)?)
    } else {
        Graph::load(arg).with_context(|| format!("reading {arg}"))
    }
}

#[derive(Args, Debug, Serialize)]
pub struct ProductArgs {
    /// Second factor: a graph file or a family spec.
    #[arg(long)]
    pub right: String,
}

pub fn product(cfg: &RunConfig, a: &ProductArgs) -> Result<Report> {
    let p = cartesian_product(&cfg.graph()?, &load_second(&a.right)?)?;
    let text = p.to_text();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["u", "v"])?;
    for (u, v) in p.edges() {
        w.write_record([u.to_string(), v.to_string()])?;
    }
    let csv = String::from_utf8(w.into_inner()?)?;
    Ok(Report::new(p.to_json(), text)?.with_csv(csv))
}

#[derive(Args, Debug, Serialize)]
pub struct LayersArgs {
    /// Second factor: a graph file or a family spec.
    #[arg(long)]
    pub right: String,
    /// Colouring of the product; a seeded random 2-colouring when absent.
    #[arg(long)]
    pub colouring: Option<String>,
}

pub fn layers(cfg: &RunConfig, a: &LayersArgs) -> Result<Report> {
    let (g1, g2) = (cfg.graph()?, load_second(&a.right)?);
    let n = g1.vertex_count() * g2.vertex_count();
    let c = match &a.colouring {
        Some(s) => parse_colouring(s, n)?,
        None => {
            let product = cartesian_product(&g1, &g2)?;
            random_colouring(&product, 2, &mut SeededRng::new(cfg.seed, 0))?
        }
    };
    let report = layer_fixing_report(&g1, &g2, &c, cfg.caps.enumeration)?;
    let mut value = serde_json::to_value(&report)?;
    value["colouring"] = json!(c.to_string());
    Report::new(value, report.to_text())
}

#[derive(Args, Debug, Serialize)]
pub struct GrowthArgs {
    /// Bound arithmetic for this n (no graph needed).
    #[arg(long, requires = "j")]
    pub n: Option<u64>,
    #[arg(long)]
    pub j: Option<u32>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long)]
    pub radius: Option<u32>,
}

pub fn growth(cfg: &RunConfig, a: &GrowthArgs) -> Result<Report> {
    if let (Some(n), Some(j)) = (a.n, a.j) {
        let r = growth_bound(n, j, a.c.unwrap_or(1.0), a.epsilon)?;
        let mut value = serde_json::to_value(&r)?;
        value["half_motion_identity_holds"] = json!(r.half_motion_identity_holds());
        value["full_motion_identity_holds"] = json!(r.full_motion_identity_holds());
        return Report::new(value, r.to_text());
    }
    let g = cfg.graph()?;
    let t = truncation(cfg, &g, a.root, a.radius)?;
    let r = growth_classifier(&g, t.root, t.radius, a.epsilon, a.c)?;
    let mut value = serde_json::to_value(&r)?;
    value["all_satisfied"] = json!(r.all_satisfied());
    Report::new(value, r.to_text())
}

#[derive(Args, Debug, Serialize)]
pub struct TreeautoArgs {
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    /// Colouring of the tree; a seeded random 2-colouring when absent.
    #[arg(long)]
    pub colouring: Option<String>,
}

pub fn treeauto(cfg: &RunConfig, a: &TreeautoArgs) -> Result<Report> {
    let g = cfg.graph()?;
    let c = match &a.colouring {
        Some(s) => parse_colouring(s, g.vertex_count())?,
        None => random_colouring(&g, 2, &mut SeededRng::new(cfg.seed, 0))?,
    };
    let p = find_tree_automorphism(&g, a.root, &c)?;
    let value = json!({
        "root": a.root,
        "colouring": c.to_string(),
        "automorphism": p,
    });
    let text = fields_text(&value);
    Report::new(value, text)
}

pub fn ensure_no_graph(cfg: &RunConfig) -> Result<()> {
    if cfg.graph_source.is_some() {
        bail!("this command does not take a graph");
    }
    Ok(())
}
