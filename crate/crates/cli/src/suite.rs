use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use distinguish::colouring::{
    distinguishing_probability_exact, distinguishing_probability_mc, russel_sundaram_bound,
};
use distinguish::conditions::{dsc_check, growth_bound, match_probability, Truncation};
use distinguish::exact::{ratio, rational_to_f64, rational_to_string};
use distinguish::graph::named::{corpus, cycle, hypercube, path};
use distinguish::graph::{generate_family, FamilySpec};
use distinguish::topology::expected_stabiliser_measure;
use serde::Serialize;
use serde_json::json;

use crate::commands::Report;
use crate::config::RunConfig;

#[derive(Args, Debug, Serialize)]
pub struct SuiteArgs {
    /// Directory receiving one CSV per experiment.
    #[arg(long)]
    pub report_dir: PathBuf,
}

fn write_csv(dir: &Path, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let file = dir.join(name);
    let mut w =
        csv::Writer::from_path(&file).with_context(|| format!("creating {}", file.display()))?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(name.to_string())
}

/// Runs the experiment corpus and writes `rs_bound.csv`, `fubini.csv`,
/// `mc.csv`, `dsc.csv`, `matching.csv` and `growth.csv`.
pub fn suite(cfg: &RunConfig, a: &SuiteArgs) -> Result<Report> {
    let dir = &a.report_dir;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut files = Vec::new();

    let mut rows = Vec::new();
    for (name, g) in corpus() {
        let p = distinguishing_probability_exact(&g, 2, &cfg.caps)?;
        let failure = ratio(1, 1) - &p.probability;
        let b = russel_sundaram_bound(&g, cfg.seed, 0, &cfg.caps)?;
        rows.push(vec![
            name,
            g.vertex_count().to_string(),
            b.group_order.to_string(),
            b.motion.map_or(String::new(), |m| m.to_string()),
            rational_to_string(&failure),
            b.bound.to_string(),
            b.bound.dominates(&failure).to_string(),
            b.bound.equals(&failure).to_string(),
        ]);
    }
    files.push(write_csv(
        dir,
        "rs_bound.csv",
        &[
            "graph",
            "vertices",
            "order",
            "motion",
            "failure",
            "bound",
            "within_bound",
            "equal",
        ],
        rows,
    )?);

    let mut rows = Vec::new();
    for (name, g) in corpus() {
        let m = expected_stabiliser_measure(&g, 2, &cfg.caps)?;
        rows.push(vec![
            name,
            rational_to_string(&m.colour_first),
            rational_to_string(&m.group_first),
            (m.colour_first == m.group_first).to_string(),
        ]);
    }
    files.push(write_csv(
        dir,
        "fubini.csv",
        &["graph", "colour_first", "group_first", "agree"],
        rows,
    )?);

    let mut rows = Vec::new();
    for (name, g) in [
        ("P4", path(4)),
        ("C4", cycle(4)),
        ("C6", cycle(6)),
        ("Q3", hypercube(3)),
    ] {
        let exact = distinguishing_probability_exact(&g, 2, &cfg.caps)?;
        let est = distinguishing_probability_mc(&g, 2, cfg.trials, cfg.seed, &cfg.caps)?;
        let p = rational_to_f64(&exact.probability);
        rows.push(vec![
            name.to_string(),
            rational_to_string(&exact.probability),
            est.estimate.to_string(),
            est.std_error.to_string(),
            est.within(p, 5.0).to_string(),
        ]);
    }
    files.push(write_csv(
        dir,
        "mc.csv",
        &["graph", "exact", "estimate", "std_error", "within_5_sigma"],
        rows,
    )?);

    let mut rows = Vec::new();
    for (name, spec) in [
        ("regular_tree(3)", FamilySpec::regular_tree(3, 8)),
        ("double_ray", FamilySpec::double_ray(32)),
        ("grid(2)", FamilySpec::grid(2, 8)),
        ("ladder", FamilySpec::ladder(16)),
    ] {
        let radius = spec.radius.unwrap_or(0);
        let g = generate_family(&spec)?;
        let r = dsc_check(&g, Truncation { root: 0, radius })?;
        rows.push(vec![
            name.to_string(),
            radius.to_string(),
            r.checked_pairs.to_string(),
            r.separated.to_string(),
            r.violations.to_string(),
            r.horizon_pairs.to_string(),
        ]);
    }
    files.push(write_csv(
        dir,
        "dsc.csv",
        &[
            "family",
            "radius",
            "checked_pairs",
            "separated",
            "violations",
            "horizon_pairs",
        ],
        rows,
    )?);

    let rows = (1..=64u64)
        .map(|n| {
            let m = match_probability(n);
            vec![
                n.to_string(),
                rational_to_string(&m.probability),
                rational_to_f64(&m.probability).to_string(),
            ]
        })
        .collect();
    files.push(write_csv(
        dir,
        "matching.csv",
        &["n", "probability", "approx"],
        rows,
    )?);

    let mut rows = Vec::new();
    for n in [4u64, 16, 64, 256] {
        for j in [1u32, 2, 3] {
            for eps in [0.1, 0.25, 0.4] {
                let r = growth_bound(n, j, 1.0, eps)?;
                rows.push(vec![
                    n.to_string(),
                    j.to_string(),
                    eps.to_string(),
                    r.log2_pi_bound.to_string(),
                    r.motion_lower.to_string(),
                    r.log2_failure_bound.to_string(),
                    r.product_lower.to_string(),
                    r.half_motion_residual.to_string(),
                    r.full_motion_residual.to_string(),
                ]);
            }
        }
    }
    files.push(write_csv(
        dir,
        "growth.csv",
        &[
            "n",
            "j",
            "epsilon",
            "log2_pi_bound",
            "motion_lower",
            "log2_failure_bound",
            "product_lower",
            "half_motion_residual",
            "full_motion_residual",
        ],
        rows,
    )?);

    let value = json!({ "report_dir": dir, "files": files });
    let text = format!(
        "wrote {} files to {}\n{}\n",
        files.len(),
        dir.display(),
        files.join("\n")
    );
    Ok(Report {
        value,
        text,
        csv: None,
    })
}
