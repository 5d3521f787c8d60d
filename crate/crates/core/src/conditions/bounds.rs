use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::render_table;
use crate::error::{Error, Result};
use crate::exact::{self, biguint_str, rational_str};
use crate::graph::Graph;

/// Relative tolerance for the floating point identity checks.
pub const GROWTH_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchProbability {
    pub n: u64,
    #[serde(with = "rational_str")]
    pub probability: BigRational,
    /// `n = 0`: both sets are empty and always match.
    pub degenerate: bool,
}

/// Probability that two disjoint, uniformly 2-coloured sets of size `n`
/// have the same number of vertices of colour 0:
/// `Σ_{j=0..n} C(n,j)^2 / 4^n = C(2n,n) / 4^n`.
pub fn match_probability(n: u64) -> MatchProbability {
    let sum: BigUint = (0..=n).map(|j| exact::binomial(n, j).pow(2)).sum();
    MatchProbability {
        n,
        probability: exact::from_biguint(&sum, &(BigUint::one() << (2 * n))),
        degenerate: n == 0,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthBoundReport {
    pub n: u64,
    pub j: u32,
    pub c: f64,
    pub epsilon: f64,
    /// `2 log2 n + 2^j (1/2 - ε) n + 2^j log2 c`.
    pub log2_pi_bound: f64,
    /// `n 2^(j-1)`.
    #[serde(with = "biguint_str")]
    pub motion_lower: BigUint,
    /// `-ε 2^j n + 2^j log2 c + 2 log2 n`.
    pub log2_failure_bound: f64,
    /// `(1 - 2^(-ε n))^n`.
    pub product_lower: f64,
    /// `log2_failure_bound - (log2_pi_bound - motion_lower / 2)`.
    pub half_motion_residual: f64,
    /// `log2_failure_bound - (log2_pi_bound - motion_lower)`.
    pub full_motion_residual: f64,
}

impl GrowthBoundReport {
    fn within(residual: f64, scale: f64) -> bool {
        residual.abs() <= GROWTH_TOLERANCE * scale.abs().max(1.0)
    }

    fn scale(&self) -> f64 {
        self.log2_pi_bound.abs().max(self.log2_failure_bound.abs())
    }

    /// Whether `log2_failure_bound = log2_pi_bound - motion_lower / 2`.
    pub fn half_motion_identity_holds(&self) -> bool {
        Self::within(self.half_motion_residual, self.scale())
    }

    /// Whether `log2_failure_bound = log2_pi_bound - motion_lower`.
    pub fn full_motion_identity_holds(&self) -> bool {
        Self::within(self.full_motion_residual, self.scale())
    }

    pub fn to_text(&self) -> String {
        let rows = vec![
            vec!["n".into(), self.n.to_string()],
            vec!["j".into(), self.j.to_string()],
            vec!["c".into(), self.c.to_string()],
            vec!["epsilon".into(), self.epsilon.to_string()],
            vec!["log2_pi_bound".into(), self.log2_pi_bound.to_string()],
            vec!["motion_lower".into(), self.motion_lower.to_string()],
            vec![
                "log2_failure_bound".into(),
                self.log2_failure_bound.to_string(),
            ],
            vec!["product_lower".into(), self.product_lower.to_string()],
            vec![
                "half_motion_residual".into(),
                self.half_motion_residual.to_string(),
            ],
            vec![
                "full_motion_residual".into(),
                self.full_motion_residual.to_string(),
            ],
        ];
        render_table(&["field", "value"], &rows)
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "epsilon {epsilon} not in (0, 1/2)"
        )));
    }
    Ok(())
}

/// The bound quantities of the growth argument for a ball of size `n`,
/// colour classes moved in blocks of `2^j`, and growth constant `c`.
pub fn growth_bound(n: u64, j: u32, c: f64, epsilon: f64) -> Result<GrowthBoundReport> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "n = {n} must be at least 2"
        )));
    }
    if j < 1 || j as u64 > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "j = {j} not in 1..={}",
            n - 1
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("c = {c} must be positive")));
    }
    check_epsilon(epsilon)?;
    let nf = n as f64;
    let pj = (j as f64).exp2();
    let log2_pi_bound = 2.0 * nf.log2() + pj * (0.5 - epsilon) * nf + pj * c.log2();
    let motion_lower = BigUint::from(n) << (j - 1);
    let motion_f = nf * (j as f64 - 1.0).exp2();
    let log2_failure_bound = -epsilon * pj * nf + pj * c.log2() + 2.0 * nf.log2();
    let product_lower = (nf * (-(-epsilon * nf).exp2()).ln_1p()).exp();
    Ok(GrowthBoundReport {
        n,
        j,
        c,
        epsilon,
        log2_pi_bound,
        motion_lower,
        log2_failure_bound,
        product_lower,
        half_motion_residual: log2_failure_bound - (log2_pi_bound - motion_f / 2.0),
        full_motion_residual: log2_failure_bound - (log2_pi_bound - motion_f),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthClassification {
    pub root: usize,
    pub radius: u32,
    pub epsilon: f64,
    pub ball_sizes: Vec<u64>,
    /// `2^((1/2 - ε) √m)` for `m = 0..=radius`.
    pub envelope: Vec<f64>,
    /// Least `c` with `|B(m)| <= c · envelope[m]` for every `m`.
    pub c_fit: f64,
    /// The constant the per-radius verdicts are measured against.
    pub c_used: f64,
    pub satisfied: Vec<bool>,
    pub exceeds_eccentricity: bool,
}

impl GrowthClassification {
    pub fn all_satisfied(&self) -> bool {
        self.satisfied.iter().all(|&s| s)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "root {} radius {} epsilon {}\nc_fit {}  c_used {}\n",
            self.root, self.radius, self.epsilon, self.c_fit, self.c_used
        );
        let rows: Vec<Vec<String>> = (0..self.ball_sizes.len())
            .map(|m| {
                vec![
                    m.to_string(),
                    self.ball_sizes[m].to_string(),
                    format!("{:.6}", self.envelope[m]),
                    self.satisfied[m].to_string(),
                ]
            })
            .collect();
        out.push_str(&render_table(
            &["m", "ball", "envelope", "satisfied"],
            &rows,
        ));
        out
    }
}

/// Fits ball sizes around `v0` to `c · 2^((1/2 - ε) √m)` for `m <= radius`.
/// Without an explicit `c`, the fitted constant is used.
pub fn growth_classifier(
    g: &Graph,
    v0: usize,
    radius: u32,
    epsilon: f64,
    c: Option<f64>,
) -> Result<GrowthClassification> {
    check_epsilon(epsilon)?;
    if let Some(c) = c {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("c = {c} must be positive")));
        }
    }
    let profile = g.growth_sequence(v0, radius)?;
    let envelope: Vec<f64> = (0..=radius)
        .map(|m| ((0.5 - epsilon) * (m as f64).sqrt()).exp2())
        .collect();
    let c_fit = profile
        .ball_sizes
        .iter()
        .zip(&envelope)
        .map(|(&b, &e)| b as f64 / e)
        .fold(0.0, f64::max);
    let c_used = c.unwrap_or(c_fit);
    let satisfied = profile
        .ball_sizes
        .iter()
        .zip(&envelope)
        .map(|(&b, &e)| b as f64 <= c_used * e * (1.0 + GROWTH_TOLERANCE))
        .collect();
    Ok(GrowthClassification {
        root: v0,
        radius,
        epsilon,
        ball_sizes: profile.ball_sizes,
        envelope,
        c_fit,
        c_used,
        satisfied,
        exceeds_eccentricity: profile.exceeds_eccentricity,
    })
}
