//! Total and partial colourings, their stabilisers, and distinguishing
//! probabilities.

mod bound;
mod partial;
mod rng;
mod tree;

pub use bound::{russel_sundaram_bound, HalfPowerBound, RsBoundReport};
pub use partial::{partial_stabiliser, preserves_partial, PartialColouring};
pub use rng::SeededRng;
pub use tree::find_tree_automorphism;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, rational_str};
use crate::graph::Graph;
use crate::permgroup::{automorphism_group, PermGroup, Permutation};
use crate::Caps;

/// A total colouring with colours `0..k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Colouring {
    pub colours: Vec<u32>,
    pub k: u32,
}

impl Colouring {
    pub fn new(colours: Vec<u32>, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        if let Some(c) = colours.iter().find(|&&c| c >= k) {
            return Err(Error::InvalidParameter(format!(
                "colour {c} out of range 0..{k}"
            )));
        }
        Ok(Colouring { colours, k })
    }

    pub fn constant(n: usize, k: u32) -> Self {
        Colouring {
            colours: vec![0; n],
            k,
        }
    }

    /// The `index`-th colouring in base-`k` counting order (vertex 0 is the
    /// least significant digit).
    pub fn from_index(mut index: u64, n: usize, k: u32) -> Self {
        let colours = (0..n)
            .map(|_| {
                let c = (index % k as u64) as u32;
                index /= k as u64;
                c
            })
            .collect();
        Colouring { colours, k }
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    /// `(c γ)(s) = c(γ s)`.
    pub fn act(&self, gamma: &Permutation) -> Colouring {
        Colouring {
            colours: (0..self.len())
                .map(|s| self.colours[gamma.image(s)])
                .collect(),
            k: self.k,
        }
    }

    pub fn is_preserved_by(&self, gamma: &Permutation) -> bool {
        (0..self.len()).all(|s| self.colours[gamma.image(s)] == self.colours[s])
    }

    fn check_for(&self, g: &Graph) -> Result<()> {
        if self.len() != g.vertex_count() {
            return Err(Error::InvalidParameter(format!(
                "colouring of length {} for a graph with {} vertices",
                self.len(),
                g.vertex_count()
            )));
        }
        Ok(())
    }
}

/// String form over the alphabet `0..k`, one character per vertex (base 36
/// digits, so `k <= 36`).
impl fmt::Display for Colouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.colours {
            let ch = char::from_digit(c, 36).ok_or(fmt::Error)?;
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

/// Parses `"0110"` (k = 2, or larger if a larger digit appears) or a JSON
/// array `[0,1,1,0]`.
impl FromStr for Colouring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let colours: Vec<u32> = if s.starts_with('[') {
            serde_json::from_str(s)
                .map_err(|e| Error::InvalidParameter(format!("colouring: {e}")))?
        } else {
            s.chars()
                .map(|ch| {
                    ch.to_digit(36).ok_or_else(|| {
                        Error::InvalidParameter(format!("bad colour character {ch:?}"))
                    })
                })
                .collect::<Result<_>>()?
        };
        let k = colours.iter().max().map_or(2, |&m| (m + 1).max(2));
        Colouring::new(colours, k)
    }
}

pub fn random_colouring(g: &Graph, k: u32, rng: &mut SeededRng) -> Result<Colouring> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 colours, got {k}"
        )));
    }
    let colours = (0..g.vertex_count()).map(|_| rng.below(k)).collect();
    Ok(Colouring { colours, k })
}

/// Colour-preserving automorphisms of `g`.
pub fn colouring_stabiliser(g: &Graph, c: &Colouring) -> Result<PermGroup> {
    c.check_for(g)?;
    automorphism_group(g, Some(&c.colours))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinguishingVerdict {
    pub distinguishing: bool,
    /// A non-identity colour-preserving automorphism when not distinguishing.
    pub witness: Option<Permutation>,
}

pub fn is_distinguishing(g: &Graph, c: &Colouring) -> Result<DistinguishingVerdict> {
    let stab = colouring_stabiliser(g, c)?;
    let witness = stab.generators().first().cloned();
    Ok(DistinguishingVerdict {
        distinguishing: witness.is_none(),
        witness,
    })
}

/// Probability that a uniform random `k`-colouring is preserved by `gamma`:
/// every cycle must be monochromatic, giving `k^(cycles - degree)`.
pub fn fix_probability(gamma: &Permutation, k: u32) -> BigRational {
    exact::pow_rational(k as u64, gamma.cycle_count() as i64 - gamma.degree() as i64)
}

/// Non-identity elements as support pairs `(s, γ s)`, smallest support first.
fn nontrivial_supports(group: &PermGroup, cap: u64) -> Result<Vec<Vec<(usize, usize)>>> {
    let mut out: Vec<Vec<(usize, usize)>> = group
        .elements(cap)?
        .filter(|p| !p.is_identity())
        .map(|p| p.support().into_iter().map(|s| (s, p.image(s))).collect())
        .collect();
    out.sort_by_key(Vec::len);
    Ok(out)
}

fn preserved_by_any(colours: &[u32], supports: &[Vec<(usize, usize)>]) -> bool {
    supports
        .iter()
        .any(|sup| sup.iter().all(|&(s, t)| colours[s] == colours[t]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactProbability {
    #[serde(with = "rational_str")]
    pub probability: BigRational,
    #[serde(with = "crate::exact::biguint_str")]
    pub distinguishing: BigUint,
    #[serde(with = "crate::exact::biguint_str")]
    pub total: BigUint,
    pub k: u32,
}

/// Exact fraction of `k`-colourings of `g` that are distinguishing, by
/// exhausting all `k^n` colourings.
pub fn distinguishing_probability_exact(
    g: &Graph,
    k: u32,
    caps: &Caps,
) -> Result<ExactProbability> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 colours, got {k}"
        )));
    }
    let n = g.vertex_count();
    let total = BigUint::from(k).pow(n as u32);
    let total_u64 = match total.to_u64() {
        Some(t) if t <= caps.colour_exhaustion => t,
        _ => {
            return Err(Error::cap(
                "colouring exhaustion",
                format!("{k}^{n} colourings"),
                caps.colour_exhaustion,
            ))
        }
    };
    let group = automorphism_group(g, None)?;
    let supports = nontrivial_supports(&group, caps.enumeration)?;
    let count = (0..total_u64)
        .into_par_iter()
        .filter(|&i| !preserved_by_any(&Colouring::from_index(i, n, k).colours, &supports))
        .count() as u64;
    Ok(ExactProbability {
        probability: exact::ratio(count, total_u64),
        distinguishing: BigUint::from(count),
        total,
        k,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub master_seed: u64,
    pub k: u32,
}

impl McEstimate {
    /// Is `value` within `sigmas` standard errors of the estimate? With a
    /// zero standard error only exact agreement passes.
    pub fn within(&self, value: f64, sigmas: f64) -> bool {
        (self.estimate - value).abs() <= sigmas * self.std_error + 1e-12
    }
}

/// Monte Carlo estimate of the distinguishing probability. Trial `t` draws
/// its colouring from stream `t` of `master_seed`.
pub fn distinguishing_probability_mc(
    g: &Graph,
    k: u32,
    trials: u64,
    master_seed: u64,
    caps: &Caps,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 colours, got {k}"
        )));
    }
    let group = automorphism_group(g, None)?;
    let supports = nontrivial_supports(&group, caps.enumeration).ok();
    let base = SeededRng::new(master_seed, 0);
    let successes = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<u64> {
            let c = random_colouring(g, k, &mut base.stream(t))?;
            let distinguishing = match &supports {
                Some(s) => !preserved_by_any(&c.colours, s),
                None => colouring_stabiliser(g, &c)?.is_trivial(),
            };
            Ok(u64::from(distinguishing))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let p = successes as f64 / trials as f64;
    Ok(McEstimate {
        trials,
        successes,
        estimate: p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
        master_seed,
        k,
    })
}
