use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::permgroup::{automorphism_group, Permutation};

/// A colouring defined on `domain` only; `colours[i]` is the colour of
/// `domain[i]`. JSON form: `{"domain": [...], "colours": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialColouring {
    pub domain: Vec<usize>,
    pub colours: Vec<u32>,
}

impl PartialColouring {
    pub fn new(domain: Vec<usize>, colours: Vec<u32>) -> Result<Self> {
        if domain.len() != colours.len() {
            return Err(Error::InvalidParameter(format!(
                "{} domain points but {} colours",
                domain.len(),
                colours.len()
            )));
        }
        let mut sorted = domain.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("domain has repeated points".into()));
        }
        Ok(PartialColouring { domain, colours })
    }

    pub fn empty() -> Self {
        PartialColouring {
            domain: Vec::new(),
            colours: Vec::new(),
        }
    }

    /// Dense lookup table over `0..n`, `None` off the domain.
    pub fn table(&self, n: usize) -> Result<Vec<Option<u32>>> {
        let mut t = vec![None; n];
        for (&s, &c) in self.domain.iter().zip(&self.colours) {
            if s >= n {
                return Err(Error::InvalidVertex {
                    vertex: s,
                    vertex_count: n,
                });
            }
            t[s] = Some(c);
        }
        Ok(t)
    }
}

/// `gamma` preserves `c'` when some extensions `c1, c2` of `c'` satisfy
/// `c1 γ = c2`. Setting `c2 = c1 γ`, this holds exactly when
/// `c'(γ s) = c'(s)` for every `s` in the domain with `γ s` in the domain;
/// all other values of `c1` can be chosen freely.
pub fn preserves_partial(gamma: &Permutation, c: &PartialColouring) -> Result<bool> {
    let table = c.table(gamma.degree())?;
    Ok(c.domain
        .iter()
        .zip(&c.colours)
        .all(|(&s, &col)| table[gamma.image(s)].is_none_or(|img| img == col)))
}

/// Every automorphism of `g` preserving `c'`. This set need not be a
/// subgroup, so it is returned as a plain list.
pub fn partial_stabiliser(g: &Graph, c: &PartialColouring, cap: u64) -> Result<Vec<Permutation>> {
    c.table(g.vertex_count())?;
    let group = automorphism_group(g, None)?;
    let mut out = Vec::new();
    for p in group.elements(cap)? {
        if preserves_partial(&p, c)? {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}
