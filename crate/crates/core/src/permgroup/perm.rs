use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection on `0..degree`, stored as its image array.
///
/// Composition follows function notation: `a.compose(&b)` maps `s` to
/// `a(b(s))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Permutation::from_images(images).map_err(serde::de::Error::custom)
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidParameter(format!(
                    "image array {images:?} is not a bijection on 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation from disjoint cycles; unlisted points are fixed.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &s) in cycle.iter().enumerate() {
                if s >= degree || touched[s] {
                    return Err(Error::InvalidParameter(format!("bad cycle {cycle:?}")));
                }
                touched[s] = true;
                images[s] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    pub fn transposition(degree: usize, a: usize, b: usize) -> Result<Self> {
        Permutation::from_cycles(degree, &[&[a, b]])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, s: usize) -> usize {
        self.images[s]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.after(other))
    }

    /// `self ∘ other` without the degree check.
    #[inline]
    pub(crate) fn after(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// All cycles including fixed points, each starting at its least point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut s = start;
            while !seen[s] {
                seen[s] = true;
                cycle.push(s);
                s = self.images[s];
            }
            out.push(cycle);
        }
        out
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut count = 0;
        for start in 0..self.degree() {
            if !seen[start] {
                count += 1;
                let mut s = start;
                while !seen[s] {
                    seen[s] = true;
                    s = self.images[s];
                }
            }
        }
        count
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.degree())
            .filter(|&s| self.images[s] != s)
            .collect()
    }

    /// Number of moved points.
    pub fn motion(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i != x)
            .count()
    }

    pub fn first_moved(&self) -> Option<usize> {
        (0..self.degree()).find(|&s| self.images[s] != s)
    }

    /// Smallest `k >= 1` with `self^k = id`.
    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles()
            .iter()
            .map(|c| c.len() as u64)
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let images: Vec<usize> = serde_json::from_str(s)
            .map_err(|e| Error::InvalidParameter(format!("permutation {s:?}: {e}")))?;
        Permutation::from_images(images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn composition_is_function_notation() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.image(1), a.image(b.image(1)));
        assert_eq!(ab.images(), &[1, 2, 0]);
    }

    #[test]
    fn cycle_examples() {
        let four = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        assert_eq!(four.cycles(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(four.cycle_count(), 1);
        let rev = Permutation::from_images(vec![3, 2, 1, 0]).unwrap();
        assert_eq!(rev.cycle_count(), 2);
        assert_eq!(rev.motion(), 4);
        assert_eq!(rev.order(), 2);
    }

    #[test]
    fn errors() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![0, 2]).is_err());
        let a = Permutation::identity(2);
        let b = Permutation::identity(3);
        assert!(matches!(a.compose(&b), Err(Error::DegreeMismatch { .. })));
        assert!("[1, 0, 1]".parse::<Permutation>().is_err());
    }

    #[test]
    fn text_form() {
        let p = Permutation::from_images(vec![2, 0, 1]).unwrap();
        assert_eq!(p.to_string(), "[2, 0, 1]");
        assert_eq!("[2, 0, 1]".parse::<Permutation>().unwrap(), p);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[2,0,1]");
    }

    fn arb_perm() -> impl Strategy<Value = Permutation> {
        (1usize..12)
            .prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(p in arb_perm()) {
            let id = Permutation::identity(p.degree());
            prop_assert_eq!(p.compose(&p.inverse()).unwrap(), id.clone());
            prop_assert_eq!(p.inverse().compose(&p).unwrap(), id);
        }

        #[test]
        fn cycles_partition_points(p in arb_perm()) {
            let mut pts: Vec<usize> = p.cycles().into_iter().flatten().collect();
            pts.sort_unstable();
            prop_assert_eq!(pts, (0..p.degree()).collect::<Vec<_>>());
            prop_assert_eq!(p.cycle_count(), p.cycles().len());
            let fixed = p.cycles().iter().filter(|c| c.len() == 1).count();
            prop_assert_eq!(p.motion(), p.degree() - fixed);
        }
    }
}
