//! Automorphism groups, motion, and random distinguishing colourings of
//! finite graphs and finite truncations of infinite graph families.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: graphs, BFS distances, spheres, Cartesian products, family
//!   truncations and growth profiles.
//! * [`permgroup`]: permutations, stabiliser chains, automorphism search,
//!   orbits, stabilisers and motion.
//! * [`topology`]: the confluent ultrametric on a permutation group, coset
//!   balls, and uniform-measure fractions on finite groups.
//! * [`colouring`]: random and partial colourings, their stabilisers, and
//!   exact and Monte Carlo distinguishing probabilities.
//! * [`conditions`]: sphere conditions, suborbit equivalence, product layers
//!   and growth bound arithmetic.

pub mod colouring;
pub mod conditions;
pub mod error;
pub mod exact;
pub mod graph;
pub mod permgroup;
pub mod topology;

pub use error::{Error, Result};
pub use graph::Graph;
pub use permgroup::{PermGroup, Permutation};

/// Enumeration and exhaustion limits shared by the exact routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Caps {
    /// Largest group order that may be enumerated element by element.
    pub enumeration: u64,
    /// Largest number of colourings an exhaustive routine may visit.
    pub colour_exhaustion: u64,
    /// Largest vertex count for exhaustive colour-first measure routines.
    pub exhaustive_vertices: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 1_000_000,
            colour_exhaustion: 1 << 20,
            exhaustive_vertices: 20,
        }
    }
}
