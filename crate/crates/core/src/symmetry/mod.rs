//! Graph automorphisms and the induced orbits of Hamiltonian terms.
//!
//! Automorphisms are found with an individualization-refinement search over
//! ordered partitions of the vertex set ([`automorphism_generators`]). Edge
//! weights are handled by the subdivision gadget in [`weighted_gadget`], which
//! moves weight classes onto vertex colors. [`term_orbits`] closes the
//! generators over the term supports of a Hamiltonian.

mod brute;
mod gadget;
mod orbits;
mod refine;
mod search;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphio::Graph;

pub use brute::{brute_force_automorphisms, BRUTE_FORCE_MAX_VERTICES};
pub use gadget::{weighted_gadget, Gadget};
pub use orbits::{term_orbits, vertex_orbits, OrbitClass, OrbitPartition, UnionFind};
pub use refine::{refine, Partition};
pub use search::{automorphism_generators, automorphism_search, SearchOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetryError {
    #[error("automorphism search exceeded {limit:?} with {} partial generators", partial.generators.len())]
    Timeout {
        limit: Duration,
        partial: GeneratorSet,
    },
    #[error("brute-force enumeration is limited to {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("vertex colors must be dense ids with one entry per vertex")]
    InvalidColors,
    #[error("generator acts on {got} points, Hamiltonian has {expected} qubits")]
    SizeMismatch { expected: usize, got: usize },
    #[error("generator maps term {from:?} to {to:?}, which is not a term")]
    TermNotPreserved { from: Vec<usize>, to: Vec<usize> },
    #[error("terms {a:?} and {b:?} share an orbit but have coefficients {ca} and {cb}")]
    InhomogeneousOrbit {
        a: Vec<usize>,
        b: Vec<usize>,
        ca: f64,
        cb: f64,
    },
    #[error("{0}")]
    Invalid(String),
}

/// A permutation of `0..n`; point `i` maps to `images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = SymmetryError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, SymmetryError> {
        let n = images.len();
        let mut hit = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut hit[i], true) {
                return Err(SymmetryError::Invalid(format!(
                    "{images:?} is not a bijection"
                )));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// Image of a set of points, sorted.
    pub fn apply_set(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&i| self.images[i]).collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub n: usize,
    pub generators: Vec<Permutation>,
}

impl GeneratorSet {
    /// Generators of the trivial group.
    pub fn trivial(n: usize) -> Self {
        Self {
            n,
            generators: Vec::new(),
        }
    }

    pub fn new(n: usize, generators: Vec<Permutation>) -> Result<Self, SymmetryError> {
        if let Some(p) = generators.iter().find(|p| p.len() != n) {
            return Err(SymmetryError::SizeMismatch {
                expected: n,
                got: p.len(),
            });
        }
        Ok(Self { n, generators })
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Permutation::is_identity)
    }
}

/// A graph with a color on every vertex. Automorphisms of a colored graph
/// must fix each color class setwise and map edges onto edges of identical
/// weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredGraph {
    graph: Graph,
    colors: Vec<usize>,
}

impl ColoredGraph {
    pub fn new(graph: Graph, colors: Vec<usize>) -> Result<Self, SymmetryError> {
        if colors.len() != graph.n_vertices() {
            return Err(SymmetryError::InvalidColors);
        }
        let k = colors.iter().max().map_or(0, |&c| c + 1);
        let mut used = vec![false; k];
        for &c in &colors {
            used[c] = true;
        }
        if used.iter().any(|u| !u) {
            return Err(SymmetryError::InvalidColors);
        }
        Ok(Self { graph, colors })
    }

    /// Every vertex gets color 0.
    pub fn uniform(graph: Graph) -> Self {
        let colors = vec![0; graph.n_vertices()];
        Self { graph, colors }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn n(&self) -> usize {
        self.graph.n_vertices()
    }

    /// Color classes ordered by color id.
    pub fn color_partition(&self) -> Partition {
        let k = self.colors.iter().max().map_or(0, |&c| c + 1);
        let mut cells = vec![Vec::new(); k];
        for (v, &c) in self.colors.iter().enumerate() {
            cells[c].push(v);
        }
        Partition::new(cells)
    }

    /// Checks color preservation and that every edge maps to an edge of the
    /// same weight.
    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        self.automorphism_checker().check(p)
    }

    pub(crate) fn automorphism_checker(&self) -> AutomorphismChecker<'_> {
        AutomorphismChecker {
            cg: self,
            weights: self.graph.weight_map(),
        }
    }
}

pub(crate) struct AutomorphismChecker<'a> {
    cg: &'a ColoredGraph,
    weights: std::collections::HashMap<(usize, usize), f64>,
}

impl AutomorphismChecker<'_> {
    pub(crate) fn check(&self, p: &Permutation) -> bool {
        if p.len() != self.cg.n() {
            return false;
        }
        let colors = &self.cg.colors;
        if (0..p.len()).any(|v| colors[p.apply(v)] != colors[v]) {
            return false;
        }
        self.cg.graph.edges().iter().all(|e| {
            let (a, b) = (p.apply(e.u), p.apply(e.v));
            let key = if a < b { (a, b) } else { (b, a) };
            self.weights
                .get(&key)
                .is_some_and(|w| w.to_bits() == e.w.to_bits())
        })
    }
}

/// Search settings plus the policy for what to do on timeout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryConfig {
    /// Wall-clock budget for the search; `None` disables the clock.
    pub timeout: Option<Duration>,
    /// On timeout, keep the generators found so far instead of falling back
    /// to the trivial group. Any subgroup gives correct energies.
    pub use_partial_on_timeout: bool,
}

impl Default for SymmetryConfig {
    fn default() -> Self {
        Self {
            timeout: Some(Duration::from_secs(600)),
            use_partial_on_timeout: false,
        }
    }
}

/// Weight-preserving automorphism generators of `g`, computed on its
/// subdivision gadget and restricted back to the original vertices.
pub fn weighted_automorphisms(
    g: &Graph,
    timeout: Option<Duration>,
) -> Result<GeneratorSet, SymmetryError> {
    let gadget = weighted_gadget(g);
    match automorphism_search(&gadget.colored, timeout) {
        Ok(out) => Ok(gadget.restrict(&out.generators)),
        Err(SymmetryError::Timeout { limit, partial }) => Err(SymmetryError::Timeout {
            limit,
            partial: gadget.restrict(&partial),
        }),
        Err(e) => Err(e),
    }
}

/// Symmetry of an instance as used by the energy pipeline: never fails on
/// timeout, it degrades to the trivial group (or the partial generators when
/// configured to).
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSymmetry {
    pub generators: GeneratorSet,
    pub timed_out: bool,
}

pub fn instance_symmetry(g: &Graph, cfg: &SymmetryConfig) -> InstanceSymmetry {
    match weighted_automorphisms(g, cfg.timeout) {
        Ok(generators) => InstanceSymmetry {
            generators,
            timed_out: false,
        },
        Err(SymmetryError::Timeout { partial, .. }) if cfg.use_partial_on_timeout => {
            InstanceSymmetry {
                generators: partial,
                timed_out: true,
            }
        }
        Err(_) => InstanceSymmetry {
            generators: GeneratorSet::trivial(g.n_vertices()),
            timed_out: true,
        },
    }
}
