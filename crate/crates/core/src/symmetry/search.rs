//! Individualization-refinement search for automorphism generators.
//!
//! The search follows one leftmost path of the tree (individualize the first
//! vertex of the first smallest non-singleton cell, refine, repeat) down to a
//! discrete leaf. Walking back up that path, at each node it tries to map the
//! path's chosen vertex onto every other vertex of the target cell by
//! searching the sibling subtree for a leaf equivalent to the first one.
//! Vertices already in the orbit of the chosen vertex under the generators
//! found so far (which all fix the path prefix) are skipped.

use std::time::{Duration, Instant};

use super::refine::Cells;
#[cfg(test)]
use super::refine::Partition;
use super::{
    AutomorphismChecker, ColoredGraph, GeneratorSet, Permutation, SymmetryError, UnionFind,
};

/// Generators together with search statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub generators: GeneratorSet,
    /// Product of the basic orbit lengths along the first path, which equals
    /// the order of the automorphism group. Stored as `f64` since it can be
    /// astronomically large.
    pub group_order: f64,
    pub nodes_visited: usize,
}

/// Generators of the color- and weight-preserving automorphism group, with
/// the default 600 s budget.
pub fn automorphism_generators(cg: &ColoredGraph) -> Result<GeneratorSet, SymmetryError> {
    automorphism_search(cg, Some(Duration::from_secs(600))).map(|o| o.generators)
}

pub fn automorphism_search(
    cg: &ColoredGraph,
    timeout: Option<Duration>,
) -> Result<SearchOutcome, SymmetryError> {
    let n = cg.n();
    let adj = cg.graph().adjacency();
    let checker = cg.automorphism_checker();
    let mut search = Search {
        adj: &adj,
        checker: &checker,
        path: Vec::new(),
        leaf: Vec::new(),
        deadline: timeout.map(|t| (Instant::now() + t, t)),
        nodes: 0,
    };

    let mut root = Cells::from_partition(n, &cg.color_partition());
    root.refine_all(&adj);

    let mut current = root;
    while let Some(target) = current.target_cell() {
        let chosen = current.cell(target)[0];
        let next = current.individualize(chosen, &adj);
        search.path.push(PathNode {
            cells: current,
            target,
            chosen,
        });
        current = next;
    }
    search.leaf = current.lab().to_vec();
    let leaf_cells = current;

    let mut generators: Vec<Permutation> = Vec::new();
    let mut group_order = 1.0f64;
    for level in (0..search.path.len()).rev() {
        let chosen = search.path[level].chosen;
        let candidates = search.path[level]
            .cells
            .cell(search.path[level].target)
            .to_vec();

        let mut orbits = UnionFind::new(n);
        for g in &generators {
            for v in 0..n {
                orbits.union(v, g.apply(v));
            }
        }
        let mut failed = vec![false; n];
        for &w in &candidates {
            if w == chosen || orbits.same(w, chosen) || failed[orbits.find(w)] {
                continue;
            }
            let found = match search.map_chosen_to(level, w, &leaf_cells) {
                Ok(found) => found,
                Err(limit) => {
                    return Err(SymmetryError::Timeout {
                        limit,
                        partial: GeneratorSet { n, generators },
                    })
                }
            };
            match found {
                Some(perm) => {
                    for v in 0..n {
                        orbits.union(v, perm.apply(v));
                    }
                    generators.push(perm);
                }
                None => {
                    let root = orbits.find(w);
                    failed[root] = true;
                }
            }
        }
        let orbit_len = candidates
            .iter()
            .filter(|&&w| orbits.same(w, chosen))
            .count();
        group_order *= orbit_len as f64;
    }

    Ok(SearchOutcome {
        generators: GeneratorSet { n, generators },
        group_order,
        nodes_visited: search.nodes,
    })
}

struct PathNode {
    cells: Cells,
    target: usize,
    chosen: usize,
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    checker: &'a AutomorphismChecker<'a>,
    path: Vec<PathNode>,
    leaf: Vec<usize>,
    deadline: Option<(Instant, Duration)>,
    nodes: usize,
}

impl Search<'_> {
    /// Looks for an automorphism fixing the path prefix above `level` and
    /// sending the chosen vertex at `level` to `w`. `Err` carries the budget
    /// when the clock runs out.
    fn map_chosen_to(
        &mut self,
        level: usize,
        w: usize,
        leaf_cells: &Cells,
    ) -> Result<Option<Permutation>, Duration> {
        let child = self.path[level].cells.individualize(w, self.adj);
        self.descend(child, level + 1, leaf_cells)
    }

    fn descend(
        &mut self,
        cells: Cells,
        depth: usize,
        leaf_cells: &Cells,
    ) -> Result<Option<Permutation>, Duration> {
        self.nodes += 1;
        if let Some((deadline, limit)) = self.deadline {
            if Instant::now() > deadline {
                return Err(limit);
            }
        }
        let reference = self.path.get(depth).map_or(leaf_cells, |node| &node.cells);
        if !cells.same_shape(reference) {
            return Ok(None);
        }
        if cells.is_discrete() {
            let mut images = vec![0; cells.len()];
            for (&from, &to) in self.leaf.iter().zip(cells.lab()) {
                images[from] = to;
            }
            let perm = Permutation { images };
            return Ok(self.checker.check(&perm).then_some(perm));
        }
        let target = self.path[depth].target;
        let candidates = cells.cell(target).to_vec();
        for u in candidates {
            let child = cells.individualize(u, self.adj);
            if let Some(p) = self.descend(child, depth + 1, leaf_cells)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
fn root_partition(cg: &ColoredGraph) -> Partition {
    super::refine(cg, &cg.color_partition())
}
