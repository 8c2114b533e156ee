use crate::graphio::{edge_weight_classes, Graph};

use super::{ColoredGraph, GeneratorSet, Permutation};

/// A vertex-colored stand-in for an edge-weighted graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Gadget {
    pub colored: ColoredGraph,
    /// Original vertex for each gadget vertex; `None` for subdivision vertices.
    pub back_map: Vec<Option<usize>>,
    pub n_original: usize,
}

impl Gadget {
    /// Restricts gadget automorphisms to the original vertices.
    pub fn restrict(&self, gens: &GeneratorSet) -> GeneratorSet {
        let mut to_gadget = vec![0; self.n_original];
        for (k, orig) in self.back_map.iter().enumerate() {
            if let Some(v) = orig {
                to_gadget[*v] = k;
            }
        }
        let generators = gens
            .generators
            .iter()
            .map(|p| {
                let images = (0..self.n_original)
                    .map(|v| {
                        self.back_map[p.apply(to_gadget[v])]
                            .expect("gadget automorphisms keep original vertices in color 0")
                    })
                    .collect();
                Permutation { images }
            })
            .filter(|p| !p.is_identity())
            .collect();
        GeneratorSet {
            n: self.n_original,
            generators,
        }
    }
}

/// Moves edge weights onto vertex colors. With a single weight class the
/// graph is returned as is under one color. Otherwise every edge `(u, v, w)`
/// becomes a path `u - e - v` through a new vertex `e` whose color is one
/// plus the index of `w` among the sorted weight classes; original vertices
/// keep color 0.
pub fn weighted_gadget(g: &Graph) -> Gadget {
    let n = g.n_vertices();
    if g.has_uniform_weights() {
        return Gadget {
            colored: ColoredGraph::uniform(g.clone()),
            back_map: (0..n).map(Some).collect(),
            n_original: n,
        };
    }
    let classes = edge_weight_classes(g);
    let mut class_of = vec![0; g.n_edges()];
    for (c, (_, members)) in classes.iter().enumerate() {
        for &k in members {
            class_of[k] = c;
        }
    }
    let m = g.n_edges();
    let mut pairs = Vec::with_capacity(2 * m);
    for (k, e) in g.edges().iter().enumerate() {
        pairs.push((e.u, n + k));
        pairs.push((e.v, n + k));
    }
    let graph = Graph::unweighted(n + m, pairs).expect("subdivision is a simple graph");
    let colors = (0..n)
        .map(|_| 0)
        .chain(class_of.iter().map(|c| c + 1))
        .collect();
    let back_map = (0..n).map(Some).chain((0..m).map(|_| None)).collect();
    Gadget {
        colored: ColoredGraph::new(graph, colors).expect("dense colors"),
        back_map,
        n_original: n,
    }
}
