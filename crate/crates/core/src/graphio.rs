//! Graph model and the plain-text edge-list format.
//!
//! The format is one edge per line, `u v` or `u v w`. Vertex tokens are
//! arbitrary labels mapped to dense indices in order of first appearance.
//! Everything after a `#` is ignored.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}: expected `u v` or `u v w`, found {tokens} tokens")]
    TokenCount { line: usize, tokens: usize },
    #[error("line {line}: weight `{token}` is not a finite number")]
    BadWeight { line: usize, token: String },
    #[error("line {line}: self-loop on vertex `{label}`")]
    SelfLoop { line: usize, label: String },
    #[error("line {line}: edge ({u}, {v}) repeated with conflicting weight")]
    ConflictingDuplicate { line: usize, u: String, v: String },
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoopIndex(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({u}, {v}) has non-finite weight")]
    NonFiniteWeight { u: usize, v: usize },
}

/// Undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<Edge>,
    /// External label of each dense index, when the graph came from text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples. Endpoints are normalized to
    /// `u < v`; edge order is kept.
    pub fn new(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, GraphError> {
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        for (a, b, w) in edges {
            if a >= n_vertices || b >= n_vertices {
                return Err(GraphError::VertexOutOfRange {
                    u: a,
                    v: b,
                    n: n_vertices,
                });
            }
            if a == b {
                return Err(GraphError::SelfLoopIndex(a));
            }
            if !w.is_finite() {
                return Err(GraphError::NonFiniteWeight { u: a, v: b });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if seen.insert((u, v), ()).is_some() {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            out.push(Edge {
                u,
                v,
                w: canonical_zero(w),
            });
        }
        Ok(Self {
            n_vertices,
            edges: out,
            labels: None,
        })
    }

    /// Unit-weight graph from vertex pairs.
    pub fn unweighted(
        n_vertices: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        Self::new(n_vertices, pairs.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External label of a dense vertex index (the index itself when the
    /// graph carries no labels).
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n_vertices, "one label per vertex");
        self.labels = Some(labels);
        self
    }

    /// Copy of the graph with every weight set to 1.
    pub fn unit_weights(&self) -> Graph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.w = 1.0;
        }
        g
    }

    pub fn has_uniform_weights(&self) -> bool {
        match self.edges.first() {
            None => true,
            Some(first) => self
                .edges
                .iter()
                .all(|e| e.w.to_bits() == first.w.to_bits()),
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Neighbor lists, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Map from normalized endpoints to edge weight.
    pub fn weight_map(&self) -> HashMap<(usize, usize), f64> {
        self.edges.iter().map(|e| ((e.u, e.v), e.w)).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n_vertices == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Writes the graph in the edge-list format, using labels when present.
    /// Isolated vertices are not representable and are dropped.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", self.label(e.u), self.label(e.v), e.w);
        }
        out
    }
}

fn canonical_zero(w: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut position: HashMap<(usize, usize), usize> = HashMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 && tokens.len() != 3 {
            return Err(GraphError::TokenCount {
                line: line_no,
                tokens: tokens.len(),
            });
        }
        let w = match tokens.get(2) {
            None => 1.0,
            Some(tok) => match tok.parse::<f64>() {
                Ok(w) if w.is_finite() => canonical_zero(w),
                _ => {
                    return Err(GraphError::BadWeight {
                        line: line_no,
                        token: tok.to_string(),
                    })
                }
            },
        };
        if tokens[0] == tokens[1] {
            return Err(GraphError::SelfLoop {
                line: line_no,
                label: tokens[0].to_string(),
            });
        }
        let mut intern = |tok: &str| -> usize {
            if let Some(&i) = index.get(tok) {
                return i;
            }
            let i = labels.len();
            labels.push(tok.to_string());
            index.insert(tok.to_string(), i);
            i
        };
        let a = intern(tokens[0]);
        let b = intern(tokens[1]);
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        match position.get(&(u, v)) {
            Some(&k) => {
                if edges[k].w.to_bits() != w.to_bits() {
                    return Err(GraphError::ConflictingDuplicate {
                        line: line_no,
                        u: tokens[0].to_string(),
                        v: tokens[1].to_string(),
                    });
                }
            }
            None => {
                position.insert((u, v), edges.len());
                edges.push(Edge { u, v, w });
            }
        }
    }

    Ok(Graph {
        n_vertices: labels.len(),
        edges,
        labels: Some(labels),
    })
}

/// Partition of edge indices by exact weight, sorted by weight.
pub fn edge_weight_classes(g: &Graph) -> Vec<(f64, Vec<usize>)> {
    let mut classes: Vec<(f64, Vec<usize>)> = Vec::new();
    let mut by_bits: HashMap<u64, usize> = HashMap::new();
    for (k, e) in g.edges.iter().enumerate() {
        let slot = *by_bits.entry(e.w.to_bits()).or_insert_with(|| {
            classes.push((e.w, Vec::new()));
            classes.len() - 1
        });
        classes[slot].1.push(k);
    }
    classes.sort_by(|a, b| a.0.total_cmp(&b.0));
    classes
}

/// Small graph families used by tests, benchmarks and the demo.
pub mod families {
    use super::Graph;
    use rand::Rng;

    pub fn complete(n: usize) -> Graph {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::unweighted(n, pairs).expect("valid complete graph")
    }

    pub fn path(n: usize) -> Graph {
        Graph::unweighted(n, (1..n).map(|v| (v - 1, v))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Graph::unweighted(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
    }

    /// Star with one center (vertex 0) and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        Graph::unweighted(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid star")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let pairs = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Graph::unweighted(a + b, pairs).expect("valid complete bipartite graph")
    }

    pub fn petersen() -> Graph {
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i, i + 5));
            pairs.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::unweighted(10, pairs).expect("valid Petersen graph")
    }

    /// Wrapped grid with the given side lengths (a Cartesian product of
    /// cycles). A side of length 2 contributes a single edge instead of a
    /// doubled one; sides of length 1 contribute nothing.
    pub fn torus(sides: &[usize]) -> Graph {
        let n: usize = sides.iter().product();
        let mut pairs = Vec::new();
        for v in 0..n {
            let mut stride = 1;
            for &side in sides {
                let coord = (v / stride) % side;
                let next = (coord + 1) % side;
                let forward = v - coord * stride + next * stride;
                if side > 2 || (side == 2 && coord == 0) {
                    pairs.push((v, forward));
                }
                stride *= side;
            }
        }
        Graph::unweighted(n, pairs).expect("valid torus")
    }

    /// Erdős–Rényi G(n, p).
    pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    pairs.push((u, v));
                }
            }
        }
        Graph::unweighted(n, pairs).expect("valid random graph")
    }

    /// Random graph with at most `degree` edges per vertex, built by pairing
    /// vertex stubs and discarding loops and repeats.
    pub fn random_bounded_degree<R: Rng>(n: usize, degree: usize, rng: &mut R) -> Graph {
        use rand::seq::SliceRandom;
        let mut stubs: Vec<usize> = (0..n)
            .flat_map(|v| std::iter::repeat_n(v, degree))
            .collect();
        stubs.shuffle(rng);
        let mut seen = std::collections::HashSet::new();
        let mut pairs = Vec::new();
        for pair in stubs.chunks(2) {
            if let [a, b] = *pair {
                let key = (a.min(b), a.max(b));
                if a != b && seen.insert(key) {
                    pairs.push(key);
                }
            }
        }
        Graph::unweighted(n, pairs).expect("valid random graph")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_triangle() {
        let g = parse_edge_list("0 1\n1 2\n0 2").unwrap();
        assert_eq!(g.n_vertices(), 3);
        let e: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.w)).collect();
        assert_eq!(e, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
    }

    #[test]
    fn labels_follow_first_appearance() {
        let g = parse_edge_list("a b 2.5\nb c -1").unwrap();
        assert_eq!(g.n_vertices(), 3);
        let e: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.w)).collect();
        assert_eq!(e, vec![(0, 1, 2.5), (1, 2, -1.0)]);
        assert_eq!(g.labels().unwrap(), &["a", "b", "c"]);
    }

    #[test]
    fn numeric_labels_are_still_labels() {
        let g = parse_edge_list("5 3\n3 9").unwrap();
        assert_eq!(g.labels().unwrap(), &["5", "3", "9"]);
        assert_eq!(g.edges()[1].endpoints(), (1, 2));
    }

    #[test]
    fn rejects_self_loop() {
        assert!(matches!(
            parse_edge_list("0 0"),
            Err(GraphError::SelfLoop { line: 1, .. })
        ));
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            parse_edge_list("0 1 2 3"),
            Err(GraphError::TokenCount { .. })
        ));
        assert!(matches!(
            parse_edge_list("0"),
            Err(GraphError::TokenCount { .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 x"),
            Err(GraphError::BadWeight { .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 inf"),
            Err(GraphError::BadWeight { .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 NaN"),
            Err(GraphError::BadWeight { .. })
        ));
    }

    #[test]
    fn duplicate_edges() {
        assert!(matches!(
            parse_edge_list("0 1 1\n1 0 2"),
            Err(GraphError::ConflictingDuplicate { line: 2, .. })
        ));
        let g = parse_edge_list("0 1\n1 0 1.0").unwrap();
        assert_eq!(g.n_edges(), 1);
    }

    #[test]
    fn comments_and_crlf() {
        let g = parse_edge_list("# header\r\n0 1 # trailing\r\n\r\n1 2\r\n").unwrap();
        assert_eq!(g.n_edges(), 2);
        assert_eq!(g.n_vertices(), 3);
    }

    #[test]
    fn constructor_validates() {
        assert_eq!(
            Graph::unweighted(2, [(0, 0)]),
            Err(GraphError::SelfLoopIndex(0))
        );
        assert!(matches!(
            Graph::unweighted(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange { .. })
        ));
        assert_eq!(
            Graph::unweighted(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert!(Graph::new(2, [(0, 1, f64::NAN)]).is_err());
        let g = Graph::unweighted(3, [(2, 0)]).unwrap();
        assert_eq!(g.edges()[0].endpoints(), (0, 2));
    }

    #[test]
    fn weight_classes() {
        let tri = families::cycle(3);
        assert_eq!(edge_weight_classes(&tri), vec![(1.0, vec![0, 1, 2])]);

        let g = Graph::new(3, [(0, 1, 1.0), (1, 2, -1.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(
            edge_weight_classes(&g),
            vec![(-1.0, vec![1]), (1.0, vec![0, 2])]
        );

        let empty = Graph::unweighted(4, []).unwrap();
        assert!(edge_weight_classes(&empty).is_empty());
    }

    #[test]
    fn torus_shapes() {
        let t = families::torus(&[4, 4]);
        assert_eq!((t.n_vertices(), t.n_edges()), (16, 32));
        let t = families::torus(&[3, 3, 3]);
        assert_eq!((t.n_vertices(), t.n_edges()), (27, 81));
        let prism = families::torus(&[2, 5]);
        assert_eq!((prism.n_vertices(), prism.n_edges()), (10, 15));
        assert!(t.adjacency().iter().all(|a| a.len() == 6));
    }

    #[test]
    fn petersen_is_cubic() {
        let p = families::petersen();
        assert_eq!(p.n_edges(), 15);
        assert!(p.adjacency().iter().all(|a| a.len() == 3));
    }
}
