//! Shared test corpus and independent reference implementations.

#![allow(dead_code)]

use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use qaoa_symmetry::graphio::families;
use qaoa_symmetry::{Graph, QaoaParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Instance {
    pub name: String,
    pub graph: Graph,
}

fn instance(name: impl Into<String>, graph: Graph) -> Instance {
    Instance {
        name: name.into(),
        graph,
    }
}

/// Rearranges `a` into the next permutation in lexicographic order.
pub fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn pair_bit(n: usize, u: usize, v: usize) -> u64 {
    let (a, b) = (u.min(v), u.max(v));
    1 << (a * n + b)
}

/// Smallest edge code over all relabelings.
fn canonical_code(n: usize, edges: &[(usize, usize)]) -> u64 {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    loop {
        let code = edges
            .iter()
            .fold(0u64, |c, &(u, v)| c | pair_bit(n, perm[u], perm[v]));
        best = best.min(code);
        if !next_permutation(&mut perm) {
            return best;
        }
    }
}

/// Every connected simple graph on `2..=n_max` vertices, one per
/// isomorphism class. A connected graph always has a vertex whose removal
/// keeps it connected, so each class on `n` vertices arises from a class on
/// `n - 1` vertices plus one vertex.
pub fn connected_graphs(n_max: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for n in 2..=n_max {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for base in &level {
            for mask in 1u32..(1 << (n - 1)) {
                let mut edges = base.clone();
                edges.extend(
                    (0..n - 1)
                        .filter(|&u| mask >> u & 1 == 1)
                        .map(|u| (u, n - 1)),
                );
                if seen.insert(canonical_code(n, &edges)) {
                    next.push(edges);
                }
            }
        }
        out.extend(
            next.iter()
                .map(|e| Graph::unweighted(n, e.iter().copied()).unwrap()),
        );
        level = next;
    }
    out
}

pub fn small_connected() -> Vec<Instance> {
    connected_graphs(7)
        .into_iter()
        .enumerate()
        .map(|(k, g)| instance(format!("connected-{}-{k}", g.n_vertices()), g))
        .collect()
}

pub fn structured() -> Vec<Instance> {
    let mut v = Vec::new();
    for n in 3..=8 {
        v.push(instance(format!("K{n}"), families::complete(n)));
    }
    for n in 3..=12 {
        v.push(instance(format!("C{n}"), families::cycle(n)));
    }
    for leaves in 3..=8 {
        v.push(instance(format!("star-{leaves}"), families::star(leaves)));
    }
    for k in 3..=6 {
        v.push(instance(format!("torus-2x{k}"), families::torus(&[2, k])));
    }
    for k in 3..=5 {
        v.push(instance(format!("torus-3x{k}"), families::torus(&[3, k])));
    }
    v.push(instance("petersen", families::petersen()));
    v.push(instance("K3,3", families::complete_bipartite(3, 3)));
    v
}

/// Sparse random graphs on 8..=16 vertices.
pub fn random(seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = Vec::new();
    for n in 8..=16 {
        let g = families::gnp(n, 2.2 / n as f64, &mut rng);
        v.push(instance(format!("gnp-{n}"), g));
        if n % 2 == 0 {
            let g = families::random_bounded_degree(n, 3, &mut rng);
            v.push(instance(format!("deg3-{n}"), g));
        }
    }
    v
}

/// Same graph with weights drawn from `{1, 2}`.
pub fn reweighted(g: &Graph, rng: &mut impl Rng) -> Graph {
    let edges = g
        .edges()
        .iter()
        .map(|e| (e.u, e.v, if rng.gen_bool(0.5) { 1.0 } else { 2.0 }));
    Graph::new(g.n_vertices(), edges).unwrap()
}

pub fn random_params(p: usize, rng: &mut impl Rng) -> QaoaParams {
    let betas = (0..p).map(|_| rng.gen_range(0.0..FRAC_PI_2)).collect();
    let gammas = (0..p).map(|_| rng.gen_range(0.0..PI)).collect();
    QaoaParams::new(betas, gammas).unwrap()
}

/// Reference QAOA for MaxCut written directly from the definitions: the
/// state is `Π_l e^{-iβ_l Σ X} e^{-iγ_l C}` applied to `|+⟩^n`, where `C(x)`
/// is the cut weight. Returns `⟨Z_u Z_v⟩` per edge and the expected cut.
pub fn reference_maxcut(g: &Graph, params: &QaoaParams) -> (Vec<f64>, f64) {
    let n = g.n_vertices();
    let dim = 1usize << n;
    let cut: Vec<f64> = (0..dim)
        .map(|x| {
            g.edges()
                .iter()
                .filter(|e| (x >> e.u & 1) != (x >> e.v & 1))
                .map(|e| e.w)
                .sum()
        })
        .collect();
    let mut psi = vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    for (&beta, &gamma) in params.betas().iter().zip(params.gammas()) {
        for (a, c) in psi.iter_mut().zip(&cut) {
            *a *= Complex64::from_polar(1.0, -gamma * c);
        }
        let (cb, sb) = (
            Complex64::new(beta.cos(), 0.0),
            Complex64::new(0.0, -beta.sin()),
        );
        for q in 0..n {
            let mut next = psi.clone();
            for x in 0..dim {
                next[x] = cb * psi[x] + sb * psi[x ^ (1 << q)];
            }
            psi = next;
        }
    }
    let prob: Vec<f64> = psi.iter().map(|a| a.norm_sqr()).collect();
    let zz = g
        .edges()
        .iter()
        .map(|e| {
            (0..dim)
                .map(|x| {
                    if (x >> e.u & 1) == (x >> e.v & 1) {
                        prob[x]
                    } else {
                        -prob[x]
                    }
                })
                .sum()
        })
        .collect();
    let energy = prob.iter().zip(&cut).map(|(p, c)| p * c).sum();
    (zz, energy)
}

/// Maximum cut weight by enumeration.
pub fn reference_max_cut(g: &Graph) -> f64 {
    (0..1usize << g.n_vertices())
        .map(|x| {
            g.edges()
                .iter()
                .filter(|e| (x >> e.u & 1) != (x >> e.v & 1))
                .map(|e| e.w)
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Edge orbits under an explicit list of permutations (the whole group).
pub fn orbits_from_group(g: &Graph, group: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    let mut done = HashSet::new();
    let mut out = Vec::new();
    for e in g.edges() {
        if done.contains(&(e.u, e.v)) {
            continue;
        }
        let mut orbit: Vec<(usize, usize)> = group
            .iter()
            .map(|p| (p[e.u].min(p[e.v]), p[e.u].max(p[e.v])))
            .collect();
        orbit.sort();
        orbit.dedup();
        done.extend(orbit.iter().copied());
        out.push(orbit);
    }
    out.sort();
    out
}
