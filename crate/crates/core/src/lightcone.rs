//! Reverse causal cones of Hamiltonian terms.
//!
//! At depth `p` the expectation of a Z-product only depends on the qubits
//! reachable from its support through `p` rounds of "add every term that
//! touches the current set". Everything outside that set cancels between
//! the circuit and its adjoint, so the term can be simulated on the induced
//! subproblem alone.

use std::collections::BTreeSet;

use crate::hamiltonian::{Hamiltonian, Term};

/// Nested qubit sets `K_0 ⊆ K_1 ⊆ … ⊆ K_p`, each sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    layers: Vec<Vec<usize>>,
}

impl Cone {
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    /// `K_p`, the qubits that must be simulated.
    pub fn qubits(&self) -> &[usize] {
        self.layers.last().expect("a cone has at least one layer")
    }

    pub fn width(&self) -> usize {
        self.qubits().len()
    }
}

/// Term supports incident to each qubit.
#[derive(Debug, Clone)]
pub struct Incidence {
    by_qubit: Vec<Vec<usize>>,
}

impl Incidence {
    pub fn new(h: &Hamiltonian) -> Self {
        let mut by_qubit = vec![Vec::new(); h.n_qubits()];
        for (k, t) in h.terms().iter().enumerate() {
            for &q in &t.support {
                by_qubit[q].push(k);
            }
        }
        Self { by_qubit }
    }
}

pub fn cone(h: &Hamiltonian, support: &[usize], p: usize) -> Cone {
    cone_with(h, &Incidence::new(h), support, p)
}

/// Same as [`cone`] with a precomputed incidence table.
pub fn cone_with(h: &Hamiltonian, inc: &Incidence, support: &[usize], p: usize) -> Cone {
    let mut current: BTreeSet<usize> = support.iter().copied().collect();
    let mut layers = vec![current.iter().copied().collect::<Vec<_>>()];
    for _ in 0..p {
        let mut next = current.clone();
        for &q in &current {
            for &k in &inc.by_qubit[q] {
                next.extend(h.terms()[k].support.iter().copied());
            }
        }
        layers.push(next.iter().copied().collect());
        if next.len() == current.len() {
            // Saturated: remaining layers are identical.
            while layers.len() < p + 1 {
                layers.push(layers.last().unwrap().clone());
            }
            break;
        }
        current = next;
    }
    Cone { layers }
}

/// The Hamiltonian restricted to a cone, relabeled to `0..width`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subproblem {
    /// Terms with support inside the cone, offset 0.
    pub hamiltonian: Hamiltonian,
    /// Original qubit of each local qubit, ascending.
    pub relabel: Vec<usize>,
    pub measured_local: Vec<usize>,
}

impl Subproblem {
    pub fn to_local(&self, q: usize) -> Option<usize> {
        self.relabel.binary_search(&q).ok()
    }
}

/// Keeps exactly the terms whose support lies inside `K_p`. `measured` must
/// be contained in the cone.
pub fn extract_subproblem(h: &Hamiltonian, c: &Cone, measured: &[usize]) -> Subproblem {
    let relabel = c.qubits().to_vec();
    let mut local = vec![usize::MAX; h.n_qubits()];
    for (i, &q) in relabel.iter().enumerate() {
        local[q] = i;
    }
    let terms: Vec<Term> = h
        .terms()
        .iter()
        .filter(|t| t.support.iter().all(|&q| local[q] != usize::MAX))
        .map(|t| Term::new(t.support.iter().map(|&q| local[q]).collect(), t.coeff))
        .collect();
    let hamiltonian =
        Hamiltonian::new(relabel.len(), terms, 0.0).expect("relabeling keeps terms valid");
    let measured_local = measured.iter().map(|&q| local[q]).collect();
    Subproblem {
        hamiltonian,
        relabel,
        measured_local,
    }
}
