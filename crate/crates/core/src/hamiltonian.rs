//! Diagonal cost Hamiltonians written as a constant plus a sum of weighted
//! Z-products, `H = offset + Σ_S c_S Π_{j∈S} Z_j`.
//!
//! Spin convention: bit 0 is `z = +1`, bit 1 is `z = -1`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphio::Graph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error("term with empty support; constants belong in the offset")]
    EmptySupport,
    #[error("term support {support:?} references a qubit outside 0..{n_qubits}")]
    QubitOutOfRange {
        support: Vec<usize>,
        n_qubits: usize,
    },
    #[error("term support {0:?} repeats a qubit")]
    RepeatedQubit(Vec<usize>),
    #[error("non-finite coefficient on term {0:?}")]
    NonFinite(Vec<usize>),
    #[error("bitstring has length {got}, Hamiltonian has {expected} qubits")]
    LengthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    /// Sorted, duplicate-free qubit indices.
    pub support: Vec<usize>,
    pub coeff: f64,
}

impl Term {
    pub fn new(mut support: Vec<usize>, coeff: f64) -> Self {
        support.sort_unstable();
        Self { support, coeff }
    }

    /// `Π_{j∈S} z_j` for the given bits.
    pub fn parity_sign(&self, bits: &[u8]) -> f64 {
        let odd = self.support.iter().filter(|&&j| bits[j] & 1 == 1).count() % 2 == 1;
        if odd {
            -1.0
        } else {
            1.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHamiltonian")]
pub struct Hamiltonian {
    n_qubits: usize,
    offset: f64,
    terms: Vec<Term>,
}

#[derive(Deserialize)]
struct RawHamiltonian {
    n_qubits: usize,
    offset: f64,
    terms: Vec<Term>,
}

impl TryFrom<RawHamiltonian> for Hamiltonian {
    type Error = HamiltonianError;

    fn try_from(raw: RawHamiltonian) -> Result<Self, Self::Error> {
        Hamiltonian::new(raw.n_qubits, raw.terms, raw.offset)
    }
}

impl Hamiltonian {
    /// Validates the terms, merges repeated supports (first occurrence keeps
    /// its position) and drops terms whose merged coefficient is zero.
    pub fn new(n_qubits: usize, terms: Vec<Term>, offset: f64) -> Result<Self, HamiltonianError> {
        if !offset.is_finite() {
            return Err(HamiltonianError::NonFinite(Vec::new()));
        }
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        let mut slot: HashMap<Vec<usize>, usize> = HashMap::new();
        for t in terms {
            let t = Term::new(t.support, t.coeff);
            if t.support.is_empty() {
                return Err(HamiltonianError::EmptySupport);
            }
            if t.support.windows(2).any(|w| w[0] == w[1]) {
                return Err(HamiltonianError::RepeatedQubit(t.support));
            }
            if t.support.last().is_some_and(|&q| q >= n_qubits) {
                return Err(HamiltonianError::QubitOutOfRange {
                    support: t.support,
                    n_qubits,
                });
            }
            if !t.coeff.is_finite() {
                return Err(HamiltonianError::NonFinite(t.support));
            }
            match slot.get(&t.support) {
                Some(&k) => merged[k].coeff += t.coeff,
                None => {
                    slot.insert(t.support.clone(), merged.len());
                    merged.push(t);
                }
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        Ok(Self {
            n_qubits,
            offset,
            terms: merged,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_index(&self, support: &[usize]) -> Option<usize> {
        self.terms.iter().position(|t| t.support == support)
    }

    /// True when every term acts on exactly two qubits.
    pub fn is_quadratic(&self) -> bool {
        self.terms.iter().all(|t| t.support.len() == 2)
    }

    /// `f(x)` for a bitstring `x` of length `n_qubits`.
    pub fn eval_classical(&self, bits: &[u8]) -> Result<f64, HamiltonianError> {
        if bits.len() != self.n_qubits {
            return Err(HamiltonianError::LengthMismatch {
                expected: self.n_qubits,
                got: bits.len(),
            });
        }
        Ok(self.offset
            + self
                .terms
                .iter()
                .map(|t| t.coeff * t.parity_sign(bits))
                .sum::<f64>())
    }

    /// Diagonal of the nonconstant part over all `2^n` basis states, with
    /// qubit 0 as the least significant bit of the basis index.
    pub fn diagonal(&self) -> Vec<f64> {
        let masks: Vec<(usize, f64)> = self
            .terms
            .iter()
            .map(|t| (t.support.iter().fold(0usize, |m, &q| m | (1 << q)), t.coeff))
            .collect();
        (0..1usize << self.n_qubits)
            .map(|x| {
                masks
                    .iter()
                    .map(|&(m, c)| if (x & m).count_ones() % 2 == 1 { -c } else { c })
                    .sum()
            })
            .collect()
    }
}

/// MaxCut: each edge of weight `w` contributes `w (1 - Z_u Z_v) / 2`.
pub fn build_maxcut(g: &Graph) -> Hamiltonian {
    let terms = g
        .edges()
        .iter()
        .map(|e| Term::new(vec![e.u, e.v], -e.w / 2.0))
        .collect();
    Hamiltonian::new(g.n_vertices(), terms, g.total_weight() / 2.0)
        .expect("graph invariants give a valid Hamiltonian")
}

/// Ising: `f(z) = Σ_(i,j) J_ij z_i z_j` with the edge weights as couplings.
pub fn build_ising(g: &Graph) -> Hamiltonian {
    let terms = g
        .edges()
        .iter()
        .map(|e| Term::new(vec![e.u, e.v], e.w))
        .collect();
    Hamiltonian::new(g.n_vertices(), terms, 0.0).expect("graph invariants give a valid Hamiltonian")
}

/// Which objective a graph encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    #[default]
    MaxCut,
    Ising,
}

impl Problem {
    pub fn build(self, g: &Graph) -> Hamiltonian {
        match self {
            Problem::MaxCut => build_maxcut(g),
            Problem::Ising => build_ising(g),
        }
    }
}
