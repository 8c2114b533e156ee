//! Symmetry-reduced classical evaluation of QAOA energies.
//!
//! A cost Hamiltonian built from a MaxCut or Ising instance is split into
//! orbits of terms under the automorphism group of the (weighted) graph.
//! Terms in one orbit share their QAOA expectation value, so the energy is
//! obtained by simulating one reverse-causal-cone subcircuit per orbit and
//! weighting it by the orbit size.
//!
//! Module map:
//!
//! * [`graphio`]: graph model and the edge-list text format.
//! * [`hamiltonian`]: diagonal Z-product Hamiltonians.
//! * [`symmetry`]: equitable refinement, automorphism search and term orbits.
//! * [`lightcone`]: reverse causal cones and the induced subproblems.
//! * [`simulator`]: dense statevector engine.
//! * [`energy`]: full and orbit-reduced energy evaluation.
//! * [`optimize`]: angle optimization and recursive QAOA.
//! * [`bench`]: timing and speedup accounting.

pub mod bench;
pub mod energy;
pub mod graphio;
pub mod hamiltonian;
pub mod lightcone;
pub mod optimize;
pub mod simulator;
pub mod symmetry;

#[cfg(feature = "cli")]
pub mod cli;

pub use energy::{full_energy, reduced_energy, EnergyMode, EnergyReport};
pub use graphio::{Graph, GraphError};
pub use hamiltonian::{Hamiltonian, Term};
pub use simulator::QaoaParams;
pub use symmetry::{ColoredGraph, GeneratorSet, OrbitPartition, Permutation};
