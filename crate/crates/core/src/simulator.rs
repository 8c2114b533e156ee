//! Dense statevector QAOA simulation.
//!
//! The circuit is `U_B(β_p) U_P(γ_p) ⋯ U_B(β_1) U_P(γ_1) |+⟩^n` with
//! `U_P(γ) = exp(-iγH)` (offset dropped, it is a global phase) and
//! `U_B(β) = Π_j exp(-iβX_j)`. Amplitudes are indexed with qubit 0 as the
//! least significant bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hamiltonian::Hamiltonian;
use crate::lightcone::{cone_with, extract_subproblem, Incidence};

/// Default cap on the number of simulated qubits.
pub const DEFAULT_MAX_WIDTH: usize = 26;
/// Cap for the whole-instance oracle.
pub const ORACLE_MAX_QUBITS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("reverse causal cone of term {term:?} spans {width} qubits, limit is {max}")]
    ConeTooWide {
        term: Vec<usize>,
        width: usize,
        max: usize,
    },
    #[error("state of {n} qubits exceeds the limit of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error(
        "need p >= 1 with one beta and one gamma per layer (got {betas} betas, {gammas} gammas)"
    )]
    BadParams { betas: usize, gammas: usize },
    #[error("QAOA angles must be finite")]
    NonFiniteAngle,
    #[error("support {0:?} is not a term of the Hamiltonian")]
    UnknownTerm(Vec<usize>),
}

/// Angles of a depth-`p` QAOA circuit, radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct QaoaParams {
    betas: Vec<f64>,
    gammas: Vec<f64>,
}

#[derive(Deserialize)]
struct RawParams {
    betas: Vec<f64>,
    gammas: Vec<f64>,
}

impl TryFrom<RawParams> for QaoaParams {
    type Error = SimError;

    fn try_from(raw: RawParams) -> Result<Self, Self::Error> {
        QaoaParams::new(raw.betas, raw.gammas)
    }
}

impl QaoaParams {
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self, SimError> {
        if betas.is_empty() || betas.len() != gammas.len() {
            return Err(SimError::BadParams {
                betas: betas.len(),
                gammas: gammas.len(),
            });
        }
        if betas.iter().chain(&gammas).any(|a| !a.is_finite()) {
            return Err(SimError::NonFiniteAngle);
        }
        Ok(Self { betas, gammas })
    }

    /// Unpacks `[β_1..β_p, γ_1..γ_p]`.
    pub fn from_flat(x: &[f64]) -> Result<Self, SimError> {
        let p = x.len() / 2;
        Self::new(x[..p].to_vec(), x[p..].to_vec())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.betas.iter().chain(&self.gammas).copied().collect()
    }

    pub fn p(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|x⟩`.
    pub fn basis(n_qubits: usize, x: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[x] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `exp(-iγ(H - offset))` as a diagonal multiplication.
    pub fn apply_phase_layer(&mut self, h: &Hamiltonian, gamma: f64) {
        assert_eq!(
            h.n_qubits(),
            self.n_qubits,
            "Hamiltonian and state sizes differ"
        );
        self.apply_phase_diagonal(&h.diagonal(), gamma);
    }

    /// Phase layer with a precomputed diagonal (see [`Hamiltonian::diagonal`]).
    pub fn apply_phase_diagonal(&mut self, diagonal: &[f64], gamma: f64) {
        for (a, &e) in self.amps.iter_mut().zip(diagonal) {
            let (s, c) = (-gamma * e).sin_cos();
            *a *= Complex64::new(c, s);
        }
    }

    /// `exp(-iβX)` on every qubit.
    pub fn apply_mixer_layer(&mut self, beta: f64) {
        let (s, c) = beta.sin_cos();
        for q in 0..self.n_qubits {
            let bit = 1usize << q;
            for block in self.amps.chunks_exact_mut(bit << 1) {
                let (lo, hi) = block.split_at_mut(bit);
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x0, x1) = (*a0, *a1);
                    // -i s x = (s x.im, -s x.re)
                    *a0 = Complex64::new(c * x0.re + s * x1.im, c * x0.im - s * x1.re);
                    *a1 = Complex64::new(c * x1.re + s * x0.im, c * x1.im - s * x0.re);
                }
            }
        }
    }

    /// `⟨Π_{j∈S} Z_j⟩`.
    pub fn z_product_expectation(&self, support: &[usize]) -> f64 {
        let mask = support.iter().fold(0usize, |m, &q| m | (1 << q));
        self.amps
            .iter()
            .enumerate()
            .map(|(x, a)| {
                let w = a.norm_sqr();
                if (x & mask).count_ones() % 2 == 1 {
                    -w
                } else {
                    w
                }
            })
            .sum()
    }
}

/// Uniform superposition `|+⟩^n`.
pub fn prepare_plus(n: usize, max_width: usize) -> Result<StateVector, SimError> {
    if n > max_width {
        return Err(SimError::TooManyQubits { n, max: max_width });
    }
    let amp = (0.5f64).powf(n as f64 / 2.0);
    Ok(StateVector {
        n_qubits: n,
        amps: vec![Complex64::new(amp, 0.0); 1 << n],
    })
}

/// Runs the full QAOA circuit for `h` on `|+⟩^n`.
pub fn evolve(
    h: &Hamiltonian,
    params: &QaoaParams,
    max_width: usize,
) -> Result<StateVector, SimError> {
    let mut sv = prepare_plus(h.n_qubits(), max_width)?;
    let diag = h.diagonal();
    for (&beta, &gamma) in params.betas.iter().zip(&params.gammas) {
        sv.apply_phase_diagonal(&diag, gamma);
        sv.apply_mixer_layer(beta);
    }
    Ok(sv)
}

/// Expectation of one term's Z-product, simulated on its reverse causal
/// cone. Returns the expectation and the cone width.
pub fn term_expectation(
    h: &Hamiltonian,
    support: &[usize],
    params: &QaoaParams,
    max_width: usize,
) -> Result<(f64, usize), SimError> {
    term_expectation_with(h, &Incidence::new(h), support, params, max_width)
}

pub(crate) fn term_expectation_with(
    h: &Hamiltonian,
    inc: &Incidence,
    support: &[usize],
    params: &QaoaParams,
    max_width: usize,
) -> Result<(f64, usize), SimError> {
    if h.term_index(support).is_none() {
        return Err(SimError::UnknownTerm(support.to_vec()));
    }
    let c = cone_with(h, inc, support, params.p());
    let width = c.width();
    if width > max_width {
        return Err(SimError::ConeTooWide {
            term: support.to_vec(),
            width,
            max: max_width,
        });
    }
    let sub = extract_subproblem(h, &c, support);
    let sv = evolve(&sub.hamiltonian, params, max_width)?;
    Ok((sv.z_product_expectation(&sub.measured_local), width))
}

/// `⟨Z_S⟩` for every term from one whole-instance simulation.
pub fn full_state_term_expectations(
    h: &Hamiltonian,
    params: &QaoaParams,
) -> Result<Vec<f64>, SimError> {
    let sv = evolve(h, params, ORACLE_MAX_QUBITS)?;
    Ok(h.terms()
        .iter()
        .map(|t| sv.z_product_expectation(&t.support))
        .collect())
}

/// Energy from one whole-instance simulation, offset included.
pub fn full_state_energy_oracle(h: &Hamiltonian, params: &QaoaParams) -> Result<f64, SimError> {
    let zs = full_state_term_expectations(h, params)?;
    Ok(h.offset()
        + h.terms()
            .iter()
            .zip(zs)
            .map(|(t, z)| t.coeff * z)
            .sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphio::families;
    use crate::hamiltonian::{build_maxcut, Term};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn close(a: &StateVector, b: &StateVector, tol: f64) -> bool {
        a.amps
            .iter()
            .zip(&b.amps)
            .all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn plus_states() {
        let one = prepare_plus(1, 26).unwrap();
        assert!(one
            .amps
            .iter()
            .all(|a| (a.re - FRAC_1_SQRT_2).abs() < 1e-15 && a.im == 0.0));
        let two = prepare_plus(2, 26).unwrap();
        assert!(two.amps.iter().all(|a| (a.re - 0.5).abs() < 1e-15));
        assert!((prepare_plus(10, 26).unwrap().norm() - 1.0).abs() < 1e-12);
        assert_eq!(
            prepare_plus(27, 26),
            Err(SimError::TooManyQubits { n: 27, max: 26 })
        );
    }

    #[test]
    fn phase_layer_properties() {
        let h = Hamiltonian::new(2, vec![Term::new(vec![0, 1], -0.5)], 0.0).unwrap();
        let start = prepare_plus(2, 26).unwrap();

        let mut sv = start.clone();
        sv.apply_phase_layer(&h, 0.0);
        assert!(close(&sv, &start, 1e-15));

        let mut sv = start.clone();
        sv.apply_phase_layer(&h, PI);
        // exp(-iπ·(-0.5)·z0z1) = exp(+iπ/2·z0z1): i for aligned bits, -i otherwise.
        let expected = [0.5, -0.5, -0.5, 0.5];
        for (a, e) in sv.amps.iter().zip(expected) {
            assert!(a.re.abs() < 1e-15 && (a.im - e).abs() < 1e-15);
        }

        sv.apply_phase_layer(&h, -PI);
        assert!(close(&sv, &start, 1e-12));
    }

    #[test]
    fn mixer_layer_properties() {
        let start = prepare_plus(3, 26).unwrap();
        let mut sv = start.clone();
        sv.apply_mixer_layer(0.0);
        assert!(close(&sv, &start, 1e-15));

        // |+⟩ is an X eigenstate: exp(-iπ/2 X)|+⟩ = -i|+⟩ per qubit.
        let mut sv = start.clone();
        sv.apply_mixer_layer(FRAC_PI_2);
        let phase = sv.amps[0] / start.amps[0];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        assert!(sv
            .amps
            .iter()
            .zip(&start.amps)
            .all(|(a, b)| (a - phase * b).norm() < 1e-12));

        let mut sv = StateVector::basis(3, 5);
        sv.apply_mixer_layer(0.37);
        sv.apply_mixer_layer(-0.37);
        assert!(close(&sv, &StateVector::basis(3, 5), 1e-12));
    }

    #[test]
    fn mixer_on_single_qubit_matches_matrix() {
        let mut sv = StateVector::basis(1, 0);
        sv.apply_mixer_layer(0.3);
        assert!((sv.amps[0] - Complex64::new(0.3f64.cos(), 0.0)).norm() < 1e-15);
        assert!((sv.amps[1] - Complex64::new(0.0, -(0.3f64.sin()))).norm() < 1e-15);
    }

    #[test]
    fn z_products() {
        assert!(
            prepare_plus(4, 26)
                .unwrap()
                .z_product_expectation(&[0, 2])
                .abs()
                < 1e-15
        );
        assert_eq!(StateVector::basis(2, 0).z_product_expectation(&[0, 1]), 1.0);
        // |01⟩ with qubit 1 set: index 0b10.
        assert_eq!(
            StateVector::basis(2, 0b10).z_product_expectation(&[0, 1]),
            -1.0
        );
        assert_eq!(StateVector::basis(2, 0b10).z_product_expectation(&[0]), 1.0);
    }

    #[test]
    fn norm_is_preserved() {
        let h = build_maxcut(&families::petersen());
        let mut sv = prepare_plus(10, 26).unwrap();
        for layer in 0..3 {
            sv.apply_phase_layer(&h, 0.4 + layer as f64);
            assert!((sv.norm() - 1.0).abs() < 1e-12);
            sv.apply_mixer_layer(0.9 - layer as f64);
            assert!((sv.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_angles_give_zero() {
        let h = build_maxcut(&families::cycle(5));
        let t = &h.terms()[0].support;
        let zero_gamma = QaoaParams::new(vec![0.3, 0.8], vec![0.0, 0.0]).unwrap();
        let zero_beta = QaoaParams::new(vec![0.0, 0.0], vec![0.3, 0.8]).unwrap();
        assert!(term_expectation(&h, t, &zero_gamma, 26).unwrap().0.abs() < 1e-12);
        assert!(term_expectation(&h, t, &zero_beta, 26).unwrap().0.abs() < 1e-12);
    }

    #[test]
    fn triangle_term_matches_full_state() {
        let h = build_maxcut(&families::cycle(3));
        let params = QaoaParams::new(vec![0.3], vec![0.5]).unwrap();
        let (cone_value, width) = term_expectation(&h, &[0, 1], &params, 26).unwrap();
        let full = evolve(&h, &params, 26)
            .unwrap()
            .z_product_expectation(&[0, 1]);
        assert_eq!(width, 3);
        assert!((cone_value - full).abs() < 1e-9);
    }

    #[test]
    fn width_guard() {
        let h = build_maxcut(&families::complete(6));
        let params = QaoaParams::new(vec![0.1], vec![0.2]).unwrap();
        assert_eq!(
            term_expectation(&h, &[0, 1], &params, 4),
            Err(SimError::ConeTooWide {
                term: vec![0, 1],
                width: 6,
                max: 4
            })
        );
        assert!(matches!(
            term_expectation(&h, &[0, 9], &params, 26),
            Err(SimError::UnknownTerm(_))
        ));
    }

    #[test]
    fn oracle_offset_at_zero_gamma() {
        let h = build_maxcut(&families::cycle(6));
        let params = QaoaParams::new(vec![0.7], vec![0.0]).unwrap();
        assert!((full_state_energy_oracle(&h, &params).unwrap() - 3.0).abs() < 1e-12);
        let big = build_maxcut(&families::cycle(21));
        assert!(matches!(
            full_state_energy_oracle(&big, &params),
            Err(SimError::TooManyQubits { n: 21, max: 20 })
        ));
    }

    #[test]
    fn params_validation() {
        assert!(QaoaParams::new(vec![], vec![]).is_err());
        assert!(QaoaParams::new(vec![0.1], vec![0.1, 0.2]).is_err());
        assert!(QaoaParams::new(vec![f64::NAN], vec![0.1]).is_err());
        let p = QaoaParams::from_flat(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!((p.betas(), p.gammas()), (&[0.1, 0.2][..], &[0.3, 0.4][..]));
        assert_eq!(p.to_flat(), vec![0.1, 0.2, 0.3, 0.4]);
    }
}
