//! Outer-loop angle optimization and recursive QAOA.

pub mod nelder_mead;
mod rqaoa;

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::energy::{EnergyError, Evaluator};
use crate::hamiltonian::Hamiltonian;
use crate::simulator::{QaoaParams, DEFAULT_MAX_WIDTH};
use crate::symmetry::OrbitPartition;

pub use nelder_mead::{minimize, Minimum, NelderMeadConfig};
pub use rqaoa::{
    brute_force_opt, eliminate_variable, rqaoa_correlations, rqaoa_run, Correlation,
    EliminationStep, IsingInstance, RqaoaConfig, RqaoaResult, SubstitutionRecord,
    BRUTE_FORCE_MAX_VARIABLES,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Symmetry(#[from] crate::symmetry::SymmetryError),
    #[error("depth p must be at least 1")]
    ZeroDepth,
    #[error("edge ({0}, {1}) is not in the instance")]
    MissingEdge(usize, usize),
    #[error("every correlation is below 1e-12 in magnitude; no edge to round")]
    DegenerateCorrelations,
    #[error("instance has a term on {0} qubits; only pairwise couplings are supported")]
    NotQuadratic(usize),
    #[error("exhaustive search is limited to {max} variables, got {n}")]
    TooManyVariables { n: usize, max: usize },
    #[error("n_cutoff must be at least 1")]
    ZeroCutoff,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Grid points per angle. The grid spans β ∈ [0, π/2) and γ ∈ [0, π)
    /// with the same (β, γ) on every layer.
    pub grid_points: usize,
    /// Number of best grid points refined with Nelder–Mead.
    pub n_refine: usize,
    /// Extra uniformly random starting points drawn from `seed`.
    pub random_starts: usize,
    pub seed: u64,
    /// Starting points tried in addition to the grid (warm starts).
    pub initial_guesses: Vec<QaoaParams>,
    pub nelder_mead: NelderMeadConfig,
    pub max_width: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_points: 8,
            n_refine: 3,
            random_starts: 4,
            seed: 0,
            initial_guesses: Vec::new(),
            nelder_mead: NelderMeadConfig::default(),
            max_width: DEFAULT_MAX_WIDTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    #[serde(rename = "params")]
    pub best_params: QaoaParams,
    #[serde(rename = "energy")]
    pub best_energy: f64,
    pub n_evaluations: usize,
    /// Every evaluated point in order.
    #[serde(skip)]
    pub trace: Vec<(QaoaParams, f64)>,
}

/// Maximizes the QAOA energy over the `2p` angles. Uses orbit-reduced
/// evaluation when `orbits` is given.
pub fn optimize_params(
    h: &Hamiltonian,
    orbits: Option<&OrbitPartition>,
    p: usize,
    cfg: &OptimizerConfig,
) -> Result<OptResult, OptimizeError> {
    if p == 0 {
        return Err(OptimizeError::ZeroDepth);
    }
    let evaluator = match orbits {
        Some(o) => Evaluator::reduced(h, o)?,
        None => Evaluator::full(h),
    }
    .with_max_width(cfg.max_width)
    .with_cache();

    let mut trace: Vec<(QaoaParams, f64)> = Vec::new();
    let mut objective = |x: &[f64]| -> Result<f64, OptimizeError> {
        let params = QaoaParams::from_flat(x).map_err(EnergyError::from)?;
        let e = evaluator.energy(&params)?.energy;
        trace.push((params, e));
        Ok(e)
    };

    let mut starts: Vec<(Vec<f64>, f64)> = Vec::new();
    let g = cfg.grid_points.max(1);
    for i in 0..g {
        for j in 0..g {
            let beta = FRAC_PI_2 * i as f64 / g as f64;
            let gamma = PI * j as f64 / g as f64;
            let x: Vec<f64> = std::iter::repeat_n(beta, p)
                .chain(std::iter::repeat_n(gamma, p))
                .collect();
            let e = objective(&x)?;
            starts.push((x, e));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.random_starts {
        let mut x: Vec<f64> = (0..p).map(|_| rng.gen_range(0.0..FRAC_PI_2)).collect();
        x.extend((0..p).map(|_| rng.gen_range(0.0..PI)));
        let e = objective(&x)?;
        starts.push((x, e));
    }
    for guess in cfg.initial_guesses.iter().filter(|q| q.p() == p) {
        let x = guess.to_flat();
        let e = objective(&x)?;
        starts.push((x, e));
    }

    // Stable sort keeps grid order among equal energies.
    starts.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (x0, _) in starts.iter().take(cfg.n_refine) {
        minimize(|x| objective(x).map(|e| -e), x0, &cfg.nelder_mead)?;
    }

    let (best_params, best_energy) = trace
        .iter()
        .fold(None::<&(QaoaParams, f64)>, |best, item| match best {
            Some(b) if b.1 >= item.1 => Some(b),
            _ => Some(item),
        })
        .cloned()
        .expect("grid has at least one point");
    Ok(OptResult {
        best_params,
        best_energy,
        n_evaluations: trace.len(),
        trace,
    })
}
