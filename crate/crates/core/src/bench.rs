//! Speedup accounting: symmetry time, full and reduced evaluation time, and
//! the simulation counts behind them.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::energy::{EnergyError, Evaluator};
use crate::graphio::Graph;
use crate::hamiltonian::Problem;
use crate::simulator::{QaoaParams, DEFAULT_MAX_WIDTH};
use crate::symmetry::{instance_symmetry, term_orbits, SymmetryConfig, SymmetryError};

/// Largest tolerated `|full − reduced|` before a report is refused.
pub const ENERGY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error("full energy {full} and reduced energy {reduced} differ by more than 1e-9")]
    EnergyMismatch { full: f64, reduced: f64 },
    #[error("n_evals must be at least 1")]
    ZeroEvals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub graph_name: String,
    pub n_vertices: usize,
    pub n_edges: usize,
    pub n_orb: usize,
    pub t_aut: f64,
    pub t_s: f64,
    pub t_acc: f64,
    pub speedup: f64,
    pub p: usize,
    pub reduction_ratio: f64,
    pub simulations_full: usize,
    pub simulations_reduced: usize,
    pub energy: f64,
    /// Worker threads used for both timed evaluations.
    pub threads: usize,
    pub symmetry_timed_out: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub problem: Problem,
    pub symmetry: SymmetryConfig,
    pub max_width: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            problem: Problem::MaxCut,
            symmetry: SymmetryConfig::default(),
            max_width: DEFAULT_MAX_WIDTH,
        }
    }
}

/// `S = t_s / (t_aut + t_acc)`.
pub fn speedup(t_s: f64, t_aut: f64, t_acc: f64) -> f64 {
    t_s / (t_aut + t_acc)
}

/// Speedup when the symmetry cost is shared by `n_evals` energy evaluations.
pub fn amortized_speedup(report: &BenchReport, n_evals: usize) -> Result<f64, BenchError> {
    if n_evals == 0 {
        return Err(BenchError::ZeroEvals);
    }
    let n = n_evals as f64;
    Ok(n * report.t_s / (report.t_aut + n * report.t_acc))
}

fn worker_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

pub fn run_bench(
    name: &str,
    g: &Graph,
    params: &QaoaParams,
    cfg: &BenchConfig,
) -> Result<BenchReport, BenchError> {
    let h = cfg.problem.build(g);

    let start = Instant::now();
    let sym = instance_symmetry(g, &cfg.symmetry);
    let orbits = term_orbits(&sym.generators, &h)?;
    let t_aut = start.elapsed().as_secs_f64();

    Evaluator::full(&h)
        .with_max_width(cfg.max_width)
        .energy(params)?;

    let full = Evaluator::full(&h).with_max_width(cfg.max_width);
    let start = Instant::now();
    let e_full = full.energy(params)?.energy;
    let t_s = start.elapsed().as_secs_f64();

    let reduced = Evaluator::reduced(&h, &orbits)?.with_max_width(cfg.max_width);
    let start = Instant::now();
    let e_reduced = reduced.energy(params)?.energy;
    let t_acc = start.elapsed().as_secs_f64();

    if (e_full - e_reduced).abs() > ENERGY_TOLERANCE {
        return Err(BenchError::EnergyMismatch {
            full: e_full,
            reduced: e_reduced,
        });
    }

    let n_orb = orbits.len();
    let n_terms = h.terms().len();
    Ok(BenchReport {
        graph_name: name.to_string(),
        n_vertices: g.n_vertices(),
        n_edges: g.n_edges(),
        n_orb,
        t_aut,
        t_s,
        t_acc,
        speedup: speedup(t_s, t_aut, t_acc),
        p: params.p(),
        reduction_ratio: if n_orb == 0 {
            1.0
        } else {
            n_terms as f64 / n_orb as f64
        },
        simulations_full: full.simulations(),
        simulations_reduced: reduced.simulations(),
        energy: e_full,
        threads: worker_threads(),
        symmetry_timed_out: sym.timed_out,
    })
}

pub const CSV_HEADER: &str = "Name,|E|,|V|,N_orb,t_aut,t_s,t_acc,S";

pub fn to_csv(reports: &[BenchReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6},{:.6},{:.6},{:.6}",
            r.graph_name, r.n_edges, r.n_vertices, r.n_orb, r.t_aut, r.t_s, r.t_acc, r.speedup
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphio::families;

    fn report(t_aut: f64, t_s: f64, t_acc: f64) -> BenchReport {
        BenchReport {
            graph_name: "x".into(),
            n_vertices: 0,
            n_edges: 0,
            n_orb: 0,
            t_aut,
            t_s,
            t_acc,
            speedup: speedup(t_s, t_aut, t_acc),
            p: 1,
            reduction_ratio: 1.0,
            simulations_full: 0,
            simulations_reduced: 0,
            energy: 0.0,
            threads: 1,
            symmetry_timed_out: false,
        }
    }

    #[test]
    fn speedup_formula() {
        assert!((speedup(9.20, 9759.90, 4.76) - 0.000942).abs() < 1e-6);
        assert_eq!(speedup(3.0, 0.0, 3.0), 1.0);
        let r = report(9759.90, 9.20, 4.76);
        assert_eq!(amortized_speedup(&r, 1).unwrap(), r.speedup);
        assert!((amortized_speedup(&r, 5000).unwrap() - 1.37).abs() < 0.01);
        assert!((amortized_speedup(&r, 1_000_000_000).unwrap() - 9.20 / 4.76).abs() < 1e-3);
        assert_eq!(amortized_speedup(&r, 0), Err(BenchError::ZeroEvals));
    }

    #[test]
    fn torus_collapses_to_one_orbit() {
        let g = families::torus(&[4, 4]);
        let params = QaoaParams::new(vec![0.3], vec![0.6]).unwrap();
        let r = run_bench("grid-w-2-4", &g, &params, &BenchConfig::default()).unwrap();
        assert_eq!((r.n_edges, r.n_orb), (32, 1));
        assert_eq!(r.reduction_ratio, 32.0);
        assert_eq!((r.simulations_full, r.simulations_reduced), (32, 1));
        assert!((r.speedup * (r.t_aut + r.t_acc) - r.t_s).abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let csv = to_csv(&[report(1.0, 2.0, 1.0)]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(
            lines.next(),
            Some("x,0,0,0,1.000000,2.000000,1.000000,1.000000")
        );
    }
}
