//! Recursive QAOA: round the strongest two-point correlation into a
//! constraint `z_j = ±z_i`, substitute it into the objective, repeat until
//! the instance is small enough to solve exhaustively.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{optimize_params, OptimizeError, OptimizerConfig};
use crate::energy::Evaluator;
use crate::graphio::Graph;
use crate::hamiltonian::{Hamiltonian, Term};
use crate::simulator::QaoaParams;
use crate::symmetry::{instance_symmetry, term_orbits, OrbitPartition, SymmetryConfig};

pub const BRUTE_FORCE_MAX_VARIABLES: usize = 24;

const DEGENERATE_CORRELATION: f64 = 1e-12;

/// `f(z) = offset + Σ J_ij z_i z_j` over spins `z ∈ {±1}^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingInstance {
    pub n: usize,
    pub offset: f64,
    /// Couplings keyed by `(i, j)` with `i < j`.
    pub couplings: BTreeMap<(usize, usize), f64>,
}

impl IsingInstance {
    pub fn from_hamiltonian(h: &Hamiltonian) -> Result<Self, OptimizeError> {
        let mut couplings = BTreeMap::new();
        for t in h.terms() {
            match t.support[..] {
                [i, j] => {
                    couplings.insert((i, j), t.coeff);
                }
                _ => return Err(OptimizeError::NotQuadratic(t.support.len())),
            }
        }
        Ok(Self {
            n: h.n_qubits(),
            offset: h.offset(),
            couplings,
        })
    }

    pub fn to_hamiltonian(&self) -> Hamiltonian {
        let terms = self
            .couplings
            .iter()
            .map(|(&(i, j), &c)| Term::new(vec![i, j], c))
            .collect();
        Hamiltonian::new(self.n, terms, self.offset).expect("couplings are valid terms")
    }

    /// Couplings as edge weights, for symmetry detection.
    pub fn to_graph(&self) -> Graph {
        Graph::new(self.n, self.couplings.iter().map(|(&(i, j), &c)| (i, j, c)))
            .expect("couplings form a simple graph")
    }

    pub fn eval_spins(&self, z: &[i8]) -> f64 {
        self.offset
            + self
                .couplings
                .iter()
                .map(|(&(i, j), &c)| c * f64::from(z[i]) * f64::from(z[j]))
                .sum::<f64>()
    }
}

/// One rounding decision, in the labels of the original instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliminationStep {
    /// `(i, j)`; `j` is eliminated via `z_j = sign · z_i`.
    pub edge: (usize, usize),
    pub sign: i8,
    pub correlation: f64,
}

/// How one substitution changed the instance, in the labels of the instance
/// it was applied to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubstitutionRecord {
    pub anchor: usize,
    pub eliminated: usize,
    pub sign: i8,
    /// Constant `sign · J_ij` moved into the offset.
    pub constant: f64,
    /// Old index of each variable of the reduced instance.
    pub kept: Vec<usize>,
}

impl SubstitutionRecord {
    /// Expands an assignment of the reduced instance to the instance before
    /// the substitution.
    pub fn lift(&self, reduced: &[i8]) -> Vec<i8> {
        let mut z = vec![0i8; self.kept.len() + 1];
        for (new, &old) in self.kept.iter().enumerate() {
            z[old] = reduced[new];
        }
        z[self.eliminated] = self.sign * z[self.anchor];
        z
    }
}

/// Substitutes `z_j := sign · z_i` for the edge `(i, j)` (`j` the larger
/// index), merging couplings and reindexing densely.
pub fn eliminate_variable(
    inst: &IsingInstance,
    edge: (usize, usize),
    sign: i8,
) -> Result<(IsingInstance, SubstitutionRecord), OptimizeError> {
    let (i, j) = (edge.0.min(edge.1), edge.0.max(edge.1));
    let Some(&j_ij) = inst.couplings.get(&(i, j)) else {
        return Err(OptimizeError::MissingEdge(i, j));
    };
    let s = f64::from(sign);
    let constant = s * j_ij;

    let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (&(a, b), &c) in &inst.couplings {
        if (a, b) == (i, j) {
            continue;
        }
        let (a, b, c) = match (a == j, b == j) {
            (true, _) => (i, b, s * c),
            (_, true) => (a, i, s * c),
            _ => (a, b, c),
        };
        *merged.entry((a.min(b), a.max(b))).or_insert(0.0) += c;
    }

    let kept: Vec<usize> = (0..inst.n).filter(|&v| v != j).collect();
    let new_index = |v: usize| if v > j { v - 1 } else { v };
    let couplings = merged
        .into_iter()
        .filter(|&(_, c)| c != 0.0)
        .map(|((a, b), c)| ((new_index(a), new_index(b)), c))
        .collect();
    let reduced = IsingInstance {
        n: inst.n - 1,
        offset: inst.offset + constant,
        couplings,
    };
    Ok((
        reduced,
        SubstitutionRecord {
            anchor: i,
            eliminated: j,
            sign,
            constant,
            kept,
        },
    ))
}

/// An edge `(i, j)` with its two-point correlation `⟨Z_i Z_j⟩`.
pub type Correlation = ((usize, usize), f64);

/// `⟨Z_i Z_j⟩` for every pairwise term, one simulation per orbit.
pub fn rqaoa_correlations(
    h: &Hamiltonian,
    orbits: Option<&OrbitPartition>,
    params: &QaoaParams,
    max_width: usize,
) -> Result<Vec<Correlation>, OptimizeError> {
    if let Some(t) = h.terms().iter().find(|t| t.support.len() != 2) {
        return Err(OptimizeError::NotQuadratic(t.support.len()));
    }
    let evaluator = match orbits {
        Some(o) => Evaluator::reduced(h, o)?,
        None => Evaluator::full(h),
    }
    .with_max_width(max_width);
    let values = evaluator.term_values(params)?;
    Ok(h.terms()
        .iter()
        .zip(values)
        .map(|(t, z)| ((t.support[0], t.support[1]), z))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RqaoaConfig {
    pub p: usize,
    /// Stop eliminating once at most this many variables remain.
    pub n_cutoff: usize,
    pub optimizer: OptimizerConfig,
    pub symmetry: SymmetryConfig,
    /// Evaluate with orbit reduction (symmetries recomputed every round).
    pub use_symmetry: bool,
    /// When every correlation vanishes, round the lexicographically first
    /// edge with sign +1 instead of failing.
    pub allow_degenerate: bool,
    /// Seed each round's optimizer with the previous round's angles.
    pub warm_start: bool,
}

impl Default for RqaoaConfig {
    fn default() -> Self {
        Self {
            p: 1,
            n_cutoff: 2,
            optimizer: OptimizerConfig::default(),
            symmetry: SymmetryConfig::default(),
            use_symmetry: true,
            allow_degenerate: false,
            warm_start: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RqaoaResult {
    pub steps: Vec<EliminationStep>,
    /// Bits of the original variables (bit 0 is `z = +1`).
    pub assignment: Vec<u8>,
    pub objective: f64,
    /// Orbit count `M` of the instance at each round.
    pub orbits_per_round: Vec<usize>,
}

impl RqaoaResult {
    /// True when every recorded constraint `z_j = sign · z_i` holds.
    pub fn satisfies_steps(&self) -> bool {
        let z = |v: usize| if self.assignment[v] == 0 { 1i8 } else { -1 };
        self.steps
            .iter()
            .all(|s| z(s.edge.1) == s.sign * z(s.edge.0))
    }
}

pub fn rqaoa_run(h: &Hamiltonian, cfg: &RqaoaConfig) -> Result<RqaoaResult, OptimizeError> {
    if cfg.n_cutoff == 0 {
        return Err(OptimizeError::ZeroCutoff);
    }
    if cfg.p == 0 {
        return Err(OptimizeError::ZeroDepth);
    }
    let mut inst = IsingInstance::from_hamiltonian(h)?;
    let mut original: Vec<usize> = (0..inst.n).collect();
    let mut steps = Vec::new();
    let mut orbits_per_round = Vec::new();
    let mut optimizer = cfg.optimizer.clone();

    while inst.n > cfg.n_cutoff && !inst.couplings.is_empty() {
        let current = inst.to_hamiltonian();
        let orbits = if cfg.use_symmetry {
            let sym = instance_symmetry(&inst.to_graph(), &cfg.symmetry);
            Some(term_orbits(&sym.generators, &current)?)
        } else {
            None
        };
        orbits_per_round.push(
            orbits
                .as_ref()
                .map_or(current.terms().len(), OrbitPartition::len),
        );

        let opt = optimize_params(&current, orbits.as_ref(), cfg.p, &optimizer)?;
        if cfg.warm_start {
            optimizer.initial_guesses = vec![opt.best_params.clone()];
        }
        let correlations = rqaoa_correlations(
            &current,
            orbits.as_ref(),
            &opt.best_params,
            optimizer.max_width,
        )?;

        let strongest = correlations
            .iter()
            .map(|(_, c)| c.abs())
            .fold(0.0, f64::max);
        let (edge, correlation, sign) = if strongest < DEGENERATE_CORRELATION {
            if !cfg.allow_degenerate {
                return Err(OptimizeError::DegenerateCorrelations);
            }
            let (edge, c) = *correlations
                .iter()
                .min_by_key(|(e, _)| *e)
                .expect("non-empty");
            (edge, c, 1)
        } else {
            let (edge, c) = *correlations
                .iter()
                .filter(|(_, c)| c.abs() >= strongest - DEGENERATE_CORRELATION)
                .min_by_key(|(e, _)| *e)
                .expect("the maximum is attained");
            (edge, c, if c > 0.0 { 1 } else { -1 })
        };

        let (reduced, record) = eliminate_variable(&inst, edge, sign)?;
        steps.push(EliminationStep {
            edge: (original[record.anchor], original[record.eliminated]),
            sign,
            correlation,
        });
        original.remove(record.eliminated);
        inst = reduced;
    }

    let remnant = if inst.couplings.is_empty() {
        vec![0u8; inst.n]
    } else {
        brute_force_opt(&inst.to_hamiltonian())?.0
    };

    let mut z: Vec<i8> = vec![0; h.n_qubits()];
    for (k, &orig) in original.iter().enumerate() {
        z[orig] = if remnant[k] == 0 { 1 } else { -1 };
    }
    for step in steps.iter().rev() {
        z[step.edge.1] = step.sign * z[step.edge.0];
    }
    let assignment: Vec<u8> = z.iter().map(|&s| u8::from(s < 0)).collect();
    let objective = h
        .eval_classical(&assignment)
        .expect("assignment covers every variable");
    Ok(RqaoaResult {
        steps,
        assignment,
        objective,
        orbits_per_round,
    })
}

/// Exhaustive maximization of `f(x)`; ties go to the lexicographically
/// smallest bitstring (`x_0` most significant).
pub fn brute_force_opt(h: &Hamiltonian) -> Result<(Vec<u8>, f64), OptimizeError> {
    let n = h.n_qubits();
    if n > BRUTE_FORCE_MAX_VARIABLES {
        return Err(OptimizeError::TooManyVariables {
            n,
            max: BRUTE_FORCE_MAX_VARIABLES,
        });
    }
    let masks: Vec<(u32, f64)> = h
        .terms()
        .iter()
        .map(|t| {
            (
                t.support.iter().fold(0u32, |m, &q| m | (1 << (n - 1 - q))),
                t.coeff,
            )
        })
        .collect();
    let mut best = (0u32, f64::NEG_INFINITY);
    for k in 0..(1u32 << n) {
        let v = h.offset()
            + masks
                .iter()
                .map(|&(m, c)| if (k & m).count_ones() % 2 == 1 { -c } else { c })
                .sum::<f64>();
        if v > best.1 + 1e-9 {
            best = (k, v);
        }
    }
    let bits = (0..n)
        .map(|j| ((best.0 >> (n - 1 - j)) & 1) as u8)
        .collect();
    Ok((bits, best.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphio::families;
    use crate::hamiltonian::{build_ising, build_maxcut};

    fn ising(n: usize, edges: &[(usize, usize, f64)]) -> IsingInstance {
        IsingInstance::from_hamiltonian(&build_ising(
            &Graph::new(n, edges.iter().copied()).unwrap(),
        ))
        .unwrap()
    }

    #[test]
    fn brute_force_values() {
        assert_eq!(
            brute_force_opt(&build_maxcut(&families::cycle(3))).unwrap(),
            (vec![0, 0, 1], 2.0)
        );
        assert_eq!(
            brute_force_opt(&build_maxcut(&families::cycle(5)))
                .unwrap()
                .1,
            4.0
        );
        assert_eq!(
            brute_force_opt(&build_maxcut(&families::complete(4))).unwrap(),
            (vec![0, 0, 1, 1], 4.0)
        );
        assert!(matches!(
            brute_force_opt(&build_maxcut(&families::cycle(25))),
            Err(OptimizeError::TooManyVariables { .. })
        ));
    }

    #[test]
    fn eliminate_path() {
        let inst = ising(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let (red, rec) = eliminate_variable(&inst, (0, 1), -1).unwrap();
        assert_eq!(red.n, 2);
        assert_eq!(red.offset, -1.0);
        assert_eq!(red.couplings, BTreeMap::from([((0, 1), -1.0)]));
        assert_eq!(rec.kept, vec![0, 2]);
    }

    #[test]
    fn eliminate_triangle_cancels() {
        let inst = ising(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        let (red, _) = eliminate_variable(&inst, (0, 2), -1).unwrap();
        assert_eq!((red.n, red.offset), (2, -1.0));
        assert!(red.couplings.is_empty());
        assert_eq!(
            eliminate_variable(&red, (0, 1), 1),
            Err(OptimizeError::MissingEdge(0, 1))
        );
    }

    #[test]
    fn lift_preserves_objective() {
        let inst = ising(
            4,
            &[
                (0, 1, 1.5),
                (1, 2, -1.0),
                (2, 3, 0.5),
                (0, 3, 2.0),
                (1, 3, -0.25),
            ],
        );
        for (edge, sign) in [((1, 3), 1), ((0, 1), -1), ((2, 3), -1)] {
            let (red, rec) = eliminate_variable(&inst, edge, sign).unwrap();
            for x in 0..(1 << red.n) {
                let zr: Vec<i8> = (0..red.n)
                    .map(|q| if (x >> q) & 1 == 0 { 1 } else { -1 })
                    .collect();
                let full = rec.lift(&zr);
                assert!((red.eval_spins(&zr) - inst.eval_spins(&full)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_edge_run() {
        let h = build_maxcut(&families::path(2));
        let cfg = RqaoaConfig {
            n_cutoff: 1,
            ..Default::default()
        };
        let r = rqaoa_run(&h, &cfg).unwrap();
        assert_eq!(r.objective, 1.0);
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.steps[0].sign, -1);
        assert!(r.satisfies_steps());
    }

    #[test]
    fn degenerate_correlations_fail_loudly() {
        let h = build_maxcut(&families::cycle(4));
        let zero = QaoaParams::new(vec![0.3], vec![0.0]).unwrap();
        let c = rqaoa_correlations(&h, None, &zero, 26).unwrap();
        assert!(c.iter().all(|(_, v)| v.abs() < 1e-12));
        // An optimizer that only ever sees γ = 0.
        let cfg = RqaoaConfig {
            optimizer: OptimizerConfig {
                grid_points: 1,
                n_refine: 0,
                random_starts: 0,
                ..Default::default()
            },
            ..Default::default()
        };
        assert_eq!(
            rqaoa_run(&h, &cfg),
            Err(OptimizeError::DegenerateCorrelations)
        );
        let lenient = RqaoaConfig {
            allow_degenerate: true,
            ..cfg
        };
        let r = rqaoa_run(&h, &lenient).unwrap();
        assert!(r.satisfies_steps());
        assert!(r.steps.iter().all(|s| s.sign == 1));
    }

    #[test]
    fn triangle_correlations_are_equal() {
        let h = build_maxcut(&families::cycle(3));
        let params = QaoaParams::new(vec![0.37], vec![0.91]).unwrap();
        let c = rqaoa_correlations(&h, None, &params, 26).unwrap();
        assert!(c.iter().all(|(_, v)| (v - c[0].1).abs() < 1e-12));
    }
}
