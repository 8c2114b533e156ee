//! QAOA energy as a sum of per-term cone simulations, either one simulation
//! per term (full mode) or one per term orbit weighted by the orbit size
//! (reduced mode).

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hamiltonian::Hamiltonian;
use crate::lightcone::Incidence;
use crate::simulator::{term_expectation_with, QaoaParams, SimError, DEFAULT_MAX_WIDTH};
use crate::symmetry::{OrbitPartition, SymmetryError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("orbit partition does not match the Hamiltonian: {0}")]
    Partition(#[from] SymmetryError),
    #[error("zero processed terms; cannot extrapolate")]
    NothingProcessed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyMode {
    Full,
    Reduced,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub rep: Vec<usize>,
    pub multiplicity: usize,
    pub coeff: f64,
    pub expectation: f64,
    pub cone_width: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub energy: f64,
    pub offset: f64,
    pub n_terms_evaluated: usize,
    pub per_class: Vec<ClassReport>,
    pub mode: EnergyMode,
}

impl EnergyReport {
    pub fn max_cone_width(&self) -> usize {
        self.per_class
            .iter()
            .map(|c| c.cone_width)
            .max()
            .unwrap_or(0)
    }
}

type CacheKey = (Vec<usize>, Vec<u64>);

/// Energy evaluator bound to one Hamiltonian and (optionally) one orbit
/// partition. Counts simulations and can cache per-representative
/// expectations across calls.
pub struct Evaluator<'a> {
    h: &'a Hamiltonian,
    classes: Vec<(Vec<usize>, usize, f64)>,
    /// Term indices covered by each class.
    members: Vec<Vec<usize>>,
    mode: EnergyMode,
    incidence: Incidence,
    max_width: usize,
    cache: Option<Mutex<HashMap<CacheKey, (f64, usize)>>>,
    simulations: AtomicUsize,
}

impl<'a> Evaluator<'a> {
    /// One class per term.
    pub fn full(h: &'a Hamiltonian) -> Self {
        let classes = h
            .terms()
            .iter()
            .map(|t| (t.support.clone(), 1, t.coeff))
            .collect();
        let members = (0..h.terms().len()).map(|k| vec![k]).collect();
        Self::build(h, classes, members, EnergyMode::Full)
    }

    /// One class per orbit; the partition is checked against `h` first.
    pub fn reduced(h: &'a Hamiltonian, orbits: &OrbitPartition) -> Result<Self, EnergyError> {
        orbits.validate_against(h)?;
        let classes = orbits
            .classes()
            .iter()
            .map(|c| (c.representative.clone(), c.multiplicity(), c.coeff))
            .collect();
        let members = orbits
            .classes()
            .iter()
            .map(|c| {
                c.members
                    .iter()
                    .map(|m| h.term_index(m).expect("validated"))
                    .collect()
            })
            .collect();
        Ok(Self::build(h, classes, members, EnergyMode::Reduced))
    }

    fn build(
        h: &'a Hamiltonian,
        classes: Vec<(Vec<usize>, usize, f64)>,
        members: Vec<Vec<usize>>,
        mode: EnergyMode,
    ) -> Self {
        Self {
            h,
            classes,
            members,
            mode,
            incidence: Incidence::new(h),
            max_width: DEFAULT_MAX_WIDTH,
            cache: None,
            simulations: AtomicUsize::new(0),
        }
    }

    pub fn with_max_width(mut self, max_width: usize) -> Self {
        self.max_width = max_width;
        self
    }

    /// Remember expectations keyed by (representative, exact angles).
    pub fn with_cache(mut self) -> Self {
        self.cache = Some(Mutex::new(HashMap::new()));
        self
    }

    pub fn mode(&self) -> EnergyMode {
        self.mode
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    /// Number of cone simulations run so far (cache hits excluded).
    pub fn simulations(&self) -> usize {
        self.simulations.load(Ordering::Relaxed)
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        self.h
    }

    /// Expectation and cone width of one class representative.
    fn class_value(
        &self,
        support: &[usize],
        params: &QaoaParams,
    ) -> Result<(f64, usize), SimError> {
        let key = || {
            (
                support.to_vec(),
                params.to_flat().iter().map(|a| a.to_bits()).collect(),
            )
        };
        if let Some(cache) = &self.cache {
            if let Some(&hit) = cache.lock().expect("cache lock").get(&key()) {
                return Ok(hit);
            }
        }
        let value =
            term_expectation_with(self.h, &self.incidence, support, params, self.max_width)?;
        self.simulations.fetch_add(1, Ordering::Relaxed);
        if let Some(cache) = &self.cache {
            cache.lock().expect("cache lock").insert(key(), value);
        }
        Ok(value)
    }

    /// Per-class `(expectation, cone width)`, in class order.
    pub fn class_values(&self, params: &QaoaParams) -> Result<Vec<(f64, usize)>, EnergyError> {
        #[cfg(feature = "parallel")]
        let values: Vec<Result<(f64, usize), SimError>> = {
            use rayon::prelude::*;
            self.classes
                .par_iter()
                .map(|(s, _, _)| self.class_value(s, params))
                .collect()
        };
        #[cfg(not(feature = "parallel"))]
        let values: Vec<Result<(f64, usize), SimError>> = self
            .classes
            .iter()
            .map(|(s, _, _)| self.class_value(s, params))
            .collect();
        values
            .into_iter()
            .map(|v| v.map_err(EnergyError::from))
            .collect()
    }

    pub fn energy(&self, params: &QaoaParams) -> Result<EnergyReport, EnergyError> {
        let values = self.class_values(params)?;
        let mut energy = self.h.offset();
        let mut per_class = Vec::with_capacity(values.len());
        for ((rep, mult, coeff), (expectation, cone_width)) in self.classes.iter().zip(values) {
            energy += *mult as f64 * coeff * expectation;
            per_class.push(ClassReport {
                rep: rep.clone(),
                multiplicity: *mult,
                coeff: *coeff,
                expectation,
                cone_width,
            });
        }
        Ok(EnergyReport {
            energy,
            offset: self.h.offset(),
            n_terms_evaluated: self.classes.len(),
            per_class,
            mode: self.mode,
        })
    }

    /// Expectation of every term of the Hamiltonian, in term order, using
    /// one simulation per class and broadcasting within classes.
    pub fn term_values(&self, params: &QaoaParams) -> Result<Vec<f64>, EnergyError> {
        let values = self.class_values(params)?;
        let mut out = vec![f64::NAN; self.h.terms().len()];
        for (members, (z, _)) in self.members.iter().zip(values) {
            for &k in members {
                out[k] = z;
            }
        }
        Ok(out)
    }
}

/// `offset + Σ_terms c_S ⟨Z_S⟩`, one cone simulation per term.
pub fn full_energy(h: &Hamiltonian, params: &QaoaParams) -> Result<EnergyReport, EnergyError> {
    Evaluator::full(h).energy(params)
}

/// `offset + Σ_classes |class| c ⟨Z_rep⟩`, one cone simulation per orbit.
pub fn reduced_energy(
    h: &Hamiltonian,
    orbits: &OrbitPartition,
    params: &QaoaParams,
) -> Result<EnergyReport, EnergyError> {
    Evaluator::reduced(h, orbits)?.energy(params)
}

/// Linear extrapolation of a partial run to all terms.
pub fn estimate_full_time(
    t_actual: f64,
    n_processed: usize,
    n_total_terms: usize,
) -> Result<f64, EnergyError> {
    if n_processed == 0 {
        return Err(EnergyError::NothingProcessed);
    }
    Ok(t_actual * n_total_terms as f64 / n_processed as f64)
}
