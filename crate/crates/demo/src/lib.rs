//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes an edge list in the CLI text format and returns JSON.
//! The plain `*_json` functions hold the logic so they can be tested natively.

use std::f64::consts::{FRAC_PI_2, PI};

use qaoa_symmetry::energy::Evaluator;
use qaoa_symmetry::graphio::{families, parse_edge_list, Graph};
use qaoa_symmetry::hamiltonian::build_maxcut;
use qaoa_symmetry::optimize::{rqaoa_run, OptimizerConfig, RqaoaConfig};
use qaoa_symmetry::symmetry::{term_orbits, weighted_automorphisms, SymmetryConfig};
use qaoa_symmetry::QaoaParams;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Cones wider than this are refused; keeps the page responsive.
const DEMO_MAX_WIDTH: usize = 18;

#[derive(Serialize)]
struct OrbitView {
    n: usize,
    /// `[u, v, weight, orbit]` per edge.
    edges: Vec<(usize, usize, f64, usize)>,
    n_orb: usize,
    generators: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct Landscape {
    steps: usize,
    /// Row-major over β (rows) and γ (columns).
    values: Vec<f64>,
    best: (f64, f64, f64),
    simulations_full: usize,
    simulations_reduced: usize,
}

fn load(text: &str, weighted: bool) -> Result<Graph, String> {
    let g = parse_edge_list(text).map_err(|e| e.to_string())?;
    Ok(if weighted { g } else { g.unit_weights() })
}

struct Labelled {
    /// Orbit index of each edge, in edge order.
    label: Vec<usize>,
    n_orb: usize,
    generators: Vec<Vec<usize>>,
}

fn orbit_labels(g: &Graph) -> Result<Labelled, String> {
    let h = build_maxcut(g);
    let gens = weighted_automorphisms(g, None).map_err(|e| e.to_string())?;
    let orbits = term_orbits(&gens, &h).map_err(|e| e.to_string())?;
    let mut label = vec![0; g.n_edges()];
    for (k, class) in orbits.classes().iter().enumerate() {
        for m in &class.members {
            let idx = g
                .edges()
                .iter()
                .position(|e| [e.u, e.v] == m[..])
                .expect("edge term");
            label[idx] = k;
        }
    }
    let generators = gens
        .generators
        .iter()
        .map(|p| p.images().to_vec())
        .collect();
    Ok(Labelled {
        label,
        n_orb: orbits.len(),
        generators,
    })
}

pub fn orbits_json(edge_list: &str, weighted: bool) -> Result<String, String> {
    let g = load(edge_list, weighted)?;
    let Labelled {
        label,
        n_orb,
        generators,
    } = orbit_labels(&g)?;
    let edges = g
        .edges()
        .iter()
        .zip(label)
        .map(|(e, k)| (e.u, e.v, e.w, k))
        .collect();
    let view = OrbitView {
        n: g.n_vertices(),
        edges,
        n_orb,
        generators,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

pub fn landscape_json(edge_list: &str, weighted: bool, steps: usize) -> Result<String, String> {
    let g = load(edge_list, weighted)?;
    let h = build_maxcut(&g);
    let gens = weighted_automorphisms(&g, None).map_err(|e| e.to_string())?;
    let orbits = term_orbits(&gens, &h).map_err(|e| e.to_string())?;
    let eval = Evaluator::reduced(&h, &orbits)
        .map_err(|e| e.to_string())?
        .with_max_width(DEMO_MAX_WIDTH);
    let steps = steps.clamp(2, 128);
    let mut values = Vec::with_capacity(steps * steps);
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..steps {
        for j in 0..steps {
            let beta = FRAC_PI_2 * i as f64 / steps as f64;
            let gamma = PI * j as f64 / steps as f64;
            let params = QaoaParams::new(vec![beta], vec![gamma]).map_err(|e| e.to_string())?;
            let e = eval.energy(&params).map_err(|e| e.to_string())?.energy;
            if e > best.2 {
                best = (beta, gamma, e);
            }
            values.push(e);
        }
    }
    let land = Landscape {
        steps,
        values,
        best,
        simulations_full: h.terms().len() * steps * steps,
        simulations_reduced: eval.simulations(),
    };
    serde_json::to_string(&land).map_err(|e| e.to_string())
}

pub fn rqaoa_json(
    edge_list: &str,
    weighted: bool,
    cutoff: usize,
    seed: u64,
) -> Result<String, String> {
    let g = load(edge_list, weighted)?;
    let h = build_maxcut(&g);
    let cfg = RqaoaConfig {
        n_cutoff: cutoff.max(1),
        optimizer: OptimizerConfig {
            seed,
            max_width: DEMO_MAX_WIDTH,
            ..Default::default()
        },
        symmetry: SymmetryConfig {
            timeout: None,
            use_partial_on_timeout: false,
        },
        allow_degenerate: true,
        ..Default::default()
    };
    let result = rqaoa_run(&h, &cfg).map_err(|e| e.to_string())?;
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

pub fn preset_edge_list(name: &str) -> Option<String> {
    let g = match name {
        "triangle" => families::cycle(3),
        "c8" => families::cycle(8),
        "k5" => families::complete(5),
        "petersen" => families::petersen(),
        "star" => families::star(6),
        "k33" => families::complete_bipartite(3, 3),
        "torus" => families::torus(&[3, 4]),
        "weighted-c4" => {
            Graph::new(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (0, 3, 2.0)]).ok()?
        }
        _ => return None,
    };
    Some(g.to_edge_list())
}

#[wasm_bindgen]
pub fn orbits(edge_list: &str, weighted: bool) -> Result<String, JsError> {
    orbits_json(edge_list, weighted).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn energy_landscape(edge_list: &str, weighted: bool, steps: usize) -> Result<String, JsError> {
    landscape_json(edge_list, weighted, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn rqaoa(edge_list: &str, weighted: bool, cutoff: usize, seed: u64) -> Result<String, JsError> {
    rqaoa_json(edge_list, weighted, cutoff, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn preset(name: &str) -> Option<String> {
    preset_edge_list(name)
}
