//! Nelder–Mead simplex minimization.

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadConfig {
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
    pub max_evals: usize,
    /// Stop when the spread of simplex values falls below this.
    pub f_tol: f64,
    /// ...and the simplex diameter falls below this.
    pub x_tol: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            max_evals: 400,
            f_tol: 1e-10,
            x_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
}

/// Minimizes `f` from `x0`. Errors from `f` abort the search.
pub fn minimize<E>(
    mut f: impl FnMut(&[f64]) -> Result<f64, E>,
    x0: &[f64],
    cfg: &NelderMeadConfig,
) -> Result<Minimum, E> {
    let d = x0.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| -> Result<f64, E> {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    let f0 = eval(x0, &mut evals)?;
    simplex.push((x0.to_vec(), f0));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += cfg.initial_step;
        let fx = eval(&x, &mut evals)?;
        simplex.push((x, fx));
    }

    while evals < cfg.max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[d].1);
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (worst - best).abs() <= cfg.f_tol && diameter <= cfg.x_tol {
            break;
        }

        let centroid: Vec<f64> = (0..d)
            .map(|k| simplex[..d].iter().map(|(x, _)| x[k]).sum::<f64>() / d as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[d].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(1.0);
        let fr = eval(&xr, &mut evals)?;
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = eval(&xe, &mut evals)?;
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[d].1 {
                let xc = along(0.5);
                let fc = eval(&xc, &mut evals)?;
                (xc, fc)
            } else {
                let xc = along(-0.5);
                let fc = eval(&xc, &mut evals)?;
                (xc, fc)
            };
            if fc < fr.min(simplex[d].1) {
                simplex[d] = (xc, fc);
            } else {
                let x_best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let xs: Vec<f64> = x_best
                        .iter()
                        .zip(&vertex.0)
                        .map(|(b, v)| b + 0.5 * (v - b))
                        .collect();
                    let fs = eval(&xs, &mut evals)?;
                    *vertex = (xs, fs);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = simplex.swap_remove(0);
    Ok(Minimum { x, f, evals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| -> Result<f64, Infallible> {
            Ok((x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2))
        };
        let m = minimize(f, &[0.0, 0.0], &NelderMeadConfig::default()).unwrap();
        assert!(
            (m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] + 0.5).abs() < 1e-4,
            "{m:?}"
        );
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| -> Result<f64, Infallible> {
            Ok((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2))
        };
        let cfg = NelderMeadConfig {
            max_evals: 5000,
            ..Default::default()
        };
        let m = minimize(f, &[-1.2, 1.0], &cfg).unwrap();
        assert!(m.f < 1e-8, "{m:?}");
    }

    #[test]
    fn respects_budget_and_errors() {
        let f = |_: &[f64]| -> Result<f64, Infallible> { Ok(1.0) };
        let cfg = NelderMeadConfig {
            max_evals: 10,
            f_tol: -1.0,
            ..Default::default()
        };
        let m = minimize(f, &[0.0, 0.0, 0.0], &cfg).unwrap();
        assert!(m.evals <= 10 + 4);

        let failing = |x: &[f64]| if x[0] > 0.05 { Err("boom") } else { Ok(0.0) };
        assert_eq!(
            minimize(failing, &[0.0], &NelderMeadConfig::default()),
            Err("boom")
        );
    }
}
